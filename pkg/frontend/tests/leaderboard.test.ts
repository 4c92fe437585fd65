import { describe, expect, it } from "vitest";
import { computeLeaderboard, renderLeaderboard } from "../src/leaderboard";
import { makeRecord } from "./fixtures";

describe("computeLeaderboard", () => {
  it("counts per handle, sorted by count then handle", () => {
    const records = [
      makeRecord({ message_id: "1", sender_handle: "bob" }),
      makeRecord({ message_id: "2", sender_handle: "alice" }),
      makeRecord({ message_id: "3", sender_handle: "bob" }),
      makeRecord({ message_id: "4", sender_handle: "carol" }),
      makeRecord({ message_id: "5", sender_handle: "alice" }),
    ];
    expect(computeLeaderboard(records)).toEqual([
      { sender_handle: "alice", count: 2 },
      { sender_handle: "bob", count: 2 },
      { sender_handle: "carol", count: 1 },
    ]);
  });

  it("is empty for no records", () => {
    expect(computeLeaderboard([])).toEqual([]);
  });
});

describe("renderLeaderboard", () => {
  it("renders one ranked list item per entry", () => {
    const target = document.createElement("aside");
    renderLeaderboard(
      [
        { sender_handle: "alice", count: 2 },
        { sender_handle: "bob", count: 1 },
      ],
      target,
    );
    const items = [...target.querySelectorAll("li")].map((li) => li.textContent);
    expect(items).toEqual(["@alice — 2", "@bob — 1"]);
  });
});
