"""Operator entry points: serve, badge, stats, verify."""
from __future__ import annotations

import asyncio
import hashlib
import json
import logging
import sys
from pathlib import Path

import click

from . import backends, qsim, sig, statcheck
from .store import MessageRecord


def _offline_nonce(seed: int) -> bytes:
    return hashlib.shake_256(b"qsign-offline-nonce" + seed.to_bytes(8, "big")).digest(32)


@click.group()
def main() -> None:
    """Quantum-randomness-seeded identity badge service."""
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")


@main.command()
@click.option("--port", default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--data-dir", required=True, type=click.Path(file_okay=False))
@click.option("--webhook-secret", required=True, envvar="QSIGN_WEBHOOK_SECRET")
@click.option("--admin-password", required=True, envvar="QSIGN_ADMIN_PASSWORD")
@click.option("--bot-handle", default="qsign_bot", show_default=True)
@click.option(
    "--backend",
    "backend_kind",
    default="local_simulator",
    type=click.Choice(["local_simulator", "remote_client", "always_fail"]),
    show_default=True,
)
@click.option("--backend-endpoint", default="")
@click.option("--backend-credentials", default="", envvar="QSIGN_BACKEND_CREDENTIALS")
@click.option("--timeout", "timeout_s", default=backends.DEFAULT_TIMEOUT_S, show_default=True)
@click.option("--ui-origin", default="")
@click.option("--ui-dir", default="", type=click.Path(file_okay=False))
def serve(
    port, host, data_dir, webhook_secret, admin_password, bot_handle,
    backend_kind, backend_endpoint, backend_credentials, timeout_s, ui_origin, ui_dir,
):
    """Run the HTTP service."""
    import uvicorn

    from .api import ServiceConfig, create_app

    config = ServiceConfig(
        data_dir=data_dir,
        webhook_secret=webhook_secret,
        admin_password=admin_password,
        bot_handle=bot_handle,
        backend_kind=backend_kind,
        backend_endpoint=backend_endpoint,
        backend_credentials=backend_credentials,
        timeout_s=timeout_s,
        ui_origin=ui_origin,
    )
    app = create_app(config)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")
    uvicorn.run(app, host=host, port=port)


@main.command()
@click.argument("username")
@click.argument("text")
@click.option("--seed", default=0, show_default=True)
def badge(username: str, text: str, seed: int):
    """Run the full offline pipeline and print the badge."""
    backend = backends.LocalSimulatorBackend()
    qr = asyncio.run(
        backends.execute_pipeline(username, backend, timeout_s=60.0, rng_seed=seed)
    )
    b = sig.derive_badge(username, text, qr, _offline_nonce(seed))
    out = {
        "badge": b.to_dict(),
        "provenance": {
            "device": qr.device,
            "algorithm": qr.algorithm,
            "q_num": qr.q_num,
            "bell": qr.bell.as_list(),
            "rng_seed": qr.rng_seed,
        },
        "hist_a": qr.hist_a,
        "hist_b": qr.hist_b,
    }
    click.echo(json.dumps(out, sort_keys=True))
    click.echo(b.render())


@main.command()
@click.option("--shots", default=100000, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--json", "as_json", is_flag=True, help="emit the JSON report only")
def stats(shots: int, seed: int, as_json: bool):
    """Run both circuits at scale and print the randomness-quality report."""
    report = statcheck.run_report(shots, seed)
    if as_json:
        click.echo(json.dumps(report, sort_keys=True))
    else:
        click.echo(statcheck.format_report(report))
        click.echo(json.dumps(report, sort_keys=True))


@main.command()
@click.argument("record_file", type=click.Path(exists=True, dir_okay=False))
def verify(record_file: str):
    """Recompute a stored record's badge and report match/mismatch."""
    try:
        rec = MessageRecord.from_dict(json.loads(Path(record_file).read_text("utf-8")))
    except (ValueError, KeyError) as exc:
        click.echo(f"unreadable record: {exc}", err=True)
        sys.exit(2)
    if rec.badge is None:
        click.echo("record has no badge (signature still generating)", err=True)
        sys.exit(1)
    if sig.verify_badge(rec.sender_handle, rec.text, rec.badge):
        click.echo(f"match: {rec.badge.render()}")
        sys.exit(0)
    click.echo("mismatch: stored badge does not recompute from record contents")
    sys.exit(1)


if __name__ == "__main__":
    main()
