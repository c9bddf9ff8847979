"""Command-line front end for the scenario lab.

The CLI is a thin client of the HTTP service: every command speaks to the
FastAPI app through httpx, in-process by default or against a remote
server via --server. Subcommands:

* `chainlab list`                     scenario catalog
* `chainlab run <name|all> [...]`     run scenarios, write reports
* `chainlab verify --golden DIR`      byte-compare fresh runs against goldens
* `chainlab serve`                    start the HTTP service

Exit codes: 0 success; 1 verdict or golden mismatch; 2 usage error
(unknown scenario, unknown parameter, bad flag); 3 I/O error or missing
golden file.

A config file (--config) holds `key = value` lines for scenario, seed,
format, out, golden and repeated `param.NAME = value` entries;
command-line flags override file values.
"""

from __future__ import annotations

import concurrent.futures
import sys
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import click
import httpx

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_IO = 3


def _request(server: Optional[str], method: str, path: str,
             payload: Optional[dict] = None) -> httpx.Response:
    """One HTTP exchange with the service: a remote server when --server is
    given, otherwise the FastAPI app mounted in-process."""
    if server:
        with httpx.Client(base_url=server, timeout=120.0) as client:
            return client.request(method, path, json=payload)

    import asyncio

    from chainlab.service.app import app

    async def go() -> httpx.Response:
        transport = httpx.ASGITransport(app=app)
        async with httpx.AsyncClient(transport=transport,
                                     base_url="http://chainlab.local") as client:
            return await client.request(method, path, json=payload)

    return asyncio.run(go())


def _parse_param(text: str) -> Tuple[str, object]:
    key, sep, value = text.partition("=")
    if not sep or not key:
        raise click.UsageError(f"--param expects key=value, got {text!r}")
    try:
        return key, int(value)
    except ValueError:
        return key, value


def _load_config(path: Optional[str]) -> Dict[str, object]:
    """Flat key=value config: scenario, seed, format, out, golden, param.*"""
    if not path:
        return {}
    out: Dict[str, object] = {"params": {}}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise click.ClickException(f"cannot read config file: {exc}")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise click.UsageError(f"{path}:{lineno}: expected key = value")
        if key.startswith("param."):
            name = key[len("param."):]
            try:
                out["params"][name] = int(value)
            except ValueError:
                out["params"][name] = value
        elif key in ("scenario", "format", "out", "golden", "server"):
            out[key] = value
        elif key == "seed":
            out[key] = int(value)
        else:
            raise click.UsageError(f"{path}:{lineno}: unknown config key {key!r}")
    return out


@click.group()
def main() -> None:
    """Deterministic blockchain attack/defense scenario lab."""


@main.command("list")
@click.option("--server", default=None, help="base URL of a running service")
def cmd_list(server: Optional[str]) -> None:
    """List the scenario catalog."""
    response = _request(server, "GET", "/scenarios")
    response.raise_for_status()
    scenarios = response.json()["scenarios"]
    name_w = max(len(s["name"]) for s in scenarios)
    topic_w = max(len(s["topic"]) for s in scenarios)
    for s in scenarios:
        click.echo(f"{s['name']:<{name_w}}  {s['topic']:<{topic_w}}  {s['summary']}")


def _fetch_report(server: Optional[str], name: str, seed: int,
                  params: Dict[str, object]) -> dict:
    response = _request(server, "POST", "/runs", {
        "scenario": name, "seed": seed, "params": params,
    })
    if response.status_code == 404:
        raise click.UsageError(response.json()["detail"])
    if response.status_code == 422:
        detail = response.json()["detail"]
        raise click.UsageError(detail if isinstance(detail, str) else str(detail))
    response.raise_for_status()
    return response.json()


def _scenario_names(server: Optional[str]) -> List[str]:
    response = _request(server, "GET", "/scenarios")
    response.raise_for_status()
    return [s["name"] for s in response.json()["scenarios"]]


def _run_reports(server: Optional[str], selector: str, seed: int,
                 params: Dict[str, object], parallel: bool) -> List[dict]:
    """Run the selected scenarios and return reports in catalog order."""
    if selector == "all" and params:
        raise click.UsageError("parameter overrides require a single scenario, not 'all'")
    names = _scenario_names(server) if selector == "all" else [selector]
    if parallel and len(names) > 1:
        with concurrent.futures.ThreadPoolExecutor(max_workers=4) as pool:
            futures = {name: pool.submit(_fetch_report, server, name, seed, params)
                       for name in names}
            payloads = [futures[name].result() for name in names]
    else:
        payloads = [_fetch_report(server, name, seed, params) for name in names]
    return [report for payload in payloads for report in payload["reports"]]


@main.command("run")
@click.argument("scenario", default="all")
@click.option("--seed", type=int, default=None, help="simulation seed (default 42)")
@click.option("--param", "params", multiple=True,
              help="override a scenario parameter, key=value (repeatable)")
@click.option("--format", "fmt", type=click.Choice(["table", "structured"]),
              default=None, help="report format (default table)")
@click.option("--out", "out_dir", default=None,
              help="directory to write one report file per scenario")
@click.option("--config", "config_path", default=None,
              help="flat key=value config file; flags override it")
@click.option("--server", default=None, help="base URL of a running service")
@click.option("--parallel", is_flag=True, help="run scenarios concurrently")
def cmd_run(scenario: str, seed: Optional[int], params: Tuple[str, ...],
            fmt: Optional[str], out_dir: Optional[str], config_path: Optional[str],
            server: Optional[str], parallel: bool) -> None:
    """Run SCENARIO (a name from `list`, or "all").

    Exits 0 when every executed scenario's verdict matches its expected
    verdict, 1 otherwise.
    """
    cfg = _load_config(config_path)
    selector = scenario if scenario != "all" or "scenario" not in cfg else cfg["scenario"]
    seed = seed if seed is not None else int(cfg.get("seed", 42))
    fmt = fmt or cfg.get("format", "table")
    if fmt not in ("table", "structured"):
        raise click.UsageError(f"unknown format {fmt!r}")
    out_dir = out_dir or cfg.get("out")
    server = server or cfg.get("server")
    overrides: Dict[str, object] = dict(cfg.get("params", {}))
    overrides.update(dict(_parse_param(p) for p in params))

    reports = _run_reports(server, selector, seed, overrides, parallel)

    if out_dir:
        target = Path(out_dir)
        try:
            target.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            click.echo(f"cannot create output directory: {exc}", err=True)
            sys.exit(EXIT_IO)
    all_match = True
    for report in reports:
        text = report["structured"] if fmt == "structured" else report["table"]
        if out_dir:
            suffix = "jsonl" if fmt == "structured" else "txt"
            try:
                (Path(out_dir) / f"{report['scenario']}.{suffix}").write_text(text)
            except OSError as exc:
                click.echo(f"cannot write report: {exc}", err=True)
                sys.exit(EXIT_IO)
        else:
            click.echo(text, nl=False)
            click.echo()
        marker = "ok" if report["matches_expected"] else "UNEXPECTED VERDICT"
        click.echo(f"[{marker}] {report['scenario']}: {report['verdict']} "
                   f"(expected {report['expected_verdict']})", err=True)
        all_match = all_match and report["matches_expected"]
    sys.exit(EXIT_OK if all_match else EXIT_MISMATCH)


@main.command("verify")
@click.option("--golden", "golden_dir", required=True,
              help="directory of committed golden .jsonl reports")
@click.option("--seed", type=int, default=42, help="seed the goldens were made with")
@click.option("--server", default=None, help="base URL of a running service")
def cmd_verify(golden_dir: str, seed: int, server: Optional[str]) -> None:
    """Re-run every golden scenario and byte-compare the structured reports."""
    golden = Path(golden_dir)
    if not golden.is_dir():
        click.echo(f"golden directory not found: {golden_dir}", err=True)
        sys.exit(EXIT_IO)
    golden_files = sorted(golden.glob("*.jsonl"))
    if not golden_files:
        click.echo(f"no golden files in {golden_dir}", err=True)
        sys.exit(EXIT_IO)

    failures = 0
    for path in golden_files:
        name = path.stem
        try:
            expected = path.read_text()
        except OSError as exc:
            click.echo(f"cannot read golden file {path}: {exc}", err=True)
            sys.exit(EXIT_IO)
        payload = _fetch_report(server, name, seed, {})
        actual = payload["reports"][0]["structured"]
        if actual == expected:
            click.echo(f"[match] {name}")
            continue
        failures += 1
        click.echo(f"[MISMATCH] {name}")
        expected_lines = expected.splitlines()
        actual_lines = actual.splitlines()
        for i, (want, got) in enumerate(zip(expected_lines, actual_lines)):
            if want != got:
                click.echo(f"  line {i + 1}:")
                click.echo(f"    golden: {want}")
                click.echo(f"    actual: {got}")
                break
        else:
            click.echo(f"  line count differs: golden {len(expected_lines)}, "
                       f"actual {len(actual_lines)}")
    sys.exit(EXIT_OK if failures == 0 else EXIT_MISMATCH)


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", type=int, default=8000)
def cmd_serve(host: str, port: int) -> None:
    """Start the HTTP service."""
    import uvicorn

    uvicorn.run("chainlab.service.app:app", host=host, port=port)


if __name__ == "__main__":
    main()
