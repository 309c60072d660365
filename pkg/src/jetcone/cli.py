"""Command-line client for the pipeline.

The CLI is a thin client over the same request/response models the HTTP
service uses: it validates the problem file, builds an analysis request,
executes it in process (or against a running service with ``--server``),
prints the JSON report, and maps outcomes to exit codes:

    0  success
    2  validation error
    3  at least one jet was rejected as inadmissible
    4  at least one sampling verdict was INCONCLUSIVE
"""

from __future__ import annotations

import csv
import json
import sys
from typing import Optional

import click
import pydantic

from . import __version__
from .errors import InadmissibleJetError, JetconeError, ProblemError
from .runner import COMMANDS
from .schemas import AnalysisRequest, Problem

EXIT_VALIDATION = 2
EXIT_INADMISSIBLE = 3
EXIT_INCONCLUSIVE = 4


def _load_request(
    input_path: str,
    truncation: Optional[int],
    seed: int,
    assert_regularity: bool,
) -> AnalysisRequest:
    try:
        with open(input_path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as exc:
        raise ProblemError(f"cannot read {input_path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemError(f"{input_path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ProblemError("problem file must be a JSON object")
    if truncation is not None:
        data["truncation"] = truncation
    if assert_regularity:
        data["assert_parabolic_regularity"] = True
    try:
        problem = Problem.model_validate(data)
    except pydantic.ValidationError as exc:
        raise ProblemError(f"invalid problem file: {exc}") from exc
    return AnalysisRequest(problem=problem, seed=seed)


def _execute(command: str, request: AnalysisRequest, server: Optional[str]) -> dict:
    if server is None:
        report = COMMANDS[command](request)
        return report.model_dump(by_alias=True, exclude_none=True)
    import httpx

    response = httpx.post(
        f"{server.rstrip('/')}/v1/{command}",
        json=request.model_dump(),
        timeout=300.0,
    )
    if response.status_code == 422:
        raise ProblemError(response.text)
    response.raise_for_status()
    return response.json()


def _exit_code(report: dict) -> int:
    code = 0
    for entry in report.get("entries", []):
        if entry.get("status") == "rejected_inadmissible":
            return EXIT_INADMISSIBLE
        verdicts = []
        if "result" in entry:
            verdicts.append(entry["result"].get("verdict"))
        if "sample" in entry and entry["sample"]:
            verdicts.append(entry["sample"].get("verdict"))
        for row in entry.get("table", []):
            verdicts.append(row.get("verdict"))
        if "INCONCLUSIVE" in verdicts:
            code = EXIT_INCONCLUSIVE
    return code


def _emit_decay_csv(report: dict, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["direction", "w", "t", "normalized_distance"])
        for entry in report.get("entries", []):
            result = entry.get("result") or entry.get("sample")
            if not result:
                continue
            direction = json.dumps(entry.get("direction"))
            w = json.dumps(entry.get("w"))
            for t, d in result.get("normalized_distances", []):
                writer.writerow([direction, w, repr(t), repr(d)])


def _common_options(fn):
    fn = click.option("--input", "input_path", required=True, type=click.Path(), help="Problem file (JSON).")(fn)
    fn = click.option("--truncation", type=int, default=None, help="Override the arc truncation order (>= 2).")(fn)
    fn = click.option("--pretty", is_flag=True, help="Indent the JSON output.")(fn)
    fn = click.option("--seed", type=int, default=0, show_default=True, help="Seed for sampler perturbations.")(fn)
    fn = click.option("--emit-decay-csv", "decay_csv", type=click.Path(), default=None, help="Write (t, d(t)) pairs as CSV (sample/sweep).")(fn)
    fn = click.option("--assert-parabolic-regularity", "assert_regularity", is_flag=True, help="Assert SOSC hypothesis (iii) for uncertified directions.")(fn)
    fn = click.option("--server", default=None, help="Run against a jetcone service at this base URL instead of in process.")(fn)
    return fn


@click.group()
@click.version_option(version=__version__, prog_name="jetcone")
def main() -> None:
    """Directional second-order tangent sets of polynomial varieties."""


def _register(name: str, help_text: str) -> None:
    @main.command(name=name, help=help_text)
    @_common_options
    def _command(
        input_path: str,
        truncation: Optional[int],
        pretty: bool,
        seed: int,
        decay_csv: Optional[str],
        assert_regularity: bool,
        server: Optional[str],
        _name: str = name,
    ) -> None:
        try:
            request = _load_request(input_path, truncation, seed, assert_regularity)
            report = _execute(_name, request, server)
        except ProblemError as exc:
            click.echo(json.dumps({"error": "validation", "detail": str(exc)}))
            sys.exit(EXIT_VALIDATION)
        except InadmissibleJetError as exc:
            click.echo(json.dumps({"error": "inadmissible_jet", "detail": str(exc)}))
            sys.exit(EXIT_INADMISSIBLE)
        except JetconeError as exc:
            click.echo(json.dumps({"error": type(exc).__name__, "detail": str(exc)}))
            sys.exit(EXIT_VALIDATION)
        if decay_csv is not None:
            _emit_decay_csv(report, decay_csv)
        click.echo(json.dumps(report, indent=2 if pretty else None, sort_keys=False))
        sys.exit(_exit_code(report))


_register("initial", "Initial forms, orders, and next forms per generator.")
_register("tangent-cone", "Generator-level tangent cone membership per direction.")
_register("t2a", "Exact affine description of the second-order tangent set.")
_register("classify", "Surjectivity-class certificate per direction.")
_register("lift", "Lift candidate jets to explicit truncated arcs.")
_register("sample", "Numerical membership verdicts for candidate jets.")
_register("optimality", "Second-order necessary/sufficient optimality report.")
_register("sweep", "Batch membership over a w-grid with sign-law summary.")


@main.command(name="serve", help="Run the HTTP service (uvicorn).")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host: str, port: int) -> None:
    import uvicorn

    from .service import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
