from __future__ import annotations

import json

import pytest
from click.testing import CliRunner

from jetcone.cli import main
from jetcone.errors import ProblemError
from jetcone.problem import build_context, input_digest
from jetcone.runner import cmd_initial, cmd_t2a
from jetcone.schemas import AnalysisRequest, Problem

PARABOLA = {
    "n": 2,
    "field": "rational",
    "generators": ["y - x^2"],
    "directions": [["1", "0"]],
    "candidates_w": [["0", "2"], ["0", "3"]],
    "objective": "y",
}


def make_request(**overrides) -> AnalysisRequest:
    payload = {**PARABOLA, **overrides}
    return AnalysisRequest(problem=Problem.model_validate(payload))


def write_problem(tmp_path, payload, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


# -- problem validation ------------------------------------------------------


def test_unknown_keys_rejected():
    with pytest.raises(Exception):
        Problem.model_validate({**PARABOLA, "surprise": 1})


def test_generator_parse_error_carries_context():
    request = make_request(generators=["y - x^"])
    with pytest.raises(ProblemError, match="generator 1"):
        build_context(request.problem)


def test_generators_must_vanish_at_point():
    request = make_request(point=["1", "0"])
    with pytest.raises(ProblemError, match="vanish"):
        build_context(request.problem)


def test_decimal_coordinate_rejected_under_rational():
    request = make_request(directions=[[0.5, 0]])
    with pytest.raises(ProblemError, match="decimal coordinate"):
        build_context(request.problem)


def test_point_translation_metamorphic():
    """Running with point q on g equals running with point 0 on g(x + q)."""
    shifted = {
        "n": 2,
        "field": "rational",
        "generators": ["y + 1 - (x + 1)^2"],
        "directions": [["1", "2"]],
    }
    recentered = {
        "n": 2,
        "field": "rational",
        "generators": ["y - x^2"],
        "point": ["1", "1"],
        "directions": [["1", "2"]],
    }
    rep_a = cmd_t2a(AnalysisRequest(problem=Problem.model_validate(shifted)))
    rep_b = cmd_t2a(AnalysisRequest(problem=Problem.model_validate(recentered)))
    assert [e.t2a for e in rep_a.entries] == [e.t2a for e in rep_b.entries]


def test_digest_is_stable_and_input_sensitive():
    a = Problem.model_validate(PARABOLA)
    b = Problem.model_validate(PARABOLA)
    assert input_digest(a) == input_digest(b)
    c = Problem.model_validate({**PARABOLA, "generators": ["y - x^2 + x^3"]})
    assert input_digest(a) != input_digest(c)


def test_schedule_overrides_validated():
    request = make_request(schedule={"t_values": [0.5, 0.25]})
    with pytest.raises(ProblemError, match="schedule"):
        build_context(request.problem)


def test_complex_objective_needs_doubled_variables():
    problem = Problem.model_validate(
        {
            "n": 2,
            "field": "complex",
            "generators": ["y - x^2"],
            "objective": "x1 + x3",
        }
    )
    ctx = build_context(problem)
    assert ctx.objective.n_vars == 4


# -- CLI ---------------------------------------------------------------------


def test_cli_initial_report(tmp_path):
    runner = CliRunner()
    path = write_problem(tmp_path, PARABOLA)
    result = runner.invoke(main, ["initial", "--input", path])
    assert result.exit_code == 0
    report = json.loads(result.output)
    assert report["entries"] == [
        {"generator": "y - x^2", "order": 1, "initial_form": "y", "next_form": "-x^2"}
    ]
    assert report["meta"]["semantics"] == "relative to the given generators"


def test_cli_initial_surface(tmp_path):
    runner = CliRunner()
    path = write_problem(
        tmp_path,
        {"n": 3, "field": "rational", "generators": ["z^2 - x^3*y^3"]},
    )
    result = runner.invoke(main, ["initial", "--input", path])
    entry = json.loads(result.output)["entries"][0]
    assert entry["order"] == 2
    assert entry["initial_form"] == "z^2"
    assert entry["next_form"] == "0"


def test_cli_t2a_values_and_warning(tmp_path):
    runner = CliRunner()
    payload = {**PARABOLA, "directions": [["1", "0"], ["0", "1"]]}
    path = write_problem(tmp_path, payload)
    result = runner.invoke(main, ["t2a", "--input", path])
    assert result.exit_code == 0
    entries = json.loads(result.output)["entries"]
    assert entries[0]["t2a"] == {
        "kind": "nonempty",
        "point": ["0", "2"],
        "basis": [["1", "0"]],
    }
    assert entries[0]["in_tangent_cone"] is True
    assert entries[1]["in_tangent_cone"] is False
    assert "warning" in entries[1]


def test_cli_zero_direction_is_validation_error(tmp_path):
    runner = CliRunner()
    path = write_problem(tmp_path, {**PARABOLA, "directions": [["0", "0"]]})
    result = runner.invoke(main, ["t2a", "--input", path])
    assert result.exit_code == 2


def test_cli_lift_exit_code_for_inadmissible(tmp_path):
    runner = CliRunner()
    path = write_problem(tmp_path, PARABOLA)
    result = runner.invoke(main, ["lift", "--input", path])
    assert result.exit_code == 3
    entries = json.loads(result.output)["entries"]
    assert [e["status"] for e in entries] == ["lifted", "rejected_inadmissible"]
    arc = entries[0]["arc"]
    assert arc["coeffs"][1] == ["1", "0"]
    assert arc["coeffs"][2] == ["0", "1"]


def test_cli_lift_truncation_override(tmp_path):
    runner = CliRunner()
    path = write_problem(tmp_path, {**PARABOLA, "candidates_w": [["0", "2"]]})
    result = runner.invoke(main, ["lift", "--input", path, "--truncation", "4"])
    assert result.exit_code == 0
    arc = json.loads(result.output)["entries"][0]["arc"]
    assert arc["order"] == 4
    assert len(arc["coeffs"]) == 5


def test_cli_unknown_key_rejected(tmp_path):
    runner = CliRunner()
    path = write_problem(tmp_path, {**PARABOLA, "mystery": True})
    result = runner.invoke(main, ["initial", "--input", path])
    assert result.exit_code == 2
    assert "validation" in result.output


def test_cli_missing_file(tmp_path):
    runner = CliRunner()
    result = runner.invoke(main, ["initial", "--input", str(tmp_path / "nope.json")])
    assert result.exit_code == 2


def test_cli_byte_identical_reruns(tmp_path):
    runner = CliRunner()
    path = write_problem(tmp_path, PARABOLA)

    def run():
        result = runner.invoke(main, ["optimality", "--input", path])
        assert result.exit_code == 0
        report = json.loads(result.output)
        report["meta"].pop("wall_time_s")
        return json.dumps(report, sort_keys=True)

    assert run() == run()


def test_cli_sample_routes_certified_input_and_emits_csv(tmp_path):
    runner = CliRunner()
    payload = {**PARABOLA, "candidates_w": [["0", "2"]]}
    path = write_problem(tmp_path, payload)
    csv_path = tmp_path / "decay.csv"
    result = runner.invoke(
        main, ["sample", "--input", path, "--emit-decay-csv", str(csv_path)]
    )
    assert result.exit_code == 0
    entry = json.loads(result.output)["entries"][0]
    assert entry["result"]["verdict"] == "MEMBER"
    assert "exact witness" in entry["result"]["evidence"]
    assert entry["arc"]["coeffs"][2] == ["0", "1"]
    assert csv_path.read_text().startswith("direction,w,t,normalized_distance")


def test_cli_sample_not_member_exact_exclusion(tmp_path):
    runner = CliRunner()
    payload = {**PARABOLA, "candidates_w": [["0", "3"]]}
    path = write_problem(tmp_path, payload)
    result = runner.invoke(main, ["sample", "--input", path])
    assert result.exit_code == 0
    entry = json.loads(result.output)["entries"][0]
    assert entry["result"]["verdict"] == "NOT_MEMBER"
    assert entry["result"]["evidence"].startswith("exact")


def test_cli_sample_numeric_path_with_csv(tmp_path):
    runner = CliRunner()
    payload = {
        "n": 3,
        "field": "real",
        "generators": ["z^2 - x^3*y^3"],
        "directions": [[1, 1, 0]],
        "candidates_w": [[0, 0, 2]],
    }
    path = write_problem(tmp_path, payload)
    csv_path = tmp_path / "decay.csv"
    result = runner.invoke(
        main, ["sample", "--input", path, "--emit-decay-csv", str(csv_path)]
    )
    assert result.exit_code == 0
    entry = json.loads(result.output)["entries"][0]
    assert entry["result"]["verdict"] == "NOT_MEMBER"
    lines = csv_path.read_text().strip().splitlines()
    assert len(lines) == 1 + 17


def test_cli_optimality_report(tmp_path):
    runner = CliRunner()
    path = write_problem(tmp_path, PARABOLA)
    result = runner.invoke(main, ["optimality", "--input", path])
    assert result.exit_code == 0
    entry = json.loads(result.output)["entries"][0]
    assert entry["verdict"] == "SUFFICIENT_HOLDS"
    assert entry["infimum"] == {"kind": "finite", "value": "2"}
    assert entry["margin"] == "2"


def test_cli_lift_routes_uncertified_to_sampler(tmp_path):
    runner = CliRunner()
    payload = {
        "n": 3,
        "field": "rational",
        "generators": ["z^2 - x^3*y^3"],
        "directions": [["1", "1", "0"]],
        "candidates_w": [["1", "0", "0"]],
    }
    path = write_problem(tmp_path, payload)
    result = runner.invoke(main, ["lift", "--input", path])
    assert result.exit_code == 0
    entry = json.loads(result.output)["entries"][0]
    assert entry["status"] == "routed_to_sample"
    assert entry["sample"]["verdict"] == "MEMBER"


def test_cli_sweep_reports_sign_constraints(tmp_path):
    runner = CliRunner()
    payload = {
        "n": 3,
        "field": "real",
        "generators": ["z^2 - x^3*y^3"],
        "directions": [[0, 1, 0]],
        "candidates_w": [[-1, 0, 0], [1, 0, 0], [1, 0, 1]],
    }
    path = write_problem(tmp_path, payload)
    result = runner.invoke(main, ["sweep", "--input", path])
    assert result.exit_code == 0
    entry = json.loads(result.output)["entries"][0]
    verdicts = {tuple(row["w"]): row["verdict"] for row in entry["table"]}
    assert verdicts[(-1.0, 0.0, 0.0)] == "NOT_MEMBER"
    assert verdicts[(1.0, 0.0, 0.0)] == "MEMBER"
    assert verdicts[(1.0, 0.0, 1.0)] == "NOT_MEMBER"
    assert "w1 >= 0" in entry["sign_constraints"]
