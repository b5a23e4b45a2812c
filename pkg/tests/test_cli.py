import json
import pathlib
import random

import pytest

from placeforge.cli import main

HERE = pathlib.Path(__file__).parent
JOBS = sorted((HERE / "jobs").glob("*.json"))


def run_cli(capsys, *args):
    code = main(list(args))
    out = capsys.readouterr().out
    return code, out


@pytest.mark.parametrize("job", JOBS, ids=lambda p: p.stem)
def test_golden_reports(job, capsys):
    golden = (HERE / "golden" / job.name).read_text()
    code, out = run_cli(capsys, "--spec", str(job))
    assert code == 0
    assert out == golden


@pytest.mark.parametrize("job", JOBS, ids=lambda p: p.stem)
def test_byte_determinism(job, capsys):
    code1, out1 = run_cli(capsys, "--spec", str(job))
    code2, out2 = run_cli(capsys, "--spec", str(job))
    assert (code1, out1) == (code2, out2)


def test_emitted_place_round_trips_into_other_commands(capsys, tmp_path):
    code, out = run_cli(capsys, "--spec", str(HERE / "jobs" / "witness.json"))
    assert code == 0
    place_json = json.dumps(json.loads(out)["place"])
    code, out = run_cli(capsys, "classify", "--place", place_json)
    assert code == 0
    assert json.loads(out)["invariants"]["flags"]["discrete"] is True
    code, out = run_cli(capsys, "value", "--place", place_json, "--elem", "x1+x2")
    assert code == 0
    assert json.loads(out)["results"][0]["sign"] == "+"
    # composite places round trip too
    code, out = run_cli(capsys, "--spec", str(HERE / "jobs" / "compose.json"))
    tower_json = json.dumps(json.loads(out)["place"])
    code, out = run_cli(capsys, "classify", "--place", tower_json)
    assert code == 0
    assert json.loads(out)["invariants"]["rank"] == 2


def test_custom_variable_names(capsys):
    job = json.loads((HERE / "jobs" / "witness_maxrank.json").read_text())
    code, out = run_cli(
        capsys, "value", "--place", json.dumps(job["place"]),
        "--vars", "s,t,w", "--elem", "s + t*w",
    )
    assert code == 0
    assert json.loads(out)["results"][0]["sign"] == "+"


def test_flag_overrides_spec(capsys):
    code, out = run_cli(
        capsys, "value", "--spec", str(HERE / "jobs" / "value.json"), "--elem", "x2"
    )
    assert code == 0
    report = json.loads(out)
    assert len(report["results"]) == 1
    assert report["results"][0]["elem"] == "x2"


def test_exit_code_on_parse_error(capsys):
    job = HERE / "jobs" / "value.json"
    spec = json.loads(job.read_text())
    code, _ = run_cli(
        capsys, "value", "--place", json.dumps(spec["place"]), "--elem", "x1 + ?"
    )
    assert code == 1


def test_exit_code_on_infeasible_shape(capsys):
    place = {
        "kind": "monomial", "base": "Q", "arity": 2,
        "ambient": {"levels": [{"d": 2}]},
        "weights": [[{"a": "1", "b": "0"}], [{"a": "0", "b": "0"}]],
    }
    code, _ = run_cli(
        capsys, "goodify", "--place", json.dumps(place), "--elem", "x2",
        "--shape", '{"mode": "preserve_residues", "class": "lex_max_rank"}',
    )
    assert code == 2


def test_bad_jobspec_rejected(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"command": "value", "unknown_field": 1}))
    code, _ = run_cli(capsys, "--spec", str(bad))
    assert code == 1


def test_mismatched_base_or_arity_rejected(capsys):
    job = json.loads((HERE / "jobs" / "value.json").read_text())
    code, _ = run_cli(
        capsys, "value", "--place", json.dumps(job["place"]),
        "--elem", "x1", "--base", "5",
    )
    assert code == 1
    code, _ = run_cli(
        capsys, "value", "--place", json.dumps(job["place"]),
        "--elem", "x1", "--arity", "3",
    )
    assert code == 1


def test_out_file_matches_stdout(capsys, tmp_path):
    target = tmp_path / "report.json"
    code, out = run_cli(
        capsys, "--spec", str(HERE / "jobs" / "classify.json"), "--out", str(target)
    )
    assert code == 0
    assert target.read_text() == out


def test_parse_print_parse_idempotence(capsys):
    # CLI-level spot check; the bulk round-trip property lives in the
    # ratfunc tests and the acceptance suite.
    from placeforge import BaseField, eq_zero, parse_expr
    from placeforge.parsing import format_ratfunc

    rng = random.Random(71)
    import sys
    sys.path.insert(0, str(HERE))
    from gen import random_ratfunc

    for _ in range(25):
        f = random_ratfunc(rng, BaseField(0), 2)
        text = format_ratfunc(f)
        again = parse_expr(text, 2, BaseField(0))
        assert eq_zero(f - again)
        assert format_ratfunc(again) == text
