import json
import subprocess
import sys

import pytest

from katzflat import cartier, parse_series
from katzflat.cli import generate_corpus, main, run_problem
from katzflat.connection import SeriesMatrix


def write(tmp_path, data, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    report = json.loads(out.out) if out.out.strip().startswith("{") else None
    return code, report, out.err


TRIVIAL = {
    "n_vars": 2,
    "rank": 2,
    "trunc_order": 3,
    "matrices": [[["0", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]],
}

NILPOTENT = {
    "n_vars": 1,
    "rank": 2,
    "trunc_order": 4,
    "matrices": [[["0", "1"], ["0", "0"]]],
    "vectors": {"w": ["x1^2", "x1"], "z": ["0", "0"]},
}

CURVED = {
    "n_vars": 2,
    "rank": 2,
    "trunc_order": 3,
    "matrices": [[["x2", "0"], ["0", "0"]], [["0", "0"], ["0", "0"]]],
}


def test_run_trivial(tmp_path, capsys):
    code, report, _ = run_cli(capsys, "run", write(tmp_path, TRIVIAL))
    assert code == 0
    assert report["integrability"] == {"status": "pass"}
    assert report["trivialization"] == [["1", "0"], ["0", "1"]]
    assert report["checks"] and all(report["checks"].values())
    assert report["exit_code"] == 0


def test_run_nilpotent_with_certificate(tmp_path, capsys):
    code, report, _ = run_cli(capsys, "run", write(tmp_path, NILPOTENT), "--certify", "w")
    assert code == 0
    assert report["trivialization"] == [["1", "-x1"], ["0", "1"]]
    assert report["flat_frame"] == [["1", "0"], ["-x1", "1"]]
    # w = 2*x1^2 b1 + x1 b2, so the lowest term x1 sits on b2 only
    (cert,) = report["certificates"]
    assert cert["multi_index"] == [1]
    assert cert["witness_values"] == ["0/1", "1/1"]
    assert cert["nonzero_position"] == 2


def test_certifying_zero_vector_fails_check(tmp_path, capsys):
    code, report, _ = run_cli(capsys, "run", write(tmp_path, NILPOTENT), "--certify", "z")
    assert code == 1
    assert report["checks"]["certificate:z"] is False
    assert "nothing to certify" in report["certificates"][0]["error"]


def test_run_non_integrable(tmp_path, capsys):
    code, report, err = run_cli(capsys, "run", write(tmp_path, CURVED))
    assert code == 3
    w = report["integrability"]
    assert (w["status"], w["i"], w["j"]) == ("fail", 1, 2)
    assert (w["row"], w["col"], w["entry"]) == (0, 0, "-1")
    assert "not integrable" in err


def test_run_non_commuting_constants(tmp_path, capsys):
    data = dict(TRIVIAL, matrices=[[["0", "1"], ["0", "0"]], [["0", "0"], ["1", "0"]]])
    code, report, _ = run_cli(capsys, "run", write(tmp_path, data))
    assert code == 3
    assert report["integrability"]["entry"] == "1"


def test_parse_error_exit_two(tmp_path, capsys):
    data = dict(TRIVIAL, matrices=[[["0", "x1*(x2"], ["0", "0"]], [["0", "0"], ["0", "0"]]])
    code, report, err = run_cli(capsys, "run", write(tmp_path, data))
    assert code == 2
    assert report["error"]["where"] == "matrices[1][0][1]"
    assert report["error"]["offset"] == 6
    assert "offset 6" in err


@pytest.mark.parametrize(
    "patch",
    [
        {"rank": 3},
        {"n_vars": 0},
        {"trunc_order": "3"},
        {"matrices": [[["0", "0"], ["0", "0"]]]},
        {"vectors": {"v": ["1"]}},
        {"tower": "yes"},
    ],
)
def test_malformed_problems(tmp_path, capsys, patch):
    code, report, _ = run_cli(capsys, "run", write(tmp_path, dict(TRIVIAL, **patch)))
    assert code == 2
    assert report["error"]["kind"] == "parse"


def test_bad_json_and_missing_file(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{ not json")
    assert run_cli(capsys, "run", str(bad))[0] == 2
    assert run_cli(capsys, "run", str(tmp_path / "missing.json"))[0] == 2


def test_unknown_certify_name(tmp_path, capsys):
    assert run_cli(capsys, "run", write(tmp_path, NILPOTENT), "--certify", "nope")[0] == 2


def test_inconsistency_exit_four(monkeypatch):
    def broken(C):
        raise cartier.InconsistencyError("forced")

    monkeypatch.setattr(cartier, "flat_basis", broken)
    report, code = run_problem(TRIVIAL)
    assert code == 4
    assert report["error"]["kind"] == "inconsistency"


def test_out_path_and_tower(tmp_path, capsys):
    out = tmp_path / "report.json"
    prob = generate_corpus(3, 2, 3, seed=1, count=1, directory=str(tmp_path / "c"))[0][0]
    code, _, _ = run_cli(capsys, "run", prob, "--tower", "--out", str(out))
    assert code == 0
    report = json.loads(out.read_text())
    assert report["checks"]["tower_compatibility"] is True


def test_gen_writes_problem_and_expected(tmp_path, capsys):
    code = main(["gen", "--nvars", "1", "--rank", "1", "--degree", "2", "--seed", "0",
                 "--count", "1", "--dir", str(tmp_path)])
    assert code == 0
    problem = json.loads((tmp_path / "problem_000.json").read_text())
    expected = json.loads((tmp_path / "expected_000.json").read_text())
    assert problem["n_vars"] == 1 and problem["rank"] == 1 and problem["trunc_order"] == 2
    assert len(expected["known_frame"]) == 1
    assert parse_series(expected["known_frame"][0][0], 1, 2).eval_at_zero() == 1


def test_gen_is_byte_identical(tmp_path):
    a = generate_corpus(2, 2, 3, seed=5, count=2, directory=str(tmp_path / "a"))
    b = generate_corpus(2, 2, 3, seed=5, count=2, directory=str(tmp_path / "b"))
    for (pa, ea), (pb, eb) in zip(a, b):
        assert open(pa, "rb").read() == open(pb, "rb").read()
        assert open(ea, "rb").read() == open(eb, "rb").read()


def test_gen_ten_distinct_validating_problems_round_trip(tmp_path):
    written = generate_corpus(2, 2, 4, seed=7, count=10, directory=str(tmp_path))
    texts = {open(p).read() for p, _ in written}
    assert len(texts) == 10
    for ppath, epath in written:
        data = json.load(open(ppath))
        report, code = run_problem(data)
        assert code == 0
        expected = json.load(open(epath))["known_frame"]
        got = SeriesMatrix([[parse_series(t, 2, 4) for t in row] for row in report["trivialization"]])
        want = SeriesMatrix([[parse_series(t, 2, 4) for t in row] for row in expected])
        assert got == want


def test_gen_rejects_bad_parameters(tmp_path, capsys):
    assert main(["gen", "--nvars", "0", "--rank", "1", "--degree", "2", "--dir", str(tmp_path)]) == 2


def test_gen_unwritable_path(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("")
    code = main(["gen", "--nvars", "1", "--rank", "1", "--degree", "2",
                 "--dir", str(blocker / "sub")])
    assert code == 2


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "katzflat", "run", write(tmp_path, CURVED)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 3
    assert json.loads(proc.stdout)["integrability"]["status"] == "fail"
