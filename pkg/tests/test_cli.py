import json

import pytest

from fusion_amalgam.cli import EXIT_CAP, EXIT_FAIL, EXIT_FINGERPRINT, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_construct(capsys):
    code, out, _ = run(capsys, "construct", "--p", "3", "--q", "5")
    assert code == EXIT_OK
    assert "m=1 n=2" in out and "|A|=375" in out and "|B|=1215" in out and "|C|=15" in out
    code, out, _ = run(capsys, "construct", "--p", "3", "--q", "5", "--format", "json")
    data = json.loads(out)
    assert data["transversal_sizes"] == {"A": 25, "B": 81}


@pytest.mark.parametrize("argv", [
    ["construct", "--p", "3", "--q", "3"],
    ["construct", "--p", "4", "--q", "5"],
    ["verify", "--p", "3", "--q", "5", "--claim", "bogus"],
    ["verify", "--p", "3", "--q", "5", "--claim", "isolated", "--samples", "-1"],
    ["rank", "--p", "3", "--q", "5", "--index", "7"],
    ["counting", "--p", "3"],
    ["counting", "--p", "3", "--q", "5", "--size-p", "27"],
    ["counting", "--p", "3", "--q", "5", "--size-p", "9", "--size-q", "125"],
    ["word", "reduce", "--p", "3", "--q", "5", "not json"],
    ["nonsense"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE


def test_size_cap(capsys):
    code, _, err = run(capsys, "construct", "--p", "11", "--q", "13")
    assert code == EXIT_CAP and "error" in err


def test_verify_json(capsys, tmp_path):
    out_file = tmp_path / "rep.json"
    code, _, _ = run(capsys, "verify", "--p", "3", "--q", "5", "--claim", "perfect", "--format", "json", "--output", str(out_file))
    assert code == EXIT_OK
    data = json.loads(out_file.read_text())
    assert data["passed"]
    assert [r["claim"] for r in data["reports"]] == ["perfect", "perfect-control"]
    assert [r["verdict"] for r in data["reports"]] == ["PASS", "FAIL"]


def test_verify_text(capsys):
    code, out, _ = run(capsys, "verify", "--p", "3", "--q", "5", "--claim", "torsion", "--samples", "50")
    assert code == EXIT_OK and out.strip().endswith("PASS")


def test_words(capsys, tmp_path):
    base = ["--p", "3", "--q", "5"]
    code, out, _ = run(capsys, "word", "carter", *base)
    carter = out.strip()
    assert run(capsys, "word", "order", *base, carter)[1].strip() == "15"
    code, out, _ = run(capsys, "word", "random", *base, "--length", "4", "--word-seed", "3")
    w = out.strip()
    assert len(json.loads(w)["letters"]) == 4
    assert run(capsys, "word", "order", *base, w)[1].strip() == "infinite"
    inv = run(capsys, "word", "inverse", *base, w)[1].strip()
    (tmp_path / "w.json").write_text(w)
    prod = json.loads(run(capsys, "word", "mul", *base, "@" + str(tmp_path / "w.json"), inv)[1])
    assert prod["c"] == [0, 0] and prod["letters"] == []
    assert run(capsys, "word", "mul", *base, w)[0] == EXIT_USAGE
    assert json.loads(run(capsys, "word", "reduce", *base, w)[1]) == json.loads(w)
    code, _, err = run(capsys, "word", "reduce", "--p", "3", "--q", "7", w)
    assert code == EXIT_FINGERPRINT and "error" in err


def test_chi_and_rank(capsys):
    assert run(capsys, "chi", "--p", "3", "--q", "5")[1].strip() == "-1919/30375"
    code, out, _ = run(capsys, "rank", "--p", "3", "--q", "5", "--index", "30375", "--format", "json")
    data = json.loads(out)
    assert data["rank"] == 1920 and data["displayed_formula"] == "28786" and data["discrepancy"]


def test_counting(capsys, tmp_path):
    code, out, _ = run(capsys, "counting", "--p", "3", "--q", "5", "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK and data["excess"] == "1919/30375" and data["excess_equals_minus_chi"]
    code, out, _ = run(capsys, "counting", "--p", "3", "--q", "5", "--size-p", "27", "--size-q", "125")
    assert code == EXIT_OK and "191/3375" in out
    code, out, _ = run(capsys, "counting", "--grid", "13", "--max-exponent", "4")
    assert code == EXIT_OK and "all verdicts TRUE" in out
    csv_path = tmp_path / "grid.csv"
    code, _, _ = run(capsys, "counting", "--grid", "7", "--minimal", "--csv", "--output", str(csv_path))
    assert code == EXIT_OK and len(csv_path.read_text().splitlines()) == 1 + 3 * 2


def test_fail_exit_code(capsys, monkeypatch):
    from fusion_amalgam import cli
    from fusion_amalgam.verifier import VerificationReport

    def broken(ctx, claim, *a):
        return [VerificationReport(claim, "EXACT", 1, None, {}, fail=[{}])]

    monkeypatch.setattr(cli, "run_claim", broken)
    assert run(capsys, "verify", "--p", "3", "--q", "5", "--claim", "brackets")[0] == EXIT_FAIL
