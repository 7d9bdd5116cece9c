import json

import pytest

from pointed_coalgebras.cli import main


@pytest.fixture(autouse=True)
def isolated(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("POINTED_COALGEBRAS_CONFIG", raising=False)
    for key in ("PCOALG_BI_DEPTH", "PCOALG_TRI_DEPTH", "PCOALG_NMAX", "PCOALG_SAMPLES", "PCOALG_TRIALS", "PCOALG_SEED"):
        monkeypatch.delenv(key, raising=False)
    return tmp_path


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out.strip().splitlines(), err


def test_dist_words(capsys):
    assert run(capsys, "dist", "l.T", "r.B")[:2] == (0, ["0"])
    assert run(capsys, "dist", "l.B", "r.T")[:2] == (0, ["1"])
    assert run(capsys, "dist", "lr.B", "rl.T")[:2] == (0, ["1/2^1"])
    assert run(capsys, "dist", "aa.T", "aa.L")[:2] == (0, ["1/2^2"])
    assert run(capsys, "dist", ".T", "aa.L")[:2] == (0, ["1/2^2"])


def test_dist_streams_prints_interval(capsys):
    code, out, _ = run(capsys, "dist", "ll(r)*", "(r)*", "--depth", "4")
    assert code == 0
    assert out[0].endswith("(depth 4)")


def test_dist_streams_rejects_depth_zero(capsys):
    code, out, err = run(capsys, "dist", "ll(r)*", "(r)*", "--depth", "0")
    assert code == 2
    assert out == []
    assert "depth must be >= 1" in err


def test_dist_rejects_bad_word(capsys):
    code, _, err = run(capsys, "dist", "x.B", "l.T")
    assert code == 2
    assert "x.B" in err


def test_fold_and_equiv(capsys):
    assert run(capsys, "fold", "llrr.T")[:2] == (0, ["1/2^2"])
    assert run(capsys, "fold", ".T", "--algebra", "bip-alg")[:2] == (0, ["1"])
    assert run(capsys, "fold", "aa.L", "--algebra", "trip-alg")[:2] == (0, ["L"])
    assert run(capsys, "fold", "b.R")[:2] == (0, ["(1/2^1, 0*sqrt(3)/2)"])
    assert run(capsys, "equiv", "l.T", "r.B")[:2] == (0, ["yes"])
    assert run(capsys, "equiv", "l.B", "r.T")[:2] == (0, ["no"])


def test_unknown_algebra(capsys):
    assert run(capsys, "fold", ".T", "--algebra", "nope")[0] == 2


def test_approx(capsys):
    code, out, _ = run(capsys, "approx", "interval-e", "1", "4")
    assert code == 0
    assert out == ["word: rrrr.T", "fold: 1", "radius: 1/2^4"]
    code, out, _ = run(capsys, "approx", "interval-e", "3/8", "6")
    assert out[:2] == ["word: llrrrr.T", "fold: 1/2^2"]
    code, out, _ = run(capsys, "approx", "triangle-e", "apex", "3")
    assert out[0] == "word: aaa.T"
    assert out[1].startswith("coords: ")


def test_approx_depth_from_config(capsys, isolated):
    (isolated / "config.toml").write_text("[approx]\ndepth = 2\n", encoding="utf-8")
    code, out, _ = run(capsys, "approx", "freyd-i", "3/8")
    assert code == 0
    assert out[0] == "word: lr.T"
    assert out[-1] == "radius: 1/2^2"


def test_approx_rejects_point_outside_carrier(capsys):
    assert run(capsys, "approx", "interval-e", "3/2", "4")[0] == 2
    assert run(capsys, "approx", "interval-e", "1/3", "4")[0] == 2


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "interval-e", "3/8")
    assert code == 0
    assert out == ["stream: ll(r)*", "word: ll.T", "fold: 1/2^2"]
    assert run(capsys, "eval", "bip-alg", "rrr.B")[:2] == (0, ["0"])
    assert run(capsys, "eval", "nope", "1")[0] == 2


def test_verify_prints_counts(capsys):
    code, out, _ = run(capsys, "verify", "lipschitz", "3")
    assert code == 0
    assert out[0].startswith("n=1 ")
    assert any(line.startswith("ok   lipschitz/ratios: 3 checked, 0 failed") for line in out)
    assert out[-1] == "PASS"


def test_verify_depth_flag_bounds_isometry(capsys):
    code, out, _ = run(capsys, "verify", "isometry-ck", "--depth", "2")
    assert code == 0
    assert out == ["ok   isometry-ck/bi-pointed: 49 checked, 0 failed", "PASS"]


def test_verify_json(capsys):
    code, out, _ = run(capsys, "verify", "discontinuity", "--nmax", "2", "--json")
    assert code == 0
    payload = json.loads("\n".join(out))
    assert payload["ok"] is True
    names = [c["name"] for c in payload["results"][0]["checks"]]
    assert names == ["discontinuity/bip-alg", "discontinuity/trip-alg"]


def test_verify_unknown_suite(capsys):
    code, _, err = run(capsys, "verify", "nope")
    assert code == 2
    assert "unknown suite" in err


def test_table_lipschitz_writes_csv(capsys, isolated):
    path = isolated / "lip.csv"
    code, out, _ = run(capsys, "table", "lipschitz", "--nmax", "3", "--csv", str(path))
    assert code == 0
    assert out[0].split("\t")[0] == "n"
    assert len(out) == 4
    assert path.read_text(encoding="utf-8").splitlines()[1] == "1,4,0"


def test_table_claims(capsys):
    code, out, _ = run(capsys, "table", "claims", "--nmax", "2", "--samples", "2")
    assert code == 0
    assert out[0].startswith("family\tn\tx")
    code, _, _ = run(capsys, "table", "g-claims", "--nmax", "2", "--samples", "2")
    assert code == 0
