import json
from pathlib import Path

import pytest

from invvol.cli import main
from invvol.errors import NoConvergence

FIX = Path(__file__).parent / "fixtures"
FAST = ["--paths", "4000", "--steps", "10"]


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_price_json(capsys):
    code, out, _ = run(capsys, "price", *FAST)
    assert code == 0
    res = json.loads(out)
    assert set(res) == {"price", "stderr", "n"}
    assert 0 < res["price"] < 1 and res["n"] == 2000


def test_quanto_doubles_price(capsys):
    _, a, _ = run(capsys, "price", *FAST, "--seed", "3")
    _, b, _ = run(capsys, "price", *FAST, "--seed", "3", "--rate-R", "2")
    assert json.loads(b)["price"] == 2 * json.loads(a)["price"]


def test_malformed_config_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(capsys, "price", "--config", str(p))[0] == 2
    p.write_text(json.dumps({"model": {"sigma0": -1}}))
    assert run(capsys, "price", "--config", str(p))[0] == 2
    p.write_text(json.dumps({"bogus": 1}))
    assert run(capsys, "price", "--config", str(p))[0] == 2


def test_bad_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["price", "--model", "heston"])
    assert exc.value.code == 2


def test_config_with_flag_override(tmp_path, capsys):
    p = tmp_path / "run.json"
    p.write_text(json.dumps({"model": {"kind": "constvol", "sigma0": 0.3}, "sim": {"paths": 4000, "steps": 10}}))
    _, a, _ = run(capsys, "price", "--config", str(p))
    _, b, _ = run(capsys, "price", "--config", str(p), "--sigma0", "0.6")
    assert json.loads(b)["price"] > json.loads(a)["price"]
    _, c, _ = run(capsys, "price", "--model", "constvol", "--sigma0", "0.3", *FAST)
    assert json.loads(c) == json.loads(a)


def test_iv_level_csv_deterministic(capsys):
    args = ("iv-level", *FAST, "--grid", "0.2,0.5")
    code, a, _ = run(capsys, *args)
    _, b, _ = run(capsys, *args)
    assert code == 0 and a == b
    lines = a.strip().splitlines()
    assert lines[0] == "sigma0,iv_mc,iv_stderr,iv_limit"
    assert len(lines) == 3
    assert abs(float(lines[1].split(",")[1]) - 0.2) < 0.02


def test_iv_level_bad_grid(capsys):
    assert run(capsys, "iv-level", *FAST, "--grid", "0.2,-1")[0] == 2


def test_skew_scaled(capsys):
    code, out, _ = run(capsys, "skew", *FAST, "--model", "bergomi", "--hurst", "0.4", "--scaled")
    assert code == 0
    res = json.loads(out)
    assert res["scaled"] is True
    assert res["scaling_exponent"] == pytest.approx(0.1)
    assert res["skew_limit"] == pytest.approx(-0.03923, abs=5e-6)


def test_term_structure(capsys):
    code, out, _ = run(capsys, "term-structure", *FAST, "--maturities", "0.001,0.01")
    assert code == 0
    assert out.splitlines()[0] == "T,skew_mc,skew_stderr"
    assert len(out.splitlines()) == 3


def test_term_structure_empty_list(capsys):
    assert run(capsys, "term-structure", *FAST, "--maturities", "")[0] == 2


def test_fit_market(capsys):
    code, out, _ = run(capsys, "fit-market", str(FIX / "anchored_skew.csv"))
    assert code == 0
    res = json.loads(out)
    assert {"c", "alpha", "h_implied", "r_squared"} <= set(res)
    assert res["h_implied"] == pytest.approx(0.8, abs=1e-10)
    assert res["shortest_skew"] == pytest.approx(0.014, abs=1e-12)
    assert res["sigma0_estimate"] == 0.36


def test_fit_market_flat(capsys):
    _, out, _ = run(capsys, "fit-market", str(FIX / "flat_skew.csv"))
    assert json.loads(out)["h_implied"] == pytest.approx(0.5, abs=1e-12)


def test_fit_market_errors(capsys):
    assert run(capsys, "fit-market", str(FIX / "mixed_sign.csv"))[0] == 4
    assert run(capsys, "fit-market", str(FIX / "empty.csv"))[0] == 2
    assert run(capsys, "fit-market", str(FIX / "negative_iv.csv"))[0] == 2
    assert run(capsys, "fit-market", str(FIX / "missing.csv"))[0] == 2


def test_out_file(tmp_path, capsys):
    dest = tmp_path / "fit.json"
    code, out, _ = run(capsys, "fit-market", str(FIX / "anchored_skew.csv"), "--out", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["n_points"] == 10


def test_numeric_failure_exits_3(capsys, monkeypatch):
    def boom(*args, **kwargs):
        raise NoConvergence("solver stalled")

    monkeypatch.setattr("invvol.cli.atm_iv_mc", boom)
    code, _, err = run(capsys, "iv-level", *FAST, "--grid", "0.3")
    assert code == 3
    assert "numerical failure" in err
