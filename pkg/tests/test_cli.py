import json

import pytest

from levinehat.cli import main, parse_rational
from levinehat.presets import K33_PAIR


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_winprob_preset(capsys):
    code, out, _ = run_cli(capsys, "winprob", "--preset", "k33")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "11/32"
    assert doc["value_f64"] == pytest.approx(0.34375)


def test_winprob_from_file(capsys, tmp_path):
    from levinehat.core import save_strategy

    path = tmp_path / "k33.json"
    save_strategy(path, *K33_PAIR)
    code, out, _ = run_cli(capsys, "winprob", "--file", str(path))
    assert code == 0
    assert json.loads(out)["value"] == "11/32"


def test_winprob_biased(capsys):
    code, out, _ = run_cli(capsys, "winprob", "--preset", "fbh", "--h", "3", "--p", "1/3")
    assert code == 0
    assert json.loads(out)["value"] == "133/729"


def test_recursive_preset(capsys):
    code, out, _ = run_cli(capsys, "recursive", "--preset", "K5")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "7/20"
    assert doc["a"] == "1/256"
    assert doc["b"] == "357/1024"


def test_bruteforce(capsys):
    code, out, _ = run_cli(capsys, "bruteforce", "--h", "2")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "5/16"
    assert doc["value_num"] == 5 and doc["value_den"] == 16
    assert len(doc["k1"]) == 4


def test_hillclimb_seeded(capsys):
    code, out, _ = run_cli(
        capsys, "hillclimb", "--h", "3", "--restarts", "20", "--seed", "7",
        "--target", "11/32",
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "11/32"
    assert doc["seed"] == 7
    code2, out2, _ = run_cli(
        capsys, "hillclimb", "--h", "3", "--restarts", "20", "--seed", "7",
        "--target", "11/32",
    )
    assert out2 == out


def test_bestresponse(capsys):
    code, out, _ = run_cli(capsys, "bestresponse", "--preset", "fbh", "--h", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["value"] == "21/64"


def test_bounds_csv(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--hmax", "13", "--preset", "paper")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "h,numerator,denominator,float64,provenance"
    assert len(lines) == 14
    last = lines[-1].split(",")
    assert last[0] == "13" and last[3] == "0.34999990463256836"


def test_bounds_json(capsys):
    code, out, _ = run_cli(capsys, "bounds", "--hmax", "10", "--format", "json")
    assert code == 0
    rows = json.loads(out)
    assert rows[-1]["h"] == 10
    assert rows[-1]["value_f64"] == 0.34999847412109375


def test_bounds_from_search(capsys):
    code, out, _ = run_cli(
        capsys, "bounds", "--hmax", "6", "--preset", "search",
        "--restarts", "8", "--seed", "7", "--format", "json",
    )
    assert code == 0
    rows = json.loads(out)
    values = [r["value_f64"] for r in rows]
    assert values == sorted(values)
    assert rows[2]["value_f64"] == 11 / 32  # heights 1..3 are exhaustive


def test_pvariant_point(capsys):
    code, out, _ = run_cli(capsys, "pvariant", "--p", "1/2")
    assert code == 0
    doc = json.loads(out)
    assert doc["u3"] == "7/20" and doc["k5"] == "7/20" and doc["fbh"] == "1/3"


def test_pvariant_curve_csv(capsys):
    code, out, _ = run_cli(capsys, "pvariant", "--grid", "10")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "p,U1,U2,U3,K5"
    assert len(lines) == 10


def test_pvariant_crossover(capsys):
    code, out, _ = run_cli(capsys, "pvariant", "--crossover", "--tolerance", "1/100000")
    assert code == 0
    doc = json.loads(out)
    assert 0.311 < doc["lo_f64"] < doc["hi_f64"] < 0.313


def test_continuous_pm(capsys):
    code, out, _ = run_cli(capsys, "continuous", "--mode", "pm", "--m", "4")
    assert code == 0
    assert json.loads(out)["p_m"] == pytest.approx(0.284, abs=0.002)


def test_continuous_mc(capsys):
    code, out, _ = run_cli(
        capsys, "continuous", "--mode", "mc", "--preset", "fbh",
        "--samples", "100000", "--seed", "3",
    )
    assert code == 0
    doc = json.loads(out)
    assert abs(doc["estimate"] - 1 / 3) < 5 * doc["stderr"]


def test_render_finite_ppm(capsys, tmp_path):
    out_path = tmp_path / "k33.ppm"
    code, out, _ = run_cli(
        capsys, "render", "--kind", "finite", "--preset", "k33",
        "--tile-px", "4", "--out", str(out_path),
    )
    assert code == 0
    doc = json.loads(out)
    assert doc["black_fraction"] == pytest.approx(22 / 64)
    blob = out_path.read_bytes()
    assert blob.startswith(b"P6\n32 32\n255\n")


def test_render_svg(capsys, tmp_path):
    out_path = tmp_path / "fbh.svg"
    code, _, _ = run_cli(
        capsys, "render", "--kind", "finite", "--preset", "fbh", "--h", "3",
        "--svg", "--out", str(out_path),
    )
    assert code == 0
    assert out_path.read_text().count('fill="black"') == 21


def test_render_recursive(capsys, tmp_path):
    out_path = tmp_path / "k3.ppm"
    code, out, _ = run_cli(
        capsys, "render", "--kind", "recursive", "--preset", "k3",
        "--resolution", "64", "--depth", "2", "--out", str(out_path),
    )
    assert code == 0
    assert out_path.exists()


def test_render_biased(capsys, tmp_path):
    out_path = tmp_path / "fbh_biased.ppm"
    code, out, _ = run_cli(
        capsys, "render", "--kind", "biased", "--preset", "fbh", "--p", "3/4",
        "--resolution", "128", "--out", str(out_path),
    )
    assert code == 0
    assert json.loads(out)["black_fraction"] == pytest.approx(0.6, abs=0.02)


def test_render_continuous(capsys, tmp_path):
    out_path = tmp_path / "m20.ppm"
    code, out, _ = run_cli(
        capsys, "render", "--kind", "continuous", "--m", "20",
        "--resolution", "256", "--out", str(out_path),
    )
    assert code == 0
    assert json.loads(out)["black_fraction"] == pytest.approx(0.44, abs=0.02)


def test_invalid_inputs_exit_one(capsys):
    assert run_cli(capsys, "winprob", "--preset", "nope")[0] == 1
    assert run_cli(capsys, "bruteforce", "--h", "9")[0] == 1
    assert run_cli(capsys, "winprob")[0] == 1          # neither file nor preset
    assert run_cli(capsys, "nonsense")[0] == 1


def test_parse_rational():
    from fractions import Fraction

    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("0.25") == Fraction(1, 4)
    with pytest.raises(ValueError):
        parse_rational("x/y")


def test_verify_failure_exits_two(capsys, monkeypatch):
    from levinehat import verify

    monkeypatch.setattr(
        verify, "CRITERIA", (("stub", lambda: (False, "forced failure")),)
    )
    code, out, err = run_cli(capsys, "verify")
    assert code == 2
    assert json.loads(out)["passed"] is False
    assert "FAIL stub" in err
