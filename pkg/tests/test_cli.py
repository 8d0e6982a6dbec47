import csv
import io
import math
import shlex

import numpy as np
import pytest

from quditinfo import cli, infodiag
from quditinfo.spectra import InfoPoint


def run(tmp_path, *argv, name="out.csv"):
    path = tmp_path / name
    code = cli.main([*argv, "--out", str(path)])
    return code, path


def rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# quditinfo ")
    body = [ln for ln in lines[1:] if not ln.startswith("#")]
    return list(csv.DictReader(io.StringIO("\n".join(body))))


def test_parse_helpers():
    assert cli.parse_range("0:1:0.25").tolist() == [0, 0.25, 0.5, 0.75, 1.0]
    assert cli.parse_range("0:3:0.05").size == 61
    assert cli.parse_N("inf") == math.inf and cli.parse_N("12") == 12
    assert cli.fmt(0.1) == "0.10000000000000001" and cli.fmt(None) == ""


def test_boundary_rows(tmp_path):
    code, path = run(tmp_path, "boundary", "--d", "5", "--samples", "400")
    assert code == 0
    data = rows(path)
    assert len(data) == 400 * (1 + 2 * 4)
    first_max = next(r for r in data if r["family"] == "max")
    assert float(first_max["eps"]) == 0.0
    assert float(first_max["L"]) == pytest.approx(1.0, abs=1e-15)
    assert float(first_max["S"]) == pytest.approx(1.0, abs=1e-15)


def test_boundary_qubit_min_is_max(tmp_path):
    _, path = run(tmp_path, "boundary", "--d", "2", "--samples", "50")
    data = rows(path)
    assert {r["family"] for r in data} == {"max", "min", "inner"}
    for r in data:
        if r["family"] == "min":
            assert r["k"] == "1"
            assert float(r["S"]) == pytest.approx(infodiag.max_boundary_S(2, float(r["L"])), abs=1e-12)


def test_boundary_asymptotes(tmp_path):
    _, path = run(tmp_path, "boundary", "--d", "5", "--samples", "10", "--asymptotes")
    fams = {r["family"] for r in rows(path)}
    assert {"asym-pure-max", "asym-pure-min1", "asym-mixed-corner"} <= fams


def test_sample_inside_and_single_row(tmp_path):
    _, path = run(tmp_path, "sample", "--d", "5", "--n", "2000", "--seed", "1")
    data = rows(path)
    assert len(data) == 2000
    for r in data:
        assert infodiag.inside_diagram(5, InfoPoint(float(r["L"]), float(r["S"])))
    _, path = run(tmp_path, "sample", "--d", "2", "--n", "1", name="one.csv")
    (only,) = rows(path)
    assert only["rank"] in {"1", "2"}


def test_cat_surface_values(tmp_path):
    _, path = run(tmp_path, "cat-surface", "--D", "3", "--M", "1", "--N", "inf", "--grid", "0:1:0.5")
    pts = {(float(r["abs_alpha"]), float(r["abs_beta"])): r for r in rows(path)}
    assert float(pts[1.0, 1.0]["L"]) == pytest.approx(1.0) and float(pts[1.0, 1.0]["S"]) == pytest.approx(1.0)
    assert float(pts[0.0, 0.0]["L"]) == 0.0 and float(pts[0.0, 0.0]["S"]) == 0.0
    _, path = run(tmp_path, "cat-surface", "--M", "2", "--grid", "1:1:1", name="m2.csv")
    (r,) = rows(path)
    assert float(r["L"]) == pytest.approx(5 / 6)


def test_cat_surface_stationary_overlay(tmp_path):
    _, path = run(tmp_path, "cat-surface", "--grid", "0:1:1", "--stationary", "--lambda", "0:3:1")
    text = path.read_text()
    assert "# stationary curve" in text
    assert len(rows(path)) == 4 + 4


def test_lmg_qpt_variational(tmp_path):
    code, path = run(tmp_path, "lmg", "qpt", "--source", "variational", "--N", "inf")
    assert code == 0
    jumps = [(int(r["M"]), float(r["lambda_jump"])) for r in rows(path)]
    assert [j for M, j in jumps if M == 1] == pytest.approx([0.505, 1.505])
    assert [j for M, j in jumps if M == 2] == pytest.approx([0.505, 1.505])


def test_lmg_energy(tmp_path):
    _, path = run(tmp_path, "lmg", "energy", "--lambda", "0.25:1:0.75", "--N", "10")
    data = rows(path)
    assert float(data[0]["E0_analytic"]) == -1.0
    assert float(data[1]["E0_analytic"]) == pytest.approx(-1.125)
    assert data[0]["E_numeric"] != ""
    _, path = run(tmp_path, "lmg", "energy", "--lambda", "0.25", name="inf.csv")
    assert rows(path)[0]["E_numeric"] == ""


def test_lmg_sweep_numerical_small(tmp_path):
    _, path = run(tmp_path, "lmg", "sweep", "--source", "numerical", "--N", "8", "--lambda", "0:1:0.5")
    data = rows(path)
    assert [r["lambda"] for r in data] == ["0", "0.5", "1"]
    assert all(r["energy"] for r in data)


def test_header_line_reproduces_file(tmp_path):
    _, first = run(tmp_path, "cat-surface", "--M", "2", "--N", "9", "--grid", "0:2:0.5", "--stationary")
    words = shlex.split(first.read_text().splitlines()[0][1:])
    assert words[0] == "quditinfo" and "--seed" in words
    again = tmp_path / "again.csv"
    assert cli.main([*words[1:], "--out", str(again)]) == 0
    assert again.read_bytes() == first.read_bytes()


def test_deterministic_sampling(tmp_path):
    _, a = run(tmp_path, "sample", "--n", "300", "--seed", "5", name="a.csv")
    _, b = run(tmp_path, "sample", "--n", "300", "--seed", "5", name="b.csv")
    _, c = run(tmp_path, "sample", "--n", "300", "--seed", "6", name="c.csv")
    assert a.read_bytes() == b.read_bytes() != c.read_bytes()


def test_usage_errors(tmp_path, capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["boundary", "--bogus", "1"])
    assert exc.value.code == cli.EXIT_USAGE
    code, _ = run(tmp_path, "boundary", "--d", "1")
    assert code == cli.EXIT_USAGE
    code, _ = run(tmp_path, "lmg", "sweep", "--source", "numerical")
    assert code == cli.EXIT_USAGE


def test_unwritable_path(capsys):
    code = cli.main(["boundary", "--samples", "3", "--out", "/nonexistent-dir/x.csv"])
    assert code == cli.EXIT_FAIL
    assert "cannot write" in capsys.readouterr().err


def test_basis_cap_is_failure(tmp_path):
    code, _ = run(tmp_path, "lmg", "energy", "--N", "2000", "--lambda", "1")
    assert code == cli.EXIT_FAIL


def test_selfcheck_detects_broken_normalization(monkeypatch, capsys):
    from quditinfo import acceptance, spectra

    real = spectra.linear_entropy
    monkeypatch.setattr(spectra, "linear_entropy", lambda s: 0.99 * real(s))
    monkeypatch.setattr(acceptance, "CHECKS", acceptance.CHECKS[:1])
    assert cli.main(["selfcheck"]) == cli.EXIT_FAIL
    assert "FAIL 01" in capsys.readouterr().out
