import math
import os

import pytest

import xiprime

DATA = os.environ.get("XIPRIME_TEST_DATA", os.path.join(os.path.dirname(__file__), "..", "data"))


def test_special_values():
    assert abs(xiprime.Z(14.134725142)) < 1e-8
    assert abs(xiprime.zeta(2.0) - math.pi**2 / 6) < 1e-12
    value, err = xiprime.Xi(10.0)
    assert math.isfinite(value) and err >= 0


def test_find_zeros_matches_table():
    zs = xiprime.find_zeros("xi", 10.0, 100.0)
    with open(os.path.join(DATA, "zeta_zeros_first30.txt")) as f:
        ref = [float(line) for line in f if line.strip() and not line.startswith("#")]
    assert len(zs) == 29
    for a, b in zip(zs.ordinates, ref):
        assert abs(a - b) < 1e-8


def test_interlacing_and_count():
    xi = xiprime.find_zeros("xi", 0.0, 500.0)
    xip = xiprime.find_zeros("xi-prime", 0.0, 500.0)
    pairs, violations = xiprime.interlacing(xi, xip)
    assert pairs > 0 and violations == 0
    assert xiprime.n1_minus_n(xi, xip) in (-1, 0, 1)


def test_arith_and_form_factor():
    table = xiprime.build_tables(10000, 2)
    assert table.n_max == 10000
    assert math.isfinite(xiprime.S_sum(table, 1, 1, 1000.0))
    zs = xiprime.find_zeros("xi", 0.0, 1000.0)
    curve = xiprime.form_factor(zs, 1000.0, xiprime.alpha_grid(0.0, 1.0, 0.25))
    assert len(curve.empirical) == 5
    assert xiprime.ah_theory_F(1.0) == pytest.approx(1.0)


def test_explicit_formula_rhs():
    table = xiprime.build_tables(100, 5)
    v = xiprime.ef_rhs(10.0, 50.0, 1.5, 5, table)
    assert isinstance(v, complex)


def test_errors_translate():
    with pytest.raises(xiprime.Error) as info:
        xiprime.find_zeros("bogus", 0.0, 10.0)
    assert info.value.exit_code == 2
    with pytest.raises(xiprime.Error):
        xiprime.import_zeros("/nonexistent/zeros.txt")


def test_run_pipeline(tmp_path):
    paths = xiprime.run_pipeline(
        "fig3", {"t_max": "300", "cache_dir": str(tmp_path / "cache")}, tmp_path / "out"
    )
    assert paths and all(os.path.exists(p) for p in paths)
