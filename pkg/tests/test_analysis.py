import math

import numpy as np
import pytest
from scipy.integrate import quad

from ssqw_qfi import analysis
from ssqw_qfi.analysis import (
    ScanGrid,
    advantage_surface,
    avg_fisher_oqw,
    avg_fisher_ssqw,
    crossing_eta,
    golden_root,
    omega_min_ssqw,
    omega_oqw,
    omega_ssqw,
    optimal_theta2,
    precision_ratio,
    scan,
)
from ssqw_qfi.qfim import closed_form_fisher, finite_time_qfim

GOLDEN = (math.sqrt(5) - 1) / 2


@pytest.mark.parametrize("theta2", [0.0, 0.5, 1.7, math.pi, 4.0, 6.0])
def test_average_closed_vs_numeric(theta2):
    assert avg_fisher_ssqw(theta2, "numeric") == pytest.approx(avg_fisher_ssqw(theta2), abs=1e-9)


def test_average_numeric_against_dense_trapezoid():
    x = np.linspace(0, 2 * np.pi, 200_001)
    f = closed_form_fisher(x, 2.2)[:, 0, 0]
    assert np.trapezoid(f, x) / (2 * np.pi) == pytest.approx(avg_fisher_ssqw(2.2, "numeric"), abs=1e-6)


def test_average_with_r2_needs_numeric():
    with pytest.raises(ValueError):
        avg_fisher_ssqw(1.0, "closed", r2=0.5)
    with pytest.raises(ValueError):
        avg_fisher_ssqw(1.0, "bogus")
    assert avg_fisher_ssqw(1.0, "numeric", r2=0.5) < avg_fisher_ssqw(1.0, "numeric")


def test_oqw_average():
    ref, _ = quad(lambda x: math.sin(x / 2) / (1 + math.sin(x / 2)), 0, 2 * math.pi)
    assert avg_fisher_oqw() == pytest.approx(ref / (2 * math.pi), abs=1e-12)


def test_optimum_and_ratio():
    assert optimal_theta2() == pytest.approx(math.pi, abs=1e-6)
    assert precision_ratio() == pytest.approx(1 / (1 - 2 / math.pi), abs=1e-9)


def test_golden_root_and_eta():
    assert golden_root() == pytest.approx(GOLDEN, abs=1e-12)
    assert math.sin(crossing_eta() / 2) == pytest.approx(GOLDEN, abs=1e-12)
    assert crossing_eta() == pytest.approx(1.33247886499, abs=1e-10)


def test_omega_min_is_minimum_over_theta2():
    for t1 in (0.5, 1.4, 2.8, 4.1, 5.9):
        # the minimum sits on a kink, so the boundary points join the sample
        t2 = np.sort(np.r_[np.linspace(0, 2 * np.pi, 4001), t1, 2 * np.pi - t1])
        om = omega_ssqw(t1, t2)
        assert om.min() == pytest.approx(float(omega_min_ssqw(t1)), abs=1e-12)
        assert om.min() >= float(omega_min_ssqw(t1)) - 1e-12


def test_worst_case_f11_attained_on_whole_r1():
    # in R1, F11 = s1/(1+s1) independent of theta2
    f = closed_form_fisher(2.5, np.array([0.1, 0.5, 1.2, 5.5]))
    np.testing.assert_allclose(f[:, 0, 0], math.sin(1.25) / (1 + math.sin(1.25)), atol=1e-15)


def test_omega_oqw_formula():
    s = math.sin(0.8)
    assert float(omega_oqw(1.6)) == pytest.approx(s * (1 - s) / (1 + s))


def test_advantage_surface_layout():
    grid = ScanGrid((0.1, 1.0, 3), (2.0, 3.0, 4))
    rows = advantage_surface(grid)
    assert rows.shape == (12, 3)
    np.testing.assert_allclose(rows[:4, 0], 0.1)
    np.testing.assert_allclose(rows[:4, 1], np.linspace(2, 3, 4))
    np.testing.assert_allclose(rows[5, 2], omega_ssqw(0.55, 2 + 1 / 3) - omega_oqw(0.55))


def test_scan_grid_validation():
    with pytest.raises(ValueError):
        ScanGrid((0, 1, 1))
    with pytest.raises(ValueError):
        ScanGrid((0, 7, 5))
    with pytest.raises(ValueError):
        ScanGrid(quantity="nope")
    with pytest.raises(ValueError):
        ScanGrid(r2=2.0)
    with pytest.raises(ValueError):
        ScanGrid((0, 1, 5000), (0, 1, 5000))


@pytest.mark.parametrize("quantity", ["f11", "f22", "f12", "omega", "advantage"])
def test_scan_asymptotic_matches_closed(quantity):
    grid = ScanGrid((0.3, 5.9, 4), (0.4, 5.7, 3), quantity, r2=0.3)
    _, _, closed = scan(grid, "closed")
    _, _, asym = scan(grid, "asymptotic", max_workers=2)
    np.testing.assert_allclose(asym, closed, atol=1e-8)


def test_scan_asymptotic_handles_boundary_cells():
    grid = ScanGrid((0.5, 1.5, 3), (0.5, 1.5, 3))
    _, _, v = scan(grid, "asymptotic", max_workers=1)
    assert np.all(np.isfinite(v))


def test_scan_finite_and_oracle_agree():
    grid = ScanGrid((0.5, 2.5, 2), (1.0, 4.0, 2), "incompat", r2=0.5)
    _, _, a = scan(grid, "finite", t=6)
    _, _, b = scan(grid, "oracle", t=6)
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_scan_finite_is_normalized():
    grid = ScanGrid((0.5, 1.0, 2), (2.0, 3.0, 2))
    _, _, v = scan(grid, "finite", t=5)
    assert v[0] == pytest.approx(finite_time_qfim(0.5, 2.0, (0, 0, 1), 5).fisher[0, 0] / 25)


def test_scan_order_independent_of_threads(monkeypatch):
    grid = ScanGrid((0.2, 6.0, 5), (0.3, 6.1, 5), "f12")
    results = []
    for n in ("1", "4"):
        monkeypatch.setenv("SSQW_THREADS", n)
        results.append(scan(grid, "finite", t=4)[2])
    np.testing.assert_array_equal(results[0], results[1])


def test_scan_errors(monkeypatch):
    grid = ScanGrid(quantity="incompat")
    with pytest.raises(ValueError):
        scan(grid, "closed")
    with pytest.raises(ValueError):
        scan(grid, "asymptotic")
    with pytest.raises(ValueError):
        scan(ScanGrid(), "finite")
    with pytest.raises(ValueError):
        scan(ScanGrid(), "magic")
    monkeypatch.setenv("SSQW_THREADS", "lots")
    with pytest.raises(ValueError):
        analysis._max_workers()
