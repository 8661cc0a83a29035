import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ssqw_qfi import qfim
from ssqw_qfi.errors import (
    BoundaryRegionError,
    SingularFisherError,
)
from ssqw_qfi.kspace import Region
from ssqw_qfi.qfim import (
    QfimResult,
    asymptotic_qfim,
    bounds,
    closed_form_fisher,
    closed_form_qfim,
    finite_time_qfim,
    incompatibility,
    oqw_fisher,
)
from ssqw_qfi.walk import WalkSpec, oracle_qfim


def pure(r2, phase=0.3):
    rest = math.sqrt(1 - r2**2)
    return (rest * math.sin(phase), r2, rest * math.cos(phase))


@pytest.mark.parametrize(
    "theta1, theta2, r, t",
    [
        (1.0, 2.0, (0, 0, 1), 1),
        (0.4, 5.0, (0, 1, 0), 7),
        (2.7, 0.8, pure(0.5), 15),
        (math.pi / 2, 0.0, (1, 0, 0), 20),
        (1.3, 1.3, pure(0.2), 9),
    ],
)
def test_finite_time_matches_oracle(theta1, theta2, r, t):
    a = finite_time_qfim(theta1, theta2, r, t)
    b = oracle_qfim(WalkSpec(theta1, theta2, t, r))
    np.testing.assert_allclose(a.fisher, b.fisher, atol=1e-9)
    np.testing.assert_allclose(a.uhlmann, b.uhlmann, atol=1e-9)


def test_finite_time_quadrature_exact_at_default_nodes():
    base = finite_time_qfim(1.1, 2.9, pure(0.4), 13)
    more = finite_time_qfim(1.1, 2.9, pure(0.4), 13, n_nodes=8 * 13 + 16)
    np.testing.assert_allclose(base.fisher, more.fisher, atol=1e-12)
    np.testing.assert_allclose(base.uhlmann, more.uhlmann, atol=1e-12)


def test_finite_time_too_few_nodes_differs():
    base = finite_time_qfim(1.1, 2.9, pure(0.4), 13)
    few = finite_time_qfim(1.1, 2.9, pure(0.4), 13, n_nodes=7)
    assert np.abs(base.fisher - few.fisher).max() > 1e-6


def test_finite_time_validation():
    with pytest.raises(ValueError):
        finite_time_qfim(1.0, 2.0, (0, 0, 1), 0)
    with pytest.raises(ValueError):
        finite_time_qfim(1.0, 2.0, (0, 0, 0.5), 3)
    with pytest.raises(ValueError):
        finite_time_qfim(1.0, 2.0, (0, 0, 1), 3, n_nodes=0)


def test_symmetric_line_equal_diagonal():
    for t in (3, 10):
        f = finite_time_qfim(1.2, 1.2, (0, 0, 1), t).fisher
        assert f[0, 0] == pytest.approx(f[1, 1], abs=1e-10)


def test_uhlmann_vanishes_for_r2_zero():
    for phase in (0.0, 0.7, 2.0):
        res = finite_time_qfim(0.8, 2.4, pure(0.0, phase), 60)
        assert abs(res.uhlmann[0, 1]) < 1e-9 * res.fisher[0, 0]


def test_uhlmann_grows_linearly_for_r2_nonzero():
    d = [abs(finite_time_qfim(0.8, 2.4, pure(0.6), t).uhlmann[0, 1]) for t in (50, 100, 200)]
    slopes = np.diff(np.log(d)) / np.log(2)
    np.testing.assert_allclose(slopes, 1.0, atol=0.15)


@pytest.mark.parametrize("theta1, theta2", [(0.7, 2.2), (2.5, 1.0), (4.5, 0.6), (5.3, 3.5)])
@pytest.mark.parametrize("r2", [0.0, 0.5, 1.0])
def test_asymptotic_matches_closed(theta1, theta2, r2):
    a = asymptotic_qfim(theta1, theta2, pure(r2))
    c = closed_form_qfim(theta1, theta2, r2)
    np.testing.assert_allclose(a.fisher, c.fisher, atol=1e-8)
    assert a.region is c.region
    assert a.flags == ()


@pytest.mark.parametrize("r2", [0.0, 0.7])
def test_closed_form_is_large_t_limit(r2):
    f200 = finite_time_qfim(0.9, 2.3, pure(r2), 200).fisher / 200**2
    f400 = finite_time_qfim(0.9, 2.3, pure(r2), 400).fisher / 400**2
    # one Richardson step removes the leading 1/t term
    extrap = 2 * f400 - f200
    np.testing.assert_allclose(extrap, closed_form_fisher(0.9, 2.3, r2), atol=2e-4)


def test_asymptotic_boundary_raises():
    with pytest.raises(BoundaryRegionError):
        asymptotic_qfim(1.0, 1.0, (0, 0, 1))
    with pytest.raises(BoundaryRegionError):
        asymptotic_qfim(1.0, 2 * math.pi - 1.0, (0, 0, 1))


def test_asymptotic_near_boundary_falls_back():
    res = asymptotic_qfim(1.0, 1.0 + 1e-4, (0, 0, 1))
    assert "closed-form-fallback" in res.flags
    np.testing.assert_allclose(res.fisher, closed_form_fisher(1.0, 1.0 + 1e-4))


def test_asymptotic_mixed_state_flag():
    res = asymptotic_qfim(0.7, 2.2, (0, 0.3, 0.5))
    assert "extrapolated" in res.flags


def test_closed_form_special_values():
    f = closed_form_qfim(math.pi / 2, math.pi).fisher
    np.testing.assert_allclose(f, [[1.0, 0.0], [0.0, 0.5]], atol=1e-15)


@pytest.mark.parametrize("theta", [0.3, 1.0, 2.0, 2.9])
def test_closed_form_boundary_limit(theta):
    s = math.sin(theta / 2)
    lim = s / (1 + s)
    np.testing.assert_allclose(closed_form_fisher(theta, theta), [[lim, lim], [lim, lim]], atol=1e-12)
    anti = closed_form_fisher(theta, 2 * math.pi - theta)
    np.testing.assert_allclose(anti, [[lim, -lim], [-lim, lim]], atol=1e-12)


@settings(max_examples=100)
@given(st.floats(0.05, 2 * math.pi - 0.05).filter(lambda x: abs(x - math.pi) > 0.05))
def test_branches_agree_on_boundary(theta):
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    for c2 in (c, -c):  # theta2 = theta and theta2 = 2 pi - theta
        a0 = np.array(qfim._branch_r0(c, s, c2, s))
        a1 = np.array(qfim._branch_r1(c, s, c2, s))
        np.testing.assert_allclose(a0, a1, atol=1e-10)


def test_closed_form_continuous_across_boundary():
    for theta in (0.8, 2.0, 4.4):
        eps = 1e-7
        below = closed_form_fisher(theta, theta - eps)
        above = closed_form_fisher(theta, theta + eps)
        on = closed_form_fisher(theta, theta)
        np.testing.assert_allclose(below, on, atol=1e-5)
        np.testing.assert_allclose(above, on, atol=1e-5)


@given(st.floats(0, 2 * math.pi), st.floats(0, 2 * math.pi), st.floats(-1, 1))
def test_closed_form_positive_semidefinite(t1, t2, r2):
    f = closed_form_fisher(t1, t2, r2)
    if np.all(np.isfinite(f)):
        assert np.linalg.eigvalsh(f).min() > -1e-9 * max(1.0, np.abs(f).max())


def test_closed_form_broadcasts():
    t1 = np.linspace(0.1, 6.0, 7)
    out = closed_form_fisher(t1[:, None], t1[None, :], 0.3)
    assert out.shape == (7, 7, 2, 2)
    np.testing.assert_allclose(out[2, 5], closed_form_fisher(t1[2], t1[5], 0.3))


@pytest.mark.parametrize("t1, t2", [(math.pi, 4.0), (2.0, math.pi), (math.pi - 1e-9, 1.0), (math.pi, math.pi)])
def test_closed_form_finite_on_coin_singular_lines(t1, t2):
    # the vanishing branch denominator never occurs inside its own region
    f = closed_form_qfim(t1, t2).fisher
    assert np.all(np.isfinite(f))


def test_closed_form_rejects_bad_r2():
    with pytest.raises(ValueError):
        closed_form_qfim(1.0, 2.0, r2=1.5)


def test_oqw_cross_section():
    # theta2 = 0 lies in R1 for theta1 > 0, where F11 is the ordinary-walk value
    th = np.linspace(0.1, 6.0, 9)
    np.testing.assert_allclose(closed_form_fisher(th, 0.0)[:, 0, 0], oqw_fisher(th), atol=1e-15)


def test_incompatibility_two_parameter_formula():
    f = np.array([[2.0, 0.3], [0.3, 1.0]])
    d = np.array([[0.0, 0.5], [-0.5, 0.0]])
    assert incompatibility(f, d) == pytest.approx(0.5 / math.sqrt(np.linalg.det(f)))


def test_incompatibility_clipped_and_singular():
    assert incompatibility(np.eye(2) * 0.1, [[0, 5], [-5, 0]]) == 1.0
    with pytest.raises(SingularFisherError):
        incompatibility([[1, 1], [1, 1]], np.zeros((2, 2)))


def test_bounds_bracket():
    f = np.array([[2.0, 0.0], [0.0, 4.0]])
    d = np.array([[0.0, 1.0], [-1.0, 0.0]])
    lo, hi = bounds(f, d)
    assert lo == pytest.approx(0.75)
    assert hi == pytest.approx(0.75 * (1 + 1 / math.sqrt(8)))
    lo_g, _ = bounds(f, d, cost=np.diag([2.0, 0.0]))
    assert lo_g == pytest.approx(1.0)


def test_result_round_trip_through_json():
    res = finite_time_qfim(1.0, 2.5, pure(0.4), 8)
    back = QfimResult.from_dict(json.loads(json.dumps(res.to_dict())))
    assert back.to_dict() == res.to_dict()
    np.testing.assert_array_equal(back.fisher, res.fisher)


def test_result_is_immutable():
    res = closed_form_qfim(0.5, 2.0)
    with pytest.raises(ValueError):
        res.fisher[0, 0] = 1.0
    with pytest.raises(AttributeError):
        res.method = "other"


def test_result_region_and_winding():
    assert closed_form_qfim(0.5, 2.0).winding == 1
    assert closed_form_qfim(2.0, 0.5).winding == 0
    res = closed_form_qfim(1.0, 1.0)
    assert res.region is Region.BOUNDARY and res.winding is None
    assert abs(res.det_fisher) < 1e-12
