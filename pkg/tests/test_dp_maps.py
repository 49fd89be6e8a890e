import random
from fractions import Fraction as F

import pytest
import sympy
from hypothesis import assume, given
from hypothesis import strategies as st

from e6painleve.dp_maps import (
    BASE_POINT_CHARTS, XYState, base_points_verify, cascade_charts, cascade_value, orbit,
    psi_forward, qp_to_xy, sk7_batch, sk7_check, theorem1_batch, theorem1_check, xy_to_qp,
)
from e6painleve.errors import Singular
from e6painleve.orthopoly import system_residuals
from e6painleve.scalars import SQRT2, Poly, ProbeFraction, QuadExt, probe_limit
from e6painleve.weyl import PointConfig, phi_step, random_config, trial_rng
from strategies import quads, rationals

EXAMPLE = XYState(1, 0, 1, 1, 2)


def test_psi_example():
    assert psi_forward(EXAMPLE) == XYState(1, 0, 2, F(-1, 12), 69)


def test_coordinate_change_example():
    c = xy_to_qp(EXAMPLE)
    assert c == PointConfig(0, -1, 2, 0, QuadExt(0, -2), QuadExt(0, F(-1, 4)))
    assert c.root_sum() == 1
    assert c.q * c.p - c.a1 == EXAMPLE.y
    assert qp_to_xy(c, 1) == EXAMPLE


def test_theorem1_example():
    assert theorem1_check(EXAMPLE)["status"] == "pass"


def test_singular_state_is_not_a_failure():
    assert theorem1_check(XYState(1, 0, 3, 2, 3))["status"] == "singular"
    with pytest.raises(Singular):
        psi_forward(XYState(1, 0, 3, 2, 3))


# --------------------------------------------------------------------------
# psi against an independent symbolic solve of its defining relations


_xb, _yb = sympy.symbols("xb yb")


def _psi_oracle(lam, s, n, x, y):
    lam, s, n, x, y = (sympy.Rational(v.numerator, v.denominator) for v in (lam, s, n, x, y))
    # x_n x_{n+1} (2 y_n^2 + 2 lam y_n) = n - y_n
    xb = sympy.solve(x * _xb * (2 * y ** 2 + 2 * lam * y) - (n - y), _xb)[0]
    # 2 x_{n+1}^2 (y_{n+1} + y_n) + 2 lam x_{n+1}^2 - s x_{n+1} - 1 = 0
    yb = sympy.solve(2 * xb ** 2 * (_yb + y) + 2 * lam * xb ** 2 - s * xb - 1, _yb)[0]
    return F(str(xb)), F(str(yb))


@given(rationals, rationals, rationals, rationals, rationals)
def test_psi_matches_symbolic_oracle(lam, s, n, x, y):
    st_ = XYState(lam, s, n, x, y)
    try:
        got = psi_forward(st_)
    except Singular:
        assume(False)
    assert (got.x, got.y) == _psi_oracle(lam, s, n, x, y)


@given(rationals, rationals, rationals, quads, quads)
def test_coordinate_round_trip(lam, s, n, x, y):
    st_ = XYState(lam, s, n, x, y)
    try:
        back = qp_to_xy(xy_to_qp(st_), lam)
    except Singular:
        assume(False)
    assert back == st_


@given(rationals, rationals, rationals, quads, quads)
def test_theorem1_property(lam, s, n, x, y):
    report = theorem1_check(XYState(lam, s, n, x, y))
    assume(report["status"] != "singular")
    assert report["status"] == "pass", report


def test_orbit_satisfies_both_relations_exactly():
    states = orbit(EXAMPLE, 4)
    res = system_residuals(states, "XYN")
    assert res["g1"] and all(v == 0 for v in res["g1"].values())
    assert res["g2"] and all(v == 0 for v in res["g2"].values())


def test_orbit_image_satisfies_standard_equation():
    states = orbit(XYState(F(1, 2), 1, 1, F(2, 3), F(5, 7)), 3)
    res = system_residuals(states, "DP")
    assert not res["singular"]
    assert all(v == 0 for v in res["d1"].values())
    assert all(v == 0 for v in res["d2"].values())


def test_batches():
    equiv, roundtrip = theorem1_batch(trials=100, seed=7)
    assert equiv.passed and roundtrip.passed
    assert sk7_batch(trials=100, seed=7).passed


@given(st.integers(0, 10 ** 6))
def test_sk7_property(seed):
    c = random_config(trial_rng(seed, 0), normalized=True)
    assert sk7_check(c)["status"] in ("pass", "singular")


def test_sk7_labels_matter():
    # with b0 and b2 swapped the first relation no longer holds
    c = random_config(trial_rng(11, 0), normalized=True)
    nxt = phi_step(c)
    f, g, fb = -c.q, c.p, -nxt.q
    assert f + fb == c.t - g + c.a2 / g
    assert f + fb != c.t - g + c.a1 / g


# --------------------------------------------------------------------------
# Base points


def test_chart_formulas_agree_with_psi():
    lam, s, n = F(1, 2), F(1), F(3)
    x, y = F(2, 5), F(7, 3)
    xb = psi_forward(XYState(lam, s, n, x, y)).x
    by_name = {name: fn for name, _, fn, _ in BASE_POINT_CHARTS}
    num, den = by_name["q1"](x, y, lam, n)
    assert num / den == xb
    num, den = by_name["q2"](1 / x, y, lam, n)
    assert num / den == xb
    num, den = by_name["q4"](x, 1 / y, lam, n)
    assert num / den == xb


def test_cascade_example():
    report = base_points_verify(F(1, 2), 1, 3)
    assert report["passed"], report["failures"]
    assert report["expected"]["v5"] == "2"
    assert report["expected"]["ybar"] == "4"
    assert cascade_value(F(1, 2), 1, 3) == 2 * (1 + 2 * (3 + F(1, 2) - 1))


@pytest.mark.parametrize("trial", range(5))
def test_base_points_random_generic(trial):
    rng = random.Random(f"basepoints:{trial}")
    lam, s, n = (F(rng.randint(-30, 30), rng.randint(1, 9)) for _ in range(3))
    assert base_points_verify(lam, s, n)["passed"]


def test_perturbed_probe_misses_the_cascade():
    lam, s, n = QuadExt(F(1, 2)), QuadExt(1), QuadExt(3)
    v = cascade_value(lam, s, n)
    x = ProbeFraction.eps()
    y = ProbeFraction(1, Poly([0, 0, 2, -2 * s, v + 1]))
    assert probe_limit(cascade_charts(x, y, s)["v7"]).value == v + 1
    image = psi_forward(XYState(lam, s, n, x, y))
    assert probe_limit(image.y).value != n + 1


def test_sqrt2_stays_exact():
    c = xy_to_qp(XYState(F(1, 3), 2, 4, F(1, 2), 3))
    assert c.t == QuadExt(0, 1)  # 2 / sqrt(2)
    assert isinstance(c.q, QuadExt) and c.q == -SQRT2 * F(3, 2)
