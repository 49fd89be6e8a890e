"""The recurrence map psi of the semiclassical Laguerre problem, its
coordinate change to the standard d-P(E6) equation, and the checks built on
them (equivalence, d-P_II relabelling, base points, BV residuals)."""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction

from .errors import ExceptionalLocus, Singular
from .reports import CheckResult
from .scalars import SQRT2, Poly, ProbeFraction, QuadExt, probe_limit
from .weyl import (
    MAX_RESAMPLES,
    PointConfig,
    phi_step,
    random_config,
    random_quad,
    random_rational,
    trial_rng,
)


@dataclass(frozen=True)
class XYState:
    lam: object
    s: object
    n: object
    x: object
    y: object

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, int):
                object.__setattr__(self, f.name, Fraction(v))

    def to_json(self) -> dict:
        return {f.name: str(getattr(self, f.name)) for f in fields(self)}


def sqrt2_like(*values):
    """sqrt(2) in the scalar field of ``values``: exact unless a big float is present."""
    for v in values:
        ctx = getattr(v, "context", None)
        if ctx is not None:
            return ctx.sqrt(2)
    return SQRT2


def psi_forward(st: XYState) -> XYState:
    """(x_n, y_n) -> (x_{n+1}, y_{n+1}); parameters step n -> n + 1."""
    lam, s, n, x, y = st.lam, st.s, st.n, st.x, st.y
    if x == 0:
        raise Singular("x = 0")
    if y == 0:
        raise Singular("y = 0")
    if y + lam == 0:
        raise Singular("y = -lambda")
    if y - n == 0:
        raise Singular("y = n")
    xb = (n - y) / (2 * x * y * (y + lam))
    poly = n * n - n * (2 + s * x) * y + (1 + s * x - 2 * lam * x * x) * y * y - 2 * x * x * y ** 3
    yb = -(y + lam) * poly / ((y - n) * (y - n))
    return XYState(lam, s, n + 1, xb, yb)


def xy_to_qp(st: XYState) -> PointConfig:
    lam, s, n, x, y = st.lam, st.s, st.n, st.x, st.y
    if x * y == 0:
        raise Singular("x*y = 0")
    r2 = sqrt2_like(lam, s, n, x, y)
    q = -r2 * x * y
    p = (n - y) / (r2 * x * y)
    return PointConfig(1 - lam, -n, n + lam, s / r2, q, p)


def qp_to_xy(c: PointConfig, lam) -> XYState:
    r2 = sqrt2_like(c.a1, c.t, c.q, c.p, lam)
    qp = c.q * c.p
    if c.a1 - qp == 0:
        raise Singular("a1 = qp")
    x = c.q / (r2 * (c.a1 - qp))
    y = qp - c.a1
    return XYState(lam, r2 * c.t, -c.a1, x, y)


def _equal(a: XYState, b: XYState) -> bool:
    return all(getattr(a, f.name) == getattr(b, f.name) for f in fields(a))


def theorem1_check(st: XYState) -> dict:
    """Compare psi with the standard step carried through the coordinate change.

    Returns a report dict; a singular state is reported, not counted as a
    failure.
    """
    try:
        direct = psi_forward(st)
        via = qp_to_xy(phi_step(xy_to_qp(st)), st.lam)
    except (Singular, ExceptionalLocus) as exc:
        return {"status": "singular", "reason": str(exc)}
    ok = _equal(direct, via)
    return {
        "status": "pass" if ok else "fail",
        "psi": direct.to_json(),
        "via_standard": via.to_json(),
    }


def random_state(rng) -> XYState:
    return XYState(
        random_rational(rng), random_rational(rng), random_rational(rng),
        random_quad(rng), random_quad(rng),
    )


def theorem1_batch(trials: int = 100, seed: int = 7) -> list[CheckResult]:
    equiv = CheckResult("psi = (coordinate change)^-1 o phi o (coordinate change)", trials)
    roundtrip = CheckResult("qp_to_xy o xy_to_qp = id", trials)
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        for _ in range(MAX_RESAMPLES):
            st = random_state(rng)
            report = theorem1_check(st)
            if report["status"] != "singular":
                break
            equiv.resamples += 1
        else:
            equiv.gave_up = True
            continue
        if report["status"] != "pass":
            equiv.record_failure({"trial": trial, "state": st.to_json(), **report})
        back = qp_to_xy(xy_to_qp(st), st.lam)
        if not _equal(back, st):
            roundtrip.record_failure({"trial": trial, "state": st.to_json(), "back": back.to_json()})
    return [equiv, roundtrip]


# --------------------------------------------------------------------------
# d-P_II relabelling
# --------------------------------------------------------------------------


def sk7_check(c: PointConfig) -> dict:
    """Check one phi step against f + fbar = t - g + b0/g and
    g + gbar = t - fbar - (b2 - 1)/fbar with f = -q, g = p, b0 = a2, b1 = a0,
    b2 = a1."""
    try:
        nxt = phi_step(c)
    except ExceptionalLocus as exc:
        return {"status": "singular", "reason": str(exc)}
    f, g, fb, gb = -c.q, c.p, -nxt.q, nxt.p
    b0, b1, b2 = c.a2, c.a0, c.a1
    checks = {
        "first": f + fb == c.t - g + b0 / g,
        "second": g + gb == c.t - fb - (b2 - 1) / fb,
        "root_sum": b0 + b1 + b2 == c.root_sum(),
    }
    return {"status": "pass" if all(checks.values()) else "fail", "checks": checks}


def sk7_batch(trials: int = 100, seed: int = 7) -> CheckResult:
    result = CheckResult("d-P_II relabelling of the standard step", trials)
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        for _ in range(MAX_RESAMPLES):
            c = random_config(rng, normalized=True)
            report = sk7_check(c)
            if report["status"] != "singular":
                break
            result.resamples += 1
        else:
            result.gave_up = True
            continue
        if report["status"] != "pass":
            result.record_failure({"trial": trial, "point": c.to_json(), **report})
    return result


# --------------------------------------------------------------------------
# Orbits
# --------------------------------------------------------------------------


def orbit(st: XYState, steps: int) -> list[XYState]:
    states = [st]
    for _ in range(steps):
        states.append(psi_forward(states[-1]))
    return states


# --------------------------------------------------------------------------
# Base points
# --------------------------------------------------------------------------


def _xbar_affine(x, y, lam, n):
    return n - y, 2 * x * y * (y + lam)


def _xbar_big_x(X, y, lam, n):
    # x = 1/X, numerator and denominator multiplied through by X
    return (n - y) * X, 2 * y * (y + lam)


def _xbar_big_y(x, Y, lam, n):
    # y = 1/Y, numerator and denominator multiplied through by Y**3
    return Y * (n * Y - 1), 2 * x * (1 + lam * Y)


# name, chart, chart formula for xbar, location in chart coordinates
BASE_POINT_CHARTS = (
    ("q1", "(x,y)", _xbar_affine, lambda lam, s, n: (0, n)),
    ("q2", "(X,y)", _xbar_big_x, lambda lam, s, n: (0, -lam)),
    ("q3", "(X,y)", _xbar_big_x, lambda lam, s, n: (0, 0)),
    ("q4", "(x,Y)", _xbar_big_y, lambda lam, s, n: (0, 0)),
)

PROBE_DIRECTIONS = ((1, 1), (1, -2))

# Values of W (the free fifth-order coefficient of the probe curve) at which
# the cascade limits are evaluated.
PROBE_W_VALUES = (Fraction(0), Fraction(1), Fraction(-7, 3))


def cascade_value(lam, s, n):
    return 2 * (s * s + 2 * (n + lam - 1))


def probe_curve(lam, s, n, w) -> tuple[ProbeFraction, ProbeFraction]:
    """x = eps, y = 1/(2 eps^2 - 2 s eps^3 + V eps^4 + W eps^5)."""
    v = cascade_value(lam, s, n)
    denom = Poly([0, 0, 2, -2 * s, v, w])
    return ProbeFraction.eps(), ProbeFraction(1, denom)


def cascade_charts(x: ProbeFraction, y: ProbeFraction, s) -> dict:
    return {
        "Y": 1 / y,
        "v4": 1 / (x * y),
        "v5": 1 / (x * x * y),
        "v6": (1 - 2 * x * x * y) / (x ** 3 * y),
        "v7": (1 - 2 * x * x * y + 2 * s * x ** 3 * y) / (x ** 4 * y),
    }


def _limit_json(lim) -> dict:
    return {
        "value": None if lim.pole else str(lim.value),
        "pole": lim.pole,
        "num_order": lim.num_order,
        "den_order": lim.den_order,
    }


def base_points_verify(lam, s, n) -> dict:
    """Exact verification of the base points q1..q8 of psi.

    (i) at q1..q4 the xbar component, written in the listed chart, is 0/0
    along lines through the point, with a limit that depends on direction;
    (ii) along the probe curve through the q4..q8 cascade the chart
    functions tend to (0, 0, 2, -2s, V) and psi tends to (0, n + 1).
    """
    lam, s, n = (QuadExt.coerce(v) for v in (lam, s, n))
    report = {"params": {"lambda": str(lam), "s": str(s), "n": str(n)}, "points": [], "cascade": []}
    failures = []

    for name, chart, formula, where in BASE_POINT_CHARTS:
        u0, v0 = where(lam, s, n)
        entry = {"point": name, "chart": chart, "location": [str(u0), str(v0)], "lines": []}
        limits = []
        for a, b in PROBE_DIRECTIONS:
            u = Poly([u0, a])
            v = Poly([v0, b])
            num, den = formula(u, v, lam, n)
            lim = probe_limit(ProbeFraction(num, den))
            limits.append(lim)
            entry["lines"].append({"direction": [a, b], **_limit_json(lim)})
        entry["zero_over_zero"] = all(lim.indeterminate for lim in limits)
        entry["direction_dependent"] = len({None if l.pole else l.value for l in limits}) > 1
        if not entry["zero_over_zero"]:
            failures.append(f"{name}: xbar is not 0/0 in chart {chart}")
        if not entry["direction_dependent"]:
            failures.append(f"{name}: limit does not depend on direction")
        report["points"].append(entry)

    expected = {
        "x": QuadExt(0),
        "Y": QuadExt(0),
        "v4": QuadExt(0),
        "v5": QuadExt(2),
        "v6": -2 * s,
        "v7": cascade_value(lam, s, n),
        "xbar": QuadExt(0),
        "ybar": n + 1,
    }
    for w in PROBE_W_VALUES:
        x, y = probe_curve(lam, s, n, w)
        values = {"x": x, **cascade_charts(x, y, s)}
        image = psi_forward(XYState(lam, s, n, x, y))
        values["xbar"], values["ybar"] = image.x, image.y
        entry = {"W": str(w), "limits": {}}
        for key, f in values.items():
            lim = probe_limit(f)
            entry["limits"][key] = _limit_json(lim)
            if lim.pole or lim.value != expected[key]:
                got = "pole" if lim.pole else str(lim.value)
                failures.append(f"W={w}: {key} -> {got}, expected {expected[key]}")
        report["cascade"].append(entry)

    report["expected"] = {k: str(v) for k, v in expected.items()}
    report["failures"] = failures
    report["passed"] = not failures
    return report


# --------------------------------------------------------------------------
# BV system residuals on recurrence data
# --------------------------------------------------------------------------


def bv_variables(table):
    """xt_n = sqrt2/(s - 2 alpha_n), yt_n = 2 beta_n - n - lambda/2."""
    ctx = table.ctx
    lam, s = table.lam, table.s
    r2 = ctx.sqrt(2)
    xt, yt = [], []
    for k, (a, b) in enumerate(zip(table.alpha, table.beta)):
        d = s - 2 * a
        if d == 0:
            raise Singular("s = 2 alpha_n", n=k)
        xt.append(r2 / d)
        yt.append(2 * b - k - lam / 2)
    return xt, yt


def bv_residuals(table) -> dict:
    """Residuals of the BV system, keyed by n.

    r1 is defined for n = 1..N and r2 for n = 0..N-1.
    """
    if len(table.alpha) < 3:
        raise ValueError("need at least three recurrence coefficients")
    ctx = table.ctx
    lam, s = table.lam, table.s
    xt, yt = bv_variables(table)
    top = len(xt) - 1
    c = s / ctx.sqrt(2)
    r1 = {k: xt[k - 1] * xt[k] * (yt[k] ** 2 - lam ** 2 / 4) - (yt[k] + k + lam / 2)
          for k in range(1, top + 1)}
    r2 = {k: (yt[k] + yt[k + 1]) * xt[k] ** 2 - c * xt[k] + 1 for k in range(0, top)}
    return {"xt": xt, "yt": yt, "r1": r1, "r2": r2}
