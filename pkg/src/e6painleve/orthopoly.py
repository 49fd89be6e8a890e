"""Recurrence coefficients of monic polynomials orthogonal on (0, oo) with
weight x**lam * exp(-x**2 + s*x), and residuals of the identities they obey.

Moments come from two quadratures (k = 0, 1) and the integration-by-parts
recurrence 2 mu_{k+1} = s mu_k + (lam + k) mu_{k-1}; the recurrence
coefficients come from the Chebyshev algorithm.  Everything runs in a private
mpmath context at the requested precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from .dp_maps import XYState, bv_residuals, xy_to_qp
from .errors import PrecisionExhausted, Singular
from .quadrature import half_line_integrals
from .scalars import DEFAULT_PRECISION, real_context, to_fraction

GUARD_BITS = 32
DEFAULT_TOLERANCE = "1e-30"
MAX_DOUBLINGS = 3


@dataclass(frozen=True)
class WeightParams:
    lam: Fraction
    s: Fraction
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "lam", to_fraction(self.lam))
        object.__setattr__(self, "s", to_fraction(self.s))
        if self.lam <= -1:
            raise ValueError("the weight needs lambda > -1")
        if self.precision < 64:
            raise ValueError("precision must be at least 64 bits")

    def context(self, extra_bits: int = 0):
        return real_context(self.precision + extra_bits)


def _mpf(ctx, q: Fraction):
    return ctx.mpf(q.numerator) / q.denominator


@dataclass
class MomentTable:
    params: WeightParams
    mu: list
    ctx: object

    @property
    def K(self) -> int:
        return len(self.mu) - 1


@dataclass
class RecurrenceTable:
    params: WeightParams
    alpha: list
    beta: list
    h: list
    ctx: object
    losses: list = field(default_factory=list)

    @property
    def N(self) -> int:
        return len(self.alpha) - 1

    @property
    def lam(self):
        return _mpf(self.ctx, self.params.lam)

    @property
    def s(self):
        return _mpf(self.ctx, self.params.s)


@dataclass
class LadderTable:
    R: list
    r: list


def _integrand(ctx, lam, s, kmax):
    def f(x):
        base = ctx.exp(lam * ctx.log(x) - x * x + s * x)
        out = [base]
        for _ in range(kmax):
            out.append(out[-1] * x)
        return out

    return f


def quadrature_moments(params: WeightParams, kmax: int) -> list:
    """mu_0..mu_kmax by direct double-exponential quadrature."""
    ctx = params.context(GUARD_BITS)
    lam, s = _mpf(ctx, params.lam), _mpf(ctx, params.s)
    target = ctx.mpf(2) ** (20 - params.precision - GUARD_BITS)
    split = max(ctx.mpf(1), s)
    values, _ = half_line_integrals(_integrand(ctx, lam, s, kmax), split, ctx, target)
    out_ctx = params.context()
    return [out_ctx.mpf(v) for v in values]


def base_moments(params: WeightParams) -> tuple:
    mu0, mu1 = quadrature_moments(params, 1)
    return mu0, mu1


def extend_moments(mu0, mu1, params: WeightParams, K: int) -> MomentTable:
    if K < 2:
        raise ValueError("K must be at least 2")
    ctx = params.context()
    lam, s = _mpf(ctx, params.lam), _mpf(ctx, params.s)
    mu = [ctx.mpf(mu0), ctx.mpf(mu1)]
    for k in range(1, K):
        mu.append((s * mu[k] + (lam + k) * mu[k - 1]) / 2)
    return MomentTable(params, mu, ctx)


def moment_table(params: WeightParams, K: int) -> MomentTable:
    mu0, mu1 = base_moments(params)
    return extend_moments(mu0, mu1, params, K)


SHADOW_BITS = 32


def _chebyshev(mu, N, ctx):
    width = 2 * N + 2
    alpha = [mu[1] / mu[0]]
    beta = [ctx.mpf(0)]
    h = [mu[0]]
    prev = [ctx.mpf(0)] * width
    cur = list(mu[:width])
    for k in range(1, N + 1):
        nxt = [ctx.mpf(0)] * width
        for l in range(k, width - k):
            nxt[l] = cur[l + 1] - alpha[k - 1] * cur[l] - beta[k - 1] * prev[l]
        if nxt[k] <= 0:
            return alpha, beta, h, k
        h.append(nxt[k])
        beta.append(nxt[k] / cur[k - 1])
        alpha.append(nxt[k + 1] / nxt[k] - cur[k] / cur[k - 1])
        prev, cur = cur, nxt
    return alpha, beta, h, None


def _bits_lost(ctx, shadow_prec, a, b):
    """Bits lost in ``b`` computed at ``shadow_prec``, judged against ``a``."""
    if a == b:
        return 0.0
    scale = abs(a) if a != 0 else 1
    rel = abs(a - b) / scale
    if rel >= 1:
        return float(shadow_prec)
    return max(0.0, shadow_prec + float(ctx.log(rel, 2)))


def recurrence_from_moments(m: MomentTable, N: int) -> RecurrenceTable:
    """Chebyshev algorithm: alpha_0..alpha_N, beta_0..beta_N, h_0..h_N.

    Needs mu_0..mu_{2N+1}.  The recursion is repeated on the same moments
    rounded to fewer bits; ``losses[n]`` is the number of bits by which that
    shadow run's alpha_n, beta_n disagree, i.e. the cancellation suffered up
    to row n.  PrecisionExhausted is raised when fewer than 8 bits survive.
    """
    if m.K < 2 * N + 1:
        raise ValueError(f"need {2 * N + 2} moments for N = {N}, have {m.K + 1}")
    ctx = m.ctx
    prec = ctx.prec
    alpha, beta, h, broken = _chebyshev(m.mu, N, ctx)
    if broken is not None:
        raise PrecisionExhausted(f"h_{broken} lost its sign at {prec} bits")
    shadow_prec = prec - SHADOW_BITS
    shadow = real_context(max(shadow_prec, 64))
    s_alpha, s_beta, _, s_broken = _chebyshev([shadow.mpf(v) for v in m.mu], N, shadow)
    losses = []
    for n in range(N + 1):
        if s_broken is not None and n >= s_broken:
            lost = float(shadow_prec)
        else:
            lost = max(
                _bits_lost(ctx, shadow_prec, alpha[n], s_alpha[n]),
                _bits_lost(ctx, shadow_prec, beta[n], s_beta[n]) if n else 0.0,
            )
        losses.append(lost)
        if prec - lost < 8:
            raise PrecisionExhausted(f"all {prec} bits lost by n = {n}", losses)
    return RecurrenceTable(m.params, alpha, beta, h, ctx, losses)


def ladder_tables(rt: RecurrenceTable) -> LadderTable:
    """R_n = 2 alpha_n - s and r_n = 2 beta_n - n (so r_0 = 0)."""
    s = rt.s
    R = [2 * a - s for a in rt.alpha]
    r = [2 * b - k for k, b in enumerate(rt.beta)]
    return LadderTable(R, r)


def identity_residuals(rt: RecurrenceTable, lt: LadderTable) -> dict:
    """e2(n) = r_n + r_{n-1} - lam + alpha_{n-1} R_{n-1} and
    e4(n) = r_n^2 - lam r_n - beta_n R_{n-1} R_n, for n = 1..N."""
    lam = rt.lam
    R, r = lt.R, lt.r
    e2 = {n: r[n] + r[n - 1] - lam + rt.alpha[n - 1] * R[n - 1] for n in range(1, rt.N + 1)}
    e4 = {n: r[n] ** 2 - lam * r[n] - rt.beta[n] * R[n - 1] * R[n] for n in range(1, rt.N + 1)}
    return {"e2": e2, "e4": e4}


def same_index_identity2_residuals(rt: RecurrenceTable, lt: LadderTable) -> dict:
    """r_n + r_{n-1} - lam + alpha_n R_n: the second ladder identity with the
    alpha R term taken at the same index as r_n.  This form does not hold; it
    is kept to document the index shift used by ``identity_residuals``."""
    lam = rt.lam
    return {
        n: lt.r[n] + lt.r[n - 1] - lam + rt.alpha[n] * lt.R[n]
        for n in range(1, rt.N + 1)
    }


def xy_sequence(rt: RecurrenceTable, lt: LadderTable) -> list[XYState]:
    """States (lam, s, n; 1/R_{n-1}, -r_n) for n = 1..N."""
    lam, s = rt.lam, rt.s
    states = []
    for n in range(1, rt.N + 1):
        if lt.R[n - 1] == 0:
            raise Singular("R_{n-1} = 0", n=n)
        states.append(XYState(lam, s, rt.ctx.mpf(n), 1 / lt.R[n - 1], -lt.r[n]))
    return states


def system_residuals(states: list[XYState], mode: str) -> dict:
    """Residuals of the (x, y) recurrence (mode "XYN") or of the standard
    equation after the coordinate change (mode "DP"), keyed by n.

    Singular entries are listed under ``"singular"`` instead of raising.
    """
    by_n = {int(st.n): st for st in states}
    lo, hi = min(by_n), max(by_n)
    singular = []
    if mode == "XYN":
        g1, g2 = {}, {}
        for n in range(lo, hi):
            a, b = by_n[n], by_n[n + 1]
            g1[n] = a.x * b.x * (2 * a.y ** 2 + 2 * a.lam * a.y) - (a.n - a.y)
        for n in range(lo + 1, hi + 1):
            a, b = by_n[n], by_n[n - 1]
            g2[n] = 2 * a.x ** 2 * (a.y + b.y) + (2 * a.lam * a.x ** 2 - a.s * a.x - 1)
        return {"g1": g1, "g2": g2, "singular": singular}
    if mode == "DP":
        cfg = {}
        for n, st in by_n.items():
            try:
                cfg[n] = xy_to_qp(st)
            except Singular as exc:
                singular.append({"n": n, "reason": exc.condition})
        d1, d2 = {}, {}
        for n in range(lo, hi):
            if n in cfg and n + 1 in cfg:
                c, c1 = cfg[n], cfg[n + 1]
                if c.p == 0:
                    singular.append({"n": n, "reason": "p = 0"})
                    continue
                d1[n] = (c1.q + c.q) - (c.p - c.t - c.a2 / c.p)
        for n in range(lo + 1, hi + 1):
            if n in cfg and n - 1 in cfg:
                c, c0 = cfg[n], cfg[n - 1]
                if c.q == 0:
                    singular.append({"n": n, "reason": "q = 0"})
                    continue
                d2[n] = (c.p + c0.p) - (c.q + c.t + c.a1 / c.q)
        return {"d1": d1, "d2": d2, "singular": singular}
    raise ValueError(f"unknown mode {mode!r}")


# --------------------------------------------------------------------------
# Full pipeline with the precision policy
# --------------------------------------------------------------------------

RESIDUAL_KEYS = ("e2", "e4", "g1", "g2", "r1bv", "r2bv", "d1", "d2")


def default_precision(N: int) -> int:
    return max(DEFAULT_PRECISION, 64 + 12 * N)


def decimal_digits(precision: int) -> int:
    return math.floor(precision * 0.3) - 10


@dataclass
class PipelineResult:
    params: WeightParams
    N: int
    table: RecurrenceTable
    ladder: LadderTable
    states: list
    residuals: dict
    tolerance: object
    doublings: int
    bv: dict

    @property
    def precision(self) -> int:
        return self.params.precision

    def max_residual(self, key: str | None = None):
        keys = RESIDUAL_KEYS if key is None else (key,)
        vals = [abs(v) for k in keys for v in self.residuals[k].values()]
        return max(vals) if vals else self.table.ctx.mpf(0)

    @property
    def betas_positive(self) -> bool:
        return all(b > 0 for b in self.table.beta[1:])

    @property
    def passed(self) -> bool:
        return self.max_residual() < self.tolerance and self.betas_positive


def _run_once(params: WeightParams, N: int, tolerance) -> PipelineResult:
    m = moment_table(params, 2 * N + 1)
    rt = recurrence_from_moments(m, N)
    lt = ladder_tables(rt)
    ids = identity_residuals(rt, lt)
    states = xy_sequence(rt, lt)
    xyn = system_residuals(states, "XYN")
    dp = system_residuals(states, "DP")
    bv = bv_residuals(rt)
    residuals = {
        "e2": ids["e2"], "e4": ids["e4"],
        "g1": xyn["g1"], "g2": xyn["g2"],
        "r1bv": bv["r1"], "r2bv": bv["r2"],
        "d1": dp["d1"], "d2": dp["d2"],
    }
    tol = rt.ctx.mpf(tolerance)
    return PipelineResult(params, N, rt, lt, states, residuals, tol, 0, bv)


def run_pipeline(lam, s, N: int, precision: int | None = None, tolerance=DEFAULT_TOLERANCE) -> PipelineResult:
    """Moments -> recurrence -> every residual suite.

    Starts at ``precision`` (or the default for N) and doubles the precision,
    at most three times, while the precision is exhausted or any residual
    misses ``tolerance``.
    """
    if N < 2:
        raise ValueError("N must be at least 2")
    prec = precision if precision is not None else default_precision(N)
    last_exc = None
    result = None
    for doubling in range(MAX_DOUBLINGS + 1):
        params = WeightParams(lam, s, prec)
        try:
            result = _run_once(params, N, tolerance)
        except PrecisionExhausted as exc:
            last_exc = exc
            result = None
        else:
            result.doublings = doubling
            if result.passed:
                return result
        prec *= 2
    if result is None:
        raise last_exc
    return result
