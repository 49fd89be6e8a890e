"""Double-exponential quadrature at arbitrary precision.

tanh-sinh handles a finite interval [0, c] including an integrable x**lam
singularity at 0; exp-sinh handles [c, oo).  Both are trapezoidal sums in t
with step 2**-level; each level reuses the previous level's nodes.
"""

from __future__ import annotations

from typing import Callable, Sequence

from .errors import NonConverged

MAX_LEVEL = 12
T_CAP = 14


def _tanh_sinh_node(ctx, t, c):
    # x = c / (1 + exp(-2u)), u = pi/2 sinh t, written without cancellation
    # near either endpoint
    u = ctx.pi / 2 * ctx.sinh(t)
    e = ctx.exp(-2 * u)
    x = c / (1 + e)
    w = c * ctx.pi * ctx.cosh(t) * e / (1 + e) ** 2
    return x, w


def _exp_sinh_node(ctx, t, c):
    g = ctx.exp(ctx.pi / 2 * ctx.sinh(t))
    return c + g, ctx.pi / 2 * ctx.cosh(t) * g


def _side_sum(ctx, node, c, f, h, start, step, tiny, total):
    """Sum weight*f over t = start, start+step, ... until terms are negligible."""
    acc = None
    j = 0
    quiet = 0
    while True:
        t = start + j * step
        if abs(t) > T_CAP:
            break
        x, w = node(ctx, t, c)
        vals = f(x)
        term = [w * v for v in vals]
        acc = term if acc is None else [a + b for a, b in zip(acc, term)]
        ref = [abs(a) + abs(b) for a, b in zip(acc, total)]
        if all(abs(tm) <= tiny * r or tm == 0 for tm, r in zip(term, ref)):
            quiet += 1
            if quiet >= 2:
                break
        else:
            quiet = 0
        j += 1
    return acc


def _level_sum(ctx, node, c, f, h, first, total):
    """New nodes at this level: all t = j*h for level 0, odd multiples otherwise."""
    tiny = ctx.eps / 2 ** 16
    step = h if first else 2 * h
    start = 0 if first else h
    right = _side_sum(ctx, node, c, f, h, start, step, tiny, total)
    left = _side_sum(ctx, node, c, f, h, -step if first else -h, -step, tiny, total)
    return [a + b for a, b in zip(right, left)]


def de_integrate(
    f: Callable[[object], Sequence],
    c,
    ctx,
    kind: str,
    target,
    max_level: int = MAX_LEVEL,
) -> tuple[list, object]:
    """Integrate a vector-valued ``f`` over [0, c] (``"tanh-sinh"``) or
    [c, oo) (``"exp-sinh"``).

    Returns the integrals and the final level-to-level difference, which
    bounds the error of the previous level and so overestimates the error of
    the returned values.
    """
    node = {"tanh-sinh": _tanh_sinh_node, "exp-sinh": _exp_sinh_node}[kind]
    h = ctx.mpf(1)
    raw = _level_sum(ctx, node, c, f, h, True, [ctx.mpf(0)] * len(f(c)))
    estimate = [h * r for r in raw]
    for _ in range(1, max_level + 1):
        h /= 2
        new = _level_sum(ctx, node, c, f, h, False, raw)
        raw = [a + b for a, b in zip(raw, new)]
        refined = [h * r for r in raw]
        err = max(abs(a - b) for a, b in zip(refined, estimate))
        estimate = refined
        if err <= target:
            return estimate, err
    raise NonConverged(f"{kind} quadrature: error estimate {ctx.nstr(err, 5)} above target")


def half_line_integrals(f, split, ctx, target) -> tuple[list, object]:
    """Integrals of ``f`` over [0, oo) split at ``split``."""
    head, e1 = de_integrate(f, split, ctx, "tanh-sinh", target / 2)
    tail, e2 = de_integrate(f, split, ctx, "exp-sinh", target / 2)
    return [a + b for a, b in zip(head, tail)], e1 + e2
