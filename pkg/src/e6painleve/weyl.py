"""Birational action of the extended affine Weyl group W~(A2(1)) on point
configurations (a0, a1, a2; t; q, p), and the standard d-P(E6) step."""

from __future__ import annotations

import random
from dataclasses import asdict, dataclass, fields
from fractions import Fraction

from .errors import ExceptionalLocus
from .reports import CheckResult
from .picard import PHI_WORD, PSI_WORD, RIGHT_TO_LEFT, parse_word
from .scalars import QuadExt


@dataclass(frozen=True)
class PointConfig:
    a0: object
    a1: object
    a2: object
    t: object
    q: object
    p: object

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, int):
                object.__setattr__(self, f.name, Fraction(v))

    def root_sum(self):
        return self.a0 + self.a1 + self.a2

    def values(self) -> tuple:
        return tuple(getattr(self, f.name) for f in fields(self))

    def to_json(self) -> dict:
        return {k: str(v) for k, v in asdict(self).items()}


def _w0(c: PointConfig) -> PointConfig:
    d = c.q - c.p + c.t
    if d == 0:
        raise ExceptionalLocus("w0", "q - p + t")
    shift = c.a0 / d
    return PointConfig(-c.a0, c.a1 + c.a0, c.a2 + c.a0, c.t, c.q - shift, c.p - shift)


def _w1(c: PointConfig) -> PointConfig:
    if c.q == 0:
        raise ExceptionalLocus("w1", "q")
    return PointConfig(c.a0 + c.a1, -c.a1, c.a2 + c.a1, c.t, c.q, c.p - c.a1 / c.q)


def _w2(c: PointConfig) -> PointConfig:
    if c.p == 0:
        raise ExceptionalLocus("w2", "p")
    return PointConfig(c.a0 + c.a2, c.a1 + c.a2, -c.a2, c.t, c.q + c.a2 / c.p, c.p)


def _sigma1(c: PointConfig) -> PointConfig:
    return PointConfig(-c.a0, -c.a2, -c.a1, c.t, -c.p, -c.q)


def _sigma2(c: PointConfig) -> PointConfig:
    return PointConfig(-c.a2, -c.a1, -c.a0, c.t, c.q, c.q - c.p + c.t)


GENERATORS = {"w0": _w0, "w1": _w1, "w2": _w2, "sigma1": _sigma1, "sigma2": _sigma2}


def apply_generator(g: str, c: PointConfig) -> PointConfig:
    (name,) = parse_word([g] if g in GENERATORS else g)
    return GENERATORS[name](c)


def apply_word(word, c: PointConfig, right_to_left: bool | None = None) -> PointConfig:
    rtl = RIGHT_TO_LEFT if right_to_left is None else right_to_left
    letters = parse_word(word)
    order = range(len(letters) - 1, -1, -1) if rtl else range(len(letters))
    for i in order:
        try:
            c = GENERATORS[letters[i]](c)
        except ExceptionalLocus as exc:
            raise ExceptionalLocus(exc.generator, exc.denominator, index=i) from None
    return c


def _is_one(x) -> bool:
    if isinstance(x, (int, Fraction, QuadExt)):
        return x == 1
    # big-float input: accept rounding at the working precision
    ctx = getattr(x, "context", None)
    eps = ctx.eps if ctx is not None else 1e-12
    return abs(x - 1) <= 64 * eps


def phi_step(c: PointConfig, check_normalization: bool = True) -> PointConfig:
    """One forward step of qbar + q = p - t - a2/p, p + pbar' = ... .

    The second equation is used at the advanced level, with root variables
    already shifted: pbar = qbar + t + (a1 - 1)/qbar - p.
    """
    if check_normalization and not _is_one(c.root_sum()):
        raise ValueError(f"root variables must sum to 1, got {c.root_sum()}")
    if c.p == 0:
        raise ExceptionalLocus("phi", "p")
    qb = c.p - c.t - c.a2 / c.p - c.q
    if qb == 0:
        raise ExceptionalLocus("phi", "qbar")
    pb = qb + c.t + (c.a1 - 1) / qb - c.p
    return PointConfig(c.a0, c.a1 - 1, c.a2 + 1, c.t, qb, pb)


# --------------------------------------------------------------------------
# Random exact sampling and the relation suite
# --------------------------------------------------------------------------

MAX_RESAMPLES = 100


def random_rational(rng: random.Random, bound: int = 100) -> Fraction:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, bound)
    return Fraction(num, den)


def random_quad(rng: random.Random, bound: int = 100) -> QuadExt:
    return QuadExt(random_rational(rng, bound), random_rational(rng, bound))


def random_config(rng: random.Random, normalized: bool = False) -> PointConfig:
    a0, a1, a2 = (random_quad(rng) for _ in range(3))
    if normalized:
        a2 = 1 - a0 - a1
    return PointConfig(a0, a1, a2, random_quad(rng), random_quad(rng), random_quad(rng))


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent, reproducible stream for one trial."""
    return random.Random(f"{seed}:{trial}")


def _word(*letters):
    return tuple(letters)


def _relations():
    rels = []
    for i in range(3):
        w = f"w{i}"
        rels.append((f"{w}^2 = e", _word(w, w), (), False))
    for i in range(3):
        for j in range(i + 1, 3):
            wi, wj = f"w{i}", f"w{j}"
            rels.append((f"{wi}{wj}{wi} = {wj}{wi}{wj}", _word(wi, wj, wi), _word(wj, wi, wj), False))
    rels.append(("sigma1^2 = e", _word("sigma1", "sigma1"), (), False))
    rels.append(("sigma2^2 = e", _word("sigma2", "sigma2"), (), False))
    rels.append(("(sigma1 sigma2)^3 = e", _word(*("sigma1", "sigma2") * 3), (), False))
    rels.append(("w1 sigma1 sigma2 = sigma1 sigma2 w0", _word("w1", "sigma1", "sigma2"),
                 _word("sigma1", "sigma2", "w0"), False))
    rels.append(("sigma1 sigma2 w0 w2 = phi", PHI_WORD, "phi", True))
    rels.append(("w1 phi w1 = sigma1 sigma2 w2 w1", "w1-phi-w1", PSI_WORD, True))
    return rels


RELATIONS = _relations()


def _evaluate(side, c: PointConfig) -> PointConfig:
    if side == ():
        return c
    if side == "phi":
        return phi_step(c)
    if side == "w1-phi-w1":
        return apply_word("w1", phi_step(apply_word("w1", c)))
    return apply_word(side, c)


def check_relation(name, lhs, rhs, normalized, trials: int, seed: int) -> CheckResult:
    result = CheckResult(name, trials)
    for trial in range(trials):
        rng = trial_rng(seed, trial)
        for _ in range(MAX_RESAMPLES):
            c = random_config(rng, normalized)
            try:
                left, right = _evaluate(lhs, c), _evaluate(rhs, c)
            except ExceptionalLocus:
                result.resamples += 1
                continue
            break
        else:
            result.gave_up = True
            result.first_failure_witness = result.first_failure_witness or {
                "trial": trial, "reason": f"no regular point after {MAX_RESAMPLES} samples"
            }
            continue
        if left != right:
            result.record_failure(
                {"trial": trial, "point": c.to_json(), "lhs": left.to_json(), "rhs": right.to_json()}
            )
    return result


def relations_report(trials: int = 100, seed: int = 1) -> list[CheckResult]:
    """Check every group relation exactly at ``trials`` random Q(sqrt 2) points."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    return [
        check_relation(name, lhs, rhs, normalized, trials, seed)
        for name, lhs, rhs, normalized in RELATIONS
    ]
