"""Integer algebra on the rank-10 Picard lattice of the E6(1) surface.

Two bases are in play: the standard one (Hq, Hp, E1..E8) of the model
d-P(A2(1)/E6(1)) surface and the applied one (Hx, Hy, F1..F8) coming from the
blowups of the recurrence map.  Classes and maps carry their basis so that
mixing them is caught at run time.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import BasisMismatch, NotATranslation
from .reports import CheckResult

RANK = 10


class BasisTag(enum.Enum):
    STANDARD = ("Hq", "Hp", "E1", "E2", "E3", "E4", "E5", "E6", "E7", "E8")
    APPLIED = ("Hx", "Hy", "F1", "F2", "F3", "F4", "F5", "F6", "F7", "F8")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.value


@dataclass(frozen=True)
class PicClass:
    coeffs: tuple[int, ...]
    basis: BasisTag

    def __post_init__(self):
        if len(self.coeffs) != RANK:
            raise ValueError(f"Picard classes have {RANK} coefficients")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    def _same(self, other: "PicClass"):
        if not isinstance(other, PicClass):
            return NotImplemented
        if other.basis is not self.basis:
            raise BasisMismatch(f"{self.basis.name} vs {other.basis.name}")
        return other

    def __add__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return PicClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.basis)

    def __sub__(self, other):
        other = self._same(other)
        if other is NotImplemented:
            return other
        return PicClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)), self.basis)

    def __neg__(self):
        return PicClass(tuple(-a for a in self.coeffs), self.basis)

    def __mul__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        return PicClass(tuple(k * a for a in self.coeffs), self.basis)

    __rmul__ = __mul__

    def __str__(self):
        terms = []
        for c, name in zip(self.coeffs, self.basis.labels):
            if c == 0:
                continue
            sign = "-" if c < 0 else "+"
            mag = "" if abs(c) == 1 else str(abs(c))
            terms.append(f"{sign}{mag}{name}")
        if not terms:
            return "0"
        text = "".join(terms)
        return text[1:] if text.startswith("+") else text

    def to_json(self) -> dict:
        return {"basis": self.basis.name, "coeffs": list(self.coeffs)}


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*([A-Z][a-z]?\d?)")


def parse_class(text: str, basis: BasisTag) -> PicClass:
    """Read a class written like ``2Hx+Hy-F4-F5``."""
    coeffs = [0] * RANK
    compact = text.replace(" ", "")
    pos = 0
    for m in _TERM.finditer(compact):
        if m.start() != pos:
            raise ValueError(f"cannot parse {text!r}")
        pos = m.end()
        sign, mag, name = m.groups()
        try:
            idx = basis.labels.index(name)
        except ValueError:
            raise ValueError(f"{name} is not a {basis.name} generator") from None
        k = int(mag) if mag else 1
        coeffs[idx] += -k if sign == "-" else k
    if pos != len(compact) or not compact:
        raise ValueError(f"cannot parse {text!r}")
    return PicClass(tuple(coeffs), basis)


def generator(name: str) -> PicClass:
    for tag in BasisTag:
        if name in tag.labels:
            c = [0] * RANK
            c[tag.labels.index(name)] = 1
            return PicClass(tuple(c), tag)
    raise ValueError(f"unknown generator {name!r}")


def anticanonical(basis: BasisTag) -> PicClass:
    h1, h2 = basis.labels[:2]
    e = basis.labels[2][0]
    return parse_class(f"2{h1}+2{h2}" + "".join(f"-{e}{i}" for i in range(1, 9)), basis)


def pair(a: PicClass, b: PicClass) -> int:
    """Intersection number: H.H = 0, H1.H2 = 1, Ei.Ej = -delta_ij."""
    if a.basis is not b.basis:
        raise BasisMismatch(f"cannot pair {a.basis.name} with {b.basis.name}")
    x, y = a.coeffs, b.coeffs
    return x[0] * y[1] + x[1] * y[0] - sum(x[i] * y[i] for i in range(2, RANK))


def reflect(root: PicClass, c: PicClass) -> PicClass:
    if pair(root, root) != -2:
        raise ValueError(f"{root} is not a -2 class")
    return c + pair(c, root) * root


# --------------------------------------------------------------------------
# Lattice maps
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class LatticeMap:
    """Integer matrix whose column j is the image of source generator j."""

    matrix: tuple[tuple[int, ...], ...]
    source: BasisTag
    target: BasisTag

    @classmethod
    def from_images(cls, images: Sequence[PicClass], source: BasisTag) -> "LatticeMap":
        if len(images) != RANK:
            raise ValueError("need one image per generator")
        target = images[0].basis
        if any(img.basis is not target for img in images):
            raise BasisMismatch("images must share a basis")
        rows = tuple(tuple(images[j].coeffs[i] for j in range(RANK)) for i in range(RANK))
        return cls(rows, source, target)

    @classmethod
    def identity(cls, basis: BasisTag) -> "LatticeMap":
        rows = tuple(tuple(int(i == j) for j in range(RANK)) for i in range(RANK))
        return cls(rows, basis, basis)

    def column(self, j: int) -> PicClass:
        return PicClass(tuple(self.matrix[i][j] for i in range(RANK)), self.target)

    def __call__(self, c: PicClass) -> PicClass:
        return apply_map(self, c)

    def to_json(self) -> dict:
        return {
            "source": self.source.name,
            "target": self.target.name,
            "matrix": [list(r) for r in self.matrix],
        }


def apply_map(m: LatticeMap, c: PicClass) -> PicClass:
    if c.basis is not m.source:
        raise BasisMismatch(f"map expects {m.source.name}, got {c.basis.name}")
    out = tuple(sum(row[j] * c.coeffs[j] for j in range(RANK)) for row in m.matrix)
    return PicClass(out, m.target)


def compose(m2: LatticeMap, m1: LatticeMap) -> LatticeMap:
    """m2 after m1."""
    if m1.target is not m2.source:
        raise BasisMismatch(f"cannot compose {m1.target.name} into {m2.source.name}")
    rows = tuple(
        tuple(sum(m2.matrix[i][k] * m1.matrix[k][j] for k in range(RANK)) for j in range(RANK))
        for i in range(RANK)
    )
    return LatticeMap(rows, m1.source, m2.target)


def reflection_map(root: PicClass) -> LatticeMap:
    if pair(root, root) != -2:
        raise ValueError(f"{root} is not a -2 class")
    basis = root.basis
    return LatticeMap.from_images(
        [reflect(root, generator(name)) for name in basis.labels], basis
    )


def is_isometry(m: LatticeMap) -> bool:
    gens = [generator(n) for n in m.source.labels]
    imgs = [apply_map(m, g) for g in gens]
    return all(
        pair(imgs[i], imgs[j]) == pair(gens[i], gens[j])
        for i in range(RANK)
        for j in range(i, RANK)
    )


def fixes_anticanonical(m: LatticeMap) -> bool:
    return apply_map(m, anticanonical(m.source)) == anticanonical(m.target)


# --------------------------------------------------------------------------
# Root bases
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class RootBasis:
    name: str
    kind: str  # "surface" or "symmetry"
    roots: tuple[PicClass, ...]
    multiplicities: tuple[int, ...]

    @property
    def basis(self) -> BasisTag:
        return self.roots[0].basis

    @property
    def delta(self) -> PicClass:
        total = PicClass((0,) * RANK, self.basis)
        for k, r in zip(self.multiplicities, self.roots):
            total = total + k * r
        return total


def _roots(name, kind, basis, texts, mult):
    return RootBasis(name, kind, tuple(parse_class(t, basis) for t in texts), tuple(mult))


_E6_MULT = (1, 1, 2, 3, 2, 1, 2)

STANDARD_SURFACE = _roots(
    "standard surface", "surface", BasisTag.STANDARD,
    ["E7-E8", "E1-E2", "Hq-E1-E5", "E5-E6", "Hp-E3-E5", "E3-E4", "E6-E7"],
    _E6_MULT,
)
STANDARD_SYMMETRY = _roots(
    "standard symmetry", "symmetry", BasisTag.STANDARD,
    ["Hq+Hp-E5-E6-E7-E8", "Hq-E3-E4", "Hp-E1-E2"],
    (1, 1, 1),
)
APPLIED_SURFACE = _roots(
    "applied surface", "surface", BasisTag.APPLIED,
    ["F7-F8", "Hx-F2-F3", "Hy-F4-F5", "F5-F6", "F4-F5", "Hx-F1-F4", "F6-F7"],
    _E6_MULT,
)
APPLIED_SYMMETRY_PRE = _roots(
    "applied symmetry (preliminary)", "symmetry", BasisTag.APPLIED,
    ["2Hx+Hy-F3-F4-F5-F6-F7-F8", "Hy-F1-F3", "F3-F2"],
    (1, 1, 1),
)
APPLIED_SYMMETRY_FIN = _roots(
    "applied symmetry (final)", "symmetry", BasisTag.APPLIED,
    ["2Hx+2Hy-F1-2F3-F4-F5-F6-F7-F8", "-Hy+F1+F3", "Hy-F1-F2"],
    (1, 1, 1),
)

ROOT_BASES = {
    "standard-surface": STANDARD_SURFACE,
    "standard-symmetry": STANDARD_SYMMETRY,
    "applied-surface": APPLIED_SURFACE,
    "applied-symmetry-pre": APPLIED_SYMMETRY_PRE,
    "applied-symmetry-fin": APPLIED_SYMMETRY_FIN,
}

# Generalized Cartan matrix of type E6(1) in the delta_0..delta_6 labelling.
E6_GRAM = (
    (-2, 0, 0, 0, 0, 0, 1),
    (0, -2, 1, 0, 0, 0, 0),
    (0, 1, -2, 1, 0, 0, 0),
    (0, 0, 1, -2, 1, 0, 1),
    (0, 0, 0, 1, -2, 1, 0),
    (0, 0, 0, 0, 1, -2, 0),
    (1, 0, 0, 1, 0, 0, -2),
)


def gram_matrix(basis: RootBasis) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(pair(a, b) for b in basis.roots) for a in basis.roots)


def check_root_basis(basis: RootBasis) -> list[str]:
    """Return the list of violated root-basis invariants (empty when sound)."""
    problems = []
    for i, r in enumerate(basis.roots):
        if pair(r, r) != -2:
            problems.append(f"root {i} has self-intersection {pair(r, r)}")
    if basis.delta != anticanonical(basis.basis):
        problems.append(f"delta = {basis.delta} differs from -K")
    return problems


# --------------------------------------------------------------------------
# The induced map of the recurrence and the basis changes
# --------------------------------------------------------------------------

_A = BasisTag.APPLIED
_S = BasisTag.STANDARD

# Pushforward of the recurrence map on Pic, images of Hx, Hy, F1..F8.
PSI = LatticeMap.from_images(
    [
        parse_class(t, _A)
        for t in (
            "4Hx+2Hy-F2-F3-2F4-2F5-2F6-F7-F8",
            "2Hx+Hy-F4-F5-F6-F7",
            "2Hx+Hy-F4-F5-F6-F7-F8",
            "2Hx+Hy-F3-F4-F5-F6-F7",
            "2Hx+Hy-F2-F4-F5-F6-F7",
            "Hx+Hy-F4-F5-F6",
            "Hx-F6",
            "Hx-F5",
            "Hx-F4",
            "F1",
        )
    ],
    _A,
)


def _table(texts: Sequence[str], source: BasisTag, target: BasisTag) -> LatticeMap:
    return LatticeMap.from_images([parse_class(t, target) for t in texts], source)


# Both columns of each basis-change table are transcribed independently and
# checked to be mutually inverse below.
PRE_TO_STANDARD = _table(
    ["Hp", "Hq+Hp-E1-E3", "E4", "E2", "Hp-E1", "Hp-E3", "E5", "E6", "E7", "E8"], _A, _S
)
PRE_TO_APPLIED = _table(
    ["Hx+Hy-F3-F4", "Hx", "Hx-F3", "F2", "Hx-F4", "F1", "F5", "F6", "F7", "F8"], _S, _A
)
FIN_TO_STANDARD = _table(
    [
        "Hq+Hp-E3-E4", "Hq+Hp-E1-E3", "Hq-E3", "E2", "Hq+Hp-E1-E3-E4",
        "Hp-E3", "E5", "E6", "E7", "E8",
    ],
    _A, _S,
)
FIN_TO_APPLIED = _table(
    [
        "Hx+Hy-F3-F4", "Hx+Hy-F1-F3", "Hx-F3", "F2", "Hx+Hy-F1-F3-F4",
        "Hy-F3", "F5", "F6", "F7", "F8",
    ],
    _S, _A,
)

BASIS_CHANGES = {
    "PRE": (PRE_TO_STANDARD, PRE_TO_APPLIED),
    "FIN": (FIN_TO_STANDARD, FIN_TO_APPLIED),
}


def _check_tables():
    for which, (fwd, back) in BASIS_CHANGES.items():
        if compose(back, fwd) != LatticeMap.identity(_A) or compose(fwd, back) != LatticeMap.identity(_S):
            raise RuntimeError(f"{which} basis-change tables are not mutually inverse")


_check_tables()


def change_basis(c: PicClass, which: str, direction: str = "to_standard") -> PicClass:
    """Rewrite ``c`` through the PRE or FIN identification.

    ``direction`` is ``"to_standard"`` (applied class in, standard class out)
    or ``"to_applied"``.
    """
    fwd, back = BASIS_CHANGES[which]
    if direction == "to_standard":
        return apply_map(fwd, c)
    if direction == "to_applied":
        return apply_map(back, c)
    raise ValueError(f"unknown direction {direction!r}")


def conjugate(m: LatticeMap, which: str) -> LatticeMap:
    """Express an applied-basis map in the standard basis via PRE or FIN."""
    fwd, back = BASIS_CHANGES[which]
    if m.source is not _A or m.target is not _A:
        raise BasisMismatch("conjugation expects a map on the applied basis")
    return compose(fwd, compose(m, back))


def translation_vector(m: LatticeMap, basis: RootBasis) -> tuple[int, ...]:
    """Integers k_i with m(alpha_i) = alpha_i + k_i * delta."""
    if basis.kind != "symmetry":
        raise ValueError("translation vectors are taken on a symmetry root basis")
    if m.source is not basis.basis or m.target is not basis.basis:
        raise BasisMismatch("map and root basis live on different bases")
    if not (is_isometry(m) and fixes_anticanonical(m)):
        raise NotATranslation("map is not an isometry fixing -K")
    delta = basis.delta
    pivot = next(i for i, c in enumerate(delta.coeffs) if c != 0)
    ks = []
    for i, alpha in enumerate(basis.roots):
        diff = apply_map(m, alpha) - alpha
        k, rem = divmod(diff.coeffs[pivot], delta.coeffs[pivot])
        if rem or diff != k * delta:
            raise NotATranslation(f"alpha_{i} -> {apply_map(m, alpha)} is not a shift by delta")
        ks.append(k)
    return tuple(ks)


def root_permutation(m: LatticeMap, basis: RootBasis) -> tuple[int, ...] | None:
    """Index image of each root under ``m``, or None if ``m`` does not permute them."""
    roots = list(basis.roots)
    perm = []
    for r in roots:
        img = apply_map(m, r)
        if img not in roots:
            return None
        perm.append(roots.index(img))
    return tuple(perm)


# --------------------------------------------------------------------------
# Weyl-group words on the standard lattice
# --------------------------------------------------------------------------

GENERATOR_NAMES = ("w0", "w1", "w2", "sigma1", "sigma2")
_ALIASES = {"s1": "sigma1", "s2": "sigma2", "σ1": "sigma1", "σ2": "sigma2"}

# Words act right to left: the rightmost letter is applied first.  Both the
# lattice and point realizations read this flag.
RIGHT_TO_LEFT = True


def parse_word(word) -> tuple[str, ...]:
    """Accept "sigma1 sigma2 w0 w2", "s1s2w0w2" or a sequence of names."""
    if isinstance(word, str):
        tokens = re.findall(r"sigma[12]|s[12]|σ[12]|w[012]", word.replace(" ", ""))
        if "".join(tokens) != re.sub(r"[\s,*∘.]", "", word):
            raise ValueError(f"cannot parse word {word!r}")
    else:
        tokens = list(word)
    out = tuple(_ALIASES.get(t, t) for t in tokens)
    for t in out:
        if t not in GENERATOR_NAMES:
            raise ValueError(f"unknown generator {t!r}")
    if not out:
        raise ValueError("empty word")
    return out


def _standard_reflection(text: str) -> LatticeMap:
    return reflection_map(parse_class(text, _S))


def _product(*maps: LatticeMap) -> LatticeMap:
    out = maps[0]
    for m in maps[1:]:
        out = compose(out, m)
    return out


GENERATOR_MAPS = {
    "w0": reflection_map(STANDARD_SYMMETRY.roots[0]),
    "w1": reflection_map(STANDARD_SYMMETRY.roots[1]),
    "w2": reflection_map(STANDARD_SYMMETRY.roots[2]),
    "sigma1": _product(
        _standard_reflection("E1-E3"), _standard_reflection("E2-E4"), _standard_reflection("Hq-Hp")
    ),
    "sigma2": _product(
        _standard_reflection("E1-E7"), _standard_reflection("E2-E8"), _standard_reflection("Hq-E5-E6")
    ),
}


def realize_word(word, right_to_left: bool | None = None) -> LatticeMap:
    rtl = RIGHT_TO_LEFT if right_to_left is None else right_to_left
    letters = parse_word(word)
    maps = [GENERATOR_MAPS[g] for g in letters]
    if not rtl:
        maps.reverse()
    return _product(*maps)


PHI_WORD = ("sigma1", "sigma2", "w0", "w2")
PSI_WORD = ("sigma1", "sigma2", "w2", "w1")

# The standard step on Pic, obtained by carrying PSI through the final
# identification.
PHI = conjugate(PSI, "FIN")


# --------------------------------------------------------------------------
# The exact lattice suite
# --------------------------------------------------------------------------


def _exact_check(name: str, ok: bool, **details) -> CheckResult:
    result = CheckResult(name, 1, details={k: _jsonable(v) for k, v in details.items()})
    if not ok:
        result.record_failure({k: _jsonable(v) for k, v in details.items()})
    return result


def _jsonable(v):
    if isinstance(v, (PicClass, LatticeMap)):
        return v.to_json()
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v


def lattice_report() -> list[CheckResult]:
    """Every integer identity of the lattice layer, one check per line."""
    checks = []
    gram = gram_matrix(APPLIED_SURFACE)
    checks.append(_exact_check("gram(applied surface) = E6(1) Cartan", gram == E6_GRAM, gram=gram))
    checks.append(_exact_check(
        "gram(standard surface) = E6(1) Cartan",
        gram_matrix(STANDARD_SURFACE) == E6_GRAM, gram=gram_matrix(STANDARD_SURFACE),
    ))
    for key, basis in ROOT_BASES.items():
        checks.append(_exact_check(
            f"delta = -K ({key})", basis.delta == anticanonical(basis.basis),
            delta=str(basis.delta), problems=check_root_basis(basis),
        ))
    checks.append(_exact_check(
        "psi_* is an isometry fixing -K", is_isometry(PSI) and fixes_anticanonical(PSI)
    ))
    perm = root_permutation(PSI, APPLIED_SURFACE)
    checks.append(_exact_check("psi_* permutes the surface roots", perm is not None, permutation=perm))
    t_psi = translation_vector(PSI, APPLIED_SYMMETRY_PRE)
    checks.append(_exact_check(
        "translation(psi_*, applied pre basis) = (1,-1,0)", t_psi == (1, -1, 0), vector=t_psi
    ))
    t_phi = translation_vector(PHI, STANDARD_SYMMETRY)
    checks.append(_exact_check(
        "translation(phi_*, standard basis) = (0,1,-1)", t_phi == (0, 1, -1), vector=t_phi
    ))
    phi_word = realize_word(PHI_WORD)
    checks.append(_exact_check("realize(sigma1 sigma2 w0 w2) = phi_*", phi_word == PHI))
    psi_word = realize_word(PSI_WORD)
    checks.append(_exact_check(
        "realize(sigma1 sigma2 w2 w1) = pre-conjugate of psi_*", psi_word == conjugate(PSI, "PRE")
    ))
    w1 = GENERATOR_MAPS["w1"]
    checks.append(_exact_check(
        "w1 phi_* w1 = realize(sigma1 sigma2 w2 w1)", _product(w1, PHI, w1) == psi_word
    ))
    return checks
