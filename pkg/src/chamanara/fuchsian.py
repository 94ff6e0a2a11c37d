"""Projective 2x2 matrices, their Moebius action, and the group G = <P1, H>.

``G`` is generated by the parabolics ``P1 = [[1, 6], [0, 1]]`` and
``P2 = 1/4 [[-5, 27], [-3, 13]]``; words are written in ``P1`` and
``H = P2 P1``.  Its fundamental domain ``F`` is the part of the strip
``|Re z| < 3`` outside the two half-discs over ``(-3, -1/3)`` and ``(1/3, 3)``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .exactnum import (
    DomainError,
    FieldMismatchError,
    QuadRat,
    as_rational,
    parse_scalar,
    sqrt_rational,
)
from .surface import DirVec

__all__ = [
    "Mat2",
    "HPoint",
    "Word",
    "FundDomain",
    "DomainStatus",
    "Reduction",
    "Membership",
    "EigenReport",
    "UnsupportedFieldError",
    "ReductionError",
    "P1",
    "P2",
    "H",
    "M",
    "I2",
    "ROTATION",
    "F",
    "mobius_apply",
    "classify",
    "fixed_points",
    "eigen_direction",
    "frame_rotate",
    "frame_unrotate",
    "shear_matrix",
    "in_fundamental_domain",
    "reduce_to_domain",
    "is_member",
    "enumerate_words",
    "parabolic_direction_scan",
    "verify_side_pairing",
    "random_words",
    "GENERATORS",
    "BASE_POINT",
]


class UnsupportedFieldError(DomainError):
    """The result needs a square root outside the supported quadratic fields."""


class ReductionError(RuntimeError):
    """Reduction did not reach the fundamental domain within its iteration cap."""


def _q(x) -> QuadRat:
    return QuadRat.coerce(x)


def _sqrt_in_field(v: QuadRat) -> Optional[QuadRat]:
    """Square root of ``v >= 0`` inside ``Q(sqrt v.d)``, extended by one root if v is rational."""
    if v.sign() < 0:
        return None
    if v.is_rational():
        return sqrt_rational(v.a)
    n = v.norm()
    if n < 0:
        return None
    rn = sqrt_rational(n)
    if not rn.is_rational():
        return None
    for x2 in ((v.a + rn.a) / 2, (v.a - rn.a) / 2):
        if x2 <= 0:
            continue
        rx = sqrt_rational(x2)
        if not rx.is_rational():
            continue
        x = rx.a
        y = v.b / (2 * x)
        cand = QuadRat(x, y, v.d)
        if cand * cand == v:
            return cand if cand.sign() > 0 else -cand
    return None


class Mat2:
    """A 2x2 matrix with exact entries, compared projectively.

    ``A == B`` iff ``A = lambda * B`` for a nonzero scalar.  The determinant
    must be positive.
    """

    __slots__ = ("a", "b", "c", "d", "_key")

    def __init__(self, a, b, c, d, scale=1):
        s = _q(scale)
        self.a, self.b, self.c, self.d = (s * _q(e) for e in (a, b, c, d))
        if self.det().sign() <= 0:
            raise DomainError(f"matrix {self.entries()} has nonpositive determinant")
        self._key = None

    @classmethod
    def _raw(cls, a, b, c, d) -> "Mat2":
        obj = object.__new__(cls)
        obj.a, obj.b, obj.c, obj.d = a, b, c, d
        obj._key = None
        return obj

    def entries(self) -> tuple:
        return self.a, self.b, self.c, self.d

    def det(self) -> QuadRat:
        return self.a * self.d - self.b * self.c

    def trace(self) -> QuadRat:
        return self.a + self.d

    def __mul__(self, other: "Mat2") -> "Mat2":
        if not isinstance(other, Mat2):
            return NotImplemented
        a, b, c, d = self.entries()
        e, f, g, h = other.entries()
        return Mat2._raw(a * e + b * g, a * f + b * h, c * e + d * g, c * f + d * h)

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inverse() ** (-n)
        result, base = I2, self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "Mat2":
        """Projective inverse (the adjugate)."""
        return Mat2._raw(self.d, -self.b, -self.c, self.a)

    def true_inverse(self) -> "Mat2":
        det = self.det()
        return Mat2._raw(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def _ratios(self) -> tuple:
        if self._key is None:
            pivot = next(e for e in self.entries() if e)
            self._key = tuple(e / pivot for e in self.entries())
        return self._key

    def __eq__(self, other):
        if not isinstance(other, Mat2):
            return NotImplemented
        return self._ratios() == other._ratios()

    def __hash__(self):
        return hash(self._ratios())

    def is_identity(self) -> bool:
        return self.b == 0 and self.c == 0 and self.a == self.d

    def is_rational(self) -> bool:
        return all(e.is_rational() for e in self._ratios())

    def rationalized(self) -> Optional["Mat2"]:
        """A projectively equal matrix with rational entries, if one exists."""
        if not self.is_rational():
            return None
        r = self._ratios()
        return Mat2._raw(*r) if (r[0] * r[3] - r[1] * r[2]).sign() > 0 else Mat2._raw(*(-e for e in r))

    def canonical(self) -> "Mat2":
        """Scale to determinant 1 when the root exists, then make the first nonzero entry positive."""
        m = self
        root = _sqrt_in_field(self.det())
        if root is not None:
            try:
                inv = root.inverse()
                m = Mat2._raw(*(e * inv for e in self.entries()))
            except FieldMismatchError:
                m = self
        first = next(e for e in m.entries() if e)
        if first.sign() < 0:
            m = Mat2._raw(*(-e for e in m.entries()))
        return m

    def normalized_trace_sq(self) -> QuadRat:
        """``trace**2 / det``, a projective invariant."""
        t = self.trace()
        return t * t / self.det()

    def to_json(self) -> dict:
        c = self.canonical()
        return {"entries": [e.to_json() for e in c.entries()]}

    @classmethod
    def from_json(cls, obj) -> "Mat2":
        return cls(*(QuadRat.from_json(e) for e in obj["entries"]))

    def __repr__(self):
        return f"Mat2({', '.join(str(e) for e in self.entries())})"

    def __str__(self):
        c = self.canonical()
        ents = c.entries()
        if all(e.is_rational() for e in ents):
            den = math.lcm(*(e.a.denominator for e in ents))
            ints = [int(e.a * den) for e in ents]
            body = f"[[{ints[0]}, {ints[1]}], [{ints[2]}, {ints[3]}]]"
            return body if den == 1 else f"(1/{den})*{body}"
        return f"[[{ents[0]}, {ents[1]}], [{ents[2]}, {ents[3]}]]"


I2 = Mat2(1, 0, 0, 1)
P1 = Mat2(1, 6, 0, 1)
P2 = Mat2(-5, 27, -3, 13, scale=Fraction(1, 4))
# an overall sign is irrelevant projectively
H = Mat2(5, 3, 3, 5, scale=Fraction(1, 4))
M = Mat2(1, -1, 1, 1, scale=QuadRat(0, Fraction(1, 2), 2))
# rotation of the plane by -pi/4
ROTATION = Mat2(1, 1, -1, 1, scale=QuadRat(0, Fraction(1, 2), 2))


# --- points of the closed upper half plane ---------------------------------


@dataclass(frozen=True)
class HPoint:
    """Point of ``H u R u {oo}``: ``im > 0`` interior, ``im == 0`` real, or infinity."""

    re: QuadRat = field(default_factory=lambda: QuadRat(0))
    im: QuadRat = field(default_factory=lambda: QuadRat(0))
    infinite: bool = False

    def __post_init__(self):
        object.__setattr__(self, "re", _q(self.re))
        object.__setattr__(self, "im", _q(self.im))
        if self.im.sign() < 0:
            raise DomainError("point below the real axis")

    @classmethod
    def infinity(cls) -> "HPoint":
        return cls(infinite=True)

    @classmethod
    def real(cls, x) -> "HPoint":
        return cls(_q(x), QuadRat(0))

    @property
    def is_boundary(self) -> bool:
        return self.infinite or self.im == 0

    def __str__(self):
        if self.infinite:
            return "oo"
        if self.im == 0:
            return str(self.re)
        im = "i" if self.im == 1 else f"({self.im})*i"
        if self.re == 0:
            return im
        return f"{self.re} + {im}"

    def to_json(self):
        if self.infinite:
            return "oo"
        return {"re": self.re.to_json(), "im": self.im.to_json()}

    @classmethod
    def from_json(cls, obj) -> "HPoint":
        if obj == "oo":
            return cls.infinity()
        return cls(QuadRat.from_json(obj["re"]), QuadRat.from_json(obj["im"]))

    @classmethod
    def parse(cls, text: str) -> "HPoint":
        """``"re,im"`` with exact scalars, or ``"oo"``."""
        text = text.strip()
        if text in ("oo", "inf", "∞"):
            return cls.infinity()
        parts = text.split(",")
        if len(parts) != 2:
            raise ValueError(f"expected 're,im' but got {text!r}")
        try:
            re_ = parse_scalar(parts[0])
        except ValueError as exc:
            raise ValueError(f"real part: {exc}") from None
        try:
            im = parse_scalar(parts[1])
        except ValueError as exc:
            raise ValueError(f"imaginary part (offset {len(parts[0]) + 1}): {exc}") from None
        return cls(re_, im)


def mobius_apply(A: Mat2, z: HPoint) -> HPoint:
    a, b, c, d = A.entries()
    if z.infinite:
        if c == 0:
            return HPoint.infinity()
        return HPoint.real(a / c)
    x, y = z.re, z.im
    if y == 0:
        den = c * x + d
        if den == 0:
            return HPoint.infinity()
        return HPoint.real((a * x + b) / den)
    cx_d = c * x + d
    cy = c * y
    den = cx_d * cx_d + cy * cy
    ax_b = a * x + b
    re_ = (ax_b * cx_d + a * cy * y) / den
    im = A.det() * y / den
    return HPoint(re_, im)


def classify(A: Mat2) -> str:
    if A.is_identity():
        return "identity"
    s = (A.normalized_trace_sq() - 4).sign()
    if s == 0:
        return "parabolic"
    return "elliptic" if s < 0 else "hyperbolic"


def fixed_points(A: Mat2) -> list[HPoint]:
    """Fixed points in the closed upper half plane (``oo`` last for real sets)."""
    if A.is_identity():
        raise DomainError("the identity fixes everything")
    B = A.rationalized() or A
    a, b, c, d = B.entries()
    if c == 0:
        pts = [HPoint.infinity()]
        if a != d:
            pts.insert(0, HPoint.real(b / (d - a)))
        return pts
    disc = (a - d) * (a - d) + 4 * b * c
    s = disc.sign()
    if s == 0:
        return [HPoint.real((a - d) / (2 * c))]
    root = _sqrt_in_field(disc if s > 0 else -disc)
    if root is None:
        raise UnsupportedFieldError(f"discriminant {disc} has no root in a supported field")
    try:
        if s > 0:
            pts = [(a - d - root) / (2 * c), (a - d + root) / (2 * c)]
            return [HPoint.real(x) for x in sorted(pts)]
        return [HPoint((a - d) / (2 * c), root / (2 * abs(c)))]
    except FieldMismatchError as exc:
        raise UnsupportedFieldError(str(exc)) from None


def frame_rotate(direction: DirVec) -> DirVec:
    """Square-frame direction -> frame rotated by -pi/4 (slope 1 becomes horizontal)."""
    return DirVec.of(direction.q + direction.p, direction.p - direction.q)


def frame_unrotate(direction: DirVec) -> DirVec:
    return DirVec.of(direction.q - direction.p, direction.q + direction.p)


def shear_matrix(direction: DirVec, t) -> Mat2:
    """The parabolic fixing ``(q, p)`` that shears by ``t`` per unit of height."""
    t = as_rational(t)
    if t == 0:
        raise DomainError("twist must be nonzero")
    q, p = direction.q, direction.p
    s = t / (q * q + p * p)
    return Mat2(1 - s * p * q, s * q * q, -s * p * p, 1 + s * p * q)


@dataclass(frozen=True)
class EigenReport:
    fixed_point: HPoint
    direction: Optional[DirVec]  # rotated frame, None if irrational
    square_direction: Optional[DirVec]
    allowed: bool  # fixed point outside (-1, 1)
    boundary_case: bool  # fixed point at +-1, eigen direction +-pi/4


def eigen_direction(A: Mat2) -> EigenReport:
    if classify(A) != "parabolic":
        raise DomainError("eigen_direction needs a parabolic element")
    (fp,) = fixed_points(A)
    if fp.infinite:
        direction = DirVec(1, 0)
        allowed, edge = True, False
    else:
        x = fp.re
        direction = None
        if x.is_rational():
            r = x.a
            q, p = r.numerator, r.denominator
            direction = DirVec.of(q, p) if q >= 0 else DirVec.of(-q, -p)
        allowed = abs(x) >= 1
        edge = abs(x) == 1
    square = frame_unrotate(direction) if direction is not None else None
    return EigenReport(fp, direction, square, allowed, edge)


# --- words in P1, H --------------------------------------------------------

GENERATORS = {"P1": P1, "H": H}
_WORD_RE = re.compile(r"(P1|H)(?:\^\(?(-?\d+)\)?)?")


@dataclass(frozen=True)
class Word:
    """Freely reduced word; ``letters[0]`` is the leftmost matrix factor."""

    letters: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", _free_reduce(self.letters))

    @classmethod
    def identity(cls) -> "Word":
        return cls(())

    @classmethod
    def parse(cls, text: str) -> "Word":
        text = text.replace("*", " ").strip()
        if text in ("", "1", "id", "I"):
            return cls(())
        letters = []
        pos = 0
        for tok in text.split():
            m = _WORD_RE.fullmatch(tok)
            if m is None:
                raise ValueError(f"bad word token {tok!r} at position {text.index(tok, pos)}")
            pos = text.index(tok, pos) + len(tok)
            letters.append((m.group(1), int(m.group(2) or 1)))
        return cls(tuple(letters))

    @property
    def length(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def inverse(self) -> "Word":
        return Word(tuple((g, -e) for g, e in reversed(self.letters)))

    def __mul__(self, other: "Word") -> "Word":
        return Word(self.letters + other.letters)

    def matrix(self) -> Mat2:
        m = I2
        for g, e in self.letters:
            m = m * (GENERATORS[g] ** e)
        return m

    def syllables(self) -> list[tuple[str, int]]:
        """Expanded into unit letters ``(gen, +-1)``."""
        return [(g, 1 if e > 0 else -1) for g, e in self.letters for _ in range(abs(e))]

    def __str__(self):
        if not self.letters:
            return "1"
        return " ".join(g if e == 1 else f"{g}^{e}" for g, e in self.letters)

    def to_json(self):
        return [{"gen": g, "exp": e} for g, e in self.letters]

    @classmethod
    def from_json(cls, obj) -> "Word":
        return cls(tuple((d["gen"], int(d["exp"])) for d in obj))


def _free_reduce(letters: Iterable) -> tuple:
    out: list[tuple[str, int]] = []
    for g, e in letters:
        if g not in GENERATORS:
            raise DomainError(f"unknown generator {g!r}")
        if e == 0:
            continue
        if out and out[-1][0] == g:
            e += out.pop()[1]
            if e == 0:
                continue
        out.append((g, e))
    return tuple(out)


# --- the fundamental domain ------------------------------------------------


@dataclass(frozen=True)
class FundDomain:
    """``F``: strip ``|Re z| < 3`` minus the half-discs over ``(-3, -1/3)`` and ``(1/3, 3)``."""

    strip_bound: Fraction = Fraction(3)
    inner_walls: tuple = ((Fraction(-3), Fraction(-1, 3)), (Fraction(1, 3), Fraction(3)))
    cusps: tuple = ("oo", Fraction(3), Fraction(-3))
    free_side: tuple = (Fraction(-1, 3), Fraction(1, 3))

    def wall_circles(self):
        """``(center, radius)`` of each inner wall, left then right."""
        return [((lo + hi) / 2, (hi - lo) / 2) for lo, hi in self.inner_walls]

    def contains(self, z: HPoint) -> bool:
        return in_fundamental_domain(z).status == "inside"


F = FundDomain()

# walls, in the order they are reported
WALLS = ("strip_right", "strip_left", "inner_right", "inner_left")


@dataclass(frozen=True)
class DomainStatus:
    status: str  # inside | boundary | outside
    wall: Optional[str] = None


def _wall_signs(z: HPoint) -> dict[str, int]:
    """Positive: inside F with respect to that wall; 0: on it; negative: beyond it."""
    x, y = z.re, z.im
    y2 = y * y
    r_minus = (x - 1) * (x - 1) + y2  # |z - 1|^2
    r_plus = (x + 1) * (x + 1) + y2  # |z + 1|^2
    return {
        "strip_right": (3 - x).sign(),
        "strip_left": (x + 3).sign(),
        # |(z - 1)/(z + 1)| > 1/2  <=>  4|z - 1|^2 > |z + 1|^2
        "inner_right": (4 * r_minus - r_plus).sign(),
        # |(z - 1)/(z + 1)| < 2  <=>  |z - 1|^2 < 4|z + 1|^2
        "inner_left": (4 * r_plus - r_minus).sign(),
    }


def in_fundamental_domain(z: HPoint) -> DomainStatus:
    if z.is_boundary:
        raise DomainError("in_fundamental_domain needs an interior point")
    signs = _wall_signs(z)
    for w in WALLS:
        if signs[w] < 0:
            return DomainStatus("outside", w)
    for w in WALLS:
        if signs[w] == 0:
            return DomainStatus("boundary", w)
    return DomainStatus("inside")


@dataclass(frozen=True)
class Reduction:
    word: Word  # word * z == point
    point: HPoint
    transcript: tuple  # (generator, exponent, wall) per step

    def to_json(self):
        return {
            "word": self.word.to_json(),
            "point": self.point.to_json(),
            "transcript": [{"gen": g, "exp": e, "wall": w} for g, e, w in self.transcript],
        }


def _prepend(letters: list, g: str, e: int) -> None:
    if letters and letters[0][0] == g:
        e += letters.pop(0)[1]
        if e == 0:
            return
    letters.insert(0, (g, e))


def reduce_to_domain(z: HPoint, max_steps: int = 10_000) -> Reduction:
    """Move ``z`` into the closure of ``F`` by generators of ``G``.

    Points on ``Re z = -3`` and on the left inner wall are pushed across to
    their partners, so the result lies in ``-3 < Re <= 3`` and on or outside
    the right inner wall.
    """
    if z.is_boundary:
        raise DomainError("reduce_to_domain needs an interior point")
    letters: list = []
    transcript = []
    H_inv = H.inverse()
    for _ in range(max_steps):
        # translate Re z into (-3, 3]
        k = ((z.re - 3) / 6).ceil()
        if k:
            z = HPoint(z.re - 6 * k, z.im)
            _prepend(letters, "P1", -k)
            transcript.append(("P1", -k, "strip_right" if k > 0 else "strip_left"))
        signs = _wall_signs(z)
        if signs["inner_right"] < 0:
            z = mobius_apply(H_inv, z)
            _prepend(letters, "H", -1)
            transcript.append(("H", -1, "inner_right"))
        elif signs["inner_left"] <= 0:
            z = mobius_apply(H, z)
            _prepend(letters, "H", 1)
            transcript.append(("H", 1, "inner_left"))
        else:
            return Reduction(Word(tuple(letters)), z, tuple(transcript))
    raise ReductionError(f"no reduction after {max_steps} steps")


BASE_POINT = HPoint(0, 1)


@dataclass(frozen=True)
class Membership:
    member: bool
    word: Optional[Word]  # expresses A when member
    residual: Mat2  # w * A for the reducing word w
    reduced_point: HPoint

    def to_json(self):
        return {
            "member": self.member,
            "word": self.word.to_json() if self.word is not None else None,
            "residual": self.residual.to_json(),
            "reduced_point": self.reduced_point.to_json(),
        }


def is_member(A: Mat2) -> Membership:
    """Decide ``A in G`` by reducing ``A(i)`` and checking the residual."""
    red = reduce_to_domain(mobius_apply(A, BASE_POINT))
    residual = red.word.matrix() * A
    if residual == I2:
        return Membership(True, red.word.inverse(), residual, red.point)
    return Membership(False, None, residual, red.point)


_UNIT_LETTERS = (("P1", 1), ("P1", -1), ("H", 1), ("H", -1))


def enumerate_words(max_length: int, dedup: bool = True) -> list[tuple[Word, Mat2]]:
    """All freely reduced words of length ``1..max_length`` with their matrices."""
    if max_length > 12:
        raise DomainError("max_length is capped at 12")
    mats = {(g, e): GENERATORS[g] ** e for g, e in _UNIT_LETTERS}
    out: list[tuple[Word, Mat2]] = []
    seen: set = set()
    frontier = [((), I2)]
    for _ in range(max_length):
        nxt = []
        for letters, m in frontier:
            for g, e in _UNIT_LETTERS:
                if letters and letters[-1] == (g, -e):
                    continue
                lt = letters + ((g, e),)
                mm = m * mats[(g, e)]
                nxt.append((lt, mm))
                if dedup:
                    if mm in seen:
                        continue
                    seen.add(mm)
                out.append((Word(lt), mm))
        frontier = nxt
    return out


@dataclass
class ScanReport:
    max_length: int
    words_checked: int
    parabolics: list  # (Word, fixed point)
    counterexamples: list  # (Word, fixed point) with fixed point in (-1, 1)

    @property
    def ok(self) -> bool:
        return not self.counterexamples


def parabolic_direction_scan(max_length: int) -> ScanReport:
    """Check that no parabolic word has its fixed point in ``(-1, 1)``.

    This is evidence up to the given word length, not a proof.
    """
    if max_length > 10:
        raise DomainError("max_length is capped at 10")
    words = enumerate_words(max_length)
    parabolics, bad = [], []
    for w, m in words:
        if classify(m) != "parabolic":
            continue
        (fp,) = fixed_points(m)
        parabolics.append((w, fp))
        if not fp.infinite and abs(fp.re) < 1:
            bad.append((w, fp))
    return ScanReport(max_length, len(words), parabolics, bad)


def verify_side_pairing() -> dict[str, bool]:
    """Exact checks that ``P1`` and ``H`` pair the sides of ``F``."""
    checks: dict[str, bool] = {}
    for t in (1, 2):
        checks[f"P1(-3+{t}i) = 3+{t}i"] = mobius_apply(P1, HPoint(-3, t)) == HPoint(3, t)
    checks["H(-3) = 3"] = mobius_apply(H, HPoint.real(-3)) == HPoint.real(3)
    checks["H(-1/3) = 1/3"] = mobius_apply(H, HPoint.real(Fraction(-1, 3))) == HPoint.real(Fraction(1, 3))
    (cl, rl), (cr, rr) = F.wall_circles()
    apex = mobius_apply(H, HPoint(cl, rl))
    checks["H(left wall apex) on right wall"] = (apex.re - cr) ** 2 + apex.im**2 == rr * rr
    checks["M^-1 H M = diag(2, 1/2)"] = M.inverse() * H * M == Mat2(2, 0, 0, Fraction(1, 2))
    cusp3 = P1.inverse() * P2 * P1
    for name, g, pt in (("P1", P1, HPoint.infinity()), ("P2", P2, HPoint.real(3)), ("P1^-1 P2 P1", cusp3, HPoint.real(-3))):
        checks[f"{name} parabolic fixing {pt}"] = classify(g) == "parabolic" and fixed_points(g) == [pt]
    checks["P2 = H P1^-1"] = P2 == H * P1.inverse()
    return checks


def _words_sample(rng, count: int, max_length: int) -> list[Word]:
    out = []
    for _ in range(count):
        n = rng.randint(1, max_length)
        letters = []
        while len(letters) < n:
            g, e = rng.choice(_UNIT_LETTERS)
            if letters and letters[-1] == (g, -e):
                continue
            letters.append((g, e))
        out.append(Word(tuple(letters)))
    return out


def random_words(count: int, max_length: int, seed: int = 0) -> list[Word]:
    import random

    return _words_sample(random.Random(seed), count, max_length)
