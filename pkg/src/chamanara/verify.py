"""Reproduce the published constants of the Chamanara surface as a report."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

from .cylinders import CylinderDecomposition, boundary_count, commensurate, decompose, synthesize_parabolic
from .exactnum import QuadRat, sqrt_rational
from .fuchsian import (
    H,
    M,
    P1,
    P2,
    HPoint,
    Mat2,
    classify,
    eigen_direction,
    fixed_points,
    frame_rotate,
    is_member,
    mobius_apply,
    verify_side_pairing,
)
from .surface import DirVec, SurfaceSpec

__all__ = ["Claim", "VerificationReport", "verify_paper"]


@dataclass(frozen=True)
class Claim:
    id: str
    location: str
    expected: str
    computed: str
    passed: bool

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "location": self.location,
            "expected": self.expected,
            "computed": self.computed,
            "pass": self.passed,
        }

    @classmethod
    def from_json(cls, obj) -> "Claim":
        return cls(obj["id"], obj["location"], obj["expected"], obj["computed"], bool(obj["pass"]))


@dataclass(frozen=True)
class VerificationReport:
    depth: int
    claims: tuple = field(default=())

    def __post_init__(self):
        ids = [c.id for c in self.claims]
        if len(ids) != len(set(ids)):
            raise ValueError("claim ids must be unique")

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.claims)

    @property
    def failures(self) -> list[Claim]:
        return [c for c in self.claims if not c.passed]

    def to_json(self) -> dict:
        return {"depth": self.depth, "ok": self.ok, "claims": [c.to_json() for c in self.claims]}

    @classmethod
    def from_json(cls, obj) -> "VerificationReport":
        return cls(int(obj["depth"]), tuple(Claim.from_json(c) for c in obj["claims"]))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    def to_text(self) -> str:
        lines = []
        for c in self.claims:
            mark = "PASS" if c.passed else "FAIL"
            lines.append(f"[{mark}] {c.id} ({c.location}): expected {c.expected}; computed {c.computed}")
        n_ok = sum(c.passed for c in self.claims)
        lines.append(f"{n_ok}/{len(self.claims)} claims pass at depth {self.depth}")
        return "\n".join(lines)


def _fmt_set(values) -> str:
    return "{" + ", ".join(str(v) for v in sorted(set(values))) + "}"


def _length(comp: Fraction, norm2: int, up: bool) -> QuadRat:
    # exact circumference (wc * L) or height (hc / L) with L = sqrt(norm2)
    root = sqrt_rational(Fraction(norm2))
    return QuadRat.coerce(comp) * root if up else QuadRat.coerce(comp) / root


class _Checker:
    def __init__(self, depth: int, surface: SurfaceSpec):
        self.depth = depth
        self.surface = surface
        self.claims: list[Claim] = []
        self._decs: dict[int, CylinderDecomposition] = {}

    def dec(self, n: int) -> CylinderDecomposition:
        if n not in self._decs:
            self._decs[n] = decompose(n, self.depth, self.surface)
        return self._decs[n]

    def add(self, cid: str, location: str, expected: str, compute: Callable[[], tuple[str, bool]]):
        try:
            computed, ok = compute()
        except Exception as exc:  # a failing computation is a failing claim
            computed, ok = f"error: {type(exc).__name__}: {exc}", False
        self.claims.append(Claim(cid, location, expected, computed, bool(ok)))


def verify_paper(depth: int = 8, surface: Optional[SurfaceSpec] = None) -> VerificationReport:
    """Run every published-constant check at the given depth."""
    surface = surface or SurfaceSpec(depth=depth)
    ck = _Checker(depth, surface)

    def moduli(n, kind=None):
        return [c.modulus for c in ck.dec(n).cylinders if kind is None or c.kind == kind]

    def slope1_modulus():
        ms = moduli(0)
        return _fmt_set(ms), bool(ms) and set(ms) == {6}

    ck.add("slope1.modulus", "slope-1 decomposition", "{6}", slope1_modulus)

    def slope1_largest():
        c = ck.dec(0).cylinders[0]
        h, w = _length(c.hc, 2, False), _length(c.wc, 2, True)
        return f"height {h}, circumference {w}", h == QuadRat(0, Fraction(1, 4), 2) and w == QuadRat(0, Fraction(3, 2), 2)

    ck.add("slope1.largest", "slope-1 decomposition, largest cylinder", "height 1/4*sqrt2, circumference 3/2*sqrt2", slope1_largest)

    def slope2_trap():
        ms = moduli(1, "trapezoid")
        return _fmt_set(ms), bool(ms) and set(ms) == {Fraction(15, 2)}

    ck.add("slope2.trapezoid_modulus", "slope-2 decomposition", "{15/2}", slope2_trap)

    def slope2_middle():
        (c,) = [c for c in ck.dec(1).cylinders if c.kind == "parallelogram"]
        h, w = _length(c.hc, 5, False), _length(c.wc, 5, True)
        ok = h == QuadRat(0, Fraction(1, 5), 5) and w == QuadRat(0, Fraction(1, 2), 5) and c.modulus == Fraction(5, 2)
        return f"height {h}, circumference {w}, modulus {c.modulus}", ok

    ck.add(
        "slope2.middle",
        "slope-2 decomposition, middle cylinder",
        "height 1/5*sqrt5, circumference 1/2*sqrt5, modulus 5/2",
        slope2_middle,
    )

    def slope4_inv():
        inv = [1 / m for m in moduli(2, "trapezoid")]
        return _fmt_set(inv), bool(inv) and set(inv) == {Fraction(4, 51)}

    ck.add("slope4.inverse_modulus", "slope-4 decomposition", "{4/51}", slope4_inv)

    def parabolic(n, target):
        def run():
            m, _ = synthesize_parabolic(ck.dec(n))
            return str(m.canonical()), m == target

        return run

    ck.add("P1.synthesized", "slope-1 parabolic", str(P1.canonical()), parabolic(0, P1))
    ck.add("P2.synthesized", "slope-2 parabolic", "(1/4)*[[-5, 27], [-3, 13]]", parabolic(1, P2))

    def twists(n, expected):
        def run():
            dec = ck.dec(n)
            res = commensurate(dec)
            by_kind = sorted({(c.kind, k) for c, k in zip(dec.cylinders, res.multipliers)})
            return f"m = {res.m}, {by_kind}", set(by_kind) == expected

        return run

    ck.add("slope1.twists", "slope-1 Dehn twists", "[('trapezoid', 1)]", twists(0, {("trapezoid", 1)}))
    ck.add(
        "slope2.twists",
        "slope-2 triple Dehn twist",
        "[('parallelogram', 3), ('trapezoid', 1)]",
        twists(1, {("parallelogram", 3), ("trapezoid", 1)}),
    )

    def bc_slope1():
        dec = ck.dec(0)
        counts = [boundary_count(c) for c in dec.cylinders]
        doubled = [s for s, m in dec.cylinders[0].boundary if m == 2]
        return f"counts {_fmt_set(counts)}, doubled in largest {doubled}", set(counts) == {4} and len(doubled) == 1

    ck.add("slope1.boundary", "slope-1 boundary saddle connections", "counts {4}, one doubled in largest", bc_slope1)

    def bc_slope2():
        (c,) = [c for c in ck.dec(1).cylinders if c.kind == "parallelogram"]
        return str(boundary_count(c)), boundary_count(c) == 2

    ck.add("slope2.boundary", "slope-2 middle cylinder boundary", "2", bc_slope2)

    ck.add("H.product", "H = P2 P1", "(1/4)*[[5, 3], [3, 5]]", lambda: (str((P2 * P1).canonical()), P2 * P1 == H))

    def conj():
        c = M.inverse() * H * M
        return str(c.canonical()), c == Mat2(2, 0, 0, Fraction(1, 2))

    ck.add("M.conjugation", "M^-1 H M", "[[2, 0], [0, 1/2]]", conj)

    images = {Fraction(-2): Fraction(3), Fraction(-1, 2): Fraction(-3), Fraction(1, 2): Fraction(-1, 3), Fraction(2): Fraction(1, 3)}

    def cusp_images():
        got = {x: mobius_apply(M, HPoint.real(x)) for x in images}
        text = ", ".join(f"M({x}) = {got[x]}" for x in images)
        return text, all(got[x] == HPoint.real(y) for x, y in images.items())

    ck.add("M.images", "M on the real axis", ", ".join(f"M({x}) = {y}" for x, y in images.items()), cusp_images)

    def classes():
        got = [classify(g) for g in (P1, P2, H, M)]
        m4 = (M**4).is_identity()
        return f"{got}, M^4 = I: {m4}", got == ["parabolic", "parabolic", "hyperbolic", "elliptic"] and m4

    ck.add(
        "classification",
        "element types",
        "['parabolic', 'parabolic', 'hyperbolic', 'elliptic'], M^4 = I: True",
        classes,
    )

    def fps():
        got = {name: fixed_points(g) for name, g in (("P1", P1), ("P2", P2), ("H", H), ("M", M))}
        want = {
            "P1": [HPoint.infinity()],
            "P2": [HPoint.real(3)],
            "H": [HPoint.real(-1), HPoint.real(1)],
            "M": [HPoint(0, 1)],
        }
        text = "; ".join(f"{k}: {', '.join(str(p) for p in v)}" for k, v in got.items())
        return text, got == want

    ck.add("fixed_points", "fixed points", "P1: oo; P2: 3; H: -1, 1; M: i", fps)

    def eigen():
        e = eigen_direction(P2)
        r1, r2 = frame_rotate(DirVec(1, 1)), frame_rotate(DirVec(1, 2))
        ok = e.direction == DirVec(3, 1) and r1 == DirVec(1, 0) and r2 == DirVec(3, 1)
        return f"P2 eigen ({e.direction.q}, {e.direction.p}); rotated (1,1) -> ({r1.q}, {r1.p}), (1,2) -> ({r2.q}, {r2.p})", ok

    ck.add("eigen_directions", "rotated frame", "P2 eigen (3, 1); rotated (1,1) -> (1, 0), (1,2) -> (3, 1)", eigen)

    def pairing():
        checks = verify_side_pairing()
        bad = [k for k, v in checks.items() if not v]
        return (f"{len(checks)} checks, failing {bad}", not bad)

    ck.add("side_pairing", "P1 and H pair the sides of F", "all checks pass", pairing)

    def cusp_member():
        g = P1.inverse() * P2 * P1
        res = is_member(g)
        return f"member {res.member}, word {res.word}", res.member and classify(g) == "parabolic"

    ck.add("cusp3.member", "parabolic at the cusp -3", "member True", cusp_member)

    return VerificationReport(depth, tuple(ck.claims))
