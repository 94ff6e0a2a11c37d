"""Cylinder decompositions in slope-2**n directions and their parabolic elements.

Every chord of the square that carries a piece of a saddle connection lies on
a line ``tau = q*y - p*x = const``.  Consecutive chords bound open strips;
the gluing maps strips onto strips by translations, and a cycle of strips is
a cylinder.  Strips whose entry or exit side contains a singular point that
was not launched at the current depth are left uncovered.

With ``L = sqrt(q**2 + p**2)`` a cylinder has circumference ``wc * L`` and
height ``hc / L``, so its modulus ``wc * L**2 / hc`` and area ``wc * hc`` are
rational.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Optional

from .exactnum import DomainError, rat_gcd, rational_to_json
from .fuchsian import Mat2, frame_rotate, shear_matrix
from .surface import (
    DirVec,
    SurfacePoint,
    SurfaceSpec,
    UnsupportedDirectionError,
    _edge_coordinate,
    _on_side,
    dyadic_slope_exponent,
    saddle_connections,
    segment_interval,
    trace_budget,
)

__all__ = [
    "Strip",
    "Cylinder",
    "CylinderDecomposition",
    "CommensurabilityResult",
    "DecompositionIncompleteError",
    "decompose",
    "decompose_direction",
    "modulus",
    "inverse_modulus",
    "commensurate",
    "synthesize_parabolic",
    "boundary_count",
    "renormalization_check",
    "cylinder_table_csv",
]


class DecompositionIncompleteError(RuntimeError):
    def __init__(self, message: str, partial: "CylinderDecomposition"):
        super().__init__(message)
        self.partial = partial


@dataclass(frozen=True)
class Strip:
    """Open strip ``lo < tau < hi`` of the square."""

    lo: Fraction
    hi: Fraction
    entry_side: str
    exit_side: str

    @property
    def shape(self) -> str:
        opposite = {("bottom", "top"), ("left", "right")}
        return "parallelogram" if (self.entry_side, self.exit_side) in opposite else "trapezoid"


@dataclass(frozen=True)
class Cylinder:
    direction: DirVec
    wc: Fraction
    hc: Fraction
    strips: tuple
    lower: tuple  # saddle connection ids along tau = lo, one per strip
    upper: tuple
    kind: str

    @property
    def area(self) -> Fraction:
        return self.wc * self.hc

    @property
    def modulus(self) -> Fraction:
        return self.wc * self.direction.norm2 / self.hc

    @property
    def inverse_modulus(self) -> Fraction:
        return 1 / self.modulus

    @property
    def boundary(self) -> list[tuple[str, int]]:
        """Boundary saddle connections with multiplicity (once per boundary component)."""
        counts: dict[str, int] = {}
        for side in (self.lower, self.upper):
            for sc in dict.fromkeys(side):
                counts[sc] = counts.get(sc, 0) + 1
        return sorted(counts.items())

    def to_json(self) -> dict:
        return {
            "direction": self.direction.to_json(),
            "kind": self.kind,
            "wc": rational_to_json(self.wc),
            "hc": rational_to_json(self.hc),
            "modulus": rational_to_json(self.modulus),
            "inverse_modulus": rational_to_json(self.inverse_modulus),
            "area": rational_to_json(self.area),
            "boundary_count": boundary_count(self),
            "boundary": [{"saddle_connection": s, "multiplicity": m} for s, m in self.boundary],
            "strips": [[rational_to_json(s.lo), rational_to_json(s.hi)] for s in self.strips],
        }


@dataclass(frozen=True)
class CylinderDecomposition:
    direction: DirVec
    cylinders: tuple
    depth: int
    covered_area: Fraction
    connections: tuple = field(default=(), repr=False)

    def to_json(self) -> dict:
        return {
            "direction": self.direction.to_json(),
            "depth": self.depth,
            "covered_area": rational_to_json(self.covered_area),
            "cylinders": [c.to_json() for c in self.cylinders],
        }


@dataclass(frozen=True)
class CommensurabilityResult:
    m: Fraction
    multipliers: tuple

    def to_json(self):
        return {"m": rational_to_json(self.m), "multipliers": list(self.multipliers)}


def _entry_exit(d: DirVec, tau: Fraction):
    """Entry and exit points of the chord ``tau`` for a direction with q, p > 0."""
    q, p = d.q, d.p
    if tau >= 0:
        entry = SurfacePoint(0, tau / q)
    else:
        entry = SurfacePoint(-tau / p, 0)
    if tau >= q - p:
        exit_ = SurfacePoint((q - tau) / p, 1)
    else:
        exit_ = SurfacePoint(1, (tau + p) / q)
    return entry, exit_


def _chord_time(d: DirVec, tau: Fraction) -> Fraction:
    entry, exit_ = _entry_exit(d, tau)
    return (exit_.x - entry.x) / d.q


def _clean_side(surface: SurfaceSpec, a: SurfacePoint, b: SurfacePoint):
    """Return ``(side, k)`` if the open edge interval from a to b lies in one segment."""
    for side in ("bottom", "top", "left", "right"):
        if _on_side(side, a) and _on_side(side, b):
            ca, cb = sorted((_edge_coordinate(side, a), _edge_coordinate(side, b)))
            k, exact = surface.locate(side, (ca + cb) / 2)
            if exact:
                return None
            if surface.side_gluing == "straight" and side in ("left", "right"):
                lo, hi = Fraction(0), Fraction(1)
            else:
                lo, hi = segment_interval(side, k)
            if lo <= ca and cb <= hi:
                return side, k
            return None
    return None


def decompose_direction(
    direction: DirVec,
    depth: int,
    surface: Optional[SurfaceSpec] = None,
) -> CylinderDecomposition:
    if not isinstance(direction, DirVec):
        direction = DirVec.of(*direction)
    if direction.q < 0:
        direction = DirVec(-direction.q, -direction.p)
    if direction.p <= 0:
        raise UnsupportedDirectionError("decomposition needs a direction of positive slope")
    dyadic_slope_exponent(direction)
    if depth < 2:
        raise DomainError("depth must be >= 2")
    surface = surface or SurfaceSpec(depth=depth)
    d = direction
    conns = saddle_connections(d, depth, surface)

    chord_owner: dict[Fraction, str] = {}
    for sc in conns:
        for pc in sc.pieces:
            tau = d.tau(pc.start.x, pc.start.y)
            chord_owner.setdefault(tau, sc.id)
    taus = sorted(set(chord_owner) | {Fraction(-d.p), Fraction(d.q)})

    strips: dict[Fraction, Strip] = {}
    gluing: dict[Fraction, Fraction] = {}
    for lo, hi in zip(taus, taus[1:]):
        e_lo, x_lo = _entry_exit(d, lo)
        e_hi, x_hi = _entry_exit(d, hi)
        ent = _clean_side(surface, e_lo, e_hi)
        ext = _clean_side(surface, x_lo, x_hi)
        if ent is None or ext is None:
            continue
        strips[lo] = Strip(lo, hi, ent[0], ext[0])
        tx, ty = surface.translation(*ext)
        shift = d.q * ty - d.p * tx
        gluing[lo] = (lo + shift, hi + shift)

    budget = trace_budget(depth)
    cylinders = []
    seen: set = set()
    problem = None
    for start in sorted(strips):
        if start in seen:
            continue
        cycle = [start]
        cur = start
        closed = False
        for _ in range(budget):
            nlo, nhi = gluing[cur]
            nxt = strips.get(nlo)
            if nxt is None or nxt.hi != nhi:
                break
            if nlo == start:
                closed = True
                break
            if nlo in seen or nlo in cycle:
                break
            cycle.append(nlo)
            cur = nlo
        else:
            problem = problem or f"strip at tau={start} did not close within {budget} steps"
        if not closed:
            continue
        seen.update(cycle)
        cylinders.append(_make_cylinder(d, [strips[s] for s in cycle], chord_owner))

    cylinders.sort(key=lambda c: (-c.area, c.strips[0].lo))
    covered = sum((c.area for c in cylinders), Fraction(0))
    result = CylinderDecomposition(d, tuple(cylinders), depth, covered, tuple(conns))
    if problem is not None:
        raise DecompositionIncompleteError(problem, result)
    return result


def _make_cylinder(d: DirVec, cycle: list[Strip], owner: dict) -> Cylinder:
    hc = cycle[0].hi - cycle[0].lo
    low = sum((_chord_time(d, s.lo) for s in cycle), Fraction(0))
    high = sum((_chord_time(d, s.hi) for s in cycle), Fraction(0))
    if low != high:
        raise DomainError(f"strip cycle at tau={cycle[0].lo} is not a flat cylinder")
    kind = "parallelogram" if all(s.shape == "parallelogram" for s in cycle) else "trapezoid"
    return Cylinder(
        direction=d,
        wc=low,
        hc=hc,
        strips=tuple(cycle),
        lower=tuple(owner[s.lo] for s in cycle),
        upper=tuple(owner[s.hi] for s in cycle),
        kind=kind,
    )


def decompose(n: int, depth: int, surface: Optional[SurfaceSpec] = None) -> CylinderDecomposition:
    """Cylinder decomposition in the direction of slope ``2**n``."""
    if abs(n) > depth:
        raise DomainError(f"|n| = {abs(n)} exceeds depth {depth}")
    return decompose_direction(DirVec.from_slope_exponent(n), depth, surface)


def modulus(c: Cylinder) -> Fraction:
    return c.modulus


def inverse_modulus(c: Cylinder) -> Fraction:
    return c.inverse_modulus


def boundary_count(c: Cylinder) -> int:
    return sum(m for _, m in c.boundary)


def commensurate(dec: CylinderDecomposition) -> CommensurabilityResult:
    if not dec.cylinders:
        raise DomainError("empty decomposition")
    inv = [c.inverse_modulus for c in dec.cylinders]
    m = reduce(rat_gcd, sorted(set(inv)))
    ks = []
    for x in inv:
        k = x / m
        if k.denominator != 1:
            raise DomainError(f"inverse modulus {x} is not a multiple of {m}")
        ks.append(int(k))
    return CommensurabilityResult(m, tuple(ks))


def synthesize_parabolic(dec: CylinderDecomposition) -> tuple[Mat2, tuple]:
    """Parabolic element (rotated frame) twisting cylinder ``i`` ``k_i`` times."""
    res = commensurate(dec)
    rotated = frame_rotate(dec.direction)
    return shear_matrix(rotated, 1 / res.m), res.multipliers


@dataclass(frozen=True)
class RenormalizationReport:
    ok: bool
    pairs_checked: int
    first_failure: Optional[int] = None
    message: str = ""


def renormalization_check(dec: CylinderDecomposition) -> RenormalizationReport:
    """Check consecutive trapezoid cylinders shrink by exactly 1/2 in wc and hc."""
    traps = [c for c in dec.cylinders if c.kind == "trapezoid"]
    if len(traps) < 3:
        return RenormalizationReport(False, 0, None, "insufficient data: fewer than 3 trapezoid cylinders")
    half = Fraction(1, 2)
    for j, (a, b) in enumerate(zip(traps, traps[1:])):
        if b.wc != a.wc * half or b.hc != a.hc * half:
            return RenormalizationReport(False, j, j, f"cylinder {j + 1} is not cylinder {j} scaled by 1/2")
    return RenormalizationReport(True, len(traps) - 1)


def cylinder_table_csv(dec: CylinderDecomposition) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["direction", "kind", "wc", "hc", "modulus", "inverse_modulus", "boundary_count"])
    for c in dec.cylinders:
        w.writerow(
            [
                f"{c.direction.q},{c.direction.p}",
                c.kind,
                c.wc,
                c.hc,
                c.modulus,
                c.inverse_modulus,
                boundary_count(c),
            ]
        )
    return buf.getvalue()
