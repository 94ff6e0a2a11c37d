"""The Chamanara surface for alpha = 1/2 and exact straight-line flow on it.

The surface is the unit square ``[0, 1]^2``.  The bottom edge is cut at the
points ``1 - 2**-k`` and the top edge at ``2**-k``; bottom segment ``k``,
``(1 - 2**(1-k), 1 - 2**-k)``, is glued to top segment ``k``,
``(2**-k, 2**(1-k))``, by the translation ``(3 * 2**-k - 1, 1)``.  The left
and right edges are glued the same way with coordinates transposed.  Corners
and cutting points are not part of the surface; together they form the single
wild singularity.

Singular points are addressed by string labels: ``"B3"`` is the bottom
cutting point of generation 3, likewise ``"T"``, ``"L"``, ``"R"``; the
corners are ``"C00"``, ``"C10"``, ``"C01"``, ``"C11"``.
"""

from __future__ import annotations

import heapq
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .exactnum import DomainError, QuadRat, rational_from_json, rational_to_json

__all__ = [
    "SIDES",
    "ALPHA",
    "DirVec",
    "EdgeSegment",
    "SurfacePoint",
    "SurfaceSpec",
    "Crossing",
    "Piece",
    "Trajectory",
    "SingularityHit",
    "Truncated",
    "SaddleConnection",
    "SingularityHitError",
    "UnsupportedDirectionError",
    "IncompleteTraceError",
    "build_surface",
    "glue_map",
    "trace_geodesic",
    "saddle_connections",
    "singularity_path",
    "identified_neighbors",
    "anchor_point",
    "anchor_label",
    "dyadic_slope_exponent",
]

SIDES = ("bottom", "top", "left", "right")
ALPHA = Fraction(1, 2)
PARTNER = {"bottom": "top", "top": "bottom", "left": "right", "right": "left"}
_SIDE_LETTER = {"bottom": "B", "top": "T", "left": "L", "right": "R"}
_LETTER_SIDE = {v: k for k, v in _SIDE_LETTER.items()}
_CORNERS = {
    "C00": (Fraction(0), Fraction(0)),
    "C10": (Fraction(1), Fraction(0)),
    "C01": (Fraction(0), Fraction(1)),
    "C11": (Fraction(1), Fraction(1)),
}
_LABEL_RE = re.compile(r"^([BTLR])([1-9]\d*)$")


class SingularityHitError(DomainError):
    """A point handed to the gluing is a cutting point or a corner."""


class UnsupportedDirectionError(DomainError):
    """Saddle connections are only enumerated for slopes +-2**n."""


class IncompleteTraceError(RuntimeError):
    """A trajectory launched from the singularity did not close in budget."""


def _pow2(k: int) -> Fraction:
    return Fraction(1, 1 << k) if k >= 0 else Fraction(1 << -k)


@dataclass(frozen=True, order=True)
class DirVec:
    """Primitive integer direction ``(q, p)``; the slope is ``p/q``."""

    q: int
    p: int

    def __post_init__(self):
        if self.q == 0 and self.p == 0:
            raise DomainError("direction (0, 0)")
        if math.gcd(self.q, self.p) != 1:
            raise DomainError(f"direction ({self.q}, {self.p}) is not primitive")

    @classmethod
    def of(cls, q: int, p: int) -> "DirVec":
        if q == 0 and p == 0:
            raise DomainError("direction (0, 0)")
        g = math.gcd(q, p)
        return cls(q // g, p // g)

    @classmethod
    def from_slope_exponent(cls, n: int) -> "DirVec":
        return cls(1, 1 << n) if n >= 0 else cls(1 << -n, 1)

    @property
    def norm2(self) -> int:
        return self.q * self.q + self.p * self.p

    def tau(self, x, y) -> Fraction:
        """Transversal coordinate, constant along lines of this direction."""
        return self.q * y - self.p * x

    def to_json(self):
        return [self.q, self.p]


@dataclass(frozen=True)
class SurfacePoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if not (0 <= self.x <= 1 and 0 <= self.y <= 1):
            raise DomainError(f"({self.x}, {self.y}) is outside the unit square")

    def on_boundary(self) -> bool:
        return self.x in (0, 1) or self.y in (0, 1)

    def to_json(self):
        return [rational_to_json(self.x), rational_to_json(self.y)]

    def __str__(self):
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class EdgeSegment:
    """Open edge segment ``side``/``index``; ``lo < hi`` along the edge."""

    side: str
    index: int
    lo: Fraction
    hi: Fraction

    @property
    def id(self) -> str:
        return f"{_SIDE_LETTER[self.side]}{self.index}"

    @property
    def length(self) -> Fraction:
        return self.hi - self.lo

    def to_json(self):
        return {
            "side": self.side,
            "index": self.index,
            "interval": [rational_to_json(self.lo), rational_to_json(self.hi)],
        }


def segment_interval(side: str, k: int) -> tuple[Fraction, Fraction]:
    if k < 1:
        raise DomainError("segment index starts at 1")
    if side in ("bottom", "left"):
        return 1 - _pow2(k - 1), 1 - _pow2(k)
    return _pow2(k), _pow2(k - 1)


def translation(side: str, k: int) -> tuple[Fraction, Fraction]:
    """Vector carrying segment ``k`` of ``side`` onto its partner."""
    s = 3 * _pow2(k) - 1
    if side == "bottom":
        return s, Fraction(1)
    if side == "top":
        return -s, Fraction(-1)
    if side == "left":
        return Fraction(1), s
    if side == "right":
        return Fraction(-1), -s
    raise DomainError(f"unknown side {side!r}")


def _edge_coordinate(side: str, pt: SurfacePoint) -> Fraction:
    return pt.x if side in ("bottom", "top") else pt.y


def _edge_point(side: str, c) -> SurfacePoint:
    c = Fraction(c)
    return {
        "bottom": lambda: SurfacePoint(c, 0),
        "top": lambda: SurfacePoint(c, 1),
        "left": lambda: SurfacePoint(0, c),
        "right": lambda: SurfacePoint(1, c),
    }[side]()


def _dyadic_position(r: Fraction) -> tuple[int, bool]:
    """For ``0 < r <= 1`` return ``(k, exact)`` with ``2**-k <= r < 2**(1-k)``.

    ``exact`` is true iff ``r == 2**-k``.
    """
    n, d = r.numerator, r.denominator
    k = max(0, (d // n).bit_length() - 1)
    while (n << k) < d:
        k += 1
    while k > 0 and (n << (k - 1)) >= d:
        k -= 1
    return k, (n << k) == d


def _locate(side: str, c: Fraction) -> tuple[int, bool]:
    """Segment index containing edge coordinate ``c`` (``exact``: cutting point).

    Returns ``(0, True)`` at a corner.
    """
    if c <= 0 or c >= 1:
        return 0, True
    r = 1 - c if side in ("bottom", "left") else c
    k, exact = _dyadic_position(r)
    return k, exact


def anchor_point(label: str) -> SurfacePoint:
    if label in _CORNERS:
        return SurfacePoint(*_CORNERS[label])
    m = _LABEL_RE.match(label)
    if m is None:
        raise DomainError(f"unknown singular label {label!r}")
    side, k = _LETTER_SIDE[m.group(1)], int(m.group(2))
    c = 1 - _pow2(k) if side in ("bottom", "left") else _pow2(k)
    return _edge_point(side, c)


def anchor_label(pt: SurfacePoint) -> Optional[str]:
    """Label of a singular point of the square, or ``None`` for surface points."""
    for label, (x, y) in _CORNERS.items():
        if pt.x == x and pt.y == y:
            return label
    for side in SIDES:
        if side == "bottom" and pt.y != 0 or side == "top" and pt.y != 1:
            continue
        if side == "left" and pt.x != 0 or side == "right" and pt.x != 1:
            continue
        k, exact = _locate(side, _edge_coordinate(side, pt))
        if exact:
            return f"{_SIDE_LETTER[side]}{k}"
    return None


def anchor_generation(label: str) -> int:
    if label in _CORNERS:
        return 0
    return int(label[1:])


@dataclass(frozen=True)
class SurfaceSpec:
    """The square with its gluings, materialised to ``depth`` segments per side.

    ``side_gluing="straight"`` replaces the left/right gluing by the plain
    identification ``(0, y) ~ (1, y)``.  It exists only for fault injection.
    """

    depth: int
    alpha: Fraction = ALPHA
    side_gluing: str = "chamanara"
    segments: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.depth < 1:
            raise DomainError("depth must be >= 1")
        if self.alpha != ALPHA:
            raise DomainError("only alpha = 1/2 is supported")
        if not self.segments:
            segs = tuple(
                EdgeSegment(side, k, *segment_interval(side, k))
                for side in SIDES
                for k in range(1, self.depth + 1)
            )
            object.__setattr__(self, "segments", segs)

    @property
    def translations(self) -> list[tuple[Fraction, Fraction]]:
        return [translation("bottom", k) for k in range(1, self.depth + 1)]

    def _straight(self, side: str) -> bool:
        return self.side_gluing == "straight" and side in ("left", "right")

    def locate(self, side: str, c: Fraction) -> tuple[int, bool]:
        if self._straight(side):
            return (0, True) if c <= 0 or c >= 1 else (1, False)
        return _locate(side, c)

    def is_singular(self, pt: SurfacePoint) -> bool:
        if pt.x in (0, 1) and pt.y in (0, 1):
            return True
        for side in SIDES:
            if _on_side(side, pt):
                return self.locate(side, _edge_coordinate(side, pt))[1]
        return False

    def segment_of(self, pt: SurfacePoint) -> tuple[str, int]:
        for side in SIDES:
            if _on_side(side, pt):
                k, exact = self.locate(side, _edge_coordinate(side, pt))
                if exact:
                    raise SingularityHitError(f"{pt} is singular")
                return side, k
        raise DomainError(f"{pt} is not on the boundary of the square")

    def translation(self, side: str, k: int) -> tuple[Fraction, Fraction]:
        if self._straight(side):
            return (Fraction(1), Fraction(0)) if side == "left" else (Fraction(-1), Fraction(0))
        return translation(side, k)

    def glue(self, pt: SurfacePoint) -> SurfacePoint:
        side, k = self.segment_of(pt)
        tx, ty = self.translation(side, k)
        return SurfacePoint(pt.x + tx, pt.y + ty)

    def anchors(self, depth: Optional[int] = None) -> list[str]:
        depth = self.depth if depth is None else depth
        labels = list(_CORNERS)
        for side in SIDES:
            if self._straight(side):
                continue
            labels += [f"{_SIDE_LETTER[side]}{k}" for k in range(1, depth + 1)]
        return labels

    def to_json(self) -> dict:
        return {
            "alpha": rational_to_json(self.alpha),
            "depth": self.depth,
            "side_gluing": self.side_gluing,
            "segments": [s.to_json() for s in self.segments],
            "translations": [
                {
                    "from": s.id,
                    "to": f"{_SIDE_LETTER[PARTNER[s.side]]}{s.index}",
                    "vector": [rational_to_json(v) for v in self.translation(s.side, s.index)],
                }
                for s in self.segments
                if s.side in ("bottom", "left")
            ],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "SurfaceSpec":
        return cls(
            depth=int(obj["depth"]),
            alpha=rational_from_json(obj["alpha"]),
            side_gluing=obj.get("side_gluing", "chamanara"),
        )


def _on_side(side: str, pt: SurfacePoint) -> bool:
    return {
        "bottom": pt.y == 0,
        "top": pt.y == 1,
        "left": pt.x == 0,
        "right": pt.x == 1,
    }[side]


def build_surface(depth: int, side_gluing: str = "chamanara") -> SurfaceSpec:
    return SurfaceSpec(depth=depth, side_gluing=side_gluing)


def glue_map(pt: SurfacePoint, surface: Optional[SurfaceSpec] = None) -> SurfacePoint:
    """Partner of a boundary point under the edge gluing.

    Raises :class:`SingularityHitError` at cutting points and corners and
    :class:`DomainError` for points off the boundary.
    """
    surface = surface or _DEFAULT
    return surface.glue(pt)


_DEFAULT = SurfaceSpec(depth=1)


# --- straight-line flow ----------------------------------------------------


@dataclass(frozen=True)
class Crossing:
    """The flow left the square through ``exit_segment`` and re-entered."""

    exit_segment: str
    exit_point: SurfacePoint
    entry_point: SurfacePoint

    def to_json(self):
        return {
            "segment": self.exit_segment,
            "exit": self.exit_point.to_json(),
            "entry": self.entry_point.to_json(),
        }


@dataclass(frozen=True)
class Piece:
    """Chord of the square traversed from ``start`` for time ``t``."""

    start: SurfacePoint
    end: SurfacePoint
    t: Fraction

    def to_json(self):
        return {"start": self.start.to_json(), "end": self.end.to_json(), "t": rational_to_json(self.t)}


@dataclass(frozen=True)
class _TraceBase:
    direction: DirVec
    pieces: tuple
    crossings: tuple

    @property
    def time(self) -> Fraction:
        return sum((pc.t for pc in self.pieces), Fraction(0))

    @property
    def holonomy(self) -> tuple[Fraction, Fraction]:
        t = self.time
        return t * self.direction.q, t * self.direction.p

    def to_json(self) -> dict:
        return {
            "kind": type(self).__name__,
            "direction": self.direction.to_json(),
            "holonomy": [rational_to_json(h) for h in self.holonomy],
            "crossings": [c.to_json() for c in self.crossings],
            "pieces": [p.to_json() for p in self.pieces],
        }


@dataclass(frozen=True)
class Trajectory(_TraceBase):
    """A closed regular orbit that came back to its starting point."""


@dataclass(frozen=True)
class SingularityHit(_TraceBase):
    end_anchor: str = ""


@dataclass(frozen=True)
class Truncated(_TraceBase):
    pass


def _points_inward(side: str, d: DirVec) -> bool:
    return {"bottom": d.p > 0, "top": d.p < 0, "left": d.q > 0, "right": d.q < 0}[side]


def _launchable(pt: SurfacePoint, d: DirVec) -> bool:
    """Does ``pt + eps*(q, p)`` lie in the open square for small eps?"""
    for coord, step in ((pt.x, d.q), (pt.y, d.p)):
        if coord == 0 and step <= 0 or coord == 1 and step >= 0:
            return False
    return True


def _exit(pt: SurfacePoint, d: DirVec) -> tuple[Fraction, SurfacePoint]:
    times = []
    if d.q > 0:
        times.append((1 - pt.x) / d.q)
    elif d.q < 0:
        times.append(-pt.x / d.q)
    if d.p > 0:
        times.append((1 - pt.y) / d.p)
    elif d.p < 0:
        times.append(-pt.y / d.p)
    t = min(times)
    return t, SurfacePoint(pt.x + t * d.q, pt.y + t * d.p)


def _on_chord(pt: SurfacePoint, a: SurfacePoint, t: Fraction, d: DirVec) -> Optional[Fraction]:
    """Time at which the chord from ``a`` passes ``pt`` (``0 < s <= t``)."""
    if d.tau(pt.x, pt.y) != d.tau(a.x, a.y):
        return None
    s = (pt.x - a.x) / d.q if d.q else (pt.y - a.y) / d.p
    return s if 0 < s <= t else None


def trace_geodesic(
    start: Union[SurfacePoint, str],
    direction: DirVec,
    max_crossings: int,
    surface: Optional[SurfaceSpec] = None,
):
    """Follow the straight line from ``start`` in ``direction``.

    ``start`` is a surface point (interior, or on an edge segment) or the label
    of a singular point from which the ray enters the open square.  Each
    arrival at the boundary of the square counts as one crossing; with
    ``max_crossings`` arrivals used up the result is :class:`Truncated`.
    """
    surface = surface or _DEFAULT
    if not isinstance(direction, DirVec):
        direction = DirVec.of(*direction)
    if max_crossings < 0:
        raise DomainError("max_crossings must be >= 0")

    closed_at = None
    if isinstance(start, str):
        pt = anchor_point(start)
        if not _launchable(pt, direction):
            raise DomainError(f"no ray from {start} in direction {direction.to_json()} enters the square")
    else:
        pt = start
        if pt.on_boundary():
            side, _ = surface.segment_of(pt)
            if (side in ("bottom", "top") and direction.p == 0) or (side in ("left", "right") and direction.q == 0):
                raise DomainError("direction runs along the boundary")
            if not _points_inward(side, direction):
                pt = surface.glue(pt)
        closed_at = pt

    pieces: list[Piece] = []
    crossings: list[Crossing] = []
    arrivals = 0
    while True:
        if arrivals >= max_crossings:
            return Truncated(direction, tuple(pieces), tuple(crossings))
        t, end = _exit(pt, direction)
        if closed_at is not None and pieces:
            s = _on_chord(closed_at, pt, t, direction)
            if s is not None:
                pieces.append(Piece(pt, closed_at, s))
                return Trajectory(direction, tuple(pieces), tuple(crossings))
        pieces.append(Piece(pt, end, t))
        arrivals += 1
        if surface.is_singular(end):
            return SingularityHit(direction, tuple(pieces), tuple(crossings), anchor_label(end) or "")
        side, k = surface.segment_of(end)
        nxt = surface.glue(end)
        crossings.append(Crossing(f"{_SIDE_LETTER[side]}{k}", end, nxt))
        pt = nxt
        if closed_at is not None and pt == closed_at:
            return Trajectory(direction, tuple(pieces), tuple(crossings))


# --- saddle connections ----------------------------------------------------


@dataclass(frozen=True)
class SaddleConnection:
    direction: DirVec
    start_anchor: str
    end_anchor: str
    pieces: tuple
    crossings: tuple

    @property
    def time(self) -> Fraction:
        return sum((pc.t for pc in self.pieces), Fraction(0))

    @property
    def holonomy(self) -> tuple[Fraction, Fraction]:
        t = self.time
        return t * self.direction.q, t * self.direction.p

    @property
    def length2(self) -> Fraction:
        hx, hy = self.holonomy
        return hx * hx + hy * hy

    @property
    def intercept(self) -> Fraction:
        first = self.pieces[0].start
        return self.direction.tau(first.x, first.y)

    @property
    def id(self) -> str:
        return f"{self.start_anchor}>{self.end_anchor}@{self.direction.q},{self.direction.p}"

    def to_json(self) -> dict:
        return {
            "direction": self.direction.to_json(),
            "start_anchor": self.start_anchor,
            "end_anchor": self.end_anchor,
            "holonomy": [rational_to_json(h) for h in self.holonomy],
            "crossings": [[c.exit_segment, rational_to_json(_edge_coordinate(_LETTER_SIDE[c.exit_segment[0]], c.exit_point))] for c in self.crossings],
        }


def dyadic_slope_exponent(direction: DirVec) -> int:
    """``n`` with ``|slope| == 2**n``; raises for any other direction."""
    q, p = abs(direction.q), abs(direction.p)
    if q == 0 or p == 0:
        raise UnsupportedDirectionError("horizontal and vertical directions are not supported")
    if p & (p - 1) == 0 and q == 1:
        return p.bit_length() - 1
    if q & (q - 1) == 0 and p == 1:
        return -(q.bit_length() - 1)
    raise UnsupportedDirectionError(f"slope {direction.p}/{direction.q} is not +-2**n")


def trace_budget(depth: int) -> int:
    return 4 * depth + 16


def saddle_connections(
    direction: DirVec,
    depth: int,
    surface: Optional[SurfaceSpec] = None,
    max_crossings: Optional[int] = None,
) -> list[SaddleConnection]:
    """Saddle connections in ``direction`` launched from anchors of generation <= depth.

    Sorted by the transversal coordinate of their first chord.
    """
    if not isinstance(direction, DirVec):
        direction = DirVec.of(*direction)
    dyadic_slope_exponent(direction)
    if direction.q * direction.p < 0:
        # rays of negative slope do not close up within the crossing budget
        raise UnsupportedDirectionError("only directions of positive slope are supported")
    if depth < 1:
        raise DomainError("depth must be >= 1")
    surface = surface or SurfaceSpec(depth=depth)
    budget = trace_budget(depth) if max_crossings is None else max_crossings
    found: dict[tuple, SaddleConnection] = {}
    for label in surface.anchors(depth):
        pt = anchor_point(label)
        if not _launchable(pt, direction):
            continue
        res = trace_geodesic(label, direction, budget, surface)
        if not isinstance(res, SingularityHit):
            raise IncompleteTraceError(f"ray from {label} did not reach the singularity within {budget} crossings")
        sc = SaddleConnection(direction, label, res.end_anchor, res.pieces, res.crossings)
        found.setdefault((sc.pieces[0].start, sc.pieces[0].end), sc)
    return sorted(found.values(), key=lambda s: (s.intercept, s.start_anchor))


# --- collapsing the singular points ----------------------------------------


def _detour_eps(label: str) -> Fraction:
    return _pow2(anchor_generation(label) + 2)


def identified_neighbors(label: str, surface: Optional[SurfaceSpec] = None):
    """The two singular points that the gluing places next to ``label``.

    Points at distance ``eps`` on either side of ``label`` are carried by the
    gluing to points at distance ``eps`` from two other singular points; this
    returns those two labels (left neighbour first) together with the glued
    images used.
    """
    surface = surface or _DEFAULT
    pt = anchor_point(label)
    eps = _detour_eps(label)
    if label in ("C10", "C01"):
        raise DomainError(f"{label} is an accumulation point of cutting points")
    if label == "C00":
        near = [("bottom", SurfacePoint(eps, 0)), ("left", SurfacePoint(0, eps))]
    elif label == "C11":
        near = [("top", SurfacePoint(1 - eps, 1)), ("right", SurfacePoint(1, 1 - eps))]
    else:
        side = _LETTER_SIDE[label[0]]
        c = _edge_coordinate(side, pt)
        near = [(side, _edge_point(side, c - eps)), (side, _edge_point(side, c + eps))]
    out = []
    for side, q in near:
        img = surface.glue(q)
        # the limit of the gluing as q approaches the singular point
        lim = SurfacePoint(img.x + (pt.x - q.x), img.y + (pt.y - q.y))
        lab = anchor_label(lim)
        if lab is None:
            raise DomainError(f"gluing limit {lim} is not singular")
        out.append((lab, q, img, lim))
    return out


def _detour(label: str, surface: SurfaceSpec):
    """Polyline through the square around ``label`` joining its two neighbours."""
    (la, qa, ia, pa), (lb, qb, ib, pb) = identified_neighbors(label, surface)
    eps = _detour_eps(label)
    pivot = anchor_point(label)
    if label in _CORNERS:
        inner = [(qa, qb)]
        inner_len = QuadRat(0, eps, 2)
    else:
        side = _LETTER_SIDE[label[0]]
        nx, ny = {"bottom": (0, 1), "top": (0, -1), "left": (1, 0), "right": (-1, 0)}[side]
        apex = SurfacePoint(pivot.x + nx * eps, pivot.y + ny * eps)
        inner = [(qa, apex), (apex, qb)]
        inner_len = QuadRat(0, 2 * eps, 2)
    path = [(pa, ia)] + inner + [(ib, pb)]
    length = inner_len + 2 * eps
    return la, lb, path, length


def singularity_path(
    label_a: str,
    label_b: str,
    surface: Optional[SurfaceSpec] = None,
):
    """A polyline in the surface joining two singular points, with its length.

    The path is a list of chart segments ``(start, end)``; consecutive
    segments in different charts meet across a gluing.  The length is exact
    and bounds the distance between the two points in the metric completion.
    """
    surface = surface or _DEFAULT
    depth = max(surface.depth, anchor_generation(label_a) if label_a not in _CORNERS else 0,
                anchor_generation(label_b) if label_b not in _CORNERS else 0)
    for lab in (label_a, label_b):
        anchor_point(lab)
        if lab in ("C10", "C01"):
            raise DomainError(f"{lab} is an accumulation point, not a materialised cutting point")
    if label_a == label_b:
        return [], QuadRat(0)

    edges: dict[str, list] = {}
    for pivot in surface.anchors(depth + 1):
        if pivot in ("C10", "C01"):
            continue
        la, lb, path, length = _detour(pivot, surface)
        edges.setdefault(la, []).append((lb, path, length))
        rev = [(e, s) for s, e in reversed(path)]
        edges.setdefault(lb, []).append((la, rev, length))
        # along the edge to a nearby glued point, then along the partner edge
        eps = _detour_eps(pivot)
        here = anchor_point(pivot)
        for lab, q, img, lim in identified_neighbors(pivot, surface):
            hop = [(here, q), (img, lim)]
            edges.setdefault(pivot, []).append((lab, hop, QuadRat(2 * eps)))
            edges.setdefault(lab, []).append((pivot, [(lim, img), (q, here)], QuadRat(2 * eps)))
    # an open edge segment joins the two cutting points at its ends
    for side in SIDES:
        if surface._straight(side):
            continue
        for k in range(1, depth + 2):
            lo, hi = segment_interval(side, k)
            pa, pb = _edge_point(side, lo), _edge_point(side, hi)
            la, lb = anchor_label(pa), anchor_label(pb)
            seg_len = QuadRat(hi - lo)
            edges.setdefault(la, []).append((lb, [(pa, pb)], seg_len))
            edges.setdefault(lb, []).append((la, [(pb, pa)], seg_len))

    best = {label_a: QuadRat(0)}
    prev: dict[str, tuple] = {}
    heap = [(QuadRat(0), 0, label_a)]
    counter = 1
    while heap:
        dist, _, node = heapq.heappop(heap)
        if node == label_b:
            break
        if dist > best[node]:
            continue
        for nxt, path, length in edges.get(node, ()):
            nd = dist + length
            if nxt not in best or nd < best[nxt]:
                best[nxt] = nd
                prev[nxt] = (node, path)
                heapq.heappush(heap, (nd, counter, nxt))
                counter += 1
    if label_b not in best:
        raise DomainError(f"no path between {label_a} and {label_b} at depth {depth}")
    chain = []
    node = label_b
    while node != label_a:
        node, path = prev[node]
        chain[:0] = path
    return chain, best[label_b]
