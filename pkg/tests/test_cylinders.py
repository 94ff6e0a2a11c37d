from __future__ import annotations

import csv
import io
import json
from fractions import Fraction
from math import gcd

import pytest

from chamanara.cylinders import (
    Cylinder,
    CylinderDecomposition,
    boundary_count,
    commensurate,
    cylinder_table_csv,
    decompose,
    decompose_direction,
    inverse_modulus,
    modulus,
    renormalization_check,
    synthesize_parabolic,
)
from chamanara.exactnum import DomainError
from chamanara.fuchsian import P1, P2, Mat2, classify, frame_rotate, shear_matrix
from chamanara.surface import DirVec, UnsupportedDirectionError, trace_geodesic, SurfacePoint, build_surface

F_ = Fraction


@pytest.fixture(scope="module")
def decs():
    return {n: decompose(n, 8) for n in range(-4, 5)}


def kinds(dec, kind):
    return [c for c in dec.cylinders if c.kind == kind]


class TestDecompose:
    def test_slope_one(self):
        dec = decompose(0, 6)
        assert {c.modulus for c in dec.cylinders} == {6}
        big = dec.cylinders[0]
        assert (big.wc, big.hc) == (F_(3, 2), F_(1, 2))

    def test_slope_two(self):
        dec = decompose(1, 6)
        assert {c.modulus for c in kinds(dec, "trapezoid")} == {F_(15, 2)}
        (mid,) = kinds(dec, "parallelogram")
        assert (mid.wc, mid.hc, mid.modulus) == (F_(1, 2), 1, F_(5, 2))
        big = kinds(dec, "trapezoid")[0]
        assert (big.wc, big.hc) == (F_(3, 4), F_(1, 2))

    def test_slope_four(self):
        dec = decompose(2, 6)
        assert {c.inverse_modulus for c in kinds(dec, "trapezoid")} == {F_(4, 51)}
        # the middle cylinder has the same inverse modulus
        (mid,) = kinds(dec, "parallelogram")
        assert mid.inverse_modulus == F_(4, 51)

    def test_modulus_functions(self):
        c = Cylinder(DirVec(1, 0), F_(1, 3), F_(1, 3), (), (), (), "parallelogram")
        assert modulus(c) == 1 and inverse_modulus(c) == 1
        dec = decompose(1, 6)
        big = kinds(dec, "trapezoid")[0]
        assert modulus(big) == big.wc * 5 / big.hc == F_(15, 2)

    @pytest.mark.parametrize("n", range(-4, 5))
    def test_cylinders_are_flat_and_disjoint(self, decs, n):
        dec = decs[n]
        seen = set()
        for c in dec.cylinders:
            assert c.modulus > 0 and c.area == c.wc * c.hc
            for s in c.strips:
                assert s.lo < s.hi and (s.lo, s.hi) not in seen
                seen.add((s.lo, s.hi))
        assert dec.covered_area == sum(c.area for c in dec.cylinders) <= 1

    @pytest.mark.parametrize("n", range(-4, 5))
    def test_trapezoid_moduli_agree(self, decs, n):
        mods = {c.modulus for c in kinds(decs[n], "trapezoid")}
        assert len(mods) == 1

    def test_covered_area_law(self):
        for n in (0, 1, 2):
            for depth in range(max(2, n), 11):
                dec = decompose(n, depth)
                c = (1 - dec.covered_area) * 4**depth
                assert c > 0 and dec.covered_area <= 1

    def test_core_curve_matches_circumference(self):
        # an orbit through the middle of a strip returns after time wc
        dec = decompose(0, 8)
        c = dec.cylinders[1]
        tau = (c.strips[0].lo + c.strips[0].hi) / 2
        start = SurfacePoint(0, tau) if tau >= 0 else SurfacePoint(-tau, 0)
        res = trace_geodesic(start, dec.direction, 50, build_surface(8))
        assert res.holonomy == (c.wc, c.wc)

    def test_guards(self):
        with pytest.raises(DomainError):
            decompose(3, 2)
        with pytest.raises(DomainError):
            decompose(0, 1)
        with pytest.raises(UnsupportedDirectionError):
            decompose_direction(DirVec(1, -1), 6)
        with pytest.raises(UnsupportedDirectionError):
            decompose_direction(DirVec(2, 3), 6)

    def test_opposite_orientation(self):
        a = decompose_direction(DirVec(-1, -2), 6)
        b = decompose(1, 6)
        assert [c.modulus for c in a.cylinders] == [c.modulus for c in b.cylinders]

    def test_json(self, decs):
        obj = json.loads(json.dumps(decs[0].to_json()))
        assert {c["modulus"] for c in obj["cylinders"]} == {"6"}
        assert obj["covered_area"] == str(decs[0].covered_area)


class TestCommensurability:
    def test_slope_one(self, decs):
        res = commensurate(decs[0])
        assert res.m == F_(1, 6) and set(res.multipliers) == {1}

    def test_slope_two(self, decs):
        dec = decs[1]
        res = commensurate(dec)
        assert res.m == F_(2, 15)
        for c, k in zip(dec.cylinders, res.multipliers):
            assert k == (3 if c.kind == "parallelogram" else 1)

    @pytest.mark.parametrize("n", range(-4, 5))
    def test_multipliers_exact(self, decs, n):
        dec = decs[n]
        res = commensurate(dec)
        for c, k in zip(dec.cylinders, res.multipliers):
            assert k * res.m * c.modulus == 1
        g = 0
        for k in res.multipliers:
            g = gcd(g, k)
        assert g == 1

    def test_single_cylinder(self):
        c = Cylinder(DirVec(1, 0), F_(5), F_(1), (), (), (), "parallelogram")
        dec = CylinderDecomposition(DirVec(1, 0), (c,), 2, F_(5))
        res = commensurate(dec)
        assert res.m == F_(1, 5) and res.multipliers == (1,)

    def test_empty(self):
        with pytest.raises(DomainError):
            commensurate(CylinderDecomposition(DirVec(1, 1), (), 2, F_(0)))


class TestParabolics:
    def test_shear_examples(self):
        assert shear_matrix(DirVec(1, 0), 6) == P1
        assert shear_matrix(DirVec(3, 1), F_(15, 2)) == Mat2(-5, 27, -3, 13, scale=F_(1, 4))
        m = shear_matrix(DirVec(5, 3), F_(51, 4))
        assert m == Mat2(-37, 75, -27, 53, scale=F_(1, 8))
        # independent checks: trace 2, det 1, eigenvector (5, 3)
        a, b, c, d = m.entries()
        assert a + d == 2 and a * d - b * c == 1
        assert (a * 5 + b * 3, c * 5 + d * 3) == (5, 3)

    def test_zero_twist(self):
        with pytest.raises(DomainError):
            shear_matrix(DirVec(1, 0), 0)

    def test_synthesized(self, decs):
        m0, k0 = synthesize_parabolic(decs[0])
        assert m0 == P1 and set(k0) == {1}
        m1, k1 = synthesize_parabolic(decs[1])
        assert m1 == P2 and sorted(set(k1)) == [1, 3]
        m2, _ = synthesize_parabolic(decs[2])
        assert m2 == Mat2(-37, 75, -27, 53, scale=F_(1, 8))

    @pytest.mark.parametrize("n", range(-4, 5))
    def test_parabolic_fixes_direction(self, decs, n):
        dec = decs[n]
        m, _ = synthesize_parabolic(dec)
        a, b, c, d = m.entries()
        assert a * d - b * c == 1 and (a + d) in (2, -2)
        assert classify(m) == "parabolic"
        r = frame_rotate(dec.direction)
        assert (a * r.q + b * r.p, c * r.q + d * r.p) == (r.q, r.p)


class TestBoundary:
    def test_slope_one(self, decs):
        dec = decs[0]
        assert all(boundary_count(c) == 4 for c in dec.cylinders)
        mult = dict(dec.cylinders[0].boundary)
        assert sorted(mult.values()) == [1, 1, 2]
        assert boundary_count(dec.cylinders[1]) == 4

    def test_slope_two_middle(self, decs):
        (mid,) = kinds(decs[1], "parallelogram")
        assert boundary_count(mid) == 2


class TestRenormalization:
    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_depth_eight(self, decs, n):
        rep = renormalization_check(decs[n])
        assert rep.ok and rep.pairs_checked >= 2

    def test_insufficient(self):
        rep = renormalization_check(decompose(0, 2))
        assert not rep.ok and "insufficient" in rep.message


class TestCsv:
    def test_table(self, decs):
        rows = list(csv.DictReader(io.StringIO(cylinder_table_csv(decs[2]))))
        assert rows and {r["inverse_modulus"] for r in rows if r["kind"] == "trapezoid"} == {"4/51"}
        assert set(rows[0]) >= {"direction", "kind", "wc", "hc", "modulus", "boundary_count"}
