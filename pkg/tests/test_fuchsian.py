from __future__ import annotations

import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from chamanara.exactnum import DomainError, FieldMismatchError, QuadRat
from chamanara.fuchsian import (
    F,
    H,
    I2,
    M,
    P1,
    P2,
    ROTATION,
    HPoint,
    Mat2,
    Word,
    classify,
    eigen_direction,
    enumerate_words,
    fixed_points,
    frame_rotate,
    frame_unrotate,
    in_fundamental_domain,
    is_member,
    mobius_apply,
    parabolic_direction_scan,
    random_words,
    reduce_to_domain,
    verify_side_pairing,
)
from chamanara.surface import DirVec

F_ = Fraction

rats = st.fractions(min_value=-10, max_value=10, max_denominator=12)
pos = st.fractions(min_value=F_(1, 12), max_value=10, max_denominator=12)
upper = st.builds(HPoint, rats, pos)


def safe_matrix(a, b, c, d):
    det = a * d - b * c
    if det == 0:
        return None
    return Mat2(a, b, c, d) if det > 0 else Mat2(-a, -b, c, d)


class TestMat2:
    def test_constants(self):
        assert P2 * P1 == H
        assert H == Mat2(-5, -3, -3, -5, scale=F_(-1, 4))
        assert M.inverse() * H * M == Mat2(2, 0, 0, F_(1, 2))
        assert P2 == H * P1.inverse()

    def test_projective_equality(self):
        assert Mat2(2, 0, 0, 2) == I2
        assert Mat2(1, 6, 0, 1) != Mat2(1, 3, 0, 1)
        assert hash(Mat2(3, 18, 0, 3)) == hash(P1)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5), st.integers(1, 7))
    def test_canonical_idempotent(self, a, b, c, d, lam):
        m = safe_matrix(a, b, c, d)
        if m is None:
            return
        can = m.canonical()
        assert can == m and can.canonical().entries() == can.entries()
        scaled = Mat2(*(lam * e for e in m.entries()))
        assert scaled.canonical().entries() == can.entries()

    def test_canonical_form(self):
        assert H.canonical().entries() == tuple(QuadRat(x) for x in (F_(5, 4), F_(3, 4), F_(3, 4), F_(5, 4)))
        assert M.canonical().entries()[0] == QuadRat(0, F_(1, 2), 2)

    def test_nonpositive_det(self):
        with pytest.raises(DomainError):
            Mat2(1, 0, 0, -1)

    def test_json_round_trip(self):
        for m in (P1, P2, H, M, ROTATION, Mat2(1, 1, 0, 1)):
            assert Mat2.from_json(json.loads(json.dumps(m.to_json()))) == m


class TestMobius:
    def test_examples(self):
        assert mobius_apply(M, HPoint.real(-2)) == HPoint.real(3)
        assert mobius_apply(M, HPoint.real(F_(1, 2))) == HPoint.real(F_(-1, 3))
        assert mobius_apply(P1, HPoint.infinity()) == HPoint.infinity()
        assert mobius_apply(M, HPoint(0, 1)) == HPoint(0, 1)

    @settings(max_examples=150, deadline=None)
    @given(st.integers(0, 10**6), upper)
    def test_group_action(self, seed, z):
        rng = random.Random(seed)
        A, B = (w.matrix() for w in random_words(2, 4, seed=rng.randint(0, 10**6)))
        assert mobius_apply(A * B, z) == mobius_apply(A, mobius_apply(B, z))

    @settings(max_examples=60, deadline=None)
    @given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4), rats)
    def test_action_on_reals_and_infinity(self, a, b, c, d, x):
        m = safe_matrix(a, b, c, d)
        if m is None:
            return
        for z in (HPoint.real(x), HPoint.infinity()):
            assert mobius_apply(m.inverse(), mobius_apply(m, z)) == z

    def test_field_mismatch(self):
        z = HPoint(QuadRat(0, 1, 3), 1)
        with pytest.raises(FieldMismatchError):
            mobius_apply(M, z)


class TestClassify:
    @pytest.mark.parametrize(
        "m,kind",
        [(P1, "parabolic"), (P2, "parabolic"), (H, "hyperbolic"), (M, "elliptic"), (I2, "identity")],
    )
    def test_examples(self, m, kind):
        assert classify(m) == kind

    def test_elliptic_order_four(self):
        assert (M**4).is_identity() and not (M**2).is_identity()

    def test_conjugation_invariant(self):
        gs = random_words(40, 6, seed=3)
        targets = [P1, P2, H, M, Mat2(2, 1, 1, 1), Mat2(0, -1, 1, 1)]
        for g in gs:
            gm = g.matrix()
            for A in targets:
                assert classify(gm * A * gm.inverse()) == classify(A)

    def test_fixed_points(self):
        assert fixed_points(P1) == [HPoint.infinity()]
        assert fixed_points(P2) == [HPoint.real(3)]
        assert fixed_points(H) == [HPoint.real(-1), HPoint.real(1)]
        assert fixed_points(M) == [HPoint(0, 1)]
        with pytest.raises(DomainError):
            fixed_points(I2)

    @settings(max_examples=60, deadline=None)
    @given(st.integers(0, 10**6))
    def test_fixed_points_are_fixed(self, seed):
        (w,) = random_words(1, 6, seed=seed)
        m = w.matrix()
        if m.is_identity():
            return
        for p in fixed_points(m):
            assert mobius_apply(m, p) == p

    def test_eigen_directions(self):
        e1 = eigen_direction(P1)
        assert e1.direction == DirVec(1, 0) and e1.fixed_point.infinite and e1.allowed
        e2 = eigen_direction(P2)
        assert e2.direction == DirVec(3, 1) and e2.fixed_point == HPoint.real(3) and e2.allowed
        assert e2.square_direction == DirVec(1, 2)
        e3 = eigen_direction(Mat2(1, -1, 1, 3, scale=F_(1, 2)))
        assert e3.fixed_point == HPoint.real(-1) and e3.boundary_case and e3.allowed
        assert e3.direction == DirVec(1, -1)
        with pytest.raises(DomainError):
            eigen_direction(H)

    def test_frame_rotation(self):
        assert frame_rotate(DirVec(1, 1)) == DirVec(1, 0)
        assert frame_rotate(DirVec(1, 2)) == DirVec(3, 1)
        for d in (DirVec(1, 4), DirVec(4, 1), DirVec(2, 1)):
            assert frame_unrotate(frame_rotate(d)) == d
        # consistent with the rotation matrix
        a, b, c, d = ROTATION.entries()
        v = (a + 2 * b, c + 2 * d)
        assert v[1] * 3 == v[0]


class TestWords:
    def test_parse_and_str(self):
        w = Word.parse("H P1^-2 P1^2 H")
        assert str(w) == "H^2"
        assert Word.parse("P1 H^-1").inverse() == Word.parse("H P1^-1")
        assert Word.parse("H P1^-1").matrix() == P2
        with pytest.raises(ValueError):
            Word.parse("P3")

    def test_json(self):
        w = Word.parse("P1^-1 H^3 P1")
        assert Word.from_json(json.loads(json.dumps(w.to_json()))) == w

    def test_enumeration(self):
        one = enumerate_words(1)
        assert {m for _, m in one} == {P1, P1.inverse(), H, H.inverse()}
        two = enumerate_words(2)
        assert P2 in {m for _, m in two}
        for L in range(1, 6):
            assert len(enumerate_words(L, dedup=False)) == sum(4 * 3 ** (k - 1) for k in range(1, L + 1))
        with pytest.raises(DomainError):
            enumerate_words(13)

    def test_scan_small(self):
        r1 = parabolic_direction_scan(1)
        assert {str(w) for w, _ in r1.parabolics} == {"P1", "P1^-1"}
        r2 = parabolic_direction_scan(2)
        fps = {str(fp) for _, fp in r2.parabolics}
        assert {"oo", "3"} <= fps and r2.ok
        assert parabolic_direction_scan(4).ok
        with pytest.raises(DomainError):
            parabolic_direction_scan(11)


class TestDomain:
    def test_domain_shape(self):
        assert F.wall_circles() == [(F_(-5, 3), F_(4, 3)), (F_(5, 3), F_(4, 3))]
        assert F.contains(HPoint(0, 1))
        assert not F.contains(HPoint(F_(7, 2), 1))
        assert not F.contains(HPoint(1, F_(1, 2)))
        assert in_fundamental_domain(HPoint(3, 5)).status == "boundary"

    def test_images_of_special_points(self):
        for x, y in ((-2, 3), (F_(-1, 2), -3), (F_(1, 2), F_(-1, 3)), (2, F_(1, 3))):
            assert mobius_apply(M, HPoint.real(x)) == HPoint.real(y)

    def test_annulus_pullback(self):
        # z in F2 iff M(z) lies in the annulus 1/2 < |w| < 2
        M_inv = M.inverse()
        for z in (HPoint(0, 1), HPoint(1, F_(1, 2)), HPoint(F_(5, 3), F_(4, 3)), HPoint(-1, 2)):
            w = mobius_apply(M_inv, z)
            r2 = w.re * w.re + w.im * w.im
            inside = F_(1, 4) < r2 < 4
            strict = in_fundamental_domain(z).status == "inside"
            if abs(z.re) < 3:
                assert inside == strict

    def test_side_pairing(self):
        checks = verify_side_pairing()
        assert checks and all(checks.values())
        cusp = P1.inverse() * P2 * P1
        assert classify(cusp) == "parabolic" and fixed_points(cusp) == [HPoint.real(-3)]

    def test_tiling_disjoint(self):
        # g F and h F overlap iff some h^-1 g of length <= 4 moves a point of F into F
        rng = random.Random(11)
        pts = []
        while len(pts) < 40:
            z = HPoint(F_(rng.randint(-290, 290), 100), F_(rng.randint(1, 400), 100))
            if F.contains(z):
                pts.append(z)
        words = enumerate_words(4)
        for z in pts:
            for w, m in words:
                assert not m.is_identity()
                assert not F.contains(mobius_apply(m, z)), (str(w), str(z))


class TestReduction:
    def test_example_point(self):
        red = reduce_to_domain(HPoint(10, 1))
        assert str(red.word) == "H P1^-2"
        assert red.point == HPoint(F_(11, 5), F_(8, 5))
        assert mobius_apply(red.word.matrix(), HPoint(10, 1)) == red.point

    def test_boundary_convention(self):
        # Re = -3 is carried to Re = 3; Re = 3 stays
        assert reduce_to_domain(HPoint(-3, 5)).point == HPoint(3, 5)
        assert reduce_to_domain(HPoint(3, 5)).word == Word()
        # left inner wall apex goes to the right inner wall
        red = reduce_to_domain(HPoint(F_(-5, 3), F_(4, 3)))
        assert in_fundamental_domain(red.point).status in ("inside", "boundary")
        assert red.point.re > 0

    @settings(max_examples=150, deadline=None)
    @given(upper)
    def test_reduced_point_in_closure(self, z):
        red = reduce_to_domain(z)
        assert in_fundamental_domain(red.point).status != "outside"
        assert mobius_apply(red.word.matrix(), z) == red.point
        assert -3 < red.point.re <= 3

    def test_boundary_input_rejected(self):
        with pytest.raises(DomainError):
            reduce_to_domain(HPoint.real(1))

    def test_transcript_json(self):
        red = reduce_to_domain(HPoint(10, 1))
        obj = json.loads(json.dumps(red.to_json()))
        assert [step["wall"] for step in obj["transcript"]][0] == "strip_right"


class TestMembership:
    def test_examples(self):
        res = is_member(P1.inverse() * P2 * P1)
        assert res.member and res.word.matrix() == P1.inverse() * P2 * P1
        assert is_member(P1).word == Word.parse("P1")
        no = is_member(Mat2(1, 1, 0, 1))
        # 1 + i lies under the right wall, so the residual is H^-1 A, not a power of P1
        assert not no.member and not no.residual.is_identity()
        assert no.residual == H.inverse() * Mat2(1, 1, 0, 1)
        assert mobius_apply(no.residual, HPoint(0, 1)) == no.reduced_point
        assert not is_member(Mat2(1, 3, 0, 1)).member
        assert not is_member(M).member

    def test_round_trip(self):
        for w in random_words(200, 8, seed=5):
            res = is_member(w.matrix())
            assert res.member and res.word == w

    def test_quadratic_entries(self):
        # a conjugate of P1 by a sqrt2 scaling is not in G
        D = Mat2(QuadRat(0, 1, 2), 0, 0, 1)
        res = is_member(D * P1 * D.inverse())
        assert not res.member

    def test_json(self):
        obj = json.loads(json.dumps(is_member(P2).to_json()))
        assert obj["member"] is True
        assert Word.from_json(obj["word"]) == Word.parse("H P1^-1")
