from __future__ import annotations

import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cutseq.exact import (
    GAMMA_ODD_RESIDUES,
    GOLDEN,
    INF,
    ROTATE_EVEN,
    ROTATE_ODD,
    SHIFT,
    THETA_RESIDUES,
    CuspClass,
    Mat2,
    Surd,
    classify_subgroup,
    cusp_class_gamma,
    cusp_class_theta,
)

NONSQUARE = [2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23]


@st.composite
def surds(draw, max_p: int = 40, max_q: int = 9, max_r: int = 12):
    p = draw(st.integers(-max_p, max_p))
    q = draw(st.integers(-max_q, max_q).filter(lambda v: v != 0))
    d = draw(st.sampled_from(NONSQUARE))
    r = draw(st.integers(1, max_r))
    return Surd(p, q, d, r)


@st.composite
def unimodular(draw):
    word = draw(st.lists(st.sampled_from("strST"), min_size=0, max_size=12))
    m = Mat2.identity()
    gens = {
        "s": Mat2(0, -1, 1, 0),
        "t": Mat2(1, 1, 0, 1),
        "r": Mat2(1, 0, 1, 1),
        "S": Mat2(0, 1, -1, 0),
        "T": Mat2(1, -1, 0, 1),
    }
    for ch in word:
        m = m @ gens[ch]
    return m


class TestSurdNormalization:
    def test_square_free_fold(self):
        assert Surd(0, 1, 8, 1) == Surd(0, 2, 2, 1)
        assert Surd(0, 3, 12, 2) == Surd(0, 3, 3, 1)

    def test_perfect_square_collapses_to_rational(self):
        s = Surd(1, 2, 9, 4)
        assert s.is_rational
        assert s.to_fraction() == Fraction(7, 4)

    def test_negative_denominator_normalizes(self):
        assert Surd(1, 1, 5, -2) == Surd(-1, -1, 5, 2)

    def test_common_factor_removed(self):
        assert Surd(2, 2, 5, 4) == Surd(1, 1, 5, 2)

    def test_zero_denominator_rejected(self):
        with pytest.raises(ZeroDivisionError):
            Surd(1, 1, 5, 0)

    def test_nonpositive_radicand_rejected(self):
        with pytest.raises(ValueError):
            Surd(1, 1, -2, 1)
        with pytest.raises(ValueError):
            Surd(1, 1, 0, 1)

    @given(surds())
    def test_canonical_invariants(self, s):
        assert s.r > 0
        assert math.gcd(s.p, s.q, s.r) == 1
        assert (s.d == 1) == (s.q == 0)


class TestSurdArithmetic:
    def test_golden_identities(self):
        assert GOLDEN * GOLDEN == GOLDEN + 1
        assert 1 / GOLDEN == GOLDEN - 1
        assert GOLDEN + GOLDEN.conjugate() == 1
        assert GOLDEN * GOLDEN.conjugate() == -1

    def test_mixed_scalars(self):
        s = Surd.sqrt(2)
        assert s + Fraction(1, 2) == Surd(1, 2, 2, 2)
        assert 3 * s == Surd(0, 3, 2, 1)
        assert (s - 1) * (s + 1) == 1

    def test_field_mismatch_rejected(self):
        with pytest.raises(ValueError):
            Surd.sqrt(2) + Surd.sqrt(3)

    def test_power(self):
        assert Surd.sqrt(2) ** 4 == 4
        assert GOLDEN ** 0 == 1

    @given(surds())
    def test_inverse_is_reciprocal(self, s):
        if s != 0:
            assert s * (1 / s) == 1

    @given(surds(), surds())
    def test_ordering_matches_floats(self, a, b):
        fa, fb = float(a), float(b)
        if abs(fa - fb) > 1e-9:
            assert (a < b) == (fa < fb)

    @given(surds())
    def test_floor(self, s):
        m = s.floor()
        assert m <= s < m + 1

    def test_floor_negatives(self):
        assert (-GOLDEN).floor() == -2
        assert Surd.sqrt(2).floor() == 1
        assert Surd.from_fraction(Fraction(-7, 2)).floor() == -4

    def test_conjugate_flips_radical(self):
        s = Surd(3, -2, 7, 5)
        assert s.conjugate() == Surd(3, 2, 7, 5)
        assert s + s.conjugate() == Fraction(6, 5)

    def test_discriminant(self):
        assert GOLDEN.discriminant() == 5
        assert (1 + Surd.sqrt(2)).discriminant() == 8
        with pytest.raises(ValueError):
            Surd.from_fraction(Fraction(1, 2)).discriminant()

    def test_hash_agrees_with_fraction(self):
        assert hash(Surd.from_fraction(Fraction(3, 4))) == hash(Fraction(3, 4))


class TestSurdParsing:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("(1+1*sqrt(5))/2", GOLDEN),
            ("(2-1*sqrt(2))/1", 2 - Surd.sqrt(2)),
            ("sqrt(3)", Surd.sqrt(3)),
            ("2*sqrt(2)", 2 * Surd.sqrt(2)),
            ("sqrt(2)/2", Surd.sqrt(2) / 2),
            ("3/4", Surd.from_fraction(Fraction(3, 4))),
            ("-5", Surd.from_fraction(Fraction(-5))),
            ("(-1+sqrt(2))/3", (Surd.sqrt(2) - 1) / 3),
        ],
    )
    def test_parse(self, text, value):
        assert Surd.parse(text) == value

    def test_parse_rejects_garbage(self):
        with pytest.raises(ValueError):
            Surd.parse("sqrt(-2)")
        with pytest.raises(ValueError):
            Surd.parse("one plus phi")

    @given(surds())
    def test_literal_round_trip(self, s):
        assert Surd.parse(s.literal()) == s


class TestMat2:
    def test_rotation_orders(self):
        s3 = ROTATE_ODD @ ROTATE_ODD @ ROTATE_ODD
        assert s3 == Mat2(-1, 0, 0, -1)
        assert s3.psl() == Mat2.identity()
        s2 = ROTATE_EVEN @ ROTATE_EVEN
        assert s2.psl() == Mat2.identity()

    def test_inverse(self):
        m = Mat2(2, 1, 1, 1)
        assert m @ m.inverse() == Mat2.identity()
        with pytest.raises(ValueError):
            Mat2(2, 0, 0, 2).inverse()

    def test_pow(self):
        assert SHIFT ** 3 == Mat2(1, 6, 0, 1)
        assert SHIFT ** -2 == Mat2(1, -4, 0, 1)
        assert SHIFT ** 0 == Mat2.identity()

    @given(unimodular())
    def test_psl_canonical(self, m):
        c = m.psl()
        assert c in (m, -m)
        assert c.c > 0 or (c.c == 0 and c.d > 0)

    def test_apply(self):
        m = Mat2(1, 1, 1, 2)
        assert m.apply(Fraction(1, 2)) == Fraction(3, 5)
        assert m.apply(INF) == Fraction(1)
        assert Mat2(0, -1, 1, 0).apply(GOLDEN) == 1 - GOLDEN
        assert Mat2(1, 0, 0, 1).apply(INF) is INF
        assert Mat2(0, 1, 1, -1).apply(Fraction(1)) is INF

    @given(unimodular(), surds())
    def test_apply_is_action(self, m, s):
        lhs = (m @ m).apply(s)
        rhs = m.apply(m.apply(s))
        if not isinstance(rhs, Surd) or not isinstance(lhs, Surd):
            return
        assert lhs == rhs


class TestSubgroups:
    def test_generators_belong(self):
        assert classify_subgroup(ROTATE_ODD).gamma_odd
        assert classify_subgroup(SHIFT).gamma_odd
        assert classify_subgroup(ROTATE_EVEN).theta
        assert classify_subgroup(SHIFT).theta
        assert not classify_subgroup(Mat2(1, 1, 0, 1)).gamma_odd
        assert not classify_subgroup(Mat2(1, 1, 0, 1)).theta

    def test_full_modular_always(self):
        assert classify_subgroup(Mat2(1, 1, 0, 1)).full_modular

    def test_determinant_guard(self):
        with pytest.raises(ValueError):
            classify_subgroup(Mat2(1, 0, 0, -1))

    def test_residue_sets(self):
        assert Mat2.identity().residue() in GAMMA_ODD_RESIDUES
        assert Mat2.identity().residue() in THETA_RESIDUES
        assert len(GAMMA_ODD_RESIDUES) == 3
        assert len(THETA_RESIDUES) == 2

    @given(unimodular(), unimodular())
    def test_gamma_odd_index_two(self, a, b):
        # the non-member coset is closed under inversion and squares into the group
        ca = classify_subgroup(a).gamma_odd
        cb = classify_subgroup(b).gamma_odd
        prod = classify_subgroup(a @ b).gamma_odd
        assert prod == (ca == cb)


class TestCusps:
    @pytest.mark.parametrize("x", [INF, Fraction(0), Fraction(1), Fraction(3, 5), Fraction(-7, 11)])
    def test_gamma_witness_sends_infinity(self, x):
        cls, g = cusp_class_gamma(x)
        assert cls is CuspClass.INFINITY
        assert classify_subgroup(g).gamma_odd
        if x is INF:
            assert g.apply(INF) is INF
        else:
            assert g.apply(INF) == x

    def test_gamma_witness_random_rationals(self):
        rng = random.Random(7)
        for _ in range(100):
            x = Fraction(rng.randint(-60, 60), rng.randint(1, 60))
            cls, g = cusp_class_gamma(x)
            assert cls is CuspClass.INFINITY
            assert g.apply(INF) == x
            assert classify_subgroup(g).gamma_odd

    @pytest.mark.parametrize(
        "x,cls",
        [
            (INF, CuspClass.INFINITY),
            (Fraction(0), CuspClass.INFINITY),
            (Fraction(2, 3), CuspClass.INFINITY),
            (Fraction(1), CuspClass.ONE),
            (Fraction(3, 5), CuspClass.ONE),
            (Fraction(-7, 9), CuspClass.ONE),
        ],
    )
    def test_theta_classes_by_parity(self, x, cls):
        assert cusp_class_theta(x) is cls

    def test_irrational_rejected(self):
        with pytest.raises(ValueError):
            cusp_class_gamma(GOLDEN)
        with pytest.raises(ValueError):
            cusp_class_theta(Surd.sqrt(2))
