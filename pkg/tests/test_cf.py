"""Engine tests on fractions with closed-form values: the all-ones fraction
(value 1/phi), constant-denominator fractions (quadratic surds), and integer
fractions where the determinant identity can be checked exactly.
"""

import math
from fractions import Fraction

import pytest
from conftest import GOLDEN, backward_cf

from mathieucf import (
    ContinuedFraction,
    convergent,
    equivalence_transform,
    evaluate,
    even_contraction,
    iter_convergents,
)


def cf_const(a: float, b: float) -> ContinuedFraction:
    return ContinuedFraction(0.0, lambda n: (a, b))


class TestConvergents:
    def test_golden_low_order(self, golden_cf):
        # A_n/B_n are ratios of consecutive Fibonacci numbers.
        assert convergent(golden_cf, 1).value == 1.0
        assert convergent(golden_cf, 2).value == 0.5
        assert convergent(golden_cf, 8).value == pytest.approx(21 / 34, abs=0)

    def test_golden_limit(self, golden_cf):
        report = evaluate(golden_cf, 1e-14, 200)
        assert report.converged
        assert report.terms_used < 50
        assert report.value == pytest.approx(GOLDEN, abs=1e-13)

    def test_matches_backward_fold(self, golden_cf):
        # The bottom-up fold shares nothing with the forward recurrence.
        mixed = ContinuedFraction(0.25, lambda n: (float(n), 1.0 + 1.0 / n))
        for cf in (golden_cf, mixed):
            fwd = convergent(cf, 20).value
            bwd = backward_cf(cf.b0, cf.terms, 20)
            assert fwd == pytest.approx(bwd, rel=1e-14)

    def test_iter_yields_all_indices(self, golden_cf):
        cs = list(iter_convergents(golden_cf, 6))
        assert [c.n for c in cs] == list(range(7))
        assert cs[0].value == 0.0  # n = 0 is b0/1
        assert cs[-1].value == convergent(golden_cf, 6).value

    def test_iter_rejects_negative(self, golden_cf):
        with pytest.raises(ValueError, match="n_max"):
            list(iter_convergents(golden_cf, -1))

    def test_term_index_validation(self, golden_cf):
        with pytest.raises(ValueError, match="1-indexed"):
            golden_cf.term(0)

    def test_zero_partial_numerator_rejected(self):
        cf = ContinuedFraction(0.0, lambda n: (0.0, 1.0) if n == 3 else (1.0, 1.0))
        assert convergent(cf, 2).value == 0.5
        with pytest.raises(ValueError, match="a_3 = 0"):
            convergent(cf, 3)


class TestDeterminantIdentity:
    def test_exact_over_integers(self):
        # a_n = n, b_n = 1: A, B stay Python ints, so
        # A_n B_{n-1} - A_{n-1} B_n = (-1)^{n-1} n!  holds exactly.
        cf = ContinuedFraction(0, lambda n: (n, 1))
        prev = None
        prod = 1
        for c in iter_convergents(cf, 18):
            if prev is not None:
                prod *= c.n
                det = c.numerator * prev.denominator - prev.numerator * c.denominator
                assert det == (1 if c.n % 2 else -1) * prod
            prev = c
        assert isinstance(prev.numerator, int)

    def test_float_normalized(self):
        # In float64 the determinant is a difference of nearly equal
        # products, so compare on the products' rounding scale.
        cf = ContinuedFraction(0.0, lambda n: (1.0, 2.5))
        prev = None
        for c in iter_convergents(cf, 300, rescale_at=1e10):
            if prev is not None:
                scale = 2.0 ** -math.floor(math.log2(1e10))
                det = c.numerator * prev.denominator - prev.numerator * c.denominator
                expected = (1 if c.n % 2 else -1) * scale ** (c.rescales + prev.rescales)
                norm = abs(c.numerator * prev.denominator) + abs(
                    prev.numerator * c.denominator
                )
                assert abs(det - expected) <= 1e-12 * max(norm, 1e-300)
            prev = c


class TestRescaling:
    def test_value_bit_invariant(self):
        # x = 1/(3 + x)  =>  x = (sqrt(13) - 3)/2; state grows like 3^n.
        cf = cf_const(1.0, 3.0)
        deep = convergent(cf, 1000)
        tight = convergent(cf, 1000, rescale_at=1e20)
        assert deep.value == tight.value
        assert deep.value == pytest.approx((math.sqrt(13) - 3) / 2, abs=1e-15)
        assert tight.rescales > deep.rescales > 0

    def test_threshold_validation(self, golden_cf):
        for bad in (0.0, -1.0, math.inf):
            with pytest.raises(ValueError, match="rescale_at"):
                convergent(golden_cf, 3, rescale_at=bad)

    def test_overflow_reported(self):
        # One rescale divides by ~8e149 per step, so per-term growth beyond
        # that cannot be absorbed and the engine must say so...
        with pytest.raises(OverflowError, match="overflow despite rescaling"):
            convergent(cf_const(1.0, 1e200), 5)
        with pytest.raises(OverflowError, match="overflow despite rescaling"):
            convergent(cf_const(1.0, 1e200), 2, rescale_at=1e308)
        # ...while growth below the rescale factor is absorbed indefinitely.
        assert math.isfinite(convergent(cf_const(1.0, 1e100), 50).value)


class TestIndeterminateApproximants:
    def cf(self):
        # b_1 = 0 makes f_1 = 1/0; the recurrence continues past it and the
        # value is 1/(0 + 1/phi) = phi.
        return ContinuedFraction(0.0, lambda n: (1.0, 0.0) if n == 1 else (1.0, 1.0))

    def test_requested_index_raises(self):
        with pytest.raises(ZeroDivisionError, match="B_1 = 0"):
            convergent(self.cf(), 1)

    def test_recurrence_continues_past_zero(self):
        assert convergent(self.cf(), 2).value == 1.0
        assert math.isnan(list(iter_convergents(self.cf(), 1))[1].value)
        report = evaluate(self.cf(), 1e-12, 200)
        assert report.converged
        assert report.value == pytest.approx(GOLDEN + 1, abs=1e-11)


class TestEvaluate:
    def test_budget_exhaustion(self, golden_cf):
        report = evaluate(golden_cf, 0.0, 2)
        assert not report.converged
        assert report.terms_used == 2
        assert report.last_delta == 0.5  # |f_2 - f_1| = |0.5 - 1|

    def test_validation(self, golden_cf):
        with pytest.raises(ValueError, match="max_terms"):
            evaluate(golden_cf, 1e-6, 1)
        for bad in (-1.0, math.nan):
            with pytest.raises(ValueError, match="tol"):
                evaluate(golden_cf, bad, 10)


class TestEvenContraction:
    def test_golden_even_approximants(self, golden_cf):
        contracted = even_contraction(golden_cf)
        assert contracted.b0 == 0.0
        got = [convergent(contracted, k).value for k in (1, 2, 3)]
        assert got == pytest.approx([1 / 2, 3 / 5, 8 / 13], abs=1e-15)
        for k in range(1, 11):
            assert convergent(contracted, k).value == pytest.approx(
                convergent(golden_cf, 2 * k).value, abs=1e-15
            )

    def test_requires_nonzero_even_denominators(self):
        cf = ContinuedFraction(1.0, lambda n: (1.0, 0.0) if n == 2 else (1.0, 1.0))
        contracted = even_contraction(cf)
        with pytest.raises(ValueError, match="b_2 = 0"):
            convergent(contracted, 1)


class TestEquivalenceTransform:
    def test_power_of_two_multipliers_are_exact(self, golden_cf):
        transformed = equivalence_transform(golden_cf, lambda n: 1.0 if n == 0 else 2.0)
        for n in range(1, 16):
            assert convergent(transformed, n).value == convergent(golden_cf, n).value

    def test_r0_must_be_one(self, golden_cf):
        with pytest.raises(ValueError, match="r_0 must be 1"):
            equivalence_transform(golden_cf, lambda n: 2.0)

    def test_zero_multiplier_rejected_lazily(self, golden_cf):
        transformed = equivalence_transform(
            golden_cf, lambda n: 0.0 if n == 3 else 1.0
        )
        assert convergent(transformed, 2).value == 0.5
        with pytest.raises(ValueError, match="r_3 = 0"):
            convergent(transformed, 3)


class TestExactArithmetic:
    def test_fraction_terms_stay_exact(self):
        cf = ContinuedFraction(Fraction(0), lambda n: (Fraction(1), Fraction(1)))
        c = convergent(cf, 10)
        assert isinstance(c.value, Fraction)
        assert c.value == Fraction(55, 89)  # consecutive Fibonacci numbers
