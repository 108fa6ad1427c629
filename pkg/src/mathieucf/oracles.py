"""Independent numerical routes to S(r), used to cross-check the
continued-fraction machinery (and each other).

Three routes, sharing no code with the fraction engine:

* ``mathieu_trigamma``/``tail_via_trigamma`` — the series tail is the
  imaginary part of the trigamma function at a complex argument,
  T(r, x) = Im(psi1(x - i r)) / r, evaluated by upward recurrence plus the
  Bernoulli asymptotic expansion.
* ``mathieu_integral`` — the oscillatory integral
  S(r) = (1/r) * Integral_0^inf u sin(ru) / (e^u - 1) du, truncated with an
  explicit exponential tail bound and integrated by an oscillatory-weight
  quadrature rule.
* ``apery_cf`` — a classical continued fraction for zeta(3), pinning the
  r -> 0 limit S(0) = 2 zeta(3) and exercising the fraction engine against
  a value known independently (``zeta3_reference``, direct summation).
"""

from __future__ import annotations

import math
from typing import Tuple, Union

from scipy.integrate import quad

from .cf import ContinuedFraction, convergent
from .series import bernoulli_numbers

__all__ = [
    "trigamma",
    "tail_via_trigamma",
    "mathieu_trigamma",
    "mathieu_integral",
    "apery_continued_fraction",
    "apery_cf",
    "zeta3_reference",
]

# Push the argument to Re >= 10 before using the asymptotic series; with
# Bernoulli terms through B_20 the truncation error is ~|B_22|/|s|^23,
# below 1e-19 there.
_TRIGAMMA_SHIFT = 10.0
_TRIGAMMA_BERNOULLI_TERMS = 10


def trigamma(s: Union[float, complex]) -> complex:
    """psi1(s) = sum_{n>=0} 1/(s+n)^2 for Re(s) > 0 (complex allowed).

    Evaluated by the recurrence psi1(s) = psi1(s+1) + 1/s^2 until
    Re(s) >= 10, then the asymptotic expansion

        psi1(s) ~ 1/s + 1/(2 s^2) + sum_{k>=1} B_{2k} / s^{2k+1}.

    Non-positive integer arguments on the real axis are poles.
    """
    s = complex(s)
    if s.imag == 0 and s.real <= 0 and s.real == int(s.real):
        raise ValueError(f"trigamma pole at non-positive integer {s.real}")
    shifted = []
    while s.real < _TRIGAMMA_SHIFT:
        shifted.append(1 / (s * s))
        s += 1
    inv = 1 / s
    inv2 = inv * inv
    total = inv + 0.5 * inv2
    power = inv2 * inv
    bern = bernoulli_numbers(2 * _TRIGAMMA_BERNOULLI_TERMS)
    for k in range(1, _TRIGAMMA_BERNOULLI_TERMS + 1):
        total += float(bern[2 * k]) * power
        power *= inv2
    # Sum the recurrence corrections smallest-last for accuracy.
    for term in reversed(shifted):
        total += term
    return total


def tail_via_trigamma(r: float, x: float) -> float:
    """T(r, x) = sum_{m>=0} 2(x+m)/((x+m)^2+r^2)^2 via Im psi1(x - i r)/r.

    Termwise, 1/((u - ir)^2) has imaginary part 2ur/((u^2+r^2)^2), so the
    trigamma sum at x - ir carries exactly r times the tail.
    """
    if not (r > 0):
        raise ValueError(f"r must be > 0; got {r!r}")
    if not (x > 0):
        raise ValueError(f"x must be > 0; got {x!r}")
    return trigamma(complex(x, -r)).imag / r


def mathieu_trigamma(r: float) -> float:
    """S(r) as the full tail from x = 1: Im psi1(1 - i r)/r."""
    return tail_via_trigamma(r, 1.0)


def _truncation_point(r: float, tol: float) -> float:
    # Tail of the integrand past X: 1/(e^u - 1) <= e^-u/(1 - e^-X), and
    # int_X^inf u e^-u du = (X+1) e^-X, so the tail of S(r) is below
    # (X+1) e^-X / ((1 - e^-X) r).  Find X putting that under tol/2.
    X = 30.0
    while (X + 1) * math.exp(-X) / (1 - math.exp(-X)) > 0.5 * tol * r:
        X += 5.0
        if X > 750:  # e^-X underflows long before this
            raise ValueError(f"no finite truncation point for tol={tol!r}, r={r!r}")
    return X


def mathieu_integral(r: float, tol: float = 1e-10) -> float:
    """S(r) = (1/r) Integral_0^inf u sin(ru)/(e^u - 1) du.

    The integral is truncated at X chosen so the dropped tail is below
    tol/2, then evaluated with an oscillatory (sin-weight) quadrature rule
    with an error budget of tol/2; if the rule cannot certify that budget,
    the tolerance is refused rather than silently degraded.  Requires
    tol >= 1e-10: below that the budget is not honest for float64
    quadrature.
    """
    if not (r > 0):
        raise ValueError(f"r must be > 0; got {r!r}")
    if not (tol >= 1e-10):
        raise ValueError(f"tol must be >= 1e-10; got {tol!r}")

    def integrand(u: float) -> float:
        if u == 0.0:
            return 1.0  # limit of u/(e^u - 1)
        return u / math.expm1(u)

    X = _truncation_point(r, tol)
    budget = 0.5 * tol * r  # error allowance before the 1/r factor
    value, abserr, *rest = quad(
        integrand,
        0.0,
        X,
        weight="sin",
        wvar=r,
        limit=400,
        epsabs=0.25 * budget,
        epsrel=1e-13,
        full_output=1,
    )
    if len(rest) > 1 or abserr > budget:
        raise ValueError(
            f"requested tolerance below quadrature capability: tol={tol!r}, "
            f"r={r!r}, estimated error {abserr / r!r}"
        )
    return value / r


def apery_continued_fraction() -> ContinuedFraction:
    """A classical fraction converging to zeta(3):

        b0 = 1;  a_1 = 1, b_1 = 4;
        a_{2n} = a_{2n+1} = n^3;  b_{2n} = 1,  b_{2n+1} = 4(2n+1).

    First approximants 5/4 and 6/5; successive approximants alternate
    around zeta(3) and the error at 60 terms is below 1e-10.
    """

    def terms(n: int) -> Tuple[float, float]:
        if n == 1:
            return 1.0, 4.0
        m, odd = divmod(n, 2)
        return float(m ** 3), 4.0 * (2 * m + 1) if odd else 1.0

    return ContinuedFraction(1.0, terms)


def apery_cf(n_terms: int) -> float:
    """The n_terms-th approximant of ``apery_continued_fraction``."""
    if n_terms < 0:
        raise ValueError(f"n_terms must be >= 0; got {n_terms}")
    return convergent(apery_continued_fraction(), n_terms).value


def zeta3_reference(m_terms: int = 50_000) -> float:
    """zeta(3) by direct summation plus an integral-tail midpoint.

    The tail past M lies between 1/(2(M+1)^2) and 1/(2M^2); taking the
    midpoint leaves an error under 1/(2M^3).
    """
    if m_terms < 1:
        raise ValueError(f"m_terms must be >= 1; got {m_terms}")
    M = m_terms
    partial = math.fsum(1 / (m * m * m) for m in range(1, M + 1))
    return partial + 0.5 * (0.5 / (M * M) + 0.5 / ((M + 1) * (M + 1)))
