"""The Mathieu-type series S(r) = sum_{m>=1} 2m/(m^2+r^2)^2 and its
continued-fraction representation.

The tail of the series starting at any real offset x > 1/2,

    T(r, x) = sum_{m>=0} 2(x+m) / ((x+m)^2 + r^2)^2,

equals a generalized continued fraction in the variable z = x^2 - x, given
here in three equivalent shapes (``ab_form``, ``cd_form``,
``kappa_lambda_form``).  Splitting S(r) at an integer k >= 1,

    S(r) = sum_{m=1}^{k-1} 2m/(m^2+r^2)^2 + T(r, k),

and approximating T by continued-fraction approximants yields certified
enclosures: for z >= 0 every partial coefficient is positive, so even-index
approximants increase to the value and odd-index approximants decrease to
it.  ``mathieu_theorem1`` packages that bracketing; ``mathieu_direct`` is
the independent partial-sum route with an integral-comparison tail bracket.

Only the bracketing is certified, and only for z >= 0 (x >= 1).  For
x in (1/2, 1) the odd-index partial denominators z + r^2/(2n+1) eventually
turn negative, the even/odd ordering breaks down, and approximants converge
slowly from one side; ``telescoping_residual`` documents how it degrades to
an uncertified evaluation there.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

from .cf import ContinuedFraction, evaluate, _recurrence, DEFAULT_RESCALE_AT

__all__ = [
    "MathieuCFParams",
    "Enclosure",
    "TailBracket",
    "AsymptoticResult",
    "kappa_lambda_form",
    "ab_form",
    "cd_form",
    "ab_to_cd_witness",
    "coefficients_positive",
    "mathieu_partial_sum",
    "mathieu_direct",
    "tail_enclosure",
    "mathieu_theorem1",
    "theorem1_to_width",
    "bernoulli_numbers",
    "asymptotic",
    "telescoping_residual",
]

Number = Union[float, Fraction]

# Direct summation refuses tolerances needing more terms than this.
_DIRECT_TERM_CAP = 20_000_000


@dataclass(frozen=True)
class MathieuCFParams:
    """Parameters of the continued-fraction tail T(r, x).

    ``r`` is the series parameter (r > 0 here: the r = 0 limit is served by
    ``mathieu_direct``, whose tail bracket needs no fraction), ``x`` the tail
    offset (x > 1/2, where the representation is valid), and ``z = x^2 - x``
    the variable the partial denominators live in.  Fields accept
    `fractions.Fraction` for exact-arithmetic runs.
    """

    r: float
    x: float

    def __post_init__(self):
        if not (self.r > 0):
            raise ValueError(f"r must be > 0; got {self.r!r}")
        if not (self.x > 0.5):
            raise ValueError(f"x must be > 1/2; got {self.x!r}")

    @property
    def z(self) -> float:
        return self.x * self.x - self.x


@dataclass(frozen=True)
class Enclosure:
    """A closed interval [lower, upper] certified to contain a value."""

    lower: float
    upper: float

    def __post_init__(self):
        if not (self.lower <= self.upper):
            raise ValueError(f"empty enclosure: lower={self.lower!r} > upper={self.upper!r}")

    @property
    def width(self) -> float:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return 0.5 * (self.lower + self.upper)

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


@dataclass(frozen=True)
class TailBracket:
    """Even/odd-approximant bracket of T(r, x), with its cost.

    ``achieved`` records whether the requested width was reached before the
    term cap; when False, ``enclosure`` is the best bracket at the cap.
    """

    enclosure: Enclosure
    terms_used: int
    achieved: bool


@dataclass(frozen=True)
class AsymptoticResult:
    """Truncated large-r expansion: value, terms kept, first omitted magnitude."""

    value: float
    terms_used: int
    first_omitted_term: float


def _one(params: MathieuCFParams):
    # Multiplicative unit in the parameter's arithmetic (1.0 or Fraction(1)),
    # so integer coefficient ratios stay exact on exact inputs.
    return (params.r - params.r) + 1


def ab_form(params: MathieuCFParams) -> ContinuedFraction:
    """T(r, x) as a continued fraction with unit leading numerator.

    With z = x^2 - x and rr = r^2:

        a_1 = 1,                        b_1      = z + rr
        a_{2n} = n^3 / (2(2n-1)),       b_{2n}   = 1
        a_{2n+1} = n(n^2+4rr)/(2(2n+1)), b_{2n+1} = z + rr/(2n+1)

    All coefficients are positive when z >= 0, which is what certified
    bracketing needs; for z < 0 the odd b's eventually go negative.
    """
    one = _one(params)
    rr = params.r * params.r
    z = params.z

    def terms(n: int):
        if n == 1:
            return one, z + rr
        m, odd = divmod(n, 2)
        if odd:
            return (m * (m * m + 4 * rr) * one) / (2 * (2 * m + 1)), z + rr / (2 * m + 1)
        return (m ** 3 * one) / (2 * (2 * m - 1)), one

    return ContinuedFraction(one - one, terms)


def cd_form(params: MathieuCFParams) -> ContinuedFraction:
    """The ``ab_form`` fraction with denominators cleared of /(2(2n+1)) factors.

        c_1 = 2,              d_1      = 2z + 2rr
        c_{2n} = n^3,         d_{2n}   = 1
        c_{2n+1} = n(n^2+4rr), d_{2n+1} = 2(2n+1)z + 2rr

    Same value, same approximant sequence (it is the equivalence transform of
    ``ab_form`` by ``ab_to_cd_witness``).
    """
    one = _one(params)
    rr = params.r * params.r
    z = params.z

    def terms(n: int):
        if n == 1:
            return 2 * one, 2 * z + 2 * rr
        m, odd = divmod(n, 2)
        if odd:
            return m * (m * m + 4 * rr) * one, 2 * (2 * m + 1) * z + 2 * rr
        return m ** 3 * one, one

    return ContinuedFraction(one - one, terms)


def ab_to_cd_witness(n: int) -> float:
    """Equivalence multipliers turning ``ab_form`` into ``cd_form``.

    r_0 = 1, r_{2n} = 1, r_{2n+1} = 2(2n+1); i.e. 2n at odd indices.
    """
    return 2.0 * n if n % 2 else 1.0


def kappa_lambda_form(params: MathieuCFParams) -> ContinuedFraction:
    """T(r, x) with partial denominators centered at (x - 1/2)^2.

    With w = (x - 1/2)^2 (note w + (1 + 4rr)/4 = z + rr + 1/2):

        a_1 = 1,  b_1 = w + (1 + 4rr)/4
        a_{n+1} = -n^4 (n^2 + 4rr) / (4 (2n-1)(2n+1))
        b_{n+1} = w + (2n^2 + 2n + 1 + 4rr)/4

    One term here advances as far as two ``ab_form`` terms: this fraction is
    termwise identical to the even contraction of ``ab_form``.  Its partial
    numerators are negative from a_2 on, so it supports plain evaluation but
    not even/odd bracketing.
    """
    one = _one(params)
    rr4 = 4 * params.r * params.r
    half = one / 2
    w = (params.x - half) * (params.x - half)

    def terms(n: int):
        if n == 1:
            return one, w + (1 + rr4) / (4 * one)
        m = n - 1
        kappa = -(m ** 4 * (m * m + rr4) * one) / (4 * (2 * m - 1) * (2 * m + 1))
        lam = (2 * m * m + 2 * m + 1 + rr4) / (4 * one)
        return kappa, w + lam

    return ContinuedFraction(one - one, terms)


def coefficients_positive(params: MathieuCFParams, n_max: int) -> Optional[int]:
    """First index n <= n_max where an ``ab_form`` coefficient is <= 0, else None.

    Positivity for all n is equivalent to z >= 0 (the even coefficients and
    partial numerators are positive outright for r > 0; the odd denominators
    z + r^2/(2n+1) decrease toward z).
    """
    form = ab_form(params)
    for n in range(1, n_max + 1):
        a, b = form.term(n)
        if not (a > 0 and b > 0):
            return n
    return None


def mathieu_partial_sum(r: float, k: int) -> float:
    """Head sum_{m=1}^{k-1} 2m/(m^2+r^2)^2 (0.0 for k = 1)."""
    rr = r * r
    return math.fsum(2 * m / (m * m + rr) ** 2 for m in range(1, k))


def mathieu_direct(
    r: float,
    tol: float = 1e-10,
    m_terms: Optional[int] = None,
) -> Enclosure:
    """Enclose S(r) by partial summation plus an integral tail bracket.

    The summand f(m) = 2m/(m^2+r^2)^2 decreases for m >= r/sqrt(3), and
    integrating f between consecutive integers gives

        1/((M+1)^2 + r^2)  <=  sum_{m>M} f(m)  <=  1/(M^2 + r^2),

    so the enclosure is [partial + left, partial + right].  The bracket
    width is below 2/M^3 for every r, which picks M directly from ``tol``.
    Accepts r = 0 (giving 2*zeta(3)).  ``m_terms`` forces M, bypassing both
    the width target and the monotonicity threshold: the bracket formula is
    returned as-is, certified only when m_terms >= r/sqrt(3).
    """
    if not (r >= 0):
        raise ValueError(f"r must be >= 0; got {r!r}")
    if m_terms is not None:
        if m_terms < 1:
            raise ValueError(f"m_terms must be >= 1; got {m_terms}")
        M = m_terms
    else:
        if not (tol > 0):
            raise ValueError(f"tol must be > 0; got {tol!r}")
        M = max(math.ceil((2 / tol) ** (1 / 3)), math.ceil(r / math.sqrt(3)), 1)
        if M > _DIRECT_TERM_CAP:
            raise ValueError(
                f"tolerance unachievable by direct summation: tol={tol!r} needs "
                f"M={M} > {_DIRECT_TERM_CAP} terms"
            )
    rr = r * r
    partial = math.fsum(2 * m / (m * m + rr) ** 2 for m in range(1, M + 1))
    return Enclosure(partial + 1 / ((M + 1) ** 2 + rr), partial + 1 / (M * M + rr))


def _bracket_walk(form: ContinuedFraction, width: float, max_terms: int) -> TailBracket:
    """Walk approximants of a positive-coefficient fraction, tracking the
    even/odd bracket [f_even, f_odd] of its value."""
    lo = hi = None
    n_stop = 0
    for n, A, B, _ in _recurrence(form, DEFAULT_RESCALE_AT):
        if n == 0:
            continue
        value = A / B
        if n % 2:
            hi = value
        else:
            lo = value
            if lo > hi:
                # Exact arithmetic guarantees even <= odd here; a crossing can
                # only be float rounding after the true gap shrank below ulp
                # scale.  The bracket is saturated: swap and stop.  A large
                # inversion would mean the positivity hypothesis was violated.
                drift = (16 + n) * math.ulp(max(abs(lo), abs(hi)))
                if lo - hi > drift:
                    raise ValueError(
                        f"approximants not bracketing at n={n}: even={lo!r} > "
                        f"odd={hi!r}; positive-coefficient hypothesis violated?"
                    )
                lo, hi = hi, lo
                n_stop = n
                break
            if 0 < width and hi - lo <= width:
                n_stop = n
                break
        if n >= max_terms:
            n_stop = n
            break
    if lo is None or hi is None:  # max_terms == 1 leaves the bracket open
        raise ValueError(f"max_terms={max_terms} too small to form a bracket")
    enclosure = Enclosure(lo, hi)
    return TailBracket(enclosure, n_stop, enclosure.width <= width)


def tail_enclosure(r: float, x: float, width: float, max_terms: int = 200_000) -> TailBracket:
    """Certified even/odd bracket of the tail T(r, x), for z = x^2 - x >= 0.

    Grows the approximant index until the bracket width drops to ``width``
    or ``max_terms`` is hit (``achieved`` tells which); width = 0 means
    "spend the whole budget".  Raises for z < 0, where positivity — and with
    it the bracketing guarantee — fails.
    """
    params = MathieuCFParams(r, x)
    if params.z < 0:
        raise ValueError(
            f"bracketing requires z = x^2 - x >= 0 (x >= 1); got x={x!r}, z={params.z!r}"
        )
    if not (width >= 0):
        raise ValueError(f"width must be >= 0; got {width!r}")
    return _bracket_walk(ab_form(params), width, max_terms)


def mathieu_theorem1(r: float, k: int = 1, n_terms: int = 80) -> Enclosure:
    """Certified enclosure of S(r) = head(k) + T(r, k) with a fixed term budget.

    Uses the even approximant at 2*(n_terms//2) as lower bound and the odd
    approximant just before it as upper bound, shifted by the exact head sum.
    The identity holds for every integer k >= 1; larger k means z = k^2 - k
    grows and the bracket tightens faster per term.
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer; got {k}")
    pairs = n_terms // 2
    if pairs < 1:
        raise ValueError(f"n_terms must be >= 2; got {n_terms}")
    bracket = tail_enclosure(r, float(k), 0.0, max_terms=2 * pairs)
    head = mathieu_partial_sum(r, k)
    return Enclosure(head + bracket.enclosure.lower, head + bracket.enclosure.upper)


def theorem1_to_width(
    r: float, k: int, width: float, max_terms: int = 200_000
) -> tuple[Enclosure, int, bool]:
    """Adaptive form of ``mathieu_theorem1``: grow terms until the S(r)
    enclosure is narrower than ``width`` (or the cap binds).

    Returns (enclosure, terms_used, achieved).
    """
    if k < 1:
        raise ValueError(f"k must be a positive integer; got {k}")
    bracket = tail_enclosure(r, float(k), width, max_terms=max_terms)
    head = mathieu_partial_sum(r, k)
    enclosure = Enclosure(head + bracket.enclosure.lower, head + bracket.enclosure.upper)
    return enclosure, bracket.terms_used, bracket.achieved


_BERNOULLI: list[Fraction] = [Fraction(1)]


def bernoulli_numbers(n_max: int) -> list[Fraction]:
    """Bernoulli numbers B_0 .. B_{n_max} as exact fractions (B_1 = -1/2).

    Computed by the defining recurrence sum_{j=0}^{n} C(n+1, j) B_j = 0 over
    arbitrary-precision rationals, so every index is exact; results are
    cached across calls.
    """
    if n_max < 0:
        raise ValueError(f"n_max must be >= 0; got {n_max}")
    while len(_BERNOULLI) <= n_max:
        n = len(_BERNOULLI)
        acc = sum(math.comb(n + 1, j) * _BERNOULLI[j] for j in range(n))
        _BERNOULLI.append(Fraction(-acc, n + 1))
    return _BERNOULLI[: n_max + 1]


_ASYMPTOTIC_TERM_CAP = 500


def asymptotic(r: float, n_terms: Union[int, str] = "auto") -> AsymptoticResult:
    """Large-r expansion S(r) ~ sum_{m>=0} (-1)^m B_{2m} / r^{2m+2}.

    The expansion is divergent; ``n_terms="auto"`` truncates at the smallest
    term (stop right before the first term whose magnitude fails to
    decrease), the standard optimal truncation.  Past the leading 1/r^2 every
    term is negative, and term magnitudes shrink roughly until 2m ~ 2*pi*r,
    so small r means ``auto`` keeps a single term and ``first_omitted_term``
    (the magnitude of the first term dropped) exceeds the term kept — the
    signal that the expansion has nothing to offer at that r.  Terms are
    formed by exact rational division before rounding, so huge Bernoulli
    numerators cannot overflow; auto truncation is capped at 500 terms.
    """
    if not (r > 0):
        raise ValueError(f"r must be > 0; got {r!r}")
    auto = n_terms == "auto"
    if not auto:
        if not isinstance(n_terms, int) or n_terms < 1:
            raise ValueError(f'n_terms must be a positive integer or "auto"; got {n_terms!r}')
    cap = _ASYMPTOTIC_TERM_CAP if auto else n_terms

    r_exact = Fraction(r)
    rr = r_exact * r_exact
    power = rr  # r^{2m+2} at m = 0 is r^2
    terms: list[float] = []
    first_omitted = None
    m = 0
    while True:
        b2m = bernoulli_numbers(2 * m)[2 * m]
        t = float((1 if m % 2 == 0 else -1) * b2m / power)
        if auto and terms and abs(t) >= abs(terms[-1]):
            first_omitted = abs(t)
            break
        if m == cap:
            first_omitted = abs(t)
            break
        terms.append(t)
        power *= rr
        m += 1
    return AsymptoticResult(math.fsum(terms), len(terms), first_omitted)


_TELESCOPE_TERM_CAP = 100_000


def telescoping_residual(r: float, x: float, tol: float = 1e-10) -> float:
    """Residual of the tail recursion T(r, x) - T(r, x+1) = 2x/(x^2+r^2)^2.

    Both tails are taken at the same r; exactness of the recursion is a
    sharp consistency check across two different points of the same
    fraction.  Each tail is evaluated to a certified bracket of width
    <= tol/4 when its z is >= 0; for z < 0 (x < 1, where bracketing is
    unavailable) and for brackets still wider than tol/4 at the 100k-term
    cap, the best available approximant is used and the residual is then
    only as good as that approximant — honest about slow convergence rather
    than silently certified.
    """
    if not (tol > 0):
        raise ValueError(f"tol must be > 0; got {tol!r}")

    def value_at(x0: float) -> float:
        params = MathieuCFParams(r, x0)
        if params.z >= 0:
            return _bracket_walk(ab_form(params), tol / 4, _TELESCOPE_TERM_CAP).enclosure.midpoint
        return evaluate(ab_form(params), tol / 8, _TELESCOPE_TERM_CAP).value

    derivative_term = 2 * x / (x * x + r * r) ** 2
    return value_at(x) - value_at(x + 1) - derivative_term
