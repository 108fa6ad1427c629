"""Certified enclosures for the Mathieu-type series S(r) = sum 2m/(m^2+r^2)^2.

The series tail from any offset x > 1/2 equals a generalized continued
fraction whose even/odd approximants bracket the value whenever the partial
coefficients are positive; splitting the series and bracketing the tail
turns a slowly decaying sum into certified enclosures at a tiny term count.
The package bundles the fraction engine, the series representations,
classical bounds with their crossover analysis, independent numerical
oracles (trigamma, oscillatory integral, a zeta(3) fraction), a built-in
invariant suite, and a CLI.
"""

__version__ = "0.1.0"

from .cf import (
    ContinuedFraction,
    Convergent,
    EvalReport,
    convergent,
    iter_convergents,
    evaluate,
    even_contraction,
    equivalence_transform,
)
from .series import (
    MathieuCFParams,
    Enclosure,
    TailBracket,
    AsymptoticResult,
    kappa_lambda_form,
    ab_form,
    cd_form,
    ab_to_cd_witness,
    coefficients_positive,
    mathieu_partial_sum,
    mathieu_direct,
    tail_enclosure,
    mathieu_theorem1,
    theorem1_to_width,
    bernoulli_numbers,
    asymptotic,
    telescoping_residual,
)
from .bounds import (
    BoundResult,
    CrossoverReport,
    makai_bounds,
    alzer_bounds,
    mp_upper,
    cf_bounds,
    closed_form_bounds,
    crossover_analysis,
)
from .oracles import (
    trigamma,
    tail_via_trigamma,
    mathieu_trigamma,
    mathieu_integral,
    apery_continued_fraction,
    apery_cf,
    zeta3_reference,
)
from .selftest import run_selftest

__all__ = [
    "__version__",
    # cf engine
    "ContinuedFraction",
    "Convergent",
    "EvalReport",
    "convergent",
    "iter_convergents",
    "evaluate",
    "even_contraction",
    "equivalence_transform",
    # series
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
    # bounds
    "BoundResult",
    "CrossoverReport",
    "makai_bounds",
    "alzer_bounds",
    "mp_upper",
    "cf_bounds",
    "closed_form_bounds",
    "crossover_analysis",
    # oracles
    "trigamma",
    "tail_via_trigamma",
    "mathieu_trigamma",
    "mathieu_integral",
    "apery_continued_fraction",
    "apery_cf",
    "zeta3_reference",
    # selftest
    "run_selftest",
]
