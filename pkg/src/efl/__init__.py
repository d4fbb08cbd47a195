"""efl: a numerical laboratory for the explicit formula of prime counting
and the Li/Weil positivity criteria.

The package computes both sides of the explicit formula -- the prime-power
side through a Mangoldt sieve and the zero side through validated tables of
nontrivial-zero ordinates -- and the Li coefficients lambda_n by three
independent routes (direct zero sums, the eta route at s = 1, the mu route
at s = 0), cross-verifying every route at desk scale.
"""

from .arith import (
    AtomicDensity,
    PrimeExpectation,
    VonMangoldtTable,
    eta_limit_partial,
    prime_expectation,
    psi_arith,
    sieve,
    stieltjes_partial,
)
from .engine import (
    ExplicitFormulaReport,
    general_rhs,
    involuted_s1_value,
    psi_analytic,
    s1_value,
)
from .liweil import (
    LaurentCoefficients,
    LiDirectValue,
    LiSequence,
    WeilFormReport,
    ZeroPowerSum,
    laurent_coefficients,
    li_direct,
    li_eta,
    li_mu,
    li_table,
    weil_form,
    zero_power_sum,
)
from .testfn import (
    TestFunction,
    assoc_laguerre_tf,
    convolve_transform,
    exp_tf,
    involution,
    laguerre_tf,
    poly_tf,
    sum_prod_check,
)
from .zeros import (
    ZeroSet,
    bundled_zero_table,
    count_estimate,
    fetch_zeros,
    find_zeros,
    hardy_z,
    load_zeros,
)
from .zetacore import (
    Constants,
    ZetaEvalConfig,
    constants,
    derivatives_at,
    neg_zeta_log_deriv,
    xi,
    zeta,
)

__version__ = "0.1.0"
