"""Li coefficients by three routes, the Laurent-coefficient machinery
(eta at s = 1, mu at s = 0, Stieltjes), zero power sums, and the Weil
quadratic form.

Routes
------
direct:  lambda_n = sum over paired zeros of 2 - 2 Re((1 - 1/rho)^n), plus a
         density-heuristic tail (the paired term is 2 - 2 cos(n phi) with
         phi = arg(1 - 1/rho) ~ 1/gamma on the line, so the tail integrand is
         n^2/gamma^2 to first order).
eta:     lambda_n = 1 + (n/2)(gamma - log 4pi)
         + sum_{k=2}^n C(n,k) [(-1)^k (1 - 2^-k) zeta(k) - eta_(k-1)].
mu:      lambda_n = 1 + (n/2)(gamma - log 4pi)
         + sum_{k=2}^n C(n,k) [2^-k zeta(k) + mu_(k-1)].

The eta and mu coefficient sequences come from contour Taylor expansions
(never the slowly convergent arithmetic limits, which remain consistency
witnesses in :mod:`efl.arith`).  The binomial alternation amplifies
coefficient errors by up to C(n, n/2) ~ 1e14 at n = 50, so the default
working precision scales with the requested order; all route sums run in
mpmath and are rounded to float once at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp

from . import engine, zetacore
from .errors import (
    CoefficientsTooShort,
    EmptyZeroSet,
    OrderTooLarge,
    UnsupportedFamily,
)
from .summation import pairwise_sum_blocked
from .testfn import TestFunction
from .zeros import ZeroSet
from .zetacore import ZetaEvalConfig

__all__ = [
    "LaurentCoefficients",
    "LiDirectValue",
    "LiSequence",
    "ZeroPowerSum",
    "WeilFormReport",
    "laurent_coefficients",
    "zero_power_sum",
    "li_direct",
    "li_eta",
    "li_mu",
    "li_table",
    "weil_form",
    "MAX_COEFF_ORDER",
    "MAX_LI_ORDER",
]

#: Hard cap on the Laurent expansion order (covers li_eta/li_mu to n = 65).
MAX_COEFF_ORDER = 64
#: li_direct supports n up to this order.
MAX_LI_ORDER = 50


@dataclass(frozen=True)
class LaurentCoefficients:
    """eta_k (pole-subtracted -zeta'/zeta at 1), mu_k (scaled derivatives of
    -zeta'/zeta at 0) and Stieltjes gamma_k (zeta at 1), with per-entry error
    estimates from the contour quadrature.

    ``mu_text_convention_mu0`` carries the alternative -log pi value for
    mu_0 that appears in prose alongside the defining formula; the defining
    formula itself gives mu_0 = -log 2pi and that is what ``mu[0]`` holds.
    Both are reported, neither silently chosen.
    """

    K: int
    eta: list
    mu: list
    stieltjes: list
    eta_errors: list
    mu_errors: list
    stieltjes_errors: list
    working_digits: int
    mu_text_convention_mu0: float = field(default=0.0)

    def __post_init__(self):
        with mp.workdps(self.working_digits):
            if abs(self.eta[0] + mp.euler) > mp.mpf("1e-9"):
                raise ValueError("eta_0 must equal -euler_gamma to 1e-9")
            if abs(self.stieltjes[0] - mp.euler) > mp.mpf("1e-9"):
                raise ValueError("gamma_0 must equal euler_gamma to 1e-9")


_LAURENT_CACHE: dict = {}


def default_coeff_config(K: int) -> ZetaEvalConfig:
    """Working precision grows with K: contour roundoff amplifies like
    (1/radius)^k = 2^k, and the Li binomials add another ~n log10(2) digits."""
    digits = max(40, 30 + int(0.35 * K) + 10)
    points = max(256, 1 << (4 * (K + 1) - 1).bit_length())
    return ZetaEvalConfig(contour_points=points, working_digits=digits)


def laurent_coefficients(
    K: int, cfg: ZetaEvalConfig | None = None
) -> LaurentCoefficients:
    """Compute eta_k, mu_k, gamma_k for k = 0..K by contour expansion.

    eta_k is the k-th Taylor coefficient at s = 1 of -zeta'/zeta - 1/(s-1);
    mu_k = (-1)^k times the k-th Taylor coefficient at s = 0 of -zeta'/zeta;
    gamma_k = (-1)^k k! times the k-th Taylor coefficient at s = 1 of
    zeta - 1/(s-1).
    """
    if not 1 <= K <= MAX_COEFF_ORDER:
        raise OrderTooLarge(f"K must be in 1..{MAX_COEFF_ORDER}")
    if cfg is None:
        cfg = default_coeff_config(K)
    key = (K, cfg.working_digits, cfg.contour_points, cfg.contour_radius,
           cfg.correction_order, cfg.cutoff_terms)
    cached = _LAURENT_CACHE.get(key)
    if cached is not None:
        return cached

    at1 = zetacore.derivatives_at(1, K, cfg)
    at0 = zetacore.derivatives_at(0, K, cfg)
    z1 = zetacore.zeta_taylor_at_one(K, cfg)
    with mp.workdps(cfg.working_digits + 10):
        eta = [mp.re(c) for c, _ in at1]
        mu = [(-1) ** k * mp.re(c) for k, (c, _) in enumerate(at0)]
        for k, (c, _) in enumerate(at0):
            if abs(mp.im(c)) > mp.mpf("1e-12"):
                raise ValueError(f"mu_{k} contour output has imaginary part")
        stj = [(-1) ** k * mp.factorial(k) * mp.re(c)
               for k, (c, _) in enumerate(z1)]
        out = LaurentCoefficients(
            K=K,
            eta=eta,
            mu=mu,
            stieltjes=stj,
            eta_errors=[e for _, e in at1],
            mu_errors=[e for _, e in at0],
            stieltjes_errors=[mp.factorial(k) * e for k, (_, e) in enumerate(z1)],
            working_digits=cfg.working_digits,
            mu_text_convention_mu0=float(-mp.log(mp.pi)),
        )
    _LAURENT_CACHE[key] = out
    return out


@dataclass(frozen=True)
class ZeroPowerSum:
    """sum over rho of (-1/rho)^(k+1), with both derivations attached."""

    k: int
    value: float
    eta_route: float
    mu_route: float
    difference: float


def zero_power_sum(k: int, coeffs: LaurentCoefficients) -> ZeroPowerSum:
    """Power sums of -1/rho: the eta-route value is authoritative, the
    mu-route value and their difference ride along as diagnostics.

    k = 0 is the classical sum 1/rho = 1 + (gamma - log 4pi)/2; for k >= 1
    the two routes are
      eta:  eta_k + (-1)^k (1 - 2^-(k+1)) zeta(k+1) - (-1)^k
      mu:  -mu_k  - 2^-(k+1) zeta(k+1) - (-1)^k.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    cfg = ZetaEvalConfig(working_digits=coeffs.working_digits)
    with mp.workdps(coeffs.working_digits + 10):
        if k == 0:
            v = 1 + (mp.euler - mp.log(4 * mp.pi)) / 2
            return ZeroPowerSum(k=0, value=float(v), eta_route=float(v),
                                mu_route=float(v), difference=0.0)
        if k > coeffs.K:
            raise CoefficientsTooShort(f"need coefficients up to k = {k}")
        zk1 = zetacore.zeta_at_integer(k + 1, cfg)
        sign = (-1) ** k
        eta_route = coeffs.eta[k] + sign * (1 - mp.mpf(2) ** (-(k + 1))) * zk1 - sign
        mu_route = -coeffs.mu[k] - mp.mpf(2) ** (-(k + 1)) * zk1 - sign
        return ZeroPowerSum(
            k=k,
            value=float(eta_route),
            eta_route=float(eta_route),
            mu_route=float(mu_route),
            difference=float(eta_route - mu_route),
        )


# ---------------------------------------------------------------------------
# The three lambda routes

@dataclass(frozen=True)
class LiDirectValue:
    """Truncated paired zero sum for lambda_n plus its tail heuristic,
    kept separate so the unconditional part stays distinguishable."""

    n: int
    value: float
    tail_correction: float
    zero_count: int
    truncation_height: float

    @property
    def corrected(self) -> float:
        return self.value + self.tail_correction


def li_direct(n: int, zeros: ZeroSet) -> LiDirectValue:
    """lambda_n by the defining paired zero sum
    sum_gamma [2 - 2 Re((1 - 1/rho)^n)], rho = 1/2 + i gamma <= T,
    plus the density tail ~ n^2 (log(T/2pi) + 1)/(2pi T).

    On the line |1 - 1/rho| = 1 exactly, so each paired term equals
    2 - 2 cos(n phi(gamma)) in [0, 4]: every term is nonnegative and the
    partial sums are monotone in the truncation.
    """
    if len(zeros) == 0:
        raise EmptyZeroSet("li_direct needs zeros")
    if not 1 <= n <= MAX_LI_ORDER:
        raise OrderTooLarge(f"n must be in 1..{MAX_LI_ORDER}")
    rho = zeros.rhos()
    terms = 2.0 - 2.0 * np.real((1.0 - 1.0 / rho) ** n)
    value = float(pairwise_sum_blocked(terms))
    T = float(zeros.ordinates[-1])
    tail = n * n * (math.log(T / (2 * math.pi)) + 1.0) / (2 * math.pi * T)
    return LiDirectValue(
        n=n,
        value=value,
        tail_correction=tail,
        zero_count=len(zeros),
        truncation_height=T,
    )


def _li_prefix(n: int):
    return 1 + mp.mpf(n) / 2 * (mp.euler - mp.log(4 * mp.pi))


def li_eta(n: int, coeffs: LaurentCoefficients) -> float:
    """lambda_n from the eta coefficients (exact finite sum, integer
    binomials)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n - 1 > coeffs.K:
        raise CoefficientsTooShort(
            f"li_eta({n}) needs eta up to k = {n - 1}, have K = {coeffs.K}"
        )
    cfg = ZetaEvalConfig(working_digits=coeffs.working_digits)
    with mp.workdps(coeffs.working_digits + 10):
        acc = _li_prefix(n)
        for k in range(2, n + 1):
            zk = zetacore.zeta_at_integer(k, cfg)
            term = (-1) ** k * (1 - mp.mpf(2) ** (-k)) * zk - coeffs.eta[k - 1]
            acc += mp.mpf(math.comb(n, k)) * term
        return float(acc)


def li_mu(n: int, coeffs: LaurentCoefficients) -> float:
    """lambda_n from the mu coefficients (exact finite sum, integer
    binomials)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n - 1 > coeffs.K:
        raise CoefficientsTooShort(
            f"li_mu({n}) needs mu up to k = {n - 1}, have K = {coeffs.K}"
        )
    cfg = ZetaEvalConfig(working_digits=coeffs.working_digits)
    with mp.workdps(coeffs.working_digits + 10):
        acc = _li_prefix(n)
        for k in range(2, n + 1):
            zk = zetacore.zeta_at_integer(k, cfg)
            term = mp.mpf(2) ** (-k) * zk + coeffs.mu[k - 1]
            acc += mp.mpf(math.comb(n, k)) * term
        return float(acc)


@dataclass(frozen=True)
class LiSequence:
    """lambda_1..lambda_N for one route, with its truncation metadata."""

    route: str  # "direct" | "eta" | "mu"
    values: list[float]
    zero_count: int | None = None
    truncation_height: float | None = None
    coefficient_order: int | None = None
    tail_corrections: list[float] | None = None


def li_table(
    n_max: int,
    zeros: ZeroSet | None,
    coeffs: LaurentCoefficients,
) -> list[dict]:
    """Rows (n, lambda_direct, tail, lambda_eta, lambda_mu, max_disc) for the
    CSV export; ``lambda_direct`` entries are NaN when no zeros are given."""
    rows = []
    for n in range(1, n_max + 1):
        le = li_eta(n, coeffs)
        lm = li_mu(n, coeffs)
        if zeros is not None:
            ld = li_direct(n, zeros)
            direct, tail = ld.value, ld.tail_correction
            disc = max(abs(le - lm), abs(le - ld.corrected))
        else:
            direct, tail = float("nan"), float("nan")
            disc = abs(le - lm)
        rows.append({
            "n": n,
            "lambda_direct": direct,
            "tail": tail,
            "lambda_eta": le,
            "lambda_mu": lm,
            "max_disc": disc,
        })
    return rows


# ---------------------------------------------------------------------------
# Weil quadratic form

@dataclass(frozen=True)
class WeilFormReport:
    """The quadratic form sum_rho g~(rho) g~(1-rho) and its s = 1 evaluation.

    On-line zeros make each conjugate pair contribute 2|g~(rho)|^2 >= 0, so
    ``min_pair_term`` >= 0 certifies monotone partial sums exactly.  For the
    Li family (g = g_n) the sum = product identity collapses the right side
    to the sum of the two s = 1 forms and the truncated lhs equals twice the
    truncated direct lambda_n to roundoff (``li_identity_residual``).
    """

    label: str
    lhs_zero_sum: float
    lhs_tail: float
    min_pair_term: float
    rhs_total: float
    rhs_terms: dict
    li_identity_residual: float | None
    zero_count: int
    truncation_height: float
    assumptions: dict


def weil_form(
    g: TestFunction,
    zeros: ZeroSet,
    table=None,
    cfg: ZetaEvalConfig = ZetaEvalConfig(working_digits=30),
) -> WeilFormReport:
    if len(zeros) == 0:
        raise EmptyZeroSet("weil_form needs zeros")
    if g.family not in ("assoc_laguerre", "exp"):
        raise UnsupportedFamily(
            f"{g.label}: weil_form supports the associated-Laguerre family "
            "(satisfies sum = product) and the exponential family"
        )
    rho = zeros.rhos()
    gr = np.asarray(g.transform_eval(rho), dtype=np.complex128)
    terms = 2.0 * np.abs(gr) ** 2  # pair {rho, conj rho}: 2 |g~(rho)|^2
    lhs = float(pairwise_sum_blocked(terms))
    min_term = float(np.min(terms))
    T = float(zeros.ordinates[-1])

    def pair_mag(gamma: float) -> float:
        return 2.0 * abs(complex(g.transform_eval(0.5 + 1j * gamma))) ** 2

    lhs_tail = float(np.real(engine.pair_tail_integral(pair_mag, T)))

    assumptions = engine.base_assumptions(zeros) | {"test_function": g.label}
    if g.family == "assoc_laguerre":
        r1 = engine.s1_value(g, zeros, table=table, cfg=cfg)
        r2 = engine.involuted_s1_value(g, zeros, table=table, cfg=cfg)
        rhs_total = (r1.total + r2.total).real
        rhs_terms = {
            "reduction": "sum = product collapses the convolution form",
            "s1": r1.to_dict(),
            "s1_involuted": r2.to_dict(),
        }
        ld = li_direct(int(g.param), zeros)
        residual = abs(lhs - 2.0 * ld.value)
        assumptions["regularized"] = True
    else:
        a = float(g.param)
        if abs(a) < 1e-9 or abs(1 - a) < 1e-9:
            raise UnsupportedFamily(
                "exp rate a in {0, 1} puts poles at g~(0) or g~(1)"
            )
        if abs(1 - 2 * a) < 1e-9:
            raise UnsupportedFamily(
                "exp rate a = 1/2 degenerates the convolution expectation"
            )
        if a < 0 and abs(a / 2 - round(a / 2)) < 1e-12:
            raise UnsupportedFamily(f"g~(-2n) pole at a = {a}")
        product_pole = (1.0 / (1 - a)) * (-1.0 / a)  # g~(1) g~(0)
        cutoff = 2000
        n = np.arange(1, cutoff + 1, dtype=np.float64)
        prod_terms = 1.0 / ((-2 * n - a) * (1 + 2 * n - a))
        prod_series = float(pairwise_sum_blocked(prod_terms))
        from scipy.integrate import quad

        # midpoint rule for the lattice tail
        prod_tail, _ = quad(
            lambda u: 1.0 / ((-2 * u - a) * (1 + 2 * u - a)), cutoff + 0.5,
            np.inf, limit=200,
        )

        def f_tilde(s: float) -> float:
            return float(mp.re(zetacore.neg_zeta_log_deriv(s, cfg)))

        # transform of the involuted convolution: <e^-t (invol(g)*g)(t)>
        # = (f~(1-a) - f~(a))/(1 - 2a), by partial fractions of the product
        conv_expect = (f_tilde(1 - a) - f_tilde(a)) / (1 - 2 * a)
        rhs_total = product_pole - (prod_series + prod_tail) - conv_expect
        rhs_terms = {
            "product_pole_term": product_pole,
            "trivial_product_series": prod_series,
            "trivial_product_cutoff": cutoff,
            "trivial_product_tail": prod_tail,
            "convolution_expectation": conv_expect,
            "expectation_route": "analytic (f~(1-a) - f~(a))/(1-2a)",
        }
        residual = None
        assumptions["regularized"] = True

    return WeilFormReport(
        label=g.label,
        lhs_zero_sum=lhs,
        lhs_tail=lhs_tail,
        min_pair_term=min_term,
        rhs_total=float(rhs_total),
        rhs_terms=rhs_terms,
        li_identity_residual=residual,
        zero_count=len(zeros),
        truncation_height=T,
        assumptions=assumptions,
    )
