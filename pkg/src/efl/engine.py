"""The analytic side of the explicit formula: psi(x) rebuilt from zeros, both
sides of the general weighted identity, and its two s = 1 specializations.

Term bookkeeping
----------------
Every evaluation returns an :class:`ExplicitFormulaReport` whose components
satisfy, verbatim and to float roundoff,

    total = pole_term - trivial_zero_sum - nontrivial_zero_sum
            - atom_term - expectation_term

(the signs of the stored components are folded so this one identity holds for
every kind of evaluation; e.g. the psi form stores
``trivial_zero_sum = -sum x^(-2n)/(2n)`` and ``atom_term = log 2pi``).
Truncation indices, tail estimates, assumption flags and regularization
substitutions are all recorded; nothing is silently dropped.

Zero sums are always reduced over conjugate pairs (rho with 1-rho = conj rho
under the critical-line flag) in ascending-ordinate order with the fixed
pairwise blocking; for real test functions each pair contributes a real term
and the imaginary residue is pure roundoff.

Regularization: for polynomial-family g at s = 1 the arithmetic expectation
diverges together with the transform pole g~(s-1).  Their joint limit is
finite and is supplied by the Laurent machinery (eta coefficients for the
direct s = 1 form, mu coefficients for the involuted one); reports carry
``regularized: True`` and a zeroed pole slot when this substitution happens.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from mpmath import mp

from . import zetacore
from .arith import VonMangoldtTable, prime_expectation
from .errors import (
    AtJumpPoint,
    EmptyZeroSet,
    PoleInput,
    TransformPole,
    UnsupportedFamily,
)
from .summation import pairwise_sum_blocked
from .testfn import TestFunction
from .zeros import ZeroSet
from .zetacore import ZetaEvalConfig

__all__ = [
    "ExplicitFormulaReport",
    "TrivialZeroSeries",
    "psi_analytic",
    "general_rhs",
    "s1_value",
    "involuted_s1_value",
    "zero_density",
    "paired_transform_sum",
    "pair_tail_integral",
]

#: Polynomial-family labels that share the coefficient decomposition path.
POLY_FAMILIES = ("poly", "laguerre", "assoc_laguerre")


def zero_density(gamma: float) -> float:
    """Smooth zero-counting density dN/dgamma ~ log(gamma/2pi)/(2pi)."""
    return math.log(gamma / (2 * math.pi)) / (2 * math.pi)


@dataclass(frozen=True)
class TrivialZeroSeries:
    """The trivial-zero series of the explicit formula, truncated at
    ``cutoff``, with each term paired with its share of the delta atom at 0:
    term_n = g~(s + 2n) - g(0)/(2n).

    The pairing is load-bearing: the two pieces diverge separately whenever
    g(0) != 0, so an unpaired evaluation is refused unless g(0) = 0.
    """

    cutoff: int
    paired_with_atom: bool = True

    def terms(self, transform: Callable, s: complex, g0: float) -> np.ndarray:
        if not self.paired_with_atom and g0 != 0.0:
            raise ValueError(
                "unpaired trivial-zero series diverges for g(0) != 0"
            )
        n = np.arange(1, self.cutoff + 1, dtype=np.float64)
        vals = np.asarray(transform(s + 2 * n), dtype=np.complex128)
        if self.paired_with_atom:
            vals = vals - g0 / (2 * n)
        return vals


@dataclass
class ExplicitFormulaReport:
    """Per-term breakdown of one explicit-formula evaluation.

    ``kind`` is one of ``psi``, ``general``, ``s1``, ``s1_involuted``.
    ``total`` is the full right-hand-side value with truncated series;
    ``total_with_tails`` additionally subtracts the recorded tail estimates.
    For the s1 kinds ``lhs_zero_sum`` holds the direct (truncated) zero-sum
    evaluation of the left side and ``difference`` compares the two routes
    after tail correction.
    """

    kind: str
    pole_term: complex
    trivial_zero_sum: complex
    nontrivial_zero_sum: complex
    atom_term: complex
    expectation_term: complex
    total: complex
    x: float | None = None
    s: complex | None = None
    trivial_cutoff: int | None = None
    trivial_tail: complex = 0j
    zero_count: int = 0
    zero_truncation_height: float = 0.0
    nontrivial_tail: complex = 0j
    lhs_zero_sum: complex | None = None
    lhs_tail: complex = 0j
    difference: complex | None = None
    assumptions: dict = field(default_factory=dict)

    def readd(self) -> complex:
        """Recompute total from the stored components (bookkeeping identity)."""
        return (self.pole_term - self.trivial_zero_sum
                - self.nontrivial_zero_sum - self.atom_term
                - self.expectation_term)

    @property
    def total_with_tails(self) -> complex:
        return self.total - self.trivial_tail - self.nontrivial_tail

    def to_dict(self) -> dict:
        def enc(v):
            if isinstance(v, complex):
                return {"re": v.real, "im": v.imag}
            return v

        out = {
            "kind": self.kind,
            "x": self.x,
            "s": enc(self.s) if self.s is not None else None,
            "pole_term": enc(self.pole_term),
            "trivial_zero_sum": enc(self.trivial_zero_sum),
            "trivial_cutoff": self.trivial_cutoff,
            "trivial_tail": enc(self.trivial_tail),
            "nontrivial_zero_sum": enc(self.nontrivial_zero_sum),
            "zero_count": self.zero_count,
            "zero_truncation_height": self.zero_truncation_height,
            "nontrivial_tail": enc(self.nontrivial_tail),
            "atom_term": enc(self.atom_term),
            "expectation_term": enc(self.expectation_term),
            "total": enc(self.total),
            "total_with_tails": enc(self.total_with_tails),
            "lhs_zero_sum": enc(self.lhs_zero_sum) if self.lhs_zero_sum is not None else None,
            "lhs_tail": enc(self.lhs_tail),
            "difference": enc(self.difference) if self.difference is not None else None,
            "assumptions": self.assumptions,
        }
        return out


def base_assumptions(zeros: ZeroSet | None) -> dict:
    out = {
        "summation": "ascending-gamma, conjugate-paired, pairwise-blocked",
    }
    if zeros is not None:
        out["on_critical_line"] = zeros.on_critical_line
        out["zero_source"] = zeros.source
    return out


# ---------------------------------------------------------------------------
# Zero-sum and tail helpers

def paired_transform_sum(transform: Callable, base: complex, zeros: ZeroSet,
                         sign: int = 1) -> complex:
    """sum over pairs of transform(base + sign*rho) + transform(base + sign*conj rho)
    in ascending-ordinate order (e.g. base=s, sign=-1 gives sum g~(s - rho))."""
    rho = zeros.rhos()
    a = transform(base + sign * rho)
    b = transform(base + sign * np.conj(rho))
    return complex(pairwise_sum_blocked(np.asarray(a + b, dtype=np.complex128)))


_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(24)


def pair_tail_integral(pair_value: Callable, T: float) -> complex:
    """Signed density-heuristic tail: integral_T^inf pair_value(gamma)
    * density(gamma) d gamma (the labeled smooth continuation of the paired
    zero sum past the truncation height).

    Substituting gamma = T e^v makes the integrand decay like e^-v; it is
    integrated over v in (0, 12] (an e^12 ~ 1.6e5-fold span, beyond which the
    true value sits under the paired transform's double-precision noise) by
    fixed composite Gauss-Legendre: deterministic nodes, no adaptivity to
    chase sub-noise structure.
    """
    def integrand(v: float) -> complex:
        gamma = T * np.exp(v)
        return complex(pair_value(gamma)) * zero_density(gamma) * gamma

    total = 0j
    panels = np.linspace(0.0, 12.0, 9)
    for a, b in zip(panels[:-1], panels[1:]):
        mid, half = 0.5 * (a + b), 0.5 * (b - a)
        for x, w in zip(_GL_NODES, _GL_WEIGHTS):
            total += w * half * integrand(mid + half * x)
    return total


def _is_prime_power(m: int) -> bool:
    if m < 2:
        return False
    p = None
    x = m
    for d in range(2, math.isqrt(m) + 1):
        if x % d == 0:
            p = d
            break
    if p is None:
        return True  # prime
    while x % p == 0:
        x //= p
    return x == 1


# ---------------------------------------------------------------------------
# psi from zeros

def psi_analytic(
    x: float,
    zeros: ZeroSet,
    trivial_cutoff: int = 100,
) -> ExplicitFormulaReport:
    """Chebyshev psi(x) from the zero side:
    x + sum_{n<=cutoff} x^(-2n)/(2n) - sum_{|gamma|<=T} x^rho/rho - log 2pi,
    the nontrivial sum taken in conjugate pairs 2 Re(x^rho/rho).

    The zero-sum truncation error is oscillatory (no signed smooth tail
    exists), so ``nontrivial_tail`` stays 0 and accuracy is assessed by
    convergence sweeps over the zero count, which is how the tests use it.
    """
    if x <= 1:
        raise ValueError("psi_analytic requires x > 1")
    if len(zeros) == 0:
        raise EmptyZeroSet("psi_analytic needs at least one zero")
    m = round(x)
    if abs(x - m) < 1e-6 and _is_prime_power(int(m)):
        raise AtJumpPoint(f"x = {x} is within 1e-6 of the prime power {m}")

    n = np.arange(1, trivial_cutoff + 1, dtype=np.float64)
    triv_terms = x ** (-2 * n) / (2 * n)
    trivial = -float(pairwise_sum_blocked(triv_terms))
    # exact remainder of the geometric-log series, folded to the stored sign
    full = -0.5 * math.log1p(-x ** (-2.0))
    trivial_tail = -(full - (-trivial))

    rho = zeros.rhos()
    lx = math.log(x)
    terms = 2.0 * np.real(np.exp(rho * lx) / rho)
    nontrivial = complex(pairwise_sum_blocked(terms))

    atom = math.log(2 * math.pi)
    total = x - trivial - nontrivial - atom

    rep = ExplicitFormulaReport(
        kind="psi",
        x=float(x),
        pole_term=complex(x),
        trivial_zero_sum=complex(trivial),
        trivial_cutoff=trivial_cutoff,
        trivial_tail=complex(trivial_tail),
        nontrivial_zero_sum=nontrivial,
        zero_count=len(zeros),
        zero_truncation_height=float(zeros.ordinates[-1]),
        nontrivial_tail=0j,
        atom_term=complex(atom),
        expectation_term=0j,
        total=complex(total),
        assumptions=base_assumptions(zeros) | {
            "oscillatory_zero_tail": "not estimated; use convergence sweeps",
        },
    )
    return rep


# ---------------------------------------------------------------------------
# General weighted form

def general_rhs(
    g: TestFunction,
    s: complex,
    zeros: ZeroSet,
    trivial_cutoff: int = 2000,
) -> ExplicitFormulaReport:
    """Right-hand side of the general explicit formula at s:
    g~(s-1) - sum_n (g~(s+2n) - g(0)/2n) - sum_rho g~(s-rho)
    - (gamma + log pi)/2 * g(0), with paired trivial terms, paired zero sum,
    and signed density tails for both truncations."""
    if len(zeros) == 0:
        raise EmptyZeroSet("general_rhs needs zeros")
    s = complex(s)
    g0 = g.value_at_zero
    series = TrivialZeroSeries(cutoff=trivial_cutoff)
    try:
        pole = complex(g.transform_eval(s - 1))
        trivial = complex(pairwise_sum_blocked(
            series.terms(g.transform_eval, s, g0)))
        nontrivial = paired_transform_sum(g.transform_eval, s, zeros, sign=-1)
    except PoleInput as exc:
        raise TransformPole(str(exc)) from exc

    from scipy.integrate import quad

    def triv_integrand(u: float, part) -> float:
        return part(g.transform_eval(s + 2 * u) - g0 / (2 * u))

    # midpoint rule: sum_{n>C} f(n) = int_{C+1/2}^inf f(u) du + O(f'')
    tre, _ = quad(triv_integrand, trivial_cutoff + 0.5, np.inf,
                  args=(np.real,), limit=300)
    tim, _ = quad(triv_integrand, trivial_cutoff + 0.5, np.inf,
                  args=(np.imag,), limit=300)
    trivial_tail = complex(tre, tim)

    T = float(zeros.ordinates[-1])

    def pair_value(gamma: float) -> complex:
        rho = 0.5 + 1j * gamma
        return complex(g.transform_eval(s - rho) + g.transform_eval(s - rho.conjugate()))

    nontrivial_tail = pair_tail_integral(pair_value, T)

    consts = zetacore.constants()
    atom = 0.5 * (float(consts.euler_gamma) + float(consts.log_pi)) * g0
    total = pole - trivial - nontrivial - atom

    return ExplicitFormulaReport(
        kind="general",
        s=s,
        pole_term=pole,
        trivial_zero_sum=trivial,
        trivial_cutoff=trivial_cutoff,
        trivial_tail=trivial_tail,
        nontrivial_zero_sum=nontrivial,
        zero_count=len(zeros),
        zero_truncation_height=T,
        nontrivial_tail=nontrivial_tail,
        atom_term=complex(atom),
        expectation_term=0j,
        total=complex(total),
        assumptions=base_assumptions(zeros) | {"test_function": g.label},
    )


# ---------------------------------------------------------------------------
# s = 1 forms

_COEFF_CACHE: dict = {}


def _poly_coefficient_values(g: TestFunction, cfg: ZetaEvalConfig, at: int):
    """Taylor coefficients of the log-derivative target at 0 or 1 up to the
    polynomial degree of g (contour size auto-raised to 4x the degree)."""
    deg = len(g.poly_coeffs) - 1
    points = max(cfg.contour_points, 1 << (4 * (deg + 1) - 1).bit_length())
    key = (at, deg, points, cfg.working_digits, cfg.contour_radius,
           cfg.correction_order, cfg.cutoff_terms)
    out = _COEFF_CACHE.get(key)
    if out is None:
        cfg2 = ZetaEvalConfig(
            cutoff_terms=cfg.cutoff_terms,
            correction_order=cfg.correction_order,
            contour_radius=cfg.contour_radius,
            contour_points=points,
            working_digits=cfg.working_digits,
        )
        out = zetacore.derivatives_at(at, deg, cfg2)
        _COEFF_CACHE[key] = out
    return out


def _zeta_ints(k_max: int, cfg: ZetaEvalConfig) -> list:
    """zeta(2..k_max) as mpf (index-aligned, entries 0 and 1 unused)."""
    return [None, None] + [
        zetacore.zeta_at_integer(k, cfg) for k in range(2, k_max + 1)
    ]


def _require_family(g: TestFunction, allowed=("exp",) + POLY_FAMILIES):
    if g.family not in allowed:
        raise UnsupportedFamily(
            f"{g.label}: family {g.family!r} not supported here"
        )


def s1_value(
    g: TestFunction,
    zeros: ZeroSet,
    table: VonMangoldtTable | None = None,
    cfg: ZetaEvalConfig = ZetaEvalConfig(working_digits=30),
) -> ExplicitFormulaReport:
    """Evaluate sum_rho g~(1-rho) two ways: the direct paired zero sum (lhs)
    and the s = 1 right-hand side (total), with their difference.

    Polynomial-family g: the divergent expectation and the g~(s-1) pole are
    replaced jointly by the eta-coefficient limit (report flagged
    regularized, pole slot zeroed).  Exponential g: the expectation is the
    arithmetic prime sum when a table is supplied and convergent, otherwise
    the analytic continuation -zeta'/zeta(1-a).
    """
    _require_family(g)
    if len(zeros) == 0:
        raise EmptyZeroSet("s1_value needs zeros")
    consts = zetacore.constants(cfg)
    g0 = g.value_at_zero
    assumptions = base_assumptions(zeros) | {"test_function": g.label}

    with mp.workdps(cfg.working_digits + 10):
        atom = (consts.euler_gamma + consts.log_pi) / 2 * g0
        if g.family in POLY_FAMILIES:
            coeffs = g.poly_coeffs
            etas = _poly_coefficient_values(g, cfg, at=1)
            zints = _zeta_ints(len(coeffs), cfg)
            # joint limit of g~(s-1) - <e^(-st) g>: sum_k a_k * (-(-1)^k k! eta_k)
            reg = -mp.fsum(
                a * (-1) ** k * mp.factorial(k) * mp.re(etas[k][0])
                for k, a in enumerate(coeffs)
            )
            pole = mp.mpf(0)
            expectation = -reg  # joint limit carried in the expectation slot
            # exact trivial series: a_0 (log 2 - 1) + sum_{k>=1} a_k k! ((1-2^-(k+1)) zeta(k+1) - 1)
            trivial = coeffs[0] * (mp.log(2) - 1)
            for k in range(1, len(coeffs)):
                if coeffs[k] == 0.0:
                    continue
                trivial += coeffs[k] * mp.factorial(k) * (
                    (1 - mp.mpf(2) ** (-(k + 1))) * zints[k + 1] - 1
                )
            assumptions["regularized"] = True
            assumptions["expectation_route"] = "eta-limit"
            cutoff = None
        else:  # exp family
            a = float(g.param)
            if abs(a) < 1e-12 or abs(1 - a) < 1e-12:
                raise TransformPole(
                    "exp rate a in {0, 1} puts a pole at g~(0) or the "
                    "expectation; use the Li family for g = 1"
                )
            pole = -1 / mp.mpf(a)  # g~(0) = 1/(0 - a)
            c = 1 - mp.mpf(a)
            trivial = -(mp.digamma(1 + c / 2) + consts.euler_gamma) / 2
            convergent = a < 0
            if convergent and table is not None:
                pe = prime_expectation(g, 1.0, table)
                expectation = mp.mpf(pe.corrected.real)
                assumptions["expectation_route"] = "arithmetic"
            else:
                expectation = mp.re(zetacore.neg_zeta_log_deriv(1 - a, cfg))
                assumptions["expectation_route"] = "analytic"
                assumptions["regularized"] = not convergent
            cutoff = None
        total = pole - trivial - atom - expectation

    lhs = paired_transform_sum(g.transform_eval, 1.0, zeros, sign=-1)
    T = float(zeros.ordinates[-1])

    def pair_value(gamma: float) -> complex:
        return complex(
            g.transform_eval(0.5 - 1j * gamma) + g.transform_eval(0.5 + 1j * gamma)
        )

    lhs_tail = pair_tail_integral(pair_value, T)
    total_f = complex(float(mp.re(total)), 0.0)

    return ExplicitFormulaReport(
        kind="s1",
        s=1.0 + 0j,
        pole_term=complex(float(mp.re(pole)), 0.0),
        trivial_zero_sum=complex(float(mp.re(trivial)), 0.0),
        trivial_cutoff=cutoff,
        nontrivial_zero_sum=0j,
        zero_count=len(zeros),
        zero_truncation_height=T,
        atom_term=complex(float(mp.re(atom)), 0.0),
        expectation_term=complex(float(mp.re(expectation)), 0.0),
        total=total_f,
        lhs_zero_sum=lhs,
        lhs_tail=lhs_tail,
        difference=(lhs + lhs_tail) - total_f,
        assumptions=assumptions,
    )


def involuted_s1_value(
    g: TestFunction,
    zeros: ZeroSet,
    table: VonMangoldtTable | None = None,
    cfg: ZetaEvalConfig = ZetaEvalConfig(working_digits=30),
) -> ExplicitFormulaReport:
    """Evaluate sum_rho g~(rho) through the involuted s = 1 form:
    g~(1) - sum_n (g~(-2n) + g(0)/2n) + (gamma+log pi)/2 g(0) + <g(-t)>.

    The <g(-t)> expectation diverges for polynomial-family g and is replaced
    by its analytic continuation through the mu coefficients,
    <g(-t)> = sum_k a_k k! c_k(0) with c_k(0) the Taylor coefficients of
    -zeta'/zeta at 0; exponential g uses -zeta'/zeta(a) (or the arithmetic
    sum when a > 1 and a table is supplied).
    """
    _require_family(g)
    if len(zeros) == 0:
        raise EmptyZeroSet("involuted_s1_value needs zeros")
    consts = zetacore.constants(cfg)
    g0 = g.value_at_zero
    assumptions = base_assumptions(zeros) | {"test_function": g.label}

    with mp.workdps(cfg.working_digits + 10):
        # stored with folded signs so the one re-addition identity holds:
        # total = pole - trivial - atom_term - expectation_term
        atom_term = -(consts.euler_gamma + consts.log_pi) / 2 * g0
        if g.family in POLY_FAMILIES:
            coeffs = g.poly_coeffs
            mus = _poly_coefficient_values(g, cfg, at=0)
            zints = _zeta_ints(len(coeffs), cfg)
            pole = mp.fsum(
                a * mp.factorial(k) for k, a in enumerate(coeffs)
            )  # g~(1) = sum a_k k!/1
            gneg = mp.fsum(
                a * mp.factorial(k) * mp.re(mus[k][0])
                for k, a in enumerate(coeffs)
            )  # <g(-t)> = sum a_k k! c_k(0)
            expectation = -gneg
            # sum_n (g~(-2n) + g0/2n): k = 0 telescopes to 0 exactly;
            # k >= 1 gives a_k k! (-1)^(k+1) 2^-(k+1) zeta(k+1)
            trivial = mp.mpf(0)
            for k in range(1, len(coeffs)):
                if coeffs[k] == 0.0:
                    continue
                trivial += coeffs[k] * mp.factorial(k) * (-1) ** (k + 1) \
                    * mp.mpf(2) ** (-(k + 1)) * zints[k + 1]
            assumptions["regularized"] = True
            assumptions["expectation_route"] = "mu-continuation"
        else:  # exp family
            a = float(g.param)
            if a < 0 and abs(a / 2 - round(a / 2)) < 1e-12:
                raise TransformPole(
                    f"g~(-2n) hits the transform pole at a = {a}"
                )
            if abs(1 - a) < 1e-12:
                raise TransformPole("a = 1 puts the pole at g~(1)")
            pole = 1 / (1 - mp.mpf(a))
            trivial = (mp.digamma(1 + mp.mpf(a) / 2) + consts.euler_gamma) / 2
            convergent = a > 1
            if convergent and table is not None:
                from .testfn import poly_tf

                pe = prime_expectation(poly_tf(0), complex(a), table)
                gneg = mp.mpf(pe.corrected.real)
                assumptions["expectation_route"] = "arithmetic"
            else:
                gneg = mp.re(zetacore.neg_zeta_log_deriv(a, cfg))
                assumptions["expectation_route"] = "analytic"
                assumptions["regularized"] = not convergent
            expectation = -gneg
        total = pole - trivial - atom_term - expectation

    lhs = paired_transform_sum(g.transform_eval, 0.0, zeros, sign=1)
    T = float(zeros.ordinates[-1])

    def pair_value(gamma: float) -> complex:
        return complex(
            g.transform_eval(0.5 + 1j * gamma) + g.transform_eval(0.5 - 1j * gamma)
        )

    lhs_tail = pair_tail_integral(pair_value, T)
    total_f = complex(float(mp.re(total)), 0.0)

    return ExplicitFormulaReport(
        kind="s1_involuted",
        s=1.0 + 0j,
        pole_term=complex(float(mp.re(pole)), 0.0),
        trivial_zero_sum=complex(float(mp.re(trivial)), 0.0),
        trivial_cutoff=None,
        nontrivial_zero_sum=0j,
        zero_count=len(zeros),
        zero_truncation_height=T,
        atom_term=complex(float(mp.re(atom_term)), 0.0),
        expectation_term=complex(float(mp.re(expectation)), 0.0),
        total=total_f,
        lhs_zero_sum=lhs,
        lhs_tail=lhs_tail,
        difference=(lhs + lhs_tail) - total_f,
        assumptions=assumptions,
    )
