"""Riemann zeta machinery: zeta, its logarithmic derivative, Taylor
coefficients by contour quadrature, and the completed xi function.

Evaluation strategy
-------------------
Euler--Maclaurin continuation with a configurable direct-sum length ``N``
and ``M`` Bernoulli correction terms:

    zeta(s) = sum_{n<N} n^-s + N^(1-s)/(s-1) + N^-s/2
              + sum_{j=1..M} B_2j/(2j)! * s(s+1)...(s+2j-2) * N^(-s-2j+1) + R

with the classical remainder bound
``|R| <= |B_(2M+2)/(2M+2)! * (s)_(2M+1) * N^(-s-2M-1)| * |s+2M+1|/(sigma+2M+1)``
(valid for sigma > -(2M+1)).  When ``cutoff_terms`` is left unset, ``N`` is
escalated automatically until the bound meets the configured target; a pinned
``N`` that cannot meet the target raises :class:`~efl.errors.ConfigTooWeak`.

Derivatives of ``-zeta'/zeta`` are produced by trapezoidal contour quadrature
on a circle: one mechanism for every order and both expansion points, with a
winding-number check (at no extra evaluations) that the contour encloses
exactly the singularities it is supposed to.

All arithmetic runs on the mpmath binary floating-point backend at
``working_digits`` plus scale-dependent guard digits; results are mpmath
``mpc``/``mpf`` values.  Operations are pure functions of their inputs.
Precision is managed through ``mp.workdps``, which mutates interpreter-global
state: use process-level parallelism, not threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
from mpmath import mp

from .errors import (
    ConfigTooWeak,
    ContourHitsSingularity,
    NearZeroOfZeta,
    NonFiniteResult,
    PoleAtOne,
    QuadratureNotConverged,
)
from .summation import pairwise_sum_seq

__all__ = [
    "ZetaEvalConfig",
    "Constants",
    "constants",
    "zeta",
    "zeta_minus_pole",
    "neg_zeta_log_deriv",
    "derivatives_at",
    "zeta_taylor_at_one",
    "xi",
]

#: |s - 1| below which zeta/neg_zeta_log_deriv report the pole.
POLE_TOL = 1e-14

_MAX_CUTOFF = 1 << 20


@dataclass(frozen=True)
class ZetaEvalConfig:
    """Evaluation parameters shared by all zeta-side operations.

    cutoff_terms:     direct-sum length N; ``None`` selects it from the error
                      bound (starting at the 64 + 2|Im s| default).
    correction_order: number of Bernoulli correction terms M.
    contour_radius:   circle radius for Taylor-coefficient quadrature.  Must
                      keep s = 1 and every zero of zeta strictly off the
                      circle for the expansion point in use.
    contour_points:   trapezoidal nodes (power of two, >= 4 * max order).
    working_digits:   decimal digits carried by every operation (>= 15).
    """

    cutoff_terms: int | None = None
    correction_order: int = 20
    contour_radius: float = 0.5
    contour_points: int = 128
    working_digits: int = 25

    def __post_init__(self):
        if self.cutoff_terms is not None and self.cutoff_terms < 1:
            raise ValueError("cutoff_terms must be positive")
        if self.correction_order < 1:
            raise ValueError("correction_order must be positive")
        if self.contour_radius <= 0:
            raise ValueError("contour_radius must be positive")
        m = self.contour_points
        if m < 4 or (m & (m - 1)) != 0:
            raise ValueError("contour_points must be a power of two >= 4")
        if self.working_digits < 15:
            raise ValueError("working_digits must be at least 15")

    @property
    def rel_target(self) -> float:
        """Contractual relative error target, 10**(2 - working_digits)."""
        return 10.0 ** (2 - self.working_digits)


@dataclass(frozen=True)
class Constants:
    """Frequently used real constants at a given working precision."""

    euler_gamma: mpmath.mpf
    log_pi: mpmath.mpf
    log_2pi: mpmath.mpf
    log_4pi: mpmath.mpf
    working_digits: int


def constants(cfg: ZetaEvalConfig = ZetaEvalConfig()) -> Constants:
    with mp.workdps(cfg.working_digits + 10):
        return Constants(
            euler_gamma=+mp.euler,
            log_pi=mp.log(mp.pi),
            log_2pi=mp.log(2 * mp.pi),
            log_4pi=mp.log(4 * mp.pi),
            working_digits=cfg.working_digits,
        )


# ---------------------------------------------------------------------------
# Euler-Maclaurin core

_BERN_CACHE: dict[tuple[int, int], mpmath.mpf] = {}
_LOG_CACHE: dict[tuple[int, int], mpmath.mpf] = {}


def _bernoulli(idx: int) -> mpmath.mpf:
    """B_idx rounded once from the exact rational at the current precision."""
    key = (idx, mp.prec)
    b = _BERN_CACHE.get(key)
    if b is None:
        p, q = mpmath.bernfrac(idx)
        b = mp.mpf(p) / q
        _BERN_CACHE[key] = b
    return b


def _log_int(n: int) -> mpmath.mpf:
    key = (n, mp.prec)
    v = _LOG_CACHE.get(key)
    if v is None:
        v = mp.log(n)
        _LOG_CACHE[key] = v
    return v


def _em_terms(s, N: int, M: int, want_deriv: bool, minus_pole: bool = False):
    """Euler-Maclaurin value (and optionally d/ds) of zeta at s, plus the
    remainder bound.  With ``minus_pole`` the tail term ``N^(1-s)/(s-1)`` is
    replaced by its pole-subtracted form
    ``(N^(1-s) - 1)/(s-1) = -log N * phi((1-s) log N)``,
    ``phi(w) = (e^w - 1)/w``, which is regular at s = 1 (no cancellation).
    """
    if want_deriv and minus_pole:
        raise ValueError("derivative of the pole-subtracted form is unused")
    logN = _log_int(N)
    # direct sum over n < N
    terms = []
    dterms = []
    for n in range(1, N):
        ln = _log_int(n)
        p = mp.exp(-s * ln)
        terms.append(p)
        if want_deriv:
            dterms.append(-ln * p)
    direct = pairwise_sum_seq(terms)
    Npow = mp.exp(-s * logN)  # N^-s
    if minus_pole:
        w = (1 - s) * logN
        phi = mp.expm1(w) / w if w != 0 else mp.mpc(1)
        pole = -logN * phi  # N^(1-s)/(s-1) - 1/(s-1)
    else:
        pole = Npow * N / (s - 1)  # N^(1-s)/(s-1)
    half = Npow / 2
    value = direct + pole + half
    dvalue = None
    if want_deriv:
        ddirect = pairwise_sum_seq(dterms)
        dpole = -logN * pole - pole / (s - 1)
        dhalf = -logN * half
        dvalue = ddirect + dpole + dhalf
    # Bernoulli corrections: P_j(s) = s(s+1)...(s+2j-2) tracked incrementally
    P = s
    dP = mp.mpc(1)
    scale = Npow / N  # N^(-s-1): running N^(-s-2j+1)
    corr = mp.mpc(0)
    dcorr = mp.mpc(0)
    fac = mp.mpf(2)  # (2j)!
    for j in range(1, M + 1):
        B = _bernoulli(2 * j)
        coef = B / fac
        corr += coef * P * scale
        if want_deriv:
            dcorr += coef * (dP - logN * P) * scale
        # advance P to degree 2(j+1)-1, factorial to (2j+2)!, scale to -2
        dP = dP * (s + 2 * j - 1) + P
        P = P * (s + 2 * j - 1)
        dP = dP * (s + 2 * j) + P
        P = P * (s + 2 * j)
        fac *= (2 * j + 1) * (2 * j + 2)
        scale = scale / (N * N)
    value += corr
    if want_deriv:
        dvalue += dcorr
    # remainder bound; after the loop P = (s)_(2M+1), scale = N^(-s-2M-1),
    # fac = (2M+2)!
    sigma = mp.re(s)
    denom = sigma + 2 * M + 1
    if denom <= 0:
        raise ConfigTooWeak(
            f"correction_order {M} too small for Re s = {float(sigma)}"
        )
    bound = abs(_bernoulli(2 * M + 2)) / fac * abs(P) * abs(scale) \
        * abs(s + 2 * M + 1) / denom
    return value, dvalue, bound


def _auto_N(s, cfg: ZetaEvalConfig) -> int:
    base = int(64 + 2 * abs(mp.im(s)))
    if cfg.cutoff_terms is not None:
        return cfg.cutoff_terms
    return base


def _guard_digits(s, N: int) -> int:
    """Guard digits absorbing direct-sum cancellation for Re s < 0."""
    sigma = min(0.0, float(mp.re(s)))
    return 12 + int(-sigma * math.log10(max(N, 2)) + 0.5)


def _eval_zeta(s, cfg: ZetaEvalConfig, want_deriv: bool):
    """zeta(s) (and optionally zeta'(s)) with automatic N escalation."""
    N = _auto_N(s, cfg)
    M = cfg.correction_order
    pinned = cfg.cutoff_terms is not None
    while True:
        with mp.workdps(cfg.working_digits + _guard_digits(s, N)):
            sz = mp.mpc(s)
            value, dvalue, bound = _em_terms(sz, N, M, want_deriv)
            target = mp.mpf(10) ** (2 - cfg.working_digits) * max(
                abs(value), mp.mpf(10) ** (-cfg.working_digits)
            )
            if bound <= target:
                return value, dvalue, bound
        if pinned or N >= _MAX_CUTOFF:
            raise ConfigTooWeak(
                f"Euler-Maclaurin bound {mpmath.nstr(bound, 5)} exceeds target "
                f"at N={N}, M={M} for s={s}"
            )
        N *= 2


def _check_finite(z, what: str):
    if not mp.isfinite(z):
        raise NonFiniteResult(f"{what} produced a non-finite value")
    return z


def zeta(s, cfg: ZetaEvalConfig = ZetaEvalConfig()) -> mpmath.mpc:
    """zeta(s) anywhere away from s = 1, by Euler-Maclaurin continuation.

    Relative error stays below ``cfg.rel_target`` in the supported region
    (Re s >= -30, |Im s| <= 1e3; in practice considerably beyond).
    """
    with mp.workdps(cfg.working_digits + 10):
        sz = mp.mpc(s)
        if abs(sz - 1) <= POLE_TOL:
            raise PoleAtOne(f"zeta evaluated at s = {s}")
    value, _, _ = _eval_zeta(sz, cfg, want_deriv=False)
    return _check_finite(value, "zeta")


def zeta_minus_pole(s, cfg: ZetaEvalConfig = ZetaEvalConfig()) -> mpmath.mpc:
    """zeta(s) - 1/(s-1), analytic at s = 1 (returns euler_gamma there).

    The pole is removed inside the Euler-Maclaurin tail, where
    ``N^(1-s)/(s-1) - 1/(s-1) = -log N * phi((1-s) log N)`` with
    ``phi(w) = (e^w - 1)/w`` evaluated stably; no cancellation occurs however
    close s is to 1.
    """
    N = _auto_N(s, cfg)
    M = cfg.correction_order
    pinned = cfg.cutoff_terms is not None
    while True:
        with mp.workdps(cfg.working_digits + _guard_digits(s, N)):
            sz = mp.mpc(s)
            value, _, bound = _em_terms(sz, N, M, want_deriv=False,
                                        minus_pole=True)
            target = mp.mpf(10) ** (2 - cfg.working_digits) * max(
                abs(value), mp.mpf(10) ** (-cfg.working_digits)
            )
            if bound <= target:
                return _check_finite(+value, "zeta_minus_pole")
        if pinned or N >= _MAX_CUTOFF:
            raise ConfigTooWeak(f"bound exceeds target at N={N}, M={M}")
        N *= 2


def neg_zeta_log_deriv(s, cfg: ZetaEvalConfig = ZetaEvalConfig()) -> mpmath.mpc:
    """-zeta'(s)/zeta(s), the Dirichlet series sum Lambda(n) n^-s continued.

    Raises :class:`NearZeroOfZeta` when the estimated distance to a zero of
    zeta, |zeta(s)| / |zeta'(s)|, falls below 1e-12.
    """
    with mp.workdps(cfg.working_digits + 10):
        sz = mp.mpc(s)
        if abs(sz - 1) <= POLE_TOL:
            raise PoleAtOne(f"-zeta'/zeta evaluated at s = {s}")
    value, dvalue, _ = _eval_zeta(sz, cfg, want_deriv=True)
    with mp.workdps(cfg.working_digits + 10):
        if abs(value) == 0:
            raise NearZeroOfZeta(f"zeta(s) vanishes at s = {s}")
        dist = abs(value) / max(abs(dvalue), mp.mpf(10) ** (-cfg.working_digits))
        if dist < mp.mpf("1e-12"):
            raise NearZeroOfZeta(
                f"s = {s} lies within ~{mpmath.nstr(dist, 3)} of a zero of zeta"
            )
        out = -dvalue / value
    return _check_finite(out, "neg_zeta_log_deriv")


# ---------------------------------------------------------------------------
# Contour Taylor coefficients

def _contour_nodes(s0, r: mpmath.mpf, m: int):
    """Trapezoidal nodes s0 + r*exp(2*pi*i*j/m), j = 0..m-1."""
    nodes = []
    for j in range(m):
        w = mp.expjpi(mp.mpf(2 * j) / m)  # e^(2 pi i j / m)
        nodes.append(s0 + r * w)
    return nodes


def _coeffs_from_values(values, r, m: int, k_max: int):
    """c_k = (1/(m r^k)) sum_j f(z_j) e^(-2 pi i j k / m) for k = 0..k_max."""
    out = []
    for k in range(k_max + 1):
        parts = [
            values[j] * mp.expjpi(mp.mpf(-2 * j * k) / m) for j in range(m)
        ]
        ck = pairwise_sum_seq(parts) / (m * r ** k)
        out.append(ck)
    return out


def derivatives_at(
    s0,
    k_max: int,
    cfg: ZetaEvalConfig = ZetaEvalConfig(),
) -> list[tuple[mpmath.mpc, mpmath.mpf]]:
    """Taylor coefficients c_k = target^(k)(s0)/k!, k = 0..k_max, of the
    logarithmic-derivative target by trapezoidal contour quadrature.

    The target is ``-zeta'/zeta`` except at s0 = 1, where the simple pole is
    removed analytically first and the target becomes
    ``-zeta'/zeta - 1/(s-1)``.

    Returns ``[(c_k, err_k)]`` where ``err_k`` compares the full-node result
    against the half-node subset (the trapezoid rule's own convergence
    estimate) plus a roundoff floor.  Raises
    :class:`QuadratureNotConverged` when err_k > 1e-9 for some k <= 20, and
    :class:`ContourHitsSingularity` when the winding number of zeta'/zeta
    around the contour is not the expected one (0, or -1 when the pole at 1
    is inside).
    """
    if k_max < 0:
        raise ValueError("k_max must be >= 0")
    m = cfg.contour_points
    if m < 4 * max(k_max, 1):
        raise ConfigTooWeak(
            f"contour_points={m} < 4*k_max={4 * k_max}; raise contour_points"
        )
    wd = cfg.working_digits
    with mp.workdps(wd + 10):
        s0z = mp.mpc(s0)
        r = mp.mpf(cfg.contour_radius)
        at_one = abs(s0z - 1) <= POLE_TOL
        dist_pole = abs(s0z - 1)
        if not at_one and dist_pole < 1.05 * r:
            raise ContourHitsSingularity(
                f"contour of radius {float(r)} about {s0} touches or encloses "
                "the pole at s = 1 (expand at s0 = 1 to remove it analytically)"
            )
        nodes = _contour_nodes(s0z, r, m)

    fvals = []
    winding_parts = []
    for z in nodes:
        f = neg_zeta_log_deriv(z, cfg)
        with mp.workdps(wd + 10):
            winding_parts.append(-f * (z - s0z))
            if at_one:
                f = f - 1 / (z - 1)
            fvals.append(f)

    with mp.workdps(wd + 10):
        winding = pairwise_sum_seq(winding_parts) / m
        expected = -1 if at_one else 0
        if abs(winding - expected) > 0.1:
            raise ContourHitsSingularity(
                f"winding number {mpmath.nstr(winding, 5)} != {expected}: "
                "a zero or pole of zeta lies inside/near the contour"
            )
        coeffs = _coeffs_from_values(fvals, r, m, k_max)
        half = _coeffs_from_values(fvals[0::2], r, m // 2, min(k_max, m // 2 - 1))
        fscale = max(abs(v) for v in fvals)
        out = []
        for k, ck in enumerate(coeffs):
            floor = mp.mpf(10) ** (-wd) * fscale / r ** k
            est = floor if k >= len(half) else abs(ck - half[k]) + floor
            if k <= 20 and est > mp.mpf("1e-9"):
                raise QuadratureNotConverged(
                    f"coefficient {k} error estimate {mpmath.nstr(est, 3)} > 1e-9"
                )
            out.append((_check_finite(+ck, "derivatives_at"), +est))
    return out


def zeta_taylor_at_one(
    k_max: int,
    cfg: ZetaEvalConfig = ZetaEvalConfig(),
) -> list[tuple[mpmath.mpc, mpmath.mpf]]:
    """Taylor coefficients at s = 1 of zeta(s) - 1/(s-1) (same quadrature
    scheme as :func:`derivatives_at`; feeds the Stieltjes constants)."""
    m = cfg.contour_points
    if m < 4 * max(k_max, 1):
        raise ConfigTooWeak(
            f"contour_points={m} < 4*k_max={4 * k_max}; raise contour_points"
        )
    wd = cfg.working_digits
    with mp.workdps(wd + 10):
        r = mp.mpf(cfg.contour_radius)
        nodes = _contour_nodes(mp.mpc(1), r, m)
    fvals = [zeta_minus_pole(z, cfg) for z in nodes]
    with mp.workdps(wd + 10):
        coeffs = _coeffs_from_values(fvals, r, m, k_max)
        half = _coeffs_from_values(fvals[0::2], r, m // 2, min(k_max, m // 2 - 1))
        fscale = max(abs(v) for v in fvals)
        out = []
        for k, ck in enumerate(coeffs):
            floor = mp.mpf(10) ** (-wd) * fscale / r ** k
            est = floor if k >= len(half) else abs(ck - half[k]) + floor
            if k <= 20 and est > mp.mpf("1e-9"):
                raise QuadratureNotConverged(
                    f"coefficient {k} error estimate {mpmath.nstr(est, 3)} > 1e-9"
                )
            out.append((_check_finite(+ck, "zeta_taylor_at_one"), +est))
    return out


_ZETA_INT_CACHE: dict[tuple[int, int], mpmath.mpf] = {}


def zeta_at_integer(k: int, cfg: ZetaEvalConfig = ZetaEvalConfig()) -> mpmath.mpf:
    """zeta(k) for integer k >= 2 via the house evaluator, cached per
    (k, working_digits); the repeated ingredient of the Li formulas."""
    if k < 2:
        raise ValueError("zeta_at_integer requires k >= 2")
    key = (k, cfg.working_digits)
    v = _ZETA_INT_CACHE.get(key)
    if v is None:
        v = mp.re(zeta(k, cfg))
        _ZETA_INT_CACHE[key] = v
    return v


# ---------------------------------------------------------------------------
# Completed xi

def xi(s, cfg: ZetaEvalConfig = ZetaEvalConfig()) -> mpmath.mpc:
    """The completed xi(s) = s(s-1) pi^(-s/2) Gamma(s/2) zeta(s) / 2, entire.

    Computed as ``pi^(-s/2) * Gamma(s/2 + 1) * [(s-1) zeta(s)]`` with the
    removable point s = 1 absorbed by ``(s-1) zeta(s) = 1 + (s-1)(zeta - pole)``;
    Re s < 1/2 is reflected through xi(s) = xi(1-s), so the Gamma-pole points
    s = 0, -2, -4, ... are never evaluated directly.
    """
    with mp.workdps(cfg.working_digits + 10):
        sz = mp.mpc(s)
        if mp.re(sz) < 0.5:
            sz = 1 - sz
    zmp = zeta_minus_pole(sz, cfg)
    with mp.workdps(cfg.working_digits + 10):
        s_zeta = 1 + (sz - 1) * zmp  # (s-1) * zeta(s)
        out = mp.power(mp.pi, -sz / 2) * mp.gamma(sz / 2 + 1) * s_zeta
        return _check_finite(out, "xi")
