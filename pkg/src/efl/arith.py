"""Prime-side arithmetic: the Lambda sieve, Chebyshev psi, truncated
prime-power expectations, and the slowly convergent limit sums that shadow
the Laurent coefficients.

Exact integer logic (smallest-prime-factor sieve, prime-power marking) runs
before any floating point; each prime's log is computed once and reused for
all its powers, so equal weights are bit-identical and sums reproducible.
Summation is ascending-n with the fixed pairwise blocking from
:mod:`efl.summation`.

The truncated quantities here converge too slowly to be authoritative (the
contour route in :mod:`efl.liweil` is); they serve as independent
consistency witnesses, which is exactly how the tests use them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import TYPE_CHECKING, Callable

import numpy as np

from .errors import DigestMismatch, LimitTooLarge, ParseError, TableTooSmall
from .summation import pairwise_sum_blocked

if TYPE_CHECKING:  # pragma: no cover
    from .testfn import TestFunction

__all__ = [
    "VonMangoldtTable",
    "AtomicDensity",
    "PrimeExpectation",
    "sieve",
    "psi_arith",
    "prime_expectation",
    "eta_limit_partial",
    "stieltjes_partial",
    "save_table",
    "load_table",
]

#: Hard sieve ceiling (no segmented sieve beyond this).
MAX_SIEVE_LIMIT = 10 ** 8

_CACHE_MAGIC = b"VMT1"


@dataclass(frozen=True)
class VonMangoldtTable:
    """Mangoldt weights for 1 <= n <= limit.

    ``weights`` has length ``limit + 1`` with index 0 unused (0.0), so that
    ``weights[n]`` is log q when n = q^k and 0 otherwise.
    """

    limit: int
    weights: np.ndarray

    def __post_init__(self):
        if self.weights.shape != (self.limit + 1,):
            raise ValueError("weights must have length limit + 1")

    def psi_full(self) -> float:
        """psi(limit) = sum of all weights."""
        return float(pairwise_sum_blocked(self.weights[1:]))


@dataclass(frozen=True)
class AtomicDensity:
    """The discrete density: an atom of weight Lambda(n) at t = log n.

    Locations are strictly increasing and every weight is positive; entries
    with Lambda(n) = 0 are simply absent.
    """

    locations: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.locations.shape != self.weights.shape:
            raise ValueError("locations and weights must have equal length")
        if self.locations.size and (
            np.any(np.diff(self.locations) <= 0) or self.locations[0] < 0
        ):
            raise ValueError("atom locations must be nonnegative, strictly increasing")
        if np.any(self.weights <= 0):
            raise ValueError("atom weights must be positive")

    @classmethod
    def from_table(cls, table: VonMangoldtTable) -> "AtomicDensity":
        n = np.nonzero(table.weights)[0]
        return cls(locations=np.log(n.astype(np.float64)),
                   weights=table.weights[n])


def sieve(N: int, memory_budget: int = MAX_SIEVE_LIMIT) -> VonMangoldtTable:
    """Build the Mangoldt table up to N with a smallest-prime-factor sieve.

    O(N log log N) time, O(N) space.  Raises :class:`LimitTooLarge` beyond
    ``memory_budget``.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    if N > min(memory_budget, MAX_SIEVE_LIMIT):
        raise LimitTooLarge(f"sieve limit {N} exceeds budget")
    weights = np.zeros(N + 1, dtype=np.float64)
    if N < 2:
        return VonMangoldtTable(limit=N, weights=weights)
    spf = np.zeros(N + 1, dtype=np.int32)
    for i in range(2, math.isqrt(N) + 1):
        if spf[i] == 0:
            block = spf[i * i:: i]
            block[block == 0] = i
    primes = np.nonzero(spf[2:] == 0)[0].astype(np.int64) + 2
    # one log per prime; powers reuse the same float
    weights[primes] = np.log(primes.astype(np.float64))
    for q in primes[primes <= math.isqrt(N)]:
        q = int(q)
        lq = weights[q]
        pk = q * q
        while pk <= N:
            weights[pk] = lq
            pk *= q
    return VonMangoldtTable(limit=N, weights=weights)


def psi_arith(x: float, table: VonMangoldtTable) -> float:
    """Chebyshev psi(x) = sum_{n <= x} Lambda(n); 0 for x < 2.

    Right-continuous step function; jumps of size log q at prime powers.
    """
    if x < 0:
        raise ValueError("x must be >= 0")
    if x > table.limit:
        raise TableTooSmall(f"x = {x} beyond sieve limit {table.limit}")
    m = int(math.floor(x))
    if m < 2:
        return 0.0
    return float(pairwise_sum_blocked(table.weights[1:m + 1]))


@dataclass(frozen=True)
class PrimeExpectation:
    """Truncated prime-side expectation sum_{n<=N} Lambda(n) n^-s g(log n).

    ``formal_divergent`` marks results where the defining limit does not
    converge (Re s <= 1 + growth abscissa of g); the truncated value is still
    reported, never silently dropped, and downstream consumers must branch on
    the flag.  ``tail_estimate`` is the crude smooth-density continuation of
    the sum past the table limit (0 when formal).
    """

    value: complex
    tail_estimate: complex
    formal_divergent: bool
    terms_used: int
    s: complex

    @property
    def corrected(self) -> complex:
        """Truncated value plus tail estimate (meaningful when convergent)."""
        return self.value + self.tail_estimate


def _expectation_tail(g: "TestFunction", s: complex, L: float) -> complex:
    """integral_L^inf e^((1-s)u) g(u) du, the density-1 tail heuristic."""
    from scipy.integrate import quad

    def integrand(u: float, part: Callable[[complex], float]) -> float:
        return part(np.exp((1 - s) * u) * g.time_eval(u))

    re, _ = quad(integrand, L, np.inf, args=(np.real,), limit=200)
    im, _ = quad(integrand, L, np.inf, args=(np.imag,), limit=200)
    return complex(re, im)


def prime_expectation(
    g: "TestFunction", s: complex, table: VonMangoldtTable
) -> PrimeExpectation:
    """Expectation of e^(-st) g(t) against the atomic prime-power density,
    truncated at the table limit.

    Convergence requires Re s > 1 + abscissa(g); outside that region the
    result is flagged formal.
    """
    s = complex(s)
    density = AtomicDensity.from_table(table)
    t = density.locations
    gt = np.asarray(g.time_eval(t), dtype=np.float64)
    terms = density.weights * np.exp(-s * t) * gt
    value = complex(pairwise_sum_blocked(terms))
    convergent = s.real > 1 + g.transform_abscissa
    tail = 0j
    if convergent:
        tail = _expectation_tail(g, s, math.log(table.limit))
    return PrimeExpectation(
        value=value,
        tail_estimate=tail,
        formal_divergent=not convergent,
        terms_used=int(t.size),
        s=s,
    )


def eta_limit_partial(k: int, x: float, table: VonMangoldtTable) -> float:
    """sum_{n<=x} Lambda(n) (log n)^k / n - (log x)^(k+1)/(k+1).

    The bracketed quantity whose x -> inf limit is (-1)^k k! eta_k.  Exact
    truncated value, no extrapolation; convergence in x is slow
    (O(x^(-1/2)) scale oscillations), so tolerances on top of this are
    calibrated empirically by the tests.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if not 2 <= x <= table.limit:
        if x > table.limit:
            raise TableTooSmall(f"x = {x} beyond sieve limit {table.limit}")
        raise ValueError("x must be >= 2")
    m = int(math.floor(x))
    n = np.nonzero(table.weights[: m + 1])[0]
    logn = np.log(n.astype(np.float64))
    terms = table.weights[n] * logn ** k / n
    partial = float(pairwise_sum_blocked(terms))
    lx = math.log(x)
    return partial - lx ** (k + 1) / (k + 1)


def stieltjes_partial(k: int, x: float) -> float:
    """sum_{n<=x} (log n)^k / n - (log x)^(k+1)/(k+1), truncated at x.

    The x -> inf limit is the Stieltjes constant gamma_k in the standard
    normalization, i.e. the Laurent coefficients of zeta at 1 are
    (-1)^k gamma_k / k! (gamma_0 = 0.5772..., gamma_1 = -0.0728158...).
    No tail correction is applied here.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if x < 1:
        raise ValueError("x must be >= 1")
    m = int(math.floor(x))
    n = np.arange(1, m + 1, dtype=np.float64)
    logn = np.log(n)
    powed = logn ** k  # 0**0 = 1 covers the n = 1, k = 0 term
    partial = float(pairwise_sum_blocked(powed / n))
    lx = math.log(x)
    return partial - lx ** (k + 1) / (k + 1)


# ---------------------------------------------------------------------------
# Binary cache: magic "VMT1", little-endian uint64 N, N float64 weights[1..N]

def save_table(table: VonMangoldtTable, path: str | Path) -> None:
    path = Path(path)
    with open(path, "wb") as fh:
        fh.write(_CACHE_MAGIC)
        fh.write(np.uint64(table.limit).tobytes())
        fh.write(table.weights[1:].astype("<f8").tobytes())


def load_table(path: str | Path) -> VonMangoldtTable:
    """Load a cached table; validates the checksum region against a fresh
    sieve of min(N, 1e4) (identical construction => bit-identical sums)."""
    path = Path(path)
    raw = path.read_bytes()
    if raw[:4] != _CACHE_MAGIC:
        raise ParseError(f"{path} is not a VMT1 cache")
    n = int(np.frombuffer(raw[4:12], dtype="<u8")[0])
    body = np.frombuffer(raw[12:], dtype="<f8")
    if body.size != n:
        raise ParseError(f"{path}: expected {n} weights, found {body.size}")
    weights = np.zeros(n + 1, dtype=np.float64)
    weights[1:] = body
    table = VonMangoldtTable(limit=n, weights=weights)
    m = min(n, 10 ** 4)
    expected = psi_arith(m, sieve(m))
    actual = psi_arith(m, table)
    if actual != expected:
        raise DigestMismatch(
            f"{path}: psi({m}) = {actual!r} does not match recomputed {expected!r}"
        )
    return table
