"""Acquire, validate, persist and serve ordinates of nontrivial zeta zeros.

Only ordinates (imaginary parts above the real axis) are stored; the zeros
themselves are materialized as rho = 1/2 + i*gamma at use sites when the
``on_critical_line`` assumption flag is set.  That flag is an explicit,
honest assumption: with ordinate-only data nothing off the line can be
represented, and every report carries the flag.

Every :class:`ZeroSet`, from whatever source, passes the same validation:
strict monotonicity, first ordinate > 14, and count-vs-estimate agreement
within +/-2 against (T/2pi) log(T/(2pi e)) + 7/8 for every height up to
``max_height``.

Local zero finding brackets sign changes of the Hardy Z function
Z(t) = e^(i theta(t)) zeta(1/2 + it) built on the Euler-Maclaurin evaluator
(no Riemann-Siegel main sum here; desk-scale heights do not need it) and
refines by bisection.
"""

from __future__ import annotations

import hashlib
import math
import urllib.request
from dataclasses import dataclass
from pathlib import Path

import mpmath
import numpy as np
from mpmath import mp

from . import zetacore
from .errors import (
    CountMismatch,
    DigestMismatch,
    EmptyZeroSet,
    MissedZero,
    MonotonicityViolation,
    NetworkError,
    ParseError,
)
from .zetacore import ZetaEvalConfig

__all__ = [
    "ZeroSet",
    "count_estimate",
    "load_zeros",
    "find_zeros",
    "fetch_zeros",
    "hardy_theta",
    "hardy_z",
    "bundled_zero_table",
]

TWO_PI = 2.0 * math.pi
#: Max |count - estimate| tolerated by validation (the estimate omits the
#: bounded argument term; its swing stays well inside 2 at desk heights).
COUNT_SLACK = 2.0
#: find_zeros supports at most this many ordinates (height ~1420).
MAX_FIND_COUNT = 500


def count_estimate(T: float) -> float:
    """Expected number of zeros with ordinate below T:
    (T/2pi) log(T/(2pi e)) + 7/8, valid for T > 2pi."""
    if T <= TWO_PI:
        raise ValueError("count_estimate requires T > 2*pi")
    x = T / TWO_PI
    return x * math.log(x / math.e) + 0.875


def _validate(ordinates: np.ndarray, max_height: float) -> None:
    if ordinates.size == 0:
        raise EmptyZeroSet("zero set has no ordinates")
    diffs = np.diff(ordinates)
    if np.any(diffs <= 0):
        idx = int(np.argmax(diffs <= 0))
        raise MonotonicityViolation(
            f"ordinates not strictly increasing at entry {idx + 2}",
            line_number=idx + 2,
        )
    if ordinates[0] <= 14:
        raise CountMismatch(
            "first ordinate must exceed 14",
            height=float(ordinates[0]), expected=0.0, actual=1,
        )
    # count below T deviates from the estimate by < COUNT_SLACK for every
    # T <= max_height; on (gamma_j, gamma_(j+1)] the count is constant = j+1,
    # so checking interval endpoints bounds the whole sweep
    heights = np.concatenate([ordinates, [max(max_height, ordinates[-1])]])
    est = np.array([count_estimate(t) if t > TWO_PI else 0.0 for t in heights])
    counts = np.arange(1, ordinates.size + 1)
    dev_right = np.abs(counts - est[1:])       # T -> gamma_(j+1) from below
    dev_left = np.abs(counts - 1 - est[:-1])   # T -> gamma_j from above
    worst = int(np.argmax(np.maximum(dev_left, dev_right)))
    dev = max(dev_left[worst], dev_right[worst])
    if dev >= COUNT_SLACK:
        T = float(heights[worst + 1] if dev_right[worst] >= dev_left[worst]
                  else heights[worst])
        raise CountMismatch(
            f"zero count near T = {T:.3f} deviates from the estimate by "
            f"{dev:.2f} (allowed < {COUNT_SLACK})",
            height=T,
            expected=float(count_estimate(T)),
            actual=int(counts[worst]),
        )


@dataclass(frozen=True)
class ZeroSet:
    """Ascending ordinates gamma_j of nontrivial zeros, with provenance.

    ``on_critical_line`` records the assumption under which rho = 1/2 + i*gamma
    is materialized; it is propagated into every downstream report.
    """

    ordinates: np.ndarray
    source: str  # "file" | "computed" | "fetched"
    on_critical_line: bool
    max_height: float

    def __post_init__(self):
        if self.source not in ("file", "computed", "fetched"):
            raise ValueError(f"unknown source {self.source!r}")
        _validate(self.ordinates, self.max_height)

    def __len__(self) -> int:
        return int(self.ordinates.size)

    def count_below(self, T: float) -> int:
        return int(np.searchsorted(self.ordinates, T, side="left"))

    def first(self, n: int) -> "ZeroSet":
        """The subset of the first n ordinates (n <= len)."""
        if n < 1 or n > len(self):
            raise ValueError(f"need 1 <= n <= {len(self)}")
        ords = self.ordinates[:n].copy()
        return ZeroSet(ords, self.source, self.on_critical_line,
                       max_height=float(ords[-1]))

    def rhos(self) -> np.ndarray:
        """The zeros 1/2 + i*gamma as complex128 (requires the line flag)."""
        if not self.on_critical_line:
            raise ValueError("rho materialization requires on_critical_line")
        return 0.5 + 1j * self.ordinates


# ---------------------------------------------------------------------------
# File format: UTF-8, one decimal ordinate per line, ascending, no header,
# LF endings; one trailing blank line permitted.

def load_zeros(path: str | Path) -> ZeroSet:
    path = Path(path)
    raw = path.read_bytes()
    if b"\r" in raw:
        raise ParseError(f"{path}: CR byte found; the format requires LF endings")
    text = raw.decode("utf-8")
    lines = text.split("\n")
    while lines and lines[-1] == "":
        lines.pop()
    values = np.empty(len(lines), dtype=np.float64)
    for i, line in enumerate(lines):
        try:
            values[i] = float(line)
        except ValueError:
            raise ParseError(
                f"{path}:{i + 1}: not a decimal ordinate: {line!r}",
                line_number=i + 1,
            ) from None
    if values.size == 0:
        raise ParseError(f"{path}: no ordinates found")
    diffs = np.diff(values)
    if np.any(diffs <= 0):
        bad = int(np.argmax(diffs <= 0)) + 2
        raise MonotonicityViolation(
            f"{path}:{bad}: ordinate does not increase", line_number=bad
        )
    return ZeroSet(
        ordinates=values,
        source="file",
        on_critical_line=True,
        max_height=float(values[-1]),
    )


def bundled_zero_table() -> Path | None:
    """Path of the zero table shipped with the package, if present."""
    p = Path(__file__).parent / "data" / "zeros_100k.txt"
    return p if p.exists() else None


# ---------------------------------------------------------------------------
# Hardy Z and local zero finding

def hardy_theta(t: float, cfg: ZetaEvalConfig = ZetaEvalConfig(working_digits=20)):
    """theta(t) = Im log Gamma(1/4 + it/2) - (t/2) log pi (Stirling-backed)."""
    with mp.workdps(cfg.working_digits + 10):
        z = mp.mpc(0.25, 0.5 * t)
        return mp.im(mp.loggamma(z)) - (mp.mpf(t) / 2) * mp.log(mp.pi)


def hardy_z(t: float, cfg: ZetaEvalConfig = ZetaEvalConfig(working_digits=20)) -> float:
    """The real-valued Hardy function Z(t) = e^(i theta(t)) zeta(1/2 + it);
    sign changes locate zeros on the critical line."""
    th = hardy_theta(t, cfg)
    z = zetacore.zeta(mpmath.mpc(0.5, t), cfg)
    with mp.workdps(cfg.working_digits + 10):
        val = mp.expjpi(th / mp.pi) * z
        return float(mp.re(val))


def _mean_gap(T: float) -> float:
    return TWO_PI / math.log(max(T, 20.0) / TWO_PI)


def _scan_brackets(z, t0: float, needed: int, step_divisor: float = 5.0):
    """March z(t) upward from t0 collecting sign-change brackets until
    ``needed`` are found; returns (brackets, last_t, last_sign_t)."""
    brackets = []
    t = t0
    f = z(t)
    while len(brackets) < needed:
        step = min(0.5, _mean_gap(t) / step_divisor)
        t2 = t + step
        f2 = z(t2)
        if f == 0.0:
            brackets.append((t - 1e-9, t + 1e-9))
        elif f * f2 < 0:
            brackets.append((t, t2))
        t, f = t2, f2
    return brackets, t


def _bisect(z, lo: float, hi: float, tol: float = 5e-11) -> float:
    flo = z(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fmid = z(mid)
        if fmid == 0.0:
            return mid
        if flo * fmid < 0:
            hi = mid
        else:
            lo, flo = mid, fmid
    return 0.5 * (lo + hi)


def find_zeros(
    count: int, cfg: ZetaEvalConfig = ZetaEvalConfig(working_digits=20)
) -> ZeroSet:
    """Locate the first ``count`` ordinates by Hardy-Z sign changes plus
    bisection (refined to ~1e-10).

    Consistency is enforced against the counting estimate evaluated at
    bracket midpoints (where the running count is unambiguous): residual
    drift >= 0.8 triggers a finer rescan of the suspect interval, and a
    persistent deviation >= 1 raises :class:`MissedZero`.
    """
    if not 1 <= count <= MAX_FIND_COUNT:
        raise ValueError(f"count must be in 1..{MAX_FIND_COUNT}")

    def z(t: float) -> float:
        return hardy_z(t, cfg)

    # one extra sign change so the last wanted zero has a midpoint above it
    brackets, _ = _scan_brackets(z, 12.0, count + 1)

    def refine_all(brs):
        return [_bisect(z, lo, hi) for lo, hi in brs]

    ordinates = refine_all(brackets)

    def drift(ords):
        worst, where = 0.0, 0
        for j in range(len(ords) - 1):
            mid = 0.5 * (ords[j] + ords[j + 1])
            dev = abs((j + 1) - count_estimate(mid))
            if dev > worst:
                worst, where = dev, j
        return worst, where

    worst, where = drift(ordinates)
    if worst >= 0.8:
        # rescan the suspect span at a much finer step and merge
        lo = ordinates[max(0, where - 1)] + 1e-6
        hi = ordinates[min(len(ordinates) - 1, where + 2)] - 1e-6
        rescued = refine_all(_rescan(z, lo, hi))
        merged: list[float] = []
        for v in sorted(ordinates + rescued):
            if not merged or v - merged[-1] > 1e-6:
                merged.append(v)
        ordinates = merged[: count + 1]
        worst, _ = drift(ordinates)
        if worst >= 1.0:
            raise MissedZero(
                f"count near ordinate {ordinates[where]:.3f} deviates from the "
                f"estimate by {worst:.2f}"
            )

    ords = np.array(ordinates[:count], dtype=np.float64)
    midpoint = 0.5 * (ordinates[count - 1] + ordinates[count])
    return ZeroSet(
        ordinates=ords,
        source="computed",
        on_critical_line=True,
        max_height=float(midpoint),
    )


def _rescan(z, lo: float, hi: float):
    """Fixed fine-step bracket scan of [lo, hi]."""
    brackets = []
    step = min(0.02, (hi - lo) / 50.0)
    t, f = lo, z(lo)
    while t < hi:
        t2 = min(hi, t + step)
        f2 = z(t2)
        if f * f2 < 0:
            brackets.append((t, t2))
        t, f = t2, f2
    return brackets


# ---------------------------------------------------------------------------
# Fetch-and-cache (content addressed, never mutated in place)

def _download(url: str) -> bytes:
    try:
        with urllib.request.urlopen(url, timeout=60) as resp:
            return resp.read()
    except Exception as exc:  # URLError, HTTPError, socket timeouts
        raise NetworkError(f"download of {url} failed: {exc}") from exc


def fetch_zeros(url: str, cache_dir: str | Path, allow_network: bool = True) -> Path:
    """Download a zero table once and serve it from a content-addressed cache.

    Layout under ``cache_dir``: ``zeros/zeros-<sha256[:16]>.txt`` holds the
    content; ``zeros/by-url/<sha256(url)[:16]>.ref`` maps the URL to the
    content digest.  A warm cache performs no network operations.  Corrupt
    cache content is re-downloaded when the network is permitted, otherwise
    :class:`DigestMismatch` is raised.
    """
    from filelock import FileLock

    cache_dir = Path(cache_dir)
    zdir = cache_dir / "zeros"
    refdir = zdir / "by-url"
    refdir.mkdir(parents=True, exist_ok=True)
    urlkey = hashlib.sha256(url.encode("utf-8")).hexdigest()[:16]
    ref = refdir / f"{urlkey}.ref"

    with FileLock(str(zdir / f".lock-{urlkey}")):
        if ref.exists():
            digest = ref.read_text().strip()
            target = zdir / f"zeros-{digest[:16]}.txt"
            if target.exists():
                actual = hashlib.sha256(target.read_bytes()).hexdigest()
                if actual == digest:
                    return target
                if not allow_network:
                    raise DigestMismatch(
                        f"{target} content digest {actual[:16]} != recorded "
                        f"{digest[:16]} and re-download is disabled"
                    )
                target.unlink()
        if not allow_network:
            raise NetworkError("network use disabled and cache is cold")
        payload = _download(url)
        digest = hashlib.sha256(payload).hexdigest()
        target = zdir / f"zeros-{digest[:16]}.txt"
        tmp = target.with_suffix(".tmp")
        tmp.write_bytes(payload)
        tmp.replace(target)
        tmp_ref = ref.with_suffix(".tmpref")
        tmp_ref.write_text(digest)
        tmp_ref.replace(ref)
        return target
