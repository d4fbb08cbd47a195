"""Deterministic summation kernels.

All series and zero sums in this package are reduced with a fixed pairwise
tree so results are bit-identical regardless of how callers batch or thread
the work.  Ascending-index order is part of the contract for conditionally
convergent zero sums; callers sort before reducing.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

#: Leaf size at which the pairwise tree bottoms out for ndarray reduction.
#: 4096 keeps the tree shallow while bounding the sequential error growth.
BLOCK = 4096


def pairwise_sum(values: np.ndarray) -> complex | float:
    """Sum a 1-d array with a fixed power-of-two pairwise folding tree.

    The fold pads with zeros up to the next power of two, then repeatedly
    adds element pairs; the reduction order is a pure function of ``len(values)``.
    """
    a = np.asarray(values)
    n = a.shape[0]
    if n == 0:
        return 0.0
    if n == 1:
        return a[0].item()
    m = 1 << (n - 1).bit_length()
    if m != n:
        pad = np.zeros(m - n, dtype=a.dtype)
        a = np.concatenate([a, pad])
    while a.shape[0] > 1:
        a = a[0::2] + a[1::2]
    return a[0].item()


def pairwise_sum_blocked(values: np.ndarray, block: int = BLOCK) -> complex | float:
    """Pairwise-fold each ``block``-sized chunk, then pairwise-fold the partials.

    Equivalent tree to :func:`pairwise_sum` in accuracy class, but the fixed
    block boundary makes chunk-parallel evaluation reproducible: partial sums
    of the same blocks reduce in the same order no matter who computed them.
    """
    a = np.asarray(values)
    n = a.shape[0]
    if n <= block:
        return pairwise_sum(a)
    nblocks = (n + block - 1) // block
    partials = np.empty(nblocks, dtype=a.dtype)
    for i in range(nblocks):
        partials[i] = pairwise_sum(a[i * block:(i + 1) * block])
    return pairwise_sum(partials)


def pairwise_sum_seq(values: Sequence) -> object:
    """Pairwise fold for generic numeric sequences (mpmath mpf/mpc included).

    Recursion splits at the midpoint, so the tree depends only on the length.
    """
    n = len(values)
    if n == 0:
        return 0
    if n == 1:
        return values[0]
    mid = n // 2
    return pairwise_sum_seq(values[:mid]) + pairwise_sum_seq(values[mid:])
