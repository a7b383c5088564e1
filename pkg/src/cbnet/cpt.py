"""Closed-form conditional probability table estimation for one clique.

The estimator enumerates all 2^M parent patterns as rows of a condition
matrix, matches every frame against every pattern with a floored-average
indicator, and reduces the counts to empirical conditionals with a single
pair of matrix products.  A slow per-frame counting oracle is provided for
testing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DimensionError, EmptyInputError, ShapeMismatchError

DEFAULT_EPS = 1e-3
M_MAX = 20

#: sentinel for oracle entries whose parent pattern never occurs
UNDEFINED = -1.0

# Frame-count chunk for the matmul; keeps the 2^M x K indicator block small.
_CHUNK = 4096


@dataclass(frozen=True)
class ConditionMatrix:
    """2^M x M enumeration of parent patterns, row x = binary of x (MSB first)."""

    M: int
    rows: np.ndarray = field(repr=False)


@dataclass(frozen=True)
class CliqueCPT:
    """Empirical P(child_i = 1 | parent pattern x) with pattern counts.

    B is 2^M x M with entries clamped to [eps, 1-eps]; rows whose pattern
    never occurs hold the uninformative default 0.5.
    """

    M: int
    B: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    eps: float = DEFAULT_EPS
    #: pre-clamp conditionals (unseen rows still 0.5); kept for oracle checks
    B_raw: np.ndarray | None = field(default=None, repr=False)


def condition_matrix(M: int) -> ConditionMatrix:
    """All 2^M parent patterns; row x is the M-bit binary encoding of x."""
    if not 1 <= M <= M_MAX:
        raise DimensionError(f"sensor count {M} outside [1, {M_MAX}]")
    x = np.arange(2**M, dtype=np.int64)[:, None]
    shifts = np.arange(M - 1, -1, -1, dtype=np.int64)[None, :]
    return ConditionMatrix(M=M, rows=((x >> shifts) & 1).astype(np.int8))


def _check_pair(parent, child) -> tuple[np.ndarray, np.ndarray]:
    parent = np.asarray(parent)
    child = np.asarray(child)
    if parent.ndim == 1:
        parent = parent[None, :]
    if child.ndim == 1:
        child = child[None, :]
    if parent.shape != child.shape:
        raise ShapeMismatchError(
            f"parent shape {parent.shape} != child shape {child.shape}"
        )
    if parent.size == 0 or parent.shape[1] == 0:
        raise EmptyInputError("no frame pairs supplied")
    return parent.astype(np.int64), child.astype(np.int64)


def match_indicator(C: np.ndarray, parent: np.ndarray) -> np.ndarray:
    """Floored-average pattern match: nom[x, k] = 1 iff frame k equals row x.

    Computed literally as floor((C @ P + (1-C) @ (1-P)) / M).  The matrix
    products run in float64 for speed; every intermediate is an integer
    no larger than M, so the values are exact and the floor is bit-identical
    to pure integer arithmetic.
    """
    M = C.shape[1]
    Cf = C.astype(np.float64)
    Pf = parent.astype(np.float64)
    agree = Cf @ Pf + (1.0 - Cf) @ (1.0 - Pf)
    return (np.rint(agree).astype(np.int64)) // M


def _assemble(M: int, num: np.ndarray, counts: np.ndarray, eps: float) -> CliqueCPT:
    raw = np.full((2**M, M), 0.5)
    seen = counts > 0
    raw[seen] = num[seen] / counts[seen, None]
    B = raw.copy()
    B[seen] = np.clip(B[seen], eps, 1.0 - eps)
    return CliqueCPT(M=M, B=B, counts=counts, eps=eps, B_raw=raw)


def _counts_floored(parent: np.ndarray, child: np.ndarray):
    """Pattern counts via the literal floored-average match indicator.

    Expanding the elementwise (1-C)(1-P) product gives
    agree = M - rowsum(C) - colsum(P) + 2 C@P, one matrix product instead
    of two.  All intermediates are integers bounded by M, held exactly in
    float64, so this is bit-identical to match_indicator (asserted in the
    test suite).
    """
    M, K = parent.shape
    Cf = condition_matrix(M).rows.astype(np.float64)
    c_rowsum = Cf.sum(axis=1)
    counts = np.zeros(2**M, dtype=np.int64)
    num = np.zeros((2**M, M), dtype=np.float64)
    for lo in range(0, K, _CHUNK):
        hi = min(lo + _CHUNK, K)
        Pf = parent[:, lo:hi].astype(np.float64)
        agree = 2.0 * (Cf @ Pf) + (M - c_rowsum)[:, None] - Pf.sum(axis=0)[None, :]
        nom = np.floor(agree / M)  # exact: agree == M iff a full match
        counts += np.rint(nom.sum(axis=1)).astype(np.int64)
        num += nom @ child[:, lo:hi].astype(np.float64).T
    return np.rint(num).astype(np.int64), counts


def _counts_indexed(parent: np.ndarray, child: np.ndarray):
    """Pattern counts via direct condition-index histograms.

    Encodes every frame's parent column as its condition index and tallies
    with bincount.  Produces integer counts identical to _counts_floored at
    a fraction of the cost; used by the benchmark pipeline.
    """
    M, K = parent.shape
    weights = np.left_shift(1, np.arange(M - 1, -1, -1, dtype=np.int64))
    idx = weights @ parent
    counts = np.bincount(idx, minlength=2**M)
    num = np.empty((2**M, M), dtype=np.int64)
    for i in range(M):
        num[:, i] = np.rint(
            np.bincount(idx, weights=child[i].astype(np.float64), minlength=2**M)
        ).astype(np.int64)
    return num, counts


def bbcpt(parent, child, eps: float = DEFAULT_EPS, method: str = "floored") -> CliqueCPT:
    """Closed-form empirical CPT of one clique from binary frame matrices.

    parent and child are M x K arrays; column k holds the joint sensor
    values at the two ends of frame pair k.  Unseen parent patterns get the
    default 0.5; everything else is clamped to [eps, 1-eps] so downstream
    logarithms stay finite.

    method "floored" evaluates the matrix closed form literally (the
    floored-average match indicator); "indexed" tallies condition indices
    with histograms instead.  Both produce bit-identical tables.
    """
    if not 0 < eps < 0.5:
        raise ValueError(f"eps must lie in (0, 0.5), got {eps}")
    parent, child = _check_pair(parent, child)
    M = parent.shape[0]
    if method == "floored":
        num, counts = _counts_floored(parent, child)
    elif method == "indexed":
        num, counts = _counts_indexed(parent, child)
    else:
        raise ValueError(f"unknown bbcpt method '{method}'")
    return _assemble(M, num, counts, eps)


def counting_oracle(parent, child) -> tuple[np.ndarray, np.ndarray]:
    """Direct per-frame reference for bbcpt (pre-clamp).

    Returns (B_exact, counts) where B_exact[x, i] is the fraction of frames
    with parent pattern x whose child_i is 1, or the UNDEFINED sentinel when
    pattern x never occurs.  Deliberately loop-based and independent of the
    matrix path.
    """
    parent, child = _check_pair(parent, child)
    M, K = parent.shape
    rows = 2**M
    counts = np.zeros(rows, dtype=np.int64)
    ones = np.zeros((rows, M), dtype=np.int64)
    for k in range(K):
        x = 0
        for i in range(M):
            x = (x << 1) | int(parent[i, k])
        counts[x] += 1
        for i in range(M):
            ones[x, i] += int(child[i, k])
    B = np.full((rows, M), UNDEFINED)
    for x in range(rows):
        if counts[x] > 0:
            for i in range(M):
                B[x, i] = ones[x, i] / counts[x]
    return B, counts
