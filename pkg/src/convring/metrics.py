"""Weight and distance computations for layered convolutional codes.

Column distances and the bounded free-distance search enumerate windowed
kernel members by brute force (numpy-accelerated, capped), which keeps
them independent of the decoder.  The erasure-capability checks test
column subsets of the window matrix for linear dependence over Z_{p^r}
and evaluate the weaker mod-p span condition separately, since the latter
is necessary but not sufficient.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import inf
from typing import Iterable, Sequence

import numpy as np

from .codes import ConvCode, sliding_matrix
from .config import enumeration_cap
from .errors import CapExceeded
from .linsolve import rank_mod_p
from .polymat import Poly

_CHUNK = 1 << 14


def hamming_weight(word: Iterable) -> int:
    """Number of nonzero symbol entries in a window or polynomial vector."""
    total = 0
    for item in word:
        if isinstance(item, Poly):
            total += sum(1 for c in item.coeffs if c)
        elif isinstance(item, (list, tuple)):
            total += sum(1 for c in item if c)
        else:
            total += 1 if item else 0
    return total


def _window_solutions(code: ConvCode, j: int, cap: int):
    """Yield (flat window, weight) for every kernel member of the window.

    Enumerates all q^((j+1)n) candidate windows in chunks; raises
    CapExceeded when the space is larger than the cap.
    """
    q = code.ctx.q
    n = code.n
    length = (j + 1) * n
    space = q**length
    if space > cap:
        raise CapExceeded(f"window enumeration {q}^{length} exceeds cap {cap}")
    H = np.array(sliding_matrix(code, j).data, dtype=np.int64)
    if H.shape[0] == 0:
        H = np.zeros((0, length), dtype=np.int64)
    for start in range(0, space, _CHUNK):
        stop = min(start + _CHUNK, space)
        idx = np.arange(start, stop, dtype=np.int64)
        cand = np.empty((stop - start, length), dtype=np.int64)
        rem = idx
        for pos in range(length - 1, -1, -1):
            cand[:, pos] = rem % q
            rem = rem // q
        ok = ((cand @ H.T) % q == 0).all(axis=1)
        for row in cand[ok]:
            yield row, int(np.count_nonzero(row))


def column_distance(code: ConvCode, j: int, cap: int | None = None) -> int:
    """Minimum window weight over kernel members with nonzero first symbol.

    Computed from the parity-check window, so for codes without an exact
    kernel this is the kernel-based quantity.
    """
    if code.h_blocks is None:
        raise ValueError("code has no parity side")
    cap = enumeration_cap() if cap is None else cap
    n = code.n
    best = None
    for row, wt in _window_solutions(code, j, cap):
        if not row[:n].any():
            continue
        if best is None or wt < best:
            best = wt
            if best == 1:
                break
    if best is None:
        raise ValueError("no windowed kernel member has a nonzero first symbol")
    assert best >= 1
    return best


def free_distance_bounded(
    code: ConvCode, max_degree: int, cap: int | None = None
) -> tuple[float, bool]:
    """(bound, exact) minimum weight over codewords of input degree <= max_degree.

    The bound is the exact minimum over the searched inputs; exact is True
    when no deeper codeword can weigh less, certified by a column-distance
    lower bound on all continuations.  The zero code yields (inf, True).
    """
    if code.g_blocks is None:
        raise ValueError("code has no generator side")
    cap = enumeration_cap() if cap is None else cap
    ctx = code.ctx
    q = ctx.q
    k = code.k
    if k == 0:
        return inf, True
    width = k * (max_degree + 1)
    space = q**width
    if space > cap:
        raise CapExceeded(f"input enumeration {q}^{width} exceeds cap {cap}")
    best = None
    for flat in range(1, space):
        rem = flat
        inputs = []
        for _ in range(max_degree + 1):
            sym = []
            for _ in range(k):
                sym.append(rem % q)
                rem //= q
            inputs.append(sym)
        stream = code.encode(inputs)
        wt = sum(1 for sym in stream for x in sym if x)
        if wt == 0:
            continue
        if best is None or wt < best:
            best = wt
            if best == 1:
                break
    if best is None:
        return inf, True
    exact = False
    if code.h_blocks is not None:
        try:
            lower = column_distance(code, max_degree, cap=cap)
            exact = best <= lower
        except (CapExceeded, ValueError):
            exact = False
    return best, exact


@dataclass(frozen=True)
class CapabilityReport:
    """Outcome of the erasure-capability equivalences at window j, level d."""

    j: int
    d: int
    independent_ok: bool
    dependent_witness: tuple[int, ...] | None
    span_condition_ok: bool

    @property
    def confirms(self) -> bool:
        return self.independent_ok and self.dependent_witness is not None


def _columns_dependent(cols: Sequence[Sequence[int]], p: int) -> bool:
    """Dependence over Z_{p^r}: some nontrivial combination vanishes.

    Equivalent to the mod-p projection lacking full column rank.
    """
    mat = [[col[i] % p for col in cols] for i in range(len(cols[0]))]
    return rank_mod_p(mat, p) < len(cols)


def erasure_capability(
    code: ConvCode, j: int, d: int, cap: int | None = None
) -> CapabilityReport:
    """Check the window-matrix column conditions behind d-1 erasure recovery.

    independent_ok: every (d-1)-column subset touching the first n columns
    is independent over Z_{p^r}.  dependent_witness: some d-subset touching
    the first n columns that is dependent.  span_condition_ok: no first-n
    column of the mod-p window matrix lies in the span of any other d-2
    columns (necessary, not sufficient).
    """
    if code.h_blocks is None:
        raise ValueError("code has no parity side")
    cap = enumeration_cap() if cap is None else cap
    H = sliding_matrix(code, j)
    p = code.ctx.p
    ncols = H.cols
    n = code.n
    cols = [H.col(c) for c in range(ncols)]

    def touching(size):
        count = 0
        for subset in combinations(range(ncols), size):
            if subset[0] >= n:
                break
            count += 1
            if count > cap:
                raise CapExceeded("column subset enumeration exceeds cap")
            yield subset

    independent_ok = True
    if d >= 2:
        for subset in touching(d - 1):
            if _columns_dependent([cols[c] for c in subset], p):
                independent_ok = False
                break
    dependent_witness = None
    for subset in touching(d):
        if _columns_dependent([cols[c] for c in subset], p):
            dependent_witness = subset
            break
    span_ok = True
    if d >= 2:
        proj = [[x % p for x in col] for col in cols]
        for target in range(n):
            for others in combinations([c for c in range(ncols) if c != target], d - 2):
                mat = [[proj[c][i] for c in others] for i in range(len(cols[0]))]
                aug = [row + [proj[target][i]] for i, row in enumerate(mat)]
                if rank_mod_p(mat, p) == rank_mod_p(aug, p):
                    span_ok = False
                    break
            if not span_ok:
                break
    return CapabilityReport(
        j=j,
        d=d,
        independent_ok=independent_ok,
        dependent_witness=dependent_witness,
        span_condition_ok=span_ok,
    )


@dataclass(frozen=True)
class DistanceReport:
    """Column-distance profile with a bounded free-distance estimate.

    d_free fields are None for kernel-only codes (no generator to
    enumerate inputs from).
    """

    column_distances: dict[int, int]
    d_free_lower: float | None
    d_free_exact: bool


def distance_profile(code: ConvCode, max_j: int, max_degree: int = 2) -> DistanceReport:
    cds = {}
    for j in range(max_j + 1):
        cds[j] = column_distance(code, j)
    if code.g_blocks is None:
        return DistanceReport(column_distances=cds, d_free_lower=None, d_free_exact=False)
    lower, exact = free_distance_bounded(code, max_degree)
    return DistanceReport(column_distances=cds, d_free_lower=lower, d_free_exact=exact)
