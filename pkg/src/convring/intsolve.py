"""Exact integer Smith reduction, used to solve linear systems mod p^r.

Solving A x = b over Z_{p^r} cannot be done by greedy digit elimination
when the mod-p projection is rank deficient, so membership tests go
through the integer Smith form instead: with U A V = S diagonal over the
integers, the diagonal congruences decide solvability outright.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence


def smith_int(data: Sequence[Sequence[int]]):
    """Integer Smith reduction: returns (U, S, V) with U A V = S diagonal.

    U and V are unimodular integer matrices; S is returned as the full
    diagonalized matrix.  Classical pivoting on minimal absolute value.
    """
    S = [list(r) for r in data]
    m = len(S)
    n = len(S[0]) if m else 0
    U = [[int(i == j) for j in range(m)] for i in range(m)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        if i != j:
            S[i], S[j] = S[j], S[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        if i != j:
            for row in S:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]

    def row_addmul(i, j, f):
        if f:
            S[i] = [a + f * b for a, b in zip(S[i], S[j])]
            U[i] = [a + f * b for a, b in zip(U[i], U[j])]

    def col_addmul(i, j, f):
        if f:
            for row in S:
                row[i] += f * row[j]
            for row in V:
                row[i] += f * row[j]

    t = 0
    limit = min(m, n)
    while t < limit:
        pi = pj = -1
        best = None
        for i in range(t, m):
            for j in range(t, n):
                v = abs(S[i][j])
                if v and (best is None or v < best):
                    best = v
                    pi, pj = i, j
        if best is None:
            break
        swap_rows(t, pi)
        swap_cols(t, pj)
        dirty = True
        while dirty:
            dirty = False
            for i in range(t + 1, m):
                if S[i][t]:
                    q = S[i][t] // S[t][t]
                    row_addmul(i, t, -q)
                    if S[i][t]:
                        swap_rows(t, i)
                        dirty = True
            for j in range(t + 1, n):
                if S[t][j]:
                    q = S[t][j] // S[t][t]
                    col_addmul(j, t, -q)
                    if S[t][j]:
                        swap_cols(t, j)
                        dirty = True
            if dirty:
                continue
            for i in range(t + 1, m):
                done = False
                for j in range(t + 1, n):
                    if S[i][j] % S[t][t]:
                        row_addmul(t, i, 1)
                        dirty = True
                        done = True
                        break
                if done:
                    break
        if S[t][t] < 0:
            S[t] = [-a for a in S[t]]
            U[t] = [-a for a in U[t]]
        t += 1
    return U, S, V


def solve_mod(data: Sequence[Sequence[int]], b: Sequence[int], modulus: int):
    """One solution of A x = b (mod modulus), or None when inconsistent."""
    m = len(data)
    n = len(data[0]) if m else 0
    if m == 0:
        return [0] * n
    U, S, V = smith_int(data)
    c = [sum(U[i][j] * b[j] for j in range(m)) % modulus for i in range(m)]
    y = [0] * n
    for i in range(min(m, n)):
        s = S[i][i]
        if s == 0:
            if c[i] % modulus:
                return None
            continue
        g = gcd(s, modulus)
        if c[i] % g:
            return None
        sub = modulus // g
        y[i] = ((c[i] // g) * pow((s // g) % sub, -1, sub)) % sub if sub > 1 else 0
    for i in range(min(m, n), m):
        if c[i] % modulus:
            return None
    x = [sum(V[i][j] * y[j] for j in range(n)) % modulus for i in range(n)]
    for row, bi in zip(data, b):
        if (sum(a * v for a, v in zip(row, x)) - bi) % modulus:
            raise AssertionError("integer Smith solve produced a non-solution")
    return x
