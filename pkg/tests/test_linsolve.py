import itertools
import random

import pytest

from convring import AffineSet, ConstMatrix, RingContext, mccoy_unique, solve_mod_p
from convring.linsolve import rank_mod_p

Z8 = RingContext(2, 3)
Z9 = RingContext(3, 2)
Z4 = RingContext(2, 2)

# stage-0 window system of the length-5 example over Z_8, reduced mod 2
STAGE0_ROWS = [
    [1, 1, 1, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 0],
    [1, 0, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0],
    [0, 0, 1, 0, 0, 0, 0],
    [0, 1, 0, 1, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 1],
    [0, 0, 1, 1, 1, 0, 1],
    [0, 0, 0, 1, 0, 1, 1],
]
STAGE0_RHS = [1, 0, 1, 1, 0, 1, 0, 0, 1]

STAGE1_ROWS = [
    [1, 1, 1, 0, 0, 0, 0],
    [0, 1, 1, 0, 0, 0, 0],
    [0, 0, 0, 1, 0, 0, 0],
    [1, 1, 0, 0, 1, 1, 1],
    [0, 0, 1, 1, 1, 0, 1],
]
STAGE1_RHS = [0, 0, 1, 1, 1]


def test_stage0_unique_solution():
    s = solve_mod_p(STAGE0_ROWS, STAGE0_RHS, 2)
    assert s.feasible
    assert s.particular == (1, 0, 0, 1, 1, 0, 0)
    assert s.basis == ()
    assert s.size == 1


def test_stage1_two_parameter_family():
    s = solve_mod_p(STAGE1_ROWS, STAGE1_RHS, 2)
    assert s.size == 4
    expected = {
        (0, 0, 0, 1, 0, 1, 0),
        (0, 1, 1, 1, 1, 1, 0),
        (0, 1, 1, 1, 0, 1, 1),
        (0, 0, 0, 1, 1, 1, 1),
    }
    assert set(s.points()) == expected


def test_zero_system_full_space():
    s = solve_mod_p([[0, 0], [0, 0]], [0, 0], 3)
    assert s.size == 9
    assert len(s.basis) == 2


def test_infeasible_is_a_value():
    s = solve_mod_p([[0, 0]], [1], 2)
    assert not s.feasible
    assert s.size == 0


@pytest.mark.parametrize("seed", range(10))
def test_all_points_solve_and_size_law(seed):
    rng = random.Random(seed)
    p = rng.choice([2, 3])
    m, n = rng.randrange(1, 5), rng.randrange(1, 5)
    A = [[rng.randrange(p) for _ in range(n)] for _ in range(m)]
    x0 = [rng.randrange(p) for _ in range(n)]
    b = [sum(a * x for a, x in zip(row, x0)) % p for row in A]
    s = solve_mod_p(A, b, p)
    assert s.feasible
    assert s.size == p ** (n - rank_mod_p(A, p))
    assert s.size <= 4096
    pts = list(s.points())
    assert len(pts) == s.size
    for pt in pts:
        assert all(sum(a * x for a, x in zip(row, pt)) % p == bi for row, bi in zip(A, b))
    assert s.contains(x0)


def test_affine_set_canonical_equality():
    a = AffineSet(2, 3, True, (1, 0, 0), ((0, 1, 0), (0, 0, 1)))
    b = AffineSet(2, 3, True, (1, 1, 1), ((0, 1, 1), (0, 0, 1)))
    assert a.same_set(b)
    c = AffineSet(2, 3, True, (0, 0, 0), ((0, 1, 0),))
    assert not a.same_set(c)


def test_mccoy_golden():
    assert mccoy_unique(ConstMatrix.identity(Z8, 3))
    assert not mccoy_unique(ConstMatrix(Z8, [[2]]))


@pytest.mark.parametrize("ctx", [Z4, Z8, Z9])
def test_mccoy_matches_bruteforce(ctx):
    rng = random.Random(ctx.q)
    for _ in range(25):
        m = rng.randrange(1, 5)
        n = rng.randrange(1, 13 // max(m, 1))
        if m * n > 12:
            continue
        A = ConstMatrix(ctx, [[rng.randrange(ctx.q) for _ in range(n)] for _ in range(m)])
        if rng.random() < 0.4 and n >= 1:
            # plant a p-divisible column
            col = rng.randrange(n)
            data = [list(r) for r in A.data]
            for i in range(m):
                data[i][col] = (data[i][col] * ctx.p) % ctx.q
            A = ConstMatrix(ctx, data)
        # brute force: unique solutions of consistent systems means a trivial kernel
        kernel_trivial = True
        for xs in itertools.product(range(ctx.q), repeat=n):
            if any(xs) and all(v == 0 for v in A.mul_vec(xs)):
                kernel_trivial = False
                break
        assert mccoy_unique(A) == kernel_trivial
