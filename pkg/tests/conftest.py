import random

import pytest

from convring import ConvCode, RingContext


@pytest.fixture(scope="session")
def z8():
    return RingContext(2, 3)


@pytest.fixture(scope="session")
def z9():
    return RingContext(3, 2)


@pytest.fixture(scope="session")
def z4():
    return RingContext(2, 2)


@pytest.fixture(scope="session")
def kernel_code_z8(z8):
    """Length-5 code over Z_8 defined by a degree-2 parity check."""
    h0 = [[1, 1, 1, 1, 1], [0, 0, 2, 0, 2], [4, 4, 0, 4, 4]]
    h1 = [[1, 2, 0, 0, 0], [0, 0, 0, 2, 4], [4, 0, 4, 4, 0]]
    h2 = [[3, 5, 7, 0, 0], [0, 0, 0, 0, 2], [0, 0, 0, 4, 0]]
    return ConvCode.from_parity_coeffs(z8, [h0, h1, h2])


@pytest.fixture(scope="session")
def kernel_code_z9(z9):
    """Length-3 code over Z_9 defined by a degree-1 parity check."""
    h0 = [[1, 0, 3], [0, 1, 3]]
    h1 = [[0, 1, 1], [1, 0, 1]]
    return ConvCode.from_parity_coeffs(z9, [h0, h1])


@pytest.fixture(scope="session")
def nonexact_code_z9(z9):
    """Rank-2 generator over Z_9 whose projected stack is not left prime."""
    return ConvCode.from_generator(z9, [[[1, 1], [1, 1], [1, 1]], [[3], [3], [0]]])


def random_kernel_code(rng: random.Random, ctx: RingContext, n: int, lsizes, deg: int):
    """Random layered parity check with left prime projection, as a code."""
    for _ in range(60):
        try:
            hs = []
            blocks = [
                [
                    [[rng.randrange(ctx.q) for _ in range(deg + 1)] for _ in range(n)]
                    for _ in range(li)
                ]
                for li in lsizes
            ]
            for j in range(deg + 1):
                mat = []
                for lvl, blk in enumerate(blocks):
                    for row in blk:
                        mat.append([(ctx.p**lvl * row[c][j]) % ctx.q for c in range(n)])
                hs.append(mat)
            return ConvCode.from_parity_coeffs(ctx, hs)
        except Exception:
            continue
    return None
