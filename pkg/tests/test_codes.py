import random

import pytest

from convring import (
    ConstructionError,
    ConvCode,
    Poly,
    PolyMatrix,
    RingContext,
    code_member,
    is_codeword_window,
    is_observable,
    module_member,
    preimage,
    rank,
    sliding_matrix,
    synthesize_parity_check,
)

Z8 = RingContext(2, 3)
Z9 = RingContext(3, 2)
Z4 = RingContext(2, 2)
Z2 = RingContext(2, 1)

WORD0 = [5, 5, 0, 6, 0]
WORD1 = [6, 6, 4, 3, 6]
WORD2 = [2, 1, 1, 2, 0]


def scaled_rows(code):
    out = []
    for i, blk in enumerate(code.g_blocks):
        for row in blk.entries:
            out.append([e.scale(code.ctx.p**i) for e in row])
    return out


class TestLayering:
    def test_already_layered_is_kept(self, z8):
        code = ConvCode.from_generator(z8, [[[1], [0], [1, 1]], [[2], [2], [0]]])
        assert code.k_blocks == (1, 1, 0)
        # same row module both ways (scaled rows against raw rows)
        raw = [
            (Poly(z8, [1]), Poly.zero(z8), Poly(z8, [1, 1])),
            (Poly(z8, [2]), Poly(z8, [2]), Poly.zero(z8)),
        ]
        for row in scaled_rows(code):
            assert module_member(z8, raw, row, deg_cap=4, shift_cap=2)
        gens = scaled_rows(code)
        for row in raw:
            assert module_member(z8, gens, list(row), deg_cap=4, shift_cap=2)

    def test_worked_z9_layering(self, nonexact_code_z9, z9):
        code = nonexact_code_z9
        assert code.k_blocks == (1, 1)
        assert code.g_blocks[0].entries[0] == tuple(Poly(z9, [1, 1]) for _ in range(3))
        assert code.g_blocks[1].entries[0] == (
            Poly(z9, [1]),
            Poly(z9, [1]),
            Poly.zero(z9),
        )

    def test_scaled_duplicate_row_absorbed(self, z8):
        code = ConvCode.from_generator(z8, [[[1], [0], [1]], [[2], [0], [2]]])
        assert code.k_blocks == (1, 0, 0)

    def test_fraction_field_dependence_absorbed(self, z4):
        # second row is p/D times the first in the Laurent sense
        code = ConvCode.from_generator(z4, [[[0, 1], [0]], [[2], [0]]])
        assert code.k_blocks == (1, 0)
        stack = code.generator_stack().proj()
        assert rank(stack) == 1

    def test_projected_stack_always_full_rank(self, z8):
        rng = random.Random(11)
        for _ in range(25):
            rows = [
                [[rng.randrange(8) for _ in range(rng.randrange(1, 3))] for _ in range(3)]
                for _ in range(rng.randrange(1, 4))
            ]
            if all(all(all(c == 0 for c in pol) for pol in row) for row in rows):
                continue
            code = ConvCode.from_generator(z8, rows)
            stack = code.generator_stack().proj()
            if stack.rows:
                assert rank(stack) == stack.rows


class TestObservability:
    def test_systematic_is_observable(self, z4):
        code = ConvCode.from_generator(z4, [[[1], [0], [0]], [[0], [1], [0]]])
        assert is_observable(code)

    def test_worked_z9_not_observable(self, nonexact_code_z9):
        assert not is_observable(nonexact_code_z9)

    def test_kernel_code_observable(self, kernel_code_z8):
        assert is_observable(kernel_code_z8)


class TestSynthesis:
    def test_systematic_parity(self):
        code = ConvCode.from_generator(Z2, [[[1], [0], [0]], [[0], [1], [0]]])
        syn = synthesize_parity_check(code)
        assert syn.exact_kernel
        code = code.with_parity_check()
        H = code.parity_matrix()
        assert H.rows == 1
        G = code.generator_matrix()
        prod = H @ G.transpose()
        assert all(e.is_zero for row in prod.entries for e in row)

    def test_nonexact_kernel_contains_code(self, nonexact_code_z9, z9):
        syn = synthesize_parity_check(nonexact_code_z9)
        assert not syn.exact_kernel
        assert all(not g.is_zero for g in syn.p_diag)
        code = nonexact_code_z9.with_parity_check()
        H = code.parity_matrix()
        G = code.generator_matrix()
        prod = H @ G.transpose()
        assert all(e.is_zero for row in prod.entries for e in row)
        # witness: the all-ones word is annihilated yet is not in the code
        ones = PolyMatrix(z9, [[1], [1], [1]])
        assert all(e.is_zero for (e,) in (H @ ones).entries)
        assert not code_member(code, [Poly.const(z9, 1)] * 3, deg_cap=6)

    @pytest.mark.parametrize("seed", range(12))
    def test_random_observable_contracts(self, seed):
        rng = random.Random(600 + seed)
        ctx = rng.choice([Z4, Z8, Z9])
        n = rng.randrange(2, 5)
        code = None
        for _ in range(40):
            rows = [
                [[rng.randrange(ctx.q) for _ in range(rng.randrange(1, 3))] for _ in range(n)]
                for _ in range(rng.randrange(1, n))
            ]
            try:
                cand = ConvCode.from_generator(ctx, rows)
            except ValueError:
                continue
            if cand.k and cand.k < n and is_observable(cand):
                code = cand
                break
        if code is None:
            pytest.skip("no observable sample found")
        code = code.with_parity_check()
        H = code.parity_matrix()
        G = code.generator_matrix()
        prod = H @ G.transpose()
        assert all(e.is_zero for row in prod.entries for e in row)
        hp = code.parity_stack().proj()
        assert rank(hp) == hp.rows
        # random codewords are annihilated and their inputs can be recovered
        for _ in range(3):
            u = [
                [rng.randrange(ctx.q) for _ in range(code.k)]
                for _ in range(rng.randrange(1, 3))
            ]
            stream = code.encode(u)
            word = [
                Poly(ctx, [stream[t][c] for t in range(len(stream))]) for c in range(n)
            ]
            hw = H @ PolyMatrix(ctx, [[e] for e in word])
            assert all(e.is_zero for (e,) in hw.entries)
            assert preimage(code, word) is not None

    def test_degenerate_generator_rejected(self, z4):
        code = ConvCode.from_generator(z4, [[[1], [1]]])
        object.__setattr__(code, "g_blocks", (PolyMatrix.zeros(z4, 0, 2),) * 2)
        object.__setattr__(code, "k_blocks", (0, 0))
        with pytest.raises(ConstructionError):
            synthesize_parity_check(code)


class TestKernelReconstruction:
    def test_block_sizes_from_strata(self, kernel_code_z8):
        assert kernel_code_z8.k_blocks == (2, 1, 1)
        assert kernel_code_z8.l_blocks == (1, 1, 1)
        assert kernel_code_z8.nu == 2

    def test_parity_annihilates_generator(self, kernel_code_z8):
        H = kernel_code_z8.parity_matrix()
        G = kernel_code_z8.generator_matrix()
        prod = H @ G.transpose()
        assert all(e.is_zero for row in prod.entries for e in row)

    def test_z9_kernel_code(self, kernel_code_z9):
        assert kernel_code_z9.k_blocks == (1, 0)
        assert kernel_code_z9.nu == 1


class TestSlidingWindow:
    def test_j0_is_first_coefficient(self, kernel_code_z8):
        S = sliding_matrix(kernel_code_z8, 0)
        assert S.data == kernel_code_z8.parity_coeff(0).data

    def test_worked_window_blocks(self, kernel_code_z8):
        S = sliding_matrix(kernel_code_z8, 1)
        h0 = kernel_code_z8.parity_coeff(0).data
        h1 = kernel_code_z8.parity_coeff(1).data
        for i in range(3):
            assert S.data[i] == h0[i] + (0,) * 5
            assert S.data[3 + i] == h1[i] + h0[i]

    def test_padding_beyond_degree(self, kernel_code_z8):
        nu = kernel_code_z8.nu
        S = sliding_matrix(kernel_code_z8, nu + 2)
        bottom = S.data[-3:]
        # bottom block row reads [0 H^nu ... H^0]
        for i in range(3):
            assert bottom[i][:5] == (0,) * 5
            for m in range(nu + 1):
                col0 = (nu + 2 - m) * 5
                assert bottom[i][col0 : col0 + 5] == kernel_code_z8.parity_coeff(m).data[i]

    def test_toeplitz_embedding(self, kernel_code_z9):
        S2 = sliding_matrix(kernel_code_z9, 2)
        S1 = sliding_matrix(kernel_code_z9, 1)
        for i in range(S1.rows):
            assert S2.data[i][: S1.cols] == S1.data[i]


class TestWindowMembership:
    def test_zero_window(self, kernel_code_z8):
        assert is_codeword_window(kernel_code_z8, [[0] * 5] * 3)

    def test_worked_window_is_valid(self, kernel_code_z8):
        assert is_codeword_window(kernel_code_z8, [WORD0, WORD1, WORD2])

    def test_perturbed_window_fails(self, kernel_code_z8):
        for t in range(3):
            for c in range(5):
                window = [list(WORD0), list(WORD1), list(WORD2)]
                window[t][c] = (window[t][c] + 1) % 8
                assert not is_codeword_window(kernel_code_z8, window)

    def test_encoded_prefix_windows(self, kernel_code_z8):
        rng = random.Random(13)
        for _ in range(5):
            u = [[rng.randrange(8) for _ in range(4)] for _ in range(3)]
            stream = kernel_code_z8.encode(u)
            for j in range(len(stream)):
                assert is_codeword_window(kernel_code_z8, stream[: j + 1])


class TestPreimage:
    def test_worked_preimage_roundtrip(self, kernel_code_z8, z8):
        rng = random.Random(17)
        u = [[rng.randrange(8) for _ in range(4)] for _ in range(2)]
        stream = kernel_code_z8.encode(u)
        word = [Poly(z8, [s[c] for s in stream]) for c in range(5)]
        got = preimage(kernel_code_z8, word)
        assert got is not None
        G = kernel_code_z8.generator_matrix()
        back = G.transpose() @ PolyMatrix(z8, [[e] for e in got])
        assert [e for (e,) in back.entries] == word

    def test_non_kernel_word_rejected(self, kernel_code_z8, z8):
        word = [Poly.const(z8, 1)] + [Poly.zero(z8)] * 4
        assert preimage(kernel_code_z8, word) is None
