import numpy as np
import pytest

from sisogrand.channel import NoiseConfig, frame_rng, modulate, quantize, transmit
from sisogrand.codes import syndrome
from sisogrand.grand import DecodeResult, Status, grandab_decode
from sisogrand.patterns import ScheduleKind
from sisogrand.pipeline import (
    IterationPolicy,
    IterationStats,
    PipelineStats,
    ProductBlock,
    decode_iterative,
    encode_product,
    handle_abandonment,
    siso_line,
    unsatisfied_checks,
)
from sisogrand.soft import ScalingProfile

SMALL = IterationPolicy(q_max=(64,), q_max_c=(256,))


def noisy_block(code, ebn0, seed, frame=0):
    rng = frame_rng(seed, 0, frame)
    block = encode_product(rng.integers(0, 2, (code.k, code.k)), code)
    y = transmit(modulate(block.bits), NoiseConfig(ebn0, code.rate**2), rng=rng)
    block.llrs = quantize(y).dequantize()
    return block


def test_default_policy():
    p = IterationPolicy()
    assert p.schedule == (ScheduleKind.LWO, ScheduleKind.ILWO, ScheduleKind.ILWO)
    assert p.q_max == (8192,) * 3 and p.q_max_c == (65536,) * 3
    assert (p.n_siso, p.n_hiho, p.hiho_max_hw, p.n_iterations) == (3, 2, 2, 5)


def test_policy_validation():
    with pytest.raises(ValueError):
        IterationPolicy(q_max=(100,), q_max_c=(50,), et_enabled=(True,))
    with pytest.raises(ValueError):
        IterationPolicy(n_siso=4)  # default scaling covers three iterations
    with pytest.raises(ValueError):
        IterationPolicy(q_max=(4096, 8192), nonincreasing_budgets=True)
    IterationPolicy(q_max=(8192, 8192, 4096), q_max_c=(65536, 65536, 40960), nonincreasing_budgets=True)
    with pytest.raises(ValueError):
        IterationPolicy(schedule=("LWO", "XYZ"))


def test_policy_sequences_are_extended():
    p = IterationPolicy(schedule=("iLWO",), q_max=(10, 20))
    assert p.schedule == (ScheduleKind.ILWO,) * 3
    assert p.q_max == (10, 20, 20)
    assert p.replace(n_hiho=0).n_iterations == 3


def test_encode_product_rows_and_columns_are_codewords(ext_hamming, rng):
    for _ in range(10):
        M = rng.integers(0, 2, (26, 26))
        b = encode_product(M, ext_hamming).bits
        assert unsatisfied_checks(b, ext_hamming) == 0
        for j in range(32):
            assert not syndrome(ext_hamming, b[j]).any()
            assert not syndrome(ext_hamming, b[:, j]).any()
        info = list(ext_hamming.info_positions)
        assert np.array_equal(b[np.ix_(info, info)], M)
        # columns first gives the same block
        G = ext_hamming.generator_matrix.astype(int)
        cols_first = (((G.T @ M) % 2) @ G) % 2
        assert np.array_equal(cols_first, b)


def test_encode_product_shape_checked(ext_hamming):
    with pytest.raises(ValueError):
        encode_product(np.zeros((26, 25)), ext_hamming)


def test_noiseless_block_decodes_at_first_query(ext_hamming, rng):
    block = encode_product(rng.integers(0, 2, (26, 26)), ext_hamming)
    block.llrs = 4.0 * modulate(block.bits)
    bits, stats = decode_iterative(block, IterationPolicy(), ext_hamming)
    assert np.array_equal(bits, block.bits)
    s0 = stats[0]
    assert s0.avg_q_main == 1.0 and s0.ber_out == 0.0 and s0.decodes == 64
    assert stats.final.frame_errors == 0


def test_decode_counts_per_iteration(ext_hamming):
    block = noisy_block(ext_hamming, 4.0, 2)
    _, stats = decode_iterative(block, SMALL, ext_hamming)
    assert len(stats.iterations) == 5
    for s in stats.iterations:
        assert s.decodes == 2 * 32
        assert s.frames == 1 and s.bits == 26 * 26
        assert s.q_main <= s.q_total


def test_decode_requires_llrs(ext_hamming):
    with pytest.raises(ValueError):
        decode_iterative(ProductBlock(np.zeros((32, 32), np.uint8)), SMALL, ext_hamming)


def test_decoding_is_deterministic(ext_hamming):
    block = noisy_block(ext_hamming, 4.5, 5)
    a_bits, a = decode_iterative(block, SMALL, ext_hamming)
    b_bits, b = decode_iterative(block, SMALL, ext_hamming)
    assert np.array_equal(a_bits, b_bits) and a == b


def test_abandonment_passes_input_through(ext_hamming):
    y_in = np.array([0.5, -0.25] * 16)
    out = handle_abandonment(y_in, DecodeResult(Status.ABANDONED, None, None, 3, 3), 0, ScalingProfile())
    assert np.array_equal(out, y_in) and out is not y_in
    # a line that cannot decode within one query keeps its input
    policy = IterationPolicy(q_max=(1,), q_max_c=(1,), et_enabled=(True,))
    y = np.full(32, 3.0)
    y[[2, 9]] = -0.1
    out, res = siso_line(y, np.zeros(32), ext_hamming, policy, 0)
    assert res.status is Status.ABANDONED and np.array_equal(out, y)


def test_siso_line_reinforces_found_codeword(ext_hamming):
    y = np.full(32, 2.0)
    y[5] = -0.3  # one weak error
    out, res = siso_line(y, y, ext_hamming, IterationPolicy(q_max=(64,), q_max_c=(64,)), 0)
    assert res.found and not res.x_hat.any()
    assert (out > y - 1e-12)[np.arange(32) != 5].all()
    assert out[5] > y[5]


def test_no_competitor_policy_never_reports_pairs(ext_hamming):
    block = noisy_block(ext_hamming, 4.0, 3)
    _, stats = decode_iterative(block, SMALL.replace(find_competitor=False), ext_hamming)
    assert all(s.pairs == 0 for s in stats.iterations)


def test_requantize_keeps_grid(ext_hamming):
    block = noisy_block(ext_hamming, 4.0, 4)
    bits, _ = decode_iterative(block, SMALL.replace(requantize=True, requantize_step=0.5), ext_hamming)
    assert bits.shape == (32, 32)


def test_hiho_pass_only_replaces_words_by_codewords(ext_hamming):
    # each GRANDAB line decode either leaves the word alone or writes a codeword
    for f in range(20):
        block = noisy_block(ext_hamming, 3.0, 6, f)
        hard = (block.llrs < 0).astype(np.uint8)
        for j in range(32):
            r = grandab_decode(hard[j], ext_hamming, 2)
            if r.found:
                assert not syndrome(ext_hamming, r.x_hat).any()
                assert int((r.x_hat != hard[j]).sum()) <= 2
            else:
                assert r.q_total == 1 + 32 + 496


def test_hiho_only_policy_clears_sparse_errors(ext_hamming, rng):
    block = encode_product(rng.integers(0, 2, (26, 26)), ext_hamming)
    llrs = 3.0 * modulate(block.bits)
    for r, c in ((1, 4), (10, 20), (25, 30)):
        llrs[r, c] = -llrs[r, c]
    block.llrs = llrs
    bits, stats = decode_iterative(block, IterationPolicy(n_siso=0, n_hiho=1), ext_hamming)
    assert np.array_equal(bits, block.bits)
    assert stats.final.bit_errors == 0


def test_stats_merge_is_plain_addition():
    a = IterationStats(decodes=2, q_main=3, q_total=5, pairs=1, bit_errors=4, bits=100, frames=1, frame_errors=1, bit_errors_sq=16)
    b = IterationStats(decodes=2, q_main=1, q_total=7, pairs=0, bit_errors=0, bits=100, frames=1, frame_errors=0, bit_errors_sq=0)
    c = a + b
    assert (c.decodes, c.q_total, c.pairs, c.frames) == (4, 12, 1, 2)
    assert c.avg_q_main == 1.0 and c.avg_q_total == 3.0
    assert c.competitor_rate == 0.25 and c.ber_out == 0.02
    # per-frame errors 4 and 0: sample sd 2*sqrt(2), SE = 2, divided by 100 bits
    assert c.ber_stderr == pytest.approx(0.02)
    assert IterationStats().ber_out == 0.0
    with pytest.raises(ValueError):
        PipelineStats.empty(2) + PipelineStats.empty(3)
