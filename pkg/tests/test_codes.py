import itertools
from pathlib import Path

import numpy as np
import pytest

from sisogrand.codes import (
    BinaryPolynomial,
    CodeConstructionError,
    GaloisField256,
    OFEC_GENERATOR_POLY,
    build_cyclic_code,
    encode,
    format_parity_check,
    gf_multiply,
    load_code_from_file,
    parse_parity_check,
    polynomial_encode,
    syndrome,
)

FIXTURES = Path(__file__).parent / "fixtures"


def shift_and_reduce(a, b, poly=0x171):
    """Schoolbook GF(2^8) product, no tables."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if a & 0x100:
            a ^= poly
    return acc


def long_division_remainder(num_bits, den_bits):
    """GF(2) polynomial remainder on coefficient lists, highest degree first."""
    num = list(num_bits)
    for i in range(len(num) - len(den_bits) + 1):
        if num[i]:
            for j, d in enumerate(den_bits):
                num[i + j] ^= d
    return num[len(num) - len(den_bits) + 1:]


def gf2_rank_by_span(rows):
    """Rank as log2 of the size of the row space (only for a handful of rows)."""
    span = set()
    for coeffs in itertools.product((0, 1), repeat=len(rows)):
        v = np.zeros(len(rows[0]), dtype=np.uint8)
        for c, r in zip(coeffs, rows):
            if c:
                v ^= r
        span.add(v.tobytes())
    return int(np.log2(len(span)))


# --- GF(2^8) ----------------------------------------------------------------


def test_gf_multiply_by_zero():
    assert all(gf_multiply(a, 0) == 0 for a in range(256))


def test_gf_multiply_x_times_x():
    assert gf_multiply(0x02, 0x02) == 0x04


def test_alpha_times_alpha_254_is_one():
    alpha_254 = 1
    for _ in range(254):
        alpha_254 = shift_and_reduce(alpha_254, 0x02)
    assert gf_multiply(0x02, alpha_254) == 1


def test_gf_multiply_matches_shift_and_reduce_everywhere():
    field = GaloisField256()
    for a in range(256):
        for b in range(256):
            assert field.multiply(a, b) == shift_and_reduce(a, b), (a, b)


def test_log_antilog_round_trip():
    f = GaloisField256()
    assert len(f.log_table) == 255 and len(f.antilog_table) == 255
    for a in range(1, 256):
        assert f.antilog(f.log(a)) == a


def test_gf_ring_axioms_sampled(rng):
    f = GaloisField256()
    for a, b, c in rng.integers(0, 256, (500, 3)):
        a, b, c = int(a), int(b), int(c)
        assert f.multiply(a, b) == f.multiply(b, a)
        assert f.multiply(f.multiply(a, b), c) == f.multiply(a, f.multiply(b, c))
        assert f.multiply(a, 1) == a


def test_non_primitive_polynomial_rejected():
    # x^8 + 1 = (x + 1)^8 is reducible
    with pytest.raises(ValueError):
        GaloisField256(0x101)


# --- polynomials and the OFEC code --------------------------------------------


def test_generator_divides_x255_plus_1():
    g = [int(c) for c in bin(OFEC_GENERATOR_POLY)[2:]]
    x255_1 = [1] + [0] * 254 + [1]
    assert not any(long_division_remainder(x255_1, g))


def test_binary_polynomial_degree_and_mod():
    g = BinaryPolynomial.from_int(OFEC_GENERATOR_POLY)
    assert g.degree == 16
    assert g.coefficients[0] == 1 and g.coefficients[-1] == 1
    x255 = BinaryPolynomial.from_int((1 << 255) | 1)
    assert (x255 % g).to_int() == 0


def test_ofec_dimensions(ofec):
    assert (ofec.n, ofec.k) == (256, 239)
    assert ofec.generator_matrix.shape == (239, 256)
    assert ofec.parity_check_matrix.shape == (17, 256)


def test_ofec_generator_orthogonal_to_parity_check(ofec):
    G = ofec.generator_matrix.astype(int)
    H = ofec.parity_check_matrix.astype(int)
    assert not ((G @ H.T) % 2).any()


def test_ofec_all_zero_message(ofec):
    assert not encode(ofec, np.zeros(239)).any()


def test_ofec_random_codewords_have_even_weight_and_zero_syndrome(ofec, rng):
    for _ in range(1000):
        m = rng.integers(0, 2, 239)
        x = encode(ofec, m)
        assert x.sum() % 2 == 0
        assert not syndrome(ofec, x).any()
        assert np.array_equal(x[:239], m)


def test_lfsr_encoder_matches_generator_matrix(ofec, rng):
    for _ in range(50):
        m = rng.integers(0, 2, 239)
        assert np.array_equal(polynomial_encode(ofec, m), encode(ofec, m))


def test_codeword_is_multiple_of_generator(ofec, rng):
    m = rng.integers(0, 2, 239)
    x = encode(ofec, m)[:255]
    value = int("".join(map(str, x)), 2)  # position 0 is the top coefficient
    assert (BinaryPolynomial.from_int(value) % BinaryPolynomial.from_int(OFEC_GENERATOR_POLY)).to_int() == 0


def test_linearity(ofec, rng):
    a, b = rng.integers(0, 2, (2, 239))
    xa, xb = encode(ofec, a), encode(ofec, b)
    assert not syndrome(ofec, xa ^ xb).any()


def test_single_flip_syndrome_is_column_of_h(ofec, rng):
    x = encode(ofec, rng.integers(0, 2, 239))
    for j in (0, 17, 238, 239, 254, 255):
        y = x.copy()
        y[j] ^= 1
        assert np.array_equal(syndrome(ofec, y), ofec.parity_check_matrix[:, j])


def test_syndrome_length_checked(ofec):
    with pytest.raises(ValueError):
        syndrome(ofec, np.zeros(255))
    with pytest.raises(ValueError):
        encode(ofec, np.zeros(240))


def test_minimum_distance_at_least_six(ofec):
    # all codewords have even weight, so d >= 6 iff there is no weight-2 or
    # weight-4 codeword, i.e. all pairwise column sums are distinct and nonzero
    cols = [int("".join(map(str, c)), 2) for c in ofec.parity_check_matrix.T]
    sums = [a ^ b for a, b in itertools.combinations(cols, 2)]
    assert 0 not in sums
    assert len(set(sums)) == len(sums) == 32640


def test_bad_generator_rejected():
    with pytest.raises(CodeConstructionError):
        build_cyclic_code(0b111, 8)  # x^2+x+1 does not divide x^8+1


# --- parity-check files -----------------------------------------------------------


def test_load_hamming_file():
    code = load_code_from_file(str(FIXTURES / "hamming_15_11.txt"))
    assert (code.n, code.k) == (15, 11)
    assert gf2_rank_by_span(list(code.parity_check_matrix)) == 4
    G, H = code.generator_matrix.astype(int), code.parity_check_matrix.astype(int)
    assert not ((G @ H.T) % 2).any()
    # G is systematic on the recorded information positions
    assert np.array_equal(code.generator_matrix[:, list(code.info_positions)], np.eye(11))


def test_loaded_code_exhaustive_orthogonality(hamming15):
    G, H = hamming15.generator_matrix, hamming15.parity_check_matrix
    for i in range(hamming15.k):
        for r in range(hamming15.n - hamming15.k):
            assert int(G[i].astype(int) @ H[r].astype(int)) % 2 == 0


def test_format_and_parse_round_trip(hamming15):
    again = parse_parity_check(format_parity_check(hamming15))
    assert np.array_equal(again.parity_check_matrix, hamming15.parity_check_matrix)
    assert np.array_equal(again.generator_matrix, hamming15.generator_matrix)


@pytest.mark.parametrize(
    "text",
    [
        "7 4\n1010101\n0110011\n000111\n",  # short row
        "7 4\n1010101\n0110011\n",  # missing row
        "7 4\n1010101\n0110011\n00011x1\n",  # bad character
        "seven four\n",
        "",
    ],
)
def test_malformed_files_rejected(text):
    with pytest.raises(CodeConstructionError):
        parse_parity_check(text)


def test_comments_and_blank_lines_ignored():
    code = parse_parity_check("# (7,4) Hamming\n7 4\n\n1010101  # first check\n0110011\n0001111\n")
    assert (code.n, code.k) == (7, 4)


def test_rank_deficient_h_rejected():
    with pytest.raises(CodeConstructionError, match="rank"):
        parse_parity_check("4 2\n1100\n1100\n")


def test_identity_h_gives_trivial_parity():
    code = parse_parity_check("4 2\n0010\n0001\n")
    assert (code.n, code.k) == (4, 2)
    assert not code.generator_matrix[:, 2:].any()
