"""Binary linear block codes over GF(2), with the extended BCH(256, 239) OFEC
component code as the main built-in.

Field elements are integers whose bit ``i`` is the coefficient of ``alpha^i``.
Binary polynomials are handled as Python integers the same way (bit ``i`` is
the coefficient of ``x^i``), so ``0x18DED`` reads with its most significant set
bit as the leading term.

Codeword bit ``p`` of a cyclic code of length ``m`` carries the coefficient of
``x^(m-1-p)``: message bits come first, then the parity remainder, then (for
extended codes) the overall parity bit at position ``n - 1``.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

OFEC_FIELD_POLY = 0x171
OFEC_GENERATOR_POLY = 0x18DED


class CodeConstructionError(ValueError):
    """Raised when a code cannot be built or loaded."""


# --------------------------------------------------------------------------
# GF(2^m)
# --------------------------------------------------------------------------


class GaloisField:
    """GF(2^m) defined by a primitive polynomial, with log/antilog tables.

    Parameters
    ----------
    field_polynomial : int
        Primitive polynomial with the ``x^m`` term included, e.g. ``0x171``.
    """

    def __init__(self, field_polynomial: int):
        m = field_polynomial.bit_length() - 1
        if m < 1:
            raise ValueError(f"bad field polynomial 0x{field_polynomial:X}")
        self.field_polynomial = field_polynomial
        self.m = m
        self.order = (1 << m) - 1

        antilog = []
        a = 1
        for _ in range(self.order):
            antilog.append(a)
            a <<= 1
            if a >> m:
                a ^= field_polynomial
        if a != 1 or len(set(antilog)) != self.order:
            raise ValueError(f"0x{field_polynomial:X} is not primitive")
        log = [0] * (self.order + 1)
        for e, v in enumerate(antilog):
            log[v] = e
        self.antilog_table = tuple(antilog)
        # index 0 is unused (log of zero is undefined)
        self.log_table = tuple(log[1:])

    def log(self, a: int) -> int:
        if a == 0:
            raise ValueError("log(0) is undefined")
        return self.log_table[a - 1]

    def antilog(self, e: int) -> int:
        return self.antilog_table[e % self.order]

    def multiply(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        return self.antilog_table[(self.log(a) + self.log(b)) % self.order]

    def power(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return self.antilog_table[(self.log(a) * e) % self.order]

    def eval_binary_poly(self, poly: int, x: int) -> int:
        """Evaluate a GF(2)-coefficient polynomial at a field element (Horner)."""
        acc = 0
        for i in range(poly.bit_length() - 1, -1, -1):
            acc = self.multiply(acc, x) ^ ((poly >> i) & 1)
        return acc


class GaloisField256(GaloisField):
    """GF(2^8) with the OFEC field polynomial by default."""

    def __init__(self, field_polynomial: int = OFEC_FIELD_POLY):
        super().__init__(field_polynomial)
        if self.m != 8:
            raise ValueError("GaloisField256 needs a degree-8 polynomial")


@lru_cache(maxsize=None)
def _default_field() -> GaloisField256:
    return GaloisField256()


def gf_multiply(a: int, b: int, field: Optional[GaloisField] = None) -> int:
    """Product of two GF(2^8) elements, reduced by 0x171 unless ``field`` says otherwise."""
    return (field or _default_field()).multiply(a, b)


# --------------------------------------------------------------------------
# GF(2)[x]
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BinaryPolynomial:
    """Polynomial over GF(2); ``coefficients`` are lowest degree first."""

    coefficients: tuple

    @classmethod
    def from_int(cls, value: int) -> "BinaryPolynomial":
        return cls(tuple((value >> i) & 1 for i in range(max(value.bit_length(), 1))))

    def to_int(self) -> int:
        return sum(b << i for i, b in enumerate(self.coefficients))

    @property
    def degree(self) -> int:
        return self.to_int().bit_length() - 1

    def __mod__(self, other: "BinaryPolynomial") -> "BinaryPolynomial":
        return BinaryPolynomial.from_int(poly_mod(self.to_int(), other.to_int()))


def poly_mod(a: int, b: int) -> int:
    """Remainder of ``a`` divided by ``b`` in GF(2)[x]."""
    if b == 0:
        raise ZeroDivisionError("division by the zero polynomial")
    db = b.bit_length() - 1
    while a and a.bit_length() - 1 >= db:
        a ^= b << (a.bit_length() - 1 - db)
    return a


# --------------------------------------------------------------------------
# Linear codes
# --------------------------------------------------------------------------


def _pack_columns(H: np.ndarray) -> np.ndarray:
    """Pack each column of H into ``ceil((n-k)/64)`` uint64 words."""
    r, n = H.shape
    words = max(1, -(-r // 64))
    out = np.zeros((n, words), dtype=np.uint64)
    for row in range(r):
        w, b = divmod(row, 64)
        out[:, w] |= H[row].astype(np.uint64) << np.uint64(b)
    return out


@dataclass(frozen=True, eq=False)
class LinearCode:
    """A binary linear ``(n, k)`` code.

    ``generator_matrix`` is systematic on ``info_positions``: the columns listed
    there form the identity. For the built-in codes these are ``0..k-1``.
    """

    n: int
    k: int
    generator_matrix: np.ndarray
    parity_check_matrix: np.ndarray
    name: str = ""
    info_positions: tuple = ()
    generator_poly: Optional[int] = None
    column_masks: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        G = np.ascontiguousarray(self.generator_matrix, dtype=np.uint8)
        H = np.ascontiguousarray(self.parity_check_matrix, dtype=np.uint8)
        if G.shape != (self.k, self.n) or H.shape != (self.n - self.k, self.n):
            raise CodeConstructionError(
                f"matrix shapes G{G.shape} H{H.shape} do not match n={self.n}, k={self.k}"
            )
        G.setflags(write=False)
        H.setflags(write=False)
        object.__setattr__(self, "generator_matrix", G)
        object.__setattr__(self, "parity_check_matrix", H)
        if not self.info_positions:
            object.__setattr__(self, "info_positions", tuple(range(self.k)))
        masks = _pack_columns(H)
        masks.setflags(write=False)
        object.__setattr__(self, "column_masks", masks)

    @property
    def rate(self) -> float:
        return self.k / self.n

    def is_codeword(self, bits) -> bool:
        return not syndrome(self, bits).any()

    def __repr__(self):
        return f"LinearCode({self.name or 'unnamed'}, n={self.n}, k={self.k})"


def _as_bits(bits, length: int, what: str) -> np.ndarray:
    arr = np.asarray(bits, dtype=np.uint8)
    if arr.shape != (length,):
        raise ValueError(f"{what} must have length {length}, got shape {arr.shape}")
    return arr


def encode(code: LinearCode, message) -> np.ndarray:
    """Return ``message @ G`` over GF(2)."""
    u = _as_bits(message, code.k, "message")
    return (u.astype(np.int64) @ code.generator_matrix) & 1


def syndrome(code: LinearCode, bits) -> np.ndarray:
    """Return ``H @ bits^T`` over GF(2)."""
    x = _as_bits(bits, code.n, "word")
    return ((code.parity_check_matrix.astype(np.int64) @ x) & 1).astype(np.uint8)


def syndrome_mask(code: LinearCode, bits) -> np.ndarray:
    """Syndrome packed into uint64 words, the form the decoders work with."""
    x = np.asarray(bits, dtype=bool)
    return np.bitwise_xor.reduce(code.column_masks[x], axis=0) if x.any() else np.zeros(
        code.column_masks.shape[1], dtype=np.uint64
    )


def cyclic_parity(message, gen_poly: int, length: int) -> np.ndarray:
    """Parity bits of a systematic cyclic code by LFSR long division.

    ``message[0]`` is the highest-degree coefficient. Returns ``deg(g)`` bits,
    highest degree first, i.e. ``m(x) x^r mod g(x)``.
    """
    r = gen_poly.bit_length() - 1
    mask = (1 << r) - 1
    taps = gen_poly & mask
    reg = 0
    for b in message:
        fb = int(b) ^ ((reg >> (r - 1)) & 1)
        reg = (reg << 1) & mask
        if fb:
            reg ^= taps
    return np.array([(reg >> (r - 1 - i)) & 1 for i in range(r)], dtype=np.uint8)


def polynomial_encode(code: LinearCode, message) -> np.ndarray:
    """Encode by polynomial division; only for codes built from a generator polynomial."""
    if code.generator_poly is None:
        raise ValueError(f"{code!r} has no generator polynomial")
    u = _as_bits(message, code.k, "message")
    r = code.generator_poly.bit_length() - 1
    parity = cyclic_parity(u, code.generator_poly, code.k + r)
    word = np.concatenate([u, parity])
    if word.size < code.n:
        word = np.append(word, np.uint8(word.sum() & 1))
    return word


def build_cyclic_code(
    gen_poly: int,
    length: int,
    extended: bool = False,
    name: str = "",
    field: Optional[GaloisField] = None,
    designed_roots: Sequence[int] = (),
) -> LinearCode:
    """Systematic (optionally extended) cyclic code of the given length.

    Raises ``CodeConstructionError`` unless ``gen_poly`` divides ``x^length + 1``,
    or if any ``alpha^j`` for ``j`` in ``designed_roots`` is not a root.
    """
    if poly_mod((1 << length) | 1, gen_poly) != 0:
        raise CodeConstructionError(
            f"0x{gen_poly:X} does not divide x^{length} + 1"
        )
    for j in designed_roots:
        if field is None:
            raise CodeConstructionError("designed_roots needs a field")
        if field.eval_binary_poly(gen_poly, field.antilog(j)) != 0:
            raise CodeConstructionError(f"alpha^{j} is not a root of 0x{gen_poly:X}")

    r = gen_poly.bit_length() - 1
    k = length - r
    n = length + int(extended)
    # parity of the unit message e_i is x^(r + k - 1 - i) mod g
    P = np.zeros((k, n - k), dtype=np.uint8)
    rem = poly_mod(1 << r, gen_poly)
    for i in range(k - 1, -1, -1):
        P[i, :r] = [(rem >> (r - 1 - t)) & 1 for t in range(r)]
        rem <<= 1
        if rem >> r:
            rem ^= gen_poly
    if extended:
        P[:, r] = (1 + P[:, :r].sum(axis=1)) & 1
    G = np.concatenate([np.eye(k, dtype=np.uint8), P], axis=1)
    H = np.concatenate([P.T, np.eye(n - k, dtype=np.uint8)], axis=1)
    return LinearCode(n, k, G, H, name=name, generator_poly=gen_poly)


def build_ofec_component_code() -> LinearCode:
    """Extended BCH(256, 239): g = 0x18DED over GF(2^8)/0x171 plus overall parity."""
    return build_cyclic_code(
        OFEC_GENERATOR_POLY,
        255,
        extended=True,
        name="ofec_bch_256_239",
        field=GaloisField256(OFEC_FIELD_POLY),
        designed_roots=(1, 2, 3, 4),
    )


def build_ext_hamming_32_26() -> LinearCode:
    return build_cyclic_code(0b100101, 31, extended=True, name="ext_hamming_32_26")


def build_hamming_15_11() -> LinearCode:
    return build_cyclic_code(0b10011, 15, name="hamming_15_11")


_BUILTINS = {
    "ofec_bch_256_239": build_ofec_component_code,
    "ext_hamming_32_26": build_ext_hamming_32_26,
    "hamming_15_11": build_hamming_15_11,
}

BUILTIN_CODES = tuple(_BUILTINS)


@lru_cache(maxsize=None)
def _builtin(name: str) -> LinearCode:
    return _BUILTINS[name]()


def get_code(name_or_path: str) -> LinearCode:
    """A built-in code by name, or a code loaded from a parity-check file."""
    if name_or_path in _BUILTINS:
        return _builtin(name_or_path)
    if os.path.exists(name_or_path):
        return load_code_from_file(name_or_path)
    raise CodeConstructionError(
        f"unknown code {name_or_path!r}; built-ins are {', '.join(BUILTIN_CODES)}"
    )


# --------------------------------------------------------------------------
# Parity-check files
# --------------------------------------------------------------------------


def gf2_row_reduce(H: np.ndarray, pivot_order: Sequence[int]):
    """Reduced row-echelon form of H over GF(2).

    Pivot columns are tried in ``pivot_order``. Returns ``(R, pivots)`` where
    ``pivots[i]`` is the pivot column of row ``i`` of ``R``; rows beyond
    ``len(pivots)`` are zero.
    """
    R = (np.array(H, dtype=np.uint8) & 1).copy()
    rows = R.shape[0]
    pivots = []
    for col in pivot_order:
        r = len(pivots)
        if r == rows:
            break
        hits = np.nonzero(R[r:, col])[0]
        if hits.size == 0:
            continue
        p = r + hits[0]
        if p != r:
            R[[r, p]] = R[[p, r]]
        others = np.nonzero(R[:, col])[0]
        others = others[others != r]
        R[others] ^= R[r]
        pivots.append(col)
    return R, pivots


def code_from_parity_check(H, name: str = "") -> LinearCode:
    """Build a code from a full-rank H; G is derived by elimination.

    Pivots are taken from the rightmost columns first so that, whenever the
    last ``n-k`` columns of H are independent, the message sits in ``0..k-1``.
    """
    H = np.array(H, dtype=np.uint8)
    r, n = H.shape
    R, pivots = gf2_row_reduce(H, range(n - 1, -1, -1))
    if len(pivots) < r:
        raise CodeConstructionError(f"H has rank {len(pivots)} < n-k = {r}")
    k = n - r
    info = [c for c in range(n) if c not in set(pivots)]
    G = np.zeros((k, n), dtype=np.uint8)
    for i, c in enumerate(info):
        G[i, c] = 1
        for row, pc in enumerate(pivots):
            G[i, pc] = R[row, c]
    return LinearCode(n, k, G, H, name=name, info_positions=tuple(info))


def parse_parity_check(text: str, name: str = "") -> LinearCode:
    """Header ``n k`` then ``n - k`` rows of 0/1; blank lines and ``#`` comments are skipped."""
    lines = [ln for ln in (raw.split("#", 1)[0].strip() for raw in text.splitlines()) if ln]
    if not lines:
        raise CodeConstructionError("empty parity-check file")
    head = lines[0].split()
    try:
        n, k = (int(v) for v in head)
    except ValueError:
        raise CodeConstructionError(f"bad header line {lines[0]!r}; expected 'n k'") from None
    if not 0 < k < n:
        raise CodeConstructionError(f"need 0 < k < n, got n={n}, k={k}")
    body = lines[1:]
    if len(body) != n - k:
        raise CodeConstructionError(f"expected {n - k} rows of H, found {len(body)}")
    H = np.zeros((n - k, n), dtype=np.uint8)
    for i, row in enumerate(body):
        if len(row) != n or set(row) - {"0", "1"}:
            raise CodeConstructionError(f"row {i + 1} of H is not {n} characters of 0/1")
        H[i] = [c == "1" for c in row]
    return code_from_parity_check(H, name=name)


def load_code_from_file(path: str) -> LinearCode:
    """Load a code from the plain-text parity-check format (``n k`` then H rows)."""
    with open(path, encoding="ascii") as fh:
        text = fh.read()
    return parse_parity_check(text, name=os.path.basename(path))


def format_parity_check(code: LinearCode) -> str:
    rows = ["".join(str(int(b)) for b in row) for row in code.parity_check_matrix]
    return "\n".join([f"{code.n} {code.k}", *rows]) + "\n"
