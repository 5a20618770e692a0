"""Binary linear code construction: systematic CRC codes and CA-Polar codes.

Both families expose a generator, a parity-check matrix (the EDGE solver
works in codeword coordinates), and a fast bit-packed membership test.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .gf2 import gf2_rank, null_space, pack_rows, unpack_row

__all__ = [
    "BinaryCode",
    "build_crc_code",
    "build_capolar_code",
    "polar_transform",
    "crc_remainder",
    "POLAR_RELIABILITY_128",
]

# 3GPP TS 38.212 universal polar reliability sequence restricted to n = 128,
# in ascending reliability order (the last k entries carry information).
POLAR_RELIABILITY_128 = (
      0,   1,   2,   4,   8,  16,  32,   3,   5,  64,   9,   6,  17,  10,  18,  12,
     33,  65,  20,  34,  24,  36,   7,  66,  11,  40,  68,  19,  13,  48,  14,  72,
     21,  35,  26,  80,  37,  25,  22,  38,  96,  67,  41,  28,  69,  42,  49,  74,
     70,  44,  81,  50,  73,  15,  52,  23,  76,  82,  56,  27,  97,  39,  84,  29,
     43,  98,  88,  30,  71,  45, 100,  51,  46,  75, 104,  53,  77,  54,  83,  57,
    112,  78,  85,  58,  99,  86,  60,  89, 101,  31,  90, 102, 105,  92,  47, 106,
     55, 113,  79, 108,  59, 114,  87, 116,  61,  91, 120,  62, 103,  93, 107,  94,
    109, 115, 110, 117, 118, 121, 122,  63, 124,  95, 111, 119, 123, 125, 126, 127,
)


def _poly_degree(poly: int) -> int:
    if poly <= 1:
        raise ValueError("polynomial must have degree >= 1")
    if not poly & 1:
        raise ValueError("polynomial must have a nonzero constant term")
    return poly.bit_length() - 1


def _poly_mod(value: int, top_bit: int, poly: int, deg: int) -> int:
    """Remainder of a bit-polynomial (bit i = coeff of x^i) modulo poly."""
    for shift in range(top_bit - 1, deg - 1, -1):
        if (value >> shift) & 1:
            value ^= poly << (shift - deg)
    return value


def crc_remainder(bits: np.ndarray, poly: int) -> np.ndarray:
    """CRC of a bit sequence: remainder of M(x) * x^deg modulo poly.

    bits[0] is the highest-order coefficient of the message polynomial and
    the returned remainder is likewise most-significant first.
    """
    deg = _poly_degree(poly)
    value = 0
    for b in bits:
        value = (value << 1) | int(b)
    value <<= deg
    rem = _poly_mod(value, len(bits) + deg, poly, deg)
    return np.array([(rem >> (deg - 1 - i)) & 1 for i in range(deg)], dtype=np.uint8)


def polar_transform(u: np.ndarray) -> np.ndarray:
    """Multiply by the n x n Kronecker power of [[1,0],[1,1]] over GF(2).

    Self-inverse; acts on the last axis, which must be a power of two.
    """
    u = np.asarray(u)
    n = u.shape[-1]
    if n & (n - 1):
        raise ValueError(f"block length {n} is not a power of two")
    x = u.astype(np.uint8).copy()
    lead = x.shape[:-1]
    step = 1
    while step < n:
        x = x.reshape(*lead, n // (2 * step), 2, step)
        x[..., 0, :] ^= x[..., 1, :]
        x = x.reshape(*lead, n)
        step *= 2
    return x


@dataclass
class BinaryCode:
    """An [n, k] binary linear code with bit-packed membership testing.

    `k` is the code's rate label (k/n is the design rate).  For the CRC
    family `message_len == k`; for CA-Polar `k` counts message+CRC bits so
    the encoder payload is `message_len = k - crc_len` and the true code
    dimension equals `message_len`.
    """

    n: int
    k: int
    message_len: int
    generator: np.ndarray
    parity_check: np.ndarray
    kind: str
    metadata: dict = field(default_factory=dict)
    _h_packed: list = field(default=None, repr=False)
    _syndrome_cols: list = field(default=None, repr=False)

    def __post_init__(self):
        self.generator = np.asarray(self.generator, dtype=np.uint8)
        self.parity_check = np.asarray(self.parity_check, dtype=np.uint8)
        self._h_packed = pack_rows(self.parity_check)
        # Column j of H packed across rows: syndrome of flipping bit j.
        self._syndrome_cols = [
            sum(((row >> j) & 1) << r for r, row in enumerate(self._h_packed))
            for j in range(self.n)
        ]
        assert gf2_rank(pack_rows(self.generator), self.n) == self.message_len
        assert gf2_rank(self._h_packed, self.n) == self.n - self.message_len
        assert not np.any(self.generator @ self.parity_check.T % 2)

    @property
    def rate(self) -> float:
        return self.k / self.n

    @property
    def redundancy(self) -> int:
        """Number of parity constraints (rows of the parity-check matrix)."""
        return self.n - self.message_len

    # -- encoding ----------------------------------------------------------
    def encode(self, message: np.ndarray) -> np.ndarray:
        message = np.asarray(message, dtype=np.uint8)
        if message.shape[-1] != self.message_len:
            raise ValueError(
                f"message length {message.shape[-1]} != {self.message_len}"
            )
        return (message @ self.generator) % 2

    def extract_message(self, codeword: np.ndarray) -> np.ndarray:
        """Recover the message bits of a codeword (inverse of encode)."""
        codeword = np.asarray(codeword, dtype=np.uint8)
        if self.kind == "crc":
            return codeword[..., : self.k].copy()
        u = polar_transform(codeword)
        return u[..., self.metadata["info_positions"]][..., : self.message_len].copy()

    # -- membership --------------------------------------------------------
    def syndrome_int(self, word_int: int) -> int:
        s = 0
        for r, row in enumerate(self._h_packed):
            s |= ((row & word_int).bit_count() & 1) << r
        return s

    def syndrome_columns(self) -> list:
        return self._syndrome_cols

    def packed_parity_rows(self) -> list:
        return list(self._h_packed)

    def is_codeword(self, word: np.ndarray) -> bool | np.ndarray:
        """Family-defining membership test (CRC syndrome / polar-domain check).

        Accepts a single word or a batch (last axis = n); returns bool or a
        boolean vector accordingly.
        """
        word = np.asarray(word, dtype=np.uint8)
        if self.kind == "crc":
            return ~np.any((word @ self.parity_check.T) % 2, axis=-1)
        u = polar_transform(word)
        frozen_ok = ~np.any(u[..., self.metadata["frozen_positions"]], axis=-1)
        info = u[..., self.metadata["info_positions"]]
        poly = self.metadata["crc_poly"]
        if info.ndim == 1:
            return bool(frozen_ok) and not crc_remainder(info, poly).any()
        crc_ok = np.array(
            [not crc_remainder(row, poly).any() for row in info], dtype=bool
        )
        return frozen_ok & crc_ok

    def is_codeword_int(self, word_int: int) -> bool:
        """Membership via the packed parity rows (the EDGE solver's view)."""
        return self.syndrome_int(word_int) == 0

    def word_from_int(self, word_int: int) -> np.ndarray:
        return unpack_row(word_int, self.n)


def build_crc_code(n: int, k: int, poly: int) -> BinaryCode:
    """Systematic CRC code: codeword = [message | CRC remainder].

    `poly` is the full polynomial bit pattern (e.g. 0x11021 for
    x^16+x^12+x^5+1); its degree must equal n - k.
    """
    deg = _poly_degree(poly)
    if deg != n - k:
        raise ValueError(f"polynomial degree {deg} != n - k = {n - k}")
    parity = np.zeros((k, n - k), dtype=np.uint8)
    for i in range(k):
        unit = np.zeros(k, dtype=np.uint8)
        unit[i] = 1
        parity[i] = crc_remainder(unit, poly)
    generator = np.hstack([np.eye(k, dtype=np.uint8), parity])
    parity_check = np.hstack([parity.T, np.eye(n - k, dtype=np.uint8)])
    return BinaryCode(
        n=n,
        k=k,
        message_len=k,
        generator=generator,
        parity_check=parity_check,
        kind="crc",
        metadata={"poly": poly},
    )


def build_capolar_code(
    n: int,
    k: int,
    crc_len: int,
    crc_poly: int,
    reliability=None,
) -> BinaryCode:
    """CRC-aided polar code: payload -> append CRC -> polar transform.

    The k message+CRC bits sit, in order, on the k most reliable non-frozen
    positions (taken in ascending position index); membership requires all
    frozen positions zero after the (self-inverse) transform plus a passing
    CRC.  A rank-(n - k + crc_len) parity-check matrix equivalent to that
    test is materialized for the erasure solver.
    """
    if n & (n - 1):
        raise ValueError(f"block length {n} is not a power of two")
    if _poly_degree(crc_poly) != crc_len:
        raise ValueError(
            f"CRC polynomial degree {_poly_degree(crc_poly)} != crc_len {crc_len}"
        )
    if reliability is None:
        if n > len(POLAR_RELIABILITY_128):
            raise ValueError("supply a reliability sequence for n > 128")
        reliability = [v for v in POLAR_RELIABILITY_128 if v < n]
    reliability = list(reliability)
    if sorted(reliability) != list(range(n)):
        raise ValueError("reliability sequence is not a permutation of 0..n-1")
    if not crc_len < k < n:
        raise ValueError(f"need crc_len < k < n, got k={k}")

    info_positions = np.array(sorted(reliability[-k:]), dtype=np.int64)
    frozen_positions = np.array(sorted(reliability[: n - k]), dtype=np.int64)
    payload_len = k - crc_len

    def encode_payload(payload: np.ndarray) -> np.ndarray:
        u = np.zeros(n, dtype=np.uint8)
        u[info_positions] = np.concatenate([payload, crc_remainder(payload, crc_poly)])
        return polar_transform(u)

    generator = np.zeros((payload_len, n), dtype=np.uint8)
    for i in range(payload_len):
        unit = np.zeros(payload_len, dtype=np.uint8)
        unit[i] = 1
        generator[i] = encode_payload(unit)

    h_packed = null_space(pack_rows(generator), n)
    parity_check = np.array([unpack_row(h, n) for h in h_packed], dtype=np.uint8)
    return BinaryCode(
        n=n,
        k=k,
        message_len=payload_len,
        generator=generator,
        parity_check=parity_check,
        kind="ca-polar",
        metadata={
            "crc_poly": crc_poly,
            "crc_len": crc_len,
            "info_positions": info_positions,
            "frozen_positions": frozen_positions,
            "reliability": reliability,
        },
    )
