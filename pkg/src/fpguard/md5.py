"""MD5 message digest, implemented from the RFC 1321 reference description.

Used strictly as a fingerprint-surface digest, never for security. Kept
in-tree (rather than hashlib) so the digest pipeline is the same code
the repo documents for cross-language payload parity; the test suite
checks it against hashlib and the RFC test vectors.
"""

from __future__ import annotations

import math
import struct

_MASK32 = 0xFFFFFFFF

# T[i] = floor(2^32 * |sin(i+1)|), per the RFC
_T = [int(4294967296 * abs(math.sin(i + 1))) & _MASK32 for i in range(64)]

_SHIFTS = (
    (7, 12, 17, 22),
    (5, 9, 14, 20),
    (4, 11, 16, 23),
    (6, 10, 15, 21),
)

# message-word index for step i of each round
_INDEX = (
    lambda i: i,
    lambda i: (5 * i + 1) % 16,
    lambda i: (3 * i + 5) % 16,
    lambda i: (7 * i) % 16,
)

_AUX = (
    lambda x, y, z: (x & y) | (~x & z),
    lambda x, y, z: (x & z) | (y & ~z),
    lambda x, y, z: x ^ y ^ z,
    lambda x, y, z: y ^ (x | (~z & _MASK32)),
)


def _rotl(x: int, n: int) -> int:
    x &= _MASK32
    return ((x << n) | (x >> (32 - n))) & _MASK32


def _compress(state: tuple[int, int, int, int], block: bytes) -> tuple[int, int, int, int]:
    a0, b0, c0, d0 = state
    m = struct.unpack("<16I", block)
    a, b, c, d = a0, b0, c0, d0
    for rnd in range(4):
        aux = _AUX[rnd]
        idx = _INDEX[rnd]
        shifts = _SHIFTS[rnd]
        for step in range(16):
            i = rnd * 16 + step
            f = aux(b, c, d)
            tmp = (a + f + m[idx(step)] + _T[i]) & _MASK32
            a, d, c, b = d, c, b, (b + _rotl(tmp, shifts[step % 4])) & _MASK32
    return (
        (a0 + a) & _MASK32,
        (b0 + b) & _MASK32,
        (c0 + c) & _MASK32,
        (d0 + d) & _MASK32,
    )


def md5_digest(data: bytes) -> bytes:
    """16-byte MD5 digest of data."""
    state = (0x67452301, 0xEFCDAB89, 0x98BADCFE, 0x10325476)
    bit_len = (len(data) * 8) & ((1 << 64) - 1)
    padded = data + b"\x80" + b"\x00" * ((55 - len(data)) % 64) + struct.pack("<Q", bit_len)
    for off in range(0, len(padded), 64):
        state = _compress(state, padded[off : off + 64])
    return struct.pack("<4I", *state)


def md5_hex(data: bytes | str) -> str:
    """Lowercase 32-char hex MD5 digest; str input is hashed as UTF-8."""
    if isinstance(data, str):
        data = data.encode("utf-8")
    return md5_digest(data).hex()
