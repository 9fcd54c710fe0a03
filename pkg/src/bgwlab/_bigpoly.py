"""Truncated products of integer polynomials.

Large products go through Kronecker substitution: both coefficient vectors are
packed into one big integer each and multiplied once with GMP.
"""
from math import gcd, lcm

import gmpy2
import numpy as np

_NAIVE_WORK = 4_000_000  # len * len * limbs below which the direct loop wins


def _naive(a, b, N):
    A = np.array(a, dtype=object)
    B = np.array(b, dtype=object)
    out = np.zeros(N + 1, dtype=object)
    out[:] = 0
    for i in range(min(len(A), N + 1)):
        m = min(len(B), N + 1 - i)
        if A[i]:
            out[i:i + m] += A[i] * B[:m]
    return [int(x) for x in out]


def _kron_nonneg(a, b, N):
    ma = max(a).bit_length()
    mb = max(b).bit_length()
    if ma == 0 or mb == 0:
        return [0] * (N + 1)
    bits = ma + mb + min(len(a), len(b)).bit_length() + 1
    nb = (bits + 7) // 8
    A = gmpy2.mpz(int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in a), "little"))
    B = gmpy2.mpz(int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in b), "little"))
    L = min(len(a) + len(b) - 1, N + 1)
    raw = int(A * B).to_bytes((len(a) + len(b)) * nb, "little")
    out = [int.from_bytes(raw[i * nb:(i + 1) * nb], "little") for i in range(L)]
    return out + [0] * (N + 1 - L)


def _split(a):
    pos = [x if x > 0 else 0 for x in a]
    neg = [-x if x < 0 else 0 for x in a]
    return pos, neg


def polymul(a, b, N):
    """Coefficients 0..N of the product of integer polynomials a and b."""
    a = [int(x) for x in a[:N + 1]]
    b = [int(x) for x in b[:N + 1]]
    if not a or not b:
        return [0] * (N + 1)
    limbs = 1 + (max(map(abs, a)).bit_length() + max(map(abs, b)).bit_length()) // 64
    if len(a) * len(b) * limbs < _NAIVE_WORK:
        out = _naive(a, b, N)
        return out + [0] * (N + 1 - len(out))
    if min(a) >= 0 and min(b) >= 0:
        return _kron_nonneg(a, b, N)
    ap, an = _split(a)
    bp, bn = _split(b)
    parts = [(ap, bp, 1), (ap, bn, -1), (an, bp, -1), (an, bn, 1)]
    out = [0] * (N + 1)
    for x, y, sgn in parts:
        if any(x) and any(y):
            r = _kron_nonneg(x, y, N)
            for i in range(N + 1):
                out[i] += sgn * r[i]
    return out


def integerize(fracs):
    """Common denominator D and integer numerators with fracs[i] = nums[i] / D."""
    D = 1
    for f in fracs:
        D = lcm(D, f.denominator)
    return [f.numerator * (D // f.denominator) for f in fracs], D


def content(nums):
    g = 0
    for x in nums:
        g = gcd(g, x)
        if g == 1:
            break
    return g
