"""Pure-Python coefficient kernel.

Reference implementation of the same contract as the compiled core in
_tau_core: exact tau(1..n) via the logarithmic-derivative recurrence of
q * prod(1 - q^n)^24 against the sparse pentagonal expansion of prod(1 - q^n).
Writing P(q) = prod(1-q^n)^24 = sum c(j) q^j and using 24 E'P = P'E for
E = prod(1-q^n) gives

    n * c(n) = - sum over pentagonal g of s_g * (n - 25 g) * c(n - g),

with s_g the pentagonal sign, so each coefficient costs O(sqrt(n)) exact
integer operations and tau(n) = c(n-1). Python integers never overflow; the
width check below exists so both kernels enforce one contract.
"""

from __future__ import annotations

from cuspsums.errors import CoefficientOverflowError


def _pentagonal_terms(count: int) -> list[tuple[int, int]]:
    """(exponent, sign) pairs of prod(1-q^n) below count, ascending."""
    terms = []
    k = 1
    while k * (3 * k - 1) // 2 < count:
        sign = -1 if k % 2 else 1
        g1 = k * (3 * k - 1) // 2
        terms.append((g1, sign))
        g2 = k * (3 * k + 1) // 2
        if g2 < count:
            terms.append((g2, sign))
        k += 1
    return terms


def tau_ints(n_max: int, max_bits: int = 128) -> list[int]:
    """tau(1..n_max) as exact Python integers.

    Raises CoefficientOverflowError at the first n whose tau(n) falls outside
    the signed max_bits range, mirroring the compiled kernel exactly.
    """
    if n_max < 0:
        raise ValueError(f"need n_max >= 0, got {n_max}")
    if not 16 <= max_bits <= 128:
        raise ValueError(f"max_bits must lie in [16, 128], got {max_bits}")
    if n_max == 0:
        return []
    limit = 1 << (max_bits - 1)
    pent = _pentagonal_terms(n_max)
    c = [0] * n_max
    c[0] = 1
    for n in range(1, n_max):
        s = 0
        for g, sign in pent:
            if g > n:
                break
            s += sign * (n - 25 * g) * c[n - g]
        q, rem = divmod(-s, n)
        if rem:
            raise ArithmeticError(f"recurrence gave a non-integer at n={n}")
        if not -limit <= q < limit:
            raise CoefficientOverflowError(n + 1, max_bits)
        c[n] = q
    return c
