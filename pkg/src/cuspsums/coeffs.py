"""Exact coefficient tables for the weight-12 cusp form.

tau(n) are the integer Fourier coefficients of q * prod(1 - q^n)^24; the
normalized values a(n) = tau(n) / n^{(kappa-1)/2} satisfy |a(n)| <= d(n)
(divisor count) and the Hecke relations

    tau(m n) = tau(m) tau(n)                       for gcd(m, n) = 1,
    tau(p^{r+1}) = tau(p) tau(p^r) - p^{kappa-1} tau(p^{r-1}).

Generation runs through one of two kernels implementing the same contract: a
compiled 128-bit core (cuspsums._tau_core, built from Cython) and a pure
Python fallback (cuspsums._tau_fallback). The compiled kernel is selected
automatically when present; at n_max = 10^6 it is several hundred times
faster. Exactness is identical either way and is pinned by tests against a
schoolbook truncated-product oracle.

Tables are cached on disk in a fixed little-endian format (see save_cache);
normalized values are always recomputed on load, never stored.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from cuspsums import _tau_fallback
from cuspsums.errors import CacheFormatError

try:
    from cuspsums import _tau_core
except ImportError:  # pure-Python install; the fallback kernel serves
    _tau_core = None

COMPILED_AVAILABLE = _tau_core is not None

CACHE_MAGIC = b"CUSP"
CACHE_VERSION = 1
_RECORD_BYTES = 16


@dataclass
class CoefficientTable:
    """Exact tau(1..n_max) plus normalized double-precision a(n).

    Treat as immutable once built; every consumer shares it read-only.
    """

    weight: int
    n_max: int
    tau: list[int]
    a: np.ndarray | None = field(default=None, repr=False)

    def tau_of(self, n: int) -> int:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside table range 1..{self.n_max}")
        return self.tau[n - 1]

    def a_of(self, n: int) -> float:
        if not 1 <= n <= self.n_max:
            raise IndexError(f"n={n} outside table range 1..{self.n_max}")
        return float(self.a[n - 1])


def _records_to_ints(buf: bytes) -> list[int]:
    return [
        int.from_bytes(buf[i: i + _RECORD_BYTES], "little", signed=True)
        for i in range(0, len(buf), _RECORD_BYTES)
    ]


def tau_sequence(n_max: int, max_bits: int = 128, backend: str | None = None) -> list[int]:
    """Exact tau(1..n_max), choosing the kernel without any other table setup."""
    if backend is None:
        backend = "compiled" if COMPILED_AVAILABLE else "python"
    if backend == "compiled":
        if not COMPILED_AVAILABLE:
            raise RuntimeError("compiled kernel requested but cuspsums._tau_core is not built")
        return _records_to_ints(_tau_core.tau_records(n_max, max_bits))
    if backend == "python":
        return _tau_fallback.tau_ints(n_max, max_bits)
    raise ValueError(f"unknown backend {backend!r}; use 'compiled' or 'python'")


def generate_tau(n_max: int, weight: int = 12, max_bits: int = 128,
                 backend: str | None = None) -> CoefficientTable:
    """Generate and normalize a table of the first n_max coefficients.

    Cost is O(n_max^{3/2}) exact integer operations. Coefficients outside the
    signed max_bits range raise CoefficientOverflowError naming the first
    offending n; nothing ever wraps.
    """
    if n_max < 1:
        raise ValueError(f"need n_max >= 1, got {n_max}")
    if weight != 12:
        raise ValueError(f"only the weight-12 form is generated, got weight={weight}")
    table = CoefficientTable(weight=weight, n_max=int(n_max),
                             tau=tau_sequence(int(n_max), max_bits, backend))
    return normalize(table)


def normalize(table: CoefficientTable) -> CoefficientTable:
    """Fill a(n) = tau(n) / n^{(weight-1)/2} in double precision.

    Each entry is one correctly rounded integer-to-double conversion, one
    power, and one division: well under the 4-ulp contract.
    """
    n = table.n_max
    exponent = (table.weight - 1) / 2.0
    tau_f = np.fromiter((float(t) for t in table.tau), dtype=float, count=n)
    table.a = tau_f / np.arange(1, n + 1, dtype=float) ** exponent
    return table


def divisor_counts(n_max: int) -> np.ndarray:
    """d(1..n_max) by divisor enumeration; entry [n-1] is d(n)."""
    d = np.zeros(n_max, dtype=np.int64)
    for i in range(1, n_max + 1):
        d[i - 1:: i] += 1
    return d


@dataclass(frozen=True)
class DeligneReport:
    max_ratio: float
    argmax_n: int
    first_violation: int | None


def deligne_check(table: CoefficientTable) -> DeligneReport:
    """Scan |a(n)| / d(n) over the whole table.

    The bound is a theorem; a violation beyond rounding slack means the table
    is corrupt. Ratio 1.0 at n=1 is the equality case.
    """
    if table.a is None:
        raise ValueError("table is not normalized")
    ratios = np.abs(table.a) / divisor_counts(table.n_max)
    arg = int(np.argmax(ratios))
    bad = np.nonzero(ratios > 1.0 + 1e-12)[0]
    return DeligneReport(
        max_ratio=float(ratios[arg]),
        argmax_n=arg + 1,
        first_violation=int(bad[0]) + 1 if bad.size else None,
    )


def smallest_prime_factors(n_max: int) -> np.ndarray:
    """spf[n] for 0 <= n <= n_max (spf[n] = n for n prime, 0 for n < 2)."""
    spf = np.arange(n_max + 1, dtype=np.int64)
    spf[:2] = 0
    for i in range(2, math.isqrt(n_max) + 1):
        if spf[i] == i:
            block = spf[i * i:: i]
            np.minimum(block, i, out=block)
    return spf


@dataclass(frozen=True)
class HeckeReport:
    checks: int
    first_failure: int | None


def hecke_multiplicativity_check(table: CoefficientTable) -> HeckeReport:
    """tau(n) = tau(p^a) * tau(n / p^a) for every composite n in the table,
    split at the smallest prime factor. Exact integer comparison."""
    spf = smallest_prime_factors(table.n_max)
    tau = table.tau
    checks = 0
    for n in range(2, table.n_max + 1):
        p = int(spf[n])
        if p == n:
            continue
        m = p
        rest = n // p
        while rest % p == 0:
            m *= p
            rest //= p
        if rest == 1:
            continue  # prime power: covered by the recursion check
        checks += 1
        if tau[n - 1] != tau[m - 1] * tau[rest - 1]:
            return HeckeReport(checks, n)
    return HeckeReport(checks, None)


def hecke_prime_power_check(table: CoefficientTable) -> HeckeReport:
    """tau(p^{r+1}) = tau(p) tau(p^r) - p^{weight-1} tau(p^{r-1}) for all
    prime powers in the table. Exact integer comparison."""
    spf = smallest_prime_factors(table.n_max)
    tau = table.tau
    pk = table.weight - 1
    checks = 0
    for p in range(2, table.n_max + 1):
        if int(spf[p]) != p:
            continue
        prev2, prev1 = 1, tau[p - 1]  # tau(p^0), tau(p^1)
        power = p * p
        while power <= table.n_max:
            checks += 1
            expected = tau[p - 1] * prev1 - p**pk * prev2
            if tau[power - 1] != expected:
                return HeckeReport(checks, power)
            prev2, prev1 = prev1, tau[power - 1]
            power *= p
    return HeckeReport(checks, None)


def save_cache(table: CoefficientTable, path) -> None:
    """Write magic | version u32 | weight u32 | N u64 | N 16-byte records."""
    header = struct.pack("<4sIIQ", CACHE_MAGIC, CACHE_VERSION, table.weight, table.n_max)
    records = b"".join(
        t.to_bytes(_RECORD_BYTES, "little", signed=True) for t in table.tau
    )
    Path(path).write_bytes(header + records)


def load_cache(path, weight: int = 12) -> CoefficientTable:
    """Read a cache written by save_cache and recompute the normalized a(n)."""
    data = Path(path).read_bytes()
    if len(data) < 20:
        raise CacheFormatError(f"{path}: truncated header ({len(data)} bytes)")
    magic, version, kappa, n = struct.unpack_from("<4sIIQ", data, 0)
    if magic != CACHE_MAGIC:
        raise CacheFormatError(f"{path}: bad magic {magic!r}, expected {CACHE_MAGIC!r}")
    if version != CACHE_VERSION:
        raise CacheFormatError(f"{path}: format version {version}, expected {CACHE_VERSION}")
    if kappa != weight:
        raise CacheFormatError(f"{path}: cache holds weight {kappa}, expected {weight}")
    expected = 20 + _RECORD_BYTES * n
    if len(data) != expected:
        raise CacheFormatError(
            f"{path}: {len(data)} bytes, expected {expected} for {n} records"
        )
    table = CoefficientTable(weight=int(kappa), n_max=int(n),
                             tau=_records_to_ints(data[20:]))
    return normalize(table)
