# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled coefficient kernel.

Same recurrence as _tau_fallback, in C with 128-bit integers. tau(n) grows
like n^{11/2}, so values fit __int128 far beyond desk scale, but the raw
recurrence products (n - 25g) * c(n - g) would overflow it around n ~ 3*10^5.
The accumulator therefore runs in two 64-bit limbs: c is split as
c = hi * 2^64 + lo with hi = c >> 64 (arithmetic) and lo the unsigned low
limb, the small factor m = n - 25g multiplies each limb separately, and the
final exact division by n is performed limb-wise. All narrowing steps are
guarded with overflow intrinsics; an out-of-range coefficient is reported,
never wrapped.
"""

from cuspsums.errors import CoefficientOverflowError

cdef extern from *:
    """
    #include <stdint.h>
    #include <stdlib.h>

    typedef __int128 cs_i128;
    typedef unsigned __int128 cs_u128;

    /* 0 ok; 1 overflow (first bad tau index in *bad); 2 inexact division
       (impossible for the genuine series; guards memory bugs); 3 alloc. */
    static int cs_tau_records(int64_t count, int max_bits,
                              unsigned char *out, int64_t *bad)
    {
        if (count <= 0) return 0;

        int64_t nterms = 0, k, cap = 4;
        for (k = 1; k * (3 * k - 1) / 2 < count; k++) cap += 2;
        int64_t *g = (int64_t *)malloc((size_t)cap * sizeof(int64_t));
        int8_t *s = (int8_t *)malloc((size_t)cap * sizeof(int8_t));
        cs_i128 *c = (cs_i128 *)malloc((size_t)count * sizeof(cs_i128));
        if (!g || !s || !c) { free(g); free(s); free(c); return 3; }
        for (k = 1; ; k++) {
            int64_t g1 = k * (3 * k - 1) / 2;
            if (g1 >= count) break;
            int8_t sgn = (k & 1) ? -1 : 1;
            g[nterms] = g1; s[nterms++] = sgn;
            int64_t g2 = k * (3 * k + 1) / 2;
            if (g2 < count) { g[nterms] = g2; s[nterms++] = sgn; }
        }

        const cs_i128 lo_mask = (((cs_i128)1) << 64) - 1;
        const cs_i128 two64 = ((cs_i128)1) << 64;
        const int use_limit = (max_bits < 128);
        const cs_i128 limit = use_limit ? (((cs_i128)1) << (max_bits - 1)) : 0;

        c[0] = 1;
        for (int64_t n = 1; n < count; n++) {
            cs_i128 s_hi = 0, s_lo = 0;
            for (int64_t t = 0; t < nterms && g[t] <= n; t++) {
                /* |m| <= 24n and |hi| < 2^63, lo < 2^64: partial sums stay
                   below 2^127 for every n reachable in 128-bit range */
                cs_i128 m = (cs_i128)(n - 25 * g[t]);
                cs_i128 v = c[n - g[t]];
                cs_i128 hi = v >> 64;
                cs_i128 lo = v & lo_mask;
                if (s[t] < 0) { s_hi += m * hi; s_lo += m * lo; }
                else          { s_hi -= m * hi; s_lo -= m * lo; }
            }
            /* exact division of s_hi * 2^64 + s_lo by n, limb-wise */
            cs_i128 q1 = s_hi / n, r1 = s_hi % n;
            if (r1 < 0) { q1 -= 1; r1 += n; }
            cs_i128 t2 = r1 * two64 + s_lo;
            if (t2 % n != 0) { free(g); free(s); free(c); return 2; }
            cs_i128 high, val;
            if (__builtin_mul_overflow(q1, two64, &high) ||
                __builtin_add_overflow(high, t2 / n, &val) ||
                (use_limit && (val >= limit || val < -limit))) {
                *bad = n + 1;
                free(g); free(s); free(c);
                return 1;
            }
            c[n] = val;
        }

        for (int64_t i = 0; i < count; i++) {
            cs_u128 u = (cs_u128)c[i];
            unsigned char *p = out + 16 * i;
            for (int b = 0; b < 16; b++) { p[b] = (unsigned char)u; u >>= 8; }
        }
        free(g); free(s); free(c);
        return 0;
    }
    """
    int cs_tau_records(long long count, int max_bits,
                       unsigned char *out, long long *bad) nogil


def tau_records(n_max, max_bits=128):
    """tau(1..n_max) packed as n_max little-endian signed 16-byte records."""
    cdef long long count = n_max
    cdef int bits = max_bits
    if count < 0:
        raise ValueError(f"need n_max >= 0, got {n_max}")
    if not 16 <= bits <= 128:
        raise ValueError(f"max_bits must lie in [16, 128], got {max_bits}")
    if count == 0:
        return b""
    buf = bytearray(16 * count)
    cdef unsigned char[::1] view = buf
    cdef long long bad = 0
    cdef int rc
    with nogil:
        rc = cs_tau_records(count, bits, &view[0], &bad)
    if rc == 1:
        raise CoefficientOverflowError(bad, bits)
    if rc != 0:
        raise RuntimeError(f"coefficient kernel failed internally (rc={rc})")
    return bytes(buf)
