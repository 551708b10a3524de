# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled sweep kernels.

Each kernel mirrors the pure-Python dataflow and case ordering exactly and
returns (failures, first_failing_case_index or -1) over [lo, hi).  Input
decoding stays in sync with cxrns.sweeps, which also reconstructs
counterexample records from the returned index.
"""

from libc.stdint cimport int64_t, uint64_t

cdef extern from *:
    ctypedef unsigned long long uint128_t "unsigned __int128"


# --- counter-based PRNG (splitmix64) ----------------------------------------

cdef inline uint64_t _mix64(uint64_t x) noexcept:
    x = (x ^ (x >> 30)) * <uint64_t>0xBF58476D1CE4E5B9u
    x = (x ^ (x >> 27)) * <uint64_t>0x94D049BB133111EBu
    return x ^ (x >> 31)


cdef inline uint64_t _draw(uint64_t seed, uint64_t counter) noexcept:
    return _mix64(seed + (counter + 1) * <uint64_t>0x9E3779B97F4A7C15u)


def draw(seed, counter):
    """Expose the raw PRNG stream (parity checks against the Python mirror)."""
    return _draw(<uint64_t>seed, <uint64_t>counter)


# --- scalar dataflow ---------------------------------------------------------

cdef inline void _add_fields(int n, uint64_t xr, uint64_t xi, uint64_t xz,
                             uint64_t yr, uint64_t yb, uint64_t yi, uint64_t yc,
                             uint64_t* out) noexcept:
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    cdef uint64_t xnz = xz ^ 1
    cdef uint64_t sr = xr + yr + ((yb ^ 1) & xnz)
    cdef uint64_t si = xi + yi + (yc & xnz)
    out[0] = sr & mask
    out[1] = (si >> n) | (yb & xz)
    out[2] = si & mask
    out[3] = (sr >> n) | (yc & xz)


cdef inline void _mul_fields(int n, uint64_t xr, uint64_t xi,
                             uint64_t yr, uint64_t yi, uint64_t* out) noexcept:
    cdef uint64_t mask = (<uint64_t>1 << n) - 1
    cdef uint64_t p1 = (1 + xr) * (1 + yr)
    cdef uint64_t c = p1 >> (2 * n)
    cdef uint64_t h_rr = (p1 >> n) & mask
    cdef uint64_t l_rr = p1 & mask
    cdef uint64_t p2 = (1 + xr) * yi
    cdef uint64_t p3 = xi * (1 + yr)
    cdef uint64_t p4 = xi * yi

    cdef uint64_t a = l_rr
    cdef uint64_t b = (p4 & mask) ^ mask
    cdef uint64_t cc = (p2 >> n) ^ mask
    cdef uint64_t d = (p3 >> n) ^ mask
    cdef uint64_t p = a ^ b ^ cc
    cdef uint64_t t = (((a & b) | (a & cc) | (b & cc)) << 1) | (c ^ 1)
    cdef uint64_t u = (p ^ d ^ t) & mask
    cdef uint64_t vw = ((((p & d) | (p & t) | (d & t)) & mask) << 1)
    cdef uint64_t vh = vw & mask
    cdef uint64_t cn = t >> n
    cdef uint64_t vn = vw >> n

    a = h_rr
    b = p2 & mask
    cc = p3 & mask
    d = (p4 >> n) ^ mask
    p = a ^ b ^ cc
    t = (((a & b) | (a & cc) | (b & cc)) << 1) | cn
    cdef uint64_t u2 = (p ^ d ^ t) & mask
    vw = ((((p & d) | (p & t) | (d & t)) & mask) << 1) | vn
    cdef uint64_t vh2 = vw & mask
    cdef uint64_t cn2 = t >> n
    cdef uint64_t vn2 = vw >> n

    cdef uint64_t b1 = vh | (vn2 ^ 1)
    cdef uint64_t d1 = cn2 ^ 1
    cdef uint64_t w = u ^ b1 ^ d1
    cdef uint64_t carry = ((u & b1) | (u & d1) | (b1 & d1)) << 1
    cdef uint64_t cst = mask ^ 1
    cdef uint64_t w2 = u2 ^ vh2 ^ cst
    cdef uint64_t carry2 = ((u2 & vh2) | (u2 & cst) | (vh2 & cst)) << 1
    cdef uint64_t z = (carry & mask) | ((carry2 >> n) ^ 1)
    cdef uint64_t z2 = (carry2 & mask) | (carry >> n)

    cdef uint64_t sr = w + z + 1
    cdef uint64_t si = w2 + z2
    out[0] = sr & mask
    out[1] = si >> n
    out[2] = si & mask
    out[3] = sr >> n


cdef inline uint64_t _phi(int n, uint64_t m, uint64_t* f) noexcept:
    # (r - borrow + 2^n*(i + carry)) mod m; r - borrow >= -1.
    return (f[0] + ((f[2] + f[3]) << n) + m - f[1]) % m


cdef inline uint64_t _forward_value(int n, uint64_t m, uint64_t z) noexcept:
    cdef uint64_t wmask = (<uint64_t>1 << (2 * n)) - 1
    cdef uint64_t z2 = z >> (4 * n)
    cdef uint64_t z1 = (z >> (2 * n)) & wmask
    cdef uint64_t z0 = z & wmask
    cdef uint64_t z1b = z1 ^ wmask
    cdef uint64_t u = z2 ^ z1b ^ z0
    cdef uint64_t cw = ((z2 & z1b) | (z2 & z0) | (z1b & z0)) << 1
    cdef uint64_t v = (cw & wmask) | ((cw >> (2 * n)) ^ 1)
    cdef uint64_t t = u + v
    if t >= m:
        t -= m
    # flagged reinterpretation: value = bits + (1 - zflag)
    return (t & wmask) + 1 - (t >> (2 * n))


cdef inline uint64_t _fold_22n1(int n, uint64_t m, uint64_t z) noexcept:
    cdef uint64_t mask2 = (<uint64_t>1 << (2 * n)) - 1
    cdef int64_t acc = 0
    cdef int64_t s = 1
    while z:
        acc += s * <int64_t>(z & mask2)
        s = -s
        z >>= (2 * n)
    acc %= <int64_t>m
    if acc < 0:
        acc += <int64_t>m
    return <uint64_t>acc


def add_fields(n, xr, xi, xz, yr, yb, yi, yc):
    cdef uint64_t out[4]
    _add_fields(<int>n, xr, xi, xz, yr, yb, yi, yc, out)
    return out[0], out[1], out[2], out[3]


def mul_fields(n, xr, xi, yr, yi):
    cdef uint64_t out[4]
    _mul_fields(<int>n, xr, xi, yr, yi, out)
    return out[0], out[1], out[2], out[3]


def forward_value(n, z):
    cdef uint64_t m = ((<uint64_t>1) << (2 * <int>n)) + 1
    return _forward_value(<int>n, m, <uint64_t>z)


# --- sweep kernels -----------------------------------------------------------

cdef inline void _split_fresh(int n, uint64_t x, uint64_t* xr, uint64_t* xi,
                              uint64_t* xz) noexcept:
    if x == 0:
        xr[0] = 0
        xi[0] = 0
        xz[0] = 1
    else:
        xr[0] = (x - 1) & (((<uint64_t>1) << n) - 1)
        xi[0] = (x - 1) >> n
        xz[0] = 0


def sweep_adder_exh(n_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t lo = lo_, hi = hi_
    cdef uint64_t m = ((<uint64_t>1) << (2 * n)) + 1
    cdef uint64_t mask = ((<uint64_t>1) << n) - 1
    cdef uint64_t states = (<uint64_t>4) << (2 * n)
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t idx, x, st, r, b, i, c, xr, xi, xz, want, got
    cdef uint64_t f[4]
    for idx in range(lo, hi):
        x = idx // states
        st = idx % states
        b = st & 1
        c = (st >> 1) & 1
        r = (st >> 2) & mask
        i = st >> (n + 2)
        _split_fresh(n, x, &xr, &xi, &xz)
        _add_fields(n, xr, xi, xz, r, b, i, c, f)
        got = _phi(n, m, f)
        want = (x + r + ((i + c) << n) + m - b) % m
        if got != want:
            failures += 1
            if first < 0:
                first = <int64_t>idx
    return failures, first


def sweep_adder_rand(n_, seed_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t seed = seed_, lo = lo_, hi = hi_
    cdef uint64_t m = ((<uint64_t>1) << (2 * n)) + 1
    cdef uint64_t top1 = ((<uint64_t>1) << (2 * n)) + 1  # x range size
    cdef uint64_t size = (<uint64_t>1) << n
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t k, x, r, b, i, c, xr, xi, xz, want, got
    cdef uint64_t f[4]
    for k in range(lo, hi):
        x = _draw(seed, k * 8) % top1
        r = _draw(seed, k * 8 + 1) % size
        i = _draw(seed, k * 8 + 2) % size
        b = _draw(seed, k * 8 + 3) & 1
        c = _draw(seed, k * 8 + 4) & 1
        _split_fresh(n, x, &xr, &xi, &xz)
        _add_fields(n, xr, xi, xz, r, b, i, c, f)
        got = _phi(n, m, f)
        want = (x + r + ((i + c) << n) + m - b) % m
        if got != want:
            failures += 1
            if first < 0:
                first = <int64_t>k
    return failures, first


def sweep_mul_exh(n_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t lo = lo_, hi = hi_
    cdef uint64_t m = ((<uint64_t>1) << (2 * n)) + 1
    cdef uint64_t top1 = m  # operand values 0 .. 2^2n
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t idx, x, y, xr, xi, xz, yr, yi, yz, want, got
    cdef uint64_t f[4]
    for idx in range(lo, hi):
        x = idx // top1
        y = idx % top1
        _split_fresh(n, x, &xr, &xi, &xz)
        _split_fresh(n, y, &yr, &yi, &yz)
        if xz or yz:
            got = 0
        else:
            _mul_fields(n, xr, xi, yr, yi, f)
            got = _phi(n, m, f)
        want = <uint64_t>(((<uint128_t>x) * y) % m)
        if got != want:
            failures += 1
            if first < 0:
                first = <int64_t>idx
    return failures, first


def sweep_mul_rand(n_, seed_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t seed = seed_, lo = lo_, hi = hi_
    cdef uint64_t m = ((<uint64_t>1) << (2 * n)) + 1
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t k, x, y, xr, xi, xz, yr, yi, yz, want, got
    cdef uint64_t f[4]
    for k in range(lo, hi):
        x = _draw(seed, k * 8) % m
        y = _draw(seed, k * 8 + 1) % m
        _split_fresh(n, x, &xr, &xi, &xz)
        _split_fresh(n, y, &yr, &yi, &yz)
        if xz or yz:
            got = 0
        else:
            _mul_fields(n, xr, xi, yr, yi, f)
            got = _phi(n, m, f)
        want = <uint64_t>(((<uint128_t>x) * y) % m)
        if got != want:
            failures += 1
            if first < 0:
                first = <int64_t>k
    return failures, first


def sweep_checkpoint_exh(n_, lo_, hi_):
    # Pre-reduction (R, I) checkpoint over all nonzero operand pairs.
    cdef int n = n_
    cdef uint64_t lo = lo_, hi = hi_
    cdef uint64_t m = ((<uint64_t>1) << (2 * n)) + 1
    cdef uint64_t mask = ((<uint64_t>1) << n) - 1
    cdef uint64_t span = (<uint64_t>1) << (2 * n)
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t idx, x, y, xr, xi, xz, yr, yi, yz, want
    cdef uint64_t p1, p2, p3, p4, c
    cdef int64_t r_sum, i_sum, t
    for idx in range(lo, hi):
        x = 1 + idx // span
        y = 1 + idx % span
        _split_fresh(n, x, &xr, &xi, &xz)
        _split_fresh(n, y, &yr, &yi, &yz)
        p1 = (1 + xr) * (1 + yr)
        c = p1 >> (2 * n)
        p2 = (1 + xr) * yi
        p3 = xi * (1 + yr)
        p4 = xi * yi
        r_sum = <int64_t>((p1 & mask) + ((p4 & mask) ^ mask) + ((p2 >> n) ^ mask)
                          + ((p3 >> n) ^ mask) + (c ^ 1) + 3)
        i_sum = <int64_t>(((p1 >> n) & mask) + (p2 & mask) + (p3 & mask)
                          + ((p4 >> n) ^ mask)) - 2
        t = (r_sum + i_sum * ((<int64_t>1) << n)) % <int64_t>m
        if t < 0:
            t += <int64_t>m
        want = <uint64_t>(((<uint128_t>x) * y) % m)
        if <uint64_t>t != want:
            failures += 1
            if first < 0:
                first = <int64_t>idx
    return failures, first


def sweep_forward_exh(n_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t lo = lo_, hi = hi_
    cdef uint64_t m = ((<uint64_t>1) << (2 * n)) + 1
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t z
    for z in range(lo, hi):
        if _forward_value(n, m, z) != z % m:
            failures += 1
            if first < 0:
                first = <int64_t>z
    return failures, first


def sweep_forward_rand(n_, seed_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t seed = seed_, lo = lo_, hi = hi_
    cdef uint64_t m = ((<uint64_t>1) << (2 * n)) + 1
    cdef uint64_t span = (((<uint64_t>1) << n)) * ((((<uint64_t>1) << (4 * n))) - 1)
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t k, z
    for k in range(lo, hi):
        z = _draw(seed, k * 8) % span
        if _forward_value(n, m, z) != z % m:
            failures += 1
            if first < 0:
                first = <int64_t>k
    return failures, first


cdef inline uint64_t _roundtrip_x(int n, int p, uint64_t m2, uint64_t m3,
                                  uint64_t m4, int64_t mu1, int64_t mu2,
                                  int64_t mu3, int64_t m1_tail, uint64_t z) noexcept:
    cdef uint64_t mask1 = (((<uint64_t>1) << (n + p))) - 1
    cdef uint64_t wide = (((<uint64_t>1) << n)) * ((((<uint64_t>1) << (4 * n))) - 1)
    cdef int64_t x1 = <int64_t>(z & mask1)
    cdef int64_t x2 = <int64_t>(z % m2)
    cdef int64_t x3 = <int64_t>(z % m3)
    cdef int64_t x4
    if z < wide:
        x4 = <int64_t>_forward_value(n, m4, z)
    else:
        x4 = <int64_t>_fold_22n1(n, m4, z)
    cdef int64_t acc = mu1 * (x2 - x1) + mu2 * (x3 - x2) + mu3 * (x4 - x3)
    acc %= m1_tail
    if acc < 0:
        acc += m1_tail
    return <uint64_t>(x1 + ((<int64_t>(mask1 + 1)) * acc))


def sweep_roundtrip_exh(n_, p_, mu1_, mu2_, mu3_, lo_, hi_):
    cdef int n = n_, p = p_
    cdef int64_t mu1 = mu1_, mu2 = mu2_, mu3 = mu3_
    cdef uint64_t lo = lo_, hi = hi_
    cdef uint64_t m2 = (((<uint64_t>1) << n)) - 1
    cdef uint64_t m3 = (((<uint64_t>1) << n)) + 1
    cdef uint64_t m4 = (((<uint64_t>1) << (2 * n))) + 1
    cdef int64_t m1_tail = <int64_t>(m2 * m3 * m4)
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t z
    for z in range(lo, hi):
        if _roundtrip_x(n, p, m2, m3, m4, mu1, mu2, mu3, m1_tail, z) != z:
            failures += 1
            if first < 0:
                first = <int64_t>z
    return failures, first


def sweep_roundtrip_rand(n_, p_, mu1_, mu2_, mu3_, seed_, lo_, hi_):
    cdef int n = n_, p = p_
    cdef int64_t mu1 = mu1_, mu2 = mu2_, mu3 = mu3_
    cdef uint64_t seed = seed_, lo = lo_, hi = hi_
    cdef uint64_t m2 = (((<uint64_t>1) << n)) - 1
    cdef uint64_t m3 = (((<uint64_t>1) << n)) + 1
    cdef uint64_t m4 = (((<uint64_t>1) << (2 * n))) + 1
    cdef int64_t m1_tail = <int64_t>(m2 * m3 * m4)
    cdef uint64_t span = (((<uint64_t>1) << (n + p))) * (m2 * m3 * m4)
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t k, z
    for k in range(lo, hi):
        z = _draw(seed, k * 8) % span
        if _roundtrip_x(n, p, m2, m3, m4, mu1, mu2, mu3, m1_tail, z) != z:
            failures += 1
            if first < 0:
                first = <int64_t>k
    return failures, first


cdef inline int _compress_ok(int n, uint64_t a, uint64_t b, uint64_t cc,
                             uint64_t d, uint64_t t0, uint64_t v0) noexcept:
    cdef uint64_t mask = (((<uint64_t>1) << n)) - 1
    cdef uint64_t pw = a ^ b ^ cc
    cdef uint64_t t = (((a & b) | (a & cc) | (b & cc)) << 1) | t0
    cdef uint64_t u = (pw ^ d ^ t) & mask
    cdef uint64_t vw = ((((pw & d) | (pw & t) | (d & t)) & mask) << 1) | v0
    cdef uint64_t lhs = u + (vw & mask) + (((t >> n) + (vw >> n)) << n)
    return lhs == a + b + cc + d + t0 + v0


def sweep_compressor_exh(n_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t lo = lo_, hi = hi_
    cdef uint64_t mask = (((<uint64_t>1) << n)) - 1
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t idx, a, b, cc, d, t0, v0
    for idx in range(lo, hi):
        v0 = idx & 1
        t0 = (idx >> 1) & 1
        d = (idx >> 2) & mask
        cc = (idx >> (2 + n)) & mask
        b = (idx >> (2 + 2 * n)) & mask
        a = idx >> (2 + 3 * n)
        if not _compress_ok(n, a, b, cc, d, t0, v0):
            failures += 1
            if first < 0:
                first = <int64_t>idx
    return failures, first


def sweep_compressor_rand(n_, seed_, lo_, hi_):
    cdef int n = n_
    cdef uint64_t seed = seed_, lo = lo_, hi = hi_
    cdef uint64_t size = ((<uint64_t>1) << n)
    cdef uint64_t failures = 0
    cdef int64_t first = -1
    cdef uint64_t k, a, b, cc, d, t0, v0
    for k in range(lo, hi):
        a = _draw(seed, k * 8) % size
        b = _draw(seed, k * 8 + 1) % size
        cc = _draw(seed, k * 8 + 2) % size
        d = _draw(seed, k * 8 + 3) % size
        t0 = _draw(seed, k * 8 + 4) & 1
        v0 = _draw(seed, k * 8 + 5) & 1
        if not _compress_ok(n, a, b, cc, d, t0, v0):
            failures += 1
            if first < 0:
                first = <int64_t>k
    return failures, first
