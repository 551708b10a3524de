"""Word-level dataflow models of the conjugate-channel adder and multiplier.

The units mirror the hardware stage structure — lookup-table partial
products, (4;2) compressors, carry-save rows, final n-bit adders — at word
granularity, so every carry bit that the hardware would wire somewhere is
an explicit field here.  Cross-coupling rule for carry-outs: a real
carry-out weighs 2^n == -+j and lands on the imaginary part as a stored
carry; an imaginary carry-out weighs -+j * 2^n == -1 and lands on the real
part as a stored borrow.

LUT stages are modeled as word functions with the exact table contracts;
``LutBank`` optionally materializes the actual tables (small n) to mirror
an FPGA realization bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import ComplexChannelResidue, FreshOperand, Params, canonical_zero


def _add_fields(n: int, xr: int, xi: int, xz: int,
                yr: int, yb: int, yi: int, yc: int) -> tuple[int, int, int, int]:
    """Adder dataflow on raw fields; returns (r, borrow, i, carry)."""
    mask = (1 << n) - 1
    xnz = xz ^ 1
    sr = xr + yr + ((yb ^ 1) & xnz)
    si = xi + yi + (yc & xnz)
    cn = sr >> n        # real carry-out
    cpn = si >> n       # imaginary carry-out
    # Zero operand forces cn = cpn = 0, so OR merges without aliasing.
    return sr & mask, cpn | (yb & xz), si & mask, cn | (yc & xz)


def add_fresh(x: FreshOperand, y: ComplexChannelResidue, params: Params,
              luts: Optional["LutBank"] = None) -> ComplexChannelResidue:
    """Add a fresh operand into an accumulated channel residue.

    Result value is (value(x) + value(y)) mod (2^2n + 1); the two n-bit
    sums never propagate a carry into each other — the carry-outs become
    the stored borrow/carry of the result.
    """
    if x.sign is not y.sign:
        raise ValueError("operands must live on the same conjugate channel")
    if luts is not None:
        sr, cn = luts.adder_sum(x.xr, y.r, (y.borrow ^ 1) & (x.zflag ^ 1))
        si, cpn = luts.adder_sum(x.xi, y.i, y.carry & (x.zflag ^ 1))
        return ComplexChannelResidue(
            sr, cpn | (y.borrow & x.zflag), si, cn | (y.carry & x.zflag), x.sign
        )
    fields = _add_fields(params.n, x.xr, x.xi, x.zflag, y.r, y.borrow, y.i, y.carry)
    return ComplexChannelResidue(*fields, x.sign)


@dataclass(frozen=True)
class PartialProducts:
    """The four multiplier partial products in high/low halves.

    (1 + xr)(1 + yr) = 2^2n*c + 2^n*h_rr + l_rr
    (1 + xr) * yi    = 2^n*h_ri + l_ri
    xi * (1 + yr)    = 2^n*h_ir + l_ir
    xi * yi          = 2^n*h_ii + l_ii
    """

    c: int
    h_rr: int
    l_rr: int
    h_ri: int
    l_ri: int
    h_ir: int
    l_ir: int
    h_ii: int
    l_ii: int


def lut_partials(x: FreshOperand, y: FreshOperand, params: Params,
                 luts: Optional["LutBank"] = None) -> PartialProducts:
    """Partial products of the nonzero multiplier path (zero path bypasses)."""
    if x.zflag or y.zflag:
        raise ValueError("partial products are only defined on the nonzero path")
    n = params.n
    mask = params.mask
    if luts is not None:
        p1 = luts.pp_inc_inc(x.xr, y.xr)
        p2 = luts.pp_inc_raw(x.xr, y.xi)
        p3 = luts.pp_raw_inc(x.xi, y.xr)
        p4 = luts.pp_raw_raw(x.xi, y.xi)
    else:
        p1 = (1 + x.xr) * (1 + y.xr)
        p2 = (1 + x.xr) * y.xi
        p3 = x.xi * (1 + y.xr)
        p4 = x.xi * y.xi
    return PartialProducts(
        c=p1 >> (2 * n),
        h_rr=(p1 >> n) & mask,
        l_rr=p1 & mask,
        h_ri=p2 >> n,
        l_ri=p2 & mask,
        h_ir=p3 >> n,
        l_ir=p3 & mask,
        h_ii=p4 >> n,
        l_ii=p4 & mask,
    )


@dataclass(frozen=True)
class CompressorOutput:
    """(4;2) compression result: u + v + 2^n*(c_out + v_out) preserves the sum."""

    u: int
    v: int
    c_out: int
    v_out: int


def _compress42(n: int, a: int, b: int, c: int, d: int,
                t_in: int, v_in: int) -> tuple[int, int, int, int]:
    """Word-parallel (4;2) compressor built from two full-adder ranks.

    t_in enters the first rank's LSB column; v_in occupies the free LSB of
    the shifted second-rank carry word.
    """
    mask = (1 << n) - 1
    p = a ^ b ^ c
    t = (((a & b) | (a & c) | (b & c)) << 1) | t_in
    u = (p ^ d ^ t) & mask
    vw = ((((p & d) | (p & t) | (d & t)) & mask) << 1) | v_in
    return u, vw & mask, t >> n, vw >> n


def compress42(a: int, b: int, c: int, d: int, carry_ins: Sequence[int],
               params: Params) -> CompressorOutput:
    """Compress four n-bit words plus up to two carry-in bits."""
    if len(carry_ins) > 2:
        raise ValueError("a (4;2) compressor accepts at most two carry-in bits")
    if any(bit not in (0, 1) for bit in carry_ins):
        raise ValueError("carry-ins must be single bits")
    mask = params.mask
    if any(not 0 <= w <= mask for w in (a, b, c, d)):
        raise ValueError("operand words must fit n bits")
    t_in = carry_ins[0] if len(carry_ins) >= 1 else 0
    v_in = carry_ins[1] if len(carry_ins) >= 2 else 0
    return CompressorOutput(*_compress42(params.n, a, b, c, d, t_in, v_in))


@dataclass(frozen=True)
class MulTrace:
    """Stage-by-stage intermediates of one multiplication."""

    partials: PartialProducts
    real_stage: CompressorOutput
    imag_stage: CompressorOutput
    real_rows: tuple[int, int]  # final adder operands (w, z), +1 implied
    imag_rows: tuple[int, int]


def _mul_fields(n: int, xr: int, xi: int, yr: int, yi: int) -> tuple[int, int, int, int]:
    """Multiplier dataflow on raw nonzero-path fields; returns (r, borrow, i, carry)."""
    mask = (1 << n) - 1

    p1 = (1 + xr) * (1 + yr)
    c = p1 >> (2 * n)
    h_rr = (p1 >> n) & mask
    l_rr = p1 & mask
    p2 = (1 + xr) * yi
    p3 = xi * (1 + yr)
    p4 = xi * yi

    # Real column stack: l_rr + ~l_ii + ~h_ri + ~h_ir + ~c.
    u, vh, cn, vn = _compress42(
        n, l_rr, (p4 & mask) ^ mask, (p2 >> n) ^ mask, (p3 >> n) ^ mask, c ^ 1, 0
    )
    # Imaginary column stack: h_rr + l_ri + l_ir + ~h_ii, absorbing the real
    # stage's carry-outs (each weighs 2^n == -+j).
    u2, vh2, cn2, vn2 = _compress42(
        n, h_rr, p2 & mask, p3 & mask, (p4 >> n) ^ mask, cn, vn
    )

    # Carry-save rows.  The imaginary stage's carry-outs re-cross to the real
    # side complemented (weight 2^2n == -1); the constant 2^n - 2 keeps the
    # imaginary row non-negative.
    b1 = vh | (vn2 ^ 1)
    d1 = cn2 ^ 1
    w = u ^ b1 ^ d1
    carry = ((u & b1) | (u & d1) | (b1 & d1)) << 1
    const = mask ^ 1  # 2^n - 2
    w2 = u2 ^ vh2 ^ const
    carry2 = ((u2 & vh2) | (u2 & const) | (vh2 & const)) << 1
    # Each carry word's LSB slot is free; it hosts the bit crossing over
    # from the opposite side (complemented when the weight flips sign).
    z = (carry & mask) | ((carry2 >> n) ^ 1)
    z2 = (carry2 & mask) | (carry >> n)

    # Final n-bit adders; the real one carries the pending +1.  Real
    # carry-out becomes the stored carry, imaginary carry-out the borrow.
    sr = w + z + 1
    si = w2 + z2
    return sr & mask, si >> n, si & mask, sr >> n


def mul(x: FreshOperand, y: FreshOperand, params: Params,
        luts: Optional["LutBank"] = None) -> ComplexChannelResidue:
    """Multiply two fresh operands on one conjugate channel.

    Result value is (value(x) * value(y)) mod (2^2n + 1).  Either zero flag
    gates the whole pipeline off to the canonical zero.
    """
    if x.sign is not y.sign:
        raise ValueError("operands must live on the same conjugate channel")
    if x.zflag or y.zflag:
        return canonical_zero(x.sign)
    if luts is not None:
        res, _ = _mul_with_trace(x, y, params, luts)
        return res
    fields = _mul_fields(params.n, x.xr, x.xi, y.xr, y.xi)
    return ComplexChannelResidue(*fields, x.sign)


def mul_trace(x: FreshOperand, y: FreshOperand, params: Params) -> tuple[ComplexChannelResidue, Optional[MulTrace]]:
    """Multiply and expose per-stage intermediates (None on the zero path)."""
    if x.sign is not y.sign:
        raise ValueError("operands must live on the same conjugate channel")
    if x.zflag or y.zflag:
        return canonical_zero(x.sign), None
    return _mul_with_trace(x, y, params, None)


def _mul_with_trace(x: FreshOperand, y: FreshOperand, params: Params,
                    luts: Optional["LutBank"]) -> tuple[ComplexChannelResidue, MulTrace]:
    n = params.n
    mask = params.mask
    pp = lut_partials(x, y, params, luts)

    real = CompressorOutput(*_compress42(
        n, pp.l_rr, pp.l_ii ^ mask, pp.h_ri ^ mask, pp.h_ir ^ mask, pp.c ^ 1, 0
    ))
    imag = CompressorOutput(*_compress42(
        n, pp.h_rr, pp.l_ri, pp.l_ir, pp.h_ii ^ mask, real.c_out, real.v_out
    ))

    b1 = real.v | (imag.v_out ^ 1)
    d1 = imag.c_out ^ 1
    w = real.u ^ b1 ^ d1
    carry = ((real.u & b1) | (real.u & d1) | (b1 & d1)) << 1
    const = mask ^ 1  # 2^n - 2
    w2 = imag.u ^ imag.v ^ const
    carry2 = ((imag.u & imag.v) | (imag.u & const) | (imag.v & const)) << 1
    z = (carry & mask) | ((carry2 >> n) ^ 1)
    z2 = (carry2 & mask) | (carry >> n)

    if luts is not None:
        pr, cp = luts.final_sum(w, z, 1)
        pi, bp = luts.final_sum(w2, z2, 0)
    else:
        sr = w + z + 1
        si = w2 + z2
        pr, cp = sr & mask, sr >> n
        pi, bp = si & mask, si >> n

    res = ComplexChannelResidue(pr, bp, pi, cp, x.sign)
    trace = MulTrace(pp, real, imag, (w, z), (w2, z2))
    return res, trace


def intermediate_ri(x: FreshOperand, y: FreshOperand, params: Params) -> tuple[int, int]:
    """Pre-reduction word sums (R, I) of the product derivation.

    Checkpoint between the partial-product identities and the compressor
    schedule: (R + 2^n * I) mod (2^2n + 1) equals the true modular product.
    I may be slightly negative; both are plain integers.
    """
    pp = lut_partials(x, y, params)
    mask = params.mask
    r = pp.l_rr + (pp.l_ii ^ mask) + (pp.h_ri ^ mask) + (pp.h_ir ^ mask) + (pp.c ^ 1) + 3
    i = pp.h_rr + pp.l_ri + pp.l_ir + (pp.h_ii ^ mask) - 2
    return r, i


LUT_N_MAX = 5


class LutBank:
    """Materialized lookup tables mirroring the FPGA realization, n <= 5.

    Word-function and table paths are value-identical; the tables just make
    the 6-input-LUT sizing tangible and testable.
    """

    def __init__(self, params: Params):
        if params.n > LUT_N_MAX:
            raise ValueError(f"table materialization supported for n <= {LUT_N_MAX}")
        n = params.n
        self.n = n
        size = 1 << n
        # Adder/final-adder tables: (a, b, g) -> a + b + g, g a single bit.
        self._sum = [
            [[a + b + g for g in (0, 1)] for b in range(size)] for a in range(size)
        ]
        # Multiplier partial-product tables.
        self._pp_ii = [[(1 + a) * (1 + b) for b in range(size)] for a in range(size)]
        self._pp_ir = [[(1 + a) * b for b in range(size)] for a in range(size)]
        self._pp_ri = [[a * (1 + b) for b in range(size)] for a in range(size)]
        self._pp_rr = [[a * b for b in range(size)] for a in range(size)]

    def adder_sum(self, a: int, b: int, g: int) -> tuple[int, int]:
        """n-bit sum word and its carry-out."""
        s = self._sum[a][b][g]
        return s & ((1 << self.n) - 1), s >> self.n

    final_sum = adder_sum

    def pp_inc_inc(self, a: int, b: int) -> int:
        return self._pp_ii[a][b]

    def pp_inc_raw(self, a: int, b: int) -> int:
        return self._pp_ir[a][b]

    def pp_raw_inc(self, a: int, b: int) -> int:
        return self._pp_ri[a][b]

    def pp_raw_raw(self, a: int, b: int) -> int:
        return self._pp_rr[a][b]
