"""Brute-force reference arithmetic, trusted before any dataflow unit exists.

Everything here is slow, obvious, and arbitrary-precision.  The module is
deliberately kept import-independent of the dataflow modules: a unit under
test is always passed *into* check_unit, never imported, so the checking
path cannot inherit a dataflow bug.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass
from typing import Callable

from .core import (
    ChannelSign,
    ComplexChannelResidue,
    FreshOperand,
    GaussianInt,
    Params,
    channel_value,
)
from .reporting import VerifyReport


@dataclass(frozen=True)
class OracleContext:
    """Channel width plus the composite modulus 2^2n + 1."""

    n: int

    @property
    def modulus_22n1(self) -> int:
        return (1 << (2 * self.n)) + 1


def ref_mod(z: int, m: int) -> int:
    """Remainder of integer division, arbitrary precision."""
    if m < 2:
        raise ValueError(f"modulus must be >= 2, got {m}")
    if z < 0:
        raise ValueError(f"operand must be non-negative, got {z}")
    return z % m


def _round_nearest_ties_to_zero(a: int, b: int) -> int:
    """Nearest integer to a/b (b > 0); exact halves round toward zero."""
    q = a // b
    r = a - q * b
    twice = 2 * r
    if twice > b or (twice == b and q < 0):
        q += 1
    return q


def gaussian_mod(x: int, n: int, sign: ChannelSign) -> GaussianInt:
    """Canonical residue of x modulo 2^n - j (MINUS) or 2^n + j (PLUS).

    Exact Gaussian division with a rounded quotient: the result q satisfies
    x - q divisible by the modulus, and mapping j onto +-2^n recovers
    x mod (2^2n + 1).  Canonical form means the rounded-quotient remainder;
    only the integer value matters downstream.
    """
    if x < 0:
        raise ValueError(f"operand must be non-negative, got {x}")
    im = -1 if sign is ChannelSign.MINUS else 1
    modulus = GaussianInt(1 << n, im)
    norm = modulus.norm()
    t = GaussianInt(x, 0) * modulus.conj()
    q = GaussianInt(
        _round_nearest_ties_to_zero(t.re, norm),
        _round_nearest_ties_to_zero(t.im, norm),
    )
    return GaussianInt(x, 0) - q * modulus


def gaussian_value(g: GaussianInt, n: int, sign: ChannelSign) -> int:
    """Map j onto +-2^n and reduce: the integer a Gaussian residue stands for."""
    unit = (1 << n) if sign is ChannelSign.MINUS else -(1 << n)
    return (g.re + unit * g.im) % ((1 << (2 * n)) + 1)


def _fresh(v: int, params: Params, sign: ChannelSign) -> FreshOperand:
    # Independent re-derivation of the converter's field routing.
    if v == 0:
        return FreshOperand(0, 0, 1, sign)
    bits = v - 1
    return FreshOperand(bits & params.mask, bits >> params.n, 0, sign)


def check_unit(
    unit: str,
    op: Callable,
    params: Params,
    *,
    mode: str = "exhaustive",
    samples: int = 10_000,
    seed: int = 0,
) -> VerifyReport:
    """Sweep a channel operation and compare values against plain modular math.

    unit is "adder" or "multiplier"; op is called with the same signature as
    the corresponding dataflow operation.  Exhaustive mode covers every fresh
    operand (and, for the adder, every accumulator state); random mode draws
    `samples` seeded cases.  The first counterexample is reported verbatim
    and sweeping never raises on a mismatch.
    """
    if unit not in ("adder", "multiplier"):
        raise ValueError(f"unknown unit {unit!r}")
    if mode not in ("exhaustive", "random"):
        raise ValueError(f"unknown mode {mode!r}")

    n = params.n
    m = params.modulus
    top = 1 << (2 * n)
    sign = ChannelSign.MINUS
    start = time.perf_counter()
    cases = 0
    failures = 0
    counterexample = None

    def adder_case(x_val: int, r: int, b: int, i: int, c: int) -> dict | None:
        x = _fresh(x_val, params, sign)
        y = ComplexChannelResidue(r, b, i, c, sign)
        got = channel_value(op(x, y, params), params)
        want = ref_mod(x_val + channel_value(y, params), m)
        if got != want:
            return {"x": x_val, "r": r, "borrow": b, "i": i, "carry": c,
                    "got": got, "want": want}
        return None

    def mul_case(x_val: int, y_val: int) -> dict | None:
        got = channel_value(op(_fresh(x_val, params, sign), _fresh(y_val, params, sign), params), params)
        want = ref_mod(x_val * y_val, m)
        if got != want:
            return {"x": x_val, "y": y_val, "got": got, "want": want}
        return None

    if mode == "exhaustive":
        if unit == "adder":
            for x_val in range(top + 1):
                for i in range(1 << n):
                    for r in range(1 << n):
                        for c in (0, 1):
                            for b in (0, 1):
                                cases += 1
                                bad = adder_case(x_val, r, b, i, c)
                                if bad:
                                    failures += 1
                                    counterexample = counterexample or bad
        else:
            for x_val in range(top + 1):
                for y_val in range(top + 1):
                    cases += 1
                    bad = mul_case(x_val, y_val)
                    if bad:
                        failures += 1
                        counterexample = counterexample or bad
    else:
        rng = random.Random(seed)
        for _ in range(samples):
            cases += 1
            if unit == "adder":
                bad = adder_case(rng.randrange(top + 1), rng.randrange(1 << n),
                                 rng.randrange(2), rng.randrange(1 << n), rng.randrange(2))
            else:
                bad = mul_case(rng.randrange(top + 1), rng.randrange(top + 1))
            if bad:
                failures += 1
                counterexample = counterexample or bad

    return VerifyReport(
        unit=unit,
        n=n,
        mode=mode,
        cases=cases,
        failures=failures,
        counterexample=counterexample,
        seed=seed if mode == "random" else None,
        wall_time_s=time.perf_counter() - start,
    )
