"""Reverse conversion: channel collapse, modular inverses, New-CRT recombination."""

import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cxrns.core import (
    ComplexChannelResidue,
    Dim1Residue,
    GaussianPair,
    IntModulus,
    NotInvertible,
    Params,
    PowerOfTwo,
    RangeExceeded,
    canonical_zero,
    channel_value,
    f_set,
    moduli_set_build,
    operand_value,
)
from cxrns.forward import forward_std
from cxrns.reverse import (
    channel_to_dim1,
    mod_inverse,
    ncrt_plan,
    ncrt_reverse,
    normalize,
)


P2 = Params(2)


def crt_classic(residues, moduli):
    """Textbook CRT in product-of-cofactor form; independent of the NCRT path."""
    total = math.prod(moduli)
    acc = 0
    for x, m in zip(residues, moduli):
        cofactor = total // m
        acc += x * cofactor * pow(cofactor, -1, m)
    return acc % total


# --- channel collapse ---------------------------------------------------------

def test_channel_to_dim1_examples():
    assert channel_to_dim1(ComplexChannelResidue(0, 1, 3, 1), P2) == Dim1Residue(14, 0)
    assert channel_to_dim1(canonical_zero(), P2) == Dim1Residue(0, 1)
    assert channel_to_dim1(ComplexChannelResidue(3, 0, 1, 0), P2) == Dim1Residue(6, 0)


def test_channel_to_dim1_matches_value_map_exhaustive():
    from cxrns.core import dim1_value

    for n in range(2, 5):
        p = Params(n)
        for i in range(1 << n):
            for r in range(1 << n):
                for b in (0, 1):
                    for c in (0, 1):
                        s = ComplexChannelResidue(r, b, i, c)
                        assert dim1_value(channel_to_dim1(s, p)) == channel_value(s, p)


# --- modular inverse ------------------------------------------------------------

def test_mod_inverse_examples():
    assert mod_inverse(4, 255) == 64
    assert mod_inverse(1, 97) == 1
    assert mod_inverse(17, 60) == 53


def test_mod_inverse_not_invertible():
    with pytest.raises(NotInvertible):
        mod_inverse(6, 9)
    with pytest.raises(ValueError):
        mod_inverse(3, 1)


@settings(max_examples=300)
@given(st.integers(min_value=2, max_value=1 << 80), st.integers(min_value=0, max_value=1 << 80))
def test_mod_inverse_property(m, a):
    if math.gcd(a, m) != 1:
        with pytest.raises(NotInvertible):
            mod_inverse(a, m)
    else:
        t = mod_inverse(a, m)
        assert 1 <= t < m
        assert (a * t) % m == 1


# --- plan construction ------------------------------------------------------------

def test_ncrt_plan_small_set():
    mset = moduli_set_build([PowerOfTwo(2), IntModulus(3), IntModulus(5), GaussianPair(2)])
    plan = ncrt_plan(mset)
    assert plan.moduli == (4, 3, 5, 17)
    assert plan.tail_product == 255
    assert plan.mu == (64, 234, 30)


def test_ncrt_plan_mu_congruences():
    # the combination constants are pinned by two congruences each:
    # m1 * mu_i == 1 modulo the tail product, mu_i == 0 modulo the lead product
    for descs in (f_set(2), f_set(3), f_set(5, 2),
                  [PowerOfTwo(5), IntModulus(31), IntModulus(33), IntModulus(29), IntModulus(35)]):
        mset = moduli_set_build(descs)
        plan = ncrt_plan(mset)
        mods = plan.moduli
        for i, mu_i in enumerate(plan.mu, start=1):
            lead = math.prod(mods[1:i], start=1)
            tail = math.prod(mods[i:], start=1)
            assert (mods[0] * mu_i) % tail == 1 % tail
            assert mu_i % lead == 0


def test_ncrt_plan_single_modulus():
    mset = moduli_set_build([IntModulus(17)])
    plan = ncrt_plan(mset)
    assert plan.mu == ()
    assert plan.tail_product == 1
    assert ncrt_reverse([13], plan) == 13


def test_ncrt_plan_f_set_tail_is_mersenne_form():
    for n in (2, 3, 5):
        plan = ncrt_plan(moduli_set_build(f_set(n)))
        assert plan.tail_product == (1 << (4 * n)) - 1


# --- recombination -----------------------------------------------------------------

def test_ncrt_reverse_examples():
    plan = ncrt_plan(moduli_set_build(f_set(2)))
    assert ncrt_reverse([0, 1, 0, 15], plan) == 100
    assert ncrt_reverse([0, 0, 0, 0], plan) == 0
    assert ncrt_reverse([3, 2, 4, 16], plan) == 1019  # residues of M - 1


def test_ncrt_reverse_validates_inputs():
    plan = ncrt_plan(moduli_set_build(f_set(2)))
    with pytest.raises(ValueError):
        ncrt_reverse([0, 1, 0], plan)
    with pytest.raises(RangeExceeded) as err:
        ncrt_reverse([0, 3, 0, 15], plan)
    assert "channel 1" in str(err.value)


def test_ncrt_agrees_with_classic_crt():
    sets = [
        f_set(2),
        f_set(3),
        f_set(5, 2),
        [PowerOfTwo(5), IntModulus(31), IntModulus(33), IntModulus(29), IntModulus(35)],
        [IntModulus(15), IntModulus(31), PowerOfTwo(7), GaussianPair(6)],
    ]
    rng = random.Random(1)
    for descs in sets:
        mset = moduli_set_build(descs)
        plan = ncrt_plan(mset)
        moduli = [d.modulus for d in mset.channels]
        for _ in range(10_000):
            residues = [rng.randrange(m) for m in moduli]
            assert ncrt_reverse(residues, plan) == crt_classic(residues, moduli)


def test_round_trip_exhaustive_n2():
    mset = moduli_set_build(f_set(2))
    plan = ncrt_plan(mset)
    for z in range(mset.dynamic_range):
        assert ncrt_reverse(forward_std(z, mset), plan) == z


def test_round_trip_generic_set_sampled():
    mset = moduli_set_build([PowerOfTwo(5), IntModulus(31), IntModulus(33),
                             IntModulus(29), IntModulus(35)])
    plan = ncrt_plan(mset)
    rng = random.Random(7)
    for _ in range(5000):
        z = rng.randrange(mset.dynamic_range)
        assert ncrt_reverse(forward_std(z, mset), plan) == z


# --- normalize ----------------------------------------------------------------------

def test_normalize_examples():
    from cxrns.alu import add_fresh, mul
    from cxrns.forward import to_channel_operand
    from cxrns.core import ChannelSign, dim1_encode, residue_from_value

    x5 = to_channel_operand(dim1_encode(5, P2), ChannelSign.MINUS, P2)
    acc = residue_from_value(7, P2)
    out = normalize(add_fresh(x5, acc, P2), P2)
    assert operand_value(out, P2) == 12

    out = normalize(canonical_zero(), P2)
    assert out.zflag == 1 and operand_value(out, P2) == 0

    # normalized products can feed the multiplier again
    prod = mul(x5, x5, P2)  # 25 mod 17 = 8
    again = mul(normalize(prod, P2), x5, P2)  # 40 mod 17 = 6
    assert channel_value(again, P2) == 6


def test_normalize_value_preserving_exhaustive():
    for n in range(2, 6):
        p = Params(n)
        for i in range(1 << n):
            for r in range(1 << n):
                for b in (0, 1):
                    for c in (0, 1):
                        s = ComplexChannelResidue(r, b, i, c)
                        assert operand_value(normalize(s, p), p) == channel_value(s, p)
