"""Residue encodings, value maps, and the moduli-set model."""

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cxrns.core import (
    ChannelSign,
    ComplexChannelResidue,
    CoprimalityViolation,
    Dim1Residue,
    FreshOperand,
    GaussianPair,
    IntModulus,
    Params,
    PowerOfTwo,
    RangeExceeded,
    canonical_zero,
    channel_value,
    dim1_encode,
    dim1_value,
    f_set,
    moduli_set_build,
    operand_value,
    residue_from_value,
)


def test_params_bounds():
    Params(2)
    Params(31, 31)
    with pytest.raises(ValueError):
        Params(1)
    with pytest.raises(ValueError):
        Params(32)
    with pytest.raises(ValueError):
        Params(4, -1)
    with pytest.raises(ValueError):
        Params(4, 5)


def test_dim1_encode_examples():
    p = Params(2)
    assert dim1_encode(0, p) == Dim1Residue(0, 1)
    assert dim1_encode(5, p) == Dim1Residue(4, 0)
    assert dim1_encode(16, p) == Dim1Residue(15, 0)


def test_dim1_value_examples():
    assert dim1_value(Dim1Residue(0, 1)) == 0
    assert dim1_value(Dim1Residue(13, 0)) == 14
    assert dim1_value(Dim1Residue(15, 0)) == 16


def test_dim1_encode_rejects_out_of_range():
    p = Params(2)
    with pytest.raises(RangeExceeded):
        dim1_encode(17, p)
    with pytest.raises(RangeExceeded):
        dim1_encode(-1, p)


def test_dim1_flag_forces_zero_bits():
    with pytest.raises(ValueError):
        Dim1Residue(3, 1)


def test_dim1_bijection_exhaustive():
    for n in range(2, 6):
        p = Params(n)
        seen = set()
        for x in range((1 << (2 * n)) + 1):
            r = dim1_encode(x, p)
            assert dim1_value(r) == x
            seen.add((r.bits, r.zflag))
        assert len(seen) == (1 << (2 * n)) + 1


@given(st.integers(min_value=2, max_value=31), st.data())
def test_dim1_bijection_random(n, data):
    p = Params(n)
    x = data.draw(st.integers(min_value=0, max_value=1 << (2 * n)))
    assert dim1_value(dim1_encode(x, p)) == x


def test_channel_value_examples():
    p = Params(2)
    assert channel_value(ComplexChannelResidue(3, 0, 1, 0), p) == 7
    assert channel_value(ComplexChannelResidue(0, 1, 3, 1), p) == 15
    assert channel_value(canonical_zero(), p) == 0


def test_channel_value_conjugate_invariant():
    p = Params(3)
    for r in range(8):
        for i in range(8):
            for b in (0, 1):
                for c in (0, 1):
                    minus = ComplexChannelResidue(r, b, i, c, ChannelSign.MINUS)
                    plus = ComplexChannelResidue(r, b, i, c, ChannelSign.PLUS)
                    assert channel_value(minus, p) == channel_value(plus, p)


def test_residue_from_value_round_trips():
    for n in (2, 3, 5):
        p = Params(n)
        for v in range((1 << (2 * n)) + 1):
            assert channel_value(residue_from_value(v, p), p) == v
    with pytest.raises(RangeExceeded):
        residue_from_value(18, Params(2))


def test_fresh_operand_zero_flag_rules():
    FreshOperand(0, 0, 1)
    with pytest.raises(ValueError):
        FreshOperand(1, 0, 1)
    p = Params(2)
    assert operand_value(FreshOperand(0, 0, 1), p) == 0
    assert operand_value(FreshOperand(3, 3, 0), p) == 16


def test_moduli_set_build_examples():
    assert moduli_set_build([IntModulus(31), PowerOfTwo(5), IntModulus(63)]).dynamic_range == 62_496
    assert moduli_set_build(
        [IntModulus(7), IntModulus(9), PowerOfTwo(4), GaussianPair(3)]
    ).dynamic_range == 65_520
    assert moduli_set_build(
        [IntModulus(15), IntModulus(31), PowerOfTwo(7), GaussianPair(6)]
    ).dynamic_range == 243_853_440


def test_moduli_set_build_rejects_shared_factor():
    with pytest.raises(CoprimalityViolation) as err:
        moduli_set_build([IntModulus(3), IntModulus(9)])
    assert err.value.gcd == 3
    # 2^(2*3)+1 = 65 shares the factor 5 with 15
    with pytest.raises(CoprimalityViolation) as err:
        moduli_set_build([IntModulus(15), PowerOfTwo(6), GaussianPair(3)])
    assert err.value.gcd == 5
    assert "g3" in str(err.value)


def test_moduli_set_rejects_empty():
    with pytest.raises(ValueError):
        moduli_set_build([])


def test_gaussian_pair_contributes_norm():
    for n in range(2, 11):
        mset = moduli_set_build([GaussianPair(n)])
        assert mset.dynamic_range == (1 << (2 * n)) + 1


def test_descriptor_validation():
    with pytest.raises(ValueError):
        IntModulus(12)  # even, not a power of two
    with pytest.raises(ValueError):
        IntModulus(1)
    with pytest.raises(ValueError):
        PowerOfTwo(0)
    with pytest.raises(ValueError):
        GaussianPair(1)


def test_descriptor_widths():
    assert PowerOfTwo(7).width == 7
    assert IntModulus(63).width == 6
    assert GaussianPair(5).width == 6  # n-bit magnitude plus stored borrow/carry


def test_f_set_shape():
    descs = f_set(3)
    assert [d.modulus for d in descs] == [8, 7, 9, 65]
    descs = f_set(5, 3)
    assert [d.modulus for d in descs] == [256, 31, 33, 1025]
    assert moduli_set_build(f_set(2)).dynamic_range == 1020
    assert moduli_set_build(f_set(5)).dynamic_range == (1 << 5) * ((1 << 20) - 1)
