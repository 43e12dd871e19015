import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from nmext.bits import BitString
from nmext.codes import ecc_symbol_at, hamming, rs_encode, rs_symbol
from nmext.errors import LengthError, ParameterError
from nmext.oracle import JointDist, ext_distance
from nmext.sampler import SamplerSpec, samp
from nmext.trevisan import (ExtSpec, choose_width, extractor, one_bit_ext, seed_needed, trevisan_ext,
                            trevisan_ext_reference, weak_design)


# -- Reed-Solomon -------------------------------------------------------------

def test_first_position_is_constant_coefficient():
    word = rs_encode([5, 9], 8, 4)
    assert word.symbols[0] == 5
    assert word.symbols[1] == 5 ^ 9  # evaluation at 1


@given(st.lists(st.integers(0, 15), min_size=1, max_size=6), st.integers(1, 16))
def test_symbol_access_matches_full_encoding(msg, index):
    word = rs_encode(msg, 16, 4)
    assert rs_symbol(msg, index, 16, 4) == word.symbols[index - 1]


def test_encoding_is_linear():
    for a, b in itertools.product(itertools.product(range(8), repeat=2), repeat=2):
        wa, wb = rs_encode(list(a), 8, 3), rs_encode(list(b), 8, 3)
        wsum = rs_encode([u ^ v for u, v in zip(a, b)], 8, 3)
        assert wsum.symbols == tuple(u ^ v for u, v in zip(wa.symbols, wb.symbols))


def test_minimum_distance_small_code():
    words = [rs_encode(list(m), 8, 4).symbols for m in itertools.product(range(16), repeat=2)]
    assert min(hamming(a, b) for a, b in itertools.combinations(words, 2)) == 7


def test_symbol_of_bitstring_pads_right():
    y = BitString.from_str("101")  # one 4-bit symbol 1010
    assert ecc_symbol_at(y, 1, 4, 4).value == 0b1010


def test_code_parameter_errors():
    with pytest.raises(ParameterError):
        rs_encode([1], 17, 4)
    with pytest.raises(ParameterError):
        rs_symbol([1, 2], 9, 8, 4)


# -- designs ------------------------------------------------------------------

@pytest.mark.parametrize("l", [2, 4, 6, 8])
def test_design_sets_and_overlap(l):
    for m in range(1, 17):
        try:
            d = weak_design(m, l)
        except ParameterError:
            continue
        for i, s in enumerate(d.sets):
            assert len(set(s)) == l
            assert all((p - 1) % l == a for a, p in enumerate(s))  # one position per block
            assert sum(2 ** len(set(s) & set(t)) for t in d.sets[:i]) <= d.overlap_bound * max(m - 1, 1)


def test_width_one_design_capacity():
    assert weak_design(4, 2).m == 4
    with pytest.raises(ParameterError):
        weak_design(5, 2)


def test_seed_needed_examples():
    assert seed_needed(1, 1) == 2
    assert seed_needed(1, 4) == 4
    assert seed_needed(2, 6) == 20
    assert choose_width(4, 1) == 2
    assert choose_width(4, 4) == 1


# -- one-bit and Trevisan -----------------------------------------------------

def test_one_bit_row_zero_means_all_ones():
    x = BitString.from_str("1101")
    # w=1: point selects x0 (point 0) or the parity (point 1)
    assert one_bit_ext(x, BitString.from_str("00")) == 1
    assert one_bit_ext(x, BitString.from_str("10")) == 1
    assert one_bit_ext(BitString.from_str("0111"), BitString.from_str("10")) == 1
    assert one_bit_ext(BitString.from_str("0110"), BitString.from_str("10")) == 0


@settings(max_examples=60)
@given(st.integers(1, 24), st.integers(1, 6), st.data())
def test_fast_path_matches_bitwise_reference(n, m, data):
    d = data.draw(st.integers(4, 24))
    try:
        spec = ExtSpec("t", n, d, min(m, n), k_req=1, eps=0.5)
    except ParameterError:
        return
    x = BitString(data.draw(st.integers(0, (1 << n) - 1)), n)
    s = BitString(data.draw(st.integers(0, (1 << d) - 1)), d)
    assert trevisan_ext(x, s, spec) == trevisan_ext_reference(x, s, spec)


def test_extractor_is_linear_in_source():
    spec = ExtSpec("t", 12, 8, 3, k_req=1, eps=0.5)
    f = extractor(spec)
    for seed in range(0, 256, 17):
        for a, b in [(0x123, 0x0F0), (0xABC, 0x555), (0xFFF, 0x001)]:
            assert f(a ^ b, seed) == f(a, seed) ^ f(b, seed)


def test_length_errors():
    spec = ExtSpec("t", 8, 4, 1, k_req=1, eps=0.5)
    with pytest.raises(LengthError):
        trevisan_ext(BitString(0, 7), BitString(0, 4), spec)
    with pytest.raises(ParameterError):
        ExtSpec("t", 8, 3, 2, k_req=1, eps=0.5)


@pytest.mark.parametrize("d_seed", [4, 6, 8])
def test_single_output_is_exactly_uniform_on_uniform_source(d_seed):
    spec = ExtSpec("t", 8, d_seed, 1, k_req=1, eps=0.5)
    assert ext_distance(JointDist.uniform(8), spec) == 0


def test_zero_entropy_source_has_maximal_distance():
    spec = ExtSpec("t", 6, 6, 1, k_req=1, eps=0.5)
    point = JointDist((((0b101101, None, None), Fraction(1)),), 6)
    assert ext_distance(point, spec) == Fraction(1, 2)


def test_two_outputs_degenerate_at_width_one():
    # the width-one design only offers x0 and parity; repeated functionals
    # make a two-bit output non-uniform even for a uniform source
    spec = ExtSpec("t", 10, 4, 2, k_req=1, eps=0.5)
    assert spec.w == 1
    assert ext_distance(JointDist.uniform(10), spec) == Fraction(1, 4)


# -- sampler --------------------------------------------------------------------

@given(st.integers(1, 12), st.integers(1, 16), st.integers(1, 8), st.data())
def test_samples_stay_in_range(r, nu, t1, data):
    spec = SamplerSpec(r, nu, t1)
    seed = BitString(data.draw(st.integers(0, (1 << r) - 1)), r)
    out = samp(seed, spec)
    assert len(out) == t1
    assert all(1 <= p <= nu for p in out)
    assert out == samp(seed, spec)


def test_pairwise_uniformity_at_field_size():
    spec = SamplerSpec(8, 16, 2)
    counts = {}
    for s in range(256):
        pair = samp(BitString(s, 8), spec)
        counts[pair] = counts.get(pair, 0) + 1
    assert len(counts) == 256 and set(counts.values()) == {1}


def test_sampler_seed_length_checked():
    with pytest.raises(LengthError):
        samp(BitString(0, 3), SamplerSpec(4, 4, 2))
