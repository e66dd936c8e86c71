import pytest
from hypothesis import given
from hypothesis import strategies as st

from satlab import lattice


def test_check_n_rejects_bad_sizes():
    for bad in (0, -1, lattice.N_MAX_CORE + 1):
        with pytest.raises(ValueError):
            lattice.check_n(bad)
    with pytest.raises(TypeError):
        lattice.check_n(2.0)
    assert lattice.check_n(3) == 3


@given(st.integers(1, 5), st.data())
def test_up_and_down_closure_match_definition(n, data):
    bits = data.draw(st.integers(0, lattice.all_bits(n)))
    ms = [m for m in range(1 << n) if bits >> m & 1]
    up = sum(1 << x for x in range(1 << n) if any(m & ~x == 0 for m in ms))
    down = sum(1 << x for x in range(1 << n) if any(x & ~m == 0 for m in ms))
    assert lattice.up_bits(n, bits) == up
    assert lattice.down_bits(n, bits) == down


@given(st.integers(1, 5), st.data())
def test_pwcomp_is_bit_reversal_of_masks(n, data):
    bits = data.draw(st.integers(0, lattice.all_bits(n)))
    full = lattice.full_mask(n)
    expect = sum(1 << (full ^ m) for m in range(1 << n) if bits >> m & 1)
    assert lattice.pwcomp_bits(n, bits) == expect
    assert lattice.pwcomp_bits(n, expect) == bits


@given(st.integers(1, 5), st.data())
def test_minimal_bits(n, data):
    bits = data.draw(st.integers(0, lattice.all_bits(n)))
    ms = [m for m in range(1 << n) if bits >> m & 1]
    expect = sum(1 << m for m in ms if not any(x != m and x & ~m == 0 for x in ms))
    assert lattice.minimal_bits(n, bits) == expect


def test_cylinder_bits():
    # agree with base on index {1,3} with base {1}: masks with bit0=1, bit2=0
    got = lattice.cylinder_bits(3, 0b101, 0b001)
    assert [m for m in range(8) if got >> m & 1] == [1, 3]
    assert lattice.cylinder_bits(2, 0, 0) == lattice.all_bits(2)


@given(st.integers(1, 10), st.data())
def test_iter_masks_and_tables_round_trip(n, data):
    bits = data.draw(st.integers(0, lattice.all_bits(n)))
    assert sum(1 << m for m in lattice.iter_masks(bits)) == bits
    assert lattice.bits_from_table(lattice.table_bytes(n, bits)) == bits


def test_lex_key_reads_low_masks_first():
    # {∅} (bit 0) sorts after {{1}} (bit 1) because mask 0 is read first
    assert lattice.lex_key(1, 0b10) < lattice.lex_key(1, 0b01)


@given(st.integers(1, 4), st.data())
def test_box_up_bits_definition(n, data):
    a = data.draw(st.integers(0, lattice.all_bits(n)))
    b = data.draw(st.integers(0, lattice.all_bits(n)))
    ua, ub = lattice.up_bits(n, a), lattice.up_bits(n, b)
    ma = [m for m in range(1 << n) if ua >> m & 1]
    mb = [m for m in range(1 << n) if ub >> m & 1]
    expect = sum(1 << s for s in range(1 << n)
                 if any(x & y == 0 and (x | y) & ~s == 0 for x in ma for y in mb))
    assert lattice.box_up_bits(n, a, b) == expect
