import pytest

from primecover.residues import ResidueSet, iter_bits


def test_from_elements_and_membership():
    s = ResidueSet.from_elements(7, [2, 3, 10])  # 10 = 3 mod 7
    assert s.elements() == [2, 3]
    assert 2 in s and 3 in s and 5 not in s
    assert len(s) == 2


def test_zero_rejected():
    with pytest.raises(ValueError):
        ResidueSet.from_elements(7, [7])
    with pytest.raises(ValueError):
        ResidueSet(7, 1)  # bit 0


def test_bits_outside_range_rejected():
    with pytest.raises(ValueError):
        ResidueSet(5, 1 << 5)


def test_set_algebra():
    a = ResidueSet.from_elements(11, [1, 2, 3])
    b = ResidueSet.from_elements(11, [3, 4])
    assert (a | b).elements() == [1, 2, 3, 4]
    assert (a & b).elements() == [3]
    assert (a - b).elements() == [1, 2]
    assert b.is_subset(a | b)
    with pytest.raises(ValueError):
        a | ResidueSet.from_elements(7, [1])


def test_full_and_complement():
    full = ResidueSet.full_units(5)
    assert full.elements() == [1, 2, 3, 4]
    assert full.covers_units
    s = ResidueSet.from_elements(5, [1, 4])
    assert s.complement_units().elements() == [2, 3]
    assert ResidueSet.empty(5).complement_units() == full


def test_iter_bits_order():
    assert list(iter_bits(0b101010)) == [1, 3, 5]
    assert list(iter_bits(0)) == []
