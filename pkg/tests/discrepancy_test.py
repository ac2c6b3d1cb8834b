import itertools
from fractions import Fraction
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from pynormality.construction import discrepancy
from pynormality.construction.discrepancy import DigitBlock, DigitCounter
from pynormality.general.logger import adjust_logger

def blocks(max_base = 5, max_size = 40):
    return st.integers(2, max_base).flatmap(
        lambda b: st.lists(st.integers(0, b - 1), min_size = 1, max_size = max_size).map(
            lambda x: DigitBlock(b, bytes(x))))

def brute_block_discrepancy(u, ell):
    n = len(u)
    windows = [u.digits[j:j + ell] for j in range(n - ell + 1)]
    p = u.base**ell
    worst = Fraction(0)
    for v in itertools.product(range(u.base), repeat = ell):
        count = windows.count(bytes(v))
        worst = max(worst, abs(Fraction(count, n) - Fraction(1, p)))
    return worst

def test_1(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    assert discrepancy.simple_discrepancy(DigitBlock.from_text("0012", 3)) == Fraction(1, 6)
    assert discrepancy.simple_discrepancy(DigitBlock.from_text("01", 2)) == 0
    assert discrepancy.simple_discrepancy(DigitBlock.from_text("1111", 2)) == Fraction(1, 2)
    with pytest.raises(ValueError):
        discrepancy.simple_discrepancy(DigitBlock(2))

def test_2(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    assert discrepancy.block_discrepancy(DigitBlock.from_text("0101", 2), 2) == Fraction(1, 4)
    assert discrepancy.block_discrepancy(DigitBlock.from_text("0" * 10, 2), 3) == Fraction(27, 40)
    # a window longer than the block leaves every block missing
    assert discrepancy.block_discrepancy(DigitBlock.from_text("01", 2), 3) == Fraction(1, 8)

def test_3(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    assert discrepancy.occ(DigitBlock.from_text("0000", 2), DigitBlock.from_text("00", 2)) == 3
    assert discrepancy.occ(DigitBlock.from_text("010", 2), DigitBlock.from_text("0101", 2)) == 0
    with pytest.raises(ValueError):
        discrepancy.occ(DigitBlock.from_text("010", 2), DigitBlock.from_text("01", 3))

def test_4(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    bound = discrepancy.concat_bound([DigitBlock.from_text("000", 2), DigitBlock.from_text("01", 2)])
    assert bound == Fraction(3, 10)
    joined = DigitBlock.from_text("00001", 2)
    assert discrepancy.simple_discrepancy(joined) <= bound

def test_5(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    assert discrepancy.tail_count(2, 30, 7) == 2035800
    for b, k, eps in [(2, 36, Fraction(1, 6)), (2, 30, Fraction(1, 5)), (3, 30, Fraction(1, 5))]:
        report = discrepancy.tail_bound_check(b, k, eps)
        assert report.holds
        assert report.lhs_low <= report.rhs_upper
    with pytest.raises(ValueError):
        discrepancy.tail_bound_check(2, 10, Fraction(1, 5))

def test_6(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    k = discrepancy.block_length_for(2, Fraction(1, 4), Fraction(1, 2))
    assert k == 200
    assert discrepancy.block_length_for(2, Fraction(1, 4), Fraction(1, 2), method = "interval") == k
    assert discrepancy.discrepant_fraction(2, k, Fraction(1, 4)) < Fraction(1, 2)

    k3 = discrepancy.block_length_for(3, Fraction(1, 3), Fraction(1, 2))
    assert discrepancy.discrepant_fraction(3, k3, Fraction(1, 3)) < Fraction(1, 2)

    with pytest.raises(ValueError):
        discrepancy.block_length_for(3, Fraction(1, 2), Fraction(1, 2))

def test_7(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    # exhaustive count for a short block length
    b, k, eps = 3, 6, Fraction(1, 6)
    bad = sum(discrepancy.simple_discrepancy(DigitBlock(b, bytes(x))) > eps
              for x in itertools.product(range(b), repeat = k))
    assert discrepancy.discrepant_fraction(b, k, eps) == Fraction(bad, b**k)

def test_8(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    u = DigitBlock.from_text("0101", 2)
    assert discrepancy.prefix_discrepancies(u, stride = 2, start = 2) == [(2, 0), (4, 0)]
    rows = discrepancy.prefix_discrepancies(DigitBlock.from_text("0011", 2))
    assert rows == [(1, Fraction(1, 2)), (2, Fraction(1, 2)), (3, Fraction(1, 6)), (4, 0)]
    assert discrepancy.sampled_lengths(3, 10, 4).tolist() == [3, 7, 10]

def test_9(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    u = DigitBlock.from_text("0" * 20, 2)
    assert discrepancy.missing_block_certain(20, 2, 5)
    assert discrepancy.block_discrepancy_exceeds(u, 5, Fraction(1, 64))
    with pytest.raises(ValueError):
        discrepancy.block_discrepancy_exceeds(u, 5, Fraction(1, 32))

@settings(max_examples = 60, deadline = None)
@given(blocks(max_base = 4, max_size = 30), st.integers(1, 3))
def test_10(u, ell):
    assert discrepancy.block_discrepancy(u, ell) == brute_block_discrepancy(u, ell)

@settings(max_examples = 60, deadline = None)
@given(st.integers(2, 6), st.data())
def test_11(b, data):
    parts = data.draw(st.lists(st.lists(st.integers(0, b - 1), min_size = 1, max_size = 20), min_size = 1, max_size = 5))
    counter = DigitCounter(b)
    for part in parts:
        counter.update(DigitBlock(b, bytes(part)))
    joined = DigitBlock(b, bytes(itertools.chain.from_iterable(parts)))
    assert counter.discrepancy() == discrepancy.simple_discrepancy(joined)
    assert counter.length == len(joined)

def test_12(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    rng = np.random.default_rng(7)
    u = DigitBlock(7, rng.integers(0, 7, 500, dtype = np.uint8).tobytes())
    lengths = discrepancy.sampled_lengths(1, len(u), 13)
    deviations = discrepancy.prefix_deviations(u, lengths)
    for l, dev in zip(lengths.tolist(), deviations.tolist()):
        assert Fraction(dev, 7 * l) == discrepancy.simple_discrepancy(u[:l])

def test_13(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    u = DigitBlock.from_text("0a9z", 36)
    assert str(u) == "0a9z"
    assert u[1:3] == DigitBlock(36, bytes([10, 9]))
    assert (DigitBlock.from_text("01", 2) + DigitBlock.from_text("1", 2)).value == 3
    assert DigitBlock.from_int(5, 3, 4) == DigitBlock.from_text("0012", 3)
    with pytest.raises(ValueError):
        DigitBlock.from_text("012", 2)
    with pytest.raises(ValueError):
        DigitBlock(300)

def test_14(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    rng = np.random.default_rng(10000)
    for _ in range(10000):
        b = int(rng.integers(2, 6))
        parts = [DigitBlock(b, rng.integers(0, b, size = int(rng.integers(1, 30)), dtype = np.uint8).tobytes())
                 for _ in range(int(rng.integers(1, 9)))]
        joined = parts[0]
        for u in parts[1:]:
            joined = joined + u
        assert discrepancy.simple_discrepancy(joined) <= discrepancy.concat_bound(parts)

@settings(max_examples = 200, deadline = None)
@given(st.integers(2, 5).flatmap(lambda b: st.lists(
    st.lists(st.integers(0, b - 1), min_size = 1, max_size = 20).map(lambda x: DigitBlock(b, bytes(x))),
    min_size = 1, max_size = 8)))
def test_15(parts):
    joined = DigitBlock(parts[0].base, b"".join(u.digits for u in parts))
    assert discrepancy.simple_discrepancy(joined) <= discrepancy.concat_bound(parts)
