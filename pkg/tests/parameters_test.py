from fractions import Fraction
import pytest
import mpmath
from pynormality.construction import parameters
from pynormality.construction.parameters import ParamTable
from pynormality.general.logger import adjust_logger

def test_1(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    assert parameters.delta(1) == Fraction(1, 4)
    assert parameters.delta(2) == Fraction(1, 144)
    assert parameters.delta(3) == Fraction(1, 9216)
    with pytest.raises(ValueError):
        parameters.delta(0)

def test_2(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    expected = {1: (188, 190), 2: (755, 1518), 3: (1890, 3794), 4: (3812, 11456)}
    for i, (k, ell) in expected.items():
        assert parameters.k(i) == k
        assert parameters.ell(i) == ell
    table = ParamTable(method = "interval")
    assert [table.k(i) for i in expected] == [k for k, _ in expected.values()]

def test_3(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    table = parameters.PARAMS
    assert table.conforming
    row = table.row(2)
    assert row == {"i": 2, "delta": Fraction(1, 144), "k": 755, "ell": 1518}
    assert ParamTable.from_dict(table.to_dict()).conforming

def test_4(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    with pytest.warns(UserWarning):
        toy = ParamTable.from_string("k=2,ell=8")
    assert not toy.conforming
    assert (toy.k(5), toy.ell(5)) == (2, 8)
    assert toy.delta(2) == Fraction(1, 144)
    again = ParamTable.from_dict(toy.to_dict())
    assert again.overrides == {"k": 2, "ell": 8}

    with pytest.raises(ValueError):
        ParamTable(overrides = {"delta": 3})
    with pytest.raises(ValueError):
        ParamTable(overrides = {"k": 0})
    with pytest.raises(ValueError):
        ParamTable.from_string("k=two")

def test_5(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    series, interval = ParamTable(method = "series"), ParamTable(method = "interval")
    with mpmath.workdps(60):
        for i in range(1, 9):
            d = parameters.delta(i)
            bound = -mpmath.log(mpmath.mpf(d.numerator) / (d.denominator * 2 * (i + 1)**2)) * 6 * (i + 2)**2
            expected = int(mpmath.floor(max(bound, 6 * (i + 2)))) + 1
            assert series.k(i) == interval.k(i) == expected
            assert series.ell(i) == expected * (i).bit_length() + (d.denominator - 1).bit_length()
