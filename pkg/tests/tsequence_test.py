import pytest
from hypothesis import given, settings, strategies as st
from pynormality.construction import tsequence
from pynormality.construction.tsequence import TSequence
from pynormality.construction.intervals import BadicInterval
from pynormality.construction.discrepancy import DigitBlock
from pynormality.construction.refine import initial_step
from pynormality.general.logger import adjust_logger

def test_1(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    unit = TSequence.unit()
    assert unit.t == 2
    assert unit.lengths() == {2: 0}
    assert len(tsequence.x_b(unit, 2)) == 0
    assert tsequence.validate(unit) == []
    with pytest.raises(ValueError):
        unit.interval(3)

def test_2(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    seq = tsequence.extend_to_tsequence(BadicInterval(2, 3, 3), 3)
    assert seq.t == 3
    assert seq.x_b(2) == DigitBlock.from_text("011", 2)
    assert seq.x_b(3) == DigitBlock.from_text("102", 3)
    assert tsequence.validate(seq) == []

def test_3(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    seq = TSequence((BadicInterval(2, 3, 3), BadicInterval(3, 3, 11)))
    out = initial_step(seq, 1)
    assert out.t == 2
    assert out.interval(2) == BadicInterval(2, 6, 27)

def test_4(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    not_nested = TSequence((BadicInterval(2, 1, 0), BadicInterval(3, 1, 2)))
    assert any(x.startswith("nesting") for x in tsequence.validate(not_nested))
    too_small = TSequence((BadicInterval(2, 1, 0), BadicInterval(3, 4, 0)))
    assert any(x.startswith("ratio") for x in tsequence.validate(too_small))
    wrong_base = TSequence((BadicInterval(2, 1, 0), BadicInterval(2, 2, 0)))
    assert any(x.startswith("adicity") for x in tsequence.validate(wrong_base))
    with pytest.raises(ValueError):
        tsequence.extend_to_tsequence(BadicInterval(3, 1, 0), 3)

@settings(max_examples = 60, deadline = None)
@given(st.integers(0, 30).flatmap(lambda m: st.tuples(st.just(m), st.integers(0, 2**m - 1))), st.integers(2, 9))
def test_5(depth_index, t):
    depth, index = depth_index
    seq = tsequence.extend_to_tsequence(BadicInterval(2, depth, index), t)
    assert seq.t == t
    assert tsequence.validate(seq) == []
    for b in range(3, t + 1):
        assert seq.x_b(b).base == b
