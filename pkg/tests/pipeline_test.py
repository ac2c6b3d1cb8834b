import pytest
from pynormality import pipeline
from pynormality.pipeline import PipelineState
from pynormality.construction.discrepancy import DigitBlock
from pynormality.construction.intervals import determined_digits
from pynormality.construction.parameters import ParamTable
from pynormality.construction.trace import read_trace, verify_trace, write_trace
from pynormality.construction.refine import termination_met, check_refinement
from pynormality.construction.tsequence import TSequence
from pynormality.reduction.first_reduction import ControlSequence
from pynormality.reduction.predicate import BUILTINS
from pynormality.general.errors import ResourceLimitError
from pynormality.general.logger import adjust_logger

TOY = ParamTable(overrides = {"k": 2, "ell": 8})

def ones_forever():
    return ControlSequence.from_values([1], tail = ControlSequence(lambda: iter(lambda: 1, None), "ones"))

def test_1(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    x = pipeline.digits(ones_forever(), 2, 20, params = TOY)
    assert x == DigitBlock.from_text(("0" + "001" * 7)[:20], 2)

def test_2(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    states, results = pipeline.run_rounds([1, 1, 1], 3, bases = (2, 3, 10), params = TOY)
    assert [s.round for s in states] == [1, 2, 3]
    assert [len(s.sequence.x_b(2)) for s in states] == [34, 38, 42]
    for before, after in zip(states, states[1:]):
        for b in (2, 3, 10):
            assert before.emitted[b].is_prefix_of(after.emitted[b])
    for state in states:
        for b in (3, 10):
            assert state.emitted[b] == determined_digits(state.sequence.interval(2), b)
    assert results[1].p == 1

def test_3(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    with pytest.raises(ResourceLimitError) as e:
        pipeline.digits(ones_forever(), 2, 1000, params = TOY, max_rounds = 1)
    assert e.value.partial == DigitBlock.from_text("0" + "001" * 11, 2)

    with pytest.raises(ResourceLimitError) as e:
        pipeline.digit_streams([1, 1], [2, 3], 1000, params = TOY)
    assert len(e.value.partial[2]) == 38

    with pytest.raises(ValueError):
        pipeline.digits([1], 1, 5, params = TOY)
    with pytest.raises(ValueError):
        pipeline.digits([1], 2, 0, params = TOY)

def test_4(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    state = PipelineState.initial((2, 5))
    view = state.snapshot()
    assert set(view) == {2, 5}
    with pytest.raises(TypeError):
        view[7] = DigitBlock(7)
    advanced = pipeline.lambda_ref_advance(state, 1, params = TOY)
    assert len(view[2]) == 0
    assert len(advanced.snapshot()[2]) == 34
    with pytest.raises(ValueError):
        pipeline.lambda_ref_advance(state, 0, params = TOY)
    with pytest.raises(ValueError):
        PipelineState.initial((1,))

def test_5(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    fh = tmp_path / "toy.jsonl"
    pipeline.digit_streams([1, 1], [2], 36, params = TOY, trace = str(fh))
    trace = read_trace(str(fh))
    assert not trace.conforming
    assert [r.i for r in trace.rounds] == [1, 1]
    assert all(str(s.u[2]) == "001" for r in trace.rounds for s in r.steps)
    with pytest.raises(ValueError):
        verify_trace(trace)

def test_6(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    source = ones_forever()
    a = pipeline.digit_streams(source, [2, 7], 10, params = TOY, max_rounds = 5)
    b = pipeline.digit_streams(source, [2, 7], 10, params = TOY, max_rounds = 5)
    assert a == b

@pytest.mark.slow
def test_7(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    states, results = pipeline.run_rounds(BUILTINS["true"], 3, bases = (2, 3))
    assert [r.i for r in results] == [1, 2, 1]
    assert len(states[0].sequence.x_b(2)) == 6238
    assert all(len(states[1].sequence.x_b(b)) > 18970 for b in (2, 3))
    for state, result in zip(states, results):
        assert termination_met(state.sequence, result.i)
    for before, after in zip(states, states[1:]):
        assert before.emitted[3].is_prefix_of(after.emitted[3])

    fh = tmp_path / "true.jsonl"
    write_trace(str(fh), results, ParamTable())
    trace = read_trace(str(fh))
    reports = verify_trace(trace)
    assert [r.passed for r in reports] == [True, True, True]
    assert pipeline.replay_trace(trace) == []

@pytest.mark.slow
def test_8(tmp_path):
    adjust_logger(True, tmp_path, "INFO", testing = True)
    runs = list()
    for n in range(2):
        states, results = pipeline.run_rounds([1, 2, 3], 3)
        fh = tmp_path / f"run_{n}.jsonl"
        write_trace(str(fh), results, ParamTable())
        runs.append((states, results, fh.read_bytes()))

    states, results, _ = runs[0]
    assert [r.i for r in results] == [1, 2, 3]
    inputs = [TSequence.unit()] + [s.sequence for s in states[:-1]]
    for before, result in zip(inputs, results):
        report = check_refinement(before, result, result.i, result.p, stride = 16, full_range_limit = 10**4)
        assert report.passed, report.violations
    assert len(states[-1].emitted[2]) > 30000

    # two complete runs agree byte for byte
    assert runs[0][2] == runs[1][2]
    assert runs[0][0][-1].emitted[2].digits == runs[1][0][-1].emitted[2].digits
