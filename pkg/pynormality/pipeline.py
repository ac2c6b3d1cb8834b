"""
Iterated refinement driven by a control sequence `f`:

    R_0 = ([0, 1)),  R_{j+1} = refine(R_j, f_{j+1}).

The generated real lies in the first interval of every `R_j`. Digits in a base
are only emitted once every real of that interval shares them, so emitted
digits are never taken back.
"""
import json
import types
from dataclasses import dataclass, field
from pynormality.general.logger import log
from pynormality.general.performance import performance_check
from pynormality.general.errors import ConstructionError, ResourceLimitError
from pynormality.construction.discrepancy import DigitBlock
from pynormality.construction.intervals import determined_digits
from pynormality.construction.tsequence import TSequence
from pynormality.construction.parameters import PARAMS, ParamTable
from pynormality.construction.refine import refine
from pynormality.construction.trace import TraceWriter, round_records
from pynormality.reduction.predicate import Predicate, parse_predicate
from pynormality.reduction.first_reduction import ControlSequence, first_reduction_stream

@dataclass(frozen = True)
class PipelineState:
    """Current sequence `R_j`, the round `j` and the digits emitted so far per base."""
    sequence: TSequence
    round: int = 0
    emitted: dict = field(default_factory = dict)
    last_result: object = None

    @classmethod
    def initial(cls, bases = (2,)):
        bases = sorted(set(bases))
        if not bases or any(not 2 <= b <= 256 for b in bases):
            raise ValueError(f"Bases must lie between 2 and 256, got `{bases}`.")
        return cls(TSequence.unit(), 0, {b: DigitBlock(b) for b in bases})

    def snapshot(self):
        """Read-only view of the digits emitted up to the last completed round."""
        return types.MappingProxyType(dict(self.emitted))

def control_of(source):
    """Turn a predicate, predicate text, control sequence or list of values into a `ControlSequence`."""
    if isinstance(source, ControlSequence):
        return source
    if isinstance(source, Predicate):
        return first_reduction_stream(source)
    if isinstance(source, str):
        return first_reduction_stream(parse_predicate(source))
    if isinstance(source, (list, tuple)):
        return ControlSequence.from_values(source)
    raise ValueError(f"Cannot drive the pipeline with `{source!r}`.")

def lambda_ref_advance(state, f_next, params = PARAMS, **refine_options):
    """Apply `refine(R_j, f_next)` and emit the newly determined digits.

    Parameters
    ----------
    state : PipelineState
        Current state.
    f_next : int
        Next control value, at least 1.
    params : ParamTable, optional
        Parameter schedule, by default `PARAMS`.
    **refine_options
        Passed on to `refine`.

    Returns
    -------
    PipelineState
        State after the round.
    """
    if not isinstance(f_next, int) or f_next < 1:
        raise ValueError(f"Control values must be positive integers, got `{f_next}`.")
    result = refine(state.sequence, f_next, params = params,
                    label = f"Round {state.round + 1}, refining with `i = {f_next}`.", **refine_options)
    I2 = result.output.interval(2)
    emitted = dict()
    for b, old in state.emitted.items():
        new = determined_digits(I2, b)
        if not old.is_prefix_of(new):
            raise ConstructionError(f"Round {state.round + 1} contradicts digits already emitted in base {b}.")
        emitted[b] = new
    return PipelineState(result.output, state.round + 1, emitted, result)

def run_rounds(f, rounds, bases = (2,), params = PARAMS, **refine_options):
    """Run a fixed number of rounds.

    Returns
    -------
    tuple
        List of states (one per round) and list of `RefineResult`.
    """
    values = iter(control_of(f))
    state = PipelineState.initial(bases)
    states, results = list(), list()
    for _ in range(rounds):
        f_next = next(values, None)
        if f_next is None:
            raise ResourceLimitError(f"Control sequence ended after {state.round} rounds.", state.snapshot())
        state = lambda_ref_advance(state, f_next, params = params, **refine_options)
        states.append(state)
        results.append(state.last_result)
    return states, results

@performance_check
def digit_streams(source, bases, count, params = PARAMS, max_rounds = None, trace = None, **refine_options):
    """Run the pipeline until `count` digits are determined in every base.

    Parameters
    ----------
    source : Predicate | ControlSequence | str | list
        What drives the refinements.
    bases : list
        Bases to emit digits in.
    count : int
        Number of digits per base.
    params : ParamTable, optional
        Parameter schedule, by default `PARAMS`.
    max_rounds : int, optional
        Stop with `ResourceLimitError` after this many rounds, by default None.
    trace : str, optional
        Path of a trace file to write, by default None.
    **refine_options
        Passed on to `refine`.

    Returns
    -------
    dict
        Base to `DigitBlock` of exactly `count` digits.
    """
    if count < 1:
        raise ValueError(f"Digit count must be at least 1, got `{count}`.")
    state = PipelineState.initial(bases)
    values = iter(control_of(source))
    writer = TraceWriter(trace, params) if trace else None

    def partial():
        return {b: x[:count] for b, x in state.emitted.items()}

    try:
        while any(len(x) < count for x in state.emitted.values()):
            if max_rounds is not None and state.round >= max_rounds:
                raise ResourceLimitError(f"Stopped after {state.round} rounds with "
                                         f"{min(len(x) for x in state.emitted.values())} of {count} digits.", partial())
            f_next = next(values, None)
            if f_next is None:
                raise ResourceLimitError(f"Control sequence ended after {state.round} rounds.", partial())
            state = lambda_ref_advance(state, f_next, params = params, **refine_options)
            if writer is not None:
                writer.write_round(state.last_result)
            log.info(f"> digits determined: `{ {b: len(x) for b, x in state.emitted.items()} }`.")
    finally:
        if writer is not None:
            writer.close()
    return partial()

def digits(source, base, count, params = PARAMS, max_rounds = None, trace = None, **refine_options):
    """First `count` digits in `base` of the real generated from `source`."""
    try:
        streams = digit_streams(source, [base], count, params = params, max_rounds = max_rounds,
                                trace = trace, **refine_options)
    except ResourceLimitError as e:
        raise ResourceLimitError(str(e), e.partial[base]) from None
    return streams[base]

def replay_trace(trace, **refine_options):
    """Re-run the rounds of a trace and list the records that differ.

    Parameters
    ----------
    trace : Trace
        Parsed trace.
    **refine_options
        Passed on to `refine`.

    Returns
    -------
    list
        Descriptions of mismatching records, empty when the replay agrees.
    """
    params = ParamTable.from_dict(trace.params)
    control = [rnd.i for rnd in trace.rounds]
    log.info(f"--> Replaying {len(control)} rounds.").add()
    _, results = run_rounds(control, len(control), params = params, **refine_options)
    replayed = list()
    for round_no, result in enumerate(results, 1):
        replayed.extend(json.loads(json.dumps(x)) for x in round_records(round_no, result))
    recorded = trace.records[1:]
    problems = [f"record {n}: `{a.get('record')}` of round {a.get('round')} differs."
                for n, (a, b) in enumerate(zip(recorded, replayed), 2) if a != b]
    if len(recorded) != len(replayed):
        problems.append(f"trace has {len(recorded)} records after the header, the replay {len(replayed)}.")
    log.sub().info(f"> Replay {'agrees' if not problems else 'differs'}.")
    return problems
