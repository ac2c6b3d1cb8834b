"""
Line-delimited JSON traces of refinement runs.

The first line is a header, then every round writes one `round` record followed
by one `step` record per recursive step. Blocks are written as digit strings
(`0-9a-z`) for bases up to 36 and as lists of integers above, rationals as
`"num/den"` strings and per-base maps are keyed by the base as a string.
"""
import json
import os
from dataclasses import dataclass, field
from pynormality.general.logger import log
from pynormality.general.errors import TraceFormatError
from pynormality.general.processing_functions import (ceil_log2, format_fraction, parse_fraction)
from pynormality.construction.discrepancy import DigitBlock
from pynormality.construction.intervals import interval_of
from pynormality.construction.tsequence import TSequence, validate
from pynormality.construction.parameters import ParamTable, delta
from pynormality.construction.refine import StepRecord, round_violations, step_violations

TRACE_FORMAT = 1

HEADER_FIELDS = ("format", "conforming", "params")
ROUND_FIELDS = ("round", "i", "p", "bases", "prefix_lengths", "v")
STEP_FIELDS = ("round", "step", "scanned", "visited", "u", "u_lengths", "discrepancies", "x_lengths")

@dataclass
class TraceRound:
    round: int
    i: int
    p: int
    bases: list
    prefix_lengths: dict
    v: dict
    steps: list = field(default_factory = list)

@dataclass
class Trace:
    conforming: bool
    params: dict
    rounds: list
    records: list

def encode_block(block):
    if block.base <= 36:
        return str(block)
    return list(block.digits)

def decode_block(value, base):
    if isinstance(value, str):
        return DigitBlock.from_text(value, base)
    if isinstance(value, list):
        return DigitBlock(base, bytes(value))
    raise ValueError(f"Cannot read a block from `{value!r}`.")

def header_record(params):
    return {"record": "header", "format": TRACE_FORMAT, "conforming": params.conforming,
            "params": params.to_dict()}

def round_records(round_no, result):
    """Records describing one `RefineResult`."""
    out = [{
        "record": "round",
        "round": round_no,
        "i": result.i,
        "p": result.p,
        "bases": list(range(2, result.i + 2)),
        "prefix_lengths": {str(b): n for b, n in result.initial.prefix_lengths.items()},
        "v": {str(b): encode_block(v) for b, v in result.initial.v.items()},
    }]
    for step in result.steps:
        out.append({
            "record": "step",
            "round": round_no,
            "step": step.step,
            "scanned": step.scanned,
            "visited": step.visited,
            "u": {str(b): encode_block(u) for b, u in step.u.items()},
            "u_lengths": {str(b): n for b, n in step.u_lengths.items()},
            "discrepancies": {str(b): format_fraction(d) for b, d in step.discrepancies.items()},
            "x_lengths": {str(b): n for b, n in step.x_lengths.items()},
        })
    return out

class TraceWriter():
    """Write a trace file round by round.

    Parameters
    ----------
    fh : str
        Path of the trace file.
    params : ParamTable
        Parameters of the run.
    """

    def __init__(self, fh, params):
        folder = os.path.dirname(os.path.abspath(fh))
        if not os.path.isdir(folder):
            os.makedirs(folder)
        self.fh = fh
        self.rounds = 0
        self._file = open(fh, "w", encoding = "utf8")
        self._write(header_record(params))

    def _write(self, record):
        self._file.write(json.dumps(record, separators = (",", ":")) + "\n")

    def write_round(self, result):
        self.rounds += 1
        for record in round_records(self.rounds, result):
            self._write(record)
        self._file.flush()

    def close(self):
        self._file.close()
        log.info(f"> Trace with {self.rounds} rounds written to `{self.fh}`.")

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()

def write_trace(fh, results, params):
    """Write all `results` (in round order) to `fh`."""
    with TraceWriter(fh, params) as writer:
        for result in results:
            writer.write_round(result)

def _require(record, names, line_no):
    missing = [x for x in names if x not in record]
    if missing:
        raise TraceFormatError(f"Line {line_no}: `{record.get('record')}` record misses `{'`, `'.join(missing)}`.")

def _int_keys(d, line_no, name):
    if not isinstance(d, dict):
        raise TraceFormatError(f"Line {line_no}: field `{name}` must be an object.")
    try:
        return {int(b): value for b, value in d.items()}
    except ValueError:
        raise TraceFormatError(f"Line {line_no}: field `{name}` must be keyed by bases.") from None

def read_trace(fh):
    """Parse a trace file.

    Parameters
    ----------
    fh : str
        Path of the trace file.

    Returns
    -------
    Trace
        Header fields, rounds with their `StepRecord` objects and the raw records.
    """
    records = list()
    with open(fh, "r", encoding = "utf8") as x:
        for line_no, line in enumerate(x, 1):
            if not line.strip():
                continue
            try:
                record = json.loads(line)
            except json.JSONDecodeError as e:
                raise TraceFormatError(f"Line {line_no}: not valid JSON ({e.msg}).") from None
            if not isinstance(record, dict) or "record" not in record:
                raise TraceFormatError(f"Line {line_no}: expected an object with a `record` field.")
            records.append((line_no, record))

    if len(records) == 0 or records[0][1]["record"] != "header":
        raise TraceFormatError("Trace must start with a header record.")
    line_no, header = records[0]
    _require(header, HEADER_FIELDS, line_no)
    if header["format"] != TRACE_FORMAT:
        raise TraceFormatError(f"Unsupported trace format `{header['format']}`.")

    rounds = list()
    try:
        for line_no, record in records[1:]:
            kind = record["record"]
            if kind == "round":
                _require(record, ROUND_FIELDS, line_no)
                if record["round"] != len(rounds) + 1:
                    raise TraceFormatError(f"Line {line_no}: round `{record['round']}` is out of order.")
                v = _int_keys(record["v"], line_no, "v")
                rounds.append(TraceRound(record["round"], record["i"], record["p"], list(record["bases"]),
                                         _int_keys(record["prefix_lengths"], line_no, "prefix_lengths"),
                                         {b: decode_block(x, b) for b, x in v.items()}))
            elif kind == "step":
                _require(record, STEP_FIELDS, line_no)
                if not rounds or record["round"] != rounds[-1].round:
                    raise TraceFormatError(f"Line {line_no}: step record outside its round.")
                u = {b: decode_block(x, b) for b, x in _int_keys(record["u"], line_no, "u").items()}
                disc = {b: parse_fraction(x) for b, x in _int_keys(record["discrepancies"], line_no, "discrepancies").items()}
                rounds[-1].steps.append(StepRecord(record["step"], record["scanned"], record["visited"], u, disc,
                                                   _int_keys(record["x_lengths"], line_no, "x_lengths")))
            else:
                raise TraceFormatError(f"Line {line_no}: unknown record type `{kind}`.")
    except TraceFormatError:
        raise
    except (ValueError, TypeError) as e:
        raise TraceFormatError(f"Line {line_no}: {e}") from None

    return Trace(bool(header["conforming"]), header["params"], rounds, [r for _, r in records])

def verify_trace(trace, stride = None, full_range_limit = None):
    """Rebuild every round's blocks from a trace and re-run all checks on them.

    Parameters
    ----------
    trace : Trace
        Parsed trace.
    stride : int, optional
        Sampling stride for the prefix check, by default from `run_defaults`.
    full_range_limit : int, optional
        Ranges up to this size are checked at stride 1, by default from `run_defaults`.

    Returns
    -------
    list
        One `RoundReport` per round.
    """
    if not trace.conforming:
        raise ValueError("Refusing to verify a trace made with test parameters.")
    params = ParamTable.from_dict(trace.params)
    if not params.conforming:
        raise ValueError("Refusing to verify a trace made with test parameters.")

    blocks = {2: DigitBlock(2)}
    reports = list()
    log.info(f"--> Verifying {len(trace.rounds)} rounds.").add()
    for rnd in trace.rounds:
        i, p = rnd.i, rnd.p
        if sorted(blocks) != list(range(2, p + 2)):
            raise TraceFormatError(f"Round {rnd.round}: `p = {p}` does not match the previous round.")
        bases = list(range(2, i + 2))
        if rnd.bases != bases or sorted(rnd.v) != bases or any(sorted(s.u) != bases for s in rnd.steps):
            raise TraceFormatError(f"Round {rnd.round}: blocks are not given for bases 2..{i + 1}.")

        new_blocks = dict()
        step_problems = list()
        for b in bases:
            prefix = blocks[b].digits if b <= p + 1 else b""
            parts = [prefix, rnd.v[b].digits]
            length = len(prefix) + len(rnd.v[b])
            for step in rnd.steps:
                parts.append(step.u[b].digits)
                length += len(step.u[b])
                if step.x_lengths.get(b) != length:
                    step_problems.append(f"step {step.step}: recorded |x_{b}| does not match the blocks.")
            new_blocks[b] = DigitBlock(b, b"".join(parts))

        prev = {b: blocks[b] for b in range(2, min(i, p) + 2)}
        report = round_violations(prev, new_blocks, interval_of(blocks[p + 1]), interval_of(new_blocks[2]),
                                  i, p, params = params, stride = stride, full_range_limit = full_range_limit)
        report.violations.extend(step_problems)
        for step in rnd.steps:
            report.violations.extend(step_violations(step, i, params = params))
        delta_bits = ceil_log2(delta(p).denominator)
        for b in prev:
            if rnd.prefix_lengths.get(b) != len(prev[b]):
                report.violations.append(f"base {b}: recorded prefix length does not match the previous round.")
            if len(rnd.v[b]) > delta_bits:
                report.violations.append(f"base {b}: |v_b| = {len(rnd.v[b])} exceeds {delta_bits}.")
        sequence = TSequence(tuple(interval_of(new_blocks[b]) for b in bases))
        report.violations.extend(f"output sequence: {x}" for x in validate(sequence))

        status = "pass" if report.passed else f"{len(report.violations)} violations"
        log.info(f"> round {rnd.round} (i = {i}, p = {p}): {status}.")
        reports.append(report)
        blocks = new_blocks
    log.sub()
    return reports
