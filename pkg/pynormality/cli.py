"""
Command line tool, `pynormality <command> ...`.

Exit codes: 0 on success, 1 when a construction guarantee or a verification
fails, 2 on invalid input and 3 when a resource limit stopped a run.
"""
import sys
import argparse
import pandas as pd
from pynormality import __version__
from pynormality.general.logger import log, adjust_logger
from pynormality.general.errors import (ConstructionError, ResourceLimitError,
                                        PredicateEvaluationError)
from pynormality.general.processing_functions import format_fraction
from pynormality.general.pre_defaults import run_defaults
from pynormality.construction.discrepancy import DigitBlock, prefix_discrepancies, block_discrepancy
from pynormality.construction.parameters import PARAMS
from pynormality.construction.trace import read_trace, verify_trace
from pynormality.main import RunConfig
from pynormality.pipeline import digit_streams, replay_trace

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_INPUT = 2
EXIT_LIMIT = 3

def make_parser():
    defaults = run_defaults()
    parser = argparse.ArgumentParser(prog = "pynormality",
                                     description = "Computable absolutely normal numbers from predicates.")
    parser.add_argument("--version", action = "version", version = f"%(prog)s {__version__}")
    parser.add_argument("--log-level", default = "WARNING", choices = ["DEBUG", "INFO", "WARNING", "ERROR"])
    parser.add_argument("--log-folder", default = None, help = "Also write `log.txt` into this folder.")
    sub = parser.add_subparsers(dest = "command", required = True)

    def add_sources(p):
        g = p.add_mutually_exclusive_group(required = True)
        g.add_argument("--predicate", help = "Predicate text, e.g. `div(y, x) & x < 4`.")
        g.add_argument("--predicate-file", dest = "predicate_file", help = "File holding predicate text.")
        g.add_argument("--builtin", choices = ["true", "false"], help = "Builtin predicate.")
        g.add_argument("--control", type = int, nargs = "+",
                       help = "Explicit control values, continued by the `false` predicate's stream.")

    p = sub.add_parser("digits", help = "Print digits of the generated real.")
    add_sources(p)
    p.add_argument("--base", dest = "bases", type = int, action = "append",
                   help = "Output base, repeat for several bases (default 2).")
    p.add_argument("--count", type = int, required = True)
    p.add_argument("--trace", help = "Write a trace file.")
    p.add_argument("--toy-params", dest = "toy_params", help = "Non-conforming overrides like `k=2,ell=8`.")
    p.add_argument("--max-rounds", dest = "max_rounds", type = int, default = defaults["max_rounds"])

    p = sub.add_parser("reduce", help = "Print the control sequence of a predicate.")
    add_sources(p)
    p.add_argument("--count", type = int, required = True)

    p = sub.add_parser("analyze", help = "Prefix discrepancies of a digit string as CSV.")
    p.add_argument("--input", help = "Digit file, stdin when missing.")
    p.add_argument("--base", type = int, default = 2)
    p.add_argument("--ell", type = int, default = defaults["analyze_ell"])
    p.add_argument("--stride", type = int, default = defaults["analyze_stride"])

    p = sub.add_parser("params", help = "Print the parameter schedule as CSV.")
    p.add_argument("--max-index", dest = "max_index", type = int, default = defaults["max_index"])

    p = sub.add_parser("verify", help = "Re-check every round of a trace file.")
    p.add_argument("--trace", required = True)
    p.add_argument("--stride", type = int, default = None)
    p.add_argument("--replay", action = "store_true", help = "Also re-run the construction and compare.")
    return parser

def cmd_digits(config, out):
    params = config.params_table()
    streams = digit_streams(config.control_source(), config.bases, config.count, params = params,
                            max_rounds = config.max_rounds, trace = config.trace)
    for b in config.bases:
        print(streams[b].display(), file = out)
    return EXIT_OK

def cmd_reduce(config, out):
    for value in config.control_source().take(config.count):
        print(value, file = out)
    return EXIT_OK

def cmd_analyze(config, out):
    if config.input is None:
        text = sys.stdin.read()
    else:
        with open(config.input, "r", encoding = "utf8") as x:
            text = x.read()
    u = DigitBlock.from_display(text, config.base)
    if len(u) == 0:
        raise ValueError("Input holds no digits.")
    stride = config.stride or 1
    rows = list()
    for length, D in prefix_discrepancies(u, stride = stride, start = stride):
        prefix = u[:length]
        D_ell = block_discrepancy(prefix, config.ell) if length >= config.ell else None
        rows.append({"length": length, "D": format_fraction(D),
                     "D_ell": format_fraction(D_ell) if D_ell is not None else ""})
    pd.DataFrame(rows, columns = ["length", "D", "D_ell"]).to_csv(out, index = False)
    return EXIT_OK

def cmd_params(config, out):
    rows = [PARAMS.row(i) for i in range(1, config.max_index + 1)]
    df = pd.DataFrame(rows, columns = ["i", "delta", "k", "ell"])
    df["delta"] = df["delta"].map(format_fraction)
    df.to_csv(out, index = False)
    return EXIT_OK

def cmd_verify(config, out):
    trace = read_trace(config.trace)
    reports = verify_trace(trace, stride = config.stride)
    passed = True
    for n, report in enumerate(reports, 1):
        status = "pass" if report.passed else "FAIL"
        print(f"round {n} (i={report.i}, p={report.p}): {status}", file = out)
        for x in report.violations:
            print(f"  {x}", file = out)
        for x in report.notices:
            print(f"  note: {x}", file = out)
        passed &= report.passed
    if config.replay:
        problems = replay_trace(trace)
        print(f"replay: {'pass' if not problems else 'FAIL'}", file = out)
        for x in problems:
            print(f"  {x}", file = out)
        passed &= not problems
    return EXIT_OK if passed else EXIT_FAILED

COMMANDS = {
    "digits": cmd_digits,
    "reduce": cmd_reduce,
    "analyze": cmd_analyze,
    "params": cmd_params,
    "verify": cmd_verify,
}

def main(argv = None, out = None):
    """Run the command line tool and return its exit code."""
    out = out or sys.stdout
    try:
        args = make_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_INPUT if e.code else EXIT_OK

    adjust_logger(args.log_folder is not None, args.log_folder, args.log_level)
    try:
        config = RunConfig.from_args(args)
        config.validate()
        return COMMANDS[config.command](config, out)
    except ResourceLimitError as e:
        partial = e.partial if isinstance(e.partial, dict) else {}
        for b in sorted(partial):
            print(partial[b].display(), file = out)
        print(f"pynormality: stopped early: {e}", file = sys.stderr)
        return EXIT_LIMIT
    except ConstructionError as e:
        log.error(f"--> {e}")
        print(f"pynormality: construction failed: {e}", file = sys.stderr)
        return EXIT_FAILED
    except (ValueError, PredicateEvaluationError, OSError) as e:
        print(f"pynormality: {e}", file = sys.stderr)
        return EXIT_INPUT

if __name__ == "__main__":
    sys.exit(main())
