import os
import json
from pynormality.general.logger import log
from pynormality.general.pre_defaults import run_defaults
from pynormality.construction.parameters import ParamTable, PARAMS
from pynormality.reduction.predicate import BUILTINS, parse_predicate
from pynormality.reduction.first_reduction import ControlSequence, first_reduction_stream

class RunConfig():
    """Settings of one command line invocation.

    Parameters
    ----------
    command : {"digits", "reduce", "analyze", "params", "verify"}
        Subcommand to run.
    predicate : str, optional
        Predicate text.
    predicate_file : str, optional
        Path of a file holding predicate text.
    builtin : {"true", "false"}, optional
        Builtin predicate.
    control : tuple, optional
        Explicit control values, followed by the stream of the `false` predicate.
    bases : tuple, optional
        Output bases for `digits`, by default (2,).
    count : int, optional
        Number of digits (or control values for `reduce`).
    trace : str, optional
        Trace file to write (`digits`) or read (`verify`).
    toy_params : str, optional
        Non-conforming overrides like `k=2,ell=8`.
    max_rounds : int, optional
        Round limit for `digits`.
    input : str, optional
        Digit file for `analyze`, stdin when missing.
    base : int, optional
        Base of the `analyze` input, by default 2.
    ell : int, optional
        Block length for `analyze`.
    stride : int, optional
        Prefix stride for `analyze` and `verify`.
    replay : bool, optional
        Re-run the construction while verifying a trace, by default False.
    max_index : int, optional
        Last index printed by `params`.
    """

    commands = ("digits", "reduce", "analyze", "params", "verify")
    fields = ("command", "predicate", "predicate_file", "builtin", "control", "bases", "count",
              "trace", "toy_params", "max_rounds", "input", "base", "ell", "stride", "replay", "max_index")

    def __init__(self, command, predicate = None, predicate_file = None, builtin = None, control = None,
                 bases = (2,), count = None, trace = None, toy_params = None, max_rounds = None,
                 input = None, base = 2, ell = None, stride = None, replay = False, max_index = None):
        defaults = run_defaults()
        self.command = command
        self.predicate = predicate
        self.predicate_file = predicate_file
        self.builtin = builtin
        self.control = tuple(control) if control is not None else None
        self.bases = tuple(bases)
        self.count = count
        self.trace = trace
        self.toy_params = toy_params
        self.max_rounds = max_rounds if max_rounds is not None else defaults["max_rounds"]
        self.input = input
        self.base = base
        self.ell = ell if ell is not None else defaults["analyze_ell"]
        self.stride = stride
        self.replay = replay
        self.max_index = max_index if max_index is not None else defaults["max_index"]

    def __repr__(self):
        set_fields = [f"{x}={getattr(self, x)!r}" for x in self.fields[1:] if getattr(self, x) not in (None, False)]
        return f"RunConfig({self.command!r}, {', '.join(set_fields)})"

    @classmethod
    def from_args(cls, args):
        """Build a configuration from an `argparse.Namespace`."""
        return cls(**{x: getattr(args, x) for x in cls.fields if getattr(args, x, None) is not None})

    def sources(self):
        return [x for x in ("predicate", "predicate_file", "builtin", "control") if getattr(self, x) is not None]

    def validate(self):
        log.info("--> Validating configuration.").add()
        try:
            if self.command not in self.commands:
                raise ValueError(f"Unknown command `{self.command}`, choose from `{'`, `'.join(self.commands)}`.")
            if self.command in ("digits", "reduce"):
                sources = self.sources()
                if len(sources) != 1:
                    raise ValueError(f"Give exactly one of `--predicate`, `--predicate-file`, `--builtin` "
                                     f"or `--control`, got `{sources}`.")
                if self.builtin is not None and self.builtin not in BUILTINS:
                    raise ValueError(f"Unknown builtin `{self.builtin}`, choose from `{'`, `'.join(BUILTINS)}`.")
                if self.control is not None and any(x < 1 for x in self.control):
                    raise ValueError(f"Control values must be positive, got `{list(self.control)}`.")
                if self.count is None or self.count < 1:
                    raise ValueError(f"Count must be at least 1, got `{self.count}`.")
            if self.command == "digits":
                if not self.bases or any(not 2 <= b <= 256 for b in self.bases):
                    raise ValueError(f"Bases must lie between 2 and 256, got `{list(self.bases)}`.")
                if self.max_rounds is not None and self.max_rounds < 1:
                    raise ValueError(f"Round limit must be at least 1, got `{self.max_rounds}`.")
                self.params_table()
            if self.command == "analyze":
                if not 2 <= self.base <= 256:
                    raise ValueError(f"Base must lie between 2 and 256, got `{self.base}`.")
                if self.ell < 1:
                    raise ValueError(f"Block length must be at least 1, got `{self.ell}`.")
                if self.input is not None and not os.path.isfile(self.input):
                    raise ValueError(f"Input file `{self.input}` does not exist.")
            if self.command == "verify" and self.trace is None:
                raise ValueError("`verify` needs a `--trace` file.")
            if self.command == "params" and self.max_index < 1:
                raise ValueError(f"Last index must be at least 1, got `{self.max_index}`.")
            if self.stride is not None and self.stride < 1:
                raise ValueError(f"Stride must be at least 1, got `{self.stride}`.")
        finally:
            log.sub()
        return True

    def params_table(self):
        if self.toy_params:
            return ParamTable.from_string(self.toy_params)
        return PARAMS

    def control_source(self):
        """The control sequence selected by the source options."""
        if self.control is not None:
            return ControlSequence.from_values(self.control, tail = first_reduction_stream(BUILTINS["false"]))
        if self.builtin is not None:
            return first_reduction_stream(BUILTINS[self.builtin])
        if self.predicate_file is not None:
            with open(self.predicate_file, "r", encoding = "utf8") as x:
                return first_reduction_stream(parse_predicate(x.read()))
        return first_reduction_stream(parse_predicate(self.predicate))

    def to_json(self, fh):
        out = {x: getattr(self, x) for x in self.fields}

        class EncodeSetTuple(json.JSONEncoder):
            def encode(self, obj):
                def hint_tuples(item):
                    if isinstance(item, tuple):
                        return {'type': "tuple", 'value': list(item)}
                    if isinstance(item, list):
                        return [hint_tuples(e) for e in item]
                    if isinstance(item, dict):
                        return {key: hint_tuples(value) for key, value in item.items()}
                    return item
                return super(EncodeSetTuple, self).encode(hint_tuples(obj))

        with open(fh, "w", encoding = "utf8") as x:
            x.write(json.dumps(out, cls = EncodeSetTuple))

    @classmethod
    def from_json(cls, fh):
        log.info(f"--> Loading configuration from `{os.path.split(fh)[1]}`.").add()
        def decode_tuple(dct):
            if dct.get("type", None) == "tuple":
                return tuple(dct.get("value"))
            return dct
        with open(fh, "r", encoding = "utf8") as fp:
            config_ = json.load(fp, object_hook = decode_tuple)
        unknown = set(config_).difference(cls.fields)
        if unknown:
            log.sub()
            raise ValueError(f"Unknown configuration fields `{sorted(unknown)}`.")
        config = cls(**config_)
        config.validate()
        log.sub().info("--> Configuration loaded.")
        return config
