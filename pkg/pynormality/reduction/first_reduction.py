"""
From a predicate `C(x, y)` to a control sequence `f`.

Pairs are visited in the order of their code `n = 2**(x-1) (2y - 1)`. A pair
with `y = 1` or `C(x, y)` true appends `x, x+1, ..., x+y-1` to the output. The
first occurrences in `f` are `1, 2, 3, ...` in order, and some value occurs
infinitely often exactly when some `x` has infinitely many `y` with `C(x, y)`.
"""
import itertools
from pynormality.general.errors import PredicateEvaluationError
from pynormality.reduction.predicate import BoolConst

def pair_decode(n):
    """Pair `(x, y)` with `n = 2**(x-1) (2y - 1)`.

    Parameters
    ----------
    n : int
        Positive code.

    Returns
    -------
    tuple
        Positive integers `(x, y)`.
    """
    if not isinstance(n, int) or n < 1:
        raise ValueError(f"Pair codes are positive integers, got `{n}`.")
    valuation = (n & -n).bit_length() - 1
    return valuation + 1, ((n >> valuation) + 1) // 2

def pair_encode(x, y):
    if x < 1 or y < 1:
        raise ValueError(f"Pairs are made of positive integers, got `({x}, {y})`.")
    return (2 * y - 1) << (x - 1)

class ControlSequence():
    """Unbounded stream of positive integers. Every iteration replays the stream
    from its start.

    Parameters
    ----------
    factory : callable
        Returns a fresh iterator over the stream.
    description : str, optional
        Shown in logs, by default "".
    """

    def __init__(self, factory, description = ""):
        self._factory = factory
        self.description = description

    def __iter__(self):
        return iter(self._factory())

    def __repr__(self):
        return f"ControlSequence({self.description})"

    def take(self, count):
        """First `count` values."""
        return list(itertools.islice(self, count))

    @classmethod
    def from_values(cls, values, tail = None):
        """Fixed values, followed by `tail` when given."""
        values = [int(x) for x in values]
        if any(x < 1 for x in values):
            raise ValueError(f"Control values must be positive, got `{values}`.")
        def generate():
            yield from values
            if tail is not None:
                yield from tail
        description = f"{values}" + (f" then {tail.description}" if tail is not None else "")
        return cls(generate, description)

def first_reduction_stream(C):
    """Control sequence of the predicate `C`.

    Parameters
    ----------
    C : callable
        Predicate on pairs of positive integers.

    Returns
    -------
    ControlSequence
        The stream `f`.

    Notes
    -----
    Constant predicates skip evaluation. For `false` only the `y = 1` pairs
    append, so `f` is `1, 2, 3, ...`. A predicate that is false everywhere
    without being the constant still walks every code, and the value `x` then
    shows up at code `2**(x-1)`.
    """
    constant = getattr(C, "tree", None)
    if isinstance(constant, BoolConst):
        if not constant.value:
            return ControlSequence(lambda: itertools.count(1), f"first reduction of `{C}`")
        def generate():
            for n in itertools.count(1):
                x, y = pair_decode(n)
                yield from range(x, x + y)
        return ControlSequence(generate, f"first reduction of `{C}`")

    def generate():
        for n in itertools.count(1):
            x, y = pair_decode(n)
            try:
                appending = y == 1 or C(x, y)
            except PredicateEvaluationError as e:
                raise PredicateEvaluationError(f"Predicate failed at `(x, y) = ({x}, {y})`: {e}") from e
            if appending:
                yield from range(x, x + y)
    return ControlSequence(generate, f"first reduction of `{C}`")
