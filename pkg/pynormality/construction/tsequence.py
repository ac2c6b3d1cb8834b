"""
Nested sequences `(I_2, ..., I_t)` where `I_b` is `b`-adic, `I_{b+1}` lies in `I_b`
and `measure(I_{b+1}) >= measure(I_b) / (2(b+1))`. A t-sequence pins the first
digits of every real inside `I_t` in all bases `2..t` at once.
"""
import math
from dataclasses import dataclass, field
from pynormality.general.processing_functions import power
from pynormality.construction.intervals import (BadicInterval, block_of, contains,
                                                leftmost_badic_subinterval)

@dataclass(frozen = True)
class TSequence:
    """Intervals `(I_2, ..., I_t)`, the blocks `x_b` are derived from them on demand."""
    intervals: tuple
    _blocks: dict = field(default_factory = dict, compare = False, repr = False)

    def __post_init__(self):
        object.__setattr__(self, "intervals", tuple(self.intervals))
        if len(self.intervals) == 0:
            raise ValueError("A t-sequence needs at least the interval `I_2`.")

    @classmethod
    def unit(cls):
        """The sequence `([0, 1))`."""
        return cls((BadicInterval(2, 0, 0),))

    @property
    def t(self):
        return len(self.intervals) + 1

    def interval(self, b):
        if not 2 <= b <= self.t:
            raise ValueError(f"Base `{b}` is outside 2..{self.t}.")
        return self.intervals[b - 2]

    def x_b(self, b):
        block = self._blocks.get(b)
        if block is None:
            block = block_of(self.interval(b))
            self._blocks[b] = block
        return block

    def lengths(self):
        return {b: I.depth for b, I in zip(range(2, self.t + 1), self.intervals)}

def x_b(seq, b):
    """Block `x_b` of the sequence, the expansion of the left end of `I_b`."""
    return seq.x_b(b)

def extend_to_tsequence(I2, t):
    """Extend a dyadic interval to a t-sequence by taking leftmost subintervals.

    Parameters
    ----------
    I2 : BadicInterval
        Dyadic interval.
    t : int
        Last base, at least 2.

    Returns
    -------
    TSequence
        `(I2, I_3, ..., I_t)`.
    """
    if t < 2:
        raise ValueError(f"`t` must be at least 2, got `{t}`.")
    if I2.base != 2:
        raise ValueError(f"First interval must be dyadic, got base `{I2.base}`.")
    intervals = [I2]
    for b in range(3, t + 1):
        intervals.append(leftmost_badic_subinterval(intervals[-1], b))
    return TSequence(tuple(intervals))

def validate(seq):
    """List every violated t-sequence condition, empty when `seq` is valid.

    Parameters
    ----------
    seq : TSequence
        Sequence to check.

    Returns
    -------
    list
        Violation descriptions.
    """
    violations = []
    depths = {}
    for b, I in zip(range(2, seq.t + 1), seq.intervals):
        if not isinstance(I, BadicInterval) or I.base != b:
            violations.append(f"adicity: interval {b - 2} is not {b}-adic.")
            continue
        depths[b] = I.depth

    for b in range(3, seq.t + 1):
        if b not in depths or b - 1 not in depths:
            continue
        inner, outer = seq.intervals[b - 2], seq.intervals[b - 3]
        if not contains(outer, inner):
            violations.append(f"nesting: I_{b} is not inside I_{b - 1}.")
        # measure(I_b) >= measure(I_{b-1}) / 2b
        if 2 * b * power(b - 1, depths[b - 1]) < power(b, depths[b]):
            violations.append(f"ratio: measure(I_{b}) < measure(I_{b - 1}) / {2 * b}.")

    for b in depths:
        for b_ in depths:
            if b <= b_ or b - b_ < 2:
                continue
            factor = 2**(b - b_) * (math.factorial(b) // math.factorial(b_))
            if factor * power(b_, depths[b_]) < power(b, depths[b]):
                violations.append(f"factorial ratio: measure(I_{b}) < measure(I_{b_}) / {factor}.")
    return violations
