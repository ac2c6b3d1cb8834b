"""
Exact intervals. A `BadicInterval` is `[a/b**m, (a+1)/b**m)` stored through its
integer fields, a `RatInterval` is `[left, right)` with rational endpoints. Both
expose `endpoints()`, a triple `(left_num, right_num, den)` of integers over a
common denominator, which is what every operation here works on.
"""
import math
from dataclasses import dataclass
from fractions import Fraction
from pynormality.general.processing_functions import (power, ceil_div, floor_div,
                                                      int_to_digits, common_prefix_length)
from pynormality.construction.discrepancy import DigitBlock

@dataclass(frozen = True)
class BadicInterval:
    """The `base`-adic interval `[index/base**depth, (index+1)/base**depth)`."""
    base: int
    depth: int
    index: int

    def __post_init__(self):
        if self.base < 2:
            raise ValueError(f"Base must be at least 2, got `{self.base}`.")
        if self.depth < 0:
            raise ValueError(f"Depth must be non-negative, got `{self.depth}`.")
        if self.index < 0 or not fewer_than_size(self.index, self.base, self.depth):
            raise ValueError(f"Index `{self.index}` is outside [0, {self.base}**{self.depth}).")

    @property
    def left(self):
        return Fraction(self.index, power(self.base, self.depth))

    @property
    def right(self):
        return Fraction(self.index + 1, power(self.base, self.depth))

    @property
    def measure(self):
        return Fraction(1, power(self.base, self.depth))

    def endpoints(self):
        return self.index, self.index + 1, power(self.base, self.depth)

    def __repr__(self):
        return f"BadicInterval(base={self.base}, depth={self.depth}, index=<{self.index.bit_length()} bits>)"

def fewer_than_size(index, base, depth):
    if base == 2:
        return index.bit_length() <= depth
    return index < power(base, depth)

@dataclass(frozen = True)
class RatInterval:
    """Semi-open interval `[left, right)` inside `[0, 1]`."""
    left: Fraction
    right: Fraction

    def __post_init__(self):
        object.__setattr__(self, "left", Fraction(self.left))
        object.__setattr__(self, "right", Fraction(self.right))
        if not 0 <= self.left < self.right <= 1:
            raise ValueError(f"Need `0 <= left < right <= 1`, got `[{self.left}, {self.right})`.")

    @property
    def measure(self):
        return self.right - self.left

    def endpoints(self):
        den = math.lcm(self.left.denominator, self.right.denominator)
        return (self.left.numerator * (den // self.left.denominator),
                self.right.numerator * (den // self.right.denominator), den)

def measure(interval):
    return interval.measure

def contains(outer, inner):
    """True if `inner` lies inside `outer`."""
    oln, orn, oden = outer.endpoints()
    iln, irn, iden = inner.endpoints()
    return oln * iden <= iln * oden and irn * oden <= orn * iden

def interval_of(x):
    """The interval of reals whose expansion starts with the block `x`."""
    return BadicInterval(x.base, len(x), x.value)

def block_of(interval):
    """The length-`depth` block of `index` in base `base`, leading zeros included."""
    return DigitBlock.from_int(interval.index, interval.base, interval.depth)

def least_depth(base, target):
    """Least `m >= 0` with `base**m >= target`."""
    if target <= 1:
        return 0
    if base == 2:
        return (target - 1).bit_length()
    m = max(0, int((target.bit_length() - 1) / math.log2(base)))
    while m > 0 and power(base, m - 1) >= target:
        m -= 1
    while power(base, m) < target:
        m += 1
    return m

def leftmost_badic_subinterval(interval, b):
    """Leftmost `b`-adic subinterval `J` with `measure(J) >= measure(interval) / (2b)`.

    The depth `m` is the least one with `b**-m <= measure(interval) / 2`, at that
    depth two aligned intervals fit, so the leftmost aligned one is contained.

    Parameters
    ----------
    interval : BadicInterval | RatInterval
        Non-empty interval.
    b : int
        Base of the result.

    Returns
    -------
    BadicInterval
        The selected subinterval.
    """
    ln, rn, den = interval.endpoints()
    width = rn - ln
    if width <= 0:
        raise ValueError("Cannot select a subinterval of an empty interval.")
    m = least_depth(b, ceil_div(2 * den, width))
    index = ceil_div(ln * power(b, m), den)
    return BadicInterval(b, m, index)

def determined_digits(interval, b):
    """Longest block `x` in base `b` whose interval contains `interval`.

    Every real in `interval` has `x` as a prefix of its base-`b` expansion.

    Parameters
    ----------
    interval : BadicInterval | RatInterval
        Non-empty interval inside `[0, 1)`.
    b : int
        Base.

    Returns
    -------
    DigitBlock
        The determined prefix.
    """
    if isinstance(interval, BadicInterval) and interval.base == b:
        return block_of(interval)
    ln, rn, den = interval.endpoints()
    # any determined block x has b**|x| <= 1/measure, so n digits suffice
    n = least_depth(b, ceil_div(den, rn - ln)) + 1
    p = power(b, n)
    first = floor_div(ln * p, den)
    last = ceil_div(rn * p, den) - 1
    first_digits = int_to_digits(first, b, n)
    last_digits = int_to_digits(last, b, n)
    return DigitBlock(b, first_digits[:common_prefix_length(first_digits, last_digits)])
