"""
Digit blocks, occurrence counts and exact discrepancies.

A block `u` of length `n` in base `b` has simple discrepancy

    D(u, b) = max_d |occ(u, d) / n - 1 / b|

and block discrepancy at length `ell`

    D_ell(u, b) = max_v |occ(u, v) / n - 1 / b**ell|,

the maximum running over all `b**ell` blocks `v`, counting overlapping
occurrences and always normalising by `n`. Everything is returned as a
`fractions.Fraction`.
"""
import math
import functools
import collections
from dataclasses import dataclass
from fractions import Fraction
import numpy as np
from scipy.special import comb
from pynormality.general.processing_functions import (power, fewer_than_power,
                                                      int_to_digits, digits_to_int,
                                                      digits_to_text, text_to_digits,
                                                      digits_to_display, display_to_digits)
from pynormality.construction.certified import (ln_enclosure, ln_enclosure_mpmath,
                                                exp_neg_upper, least_integer_greater)

@dataclass(frozen = True)
class DigitBlock:
    """Finite string of digits in a fixed base, one digit per byte.

    Parameters
    ----------
    base : int
        Base between 2 and 256.
    digits : bytes
        Digit values, most significant first.
    """
    base: int
    digits: bytes = b""

    def __post_init__(self):
        if not isinstance(self.base, int) or not 2 <= self.base <= 256:
            raise ValueError(f"Base must be an integer between 2 and 256, got `{self.base}`.")
        if not isinstance(self.digits, bytes):
            object.__setattr__(self, "digits", bytes(self.digits))
        if self.digits and max(self.digits) >= self.base:
            raise ValueError(f"Digit `{max(self.digits)}` is not valid in base {self.base}.")

    @classmethod
    def from_text(cls, text, base = 2):
        return cls(base, text_to_digits(text, base))

    @classmethod
    def from_display(cls, text, base = 2):
        """Read the form written by `display`."""
        return cls(base, display_to_digits(text, base))

    @classmethod
    def from_int(cls, value, base, length):
        return cls(base, int_to_digits(value, base, length))

    def display(self):
        """Command line form, decimal values separated by spaces above base 10."""
        return digits_to_display(self.digits, self.base)

    def __len__(self):
        return len(self.digits)

    def __str__(self):
        return digits_to_text(self.digits, self.base)

    def __getitem__(self, key):
        if isinstance(key, slice):
            return DigitBlock(self.base, self.digits[key])
        return self.digits[key]

    def __add__(self, other):
        _check_bases(self, other)
        return DigitBlock(self.base, self.digits + other.digits)

    @property
    def array(self):
        if not self.digits:
            return np.zeros(0, dtype = np.uint8)
        return np.frombuffer(self.digits, dtype = np.uint8)

    @property
    def value(self):
        """Integer value of the digits read in `base`."""
        return digits_to_int(self.digits, self.base)

    def is_prefix_of(self, other):
        return self.base == other.base and other.digits.startswith(self.digits)

    def is_all_zeros(self):
        return not any(self.digits)

class DigitCounter:
    """Running per-digit tally, fed block by block.

    Parameters
    ----------
    base : int
        Base of the blocks that will be absorbed.
    block : DigitBlock, optional
        First block to absorb, by default None.
    """

    def __init__(self, base, block = None):
        self.base = base
        self.counts = np.zeros(base, dtype = np.int64)
        self.length = 0
        if block is not None:
            self.update(block)

    def update(self, block):
        if block.base != self.base:
            raise ValueError(f"Counter for base {self.base} cannot absorb a base {block.base} block.")
        self.counts += digit_counts(block)
        self.length += len(block)
        return self

    def copy(self):
        other = DigitCounter(self.base)
        other.counts = self.counts.copy()
        other.length = self.length
        return other

    def discrepancy(self):
        """Simple discrepancy of everything absorbed so far."""
        if self.length == 0:
            raise ValueError("Discrepancy of an empty block is undefined.")
        return _counts_discrepancy(self.counts, self.length, self.base)

    def __repr__(self):
        return f"DigitCounter(base={self.base}, length={self.length}, counts={self.counts.tolist()})"

def _check_bases(*blocks):
    bases = {x.base for x in blocks}
    if len(bases) > 1:
        raise ValueError(f"Blocks must share a base, got `{sorted(bases)}`.")

def digit_counts(u):
    return np.bincount(u.array, minlength = u.base)[:u.base].astype(np.int64)

def _counts_discrepancy(counts, length, base):
    dev = int(np.abs(base * counts - length).max())
    return Fraction(dev, base * length)

def occ(x, u):
    """Number of (possibly overlapping) occurrences of `u` in `x`.

    Parameters
    ----------
    x : DigitBlock
        Block to search in.
    u : DigitBlock
        Non-empty block to search for.

    Returns
    -------
    int
        Occurrence count, 0 when `u` is longer than `x`.
    """
    _check_bases(x, u)
    if len(u) == 0:
        raise ValueError("Cannot count occurrences of an empty block.")
    count = 0
    pos = x.digits.find(u.digits)
    while pos != -1:
        count += 1
        pos = x.digits.find(u.digits, pos + 1)
    return count

def simple_discrepancy(u):
    """Simple discrepancy `D(u, b)`, an exact rational in `[0, 1 - 1/b]`."""
    if len(u) == 0:
        raise ValueError("Discrepancy of an empty block is undefined.")
    return _counts_discrepancy(digit_counts(u), len(u), u.base)

def window_counts(u, ell):
    """Occurrence counts of the length-`ell` windows that occur in `u`.

    Only windows that occur get an entry, so memory never depends on `b**ell`.

    Parameters
    ----------
    u : DigitBlock
        Block to slide over.
    ell : int
        Window length.

    Returns
    -------
    np.ndarray
        One count per distinct occurring window.
    """
    windows = len(u) - ell + 1
    if windows <= 0:
        return np.zeros(0, dtype = np.int64)
    if power(u.base, ell) < 2**62:
        weights = np.array([u.base**(ell - 1 - j) for j in range(ell)], dtype = np.int64)
        codes = np.lib.stride_tricks.sliding_window_view(u.array.astype(np.int64), ell) @ weights
        return np.unique(codes, return_counts = True)[1]
    tally = collections.Counter(u.digits[j:j + ell] for j in range(windows))
    return np.fromiter(tally.values(), dtype = np.int64, count = len(tally))

def block_discrepancy(u, ell):
    """Block discrepancy `D_ell(u, b)`.

    A length-`ell` block that does not occur contributes exactly `1/b**ell`,
    the occurring ones contribute `|count/|u| - 1/b**ell|`.

    Parameters
    ----------
    u : DigitBlock
        Non-empty block.
    ell : int
        Block length, at least 1.

    Returns
    -------
    Fraction
        Value in `[0, 1 - 1/b**ell]`.
    """
    n = len(u)
    if n == 0:
        raise ValueError("Discrepancy of an empty block is undefined.")
    if ell < 1:
        raise ValueError(f"Block length must be positive, got `{ell}`.")
    counts = window_counts(u, ell)
    p = power(u.base, ell)
    dev = n if fewer_than_power(len(counts), u.base, ell) else 0
    for c in np.unique(counts).tolist():
        dev = max(dev, abs(c * p - n))
    return Fraction(dev, n * p)

def missing_block_certain(length, base, ell):
    """True when a block of `length` digits has fewer windows than there are
    length-`ell` blocks, so some block is certainly absent."""
    windows = max(0, length - ell + 1)
    return fewer_than_power(windows, base, ell)

def block_discrepancy_exceeds(u, ell, threshold):
    """Decide `block_discrepancy(u, ell) > threshold` for `threshold < 1/b**ell`.

    When `u` has fewer windows than there are length-`ell` blocks, some block is
    missing and the answer is True without looking at any window.
    """
    threshold = Fraction(threshold)
    if not threshold * power(u.base, ell) < 1:
        raise ValueError(f"Threshold `{threshold}` must be smaller than 1/{u.base}**{ell}.")
    if len(u) == 0:
        raise ValueError("Discrepancy of an empty block is undefined.")
    if missing_block_certain(len(u), u.base, ell):
        return True
    return block_discrepancy(u, ell) > threshold

def concat_bound(blocks):
    """Upper bound on the simple discrepancy of a concatenation,
    `sum(D(u_j) |u_j|) / sum(|u_j|)`."""
    blocks = list(blocks)
    if len(blocks) == 0:
        raise ValueError("Need at least one block.")
    _check_bases(*blocks)
    total = sum(len(u) for u in blocks)
    if total == 0:
        raise ValueError("All blocks are empty.")
    weighted = sum(simple_discrepancy(u) * len(u) for u in blocks if len(u) > 0)
    return Fraction(weighted, total)

def tail_count(b, k, i):
    """Number of length-`k` blocks in base `b` in which a fixed digit occurs exactly `i` times."""
    if not 0 <= i <= k:
        raise ValueError(f"Occurrence count `{i}` must lie between 0 and {k}.")
    return comb(k, i, exact = True) * (b - 1) ** (k - i)

@dataclass(frozen = True)
class TailReport:
    lhs_low: int
    lhs_high: int
    rhs_upper: Fraction
    holds: bool

def tail_bound_check(b, k, eps):
    """Compare both exact binomial tails with a certified upper bound of
    `b**k * exp(-b eps**2 k / 6)`.

    Parameters
    ----------
    b : int
        Base.
    k : int
        Block length.
    eps : Fraction
        Deviation, `6/k <= eps <= 1/b`.

    Returns
    -------
    TailReport
        Both tail sums, the bound and whether both tails stay below it.
    """
    eps = Fraction(eps)
    if b < 2 or k < 1:
        raise ValueError(f"Need `b >= 2` and `k >= 1`, got `{b}` and `{k}`.")
    if not Fraction(6, k) <= eps <= Fraction(1, b):
        raise ValueError(f"`eps` must lie between 6/{k} and 1/{b}, got `{eps}`.")
    low_end = math.floor(Fraction(k, b) - eps * k)
    high_start = math.ceil(Fraction(k, b) + eps * k)
    lhs_low = sum(tail_count(b, k, i) for i in range(0, low_end + 1))
    lhs_high = sum(tail_count(b, k, i) for i in range(max(high_start, 0), k + 1))
    rhs_upper = b**k * exp_neg_upper(b * eps**2 * k / 6)
    holds = lhs_low <= rhs_upper and lhs_high <= rhs_upper
    return TailReport(lhs_low, lhs_high, rhs_upper, holds)

def block_length_for(t, eps, delta, method = "series"):
    """Least integer greater than `max(ceil(6/eps), -ln(delta/2t) 6/eps**2)`.

    For every `k' >= block_length_for(t, eps, delta)` and `b <= t`, fewer than a
    `delta` fraction of the length-`k'` blocks in base `b` have `D > eps`.

    Parameters
    ----------
    t : int
        Largest base, at least 2.
    eps : Fraction
        Discrepancy bound, `0 < eps <= 1/t`.
    delta : Fraction
        Fraction bound, `0 < delta < 1`.
    method : {"series", "interval"}, optional
        Which certified logarithm to use, by default "series".

    Returns
    -------
    int
        The block length.
    """
    eps, delta = Fraction(eps), Fraction(delta)
    if t < 2:
        raise ValueError(f"`t` must be at least 2, got `{t}`.")
    if not 0 < eps <= Fraction(1, t):
        raise ValueError(f"`eps` must lie in (0, 1/{t}], got `{eps}`.")
    if not 0 < delta < 1:
        raise ValueError(f"`delta` must lie in (0, 1), got `{delta}`.")

    arg = 2 * t / delta
    scale = 6 / eps**2

    def enclose(level):
        if method == "series":
            lo, hi = ln_enclosure(arg, terms = 8 * 2**level)
        elif method == "interval":
            lo, hi = ln_enclosure_mpmath(arg, prec_bits = 32 * 2**level)
        else:
            raise ValueError(f"Unknown logarithm method `{method}`, choose from `series`, `interval`.")
        return lo * scale, hi * scale

    return max(math.ceil(6 / eps) + 1, least_integer_greater(enclose))

def discrepant_fraction(b, k, eps):
    """Exact fraction of length-`k` blocks in base `b` with `D(x, b) > eps`.

    Blocks are counted through their digit-count vectors, no block is enumerated.
    """
    eps = Fraction(eps)
    if b < 2 or k < 1:
        raise ValueError(f"Need `b >= 2` and `k >= 1`, got `{b}` and `{k}`.")
    lo = max(0, math.ceil(k * (Fraction(1, b) - eps)))
    hi = math.floor(k * (Fraction(1, b) + eps))

    @functools.lru_cache(maxsize = None)
    def balanced(digit, remaining):
        # fillings of `remaining` positions with digits `digit..b-1`, all counts in [lo, hi]
        if digit == b - 1:
            return 1 if lo <= remaining <= hi else 0
        return sum(comb(remaining, c, exact = True) * balanced(digit + 1, remaining - c)
                   for c in range(lo, min(hi, remaining) + 1))

    total = b**k
    return Fraction(total - balanced(0, k), total)

def prefix_deviations(u, lengths):
    """`max_d |b occ(u|l, d) - l|` for every prefix length `l` in `lengths`,
    the numerator of `D(u|l, b)` over `b l`."""
    lengths = np.asarray(lengths, dtype = np.int64)
    if lengths.size and (lengths.min() < 1 or lengths.max() > len(u)):
        raise ValueError(f"Prefix lengths must lie between 1 and {len(u)}.")
    arr = u.array
    present = np.bincount(arr, minlength = u.base) > 0
    dev = np.zeros(lengths.size, dtype = np.int64)
    if not present.all():
        dev = lengths.copy()
    for d in np.flatnonzero(present):
        cum = np.cumsum(arr == d, dtype = np.int64)[lengths - 1]
        dev = np.maximum(dev, np.abs(u.base * cum - lengths))
    return dev

def prefix_discrepancies(u, stride = 1, start = 1):
    """Simple discrepancy of every `stride`-th prefix of `u` from length `start`,
    the full block always included.

    Returns
    -------
    list
        Tuples `(length, D)`.
    """
    if len(u) == 0:
        raise ValueError("Discrepancy of an empty block is undefined.")
    if stride < 1:
        raise ValueError(f"Stride must be positive, got `{stride}`.")
    lengths = sampled_lengths(max(start, 1), len(u), stride)
    dev = prefix_deviations(u, lengths)
    return [(l, Fraction(d, u.base * l)) for l, d in zip(lengths.tolist(), dev.tolist())]

def sampled_lengths(first, last, stride):
    """Lengths `first, first + stride, ...` up to `last`, always ending at `last`."""
    lengths = np.arange(first, last + 1, stride, dtype = np.int64)
    if lengths.size == 0 or lengths[-1] != last:
        lengths = np.append(lengths, np.int64(last))
    return lengths
