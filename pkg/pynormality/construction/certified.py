"""
Certified rational enclosures of `ln` and upper bounds of `exp(-x)`. All
results are exact `fractions.Fraction` values, no float enters a comparison.

Two independent logarithms are available: an `atanh` series with an explicit
remainder term, and interval evaluation through `mpmath.iv`.
"""
import math
import threading
from fractions import Fraction
from mpmath import iv
from mpmath.libmp import to_rational
from pynormality.general.errors import ConstructionError

_IV_LOCK = threading.Lock()

def _atanh_enclosure(z, terms):
    z2 = z * z
    total = Fraction(0)
    power = z
    for n in range(terms):
        total += power / (2 * n + 1)
        power *= z2
    remainder = power / ((2 * terms + 1) * (1 - z2))
    return total, total + remainder

def ln_enclosure(q, terms = 32):
    """Enclose `ln(q)` by two rationals.

    Parameters
    ----------
    q : Fraction | int
        Positive rational.
    terms : int, optional
        Series terms for each `atanh` evaluation, by default 32.

    Returns
    -------
    tuple
        `(lo, hi)` with `lo <= ln(q) <= hi`.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"Logarithm needs a positive argument, got `{q}`.")
    if terms < 1:
        raise ValueError(f"Need at least one series term, got `{terms}`.")

    # q = 2**e * r with 1 <= r < 2
    e = q.numerator.bit_length() - q.denominator.bit_length()
    r = q / Fraction(2) ** e
    if r < 1:
        e -= 1
        r *= 2

    ln2_lo, ln2_hi = (2 * x for x in _atanh_enclosure(Fraction(1, 3), terms))
    lnr_lo, lnr_hi = (2 * x for x in _atanh_enclosure((r - 1) / (r + 1), terms))

    if e >= 0:
        return e * ln2_lo + lnr_lo, e * ln2_hi + lnr_hi
    return e * ln2_hi + lnr_lo, e * ln2_lo + lnr_hi

def ln_enclosure_mpmath(q, prec_bits = 128):
    """Enclose `ln(q)` with `mpmath` interval arithmetic at `prec_bits` of working precision.

    Parameters
    ----------
    q : Fraction | int
        Positive rational.
    prec_bits : int, optional
        Working precision, by default 128.

    Returns
    -------
    tuple
        `(lo, hi)` with `lo <= ln(q) <= hi`, converted exactly to rationals.
    """
    q = Fraction(q)
    if q <= 0:
        raise ValueError(f"Logarithm needs a positive argument, got `{q}`.")
    with _IV_LOCK:
        saved = iv.prec
        iv.prec = prec_bits
        try:
            y = iv.log(iv.mpf(q.numerator) / iv.mpf(q.denominator))
            lo, hi = (Fraction(*to_rational(end)) for end in y._mpi_)
        finally:
            iv.prec = saved
    return lo, hi

def exp_neg_upper(x, terms = 24):
    """Certified upper bound of `exp(-x)`.

    The argument is halved until it is at most one, the alternating series is
    summed to `terms` terms plus the size of the first omitted term, and the
    result is squared back.

    Parameters
    ----------
    x : Fraction | int
        Non-negative rational.
    terms : int, optional
        Series terms, by default 24.

    Returns
    -------
    Fraction
        Value `u` with `exp(-x) <= u`.
    """
    x = Fraction(x)
    if x < 0:
        raise ValueError(f"Expected a non-negative argument, got `{x}`.")
    halvings = 0
    while x > 1:
        x /= 2
        halvings += 1
    total = Fraction(0)
    term = Fraction(1)
    for n in range(terms):
        total += term
        term *= -x / (n + 1)
    upper = total + abs(term)
    for _ in range(halvings):
        upper *= upper
    return upper

def least_integer_greater(enclose, start = 1, limit = 12):
    """Least integer strictly greater than an irrational quantity.

    Parameters
    ----------
    enclose : callable
        Takes a refinement level and returns `(lo, hi)` enclosing the quantity,
        tighter for higher levels.
    start : int, optional
        First level to try, by default 1.
    limit : int, optional
        Last level to try, by default 12.

    Returns
    -------
    int
        `floor(value) + 1`.
    """
    for level in range(start, limit + 1):
        lo, hi = enclose(level)
        floor_lo, floor_hi = math.floor(lo), math.floor(hi)
        if floor_lo == floor_hi:
            return floor_lo + 1
    raise ConstructionError(f"Enclosure did not settle on an integer floor after level `{limit}`.")
