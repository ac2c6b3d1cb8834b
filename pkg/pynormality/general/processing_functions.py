"""
Integer and digit helpers shared by the construction modules. Digit blocks are
stored one digit per byte, big integers go through `gmpy2` for base conversion
and long division.
"""
import functools
from fractions import Fraction
import numpy as np
import gmpy2

_ALPHABET_LOWER = "0123456789abcdefghijklmnopqrstuvwxyz"
_ALPHABET_62 = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz"

def _decode_table(base):
    table = bytearray(range(256))
    if base <= 36:
        for value, char in enumerate(_ALPHABET_LOWER):
            table[ord(char)] = value
            table[ord(char.upper())] = value
    else:
        for value, char in enumerate(_ALPHABET_62):
            table[ord(char)] = value
    return bytes(table)

_DECODE_36 = _decode_table(36)
_DECODE_62 = _decode_table(62)
_ENCODE_36 = bytes.maketrans(bytes(range(36)), _ALPHABET_LOWER.encode())
_ENCODE_62 = bytes.maketrans(bytes(range(62)), _ALPHABET_62.encode())

@functools.lru_cache(maxsize = 512)
def power(base, exponent):
    """Cached `base ** exponent`, the construction asks for the same large powers
    many times."""
    return base ** exponent

def ceil_div(num, den):
    """Exact `ceil(num / den)` for integers, `den > 0`."""
    if den & (den - 1) == 0:
        shift = den.bit_length() - 1
        return -((-num) >> shift)
    return int(-gmpy2.f_div(-gmpy2.mpz(num), den))

def floor_div(num, den):
    """Exact `floor(num / den)` for integers, `den > 0`."""
    if den & (den - 1) == 0:
        return num >> (den.bit_length() - 1)
    return int(gmpy2.f_div(gmpy2.mpz(num), den))

def ceil_log2(n):
    """Least `e` with `2**e >= n`, for `n >= 1`."""
    if n < 1:
        raise ValueError(f"`ceil_log2` needs a positive integer, got `{n}`.")
    return (n - 1).bit_length()

def fewer_than_power(count, base, exponent):
    """Decide `count < base ** exponent` without computing the power when it
    would be much larger than `count`.

    Parameters
    ----------
    count : int
        Non-negative integer.
    base : int
        Integer >= 2.
    exponent : int
        Non-negative integer.

    Returns
    -------
    bool
        True if `count < base ** exponent`.
    """
    value = 1
    for _ in range(exponent):
        value *= base
        if value > count:
            return True
    return count < value

def int_to_digits(value, base, length):
    """Write `value` in `base` as exactly `length` digits (leading zeros added).

    Parameters
    ----------
    value : int
        Integer with `0 <= value < base ** length`.
    base : int
        Base between 2 and 256.
    length : int
        Number of digits.

    Returns
    -------
    bytes
        One byte per digit, most significant first.
    """
    if length == 0:
        if value != 0:
            raise ValueError(f"`{value}` does not fit in zero digits.")
        return b""
    if value < 0:
        raise ValueError(f"Can only convert non-negative integers, got `{value}`.")
    if base <= 62:
        text = gmpy2.mpz(value).digits(base)
        if text[:2] in ("0b", "0o", "0x"):
            text = text[2:]
        raw = text.encode("ascii").translate(_DECODE_36 if base <= 36 else _DECODE_62)
    else:
        raw = _int_to_digits_split(gmpy2.mpz(value), base, length)
        raw = raw.lstrip(b"\x00")
    if len(raw) > length:
        raise ValueError(f"`{value}` needs more than {length} digits in base {base}.")
    return b"\x00" * (length - len(raw)) + raw

def _int_to_digits_split(value, base, length):
    # divide and conquer on powers of the base, small pieces by repeated divmod
    if length <= 32:
        out = bytearray(length)
        for pos in range(length - 1, -1, -1):
            value, digit = gmpy2.f_divmod(value, base)
            out[pos] = int(digit)
        return bytes(out)
    low_length = length // 2
    high, low = gmpy2.f_divmod(value, power(base, low_length))
    return _int_to_digits_split(high, base, length - low_length) + _int_to_digits_split(low, base, low_length)

def digits_to_int(digits, base):
    """Inverse of `int_to_digits`.

    Parameters
    ----------
    digits : bytes
        One byte per digit, most significant first.
    base : int
        Base between 2 and 256.

    Returns
    -------
    int
        Value of the digits.
    """
    if len(digits) == 0:
        return 0
    if base <= 62:
        text = digits.translate(_ENCODE_36 if base <= 36 else _ENCODE_62).decode("ascii")
        return int(gmpy2.mpz(text, base))
    return int(_digits_to_int_split(digits, base))

def _digits_to_int_split(digits, base):
    if len(digits) <= 32:
        value = 0
        for digit in digits:
            value = value * base + digit
        return gmpy2.mpz(value)
    low_length = len(digits) // 2
    high = _digits_to_int_split(digits[:-low_length], base)
    low = _digits_to_int_split(digits[-low_length:], base)
    return high * power(base, low_length) + low

def digits_to_text(digits, base, sep = " "):
    """Characters `0-9a-z` for bases up to 36, otherwise decimal values joined by `sep`."""
    if base <= 36:
        return digits.translate(_ENCODE_36).decode("ascii")
    return sep.join(str(d) for d in digits)

def text_to_digits(text, base):
    """Inverse of `digits_to_text`, raises `ValueError` on characters outside the base."""
    if base <= 36:
        text = "".join(text.split())
        if not all(c in _ALPHABET_LOWER[:base] for c in text.lower()):
            bad = next(c for c in text if c.lower() not in _ALPHABET_LOWER[:base])
            raise ValueError(f"Character `{bad}` is not a digit in base {base}.")
        return text.encode("ascii").translate(_DECODE_36)
    values = [int(part) for part in text.split()]
    if any(not 0 <= v < base for v in values):
        raise ValueError(f"Digit values must lie in [0, {base}).")
    return bytes(values)

def digits_to_display(digits, base):
    """Printed form of a block: characters `0-9` up to base 10, decimal digit values
    separated by single spaces above. `display_to_digits` reads it back."""
    if base <= 10:
        return digits_to_text(digits, base)
    return " ".join(str(d) for d in digits)

def display_to_digits(text, base):
    """Inverse of `digits_to_display`.

    Parameters
    ----------
    text : str
        Digit characters (base <= 10, whitespace ignored) or whitespace separated
        decimal values (base > 10).
    base : int
        Base between 2 and 256.

    Returns
    -------
    bytes
        One byte per digit.
    """
    if base <= 10:
        return text_to_digits(text, base)
    parts = text.split()
    bad = next((part for part in parts if not part.isdecimal()), None)
    if bad is not None:
        raise ValueError(f"`{bad}` is not a decimal digit value, base {base} digits are written as numbers.")
    values = [int(part) for part in parts]
    bad = next((v for v in values if v >= base), None)
    if bad is not None:
        raise ValueError(f"Digit value `{bad}` is not valid in base {base}.")
    return bytes(values)

def common_prefix_length(first, second):
    """Number of leading positions where two byte strings agree."""
    n = min(len(first), len(second))
    if n == 0:
        return 0
    a = np.frombuffer(first, dtype = np.uint8, count = n)
    b = np.frombuffer(second, dtype = np.uint8, count = n)
    mismatch = np.flatnonzero(a != b)
    return int(mismatch[0]) if mismatch.size else n

def format_fraction(q):
    """Exact rational as `"num/den"`, also for integers (`"0/1"`)."""
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"

def parse_fraction(text):
    """Inverse of `format_fraction`."""
    try:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    except (ValueError, ZeroDivisionError, AttributeError) as e:
        raise ValueError(f"`{text}` is not a `num/den` rational.") from e
