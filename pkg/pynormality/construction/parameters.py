"""
The schedule that drives the i-th refinement:

    delta_i = 1 / (2**(2i-2) ((i+1)!)**2)
    k_i     = least integer greater than max(6(i+2), -ln(delta_i / 2(i+1)**2) 6(i+2)**2)
    ell_i   = k_i ceil(log2(i+1)) + ceil(log2(1/delta_i))

`k_i` goes through a certified logarithm, the rest is integer arithmetic.
"""
import math
import threading
from fractions import Fraction
from pynormality.general.logger import log
from pynormality.general.processing_functions import ceil_log2
from pynormality.construction.discrepancy import block_length_for

class ParamTable():
    """Memoized values of `delta_i`, `k_i` and `ell_i`.

    Parameters
    ----------
    overrides : dict, optional
        Fixed `k` and/or `ell` used for every index, for small test runs. A table
        with overrides is not conforming, by default None.
    method : {"series", "interval"}, optional
        Certified logarithm used for `k_i`, by default "series".
    """

    def __init__(self, overrides = None, method = "series"):
        overrides = dict(overrides or {})
        unknown = set(overrides).difference({"k", "ell"})
        if unknown:
            raise ValueError(f"Unknown parameter overrides `{sorted(unknown)}`, choose from `k`, `ell`.")
        for key, value in overrides.items():
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"Override `{key}` must be a positive integer, got `{value}`.")
        self.overrides = overrides
        self.method = method
        self._k = dict()
        self._lock = threading.Lock()

    @property
    def conforming(self):
        return len(self.overrides) == 0

    def __repr__(self):
        if self.conforming:
            return "ParamTable()"
        return f"ParamTable(overrides={self.overrides})"

    @staticmethod
    def _check_index(i):
        if not isinstance(i, int) or i < 1:
            raise ValueError(f"Parameter index must be a positive integer, got `{i}`.")

    def delta(self, i):
        self._check_index(i)
        return delta(i)

    def k(self, i):
        self._check_index(i)
        if "k" in self.overrides:
            return self.overrides["k"]
        with self._lock:
            if i not in self._k:
                self._k[i] = block_length_for(i + 1, Fraction(1, i + 2), delta(i) / (i + 1), method = self.method)
            return self._k[i]

    def ell(self, i):
        self._check_index(i)
        if "ell" in self.overrides:
            return self.overrides["ell"]
        return self.k(i) * ceil_log2(i + 1) + ceil_log2(delta(i).denominator)

    def row(self, i):
        return {"i": i, "delta": self.delta(i), "k": self.k(i), "ell": self.ell(i)}

    def to_dict(self):
        return {"overrides": self.overrides or None, "method": self.method}

    @classmethod
    def from_dict(cls, d):
        return cls(overrides = (d or {}).get("overrides"), method = (d or {}).get("method", "series"))

    @classmethod
    def from_string(cls, text):
        """Parse overrides written as `k=2,ell=8`."""
        overrides = dict()
        for part in filter(None, (x.strip() for x in text.split(","))):
            key, _, value = part.partition("=")
            try:
                overrides[key.strip()] = int(value)
            except ValueError:
                raise ValueError(f"Cannot read override `{part}`, expected `name=integer`.") from None
        table = cls(overrides = overrides)
        log.warning(f"--> Using test parameters `{text}`, results are not conforming.")
        return table

def delta(i):
    """`delta_i` as an exact rational."""
    if not isinstance(i, int) or i < 1:
        raise ValueError(f"Parameter index must be a positive integer, got `{i}`.")
    return Fraction(1, 2**(2 * i - 2) * math.factorial(i + 1)**2)

PARAMS = ParamTable()

def k(i):
    return PARAMS.k(i)

def ell(i):
    return PARAMS.ell(i)
