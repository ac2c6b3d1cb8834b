__all__ = [
    'certified',
    'discrepancy',
    'intervals',
    'tsequence',
    'parameters',
    'refine',
    'trace'
    ]
from . import certified, discrepancy, intervals, tsequence, parameters, refine, trace