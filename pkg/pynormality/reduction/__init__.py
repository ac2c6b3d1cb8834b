__all__ = [
    'predicate',
    'first_reduction'
    ]
from . import predicate, first_reduction