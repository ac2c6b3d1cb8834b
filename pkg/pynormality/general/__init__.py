__all__ = [
    'processing_functions',
    'pre_defaults',
    'errors',
    'performance',
    'logger',
    'log_indenter'
    ]
from . import processing_functions, pre_defaults, errors, performance, logger, log_indenter