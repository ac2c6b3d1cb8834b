__all__ = [
    'main',
    'general',
    'construction',
    'reduction',
    'pipeline'
    ]
__version__ = '0.1.0'
from . import general, construction, reduction, pipeline, main
from .main import RunConfig
from .pipeline import digits, digit_streams, run_rounds, lambda_ref_advance, PipelineState
