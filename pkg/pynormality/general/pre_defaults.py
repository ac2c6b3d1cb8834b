"""Module containing functions that generate some default settings for `pynormality.pipeline`,
`pynormality.construction.refine` and the command line tool.
"""

def run_defaults():
    """Return a dictionary with default run settings.

    Returns
    -------
    dict
        Default settings.
    """

    d = {

        # recursive step
        'scan': "pruned",           # or "linear"
        'n_jobs': 0,                # `joblib` workers for the linear scan, 0 is sequential
        'chunk_size': 256,          # candidates per parallel batch
        'guard_bits': 64,           # extra fixed-point bits in the pruned search

        # verification
        'stride': 16,               # sampling stride for the prefix discrepancy check
        'full_range_limit': 10_000, # ranges up to this size are checked at stride 1

        # pipeline
        'max_rounds': None,         # no resource limit

        # analyze
        'analyze_stride': 1,
        'analyze_ell': 1,

        # params
        'max_index': 8,

    }

    return d
