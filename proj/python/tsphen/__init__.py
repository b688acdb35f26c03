"""Time-series phenotyping: mass feature extraction from labeled series,
permutation-based ranking of group differences, and linear classification.

The heavy lifting happens in the compiled extension; this package is a thin
re-export so `import tsphen` works both from an installed wheel and from a
source checkout with the extension on the path.
"""

try:
    from ._tsphen import (
        TsphenError,
        __version__,
        analyze,
        balanced_accuracy,
        bh_fdr,
        compute,
        extract,
        feature_ids,
        ingest_check,
        permutation_test,
        report,
    )
except ImportError:  # in-tree test runs put the bare extension on sys.path
    from _tsphen import (
        TsphenError,
        __version__,
        analyze,
        balanced_accuracy,
        bh_fdr,
        compute,
        extract,
        feature_ids,
        ingest_check,
        permutation_test,
        report,
    )

__all__ = [
    "TsphenError",
    "__version__",
    "analyze",
    "balanced_accuracy",
    "bh_fdr",
    "compute",
    "extract",
    "feature_ids",
    "ingest_check",
    "permutation_test",
    "report",
]
