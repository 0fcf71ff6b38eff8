"""Journal Impact Factor and Unique Citing Documents Impact Factor (Uniq-JIF)."""

from ._core import (
    Dataset,
    JournalMetrics,
    UniqJifError,
    __version__,
    brute_force_metrics,
    build_distribution,
    compute_dataset,
    compute_files,
    compute_text,
    flag_journals,
    format_number,
    generate,
    metrics_csv,
    percentile_of_drop,
    uniq_jif_generic,
)

__all__ = [
    "Dataset",
    "JournalMetrics",
    "UniqJifError",
    "__version__",
    "brute_force_metrics",
    "build_distribution",
    "compute_dataset",
    "compute_files",
    "compute_text",
    "flag_journals",
    "format_number",
    "generate",
    "metrics_csv",
    "percentile_of_drop",
    "uniq_jif_generic",
]
