"""Keyword filtering, topic models and topic-quality metrics for short feedback comments."""

import os
from pathlib import Path

# Wheels carry the word lists next to the package; point the core at them
# unless the caller already chose a directory.
_bundled = Path(__file__).with_name("data")
if _bundled.is_dir() and not os.environ.get("FBTOPICS_DATA_DIR"):
    os.environ["FBTOPICS_DATA_DIR"] = str(_bundled)

from ._fbtopics import (  # noqa: E402
    ConfigError,
    Error,
    TopicModel,
    __version__,
    cv_coherence,
    data_dir,
    emit_table,
    filter_feedback,
    fit_gsdmm,
    fit_kbert,
    fit_lda,
    irbo_avg,
    kmeans,
    load_config,
    match_counts,
    npmi,
    preprocess,
    rbo,
    run,
)

__all__ = [
    "ConfigError",
    "Error",
    "TopicModel",
    "__version__",
    "cv_coherence",
    "data_dir",
    "emit_table",
    "filter_feedback",
    "fit_gsdmm",
    "fit_kbert",
    "fit_lda",
    "irbo_avg",
    "kmeans",
    "load_config",
    "match_counts",
    "npmi",
    "preprocess",
    "rbo",
    "run",
]
