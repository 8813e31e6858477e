"""Topic popularity forecasting: corpus ingestion, features, models and evaluation."""

import json

from ._trendcast import (
    Corpus,
    Forecaster,
    IoError,
    ValidationError,
    build_features,
    canonical_topic_id,
    evaluate,
    first_occurrence_year,
    first_valid_year,
    load_corpus,
    pearson_lagged,
    popularity,
    regression_metrics,
    run_cli,
    training_start_year,
    write_synthetic_corpus,
)

__version__ = "0.1.0"


def forecast(forecaster, topics, max_horizon=0):
    """Forecast response for the given topics, parsed from the same JSON the service returns."""
    return json.loads(forecaster.forecast_json(list(topics), max_horizon))


__all__ = [
    "Corpus",
    "Forecaster",
    "IoError",
    "ValidationError",
    "build_features",
    "canonical_topic_id",
    "evaluate",
    "first_occurrence_year",
    "first_valid_year",
    "forecast",
    "load_corpus",
    "pearson_lagged",
    "popularity",
    "regression_metrics",
    "run_cli",
    "training_start_year",
    "write_synthetic_corpus",
]
