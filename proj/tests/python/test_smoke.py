import json
import math
import os
import subprocess

import pytest

import trendcast


@pytest.fixture(scope="module")
def corpus_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus")
    trendcast.write_synthetic_corpus(str(path), n_topics=20, seed=7)
    return str(path)


@pytest.fixture(scope="module")
def model_dir(corpus_dir, tmp_path_factory):
    path = tmp_path_factory.mktemp("models")
    code, out, err = trendcast.run_cli(
        ["train", "--corpus", corpus_dir, "--all-horizons", "--rounds", "10", "--out", str(path)]
    )
    assert code == 0, err
    return str(path)


def test_popularity_and_ids():
    assert trendcast.popularity(5, 100000) == pytest.approx(5.0)
    assert trendcast.canonical_topic_id("  Gene   Editing ") == "gene editing"


def test_lifecycle_years():
    series = {y: 1 for y in range(1975, 2000)}
    assert trendcast.first_occurrence_year(series) == 1975
    assert trendcast.first_valid_year(series) == 1979
    assert trendcast.training_start_year(series) == 1983


def test_corpus_and_features(corpus_dir):
    corpus = trendcast.load_corpus(corpus_dir)
    assert len(corpus) == 20
    topic = corpus.topic_ids()[0]
    assert all(v >= 0 for v in corpus.popularity(topic).values())
    table = trendcast.build_features(corpus, horizon=2)
    assert table["names"][0] == "pop_lag0"
    assert len(table["values"]) == len(table["topic"]) == len(table["target_pop"])


def test_metrics_and_correlation():
    m = trendcast.regression_metrics([1.0, 2.0, 3.0], [1.0, 2.0, 4.0])
    assert m["mae"] == pytest.approx(1 / 3)
    assert m["rmse"] == pytest.approx(math.sqrt(1 / 3))
    a = {y: float(y % 7) for y in range(1980, 2010)}
    assert trendcast.pearson_lagged(a, a, 0) == pytest.approx(1.0)


def test_evaluate(corpus_dir):
    corpus = trendcast.load_corpus(corpus_dir)
    result = trendcast.evaluate(corpus, model="baseline", n_splits=5)
    assert result["model"] == "baseline"
    assert len(result["folds"]) == 5
    assert result["r2"] is not None


def test_errors_map_to_python_exceptions(tmp_path, corpus_dir):
    with pytest.raises(OSError):
        trendcast.load_corpus(str(tmp_path / "absent"))
    with pytest.raises(ValueError):
        trendcast.build_features(trendcast.load_corpus(corpus_dir), horizon=7)


def test_forecast_matches_cli(corpus_dir, model_dir):
    forecaster = trendcast.Forecaster(corpus_dir, model_dir)
    assert forecaster.max_horizon == 6
    result = trendcast.forecast(forecaster, ["topic 001", "missing"], max_horizon=3)
    assert result["results"][1]["error"] == "unknown_topic"
    horizons = result["results"][0]["forecast"]["horizons"]
    assert [h["horizon"] for h in horizons] == [1, 2, 3]
    code, out, _ = trendcast.run_cli(
        ["predict", "--corpus", corpus_dir, "--models", model_dir, "--topic", "topic 001,missing", "--max-horizon", "3"]
    )
    assert code == 0
    assert json.loads(out) == result


def test_cli_binary_exit_codes(corpus_dir):
    cli = os.environ.get("TRENDCAST_CLI")
    if not cli:
        pytest.skip("TRENDCAST_CLI not set")
    bad = subprocess.run([cli, "train", "--horizon", "7", "--corpus", corpus_dir], capture_output=True, text=True)
    assert bad.returncode == 1
    assert json.loads(bad.stderr)["message"] == "horizon must be in [1,6]"
    missing = subprocess.run([cli, "featurize", "--corpus", "/nonexistent"], capture_output=True, text=True)
    assert missing.returncode == 2
