"""Sign prediction for two-way relations in multilayer networks."""

import json

from ._twoway import (
    FORMAT_VERSION,
    Network,
    TwowayError,
    __version__,
    cluster,
    embeddedness_histogram,
    feature_columns,
    featurize,
    kendall_tau_b,
    load_dataset,
    map_equation,
)
from . import _twoway

__all__ = [
    "FORMAT_VERSION",
    "Network",
    "TwowayError",
    "__version__",
    "cluster",
    "correlations",
    "embeddedness_histogram",
    "evaluate",
    "feature_columns",
    "featurize",
    "generate",
    "kendall_tau_b",
    "load_dataset",
    "map_equation",
]


def generate(preset="desk", config=None, seed=None):
    """Return (network, ground_truth, config) for a preset or a config dict."""
    text = json.dumps(config) if config is not None else None
    net, truth, cfg = _twoway.generate(preset, text, seed)
    return net, json.loads(truth), json.loads(cfg)


def evaluate(network, predictors="cbmp,nbmp,nbsp,mf,random", k=10, seed=0, threads=1,
             class_weighted=True, partition_r=(), partition_m=()):
    """Cross-validated reports, one dict per predictor."""
    if not isinstance(predictors, str):
        predictors = ",".join(predictors)
    text = _twoway.evaluate(network, predictors, k, seed, threads, class_weighted,
                            list(partition_r), list(partition_m))
    return json.loads(text)


def correlations(network):
    return json.loads(_twoway.correlations(network))
