"""Randomization tests, invariance groups and the randomization hypothesis.

Structured inputs and outputs are plain dicts using the same JSON schemas as
the ``randinf`` command-line tool.
"""

import json

from . import _randinf
from ._randinf import RandinfError, ks_two_sample

__all__ = [
    "RandinfError",
    "check_null",
    "classify",
    "construct_density",
    "group_average_phi",
    "group_order",
    "invariance_check",
    "ks_two_sample",
    "randomization_test",
    "rejection_rate",
]

_DEFAULT_CAP = 1_000_000


def _group(group, n, seed=0, draws=1000):
    if isinstance(group, dict):
        return json.dumps(group)
    if group == "permutation":
        mode = "full" if n <= 9 else "sampled"
        return json.dumps({"kind": "permutation", "n": n, "mode": mode, "draws": draws, "seed": seed})
    if group == "haar":
        return json.dumps({"kind": "haar", "n": n, "draws": draws, "seed": seed})
    return json.dumps({"kind": group, "n": n})


def _rows(a):
    return a.tolist() if hasattr(a, "tolist") else a


def randomization_test(sample, group="sign_change", statistic="abs_mean", level=0.05, seed=0, draws=1000,
                       cap=_DEFAULT_CAP):
    sample = [float(v) for v in sample]
    g = _group(group, len(sample), seed, draws)
    return json.loads(_randinf.randomization_test(sample, g, statistic, level, cap))


def group_average_phi(sample, group="sign_change", statistic="abs_mean", levels=(0.05,)):
    sample = [float(v) for v in sample]
    return _randinf.group_average_phi(sample, _group(group, len(sample)), statistic, list(levels))


def group_order(group, cap=_DEFAULT_CAP):
    return _randinf.group_order(json.dumps(group), cap)


def check_null(spec, n=1, budget=100_000, seed=0):
    return json.loads(_randinf.check_null(json.dumps(spec), n, budget, seed))


def classify(matrices, zero_tol=1e-9):
    return json.loads(_randinf.classify(json.dumps([_rows(m) for m in matrices]), zero_tol))


def invariance_check(matrix, dgp="normal", reps=100_000, seed=0, family_level=1e-3):
    return json.loads(_randinf.invariance_check(json.dumps(_rows(matrix)), dgp, reps, seed, family_level))


def construct_density(base, target, support=None):
    lo, hi = (None, None) if support is None else (support["lo"], support["hi"])
    return json.loads(_randinf.construct_density(json.dumps(base), json.dumps(target), lo, hi))


def rejection_rate(dgp, group="sign_change", statistic="abs_mean", level=0.05, n=10, reps=10_000, seed=0):
    return json.loads(_randinf.rejection_rate(dgp, group, statistic, level, n, reps, seed))
