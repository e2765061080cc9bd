"""Sampling-statistics helpers shared by the statistical tests."""

import numpy as np


def mean_se(x, axis=0):
    x = np.asarray(x)
    return x.std(axis=axis, ddof=1) / np.sqrt(x.shape[axis])


def variance_se(x, axis=0):
    """Large-sample standard error of the sample variance, ``sqrt((m4 - s^4)/n)``."""
    x = np.asarray(x)
    d = x - x.mean(axis=axis, keepdims=True)
    m2 = (d**2).mean(axis=axis)
    m4 = (d**4).mean(axis=axis)
    return np.sqrt((m4 - m2**2) / x.shape[axis])


# (criterion, passed, detail) tuples, printed at the end of the session
ACCEPTANCE_LOG = []


def record(criterion, passed, detail=""):
    ACCEPTANCE_LOG.append((criterion, bool(passed), detail))
    return passed
