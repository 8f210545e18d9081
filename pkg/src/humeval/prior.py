"""Perceptual visual prior from a stored yes/no logit pair."""

from __future__ import annotations

import math

import numpy as np

from .types import VlmPriorRecord

_ONE_BELOW_ONE = float(np.nextafter(1.0, 0.0))
_ONE_ABOVE_ZERO = float(np.nextafter(0.0, 1.0))


def prior_score(record: VlmPriorRecord) -> float:
    """Softmax probability of the positive logit.

    Evaluated as the logistic of the logit difference, which is shift
    invariant and cannot overflow; the naive exp ratio silently assumes
    both.  The result is nudged off exact 0.0/1.0 (at most one ulp) so it
    always lies in the open interval.
    """
    diff = record.positive_logit - record.negative_logit
    if diff >= 0:
        score = 1.0 / (1.0 + math.exp(-diff))
    else:
        e = math.exp(diff)
        score = e / (1.0 + e)
    return min(max(score, _ONE_ABOVE_ZERO), _ONE_BELOW_ONE)
