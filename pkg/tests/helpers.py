"""Independent oracles used across the suite.

Everything here is written from the definitions with plain loops, on purpose:
these functions must not share code paths with the implementations they check.
"""

import math

import numpy as np


def reflect_index(i, n):
    """Edge-inclusive reflection of index i into [0, n)."""
    if n == 1:
        return 0
    period = 2 * n
    j = i % period
    if j < 0:
        j += period
    if j >= n:
        j = period - 1 - j
    return j


def direct_smooth(signal, kernel):
    """O(T*K*D) convolution with edge-inclusive reflect padding."""
    signal = np.asarray(signal, dtype=float)
    kernel = np.asarray(kernel, dtype=float)
    T, D = signal.shape
    half = (len(kernel) - 1) // 2
    out = np.zeros((T, D))
    for t in range(T):
        for k, w in enumerate(kernel):
            src = reflect_index(t - half + k, T)
            for d in range(D):
                out[t, d] += w * signal[src, d]
    return out


def rank_average(values):
    """Average ranks from the definition: sort, walk tie groups."""
    indexed = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(indexed):
        j = i
        while j + 1 < len(indexed) and values[indexed[j + 1]] == values[indexed[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[indexed[k]] = avg
        i = j + 1
    return ranks


def spearman_from_definition(x, y):
    """Pearson correlation of rank vectors, plain-Python covariance sums."""
    rx = rank_average(list(x))
    ry = rank_average(list(y))
    n = len(rx)
    mx = sum(rx) / n
    my = sum(ry) / n
    num = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    dx = math.sqrt(sum((a - mx) ** 2 for a in rx))
    dy = math.sqrt(sum((b - my) ** 2 for b in ry))
    return num / (dx * dy)


def anat_frame_oracle(frame_persons, parts, tau):
    """Frame score from the rules, loops only.

    frame_persons: list of length-133 confidence lists;
    parts: (name, start, stop) triples.
    """
    person_scores = []
    for conf in frame_persons:
        visible = []
        for _, start, stop in parts:
            span = conf[start:stop]
            if sum(span) / len(span) > tau:
                visible.append((start, stop))
        if visible:
            pool = [c for s, e in visible for c in conf[s:e]]
            person_scores.append(sum(pool) / len(pool))
    if not person_scores:
        return 0.0
    return sum(person_scores) / len(person_scores)


def logistic_highprec(diff):
    """Logistic via mpmath at 60 digits; reference for the prior score."""
    import mpmath

    with mpmath.workdps(60):
        return float(1 / (1 + mpmath.e ** (-mpmath.mpf(diff))))
