"""Evaluation harness: rank correlation against human ratings, ablation
grids, per-model leaderboards and per-category breakdowns.

Ties get average ranks; mean ratings on a 5-point scale tie constantly, so
the convention has to be fixed and this is the standard one.  All tables are
sorted by explicit keys and floats print at 3 decimals so outputs are
byte-deterministic.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import CorrelationError
from .types import CATEGORIES, HumanRatingRecord, ScoreReport

DIMENSIONS = ("ACS", "MSS")

# (report field, human dimension) pairs emitted by default and under --ablation.
DEFAULT_PAIRS = (("q_anat", "ACS"), ("q_mot", "MSS"))
ABLATION_PAIRS = tuple(
    (field, dim)
    for dim in DIMENSIONS
    for field in ("s_prior", "s_anat_norm", "s_mot", "q_anat" if dim == "ACS" else "q_mot")
)


def average_ranks(values) -> np.ndarray:
    """1-based ranks, ties averaged."""
    v = np.asarray(values, dtype=np.float64)
    order = np.argsort(v, kind="stable")
    ranks = np.empty(v.shape[0], dtype=np.float64)
    i = 0
    while i < v.shape[0]:
        j = i
        while j + 1 < v.shape[0] and v[order[j + 1]] == v[order[i]]:
            j += 1
        ranks[order[i : j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman_rho(x, y) -> float:
    """Rank correlation: Pearson correlation of the average-rank vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise CorrelationError(f"need two equal-length vectors, got {x.shape} and {y.shape}")
    n = x.shape[0]
    if n < 2:
        raise CorrelationError(f"need at least 2 samples, got {n}")
    if (x == x[0]).all() or (y == y[0]).all():
        raise CorrelationError("correlation undefined for a constant vector")
    rx = average_ranks(x)
    ry = average_ranks(y)
    if np.array_equal(rx, ry):
        return 1.0
    if np.array_equal(rx, (n + 1.0) - ry):
        return -1.0
    cx = rx - rx.mean()
    cy = ry - ry.mean()
    rho = float((cx @ cy) / np.sqrt((cx @ cx) * (cy @ cy)))
    return min(max(rho, -1.0), 1.0)


@dataclass(frozen=True)
class CorrelationResult:
    metric_name: str
    dimension: str
    rho: float
    n: int


def correlate(
    reports,
    ratings,
    ablation: bool = False,
    allow_missing: bool = False,
    pairs=None,
) -> list[CorrelationResult]:
    """Join reports and ratings on video_id, then correlate score columns
    against the matching human dimension.

    Raises on rated videos without a report unless ``allow_missing``, in
    which case they are dropped from every pair.
    """
    by_id = {r.video_id: r for r in reports}
    missing = sorted({r.video_id for r in ratings if r.video_id not in by_id})
    if missing and not allow_missing:
        shown = ", ".join(missing[:10])
        more = "" if len(missing) <= 10 else f" (+{len(missing) - 10} more)"
        raise CorrelationError(f"{len(missing)} rated videos have no report: {shown}{more}")
    joined = [(by_id[r.video_id], r) for r in ratings if r.video_id in by_id]
    if len(joined) < 2:
        raise CorrelationError(f"need at least 2 joined videos, got {len(joined)}")

    if pairs is None:
        pairs = ABLATION_PAIRS if ablation else DEFAULT_PAIRS
    results = []
    for field, dim in pairs:
        scores = [getattr(rep, field) for rep, _ in joined]
        humans = [rat.acs if dim == "ACS" else rat.mss for _, rat in joined]
        results.append(
            CorrelationResult(
                metric_name=field,
                dimension=dim,
                rho=spearman_rho(scores, humans),
                n=len(joined),
            )
        )
    results.sort(key=lambda r: (r.dimension, r.metric_name))
    return results


@dataclass(frozen=True)
class PerModelCorrelation:
    model_id: str
    metric_name: str
    dimension: str
    rho: float | None  # None when undefined (constant scores within the model)
    n: int


def correlate_per_model(
    reports, ratings, ablation: bool = False, allow_missing: bool = False
) -> list[PerModelCorrelation]:
    """Extension beyond the pooled protocol: one correlation grid per model.

    Within a single model ties are common (clamped scores especially), so an
    undefined correlation is reported as an empty rho instead of aborting.
    """
    by_id = {r.video_id: r for r in reports}
    groups: dict[str, list[HumanRatingRecord]] = {}
    for rat in ratings:
        groups.setdefault(rat.model_id, []).append(rat)
    missing = sorted({r.video_id for r in ratings if r.video_id not in by_id})
    if missing and not allow_missing:
        raise CorrelationError(f"{len(missing)} rated videos have no report: {', '.join(missing[:10])}")

    pairs = ABLATION_PAIRS if ablation else DEFAULT_PAIRS
    rows = []
    for model in sorted(groups):
        joined = [(by_id[r.video_id], r) for r in groups[model] if r.video_id in by_id]
        for field, dim in pairs:
            scores = [getattr(rep, field) for rep, _ in joined]
            humans = [rat.acs if dim == "ACS" else rat.mss for _, rat in joined]
            try:
                rho = spearman_rho(scores, humans)
            except CorrelationError:
                rho = None
            rows.append(
                PerModelCorrelation(
                    model_id=model, metric_name=field, dimension=dim, rho=rho, n=len(joined)
                )
            )
    rows.sort(key=lambda r: (r.model_id, r.dimension, r.metric_name))
    return rows


@dataclass(frozen=True)
class LeaderboardRow:
    model_id: str
    q_anat: float
    q_mot: float
    n: int


def _model_lookup(ratings) -> dict[str, HumanRatingRecord]:
    return {r.video_id: r for r in ratings}


def _group_mean(reports, field) -> float:
    # summed in video_id order so the result is invariant to input order
    ordered = sorted(reports, key=lambda r: r.video_id)
    return float(np.mean([getattr(r, field) for r in ordered]))


def leaderboard(reports, ratings) -> list[LeaderboardRow]:
    """Per-model mean quality scores, best mean q_mot first.

    Reports carry no model identity; the ratings/metadata CSV supplies the
    video -> model mapping.  Reports without a mapping are skipped.
    """
    meta = _model_lookup(ratings)
    grouped: dict[str, list[ScoreReport]] = {}
    for rep in reports:
        rec = meta.get(rep.video_id)
        if rec is None:
            continue
        grouped.setdefault(rec.model_id, []).append(rep)
    rows = [
        LeaderboardRow(
            model_id=model,
            q_anat=_group_mean(reps, "q_anat"),
            q_mot=_group_mean(reps, "q_mot"),
            n=len(reps),
        )
        for model, reps in grouped.items()
    ]
    rows.sort(key=lambda r: (-r.q_mot, r.model_id))
    return rows


@dataclass(frozen=True)
class CategoryRow:
    category: str
    model_id: str
    q_anat: float
    q_mot: float
    n: int


def category_breakdown(reports, ratings) -> list[CategoryRow]:
    """Per-category per-model means, in canonical category order."""
    meta = _model_lookup(ratings)
    grouped: dict[tuple[str, str], list[ScoreReport]] = {}
    for rep in reports:
        rec = meta.get(rep.video_id)
        if rec is None:
            continue
        grouped.setdefault((rec.category, rec.model_id), []).append(rep)
    rows = [
        CategoryRow(
            category=cat,
            model_id=model,
            q_anat=_group_mean(reps, "q_anat"),
            q_mot=_group_mean(reps, "q_mot"),
            n=len(reps),
        )
        for (cat, model), reps in grouped.items()
    ]
    rows.sort(key=lambda r: (CATEGORIES.index(r.category), r.model_id))
    return rows


# --------------------------------------------------------------------------
# rendering


def correlations_csv(results) -> str:
    lines = ["metric,dimension,rho,n"]
    lines += [f"{r.metric_name},{r.dimension},{r.rho:.3f},{r.n}" for r in results]
    return "\n".join(lines) + "\n"


def per_model_correlations_csv(rows) -> str:
    lines = ["model_id,metric,dimension,rho,n"]
    lines += [
        f"{r.model_id},{r.metric_name},{r.dimension},"
        f"{'' if r.rho is None else format(r.rho, '.3f')},{r.n}"
        for r in rows
    ]
    return "\n".join(lines) + "\n"


def leaderboard_csv(rows) -> str:
    lines = ["model_id,q_anat,q_mot,n"]
    lines += [f"{r.model_id},{r.q_anat:.3f},{r.q_mot:.3f},{r.n}" for r in rows]
    return "\n".join(lines) + "\n"


def leaderboard_table(rows) -> str:
    width = max([len("model")] + [len(r.model_id) for r in rows])
    header = f"{'model'.ljust(width)}  q_anat  q_mot"
    body = [f"{r.model_id.ljust(width)}  {r.q_anat:6.3f}  {r.q_mot:5.3f}" for r in rows]
    return "\n".join([header] + body) + "\n"


def categories_csv(rows) -> str:
    lines = ["category,model_id,q_anat,q_mot,n"]
    lines += [f"{r.category},{r.model_id},{r.q_anat:.3f},{r.q_mot:.3f},{r.n}" for r in rows]
    return "\n".join(lines) + "\n"


def categories_plotdata(rows) -> str:
    """Plot-ready JSON: one series per model over the canonical categories."""
    models = sorted({r.model_id for r in rows})
    cell = {(r.category, r.model_id): r for r in rows}
    series = []
    for model in models:
        entry = {"model_id": model, "q_anat": [], "q_mot": []}
        for cat in CATEGORIES:
            row = cell.get((cat, model))
            entry["q_anat"].append(None if row is None else round(row.q_anat, 3))
            entry["q_mot"].append(None if row is None else round(row.q_mot, 3))
        series.append(entry)
    payload = {"categories": list(CATEGORIES), "series": series}
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"
