"""Time averages of observables along a sequence, with and without a
square-free style mask, and weighted (linear disjointness) averages."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .dynsys import check_compatible
from .errors import SequenceError
from .reduce import checkpoint_sums


@dataclass
class AverageSeries:
    checkpoints: list
    values: np.ndarray
    flow_label: str = ""
    observable_label: str = ""
    sequence_label: str = ""
    start_label: str = ""
    # value divided by the mask density at N; only for masked averages
    conditional: Optional[np.ndarray] = field(default=None, repr=False)

    @property
    def final(self):
        return float(self.values[-1])


@dataclass
class ConvergenceReport:
    target: float
    residuals: list  # (N, |S_N - target|)
    final_residual: float
    monotone_improvement: bool


def _labels(flow, obs, x, seq_label):
    return dict(
        flow_label=getattr(flow, "label", flow.kind),
        observable_label=obs.label,
        sequence_label=seq_label,
        start_label=str(x),
    )


def _prepare(flow, obs, a_values, checkpoints):
    check_compatible(flow, obs)
    if not checkpoints:
        raise ValueError("need at least one checkpoint")
    if len(a_values) < checkpoints[-1]:
        raise SequenceError(f"{len(a_values)} terms available, checkpoint {checkpoints[-1]}")


def time_average_series(flow, obs, x, a_values, checkpoints, label="", threads=1):
    """S_N = (1/N) sum_{n<=N} phi(f^{a_n} x) at every checkpoint."""
    _prepare(flow, obs, a_values, checkpoints)

    def terms(s, e):
        return obs.evaluate(flow, flow.orbit(x, a_values[s:e]))

    sums = checkpoint_sums(terms, checkpoints, threads)
    vals = np.array([s / n for s, n in zip(sums, checkpoints)])
    return AverageSeries(list(checkpoints), vals, **_labels(flow, obs, x, label))


def masked_time_average_series(flow, obs, x, a_values, mask, checkpoints, label="", threads=1):
    """(1/N) sum_{n<=N, mask[n]} phi(f^{a_n} x), normalised by N."""
    _prepare(flow, obs, a_values, checkpoints)
    if mask.max_n < checkpoints[-1]:
        raise SequenceError("mask does not cover the checkpoint range")

    def terms(s, e):
        return obs.evaluate(flow, flow.orbit(x, a_values[s:e])) * mask.bits[s + 1 : e + 1]

    sums = checkpoint_sums(terms, checkpoints, threads)
    vals = np.array([s / n for s, n in zip(sums, checkpoints)])
    hits = np.array(mask.counts_at(checkpoints), dtype=np.float64)
    with np.errstate(invalid="ignore", divide="ignore"):
        cond = np.where(hits > 0, np.array(sums) / np.maximum(hits, 1.0), np.nan)
    return AverageSeries(list(checkpoints), vals, conditional=cond,
                         **_labels(flow, obs, x, label))


def convergence_report(series, target):
    if len(series.checkpoints) == 0:
        raise ValueError("empty series")
    res = [(n, abs(float(v) - target)) for n, v in zip(series.checkpoints, series.values)]
    return ConvergenceReport(target, res, res[-1][1], res[-1][1] < res[0][1])


def linear_disjointness_series(c_values, flow, obs, x, checkpoints, label="", threads=1):
    """(1/N) sum_{n<=N} c_n phi(f^n x); ``c_values[k]`` is c_{k+1}."""
    _prepare(flow, obs, c_values, checkpoints)
    c = np.asarray(c_values)

    def terms(s, e):
        n = np.arange(s + 1, e + 1, dtype=np.uint64)
        return c[s:e] * obs.evaluate(flow, flow.orbit(x, n))

    sums = checkpoint_sums(terms, checkpoints, threads)
    vals = np.array([s / n for s, n in zip(sums, checkpoints)])
    return AverageSeries(list(checkpoints), vals, **_labels(flow, obs, x, label))
