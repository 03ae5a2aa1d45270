"""Strict and relaxed cost functions."""

from __future__ import annotations

from dataclasses import dataclass

from .constraints import Evaluation
from .model import Objectives, Penalties, Weights


@dataclass(frozen=True)
class CostBreakdown:
    objective_term: float
    penalty_term: float

    @property
    def total(self) -> float:
        return self.objective_term + self.penalty_term


def strict_cost(obj: Objectives, w: Weights) -> float:
    return float(w.w_mile * obj.total_miles + w.w_good * obj.good_days + w.w_bad * obj.bad_days)


def penalty_term(counts, p: Penalties) -> float:
    y1, y2, y3, y4, y5 = counts
    return float(p.p_avail1 * y1 + p.p_avail2 * y2 + p.p_break * y3 + p.p_sep1 * y4 + p.p_sep2 * y5)


def relaxed_cost(ev: Evaluation, w: Weights, p: Penalties) -> CostBreakdown:
    """Objective term plus one penalty per typed violation."""
    return CostBreakdown(strict_cost(ev.objectives, w), penalty_term(ev.violations.counts, p))
