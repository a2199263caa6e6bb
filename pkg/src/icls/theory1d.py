"""Univariate no-intercept model: where the non-degradation argument is exact.

With a single feature, no intercept, and the feature distribution treated as
fully known, every coefficient reachable by some fractional labeling of the
data lies in a closed interval, and the population-optimal coefficient is
inside it. Clipping the supervised estimate to that interval therefore never
increases the population risk. This module represents the "known feature
distribution" by a large finite sample, which turns every integral into a
finite sum, and verifies the risk inequality trial by trial.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .linalg import as_vector

DEFAULT_POPULATION_SIZE = 100_000


class Population1D:
    """Feature values and 0/1 labels standing in for a joint distribution."""

    def __init__(self, xs, ys):
        xs = as_vector(xs, "xs")
        ys = as_vector(ys, "ys")
        if xs.shape[0] != ys.shape[0]:
            raise InputError("xs and ys must have equal length")
        if xs.shape[0] == 0:
            raise InputError("population must be non-empty")
        if not np.all((ys == 0.0) | (ys == 1.0)):
            raise InputError("ys must contain only 0/1 labels")
        if not np.any(xs != 0.0):
            raise InputError("population needs a nonzero second moment")
        xs = xs.copy()
        ys = ys.copy()
        xs.flags.writeable = False
        ys.flags.writeable = False
        self.xs = xs
        self.ys = ys
        self.n = int(xs.shape[0])


@dataclass(frozen=True)
class BetaInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (np.isfinite(self.lo) and np.isfinite(self.hi)):
            raise InputError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise InputError(f"empty interval [{self.lo}, {self.hi}]")

    def contains(self, beta: float) -> bool:
        return self.lo <= beta <= self.hi

    def clip(self, beta: float) -> float:
        return min(max(beta, self.lo), self.hi)


@dataclass(frozen=True)
class NonDegradationReport:
    trials: int
    violations: int
    redraws: int
    mean_improvement: float
    max_improvement: float

    def to_json(self) -> str:
        return json.dumps(
            {
                "trials": self.trials,
                "violations": self.violations,
                "mean_improvement": self.mean_improvement,
                "max_improvement": self.max_improvement,
            }
        )


def supervised_beta_1d(xs_labeled, ys_labeled) -> float:
    """Least squares slope through the origin: sum(x*y) / sum(x^2)."""
    xs = as_vector(xs_labeled, "xs_labeled")
    ys = as_vector(ys_labeled, "ys_labeled")
    if xs.shape[0] != ys.shape[0]:
        raise InputError("xs and ys must have equal length")
    sxx = float(xs @ xs)
    if sxx == 0.0:
        raise InputError("all feature values are zero; slope is undefined")
    return float(xs @ ys) / sxx


def constrained_interval(xs_population) -> BetaInterval:
    """Range of slopes reachable when every point may take any label in [0,1].

    The slope sum(x*q) / sum(x^2) over per-point labels q in [0,1] is
    extremal when q is 1 exactly on one sign of x and 0 on the other.
    """
    xs = as_vector(xs_population, "xs_population")
    sxx = float(xs @ xs)
    if sxx == 0.0:
        raise InputError("all feature values are zero; interval is undefined")
    lo = float(np.sum(xs[xs < 0.0])) / sxx
    hi = float(np.sum(xs[xs > 0.0])) / sxx
    return BetaInterval(lo=lo, hi=hi)


def risk_1d(beta: float, population: Population1D) -> float:
    """Mean squared loss of the slope over the population."""
    resid = population.xs * beta - population.ys
    return float(resid @ resid) / population.n


def icls_1d(beta_sup: float, interval: BetaInterval) -> float:
    """Clip the supervised slope to the reachable interval."""
    return interval.clip(beta_sup)


def two_gaussian_population(
    size: int = DEFAULT_POPULATION_SIZE, seed: int = 0
) -> Population1D:
    """Equal-prior mixture: class 0 at N(-1, 1), class 1 at N(+1, 1)."""
    if size < 2:
        raise InputError("population size must be at least 2")
    rng = np.random.default_rng(seed)
    ys = rng.integers(0, 2, size=size).astype(np.float64)
    xs = rng.normal(size=size) + (2.0 * ys - 1.0)
    return Population1D(xs=xs, ys=ys)


def verify_non_degradation(
    population: Population1D,
    labeled_draw_size: int,
    trials: int,
    seed: int,
) -> NonDegradationReport:
    """Draw labeled subsets and check that clipping never raises the risk.

    Each trial draws ``labeled_draw_size`` points without replacement,
    computes the supervised slope, clips it to the population's reachable
    interval, and compares population risks. Draws whose feature values are
    all zero are redrawn (and counted). Per-trial seeds are spawned from the
    master seed, so trial order does not matter.
    """
    if trials < 1:
        raise InputError("trials must be at least 1")
    if not (1 <= labeled_draw_size <= population.n):
        raise InputError("labeled_draw_size must be in [1, population size]")

    interval = constrained_interval(population.xs)
    children = np.random.SeedSequence(seed).spawn(trials)

    violations = 0
    redraws = 0
    improvements = np.zeros(trials, dtype=np.float64)
    for i in range(trials):
        rng = np.random.default_rng(children[i])
        while True:
            idx = rng.choice(population.n, size=labeled_draw_size, replace=False)
            xs_l = population.xs[idx]
            if np.any(xs_l != 0.0):
                break
            redraws += 1
        beta_sup = supervised_beta_1d(xs_l, population.ys[idx])
        beta_semi = icls_1d(beta_sup, interval)
        if beta_semi == beta_sup:
            continue  # identical estimates, identical risk
        risk_sup = risk_1d(beta_sup, population)
        risk_semi = risk_1d(beta_semi, population)
        if risk_semi > risk_sup + 1e-12:
            violations += 1
        improvements[i] = risk_sup - risk_semi

    return NonDegradationReport(
        trials=trials,
        violations=violations,
        redraws=redraws,
        mean_improvement=float(np.mean(improvements)),
        max_improvement=float(np.max(improvements)),
    )
