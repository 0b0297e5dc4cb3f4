"""Fixed-interval simulation optimization.

Exhaustive search over cleaning intervals z: each candidate is scored by
the mean total cost over replicated Monte-Carlo episodes.  Replication r
always uses the same sub-seed regardless of z (common random numbers), so
the cost curve is smooth and bit-reproducible for a fixed base seed.

The evaluator is vectorized across replications but walks days in the same
order, with the same floating-point operations, as ``CleaningEnv.step``
under a fixed-interval policy, so the two routes agree to rounding.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from . import soiling as phys
from .environment import ScenarioConfig
from .rng import replication_entropy
from .weather import KMH_PER_MS, generate_weather, make_streams

__all__ = ["IntervalEvaluation", "evaluate_interval", "optimize",
           "precompute_weather", "calibrate_panel_area"]


@dataclass
class IntervalEvaluation:
    """Replicated-episode score of one cleaning interval."""

    z: int
    mean_total_cost: float
    costs: list                 # per-replication total cost, USD
    mean_cleanings: float
    mean_energy_loss_cost: float
    mean_cleaning_cost: float


def precompute_weather(config: ScenarioConfig, replications: int) -> dict:
    """Per-replication weather arrays, shaped (replications, n_days).

    Replication r uses the sub-seed (seed, replication-tag, r); identical
    across all intervals evaluated under the same config.
    """
    model = config.weather_model()
    arrays = None
    for r in range(replications):
        streams = make_streams(replication_entropy(config.seed, r))
        w = generate_weather(model, config.n_days, streams, config.start_month)
        if arrays is None:
            arrays = {var: np.empty((replications, config.n_days)) for var in w}
        for var, vals in w.items():
            arrays[var][r] = vals
    return arrays


def _day_arrays(config: ScenarioConfig, weather: dict) -> dict:
    """Interval-independent per-day quantities, shaped (replications, n_days).

    Daily calibrated deposition, the day's energy price factor
    tariff * area * GHI/1000, and the age factor are all independent of the
    cleaning schedule, so they are computed once per weather set.
    """
    sp = config.soiling
    n_days = weather["wind_speed"].shape[1]
    ws = weather["wind_speed"] / KMH_PER_MS
    d_cal = phys.calibrate(phys.daily_soiling(ws, weather["particulate_matter"]),
                           weather["relative_humidity"], sp.humidity_k)
    price = config.tariff * config.panel_area * (weather["irradiance"] / 1000.0)
    tau = phys.degradation_factor(np.arange(n_days) // 365, sp.annual_degradation)
    return {"d_cal": d_cal, "price": price, "tau": tau,
            # Energy loss is price * (tau*eff_max - eff); the first term
            # does not depend on the schedule.
            "clean_panel_loss": (price * (tau * sp.eff_max)).sum(axis=1)}


def _episode_costs(z: int, config: ScenarioConfig, weather: dict,
                   days: dict | None = None):
    """Fixed-interval episodes, vectorized over replications and days.

    Cleaning happens on mornings z, 2z, ... (days-since-clean reaches z),
    so each inter-cleaning segment starts from a fresh panel.  Within a
    segment the floored accumulation s_u = max(s_{u-1} + d_u, beta) has the
    closed form s_u = max(C_u, beta + C_u - min_{j<=u} C_j) with C the
    deposition prefix sum, which vectorizes across whole segments.
    """
    sp = config.soiling
    if days is None:
        days = _day_arrays(config, weather)
    n_reps, n_days = days["d_cal"].shape
    n_seg = -(-n_days // z)
    pad = n_seg * z - n_days

    d = np.pad(days["d_cal"], ((0, 0), (0, pad))).reshape(n_reps, n_seg, z)
    prefix = np.cumsum(d, axis=2)
    running_min = np.minimum.accumulate(prefix, axis=2)
    soil = np.maximum(prefix, sp.beta_residue + prefix - running_min)

    tau = np.pad(days["tau"], (0, pad)).reshape(1, n_seg, z)
    c3, c2, c1 = sp.cubic
    eff = np.maximum(tau * (c3 * soil ** 3 + c2 * soil ** 2 + c1 * soil + sp.eff_max), 0.0)
    price = np.pad(days["price"], ((0, 0), (0, pad))).reshape(n_reps, n_seg, z)
    energy_loss = days["clean_panel_loss"] - (price * eff).sum(axis=(1, 2))

    cleanings = n_seg - 1
    return energy_loss, cleanings * config.cleaning_cost, cleanings


def evaluate_interval(z: int, config: ScenarioConfig, replications: int = 30,
                      weather: dict | None = None,
                      days: dict | None = None) -> IntervalEvaluation:
    """Score cleaning interval ``z`` by ``replications`` common-seed episodes."""
    if z < 1:
        raise ValueError(f"cleaning interval must be >= 1, got {z}")
    if weather is None:
        weather = precompute_weather(config, replications)
    energy_loss, cleaning_cost, cleanings = _episode_costs(int(z), config, weather, days)
    totals = energy_loss + cleaning_cost
    return IntervalEvaluation(
        z=int(z),
        mean_total_cost=float(totals.mean()),
        costs=[float(c) for c in totals],
        mean_cleanings=float(cleanings),
        mean_energy_loss_cost=float(energy_loss.mean()),
        mean_cleaning_cost=float(cleaning_cost),
    )


def optimize(config: ScenarioConfig, z_min: int = 1, z_max: int = 120,
             replications: int = 30):
    """Exhaustive interval search; returns (z_star, full cost curve).

    Ties in mean total cost break toward the smaller interval.
    """
    if z_min > z_max:
        raise ValueError(f"z_min {z_min} > z_max {z_max}")
    weather = precompute_weather(config, replications)
    days = _day_arrays(config, weather)
    curve = [evaluate_interval(z, config, replications, weather=weather, days=days)
             for z in range(z_min, z_max + 1)]
    best = min(curve, key=lambda e: (e.mean_total_cost, e.z))
    return best.z, curve


def calibrate_panel_area(config: ScenarioConfig, target_cost: float,
                         z_min: int = 1, z_max: int = 120,
                         replications: int = 30) -> float:
    """Panel area for which the optimal mean total cost equals ``target_cost``.

    For fixed seeds the per-interval cost is linear in the area
    (area * energy-loss-at-unit-area + cleaning cost), so the optimum cost
    as a function of area is an increasing piecewise-linear lower envelope;
    it is inverted by bisection.
    """
    base = replace(config, panel_area=1.0)
    _, curve = optimize(base, z_min, z_max, replications)
    e = np.array([c.mean_energy_loss_cost for c in curve])
    c = np.array([c.mean_cleaning_cost for c in curve])

    def best_cost(area: float) -> float:
        return float(np.min(area * e + c))

    lo, hi = 1e-6, 1.0
    while best_cost(hi) < target_cost:
        hi *= 2.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if best_cost(mid) < target_cost:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)
