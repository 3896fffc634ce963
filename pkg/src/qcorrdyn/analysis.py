"""Time sweeps and event finders along the |ee> trajectory."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.optimize import bisect

from .core import Side
from .correlations import (
    CorrelationReport,
    SymmetricXState,
    concurrence_margin,
    discord_branches,
    full_report,
)
from .dynamics import (
    MAX_TAU,
    PopulationPair,
    ab_sum,
    analytic_state,
    dicke_state,
    populations_sym_antisym,
)
from .errors import NonPositiveData, ParamOutOfRange

ONSET_SCAN_STEP = 0.01
INTERVAL_SCAN_STEP = 0.005
# D2 - D1 below this is round-off, not a genuine D1 < D2 region
BRANCH_NOISE_FLOOR = 1e-13


@dataclass
class TimeSeries:
    gamma: float
    taus: np.ndarray
    coefficients: np.ndarray  # rows (a, b, c)
    reports: list[CorrelationReport]
    populations: list[PopulationPair]

    def __post_init__(self):
        if len(self.taus) > 1 and not np.all(np.diff(self.taus) > 0):
            raise ValueError("tau grid must be strictly increasing")

    def __len__(self) -> int:
        return len(self.taus)

    def column(self, name: str) -> np.ndarray:
        if name in ("a", "b", "c"):
            return self.coefficients[:, "abc".index(name)]
        if name in ("symmetric", "pop_sym"):
            return np.array([p.symmetric for p in self.populations])
        if name in ("antisymmetric", "pop_antisym"):
            return np.array([p.antisymmetric for p in self.populations])
        return np.array([getattr(r, name) for r in self.reports], dtype=float)


@dataclass(frozen=True)
class Interval:
    start: float
    end: float

    @property
    def is_point(self) -> bool:
        return self.start == self.end

    @property
    def width(self) -> float:
        return self.end - self.start


@dataclass(frozen=True)
class EventSet:
    gamma: float
    onset_tau: Optional[float]
    mid_discord_interval: Optional[Interval]
    degeneracy_tau: float
    decay_rate: Optional[float]


def _series(gamma: float, taus: np.ndarray, states: Sequence[SymmetricXState], side: Side) -> TimeSeries:
    return TimeSeries(
        gamma=gamma,
        taus=taus,
        coefficients=np.array([(s.a, s.b, s.c) for s in states], dtype=float).reshape(-1, 3),
        reports=[full_report(s, side) for s in states],
        populations=[populations_sym_antisym(s) for s in states],
    )


def _grid(tau_max: float, n_points: int) -> np.ndarray:
    if n_points < 2:
        raise ValueError("n_points must be at least 2")
    if not tau_max > 0:
        raise ValueError("tau_max must be positive")
    return np.linspace(0.0, tau_max, n_points)


def sweep(gamma: float, tau_max: float, n_points: int, side: Side = "B") -> TimeSeries:
    """Correlation report at each point of a uniform tau grid starting from |ee>."""
    if not 0.0 <= gamma <= 1.0:
        raise ParamOutOfRange(f"gamma must lie in [0, 1], got {gamma!r}")
    taus = _grid(tau_max, n_points)
    return _series(gamma, taus, [analytic_state(gamma, float(t)) for t in taus], side)


def dicke_sweep(tau_max: float, n_points: int, side: Side = "B") -> TimeSeries:
    taus = _grid(tau_max, n_points)
    return _series(1.0, taus, [dicke_state(float(t)) for t in taus], side)


def _check_gamma(gamma: float) -> None:
    if not 0.0 <= gamma <= 1.0:
        raise ParamOutOfRange(f"gamma must lie in [0, 1], got {gamma!r}")


def _first_crossing(
    f: Callable[[float], float], taus: np.ndarray, xtol: float
) -> Optional[float]:
    """Refine the first grid interval on which f goes from <= 0 to > 0."""
    prev_t, prev_v = float(taus[0]), f(float(taus[0]))
    for t in taus[1:]:
        t = float(t)
        v = f(t)
        if prev_v <= 0.0 < v:
            return bisect(f, prev_t, t, xtol=xtol)
        prev_t, prev_v = t, v
    return None


def onset_time(
    gamma: float, scan_step: float = ONSET_SCAN_STEP, tau_max: float = MAX_TAU, tol: float = 1e-10
) -> Optional[float]:
    """First time the concurrence becomes positive, or None if it never does.

    A positive margin lam1 - lam2 - lam3 - lam4 can only arise with |b - c| the
    dominant square-root eigenvalue and c + sqrt(a d) < 0, so the scan simply
    looks for the first grid point with a positive margin and bisects back.
    """
    _check_gamma(gamma)
    if gamma in (0.0, 1.0):
        return None

    def margin(t: float) -> float:
        return concurrence_margin(analytic_state(gamma, t))

    n = int(round(tau_max / scan_step))
    return _first_crossing(margin, np.arange(n + 1) * scan_step, tol)


def branch_gap(gamma: float, tau: float) -> float:
    """D2 - D1 at time tau (non-negative where the MID equals the discord)."""
    d1, d2 = discord_branches(analytic_state(gamma, tau))
    return d2 - d1


def mid_discord_interval(
    gamma: float, tau_max: float = MAX_TAU, scan_step: float = INTERVAL_SCAN_STEP, tol: float = 1e-9
) -> Optional[Interval]:
    """First connected tau region with D1 <= D2, i.e. where MID and discord coincide.

    Regions narrower than 1e-6 collapse to a point at their midpoint.  A region
    still open at ``tau_max`` ends there.
    """
    if not 0.0 < gamma < 1.0:
        raise ParamOutOfRange(f"gamma must lie in (0, 1), got {gamma!r}")
    n = int(round(tau_max / scan_step))
    taus = np.arange(1, n + 1) * scan_step
    gaps = np.array([branch_gap(gamma, float(t)) for t in taus])

    def gap(t: float) -> float:
        return branch_gap(gamma, t)

    inside = np.nonzero(gaps > BRANCH_NOISE_FLOOR)[0]
    if inside.size == 0:
        return None
    i0 = int(inside[0])
    start = float(taus[0]) if i0 == 0 else bisect(gap, float(taus[i0 - 1]), float(taus[i0]), xtol=tol)
    after = np.nonzero(gaps[i0:] < 0.0)[0]
    if after.size == 0:
        end = float(taus[-1])
    else:
        i1 = i0 + int(after[0])
        end = bisect(gap, float(taus[i1 - 1]), float(taus[i1]), xtol=tol)
    if end - start < 1e-6:
        mid = 0.5 * (start + end)
        return Interval(mid, mid)
    return Interval(start, end)


def degeneracy_time(gamma: float, tol: float = 1e-12) -> float:
    """The unique tau with a + b = 1/2, where both reduced states are I/2."""
    _check_gamma(gamma)
    return bisect(lambda t: ab_sum(gamma, t) - 0.5, 0.0, MAX_TAU, xtol=tol)


def decay_rate_fit(series: TimeSeries, column: str, window: tuple[float, float]) -> float:
    """Least-squares slope of log(column) against tau over the window."""
    lo, hi = window
    if lo < series.taus[0] or hi > series.taus[-1] or lo >= hi:
        raise ValueError(f"window {window} not inside the series grid")
    sel = (series.taus >= lo) & (series.taus <= hi)
    values = series.column(column)[sel]
    if values.size < 2:
        raise ValueError("window holds fewer than two samples")
    if np.any(values <= 0):
        raise NonPositiveData(f"column {column!r} has non-positive values in {window}")
    slope, _ = np.polyfit(series.taus[sel], np.log(values), 1)
    return float(slope)


def find_events(gamma: float, window: tuple[float, float] = (15.0, 25.0)) -> EventSet:
    """All trajectory events for one gamma; the decay rate is fitted to the discord."""
    _check_gamma(gamma)
    interval = mid_discord_interval(gamma) if 0.0 < gamma < 1.0 else None
    rate = None
    if 0.0 < gamma < 1.0:
        series = sweep(gamma, window[1], int(round(window[1] / 0.05)) + 1)
        try:
            rate = decay_rate_fit(series, "discord", window)
        except NonPositiveData:
            rate = None
    return EventSet(gamma, onset_time(gamma), interval, degeneracy_time(gamma), rate)


def classical_to_concurrence_ratio(series: TimeSeries, min_concurrence: float = 0.1) -> tuple[float, int]:
    """Largest classical/concurrence ratio over points with concurrence above a floor.

    Returns (ratio, number of qualifying points); the ratio is 0 when none qualify.
    """
    conc = series.column("concurrence")
    classical = series.column("classical")
    sel = conc > min_concurrence
    if not np.any(sel):
        return 0.0, 0
    return float(np.max(classical[sel] / conc[sel])), int(np.sum(sel))


def f_monotone(gamma: float, tau: float) -> float:
    """a + 2b + bc/a, which never exceeds one along the trajectory."""
    s = analytic_state(gamma, tau)
    return s.a + 2 * s.b + s.b * s.c / s.a
