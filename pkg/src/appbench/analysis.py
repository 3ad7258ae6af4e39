"""Effective fidelities, effective volumes and the quadratic fidelity-scaling fit.

The fit is ``f(x) = a0 + a1 x + a2 x**2`` of effective fidelity against
``x = V_lc / N``.  Its band is ``f(x) +- 3 sigma(x)``, where ``sigma`` is the
sample standard deviation of the residuals in each of 100 equal-width
intervals of ``x``.  Intervals with fewer than two points borrow ``sigma``
from the nearest interval that has them; if no interval has two points, all
share the sample standard deviation of the full residual set.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import asdict, dataclass, fields
from typing import NamedTuple, Sequence

import numpy as np

IDEAL_FLOOR = 1e-6
NUM_BINS = 100
BAND_MULTIPLIER = 3.0

RECORD_FIELDS = ("circuit_id", "family", "N", "L", "v_lc", "x", "measured", "ideal",
                 "f_eff", "flag", "seed", "trajectories")


class DegenerateIdealError(ZeroDivisionError):
    """Ideal expectation too close to zero for a meaningful ratio."""


class FitError(ValueError):
    pass


def effective_fidelity(measured: float, ideal: float, ideal_floor: float = IDEAL_FLOOR) -> float:
    if abs(ideal) < ideal_floor:
        raise DegenerateIdealError(f"|ideal| = {abs(ideal):.3g} is below {ideal_floor}")
    return measured / ideal


def effective_volume(f_eff: float, eps: float) -> float:
    """Gate count ``V`` with ``f_eff = exp(-eps V)``."""
    if eps <= 0:
        raise ValueError("eps must be positive")
    if f_eff <= 0:
        raise ValueError(f"effective fidelity {f_eff} is not positive")
    return -math.log(f_eff) / eps


@dataclass
class FidelityRecord:
    circuit_id: str
    family: str
    N: int
    L: int
    v_lc: int
    x: float
    measured: float
    ideal: float
    f_eff: float
    flag: str = ""
    seed: int = 0
    trajectories: int = 0

    @classmethod
    def make(cls, circuit_id: str, family: str, N: int, L: int, v_lc: int, measured: float,
             ideal: float, seed: int, trajectories: int,
             ideal_floor: float = IDEAL_FLOOR) -> FidelityRecord:
        try:
            f_eff, flag = effective_fidelity(measured, ideal, ideal_floor), ""
        except DegenerateIdealError:
            f_eff, flag = float("nan"), "degenerate_ideal"
        return cls(circuit_id, family, N, L, v_lc, v_lc / N, measured, ideal, f_eff, flag,
                   seed, trajectories)


def records_to_csv(records: Sequence[FidelityRecord]) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=RECORD_FIELDS, lineterminator="\n")
    w.writeheader()
    for r in records:
        w.writerow({k: repr(v) if isinstance(v, float) else v for k, v in asdict(r).items()})
    return buf.getvalue()


def records_from_csv(text: str) -> list[FidelityRecord]:
    types = {f.name: f.type for f in fields(FidelityRecord)}
    out = []
    for row in csv.DictReader(io.StringIO(text)):
        kw = {}
        for k in RECORD_FIELDS:
            t = types[k]
            kw[k] = int(row[k]) if t == "int" else float(row[k]) if t == "float" else row[k]
        out.append(FidelityRecord(**kw))
    return out


class Interval(NamedTuple):
    low: float
    high: float
    extrapolated: bool = False


@dataclass
class FitResult:
    coefficients: tuple[float, float, float]
    bin_edges: np.ndarray
    bin_sigmas: np.ndarray
    band_multiplier: float = BAND_MULTIPLIER

    def __call__(self, x):
        a0, a1, a2 = self.coefficients
        return a0 + a1 * np.asarray(x) + a2 * np.asarray(x) ** 2

    def bin_index(self, x: float) -> int:
        lo, hi = self.bin_edges[0], self.bin_edges[-1]
        nb = len(self.bin_sigmas)
        if hi == lo:
            return 0
        return int(min(max(math.floor((x - lo) / (hi - lo) * nb), 0), nb - 1))

    def sigma(self, x: float) -> float:
        return float(self.bin_sigmas[self.bin_index(x)])

    def to_dict(self) -> dict:
        return {"coefficients": list(self.coefficients),
                "bin_edges": [float(v) for v in self.bin_edges],
                "bin_sigmas": [float(v) for v in self.bin_sigmas],
                "band_multiplier": self.band_multiplier}

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)

    @classmethod
    def from_dict(cls, d: dict) -> FitResult:
        return cls(tuple(d["coefficients"]), np.asarray(d["bin_edges"], dtype=float),
                   np.asarray(d["bin_sigmas"], dtype=float), d.get("band_multiplier", BAND_MULTIPLIER))


def fit_quadratic_xy(x, y, num_bins: int = NUM_BINS,
                     band_multiplier: float = BAND_MULTIPLIER) -> FitResult:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.size < 3 or np.unique(x).size < 3:
        raise FitError("need at least three distinct x values for a quadratic fit")
    design = np.vander(x, 3, increasing=True)
    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 3:
        raise FitError("rank-deficient design matrix")
    resid = y - design @ coef
    edges = np.linspace(x.min(), x.max(), num_bins + 1)
    idx = np.clip(np.floor((x - x.min()) / (x.max() - x.min()) * num_bins).astype(int), 0, num_bins - 1)
    sig = np.full(num_bins, np.nan)
    for b in range(num_bins):
        r = resid[idx == b]
        if r.size >= 2:
            sig[b] = r.std(ddof=1)
    filled = np.nonzero(~np.isnan(sig))[0]
    if filled.size == 0:
        # every point sits alone in its interval: one global spread for all
        sig[:] = resid.std(ddof=1)
    for b in np.nonzero(np.isnan(sig))[0]:
        sig[b] = sig[filled[np.argmin(np.abs(filled - b))]]
    return FitResult(tuple(float(c) for c in coef), edges, sig, band_multiplier)


def fit_quadratic(records: Sequence[FidelityRecord], num_bins: int = NUM_BINS) -> FitResult:
    """Least-squares quadratic of ``f_eff`` against ``x``; flagged records are rejected."""
    if any(r.flag for r in records):
        raise FitError("flagged records must be excluded before fitting")
    return fit_quadratic_xy([r.x for r in records], [r.f_eff for r in records], num_bins)


def predict_interval(fit: FitResult, x: float) -> Interval:
    centre = float(fit(x))
    half = fit.band_multiplier * fit.sigma(x)
    outside = not fit.bin_edges[0] <= x <= fit.bin_edges[-1]
    return Interval(centre - half, centre + half, outside)


def coverage(fit: FitResult, records: Sequence[FidelityRecord]) -> float:
    """Fraction of unflagged records whose ``f_eff`` lies inside the band."""
    usable = [r for r in records if not r.flag]
    if not usable:
        return float("nan")
    inside = 0
    for r in usable:
        lo, hi, _ = predict_interval(fit, r.x)
        inside += lo <= r.f_eff <= hi
    return inside / len(usable)
