"""Simulation of generalized INAR(p) count series.

The process follows the thinning recursion

    Z_t = sum_{i=1..p} thin(counting[i], Z_{t-i}) + eps_t,

where ``thin(spec, k)`` is the sum of ``k`` independent draws from the lag's
counting-sequence distribution and ``eps_t`` is an i.i.d. innovation. The
recursion is started from ``p`` pre-sample values drawn from the innovation
distribution and a burn-in stretch (default 1000 steps) is discarded, so the
returned stretch is effectively stationary.

Reproducibility: ``simulate`` is a pure function of (model, config); the
seed drives a dedicated PCG64 stream, so identical inputs give bitwise
identical series. Callers that manage their own substreams (the Monte Carlo
harness) can use ``sample_path`` with an explicit generator.
"""

import csv
from dataclasses import dataclass

import numpy as np

from .distributions import CountDistribution
from .errors import InputError

__all__ = [
    "check_stationarity",
    "GinarModel",
    "SimConfig",
    "thin",
    "sample_path",
    "simulate",
    "read_series",
    "write_series",
]


def check_stationarity(means):
    """True iff counting-sequence means admit a strictly stationary process.

    For nonnegative means the root condition
    ``1 - mu_1 z - ... - mu_p z^p != 0 on |z| <= 1`` is equivalent to
    ``sum(mu_i) < 1``: on the closed unit disk the lag polynomial's modulus
    is at least ``1 - sum(mu_i |z|^i) >= 1 - sum(mu_i)``, and at z = 1 the
    bound is attained. Negative means are rejected outright (counting
    sequences are nonnegative random variables).
    """
    mu = np.asarray(means, dtype=np.float64)
    if not np.all(np.isfinite(mu)):
        return False
    return bool(np.all(mu >= 0.0) and mu.sum() < 1.0)


@dataclass(frozen=True)
class GinarModel:
    """A generalized INAR(p) model: one counting spec per lag plus an innovation.

    The order p is the number of counting specs. Construction fails unless
    the counting means satisfy the stationarity condition.
    """

    counting: tuple
    innovation: CountDistribution

    def __post_init__(self):
        counting = tuple(self.counting)
        object.__setattr__(self, "counting", counting)
        if len(counting) < 1:
            raise ValueError("GinarModel needs at least one counting-sequence spec")
        for spec in counting + (self.innovation,):
            if not isinstance(spec, CountDistribution):
                raise ValueError(f"expected a CountDistribution, got {spec!r}")
        if not check_stationarity(self.counting_means):
            means = [float(m) for m in self.counting_means]
            raise ValueError(
                f"counting-sequence means violate stationarity (need all >= 0 and sum < 1, got {means})"
            )

    @property
    def order(self):
        return len(self.counting)

    @property
    def counting_means(self):
        return np.array([spec.mean for spec in self.counting])


@dataclass(frozen=True)
class SimConfig:
    """Length, burn-in, and seed for one simulated path."""

    n: int
    burn_in: int = 1000
    seed: int = 0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"series length must be positive, got {self.n}")
        if self.burn_in < 0:
            raise ValueError(f"burn-in must be nonnegative, got {self.burn_in}")
        if not 0 <= self.seed < 2**64:
            raise ValueError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


def thin(spec, count, rng):
    """Apply the thinning operator: sum of ``count`` i.i.d. draws from ``spec``.

    Evaluated through the family's exact convolution law (one or two
    generator calls instead of ``count``), which is identical in
    distribution to summing individual draws. Zero when ``count`` is 0.
    """
    if count < 0:
        raise ValueError(f"thinning count must be nonnegative, got {count}")
    return spec.sample_sum(int(count), rng)


def sample_path(model, n, burn_in, rng):
    """Generate ``n`` post-burn-in values of the recursion with caller's rng."""
    p = model.order
    steps = burn_in + n
    history = [int(v) for v in model.innovation.sample_array(p, rng)]
    eps = model.innovation.sample_array(steps, rng)
    out = np.empty(steps, dtype=np.int64)
    counting = model.counting
    for t in range(steps):
        z = int(eps[t])
        for i, spec in enumerate(counting):
            lagged = history[-1 - i]
            if lagged > 0:
                z += spec.sample_sum(lagged, rng)
        out[t] = z
        history.append(z)
        history.pop(0)
    return out[burn_in:]


def simulate(model, config):
    """Simulate a strictly stationary GINAR(p) path.

    Deterministic: identical ``(model, config)`` inputs give identical
    output. Requires ``config.n >= p + 2`` so downstream estimation has at
    least one regression row plus slack.
    """
    if config.n < model.order + 2:
        raise InputError(
            f"series length {config.n} too short for order {model.order} "
            f"(need at least p + 2 = {model.order + 2})"
        )
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence(config.seed)))
    return sample_path(model, config.n, config.burn_in, rng)


def read_series(path):
    """Read a single-column count CSV (optional ``count`` header).

    Returns an int64 array. Raises ``InputError`` with the line number on
    the first non-integer or negative value, and on empty files.
    """
    values = []
    with open(path, newline="") as fh:
        for lineno, row in enumerate(csv.reader(fh), start=1):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 1:
                raise InputError(f"{path}: line {lineno}: expected a single column")
            token = row[0].strip()
            if lineno == 1 and token.lower() == "count":
                continue
            try:
                value = int(token)
            except ValueError:
                raise InputError(
                    f"{path}: line {lineno}: not a nonnegative integer: {token!r}"
                ) from None
            if value < 0:
                raise InputError(f"{path}: line {lineno}: negative count {value}")
            values.append(value)
    if not values:
        raise InputError(f"{path}: no observations found")
    return np.array(values, dtype=np.int64)


def write_series(path, series):
    """Write a count series as single-column CSV with header ``count``."""
    arr = np.asarray(series)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["count"])
        for value in arr:
            writer.writerow([int(value)])
