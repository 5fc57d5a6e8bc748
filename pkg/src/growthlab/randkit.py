"""Reproducible randomness: seeded streams, per-site weights, planar Poisson points.

Everything here is counter-based: a sample is a pure function of a
:class:`SeedSpec` plus either lattice coordinates (site weights) or a draw
index (streams). No generator state is carried around, so arbitrarily large
lattices need O(1) memory and replicates parallelize trivially over
``stream_id``.

Determinism contract: identical (master_seed, stream_id, purpose_tag) yields
an identical sample sequence within one implementation and platform.
Cross-implementation bit-exactness is not promised.

Geometric law convention: support {1, 2, 3, ...} with
P{Y = k} = q * (1 - q)**(k-1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_SALT = 0xC2B2AE3D27D4EB4F

# purpose_tag namespaces used by the library's own drivers
PURPOSE_WEIGHTS = 1
PURPOSE_ATTEMPTS = 2
PURPOSE_COUNTS = 3
PURPOSE_INIT = 4
PURPOSE_POINTS = 5
PURPOSE_ENV = 6
PURPOSE_NOISE = 7

EXPONENTIAL = "exponential"
GEOMETRIC = "geometric"

QUADRANT = "quadrant"
TASEP_WEDGE = "tasep_wedge"


class DomainError(ValueError):
    """Queried coordinates lie outside the field's orientation domain."""


def _mix_scalar(x: int) -> int:
    """splitmix64 finalizer on a python int (kept in lockstep with _mix_array)."""
    x &= _MASK
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9 & _MASK
    x = (x ^ (x >> 27)) * 0x94D049BB133111EB & _MASK
    return x ^ (x >> 31)


def _mix_array(x: np.ndarray) -> np.ndarray:
    x = x.astype(np.uint64, copy=True)
    x ^= x >> np.uint64(30)
    x *= np.uint64(0xBF58476D1CE4E5B9)
    x ^= x >> np.uint64(27)
    x *= np.uint64(0x94D049BB133111EB)
    x ^= x >> np.uint64(31)
    return x


def _u64(v: int) -> int:
    return v & _MASK


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one reproducible stream.

    master_seed: experiment-level seed (64-bit).
    stream_id: replicate index; distinct ids give independent streams.
    purpose_tag: small namespace integer so one replicate can draw from
        several mutually independent streams.
    """

    master_seed: int
    stream_id: int = 0
    purpose_tag: int = 0

    def key(self) -> int:
        k = _mix_scalar(_u64(self.master_seed))
        k = _mix_scalar(k + _u64(self.stream_id) * _GOLDEN)
        k = _mix_scalar(k + _u64(self.purpose_tag) * _SALT)
        return k

    def with_(self, stream_id: int | None = None, purpose_tag: int | None = None) -> "SeedSpec":
        return SeedSpec(
            self.master_seed,
            self.stream_id if stream_id is None else stream_id,
            self.purpose_tag if purpose_tag is None else purpose_tag,
        )

    def generator(self) -> np.random.Generator:
        """numpy Generator for distributional plumbing (Poisson counts,
        Bernoulli initial data); counter streams handle the hot loops."""
        ss = np.random.SeedSequence(
            entropy=_u64(self.master_seed),
            spawn_key=(_u64(self.stream_id), _u64(self.purpose_tag)),
        )
        return np.random.Generator(np.random.PCG64(ss))


def stream_u64(seed: SeedSpec, start: int, n: int) -> np.ndarray:
    """Draws ``start .. start+n-1`` of the stream as raw uint64 words."""
    key = np.uint64(seed.key())
    ctr = np.arange(start + 1, start + n + 1, dtype=np.uint64)
    return _mix_array(key + ctr * np.uint64(_GOLDEN))


def stream_uniform(seed: SeedSpec, start: int, n: int) -> np.ndarray:
    """Uniform(0,1) draws, strictly inside the open interval."""
    return _to_unit(stream_u64(seed, start, n))


def _to_unit(h: np.ndarray) -> np.ndarray:
    return ((h >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53


def _to_unit_scalar(h: int) -> float:
    return ((h >> 11) + 0.5) * 2.0**-53


def sample_exponential(rate: float, seed: SeedSpec, start: int = 0, n: int = 1) -> np.ndarray:
    """Exponential(rate) samples with density rate*exp(-rate*t) on (0, inf)."""
    if rate <= 0:
        raise ValueError(f"rate must be > 0, got {rate}")
    return -np.log(stream_uniform(seed, start, n)) / rate


@dataclass(frozen=True)
class WeightField:
    """IID lattice weights addressed by site; nothing is stored.

    orientation "quadrant": sites (i, j) with i, j >= 1.
    orientation "tasep_wedge": sites (i, j) with j <= -1 and j < i, addressed
        through the coordinate bijection (i, j) -> (i - j, -j) into the
        quadrant, so both orientations expose the same underlying weights.
    """

    seed: SeedSpec
    law: str = EXPONENTIAL
    param: float = 1.0
    orientation: str = QUADRANT

    def __post_init__(self):
        if self.law not in (EXPONENTIAL, GEOMETRIC):
            raise ValueError(f"unknown law {self.law!r}")
        if self.law == EXPONENTIAL and self.param <= 0:
            raise ValueError("exponential rate must be > 0")
        if self.law == GEOMETRIC and not 0 < self.param < 1:
            raise ValueError("geometric success parameter must be in (0,1)")
        if self.orientation not in (QUADRANT, TASEP_WEDGE):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    def law_code(self) -> int:
        return 0 if self.law == EXPONENTIAL else 1

    def mean(self) -> float:
        return 1.0 / self.param

    def _check_domain(self, i, j) -> None:
        if self.orientation == QUADRANT:
            bad = (np.asarray(i) < 1) | (np.asarray(j) < 1)
        else:
            j_arr = np.asarray(j)
            bad = (j_arr > -1) | (j_arr >= np.asarray(i))
        if np.any(bad):
            raise DomainError(
                f"site outside {self.orientation} orientation domain"
            )

    def quadrant_coords(self, i, j):
        """Map field coordinates to quadrant coordinates."""
        if self.orientation == QUADRANT:
            return i, j
        i = np.asarray(i)
        j = np.asarray(j)
        return i - j, -j


def site_hash(key: int, i: int, j: int) -> int:
    h = _mix_scalar(_u64(key) + _u64(i) * _GOLDEN)
    return _mix_scalar(h + _u64(j) * _SALT)


def _site_hash_array(key: int, i: np.ndarray, j: np.ndarray) -> np.ndarray:
    ki = np.uint64(key) + i.astype(np.int64).view(np.uint64) * np.uint64(_GOLDEN)
    h = _mix_array(ki)
    return _mix_array(h + j.astype(np.int64).view(np.uint64) * np.uint64(_SALT))


def _apply_law(u: np.ndarray, law: str, param: float) -> np.ndarray:
    if law == EXPONENTIAL:
        return -np.log(u) / param
    # inverse CDF of the {1,2,...} geometric: Y = ceil(log u / log(1-q))
    k = np.ceil(np.log(u) / math.log1p(-param))
    return np.maximum(k, 1.0)


def site_weight(field: WeightField, i, j):
    """Weight at site(s) (i, j); pure function of (seed, law, i, j).

    Accepts scalars or equal-shaped integer arrays. Marginal law is
    field.law; distinct sites are independent.
    """
    scalar = np.isscalar(i) and np.isscalar(j)
    field._check_domain(i, j)
    qi, qj = field.quadrant_coords(i, j)
    qi = np.atleast_1d(np.asarray(qi, dtype=np.int64))
    qj = np.atleast_1d(np.asarray(qj, dtype=np.int64))
    key = field.seed.with_(purpose_tag=PURPOSE_WEIGHTS).key()
    u = _to_unit(_site_hash_array(key, qi, qj))
    w = _apply_law(u, field.law, field.param)
    return float(w[0]) if scalar else w.reshape(np.shape(i))


@dataclass(frozen=True)
class PlanarPoints:
    """Finite realization of a planar point process on (a,b] x (s,t]."""

    rect: tuple  # (a, s, b, t)
    xs: np.ndarray
    ts: np.ndarray

    def __len__(self) -> int:
        return len(self.xs)

    def in_rect(self, a: float, s: float, b: float, t: float) -> "PlanarPoints":
        m = (self.xs > a) & (self.xs <= b) & (self.ts > s) & (self.ts <= t)
        return PlanarPoints((a, s, b, t), self.xs[m], self.ts[m])


def sample_poisson_points(rect: tuple, rate: float, seed: SeedSpec) -> PlanarPoints:
    """Homogeneous Poisson points in (a,b] x (s,t]: count ~ Poisson(rate*area),
    positions independent uniforms."""
    if rate < 0:
        raise ValueError(f"rate must be >= 0, got {rate}")
    a, s, b, t = rect
    if b < a or t < s:
        raise ValueError(f"degenerate rectangle {rect}")
    area = (b - a) * (t - s)
    rng = seed.with_(purpose_tag=PURPOSE_POINTS).generator()
    n = int(rng.poisson(rate * area)) if area > 0 else 0
    xs = a + (b - a) * rng.random(n)
    ts = s + (t - s) * rng.random(n)
    return PlanarPoints(rect, xs, ts)
