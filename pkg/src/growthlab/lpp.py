"""Last-passage percolation: corner and wedge passage-time recursions,
optimal paths, the exact corner-shape oracle, and Monte Carlo shape
estimation.

Corner orientation: occupation times over the positive quadrant,
    T(k,l) = max(T(k-1,l), T(k,l-1)) + weight(k,l),   T = 0 off-quadrant,
which equals the max over nearest-neighbor up-right paths from (1,1) of the
summed weights.

Wedge orientation: the same weights relabeled through (i,j) -> (i-j,-j);
passage times satisfy
    T(k,l) = max(T(k-1,l), T(k+1,l+1)) + weight(k,l)   for l < min(0,k),
with T = 0 for l >= min(0,k), and the exact coordinate identity
    wedge T(k,l) == corner T(k-l, -l)
under shared weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from growthlab._backend import kernels
from growthlab._util import mean_stderr, replicate_map
from growthlab.randkit import (
    EXPONENTIAL,
    PURPOSE_WEIGHTS,
    QUADRANT,
    TASEP_WEDGE,
    SeedSpec,
    WeightField,
    site_weight,
)


@dataclass(frozen=True)
class PassageGrid:
    """Corner-orientation passage times on [1..K] x [1..L].

    values has shape (K+1, L+1); row 0 and column 0 hold the off-quadrant
    boundary zeros, so values[k, l] is the passage time at lattice site
    (k, l)."""

    values: np.ndarray
    weights: np.ndarray  # shape (K+1, L+1), weights[k, l] at site (k, l)

    @property
    def extent(self) -> tuple[int, int]:
        return self.values.shape[0] - 1, self.values.shape[1] - 1

    def value(self, k: int, l: int) -> float:
        if k < 1 or l < 1:
            return 0.0
        return float(self.values[k, l])


def grid_from_weights(weights: np.ndarray) -> PassageGrid:
    """Build the passage table from an explicit (K, L) weight array
    (weights[k-1, l-1] is the weight at site (k, l))."""
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2 or w.size == 0:
        raise ValueError("weights must be a nonempty 2-d array")
    if np.any(w < 0):
        raise ValueError("weights must be nonnegative")
    K, L = w.shape
    wb = np.zeros((K + 1, L + 1))
    wb[1:, 1:] = w
    g = np.zeros((K + 1, L + 1))
    for k in range(1, K + 1):
        # g[k,l] = max(g[k,l-1], g[k-1,l]) + w; sequential in l
        row = g[k]
        up = g[k - 1]
        acc = 0.0
        for l in range(1, L + 1):
            m = acc if acc > up[l] else up[l]
            acc = m + wb[k, l]
            row[l] = acc
    return PassageGrid(values=g, weights=wb)


def weight_table(fld: WeightField, K: int, L: int) -> np.ndarray:
    """Materialize quadrant weights on [1..K] x [1..L] as a (K, L) array."""
    ii, jj = np.meshgrid(np.arange(1, K + 1), np.arange(1, L + 1), indexing="ij")
    return site_weight(fld, ii, jj)


def passage_times_corner(fld: WeightField, K: int, L: int) -> PassageGrid:
    """Full corner passage table for a weight field (keeps the table; use
    estimate_shape for large-K scans that only need endpoint values)."""
    if K < 1 or L < 1:
        raise ValueError(f"extent must be >= 1, got ({K}, {L})")
    if fld.orientation != QUADRANT:
        raise ValueError("corner recursion needs a quadrant-orientation field")
    return grid_from_weights(weight_table(fld, K, L))


def passage_between(fld: WeightField, frm: tuple[int, int], to: tuple[int, int]) -> float:
    """Max summed weight over up-right paths from (k+1, l+1) to (m, n), for
    frm=(k,l), to=(m,n). Degenerate (empty path family) returns 0 so
    superadditivity statements hold verbatim."""
    k, l = frm
    m, n = to
    if m - k < 1 or n - l < 1:
        return 0.0
    ii, jj = np.meshgrid(np.arange(k + 1, m + 1), np.arange(l + 1, n + 1), indexing="ij")
    sub = site_weight(fld, ii, jj)
    return grid_from_weights(sub).value(m - k, n - l)


def argmax_path(grid: PassageGrid, endpoint: tuple[int, int]) -> list[tuple[int, int]]:
    """Backtrack one maximizing up-right path from (1,1) to endpoint.

    Ties prefer the horizontal predecessor (k-1, l). The path's weight sum
    equals the grid value at the endpoint."""
    k, l = endpoint
    K, L = grid.extent
    if not (1 <= k <= K and 1 <= l <= L):
        raise ValueError(f"endpoint {endpoint} outside grid extent {(K, L)}")
    path = [(k, l)]
    while (k, l) != (1, 1):
        if k > 1 and grid.values[k - 1, l] >= grid.values[k, l - 1]:
            k -= 1
        elif l > 1:
            l -= 1
        else:
            k -= 1
        path.append((k, l))
    path.reverse()
    return path


def path_weight_sum(grid: PassageGrid, path: list[tuple[int, int]]) -> float:
    return float(sum(grid.weights[k, l] for k, l in path))


# ---------------------------------------------------------------------------
# wedge orientation


@dataclass(frozen=True)
class WedgePassageGrid:
    """Wedge passage times on levels l in [ell_min, -1]; level l carries
    sites k in [l+1, k_hi(l)] (exact up-right dependency padding)."""

    k_max: int
    ell_min: int
    rows: dict = dc_field(default_factory=dict)  # level -> (k_start, ndarray)

    def value(self, k: int, l: int) -> float:
        if l >= min(0, k):
            return 0.0
        if l < self.ell_min:
            raise ValueError(f"level {l} below computed region {self.ell_min}")
        k_start, row = self.rows[l]
        if k < k_start or k >= k_start + len(row):
            raise ValueError(f"site ({k}, {l}) outside computed region")
        return float(row[k - k_start])


def passage_times_wedge(fld: WeightField, k_max: int, ell_min: int) -> WedgePassageGrid:
    """Wedge recursion, exact on k <= k_max for every level in [ell_min, -1].

    Levels are evaluated top-down; level l is padded right to
    k_max + (l - ell_min) so that every requested cell's up-right dependency
    cone is inside the computed region."""
    if fld.orientation != TASEP_WEDGE:
        raise ValueError("wedge recursion needs a tasep_wedge-orientation field")
    if ell_min > -1:
        raise ValueError("ell_min must be <= -1")
    rows: dict[int, tuple[int, np.ndarray]] = {}
    prev_start, prev = None, None
    for l in range(-1, ell_min - 1, -1):
        k_start = l + 1
        k_hi = k_max + (l - ell_min)
        width = k_hi - k_start + 1
        if width <= 0:
            raise ValueError("k_max too small for requested region")
        kk = np.arange(k_start, k_hi + 1)
        x = site_weight(fld, kk, np.full(width, l))
        row = np.empty(width)
        left = 0.0  # H(k_start - 1, l) = H(l, l) is boundary
        for idx in range(width):
            k = k_start + idx
            if l == -1:
                upright = 0.0
            else:
                # H(k+1, l+1): level above starts at l+2
                upright = prev[k + 1 - prev_start] if k + 1 >= prev_start else 0.0
            m = left if left > upright else upright
            left = m + x[idx]
            row[idx] = left
        rows[l] = (k_start, row)
        prev_start, prev = k_start, row
    return WedgePassageGrid(k_max=k_max, ell_min=ell_min, rows=rows)


def corner_shape(x: float, y: float) -> float:
    """Exact limit of passage time per unit n in direction (x, y) for rate-1
    exponential weights: (sqrt(x) + sqrt(y))**2."""
    if x < 0 or y < 0:
        raise ValueError(f"direction must be nonnegative, got ({x}, {y})")
    return (math.sqrt(x) + math.sqrt(y)) ** 2


# ---------------------------------------------------------------------------
# Monte Carlo shape estimation


@dataclass(frozen=True)
class ShapeEstimate:
    model: str
    law: str
    x: float
    y: float
    n: int
    replicates: int
    mean: float
    stderr: float
    seed: int

    def csv_row(self) -> list:
        return [self.model, self.law, self.x, self.y, self.n,
                self.replicates, self.mean, self.stderr, self.seed]


SHAPE_CSV_HEADER = ["model", "law", "x", "y", "n", "replicates", "mean", "stderr", "seed"]


def estimate_shape(law: str, direction: tuple[float, float], n: int,
                   replicates: int, seed: int, param: float = 1.0,
                   threads: int = 1) -> ShapeEstimate:
    """Sample mean and standard error of (passage time at ([nx],[ny])) / n
    over independent replicates (one weight-field stream per replicate)."""
    x, y = direction
    if n < 1 or replicates < 1:
        raise ValueError("n and replicates must be >= 1")
    K, L = max(1, int(n * x)), max(1, int(n * y))
    law_code = 0 if law == EXPONENTIAL else 1
    if law_code == 1 and not 0 < param < 1:
        raise ValueError("geometric success parameter must be in (0,1)")

    def one(rep: int) -> float:
        key = SeedSpec(seed, stream_id=rep, purpose_tag=PURPOSE_WEIGHTS).key()
        return kernels.corner_value(key, law_code, param, K, L) / n

    vals = replicate_map(one, replicates, threads)
    mean, stderr = mean_stderr(vals)
    return ShapeEstimate("corner", law, x, y, n, replicates, mean, stderr, seed)
