"""Weighted undirected graphs over signal dimensions, and their Laplacians.

Three constructions are provided, matching the three structural priors
the package compares:

* :func:`grid_graph` - pixels connected to their 4-neighbourhood with
  unit weights, purely structural;
* :func:`semi_geometric_graph` - same support as the grid, but each
  edge weighted by the absolute covariance of the two pixel series,
  mixing structure and data;
* :func:`correlation_graph` - no structural prior: the top fraction of
  node pairs by absolute Pearson correlation become edges.

Negative covariances/correlations are stored by absolute value: the
combinatorial Laplacian of a nonnegatively weighted graph is positive
semidefinite, which is what gives the low end of its spectrum the
usual low-frequency reading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import linalg

DEFAULT_KEEP_FRACTION = 0.05


@dataclass(frozen=True)
class Graph:
    """Undirected weighted graph on nodes 0..n-1.

    ``weights`` is the symmetric nonnegative adjacency matrix with a
    zero diagonal (no self-loops).  Node degrees are the row sums.
    """

    n: int
    weights: np.ndarray

    def __post_init__(self):
        w = linalg.as_matrix(self.weights, "adjacency")
        if w.shape != (self.n, self.n):
            raise ValueError(
                f"adjacency shape {w.shape} does not match n={self.n}"
            )
        if not np.array_equal(w, w.T):
            raise ValueError("adjacency must be symmetric")
        if np.any(np.diag(w) != 0.0):
            raise ValueError("adjacency must have a zero diagonal")
        if np.any(w < 0.0):
            raise ValueError("edge weights must be nonnegative")
        object.__setattr__(self, "weights", w)

    @property
    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def edge_count(self) -> int:
        """Number of undirected edges with nonzero weight."""
        return int(np.count_nonzero(np.triu(self.weights, 1)))


def grid_graph(height: int, width: int) -> Graph:
    """Unit-weight 4-neighbourhood grid; node (r, c) has index r*width + c."""
    if height < 1 or width < 1:
        raise ValueError("grid dimensions must be at least 1x1")
    n = height * width
    w = np.zeros((n, n))
    for r in range(height):
        for c in range(width):
            i = r * width + c
            if c + 1 < width:
                w[i, i + 1] = w[i + 1, i] = 1.0
            if r + 1 < height:
                w[i, i + width] = w[i + width, i] = 1.0
    return Graph(n, w)


def semi_geometric_graph(frames, height: int, width: int) -> Graph:
    """Grid-support graph weighted by absolute pixel covariances.

    ``frames`` is a (num_frames, height*width) stack of flattened
    frames (at least two).  The weight of grid edge (i, j) is
    ``|cov(series_i, series_j)|`` over the frames, with the unbiased
    N-1 divisor; pairs that are not grid neighbours stay at weight 0.
    """
    f = linalg.as_matrix(np.atleast_2d(np.asarray(frames, dtype=np.float64)),
                         "frames")
    if f.shape[0] < 2:
        raise ValueError("covariance needs at least 2 frames")
    n = height * width
    if f.shape[1] != n:
        raise ValueError(
            f"frame length {f.shape[1]} does not match {height}x{width} grid"
        )
    support = grid_graph(height, width).weights
    cov = np.atleast_2d(np.cov(f, rowvar=False))
    cov = (cov + cov.T) / 2.0  # BLAS products are not exactly symmetric
    return Graph(n, np.abs(cov) * support)


def correlation_graph(series, keep_fraction: float = DEFAULT_KEEP_FRACTION) -> Graph:
    """Keep the top fraction of node pairs by absolute Pearson correlation.

    ``series`` is (timepoints, nodes).  All n(n-1)/2 pair correlations
    are computed and the ``ceil(keep_fraction * n(n-1)/2)`` pairs with
    the largest absolute correlation become edges, weighted by that
    absolute correlation.  Ties are broken by lexicographic (i, j)
    order so the edge set is deterministic.
    """
    s = linalg.as_matrix(series, "series")
    t, n = s.shape
    if t < 2:
        raise ValueError("correlation needs at least 2 timepoints")
    if not 0.0 < keep_fraction <= 1.0:
        raise ValueError("keep_fraction must be in (0, 1]")

    flat = np.zeros((n, n))
    total = n * (n - 1) // 2
    if total == 0:
        return Graph(n, flat)

    constant = np.ptp(s, axis=0) == 0.0
    if np.any(constant):
        node = int(np.nonzero(constant)[0][0])
        raise ValueError(
            f"node {node} has zero variance; correlation is undefined"
        )

    corr = np.corrcoef(s, rowvar=False)
    corr = (corr + corr.T) / 2.0
    ii, jj = np.triu_indices(n, 1)
    score = np.abs(corr[ii, jj])

    # small slack so a keep_fraction*total that is mathematically an
    # integer is not pushed up by float noise
    keep = math.ceil(keep_fraction * total - 1e-9)
    keep = min(max(keep, 1), total)
    order = np.lexsort((jj, ii, -score))[:keep]
    flat[ii[order], jj[order]] = score[order]
    return Graph(n, flat + flat.T)


def laplacian(graph: Graph) -> np.ndarray:
    """Combinatorial Laplacian: degree matrix minus adjacency."""
    return np.diag(graph.degrees) - graph.weights
