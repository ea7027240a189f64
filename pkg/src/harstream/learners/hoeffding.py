"""Incremental decision tree with Hoeffding-bound split decisions.

Leaves accumulate per-class counts and per-class per-dimension Gaussian
summaries of the numeric attributes. Every `grace_period` examples a
leaf compares the two best information gains; it splits when the gap
beats the Hoeffding bound eps = sqrt(R^2 ln(1/delta) / (2n)) or when
eps has shrunk below the tie threshold tau.
"""

from __future__ import annotations

import math
from typing import Dict, List, Optional

import numpy as np

from .base import OnlineClassifier, Prediction, argmax_label

DEFAULT_DELTA = 0.05
DEFAULT_TAU = 0.35
DEFAULT_GRACE = 20
N_CANDIDATES = 10
SIGMA_FLOOR = 1e-9


def hoeffding_bound(r: float, delta: float, n: int) -> float:
    """Confidence radius eps = sqrt(R^2 ln(1/delta) / (2n))."""
    if r <= 0:
        raise ValueError("R must be > 0")
    if not (0 < delta < 1):
        raise ValueError("delta must be in (0, 1)")
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.sqrt(r * r * math.log(1.0 / delta) / (2.0 * n))


def _entropy(counts: np.ndarray) -> float:
    total = counts.sum()
    if total <= 0:
        return 0.0
    p = counts[counts > 0] / total
    return float(-np.sum(p * np.log2(p)))


def _phi(z: float) -> float:
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


class _AxisStats:
    """Gaussian summary (count/mean/M2 plus min/max) over the leaf's dims."""

    __slots__ = ("count", "mean", "m2", "mn", "mx")

    def __init__(self, dims: int):
        self.count = 0
        self.mean = np.zeros(dims)
        self.m2 = np.zeros(dims)
        self.mn = np.full(dims, np.inf)
        self.mx = np.full(dims, -np.inf)

    def update(self, x: np.ndarray) -> None:
        self.count += 1
        delta = x - self.mean
        self.mean += delta / self.count
        self.m2 += delta * (x - self.mean)
        np.minimum(self.mn, x, out=self.mn)
        np.maximum(self.mx, x, out=self.mx)

    def sigma(self) -> np.ndarray:
        if self.count == 0:
            return np.zeros_like(self.mean)
        return np.sqrt(np.maximum(self.m2 / self.count, SIGMA_FLOOR))

    def mass_below(self, dim: int, threshold: float) -> float:
        """Estimated number of this class's examples with x[dim] <= threshold."""
        if self.count == 0:
            return 0.0
        if threshold < self.mn[dim]:
            return 0.0
        if threshold >= self.mx[dim]:
            return float(self.count)
        sigma = self.sigma()[dim]
        if sigma <= math.sqrt(SIGMA_FLOOR):
            return float(self.count) if self.mean[dim] <= threshold else 0.0
        return self.count * _phi((threshold - self.mean[dim]) / sigma)


class _Node:
    __slots__ = ("class_counts", "stats", "split_dim", "split_threshold",
                 "left", "right", "since_attempt")

    def __init__(self):
        self.class_counts: Dict[int, int] = {}
        self.stats: Dict[int, _AxisStats] = {}
        self.split_dim: Optional[int] = None
        self.split_threshold = 0.0
        self.left: Optional[_Node] = None
        self.right: Optional[_Node] = None
        self.since_attempt = 0

    @property
    def is_leaf(self) -> bool:
        return self.split_dim is None

    def total(self) -> int:
        return sum(self.class_counts.values())

    def route(self, x: np.ndarray) -> "_Node":
        if x[self.split_dim] <= self.split_threshold:
            return self.left
        return self.right


class HoeffdingTree(OnlineClassifier):
    """Numeric-attribute VFDT-style tree; splits are set at most once.

    `dims` restricts the tree to a feature subset (used by the random
    forest); by default all input dimensions participate.
    """

    algorithm = "idt"

    def __init__(self, n_features: int, delta: float = DEFAULT_DELTA,
                 tau: float = DEFAULT_TAU, grace_period: int = DEFAULT_GRACE,
                 n_candidates: int = N_CANDIDATES, dims: Optional[np.ndarray] = None):
        super().__init__(n_features)
        self.delta = delta
        self.tau = tau
        self.grace_period = grace_period
        self.n_candidates = n_candidates
        self.dims = np.arange(n_features) if dims is None else np.asarray(dims, dtype=int)
        self.root = _Node()
        self.n_splits = 0

    def _project(self, x: np.ndarray) -> np.ndarray:
        return x[self.dims]

    def _sort_to_leaf(self, xp: np.ndarray) -> List[_Node]:
        path = [self.root]
        while not path[-1].is_leaf:
            path.append(path[-1].route(xp))
        return path

    def _learn(self, x: np.ndarray, y: int) -> None:
        xp = self._project(x)
        leaf = self._sort_to_leaf(xp)[-1]
        leaf.class_counts[y] = leaf.class_counts.get(y, 0) + 1
        stats = leaf.stats.get(y)
        if stats is None:
            stats = leaf.stats[y] = _AxisStats(self.dims.size)
        stats.update(xp)
        leaf.since_attempt += 1
        if leaf.since_attempt >= self.grace_period:
            leaf.since_attempt = 0
            self._attempt_split(leaf)

    def _predict(self, x: np.ndarray) -> Optional[Prediction]:
        path = self._sort_to_leaf(self._project(x))
        # fresh post-split leaves may be empty: fall back up the path
        for node in reversed(path):
            if node.class_counts:
                total = node.total()
                scores = {c: n / total for c, n in node.class_counts.items()}
                return argmax_label(scores), scores
        return None

    # --- split machinery ---

    def _attempt_split(self, leaf: _Node) -> None:
        classes = [c for c, n in leaf.class_counts.items() if n > 0]
        if len(classes) < 2:
            return
        counts = np.array([leaf.class_counts[c] for c in classes], dtype=float)
        total = counts.sum()
        parent_h = _entropy(counts)
        best_gain = second_gain = 0.0
        best_dim = None
        best_threshold = 0.0
        for d in range(self.dims.size):
            gain, threshold = self._best_candidate(leaf, classes, counts, parent_h, d)
            if gain > best_gain:
                second_gain = best_gain
                best_gain, best_dim, best_threshold = gain, d, threshold
            elif gain > second_gain:
                second_gain = gain
        if best_dim is None or best_gain <= 0.0:
            return
        eps = hoeffding_bound(math.log2(len(classes)), self.delta, int(total))
        if (best_gain - second_gain > eps) or (eps < self.tau):
            leaf.split_dim = best_dim
            leaf.split_threshold = best_threshold
            leaf.left = _Node()
            leaf.right = _Node()
            leaf.stats = {}
            self.n_splits += 1

    def _best_candidate(self, leaf, classes, counts, parent_h, d):
        lo = min(leaf.stats[c].mn[d] for c in classes)
        hi = max(leaf.stats[c].mx[d] for c in classes)
        if not (hi > lo):
            return 0.0, 0.0
        total = counts.sum()
        best = (0.0, 0.0)
        for j in range(1, self.n_candidates + 1):
            t = lo + j * (hi - lo) / (self.n_candidates + 1)
            below = np.array([leaf.stats[c].mass_below(d, t) for c in classes])
            above = counts - below
            n_l, n_r = below.sum(), above.sum()
            if n_l <= 0 or n_r <= 0:
                continue
            gain = parent_h - (n_l / total) * _entropy(below) - (n_r / total) * _entropy(above)
            if gain > best[0]:
                best = (gain, t)
        return best

    @property
    def n_nodes(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            node = stack.pop()
            count += 1
            if not node.is_leaf:
                stack.extend((node.left, node.right))
        return count
