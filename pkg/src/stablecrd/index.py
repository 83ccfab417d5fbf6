"""Antichains of configurations with dominance queries.

An :class:`Antichain` represents an upward-closed set by its minimal
elements and answers "is some stored ``u <= c``?". Two interchangeable
backends exist: a linear scan (the reference) and a bucketed k-d tree that
keeps the componentwise minimum of every subtree so whole branches can be
skipped.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass
from typing import Iterable

from .errors import AntichainError, DimensionError
from .model import Configuration

BACKENDS = ("auto", "naive", "tree")
AUTO_TREE_THRESHOLD = 64


@dataclass
class QueryStats:
    comparisons: int = 0
    queries: int = 0


def _leq(u, v):
    return all(map(operator.le, u, v))


class _Node:
    __slots__ = ("lo", "axis", "split", "left", "right", "points")

    def __init__(self, points):
        self.points = points
        self.axis = -1
        self.split = 0
        self.left = self.right = None
        self.lo = tuple(map(min, zip(*points))) if points else None

    @property
    def is_leaf(self):
        return self.points is not None


class _KdTree:
    def __init__(self, dim, leaf_size=16):
        self.dim = dim
        self.leaf_size = leaf_size
        self.root = None

    @classmethod
    def build(cls, dim, points, leaf_size=16):
        tree = cls(dim, leaf_size)
        if points:
            tree.root = tree._build(list(points))
        return tree

    def _build(self, points):
        node = _Node(points)
        if len(points) > self.leaf_size:
            self._split(node)
        return node

    def _split(self, node):
        points = node.points
        best_axis, best_spread = -1, 0
        for axis in range(self.dim):
            vals = [p[axis] for p in points]
            spread = max(vals) - min(vals)
            if spread > best_spread:
                best_axis, best_spread = axis, spread
        if best_axis < 0:
            return  # all points equal on every axis; keep as an oversized leaf
        vals = sorted(p[best_axis] for p in points)
        split = vals[len(vals) // 2]
        if split == vals[0]:
            split = next(v for v in vals if v > vals[0])
        left = [p for p in points if p[best_axis] < split]
        right = [p for p in points if p[best_axis] >= split]
        node.axis, node.split = best_axis, split
        node.points = None
        node.left, node.right = self._build(left), self._build(right)

    def insert(self, point):
        if self.root is None:
            self.root = _Node([point])
            return
        node = self.root
        while True:
            node.lo = tuple(map(min, node.lo, point))
            if node.is_leaf:
                node.points.append(point)
                if len(node.points) > self.leaf_size:
                    self._split(node)
                return
            node = node.left if point[node.axis] < node.split else node.right

    def exists_leq(self, q, stats):
        """True iff some stored point is componentwise <= q."""
        if self.root is None:
            return False
        stack = [self.root]
        n = 0
        while stack:
            node = stack.pop()
            n += 1
            if not _leq(node.lo, q):
                continue
            if node.is_leaf:
                for p in node.points:
                    n += 1
                    if _leq(p, q):
                        stats.comparisons += n
                        return True
                continue
            if q[node.axis] >= node.split:
                stack.append(node.right)
            stack.append(node.left)
        stats.comparisons += n
        return False


class Antichain:
    """A finite set of pairwise incomparable configurations of one dimension.

    ``backend="auto"`` scans linearly until the antichain holds
    ``AUTO_TREE_THRESHOLD`` elements and switches to the tree afterwards.
    """

    def __init__(self, dim: int, elements: Iterable[Configuration] = (), backend: str = "auto",
                 check: bool = True):
        if backend not in BACKENDS:
            raise ValueError(f"unknown backend {backend!r}; expected one of {BACKENDS}")
        self.dim = dim
        self.backend = backend
        self.stats = QueryStats()
        self._elements: list[Configuration] = []
        self._members: set[Configuration] = set()
        self._tree: _KdTree | None = _KdTree(dim) if backend == "tree" else None
        for c in elements:
            self.insert(c, check)

    @property
    def active_backend(self) -> str:
        return "tree" if self._tree is not None else "naive"

    def __len__(self):
        return len(self._elements)

    def __iter__(self):
        return iter(self._elements)

    def __contains__(self, c):
        return c in self._members

    def __eq__(self, other):
        if not isinstance(other, Antichain):
            return NotImplemented
        return self.dim == other.dim and self._members == other._members

    def __repr__(self):
        return f"Antichain(dim={self.dim}, n={len(self)}, backend={self.backend!r})"

    def _check_dim(self, c):
        if len(c) != self.dim:
            raise DimensionError(f"configuration has {len(c)} entries, antichain has dimension {self.dim}")

    def dominates(self, c: Configuration) -> bool:
        """True iff some stored ``u`` satisfies ``u <= c`` (equality included)."""
        self._check_dim(c)
        stats = self.stats
        stats.queries += 1
        q = c.counts
        if self._tree is not None:
            return self._tree.exists_leq(q, stats)
        n = 0
        for u in self._elements:
            n += 1
            if _leq(u.counts, q):
                stats.comparisons += n
                return True
        stats.comparisons += n
        return False

    def insert(self, c: Configuration, check: bool = True) -> None:
        """Add ``c``; the caller guarantees it is not dominated.

        With ``check`` (and outside ``python -O``) the antichain invariant
        is verified and :class:`AntichainError` raised on violation.
        """
        self._check_dim(c)
        if __debug__ and check:
            for u in self._elements:
                if _leq(u.counts, c.counts):
                    raise AntichainError(f"{c!r} is dominated by stored {u!r}")
                if _leq(c.counts, u.counts):
                    raise AntichainError(f"{c!r} dominates stored {u!r}")
        self._elements.append(c)
        self._members.add(c)
        if self._tree is not None:
            self._tree.insert(c.counts)
        elif self.backend == "auto" and len(self._elements) >= AUTO_TREE_THRESHOLD:
            self._tree = _KdTree.build(self.dim, [e.counts for e in self._elements])

    def canonical_list(self) -> list[Configuration]:
        return canonical_list(self)

    def copy(self, backend: str | None = None) -> Antichain:
        return Antichain(self.dim, self._elements, backend or self.backend, check=False)


def canonical_list(index: Iterable[Configuration]) -> list[Configuration]:
    """Elements sorted by size, then ascending counts in species order."""
    return sorted(index, key=Configuration.sort_key)


def prune_to_antichain(configs: Iterable[Configuration], dim: int | None = None,
                       backend: str = "auto") -> Antichain:
    """Return the minimal elements of ``configs``."""
    configs = sorted(set(configs), key=Configuration.sort_key)
    if dim is not None:
        for c in configs:
            if len(c) != dim:
                raise DimensionError(f"configuration has {len(c)} entries, expected {dim}")
    if dim is None:
        dim = len(configs[0]) if configs else 0
    out = Antichain(dim, backend=backend)
    # size order: a configuration can only be dominated by an earlier one
    for c in configs:
        if not out.dominates(c):
            out.insert(c, check=False)
    return out
