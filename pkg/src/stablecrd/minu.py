"""Generation of the minimal output-unstable configurations, min(U).

For an o-stable CRD whose reactions all have exactly two reactants and do
not increase the molecule count, every element of min(U) can be reached
from a size-2 seed (a mixed-vote pair or a vote-flipping reactant vector)
by repeatedly taking predecessors, either of the element itself or of the
element plus one extra molecule. Elements are discovered in order of size,
so a candidate can be tested for minimality against everything found so
far.
"""

from __future__ import annotations

import os
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .errors import UncertifiableError, UnsupportedClassError, ZeroConfigurationError
from .index import Antichain, canonical_list
from .model import Configuration, Crd, CrdClass, _sum_with_unit, classify, predecessor

SUPPORTED = (CrdClass.BIMOLECULAR, CrdClass.TWO_REACTANT_NONINCREASING)
DEFAULT_ELEMENT_CAP = 1_000_000
THREADS_ENV = "STABLECRD_THREADS"


@dataclass(frozen=True)
class SeedSets:
    m1: frozenset[Configuration]
    t: frozenset[Configuration]

    def all(self) -> list[Configuration]:
        return canonical_list(self.m1 | self.t)


@dataclass
class GenStats:
    comparisons: int = 0
    predecessor_computations: int = 0
    layers: list[tuple[int, int]] = field(default_factory=list)
    wall_time: float = 0.0


@dataclass
class GenResult:
    """Output of :func:`gen_min_unstable`.

    When ``truncated`` is set, ``complete_through`` is the largest size up
    to which ``min_unstable`` is known to coincide with min(U).
    """

    min_unstable: Antichain
    stats: GenStats
    truncated: bool = False
    complete_through: int | None = None
    crd: Crd | None = field(default=None, repr=False, compare=False)

    def canonical_list(self) -> list[Configuration]:
        return canonical_list(self.min_unstable)


def require_supported(crd: Crd) -> CrdClass:
    cls = classify(crd)
    if cls not in SUPPORTED:
        raise UnsupportedClassError(
            f"min(U) generation needs two-reactant nonincreasing reactions; CRD is {cls.label}"
        )
    return cls


def compute_seeds(crd: Crd) -> SeedSets:
    require_supported(crd)
    dim, votes = crd.dim, crd.votes
    m1 = set()
    for a in range(dim):
        for b in range(a + 1, dim):
            if votes[a] != votes[b]:
                m1.add(Configuration.unit(dim, a) + Configuration.unit(dim, b))
    t = set()
    for rxn in crd.reactions:
        r, p = rxn.reactants, rxn.products
        if p.size == 0 or any(votes[a] != votes[b] for a in r.support() for b in p.support()):
            t.add(r)
    return SeedSets(frozenset(m1), frozenset(t))


def has_annihilation(crd: Crd) -> bool:
    """True if some reaction consumes molecules without producing any.

    Such a reaction can drive a configuration to the zero configuration,
    whose output is undefined; adding molecules then no longer preserves
    instability, so min(U) may not describe U.
    """
    return any(rxn.products.size == 0 for rxn in crd.reactions)


def resolve_threads(threads: int | None = None) -> int:
    if threads is None:
        threads = int(os.environ.get(THREADS_ENV, "1") or 1)
    if threads < 0:
        raise ValueError(f"{THREADS_ENV} must be >= 0")
    if threads == 0:
        threads = os.cpu_count() or 1
    return threads


def _direct(reactions, configs):
    out = []
    for c in configs:
        for rxn in reactions:
            prev = predecessor(rxn, c)
            if prev is not None:
                out.append(prev)
    return out


def _size_up(reactions, dim, configs):
    out = []
    for c in configs:
        for b in range(dim):
            bigger = _sum_with_unit(c, b)
            for rxn in reactions:
                prev = predecessor(rxn, bigger)
                if prev is not None:
                    out.append(prev)
    return out


def _in_parallel(pool, fn, configs, chunks):
    if pool is None or len(configs) < 2 * chunks:
        return fn(configs)
    step = -(-len(configs) // chunks)
    parts = [configs[i:i + step] for i in range(0, len(configs), step)]
    out = []
    for part in pool.map(fn, parts):
        out.extend(part)
    return out


def _canonical(configs):
    return sorted(set(configs), key=Configuration.sort_key)


def gen_min_unstable(crd: Crd, size_cap: int | None = None,
                     element_cap: int | None = DEFAULT_ELEMENT_CAP,
                     backend: str = "auto", threads: int | None = 1) -> GenResult:
    """Compute min(U) for ``crd``.

    The CRD is assumed to be o-stable; this is not checked. For CRDs
    without annihilating reactions (see :func:`has_annihilation`) every
    returned element is output-unstable regardless; with them, U need not
    be upward closed and the output may contain stable configurations.

    Candidates of one size are committed in canonical order only after all
    smaller sizes are final; ``threads`` > 1 parallelizes candidate
    generation within a layer without changing the result.
    """
    require_supported(crd)
    start = time.perf_counter()
    reactions = crd.reactions
    n_rxn, dim = len(reactions), crd.dim
    found = Antichain(dim, backend=backend)
    stats = GenStats()
    pending: dict[int, list[Configuration]] = defaultdict(list)
    pending[2].extend(compute_seeds(crd).all())

    truncated = False
    complete_through = None
    workers = resolve_threads(threads)
    pool = ThreadPoolExecutor(workers) if workers > 1 else None

    def direct(configs):
        return _direct(reactions, configs)

    def size_up(configs):
        return _size_up(reactions, dim, configs)

    try:
        while pending and not truncated:
            k = min(pending)
            if size_cap is not None and k > size_cap:
                truncated, complete_through = True, size_cap
                break
            layer = []
            batch = _canonical(pending.pop(k))
            while batch:
                fresh = []
                for c in batch:
                    if found.dominates(c):
                        continue
                    if element_cap is not None and len(found) >= element_cap:
                        truncated, complete_through = True, k - 1
                        break
                    found.insert(c, check=False)
                    fresh.append(c)
                layer.extend(fresh)
                if truncated:
                    break
                stats.predecessor_computations += len(fresh) * n_rxn
                batch = []
                for prev in _in_parallel(pool, direct, fresh, workers):
                    if prev.size == k:
                        batch.append(prev)
                    else:
                        pending[prev.size].append(prev)
                batch = _canonical(batch)
            if layer:
                stats.layers.append((k, len(layer)))
            if truncated:
                break
            stats.predecessor_computations += len(layer) * n_rxn * dim
            for prev in _in_parallel(pool, size_up, layer, workers):
                pending[prev.size].append(prev)
    finally:
        if pool is not None:
            pool.shutdown()

    stats.comparisons = found.stats.comparisons
    stats.wall_time = time.perf_counter() - start
    return GenResult(found, stats, truncated, complete_through if truncated else None, crd)


def check_o_stable(result: GenResult, c: Configuration) -> bool:
    """o-stability of ``c`` from min(U): stable iff no element lies below it."""
    if c.is_zero():
        raise ZeroConfigurationError("the zero configuration has no stability status")
    if result.min_unstable.dominates(c):
        return False
    if result.truncated and (result.complete_through is None or c.size > result.complete_through):
        raise UncertifiableError(
            f"min(U) is only complete up to size {result.complete_through}; "
            f"cannot certify a configuration of size {c.size}"
        )
    return True
