"""Exhaustive ground truth for mass-bounded CRDs.

Every answer here comes from explicit breadth-first exploration of the
reachable configurations; nothing relies on the structure of min(U). The
searches are exact and refuse to return partial answers: when a search would
visit more than ``cap`` configurations it raises :class:`CapExceededError`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from math import comb

from .errors import CapExceededError, UnsupportedClassError, ZeroConfigurationError
from .index import Antichain
from .model import (
    Configuration,
    Crd,
    CrdClass,
    Verdict,
    applicable,
    apply,
    classify,
    configurations_of_size,
    input_projection,
    phi,
)

DEFAULT_CAP = 2_000_000


@dataclass(frozen=True)
class ReachReport:
    visited: int
    capped: bool = False


@dataclass(frozen=True)
class StabilityVerdict:
    """Outcome of an o- or t-stability test for ``config``.

    ``witness`` lists (reaction index, configuration) steps leading from
    ``config`` to a configuration whose output differs; it is None when the
    configuration is stable or its own output is undefined.
    """

    config: Configuration
    stable: bool
    kind: str = "o"
    witness: tuple[tuple[int, Configuration], ...] | None = None


@dataclass(frozen=True)
class Counterexample:
    initial: Configuration
    config: Configuration
    reason: str
    other: Configuration | None = None


@dataclass
class DecidesReport:
    mode: str
    max_size: int
    table: dict[tuple[int, ...], Verdict] = field(default_factory=dict)
    counterexample: Counterexample | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None


def require_mass_bounded(crd: Crd) -> CrdClass:
    cls = classify(crd)
    if cls is CrdClass.GENERAL:
        raise UnsupportedClassError("CRD has an increasing reaction; reachable sets may be infinite")
    return cls


def state_count_bound(dim: int, k: int) -> int:
    """Number of configurations with exactly ``k`` molecules over ``dim`` species."""
    return comb(dim + k - 1, k)


def successors(crd: Crd, c: Configuration):
    """Yield (reaction index, result) for each applicable non-mute reaction."""
    for i, rxn in enumerate(crd.reactions):
        if not rxn.mute and applicable(rxn, c):
            yield i, apply(rxn, c)


def _explore(crd, start, cap, stop=None):
    """BFS from ``start``; returns (parents, hit). ``parents`` maps each
    visited configuration to (reaction index, predecessor) or None."""
    parents = {start: None}
    if stop is not None and stop(start):
        return parents, start
    queue = deque([start])
    while queue:
        c = queue.popleft()
        for i, nxt in successors(crd, c):
            if nxt in parents:
                continue
            if len(parents) >= cap:
                raise CapExceededError(
                    f"reachable set exceeds cap of {cap} configurations",
                    ReachReport(len(parents), True),
                )
            parents[nxt] = (i, c)
            if stop is not None and stop(nxt):
                return parents, nxt
            queue.append(nxt)
    return parents, None


def reachable_set(crd: Crd, c: Configuration, cap: int = DEFAULT_CAP):
    """All configurations reachable from ``c`` and a :class:`ReachReport`."""
    if cap <= 0:
        raise ValueError("cap must be positive")
    require_mass_bounded(crd)
    phi(crd, c)  # dimension check
    parents, _ = _explore(crd, c, cap)
    return frozenset(parents), ReachReport(len(parents), False)


def _path(parents, end):
    steps = []
    node = end
    while parents[node] is not None:
        i, prev = parents[node]
        steps.append((i, node))
        node = prev
    steps.reverse()
    return tuple(steps)


def oracle_is_o_stable(crd: Crd, c: Configuration, cap: int = DEFAULT_CAP) -> StabilityVerdict:
    require_mass_bounded(crd)
    verdict = phi(crd, c)
    if c.is_zero():
        raise ZeroConfigurationError("the zero configuration has no stability status")
    if verdict is Verdict.UND:
        return StabilityVerdict(c, False, "o", None)
    parents, hit = _explore(crd, c, cap, stop=lambda x: phi(crd, x) is not verdict)
    if hit is None:
        return StabilityVerdict(c, True, "o", None)
    return StabilityVerdict(c, False, "o", _path(parents, hit))


def is_t_stable(crd: Crd, c: Configuration) -> StabilityVerdict:
    """t-stability needs only a local check: no non-mute reaction may apply."""
    verdict = phi(crd, c)
    if c.is_zero():
        raise ZeroConfigurationError("the zero configuration has no stability status")
    if verdict is Verdict.UND:
        return StabilityVerdict(c, False, "t", None)
    for i, nxt in successors(crd, c):
        return StabilityVerdict(c, False, "t", ((i, nxt),))
    return StabilityVerdict(c, True, "t", None)


def replay(crd: Crd, start: Configuration, witness) -> bool:
    """Check that ``witness`` is a valid run from ``start``."""
    c = start
    for i, expected in witness:
        rxn = crd.reactions[i]
        if not applicable(rxn, c):
            return False
        c = apply(rxn, c)
        if c != expected:
            return False
    return True


def enumerate_configurations(dim: int, max_size: int, min_size: int = 1):
    for k in range(min_size, max_size + 1):
        yield from configurations_of_size(dim, k)


def oracle_min_unstable(crd: Crd, max_size: int, cap: int = DEFAULT_CAP) -> Antichain:
    """min(U) restricted to sizes <= ``max_size``, by classifying every
    configuration separately and filtering minimal ones pairwise."""
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    require_mass_bounded(crd)
    unstable = [
        c for c in enumerate_configurations(crd.dim, max_size)
        if not oracle_is_o_stable(crd, c, cap).stable
    ]
    minimal = [c for c in unstable if not any(u < c for u in unstable if u.size < c.size)]
    out = Antichain(crd.dim, backend="naive")
    for c in minimal:
        out.insert(c, check=False)
    return out


def initial_configurations(crd: Crd, max_size: int):
    inputs = sorted(crd.inputs)
    for c in enumerate_configurations(len(inputs), max_size):
        counts = [0] * crd.dim
        for pos, n in zip(inputs, c.counts):
            counts[pos] = n
        yield Configuration._trusted(tuple(counts), c.size)


def _reverse_closure(preds, seeds):
    seen = set(seeds)
    stack = list(seeds)
    while stack:
        node = stack.pop()
        for prev in preds[node]:
            if prev not in seen:
                seen.add(prev)
                stack.append(prev)
    return seen


def _stable_nodes(crd, nodes, preds, labels, mode):
    if mode == "t":
        return {
            c for c in nodes
            if labels[c] is not Verdict.UND and next(successors(crd, c), None) is None
        }
    # o-stable: defined output and no path to a configuration with another output
    reach = {
        v: _reverse_closure(preds, [c for c in nodes if labels[c] is v])
        for v in Verdict
    }
    stable = set()
    for c in nodes:
        v = labels[c]
        if v is Verdict.UND:
            continue
        if any(c in reach[w] for w in Verdict if w is not v):
            continue
        stable.add(c)
    return stable


def oracle_decides(crd: Crd, max_size: int, mode: str = "o", cap: int = DEFAULT_CAP) -> DecidesReport:
    """Check, for every initial configuration up to ``max_size``, that every
    reachable configuration can still reach a stable one and that all stable
    configurations reachable from it agree on one output."""
    if mode not in ("o", "t"):
        raise ValueError("mode must be 'o' or 't'")
    require_mass_bounded(crd)
    report = DecidesReport(mode, max_size)
    for init in initial_configurations(crd, max_size):
        parents, _ = _explore(crd, init, cap)
        nodes = sorted(parents, key=Configuration.sort_key)
        preds = {c: [] for c in nodes}
        for c in nodes:
            for _, nxt in successors(crd, c):
                preds[nxt].append(c)
        labels = {c: phi(crd, c) for c in nodes}
        stable = _stable_nodes(crd, nodes, preds, labels, mode)
        can_finish = _reverse_closure(preds, stable)
        stuck = [c for c in nodes if c not in can_finish]
        if stuck:
            report.counterexample = Counterexample(init, stuck[0], "no stable configuration reachable")
            return report
        ordered = [c for c in nodes if c in stable]
        first = ordered[0]
        for c in ordered[1:]:
            if labels[c] is not labels[first]:
                report.counterexample = Counterexample(init, first, "conflicting stable outputs", c)
                return report
        report.table[input_projection(crd, init)] = labels[first]
    return report
