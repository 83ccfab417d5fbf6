"""Value types and exact semantics of chemical reaction networks and deciders.

Everything here is an immutable value. Configurations are count vectors over
a fixed species table; reactions are (reactants, products) pairs of such
vectors; a :class:`Crd` adds an input set and a total yes/no vote map.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import CountOverflowError, DimensionError, NotApplicableError

MAX_COUNT = 2**63 - 1


@dataclass(frozen=True)
class SpeciesTable:
    names: tuple[str, ...]
    index: Mapping[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        if not names:
            raise ValueError("species table must not be empty")
        index = {}
        for i, name in enumerate(names):
            if name in index:
                raise ValueError(f"duplicate species {name!r}")
            index[name] = i
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "index", index)

    def __len__(self):
        return len(self.names)

    def __iter__(self):
        return iter(self.names)

    def __contains__(self, name):
        return name in self.index

    def position(self, name: str) -> int:
        return self.index[name]


class Configuration:
    """A multiset of molecules, stored as a nonnegative count vector.

    ``<=`` and ``<`` are the componentwise partial order (like ``frozenset``),
    so two configurations may be incomparable. Use :meth:`sort_key` for a
    total order.
    """

    __slots__ = ("counts", "size", "_hash")

    def __init__(self, counts: Iterable[int]):
        counts = tuple(int(x) for x in counts)
        for x in counts:
            if x < 0:
                raise ValueError(f"negative count in configuration: {counts}")
            if x > MAX_COUNT:
                raise CountOverflowError(f"count {x} exceeds 64-bit range")
        size = sum(counts)
        if size > MAX_COUNT:
            raise CountOverflowError("configuration size exceeds 64-bit range")
        self.counts = counts
        self.size = size
        self._hash = hash(counts)

    @classmethod
    def _trusted(cls, counts: tuple[int, ...], size: int | None = None) -> Configuration:
        # caller guarantees nonnegative entries within range
        self = object.__new__(cls)
        self.counts = counts
        self.size = sum(counts) if size is None else size
        self._hash = hash(counts)
        return self

    @classmethod
    def zero(cls, dim: int) -> Configuration:
        return cls._trusted((0,) * dim, 0)

    @classmethod
    def unit(cls, dim: int, i: int) -> Configuration:
        counts = [0] * dim
        counts[i] = 1
        return cls._trusted(tuple(counts), 1)

    @classmethod
    def from_mapping(cls, table: SpeciesTable, counts: Mapping[str, int]) -> Configuration:
        vec = [0] * len(table)
        for name, n in counts.items():
            vec[table.position(name)] += n
        return cls(vec)

    def __len__(self):
        return len(self.counts)

    def __iter__(self):
        return iter(self.counts)

    def __getitem__(self, i):
        return self.counts[i]

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.counts == other.counts

    def _check_dim(self, other):
        if len(self.counts) != len(other.counts):
            raise DimensionError(f"dimension mismatch: {len(self.counts)} vs {len(other.counts)}")

    def __le__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        self._check_dim(other)
        return all(a <= b for a, b in zip(self.counts, other.counts))

    def __ge__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return other.__le__(self)

    def __lt__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return self.counts != other.counts and self <= other

    def __gt__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        return other.__lt__(self)

    def __add__(self, other):
        if not isinstance(other, Configuration):
            return NotImplemented
        self._check_dim(other)
        size = self.size + other.size
        if size > MAX_COUNT:
            raise CountOverflowError("configuration size exceeds 64-bit range")
        return Configuration._trusted(tuple(a + b for a, b in zip(self.counts, other.counts)), size)

    def __sub__(self, other):
        """Difference; raises ``ValueError`` unless ``other <= self``."""
        if not isinstance(other, Configuration):
            return NotImplemented
        self._check_dim(other)
        diff = tuple(a - b for a, b in zip(self.counts, other.counts))
        if any(x < 0 for x in diff):
            raise ValueError("configuration difference would be negative")
        return Configuration._trusted(diff, self.size - other.size)

    def is_zero(self) -> bool:
        return self.size == 0

    def support(self) -> tuple[int, ...]:
        return tuple(i for i, x in enumerate(self.counts) if x)

    def sort_key(self):
        return (self.size, self.counts)

    def __repr__(self):
        return f"Configuration({list(self.counts)})"


def _sum_with_unit(c: Configuration, i: int) -> Configuration:
    counts = list(c.counts)
    counts[i] += 1
    return Configuration._trusted(tuple(counts), c.size + 1)


@dataclass(frozen=True)
class Reaction:
    reactants: Configuration
    products: Configuration

    def __post_init__(self):
        if len(self.reactants) != len(self.products):
            raise DimensionError("reactants and products have different dimensions")

    @property
    def mute(self) -> bool:
        return self.reactants == self.products

    @property
    def bimolecular(self) -> bool:
        return self.reactants.size == 2 and self.products.size == 2

    @property
    def nonincreasing(self) -> bool:
        return self.reactants.size >= self.products.size

    @property
    def two_reactant(self) -> bool:
        return self.reactants.size == 2


class Verdict(enum.Enum):
    NO = 0
    YES = 1
    UND = "und"

    @property
    def defined(self) -> bool:
        return self is not Verdict.UND


class CrdClass(enum.IntEnum):
    """Reaction classes ordered from strongest to weakest."""

    BIMOLECULAR = 0
    TWO_REACTANT_NONINCREASING = 1
    NONINCREASING = 2
    GENERAL = 3

    @property
    def label(self) -> str:
        return {
            CrdClass.BIMOLECULAR: "bimolecular",
            CrdClass.TWO_REACTANT_NONINCREASING: "two-reactant nonincreasing",
            CrdClass.NONINCREASING: "nonincreasing",
            CrdClass.GENERAL: "general",
        }[self]


@dataclass(frozen=True)
class Crd:
    """A leaderless chemical reaction decider.

    ``inputs`` holds species positions; ``votes`` is indexed by position and
    must assign 0 or 1 to every species.
    """

    species: SpeciesTable
    reactions: tuple[Reaction, ...]
    inputs: frozenset[int]
    votes: tuple[int, ...]

    def __post_init__(self):
        n = len(self.species)
        object.__setattr__(self, "reactions", tuple(self.reactions))
        object.__setattr__(self, "inputs", frozenset(self.inputs))
        object.__setattr__(self, "votes", tuple(self.votes))
        if len(self.votes) != n:
            raise ValueError("vote map must be total on the species")
        if any(v not in (0, 1) for v in self.votes):
            raise ValueError("votes must be 0 or 1")
        if any(not 0 <= i < n for i in self.inputs):
            raise ValueError("input species out of range")
        for rxn in self.reactions:
            if len(rxn.reactants) != n:
                raise DimensionError("reaction dimensioned differently from species table")

    @property
    def dim(self) -> int:
        return len(self.species)

    def config(self, counts: Mapping[str, int] | Sequence[int]) -> Configuration:
        if isinstance(counts, Mapping):
            return Configuration.from_mapping(self.species, counts)
        return Configuration(counts)

    def voters(self, vote: int) -> tuple[int, ...]:
        return tuple(i for i, v in enumerate(self.votes) if v == vote)


def _check(crd: Crd, c: Configuration):
    if len(c) != crd.dim:
        raise DimensionError(f"configuration has {len(c)} entries, CRD has {crd.dim} species")


def phi(crd: Crd, c: Configuration) -> Verdict:
    """The output map: which vote the present molecules agree on, if any."""
    _check(crd, c)
    yes = no = False
    for count, vote in zip(c.counts, crd.votes):
        if count:
            if vote:
                yes = True
            else:
                no = True
    if yes and not no:
        return Verdict.YES
    if no and not yes:
        return Verdict.NO
    return Verdict.UND


def applicable(rxn: Reaction, c: Configuration) -> bool:
    return rxn.reactants <= c


def apply(rxn: Reaction, c: Configuration) -> Configuration:
    r, p = rxn.reactants.counts, rxn.products.counts
    if len(c) != len(r):
        raise DimensionError("reaction and configuration dimensions differ")
    out = []
    for x, a, b in zip(c.counts, r, p):
        if x < a:
            raise NotApplicableError(f"reaction not applicable to {c!r}")
        out.append(x - a + b)
    size = c.size - rxn.reactants.size + rxn.products.size
    if size > MAX_COUNT:
        raise CountOverflowError("configuration size exceeds 64-bit range")
    return Configuration._trusted(tuple(out), size)


def predecessor(rxn: Reaction, target: Configuration) -> Configuration | None:
    """The unique ``c`` with ``apply(rxn, c) == target``, or None."""
    r, p = rxn.reactants.counts, rxn.products.counts
    if len(target) != len(r):
        raise DimensionError("reaction and configuration dimensions differ")
    out = []
    for x, a, b in zip(target.counts, r, p):
        if x < b:
            return None
        out.append(x - b + a)
    size = target.size - rxn.products.size + rxn.reactants.size
    if size > MAX_COUNT:
        raise CountOverflowError("configuration size exceeds 64-bit range")
    return Configuration._trusted(tuple(out), size)


def classify(crd: Crd) -> CrdClass:
    rxns = crd.reactions
    if all(rxn.bimolecular for rxn in rxns):
        return CrdClass.BIMOLECULAR
    if all(rxn.two_reactant and rxn.nonincreasing for rxn in rxns):
        return CrdClass.TWO_REACTANT_NONINCREASING
    if all(rxn.nonincreasing for rxn in rxns):
        return CrdClass.NONINCREASING
    return CrdClass.GENERAL


def is_initial(crd: Crd, c: Configuration) -> bool:
    _check(crd, c)
    if c.is_zero():
        return False
    return all(count == 0 or i in crd.inputs for i, count in enumerate(c.counts))


def input_projection(crd: Crd, c: Configuration) -> tuple[int, ...]:
    """Counts of the input species, in declaration order."""
    return tuple(c.counts[i] for i in sorted(crd.inputs))


def configurations_of_size(dim: int, k: int):
    """Yield every configuration of exactly ``k`` molecules, in canonical order."""

    def rec(prefix, remaining, slots):
        if slots == 1:
            yield prefix + (remaining,)
            return
        for x in range(remaining + 1):
            yield from rec(prefix + (x,), remaining - x, slots - 1)

    for counts in rec((), k, dim):
        yield Configuration._trusted(counts, k)
