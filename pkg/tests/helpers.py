import random
from pathlib import Path

from stablecrd.model import Configuration, Crd, Reaction, SpeciesTable
from stablecrd.textio import load_crd

CORPUS = Path(__file__).resolve().parent.parent / "corpus"

# corpus entry -> size bound used for oracle comparisons
CORPUS_K = {
    "existence.crd": 6,
    "parity.crd": 8,
    "threshold2.crd": 8,
    "novote-flip.crd": 6,
}
EXTRA_K = {
    "threshold3.crd": 8,
    "parity.pp": 8,
    "majority.pp": 7,
}


def corpus(name):
    return load_crd(CORPUS / name)


def existence():
    return corpus("existence.crd")


def random_vector(rng, dim, size):
    """Uniform count vector of the given size (stars and bars)."""
    bars = sorted(rng.sample(range(size + dim - 1), dim - 1))
    edges = [-1] + bars + [size + dim - 1]
    return [edges[i + 1] - edges[i] - 1 for i in range(dim)]


def random_crd(rng, max_species=5, max_reactions=8, product_sizes=(2,)):
    n = rng.randint(2, max_species)
    reactions = []
    for _ in range(rng.randint(0, max_reactions)):
        r = random_vector(rng, n, 2)
        p = random_vector(rng, n, rng.choice(product_sizes))
        reactions.append(Reaction(Configuration(r), Configuration(p)))
    votes = tuple(rng.randint(0, 1) for _ in range(n))
    inputs = frozenset(i for i in range(n) if rng.random() < 0.6)
    names = tuple(f"S{i}" for i in range(n))
    return Crd(SpeciesTable(names), tuple(reactions), inputs, votes)


def fuzzed_crd(rng):
    n = rng.randint(1, 6)
    names = set()
    while len(names) < n:
        names.add(rng.choice("ABCXYZLF") + "".join(rng.choice("abz019_") for _ in range(rng.randint(0, 3))))
    names = sorted(names)
    rng.shuffle(names)
    names = tuple(names)
    reactions = []
    for _ in range(rng.randint(0, 6)):
        r = random_vector(rng, n, rng.randint(1, 4))
        p = random_vector(rng, n, rng.randint(0, 4))
        reactions.append(Reaction(Configuration(r), Configuration(p)))
    votes = tuple(rng.randint(0, 1) for _ in range(n))
    inputs = frozenset(i for i in range(n) if rng.random() < 0.5)
    return Crd(SpeciesTable(names), tuple(reactions), inputs, votes)


def random_antichain_points(rng, max_dim=6, max_size=500):
    """Distinct configurations forming an antichain, plus a typical size scale."""
    dim = rng.randint(1, max_dim)
    target = rng.randint(0, max_size)
    if dim == 1:
        s = rng.randint(1, 10)
        return dim, ([Configuration([s])] if target else []), s
    s = 1
    while _count(dim, s) < target and s < 40:
        s += 1
    s += rng.randint(0, 2)
    spread = rng.choice((0, 0, 2, 3))
    pts = set()
    attempts = 0
    while len(pts) < target and attempts < 20 * target:
        attempts += 1
        pts.add(Configuration(random_vector(rng, dim, s + rng.randint(0, spread))))
    if spread:
        from stablecrd.index import prune_to_antichain
        pts = prune_to_antichain(pts, dim, backend="naive")
    return dim, sorted(pts, key=Configuration.sort_key), s


def _count(dim, k):
    from math import comb
    return comb(dim + k - 1, k)


def rng_for(seed):
    return random.Random(seed)
