"""Acceptance criteria, one test per criterion.

Each criterion prints a single ``[PASS]``/``[FAIL]`` line with a short
summary. Run under pytest (``pytest tests/test_acceptance.py -s`` shows the
lines inline; they are printed even without ``-s``) or directly with
``python tests/test_acceptance.py``.
"""

import contextlib
import io
import json
import math
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import (  # noqa: E402
    CORPUS,
    CORPUS_K,
    corpus,
    fuzzed_crd,
    random_antichain_points,
    random_crd,
    random_vector,
    rng_for,
)
from stablecrd.cli import main  # noqa: E402
from stablecrd.index import Antichain  # noqa: E402
from stablecrd.minu import compute_seeds, gen_min_unstable  # noqa: E402
from stablecrd.model import Configuration, classify, CrdClass, configurations_of_size  # noqa: E402
from stablecrd.oracle import enumerate_configurations, is_t_stable, oracle_is_o_stable  # noqa: E402
from stablecrd.textio import (  # noqa: E402
    config_from_json,
    format_config,
    import_protocol,
    parse_crd,
    parse_protocol,
    serialize_crd,
)

NAMES = list(CORPUS_K)


def cli(*argv):
    out, err = io.StringIO(), io.StringIO()
    with contextlib.redirect_stdout(out), contextlib.redirect_stderr(err):
        code = main([str(a) for a in argv])
    return code, out.getvalue()


class Memo:
    """Oracle o-stability answers cached per CRD."""

    def __init__(self, crd):
        self.crd = crd
        self.seen = {}

    def stable(self, c):
        if c not in self.seen:
            self.seen[c] = oracle_is_o_stable(self.crd, c).stable
        return self.seen[c]


def structural_problems(crd, result):
    out = list(result.min_unstable)
    problems = []
    for i, x in enumerate(out):
        for y in out[i + 1:]:
            if x <= y or y <= x:
                problems.append("not an antichain")
    sizes = {c.size for c in out}
    if sizes and min(sizes) < 2:
        problems.append("element below size 2")
    if sizes and sizes != set(range(2, max(sizes) + 1)):
        problems.append("sizes not contiguous")
    if not compute_seeds(crd).m1 <= set(out):
        problems.append("mixed-vote pair missing")
    return problems


def below(c):
    """All nonzero configurations strictly below ``c``."""
    ranges = [range(n + 1) for n in c.counts]

    def walk(i, acc):
        if i == len(ranges):
            yield tuple(acc)
            return
        for v in ranges[i]:
            acc.append(v)
            yield from walk(i + 1, acc)
            acc.pop()

    for counts in walk(0, []):
        if any(counts) and counts != c.counts:
            yield Configuration(counts)


# criteria: each returns (ok, summary)

def crit_1():
    start = time.perf_counter()
    failed = []
    for name in NAMES:
        code, _ = cli("compare", CORPUS / name, "--max-size", CORPUS_K[name])
        if code != 0:
            failed.append(f"{name} exit {code}")
    elapsed = time.perf_counter() - start
    ks = ", ".join(f"{n} K={CORPUS_K[n]}" for n in NAMES)
    return not failed, f"compare exit 0 on {ks} ({elapsed:.2f}s)" + (f"; failed: {failed}" if failed else "")


def crit_2():
    mismatches, total = 0, 0
    for name in NAMES:
        path = CORPUS / name
        _, out = cli("oracle", path, "--what", "stability", "--max-size", 8, "--format", "json")
        crd = corpus(name)
        truth = {config_from_json(v["config"], crd.species): v["o_stable"]
                 for v in json.loads(out)["verdicts"]}
        literals = [format_config(c, crd.species) for c in truth]
        code, out = cli("check", path, "--mode", "o", "--format", "json", *literals)
        answers = [json.loads(line) for line in out.splitlines()] if code == 0 else []
        total += len(truth)
        # unanswered configurations count as mismatches
        mismatches += len(truth) - len(answers)
        for obj in answers:
            if truth[config_from_json(obj["config"], crd.species)] != obj["o_stable"]:
                mismatches += 1
    return mismatches == 0, f"{total} configurations of size <= 8, {mismatches} mismatches"


def crit_3():
    ex = corpus("existence.crd")
    got = set(gen_min_unstable(ex).min_unstable)
    want = {ex.config({"A": 1, "B": 1}), ex.config({"B": 1, "Y": 1})}
    flip = corpus("novote-flip.crd")
    m1 = compute_seeds(flip).m1
    got_flip = set(gen_min_unstable(flip).min_unstable)
    ok = got == want and got_flip == set(m1) and len(m1) == 1
    return ok, f"existence -> {{AB, YB}}: {got == want}; reaction-free -> M1 ({len(m1)} pair): {got_flip == set(m1)}"


def crit_4():
    rng = rng_for(404)
    problems = []
    for name in NAMES:
        crd = corpus(name)
        problems += [f"{name}: {p}" for p in structural_problems(crd, gen_min_unstable(crd))]
    checked = 0
    for i in range(50):
        crd = random_crd(rng, max_species=5, max_reactions=8)
        assert classify(crd) is CrdClass.BIMOLECULAR
        result = gen_min_unstable(crd, size_cap=6)
        problems += [f"random #{i}: {p}" for p in structural_problems(crd, result)]
        memo = Memo(crd)
        for c in result.min_unstable:
            checked += 1
            if memo.stable(c):
                problems.append(f"random #{i}: {c} is stable")
            elif any(not memo.stable(d) for d in below(c)):
                problems.append(f"random #{i}: {c} not minimal")
    return not problems, (f"corpus + 50 random bimolecular CRDs; {checked} random outputs oracle-checked"
                          + (f"; {problems[:3]}" if problems else ""))


def crit_5():
    rng = rng_for(505)
    violations, premises = 0, 0
    for name in NAMES:
        crd = corpus(name)
        memo = Memo(crd)
        for _ in range(1000):
            total = rng.randint(1, 8)
            csize = rng.randint(1, total)
            c = Configuration(random_vector(rng, crd.dim, csize))
            x = Configuration(random_vector(rng, crd.dim, total - csize))
            if not memo.stable(c):
                premises += 1
                if memo.stable(c + x):
                    violations += 1
    return violations == 0, f"4000 pairs, {premises} with unstable c, {violations} violations"


def crit_6():
    violations, t_stable = 0, 0
    for name in NAMES:
        crd = corpus(name)
        for c in enumerate_configurations(crd.dim, 6):
            if is_t_stable(crd, c).stable:
                t_stable += 1
                if not oracle_is_o_stable(crd, c).stable:
                    violations += 1
    return violations == 0, f"{t_stable} t-stable configurations of size <= 6, {violations} not o-stable"


def crit_7():
    problems = []
    runs = 0
    rng = rng_for(707)
    # random CRDs need not be o-stable, so their runs are capped at size 6
    plans = [(corpus(n), None) for n in NAMES] + [(random_crd(rng), 6) for _ in range(50)]
    for crd, cap in plans:
        for backend in ("naive", "tree"):
            result = gen_min_unstable(crd, size_cap=cap, backend=backend)
            runs += 1
            bound = (crd.dim + 1) * len(crd.reactions) * len(result.min_unstable)
            if result.stats.predecessor_computations > bound:
                problems.append(f"budget {result.stats.predecessor_computations} > {bound}")
    big, naive_total, tree_total, worse = 0, 0, 0, 0
    queries, reference = 0, 0.0
    while big < 40:
        dim, pts, s = random_antichain_points(rng, 6, 1500)
        if len(pts) < 256:
            continue
        big += 1
        naive = Antichain(dim, pts, "naive", check=False)
        tree = Antichain(dim, pts, "tree", check=False)
        for _ in range(100):
            q = Configuration(random_vector(rng, dim, rng.randint(0, s + 4)))
            naive.dominates(q)
            tree.dominates(q)
        naive_total += naive.stats.comparisons
        tree_total += tree.stats.comparisons
        if tree.stats.comparisons > naive.stats.comparisons:
            worse += 1
        queries += 100
        # asymptotic per-query reference log^(d - 1/2) n, reported only
        reference += 100 * math.log2(len(pts)) ** max(dim - 0.5, 0)
    if worse:
        problems.append(f"tree > naive on {worse} antichains")
    return not problems, (
        f"budget held on {runs} runs; {big} antichains >= 256, mean comparisons per query "
        f"naive {naive_total / queries:.1f}, tree {tree_total / queries:.1f}, "
        f"tree worse on {worse}; log^(d-1/2) n reference {reference / queries:.0f} (not gated)"
        + (f"; {problems[:3]}" if problems else "")
    )


def crit_8():
    rng = rng_for(808)
    mismatches, hits = 0, 0
    for _ in range(1000):
        dim, pts, s = random_antichain_points(rng, 6, 300)
        naive = Antichain(dim, pts, "naive", check=False)
        tree = Antichain(dim, pts, "tree", check=False)
        for _ in range(100):
            q = Configuration(random_vector(rng, dim, rng.randint(0, s + 4)))
            answer = naive.dominates(q)
            hits += answer
            if answer != tree.dominates(q):
                mismatches += 1
    return mismatches == 0, f"1000 antichains x 100 queries ({hits} dominated), {mismatches} mismatches"


def crit_9():
    wrong = []
    for dim in range(1, 5):
        for k in range(0, 9):
            got = sum(1 for _ in configurations_of_size(dim, k))
            if got != math.comb(dim + k - 1, k):
                wrong.append((dim, k, got))
    return not wrong, f"|C_=k| = C(d+k-1, k) for d <= 4, k <= 8; wrong: {wrong}"


def crit_10():
    rng = rng_for(1010)
    bad = 0
    files = sorted(CORPUS.glob("*.crd"))
    for path in files:
        crd = parse_crd(path.read_text())
        bad += parse_crd(serialize_crd(crd)) != crd
    for _ in range(200):
        crd = fuzzed_crd(rng)
        bad += parse_crd(serialize_crd(crd)) != crd
    pp = "states: A, B\ninputs: A, B\nyes: A\nno: B\ntransitions:\nA, B -> B, A\n"
    crd = import_protocol(parse_protocol(pp))
    mute = len(crd.reactions) == 1 and crd.reactions[0].mute
    return bad == 0 and mute, f"{len(files)} corpus + 200 fuzzed round-trips, {bad} failures; swap imports as mute: {mute}"


def crit_11():
    summary = []
    ok = True
    for name, need in (("existence.crd", 1), ("threshold2.crd", 2)):
        code, out = cli("oracle", CORPUS / name, "--what", "decides", "--max-size", 6, "--format", "json")
        doc = json.loads(out)
        wrong = [row for row in doc["table"]
                 if row["verdict"] != int(row["input"].get("A", 0) >= need)]
        good = code == 0 and doc["ok"] and not wrong and len(doc["table"]) == 27
        ok &= good
        summary.append(f"{name}: yes iff A >= {need} on {len(doc['table'])} inputs: {good}")
    return ok, "; ".join(summary)


CRITERIA = [
    (1, "algorithm equals oracle on corpus", crit_1),
    (2, "batch stability equivalence", crit_2),
    (3, "known antichain values", crit_3),
    (4, "structural properties of outputs", crit_4),
    (5, "upward closure", crit_5),
    (6, "t-stable implies o-stable", crit_6),
    (7, "budget gate and index comparisons", crit_7),
    (8, "index backend equivalence", crit_8),
    (9, "state-count formula", crit_9),
    (10, "parser round-trip and protocol import", crit_10),
    (11, "decider validation", crit_11),
]


def report(number, title, fn):
    ok, summary = fn()
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {title}: {summary}"
    return ok, line


@pytest.mark.parametrize("number, title, fn", CRITERIA, ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, title, fn, capsys):
    ok, line = report(number, title, fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [report(*c) for c in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
