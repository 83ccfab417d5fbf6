"""Reading and writing CRDs, protocol tables, configurations and reports.

CRD files (``.crd``) are line oriented::

    # decides "at least one A"
    species: A, B, Y
    inputs: A, B
    yes: A, Y
    no: B
    reactions:
    A + B -> A + Y

Protocol files (``.pp``) use ``states:`` and ``transitions:`` instead, with
one ordered transition ``A, B -> C, D`` per line. Unlisted pairs do nothing.

JSON reports follow the ``stablecrd/1`` schema: configurations are objects
mapping species names to positive counts in declaration order.
"""

from __future__ import annotations

import hashlib
import json
import re
from dataclasses import dataclass, field

from .errors import ParseError, StableCrdError
from .index import Antichain, canonical_list
from .minu import GenResult, GenStats
from .model import Configuration, Crd, Reaction, SpeciesTable, Verdict, classify
from .oracle import DecidesReport, StabilityVerdict

SCHEMA = "stablecrd/1"
IDENT = re.compile(r"[A-Za-z][A-Za-z0-9_]*\Z")
TERM = re.compile(r"\s*(?:(\d+)\s*)?([A-Za-z][A-Za-z0-9_]*)\s*\Z")


class CacheMismatchError(StableCrdError):
    pass


@dataclass
class _Item:
    text: str
    line: int
    col: int


class _Diagnostics(list):
    def add(self, line, col, msg):
        self.append((line, col, msg))


def _strip_comment(raw):
    pos = raw.find("#")
    return raw if pos < 0 else raw[:pos]


def _split_items(text, line, col0, sep=","):
    """Split ``text`` on ``sep`` keeping 1-based columns of each stripped item."""
    items = []
    offset = 0
    for part in text.split(sep):
        stripped = part.strip()
        if stripped:
            lead = len(part) - len(part.lstrip())
            items.append(_Item(stripped, line, col0 + offset + lead))
        offset += len(part) + len(sep)
    return items


def _parse_side(text, line, col0, table, diags):
    """Parse ``2A + B`` (or ``0``) into a count vector; None on error."""
    counts = [0] * len(table) if table is not None else None
    if text.strip() == "0":
        return counts
    ok = True
    terms = []
    if text.strip():
        offset = 0
        for part in text.split("+"):
            if not part.strip():
                diags.add(line, col0 + offset, "empty term")
                ok = False
            offset += len(part) + 1
    for item in _split_items(text, line, col0, "+"):
        m = TERM.match(item.text)
        if not m:
            diags.add(item.line, item.col, f"malformed term {item.text!r}")
            ok = False
            continue
        mult = int(m.group(1)) if m.group(1) is not None else 1
        if mult <= 0:
            diags.add(item.line, item.col, f"multiplicity must be positive in {item.text!r}")
            ok = False
            continue
        terms.append((mult, m.group(2), item))
    if not terms and ok:
        diags.add(line, col0, "empty side; write 0 for no molecules")
        return None
    for mult, name, item in terms:
        if table is None:
            continue
        if name not in table:
            diags.add(item.line, item.col, f"undeclared species {name!r}")
            ok = False
            continue
        counts[table.position(name)] += mult
    return counts if ok else None


def _headers(text, allowed, body_key):
    """Split source into header entries and body lines (those after ``body_key:``)."""
    headers = {key: [] for key in allowed}
    body = []
    diags = _Diagnostics()
    in_body = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip_comment(raw)
        if not line.strip():
            continue
        m = re.match(r"\s*([A-Za-z_]+)\s*:", line)
        if m and "->" not in line[:m.end()]:
            key = m.group(1)
            rest = line[m.end():]
            col = m.end() + 1
            if key == body_key:
                in_body = True
                if rest.strip():
                    body.append((lineno, col, rest))
            elif key in headers:
                headers[key].append((lineno, col, rest))
            else:
                diags.add(lineno, m.start(1) + 1, f"unknown section {key!r}")
            continue
        if in_body:
            body.append((lineno, 1, line))
        else:
            lead = len(line) - len(line.lstrip())
            diags.add(lineno, lead + 1, f"unexpected line before '{body_key}:'")
    return headers, body, diags


def _declare(entries, key, diags):
    names, seen = [], {}
    for lineno, col, rest in entries:
        for item in _split_items(rest, lineno, col):
            if not IDENT.match(item.text):
                diags.add(item.line, item.col, f"invalid identifier {item.text!r}")
            elif item.text in seen:
                diags.add(item.line, item.col, f"duplicate {key} declaration {item.text!r}")
            else:
                seen[item.text] = item
                names.append(item.text)
    return names, seen


def _resolve_decider(headers, names, decl, diags, what):
    """Check inputs and votes against the declared names."""
    table = None
    if not names:
        diags.add(1, 1, f"no {what} declared")
    else:
        table = SpeciesTable(tuple(names))
    inputs = set()
    votes = {}
    for lineno, col, rest in headers["inputs"]:
        for item in _split_items(rest, lineno, col):
            if item.text not in decl:
                diags.add(item.line, item.col, f"undeclared species {item.text!r} in inputs")
            elif table is not None:
                inputs.add(table.position(item.text))
    for key, vote in (("yes", 1), ("no", 0)):
        for lineno, col, rest in headers[key]:
            for item in _split_items(rest, lineno, col):
                if item.text not in decl:
                    diags.add(item.line, item.col, f"undeclared species {item.text!r} in votes")
                elif item.text in votes:
                    diags.add(item.line, item.col, f"species {item.text} voted twice")
                else:
                    votes[item.text] = vote
    for name in names:
        if name not in votes:
            item = decl[name]
            diags.add(item.line, item.col, f"species {name} has no vote")
    return table, inputs, votes


def parse_crd(text: str, source: str | None = None) -> Crd:
    headers, body, diags = _headers(text, ("species", "inputs", "yes", "no"), "reactions")
    names, decl = _declare(headers["species"], "species", diags)
    table, inputs, votes = _resolve_decider(headers, names, decl, diags, "species")
    reactions = []
    for lineno, col, line in body:
        if line.count("->") != 1:
            lead = len(line) - len(line.lstrip())
            diags.add(lineno, col + lead, "expected exactly one '->' in reaction")
            continue
        left, right = line.split("->")
        r = _parse_side(left, lineno, col, table, diags)
        p = _parse_side(right, lineno, col + len(left) + 2, table, diags)
        if r is not None and p is not None and table is not None:
            if not any(r):
                diags.add(lineno, col, "reaction without reactants")
                continue
            reactions.append(Reaction(Configuration(r), Configuration(p)))
    if diags:
        raise ParseError(sorted(diags), source)
    return Crd(table, tuple(reactions), frozenset(inputs), tuple(votes[n] for n in names))


def format_config(c: Configuration, table: SpeciesTable) -> str:
    terms = [name if n == 1 else f"{n}{name}" for name, n in zip(table.names, c.counts) if n]
    return " + ".join(terms) if terms else "0"


def parse_config(text: str, table: SpeciesTable) -> Configuration:
    diags = _Diagnostics()
    counts = _parse_side(text, 1, 1, table, diags)
    if diags or counts is None:
        raise ParseError(diags or [(1, 1, "malformed configuration")])
    return Configuration(counts)


def format_reaction(rxn: Reaction, table: SpeciesTable) -> str:
    return f"{format_config(rxn.reactants, table)} -> {format_config(rxn.products, table)}"


def serialize_crd(crd: Crd) -> str:
    names = crd.species.names
    lines = [
        "species: " + ", ".join(names),
        "inputs: " + ", ".join(names[i] for i in sorted(crd.inputs)),
        "yes: " + ", ".join(names[i] for i in crd.voters(1)),
        "no: " + ", ".join(names[i] for i in crd.voters(0)),
        "reactions:",
    ]
    lines.extend(format_reaction(rxn, crd.species) for rxn in crd.reactions)
    return "\n".join(lines) + "\n"


def crd_hash(crd: Crd) -> str:
    return hashlib.sha256(serialize_crd(crd).encode("utf-8")).hexdigest()


@dataclass
class ProtocolTable:
    """A population protocol: ordered pairs of states mapped to ordered pairs."""

    states: SpeciesTable
    delta: dict[tuple[str, str], tuple[str, str]] = field(default_factory=dict)
    inputs: frozenset[str] = frozenset()
    votes: dict[str, int] = field(default_factory=dict)


def parse_protocol(text: str, source: str | None = None) -> ProtocolTable:
    headers, body, diags = _headers(text, ("states", "inputs", "yes", "no"), "transitions")
    names, decl = _declare(headers["states"], "state", diags)
    table, inputs, votes = _resolve_decider(headers, names, decl, diags, "states")
    delta = {}
    for lineno, col, line in body:
        if line.count("->") != 1:
            diags.add(lineno, col, "expected 'A, B -> C, D'")
            continue
        left, right = line.split("->")
        lhs = _split_items(left, lineno, col)
        rhs = _split_items(right, lineno, col + len(left) + 2)
        if len(lhs) != 2 or len(rhs) != 2:
            diags.add(lineno, col, "transition needs exactly two states on each side")
            continue
        bad = [it for it in lhs + rhs if it.text not in decl]
        for it in bad:
            diags.add(it.line, it.col, f"undeclared state {it.text!r}")
        if bad:
            continue
        key = (lhs[0].text, lhs[1].text)
        val = (rhs[0].text, rhs[1].text)
        if key in delta and delta[key] != val:
            diags.add(lineno, col, f"conflicting transitions for ({key[0]}, {key[1]})")
            continue
        delta[key] = val
    if diags:
        raise ParseError(sorted(diags), source)
    return ProtocolTable(
        table, delta, frozenset(table.names[i] for i in inputs), dict(votes)
    )


def import_protocol(table: ProtocolTable) -> Crd:
    """One bimolecular reaction per listed transition, duplicates merged.

    A transition whose output pair is a permutation of its input pair is
    kept as a mute reaction.
    """
    states = table.states
    for pair in list(table.delta) + list(table.delta.values()):
        for s in pair:
            if s not in states:
                raise ParseError([(0, 0, f"undeclared state {s!r}")])
    for s in list(table.inputs) + list(table.votes):
        if s not in states:
            raise ParseError([(0, 0, f"undeclared state {s!r}")])
    missing = [s for s in states.names if s not in table.votes]
    if missing:
        raise ParseError([(0, 0, f"species {s} has no vote") for s in missing])
    dim = len(states)
    reactions = []
    seen = set()
    for (a, b), (c, d) in table.delta.items():
        r = Configuration.unit(dim, states.position(a)) + Configuration.unit(dim, states.position(b))
        p = Configuration.unit(dim, states.position(c)) + Configuration.unit(dim, states.position(d))
        if (r, p) in seen:
            continue
        seen.add((r, p))
        reactions.append(Reaction(r, p))
    return Crd(
        states,
        tuple(reactions),
        frozenset(states.position(s) for s in table.inputs),
        tuple(table.votes[s] for s in states.names),
    )


def load_crd(path) -> Crd:
    """Read a ``.crd`` file, or a ``.pp`` protocol file converted to a CRD."""
    path = str(path)
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    if path.endswith(".pp"):
        return import_protocol(parse_protocol(text, path))
    return parse_crd(text, path)


# JSON

def config_to_json(c: Configuration, table: SpeciesTable) -> dict:
    return {name: n for name, n in zip(table.names, c.counts) if n}


def config_from_json(obj: dict, table: SpeciesTable) -> Configuration:
    return Configuration.from_mapping(table, obj)


def antichain_to_json(configs, table: SpeciesTable) -> list:
    return [config_to_json(c, table) for c in canonical_list(configs)]


def verdict_to_json(v: StabilityVerdict, table: SpeciesTable) -> dict:
    out = {"config": config_to_json(v.config, table), f"{v.kind}_stable": v.stable}
    if v.witness is not None:
        out["witness"] = [{"reaction": i, "config": config_to_json(c, table)} for i, c in v.witness]
    return out


def _verdict_value(v: Verdict):
    return v.value


def gen_result_to_json(result: GenResult, crd: Crd | None = None) -> dict:
    crd = crd or result.crd
    table = crd.species
    return {
        "schema": SCHEMA,
        "kind": "min_unstable",
        "crd_hash": crd_hash(crd),
        "species": list(table.names),
        "class": classify(crd).label,
        "truncated": result.truncated,
        "complete_through": result.complete_through,
        "stats": {
            "comparisons": result.stats.comparisons,
            "predecessor_computations": result.stats.predecessor_computations,
            "layers": [list(layer) for layer in result.stats.layers],
        },
        "min_unstable": antichain_to_json(result.min_unstable, table),
    }


def gen_result_from_json(text: str, crd: Crd) -> GenResult:
    """Rebuild a cached result; rejects caches made for a different CRD."""
    doc = json.loads(text)
    if doc.get("schema") != SCHEMA or doc.get("kind") != "min_unstable":
        raise CacheMismatchError(f"not a {SCHEMA} min_unstable document")
    if doc.get("crd_hash") != crd_hash(crd):
        raise CacheMismatchError("cached min(U) was computed for a different CRD")
    table = crd.species
    elements = [config_from_json(obj, table) for obj in doc["min_unstable"]]
    stats = doc.get("stats", {})
    gen_stats = GenStats(
        stats.get("comparisons", 0),
        stats.get("predecessor_computations", 0),
        [tuple(x) for x in stats.get("layers", [])],
    )
    return GenResult(Antichain(crd.dim, elements), gen_stats, doc["truncated"],
                     doc["complete_through"], crd)


def decides_to_json(report: DecidesReport, crd: Crd) -> dict:
    table = crd.species
    inputs = sorted(crd.inputs)
    rows = []
    for proj, verdict in report.table.items():
        counts = [0] * crd.dim
        for pos, n in zip(inputs, proj):
            counts[pos] = n
        rows.append({"input": config_to_json(Configuration(counts), table),
                     "verdict": _verdict_value(verdict)})
    ce = None
    if report.counterexample is not None:
        x = report.counterexample
        ce = {"initial": config_to_json(x.initial, table), "config": config_to_json(x.config, table),
              "reason": x.reason}
        if x.other is not None:
            ce["other"] = config_to_json(x.other, table)
    return {
        "schema": SCHEMA,
        "kind": "decides",
        "mode": report.mode,
        "max_size": report.max_size,
        "species": list(table.names),
        "ok": report.ok,
        "counterexample": ce,
        "table": rows,
    }


def stability_table_to_json(verdicts, crd: Crd, mode: str, max_size: int) -> dict:
    return {
        "schema": SCHEMA,
        "kind": "stability",
        "mode": mode,
        "max_size": max_size,
        "species": list(crd.species.names),
        "verdicts": [verdict_to_json(v, crd.species) for v in verdicts],
    }


def _compact(obj):
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False)


def render_document(doc: dict) -> str:
    """Pretty-print a report with one array element per line."""
    lines = ["{"]
    items = list(doc.items())
    for i, (key, value) in enumerate(items):
        comma = "," if i < len(items) - 1 else ""
        if isinstance(value, list) and value and isinstance(value[0], dict):
            inner = ",\n".join("    " + _compact(x) for x in value)
            lines.append(f"  {json.dumps(key)}: [\n{inner}\n  ]{comma}")
        else:
            lines.append(f"  {json.dumps(key)}: {_compact(value)}{comma}")
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_json(report, table: SpeciesTable | None = None, crd: Crd | None = None) -> str:
    """Serialize a result object to newline-terminated JSON text.

    Antichains and single verdicts are written compactly; whole reports
    (min(U) results, decides tables) as multi-line documents.
    """
    if crd is not None and table is None:
        table = crd.species
    if isinstance(report, GenResult):
        return render_document(gen_result_to_json(report, crd))
    if isinstance(report, DecidesReport):
        if crd is None:
            raise ValueError("a decides report needs its CRD")
        return render_document(decides_to_json(report, crd))
    if isinstance(report, StabilityVerdict):
        return _compact(verdict_to_json(report, table)) + "\n"
    if isinstance(report, (Antichain, list, set, frozenset)):
        return _compact(antichain_to_json(report, table)) + "\n"
    raise TypeError(f"cannot serialize {type(report).__name__}")
