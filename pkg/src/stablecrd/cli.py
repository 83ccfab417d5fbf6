"""Command-line interface: ``stablecrd <command> FILE ...``.

Exit codes: 0 success, 1 comparison mismatch, 2 parse or input error,
3 search cap hit, 4 unsupported CRD class, 5 query a truncated min(U)
cannot certify. Results go to stdout, diagnostics to stderr.
"""

import argparse
import json
import sys

from .errors import (
    CapExceededError,
    ParseError,
    UncertifiableError,
    UnsupportedClassError,
)
from .index import BACKENDS
from .minu import (
    DEFAULT_ELEMENT_CAP,
    check_o_stable,
    gen_min_unstable,
    has_annihilation,
    require_supported,
)
from .model import Verdict, classify
from .oracle import (
    DEFAULT_CAP,
    enumerate_configurations,
    is_t_stable,
    oracle_decides,
    oracle_is_o_stable,
    oracle_min_unstable,
    require_mass_bounded,
)
from .textio import (
    CacheMismatchError,
    SCHEMA,
    antichain_to_json,
    config_to_json,
    decides_to_json,
    emit_json,
    format_config,
    gen_result_from_json,
    load_crd,
    parse_config,
    render_document,
    stability_table_to_json,
    verdict_to_json,
)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_CAP = 3
EXIT_UNSUPPORTED = 4
EXIT_UNCERTIFIABLE = 5

CAVEAT = "note: min(U) is exact only if the CRD is o-stable; this is assumed, not checked"
ANNIHILATION_WARNING = (
    "warning: a reaction has no products; the zero configuration is reachable and "
    "o-unstable configurations need not be closed upward"
)


class _Exit(Exception):
    def __init__(self, code, message=None):
        super().__init__(message)
        self.code = code
        self.message = message


def _err(msg):
    print(msg, file=sys.stderr)


def _load(path):
    try:
        return load_crd(path)
    except ParseError as exc:
        raise _Exit(EXIT_INPUT, str(exc))
    except OSError as exc:
        raise _Exit(EXIT_INPUT, f"{path}: {exc.strerror or exc}")


def _positive(text):
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _gen(crd, args):
    require_supported(crd)
    _err(CAVEAT)
    if has_annihilation(crd):
        _err(ANNIHILATION_WARNING)
    return gen_min_unstable(crd, args.size_cap, args.element_cap, args.index, threads=None)


def _plural(n, word):
    return f"{n} {word}" if n == 1 or word.endswith("s") else f"{n} {word}s"


def cmd_validate(args):
    crd = _load(args.file)
    names = crd.species.names
    mute = sum(rxn.mute for rxn in crd.reactions)
    imported = " (imported protocol)" if str(args.file).endswith(".pp") else ""
    print(f"{args.file}{imported}: {classify(crd).label}, "
          f"{_plural(crd.dim, 'species')}, "
          f"{_plural(len(crd.reactions), 'reaction')}")
    print("inputs: " + ", ".join(names[i] for i in sorted(crd.inputs)))
    print("yes voters: " + ", ".join(names[i] for i in crd.voters(1)))
    print("no voters: " + ", ".join(names[i] for i in crd.voters(0)))
    print(f"mute reactions: {mute}")
    if has_annihilation(crd):
        _err(ANNIHILATION_WARNING)
    return EXIT_OK


def cmd_minu(args):
    crd = _load(args.file)
    result = _gen(crd, args)
    if args.format == "json":
        sys.stdout.write(emit_json(result, crd=crd))
    else:
        table = crd.species
        elements = result.canonical_list()
        status = " (TRUNCATED)" if result.truncated else ""
        print(f"min(U) for {args.file}: {_plural(len(elements), 'configuration')}{status}")
        for c in elements:
            print("  " + format_config(c, table))
        print("layers: " + " ".join(f"{k}:{n}" for k, n in result.stats.layers))
        print(f"comparisons: {result.stats.comparisons}")
        print(f"predecessor computations: {result.stats.predecessor_computations}")
        print(f"wall time: {result.stats.wall_time:.4f} s")
    if result.truncated:
        _err(f"cap hit: result complete only through size {result.complete_through}")
        return EXIT_CAP
    return EXIT_OK


def _parse_literals(literals, crd):
    configs = []
    for text in literals:
        try:
            c = parse_config(text, crd.species)
        except ParseError as exc:
            raise _Exit(EXIT_INPUT, f"bad configuration {text!r}: {exc}")
        if c.is_zero():
            raise _Exit(EXIT_INPUT, f"bad configuration {text!r}: the zero configuration has no stability status")
        configs.append(c)
    return configs


def cmd_check(args):
    crd = _load(args.file)
    configs = _parse_literals(args.configs, crd)
    table = crd.species
    code = EXIT_OK
    if args.mode == "t":
        verdicts = [is_t_stable(crd, c) for c in configs]
    else:
        if args.minu:
            require_supported(crd)
            try:
                with open(args.minu, encoding="utf-8") as fh:
                    result = gen_result_from_json(fh.read(), crd)
            except (OSError, ValueError, KeyError, CacheMismatchError) as exc:
                raise _Exit(EXIT_INPUT, f"{args.minu}: {exc}")
        else:
            result = _gen(crd, args)
        verdicts = []
        for c in configs:
            try:
                verdicts.append((c, check_o_stable(result, c)))
            except UncertifiableError as exc:
                _err(f"{format_config(c, table)}: {exc}")
                verdicts.append((c, None))
                code = EXIT_UNCERTIFIABLE
    for item in verdicts:
        if args.mode == "t":
            c, stable, obj = item.config, item.stable, verdict_to_json(item, table)
        else:
            c, stable = item
            if stable is None:
                continue
            obj = {"config": config_to_json(c, table), "o_stable": stable}
        if args.format == "json":
            print(json.dumps(obj, separators=(",", ":")))
        else:
            word = f"{args.mode}-stable" if stable else f"{args.mode}-unstable"
            print(f"{format_config(c, table)}: {word}")
    return code


def _verdict_word(v):
    return {Verdict.YES: "yes", Verdict.NO: "no", Verdict.UND: "und"}[v]


def cmd_oracle(args):
    crd = _load(args.file)
    require_mass_bounded(crd)
    table = crd.species
    if args.what == "minu":
        anti = oracle_min_unstable(crd, args.max_size, args.cap)
        if args.format == "json":
            doc = {"schema": SCHEMA, "kind": "min_unstable", "source": "oracle",
                   "max_size": args.max_size, "species": list(table.names),
                   "min_unstable": antichain_to_json(anti, table)}
            sys.stdout.write(render_document(doc))
        else:
            print(f"min(U) up to size {args.max_size} (exhaustive): {_plural(len(anti), 'configuration')}")
            for c in anti.canonical_list():
                print("  " + format_config(c, table))
    elif args.what == "stability":
        verdicts = []
        for c in enumerate_configurations(crd.dim, args.max_size):
            if args.mode == "t":
                verdicts.append(is_t_stable(crd, c))
            else:
                verdicts.append(oracle_is_o_stable(crd, c, args.cap))
        if args.format == "json":
            sys.stdout.write(render_document(stability_table_to_json(verdicts, crd, args.mode, args.max_size)))
        else:
            for v in verdicts:
                word = "stable" if v.stable else "unstable"
                print(f"{format_config(v.config, table)}: {args.mode}-{word}")
    else:
        report = oracle_decides(crd, args.max_size, args.mode, args.cap)
        if args.format == "json":
            sys.stdout.write(render_document(decides_to_json(report, crd)))
        else:
            inputs = sorted(crd.inputs)
            for proj, verdict in report.table.items():
                counts = [0] * crd.dim
                for pos, n in zip(inputs, proj):
                    counts[pos] = n
                print(f"{format_config(crd.config(counts), table)} -> {_verdict_word(verdict)}")
            if report.ok:
                print(f"OK: {args.mode}-stably decides on all inputs up to size {args.max_size}")
            else:
                x = report.counterexample
                print(f"FAIL: from {format_config(x.initial, table)}: {x.reason} "
                      f"at {format_config(x.config, table)}"
                      + (f" and {format_config(x.other, table)}" if x.other is not None else ""))
    return EXIT_OK


def cmd_compare(args):
    crd = _load(args.file)
    result = _gen(crd, args)
    k = args.max_size
    if result.truncated and (result.complete_through or 0) < k:
        _err(f"cap hit: result complete only through size {result.complete_through}")
        return EXIT_CAP
    fast = {c for c in result.min_unstable if c.size <= k}
    if args.golden:
        try:
            with open(args.golden, encoding="utf-8") as fh:
                doc = json.load(fh)
            reference = {crd.config(obj) for obj in doc["min_unstable"]}
        except (OSError, ValueError, KeyError) as exc:
            raise _Exit(EXIT_INPUT, f"{args.golden}: {exc}")
        reference = {c for c in reference if c.size <= k}
        label = "golden"
    else:
        reference = set(oracle_min_unstable(crd, k, args.cap))
        label = "oracle"
    table = crd.species
    if fast == reference:
        print(f"PASS: {args.file}: {_plural(len(fast), 'configuration')} up to size {k} match the {label}")
        return EXIT_OK
    print(f"FAIL: {args.file}: algorithm and {label} differ up to size {k}")
    for c in sorted(reference - fast, key=lambda x: x.sort_key()):
        print(f"- {format_config(c, table)}  (only in {label})")
    for c in sorted(fast - reference, key=lambda x: x.sort_key()):
        print(f"+ {format_config(c, table)}  (only in algorithm)")
    return EXIT_MISMATCH


def build_parser():
    parser = argparse.ArgumentParser(
        prog="stablecrd",
        description="Output stability of chemical reaction deciders via minimal unstable configurations.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def gen_flags(p):
        p.add_argument("--index", choices=BACKENDS, default="auto", help="dominance index backend")
        p.add_argument("--size-cap", type=_positive, default=None)
        p.add_argument("--element-cap", type=_positive, default=DEFAULT_ELEMENT_CAP)

    p = sub.add_parser("validate", help="parse a .crd/.pp file and summarize it")
    p.add_argument("file")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("minu", help="compute min(U) with the size-ordered generation")
    p.add_argument("file")
    gen_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_minu)

    p = sub.add_parser("check", help="o- or t-stability of configuration literals")
    p.add_argument("file")
    p.add_argument("configs", nargs="+", metavar="CONFIG", help="e.g. '2A + B'")
    p.add_argument("--mode", choices=("o", "t"), default="o")
    p.add_argument("--minu", metavar="JSON", help="cached output of 'minu --format json'")
    gen_flags(p)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("oracle", help="exhaustive reachability ground truth")
    p.add_argument("file")
    p.add_argument("--max-size", type=_positive, required=True)
    p.add_argument("--what", choices=("minu", "stability", "decides"), default="minu")
    p.add_argument("--mode", choices=("o", "t"), default="o")
    p.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="diff generated min(U) against the oracle")
    p.add_argument("file")
    p.add_argument("--max-size", type=_positive, required=True)
    p.add_argument("--golden", metavar="JSON", help="compare against a stored result instead")
    p.add_argument("--cap", type=_positive, default=DEFAULT_CAP)
    gen_flags(p)
    p.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except _Exit as exc:
        if exc.message:
            _err(exc.message)
        return exc.code
    except UnsupportedClassError as exc:
        _err(f"unsupported CRD: {exc}")
        return EXIT_UNSUPPORTED
    except CapExceededError as exc:
        _err(f"cap exceeded: {exc}")
        return EXIT_CAP
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INPUT
