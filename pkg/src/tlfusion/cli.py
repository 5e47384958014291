"""Command-line interface: ``tlfusion verify|fuse|dims|table``.

Records are emitted as JSON lines or as versioned TSV.  Exit status: 0 when
every check passes, 1 when one fails, 2 when a result is inconclusive, 3 on a
configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from collections import OrderedDict
from fractions import Fraction

from . import __version__
from .cache import RecordCache, cache_key
from .config import BACKENDS, FORMATS, RunConfig, load_config
from .scalars import ConfigError, DegenerateScalar

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_CONFIG = 0, 1, 2, 3
TSV_VERSION = 1

TSV_COLUMNS = {
    "verify": ["op", "title", "check", "ok", "detail"],
    "fuse": ["route", "n1", "j1", "n2", "j2", "z1", "relation", "z2", "status", "dim", "result", "u_power",
             "stable_level"],
    "dims": ["N", "j", "dim_TL", "d_j", "affine_dim", "simple_dim", "simple_dim_recursion"],
    "table": ["j1", "relation", "j2", "n1", "n2", "route", "status", "dim", "result"],
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _pair(text: str) -> tuple[int, int]:
    try:
        a, b = text.split(",")
        return int(a), int(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N1,N2, got {text!r}") from None


def _binding(text: str) -> tuple[str, str]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected name=expression, got {text!r}")
    k, v = text.split("=", 1)
    return k.strip(), v.strip()


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("run configuration")
    g.add_argument("--config", help="INI file with [field], [params] and [run] sections")
    g.add_argument("--backend", choices=BACKENDS)
    g.add_argument("--p", type=int, help="prime (modp) or root order (cyclotomic)")
    g.add_argument("--seed", type=int)
    g.add_argument("--format", choices=FORMATS)
    g.add_argument("--cache-dir")
    g.add_argument("--no-cache", action="store_true")
    g.add_argument("--bind", type=_binding, action="append", default=[], metavar="NAME=EXPR",
                   help="bind a parameter, e.g. z1=3 or z2=-q*z1")
    g.add_argument("--radius", type=int, help="word-length bound for affine spans")

    parser = _Parser(prog="tlfusion", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ver = sub.add_parser("verify", help="run a verification suite")
    vsub = ver.add_subparsers(dest="target", required=True, parser_class=_Parser)
    p = vsub.add_parser("tl", parents=[common])
    p.add_argument("--max-n", type=int, default=6)
    p = vsub.add_parser("atl", parents=[common])
    p.add_argument("--max-n", type=int, default=4)
    p = vsub.add_parser("embeddings", parents=[common])
    p.add_argument("--pairs", type=_pair, nargs="+")
    p.add_argument("--max-sum", type=int, default=5)
    p = vsub.add_parser("functors", parents=[common])
    p.add_argument("--max-n", type=int, default=6)
    p = vsub.add_parser("axioms", parents=[common])
    p.add_argument("--pentagon", action="store_true")
    p.add_argument("--hexagon", action="store_true")
    p.add_argument("--semibraiding", action="store_true")
    p.add_argument("--max-site", type=int, default=2)

    fuse = sub.add_parser("fuse", help="fuse two standard modules")
    fsub = fuse.add_subparsers(dest="route", required=True, parser_class=_Parser)
    for route in ("finite", "affine", "affine-hecke"):
        p = fsub.add_parser(route, parents=[common])
        p.add_argument("--n1", type=int, required=True)
        p.add_argument("--j1", required=True)
        p.add_argument("--n2", type=int, required=True)
        p.add_argument("--j2", required=True)
        if route != "finite":
            p.add_argument("--z1", default="z1", help="expression for the first twist (default: seeded draw)")
            p.add_argument("--z2", help="expression for the second twist, e.g. -q*z1")
            p.add_argument("--scan", action="store_true", help="scan the special values of z2 and random ones")
            p.add_argument("--random", type=int, default=5, help="random points in a scan")
            p.add_argument("--both-orders", action="store_true")
            if route == "affine":
                p.add_argument("--chirality", type=int, choices=(1, -1), default=1)

    p = sub.add_parser("dims", parents=[common], help="dimension table")
    p.add_argument("--max-n", type=int, default=10)
    p.add_argument("--root-p", type=int, help="also report simple dimensions at q^(2p)=1 via Gram ranks")

    p = sub.add_parser("table", parents=[common], help="aggregate fuse records into a fusion table")
    p.add_argument("inputs", nargs="*", help="JSON-lines files (default: stdin)")
    return parser


# ----------------------------------------------------------------- commands

def _report_records(op: str, rep) -> list[dict]:
    recs = [{"op": op, "title": rep.title, "check": c.name, "ok": c.ok, "detail": c.detail} for c in rep.checks]
    recs.append({"op": op, "title": rep.title, "check": "summary", "ok": rep.ok,
                 "detail": f"{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} passed"})
    return recs


def _verify(args, cfg: RunConfig) -> list[dict]:
    from . import suites

    field = cfg.field()
    op = f"verify {args.target}"
    if args.target == "tl":
        rep = suites.suite_tl(field, args.max_n)
    elif args.target == "atl":
        rep = suites.suite_atl(field, args.max_n)
    elif args.target == "embeddings":
        rep = suites.suite_embeddings(field, args.max_sum, args.pairs)
    elif args.target == "functors":
        rep = suites.suite_functors(field, args.max_n)
    else:
        chosen = args.pentagon or args.hexagon or args.semibraiding
        rep = suites.suite_axioms(field, args.max_site, do_pentagon=args.pentagon or not chosen,
                                  do_hexagon=args.hexagon or not chosen,
                                  do_semibraiding=args.semibraiding or not chosen)
    return _report_records(op, rep)


def _fuse_record(out, n1, j1, n2, j2, z1="", relation="", z2="") -> dict:
    ident = out.identification
    rec = {"op": "fuse", "route": out.route, "n1": n1, "j1": str(Fraction(j1)), "n2": n2,
           "j2": str(Fraction(j2)), "z1": z1, "relation": relation, "z2": z2, "status": out.status,
           "dim": out.dim, "stable_level": out.induced.stable_level if out.induced is not None and
           hasattr(out.induced, "stable_level") else None}
    if out.decomposition is not None:
        from .modules import fmt_half
        rec["result"] = " + ".join(f"{k}*W_{fmt_half(j)}" if k > 1 else f"W_{fmt_half(j)}"
                                   for j, k in sorted(out.decomposition.items())) or "0"
    elif ident is not None:
        rec["result"] = ident.label()
        rec["u_power"] = None if ident.u_power is None else str(ident.u_power)
        rec["certified"] = ident.certified
    else:
        rec["result"] = "0" if out.status == "zero" else out.status
    return rec


def _fuse(args, cfg: RunConfig) -> tuple[list[dict], int]:
    from .fusion import fuse_affine, fuse_finite, resonance_candidates, scan_resonances
    from .modules import standard_affine, standard_finite

    field = cfg.field()
    if args.route == "finite":
        out = fuse_finite(standard_finite(field, args.n1, args.j1), standard_finite(field, args.n2, args.j2))
        return [_fuse_record(out, args.n1, args.j1, args.n2, args.j2)], EXIT_OK
    route = "hecke" if args.route == "affine-hecke" else "bounded"
    kw = {}
    if route == "bounded":
        kw = {"radius": cfg.radius, "chirality": args.chirality}
    z1 = field.parse(args.z1)
    records = []
    if args.scan:
        rows = scan_resonances(field, args.n1, args.j1, args.n2, args.j2, z1, route, n_random=args.random,
                               seed=cfg.seed, both_orders=args.both_orders, **kw)
        for row in rows:
            rev = row.label.startswith("reverse:")
            lab = row.label.split(":", 1)[1] if rev else row.label
            if rev:
                rec = _fuse_record(row.outcome, args.n2, args.j2, args.n1, args.j1, str(row.z2),
                                   f"reverse:z2={lab}", str(z1))
            else:
                rec = _fuse_record(row.outcome, args.n1, args.j1, args.n2, args.j2, str(z1), f"z2={lab}",
                                   str(row.z2))
            records.append(rec)
    else:
        if args.z2 is None:
            raise ConfigError("--z2 is required unless --scan is given")
        z2 = field.parse(args.z2)
        M1 = standard_affine(field, args.n1, args.j1, z1)
        M2 = standard_affine(field, args.n2, args.j2, z2)
        hints = list(resonance_candidates(field, z1).values()) + [z2]
        hints += [c * z2 for c in resonance_candidates(field, field.one).values()]
        pairs = [(M1, M2, False)] + ([(M2, M1, True)] if args.both_orders else [])
        for A, B, rev in pairs:
            out = fuse_affine(A, B, route, hints=hints, **kw)
            if rev:
                records.append(_fuse_record(out, args.n2, args.j2, args.n1, args.j1, str(z2),
                                            f"reverse:z2={args.z2}", str(z1)))
            else:
                records.append(_fuse_record(out, args.n1, args.j1, args.n2, args.j2, str(z1),
                                            f"z2={args.z2}", str(z2)))
    status = EXIT_INCONCLUSIVE if any(r["status"] == "inconclusive" for r in records) else EXIT_OK
    return records, status


def _dims(args, cfg: RunConfig) -> list[dict]:
    from .suites import dims_table

    return [{"op": "dims", **row} for row in dims_table(args.max_n, args.root_p)]


def _read_records(paths) -> list[dict]:
    streams = [open(p) for p in paths] if paths else [sys.stdin]
    records = []
    try:
        for fh in streams:
            for k, line in enumerate(fh, start=1):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                try:
                    records.append(json.loads(line))
                except json.JSONDecodeError as exc:
                    raise ConfigError(f"{getattr(fh, 'name', '<stdin>')}:{k}: not JSON ({exc.msg})") from None
    finally:
        for fh in streams:
            if fh is not sys.stdin:
                fh.close()
    return records


def fusion_table(records: list[dict]) -> list[dict]:
    """Collapse fuse records to one row per ``(j1, relation, j2)``; later records win."""
    rows: OrderedDict = OrderedDict()
    for r in records:
        if r.get("op") != "fuse":
            continue
        key = (r["j1"], r.get("relation", ""), r["j2"])
        rows[key] = {"j1": r["j1"], "relation": r.get("relation", ""), "j2": r["j2"], "n1": r["n1"],
                     "n2": r["n2"], "route": r["route"], "status": r["status"], "dim": r["dim"],
                     "result": r.get("result", "")}
    return [rows[k] for k in sorted(rows, key=lambda k: (Fraction(k[0]), Fraction(k[2]), k[1]))]


# ----------------------------------------------------------------- output

def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "1" if v else "0"
    return str(v).replace("\t", " ").replace("\n", " ")


def emit(records: list[dict], fmt: str, kind: str, stream=None) -> None:
    stream = stream or sys.stdout
    if fmt == "json":
        for r in records:
            stream.write(json.dumps(r, sort_keys=True) + "\n")
        return
    cols = TSV_COLUMNS[kind]
    stream.write(f"# tlfusion-tsv v{TSV_VERSION} {kind}\n")
    stream.write("\t".join(cols) + "\n")
    for r in records:
        stream.write("\t".join(_cell(r.get(c)) for c in cols) + "\n")


def _params_for_key(args) -> dict:
    skip = {"config", "backend", "p", "seed", "format", "cache_dir", "no_cache", "bind", "radius"}
    return {k: v for k, v in sorted(vars(args).items()) if k not in skip}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        overrides = {"backend": args.backend, "p": args.p, "seed": args.seed, "format": args.format,
                     "cache_dir": args.cache_dir, "radius": args.radius,
                     "params": dict(args.bind) if args.bind else None}
        cfg = load_config(args.config, overrides)
        if args.no_cache:
            cfg.cache_dir = None
        op = args.command if args.command != "verify" else f"verify {args.target}"
        kind = args.command
        if args.command == "table":
            emit(fusion_table(_read_records(args.inputs)), cfg.format, "table")
            return EXIT_OK
        cache = RecordCache(cfg.cache_dir)
        key = cache_key(op, _params_for_key(args), {**cfg.fingerprint(), "radius": cfg.radius})

        def compute():
            if args.command == "verify":
                recs = _verify(args, cfg)
            elif args.command == "fuse":
                recs, _ = _fuse(args, cfg)
            else:
                recs = _dims(args, cfg)
            return recs

        records, _ = cache.fetch(key, compute)
    except (ConfigError, DegenerateScalar, OSError) as exc:
        print(f"tlfusion: configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    emit(records, cfg.format, kind)
    if kind == "verify":
        return EXIT_OK if all(r["ok"] for r in records) else EXIT_FAIL
    if kind == "fuse" and any(r["status"] == "inconclusive" for r in records):
        return EXIT_INCONCLUSIVE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
