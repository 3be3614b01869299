"""Command-line front end.

Exit codes: 0 success, 1 verification failure, 2 usage or format error,
3 search exhaustion (no plan or no algorithm within the limits).
Results go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import logging
import sys
from dataclasses import replace

from . import synthesis
from .bilinear import verify
from .bounds import BoundTable
from .elliptic import EllipticCurve
from .interchange import FormatError, dump, dumps, load, loads_constants

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_SEARCH = 0, 1, 2, 3

log = logging.getLogger("bilinalg")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="bilinalg", description="Bilinear multiplication algorithms over finite fields.")
    p.add_argument("--seed", type=int, default=0, help="seed for point sampling (default 0)")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    s = sub.add_parser("synth", help="synthesize an algorithm for A_q(m, l)")
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--l", type=int, default=1)
    s.add_argument("--genus", type=int, choices=(0, 1))
    s.add_argument("--case", choices=("a", "b", "c", "d"))
    s.add_argument("--sym", action="store_true")
    s.add_argument("--out")

    v = sub.add_parser("verify", help="check an algorithm file on all basis pairs")
    v.add_argument("file")

    r = sub.add_parser("rank", help="brute-force (symmetric) bilinear rank")
    r.add_argument("--q", type=int, required=True)
    r.add_argument("--dim", type=int, required=True)
    r.add_argument("--constants", required=True)
    r.add_argument("--cap", type=int, required=True)
    r.add_argument("--sym", action="store_true")

    t = sub.add_parser("table", help="best-known bounds up to ml <= N")
    t.add_argument("--q", type=int, required=True)
    t.add_argument("--max-ml", type=int, required=True)
    t.add_argument("--export", metavar="DIR")

    f = sub.add_parser("fixture", help="run a named reproduction")
    f.add_argument("name")
    return p


def _synth(args, table: BoundTable):
    q, m, l, sym = args.q, args.m, args.l, args.sym
    if args.genus is None and args.case is None:
        return table.algorithm(q, m, l, sym)
    if args.genus == 0 and args.case is not None:
        raise synthesis.PreconditionError("--case applies to genus 1 only")
    if args.genus == 0:
        if 2 * m * l - 1 <= q + 1:
            plan = synthesis.genus0_plan(q, m, l)
        else:
            cert = table._genus0_cells(q, m, l, sym)
            if cert is None:
                raise synthesis.SearchExhausted(f"no genus-0 plan for A_{q}({m},{l})")
            plan = synthesis.genus0_plan(q, m, l, dict(cert.info()["multiset"]))
        if not sym:
            plan = replace(plan, symmetric=False)
        return synthesis.assemble(plan, table._inner)
    certs = [c for c in table._genus1(q, m, l, sym)
             if args.case is None or c.info()["case"] == args.case]
    if not certs:
        raise synthesis.SearchExhausted(f"no genus-1 plan for A_{q}({m},{l})"
                                        + (f" in case {args.case}" if args.case else ""))
    cert = min(certs, key=lambda c: c.bound)
    info = cert.info()
    C = EllipticCurve(q, info["curve"])
    ms = dict(info["multiset"])
    Q = C.find_point_of_degree(m, args.seed)
    if info["case"] == "search":
        G = synthesis.select_points(C, ms, avoid=Q)
        plan, _ = synthesis.search_plan(C, m, l, G, symmetric=True, Q=Q, seed=args.seed)
    else:
        plan = synthesis.genus1_plan(C, m, l, ms, info["case"], seed=args.seed, Q=Q)
    if not sym:
        plan = replace(plan, symmetric=False)
    log.info("plan: %s", plan.describe())
    return synthesis.assemble(plan, table._inner)


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s", stream=sys.stderr)
    table = BoundTable()
    try:
        if args.cmd == "synth":
            alg = _synth(args, table)
            print(f"length {alg.length}", file=sys.stderr)
            if args.out:
                dump(alg, args.out)
                print(f"{args.out}\t{alg.length}")
            else:
                sys.stdout.write(dumps(alg))
            return EXIT_OK
        if args.cmd == "verify":
            alg = load(args.file)
            res = verify(alg)
            if res:
                print(f"OK\t{alg.length}")
                return EXIT_OK
            a, b = res.pair
            print(f"FAIL\t{a}\t{b}")
            print(f"product e_{a} * e_{b} is wrong", file=sys.stderr)
            return EXIT_FAIL
        if args.cmd == "rank":
            from .rank import brute_force_rank

            with open(args.constants) as fh:
                A = loads_constants(fh.read(), args.q, args.dim)
            res = brute_force_rank(A, args.cap, symmetric=args.sym)
            if res.rank is None:
                print(f">{args.cap}")
                return EXIT_SEARCH
            print(res.rank)
            return EXIT_OK
        if args.cmd == "table":
            table.build_range(args.q, args.max_ml)
            print("q\tm\tl\tsym\tbound\tstrategy")
            for row in table.rows():
                if row[0] == args.q:
                    print("\t".join(map(str, row)))
            if args.export:
                for path in table.export(args.export, q=args.q):
                    log.info("wrote %s", path)
            return EXIT_OK
        if args.cmd == "fixture":
            from .fixtures import FIXTURES, reproduce_fixture

            if args.name not in FIXTURES:
                print(f"unknown fixture {args.name!r}; known: {', '.join(FIXTURES)}", file=sys.stderr)
                return EXIT_USAGE
            kw = {"seed": args.seed} if args.name in ("mu2-163", "mu3-97") else {}
            rep = reproduce_fixture(args.name, **kw)
            print("fixture\tlabel\ttarget\tachieved\tverified")
            print("\n".join(rep.lines()))
            for k, val in rep.notes.items():
                print(f"{k}: {val}", file=sys.stderr)
            print(f"{rep.seconds:.2f}s", file=sys.stderr)
            return EXIT_OK if rep.ok else EXIT_FAIL
    except (FormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (synthesis.SearchExhausted, synthesis.PreconditionError) as exc:
        print(f"search exhausted: {exc}", file=sys.stderr)
        return EXIT_SEARCH
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
