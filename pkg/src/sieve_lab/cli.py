"""Command line front end: ``sieve-lab <subcommand> ...``.

Exit codes: 0 success, 1 table mismatch, 2 precondition violated, 3 resource ceiling.
"""

from __future__ import annotations

import argparse
import csv
import decimal
import io
import json
import sys
from contextlib import contextmanager
from fractions import Fraction

from sieve_lab import cycle as cyc
from sieve_lab.census import (
    Constellation,
    default_threads,
    p0_asymptotic,
    p0_full_model,
    scan_census,
)
from sieve_lab.dynamics import (
    asymptotic_weight,
    normalize,
    propagate_diagonal,
    propagate_trace,
    required_seed,
    winf,
)
from sieve_lab.errors import PreconditionError, ResourceCeilingError
from sieve_lab.polignac import RepetitionSpec, report
from sieve_lab.primecensus import count_among_primes

EXIT_OK, EXIT_MISMATCH, EXIT_PRECONDITION, EXIT_CEILING = 0, 1, 2, 3

# (s, |s|, j1, J, p0, n(p0#), w-infinity) as published
TABLE1 = [
    ("2,4,2", 8, 3, 3, 5, (1,), Fraction(1)),
    ("4,2,4", 10, 3, 3, 5, (2,), Fraction(2)),
    ("2,10,2", 14, 3, 4, 7, (2, 6), Fraction(8, 3)),
    ("4,2,4,2,4", 16, 5, 5, 7, (1,), Fraction(1)),
    ("2,10,2,10,2", 26, 5, 7, 13, (52, 44, 48), Fraction(144, 35)),
    ("2,10,2,10,2,4,2,10,2,10,2", 56, 11, 13, 13, (2, 10, 12), Fraction(24)),
    ("6,6", 12, 2, 4, 5, (0, 2, 2), Fraction(2)),
    ("12,12", 24, 2, 6, 11, (0, 2, 20, 48, 58), Fraction(2)),
    ("6,6,6", 18, 3, 5, 7, (0, 4, 2), Fraction(2)),
]

# largest stage the model-weight column of `primes` will scan for
MODEL_WEIGHT_MAX_SEED = cyc.MATERIALIZE_CEILING


def approx(x: Fraction) -> str:
    with decimal.localcontext() as ctx:
        ctx.prec = 15
        return str(decimal.Decimal(x.numerator) / decimal.Decimal(x.denominator))


def ratio(x: Fraction, args) -> str | dict:
    if getattr(args, "approx", False):
        return {"exact": str(x), "approx": approx(x)}
    return str(x)


@contextmanager
def _sink(args, binary=False):
    if args.output:
        with open(args.output, "wb" if binary else "w", newline="" if not binary else None) as fh:
            yield fh
    else:
        yield sys.stdout.buffer if binary else sys.stdout


def _emit(args, payload=None, text=None, rows=None, header=None):
    fmt = args.format
    with _sink(args) as out:
        if fmt == "json" or (fmt == "text" and text is None) or (fmt == "csv" and rows is None):
            json.dump(payload, out, indent=2)
            out.write("\n")
        elif fmt == "csv":
            w = csv.writer(out, lineterminator="\n")
            if header:
                w.writerow(header)
            w.writerows(rows)
        else:
            out.write(text + "\n")


def cmd_cycle(args) -> int:
    p = args.prime
    est = cyc.cycle_size_estimate(p)
    if p > cyc.STREAM_CEILING:
        raise ResourceCeilingError(
            f"G({p}#) has {est.gap_count} gaps (~{cyc.sci(est.gap_count)}); refusing above p={cyc.STREAM_CEILING}",
            gap_count=est.gap_count,
            nbytes=est.bytes,
        )
    source = cyc.open_cycle(p)
    if args.stats:
        stats = source.stats() if isinstance(source, cyc.CycleStream) else cyc.cycle_stats(source)
        stats["estimated_bytes"] = est.bytes
        stats["streamed"] = isinstance(source, cyc.CycleStream)
        text = f"prime={p} length={stats['length']} sum={stats['sum']} max_gap={stats['max_gap']}"
        _emit(args, payload=stats, text=text)
        return EXIT_OK
    chunks = source.chunks() if isinstance(source, cyc.CycleStream) else [source.gaps]
    if args.emit == "binary":
        if not args.output:
            raise PreconditionError("--emit binary needs --output", reason="missing_output")
        with _sink(args, binary=True) as fh:
            cyc.write_binary(fh, p, chunks, est.gap_count)
        return EXIT_OK
    with _sink(args) as out:
        first = True
        for chunk in chunks:
            if not first:
                out.write(",")
            out.write(",".join(map(str, chunk.tolist())))
            first = False
        out.write("\n")
    return EXIT_OK


def cmd_census(args) -> int:
    s = Constellation.parse(args.constellation)
    census = scan_census(cyc.open_cycle(args.prime), s, threads=args.threads)
    rows = [[j, c] for j, c in enumerate(census.counts, start=census.j_min)]
    text = ",".join(map(str, census.counts))
    _emit(args, payload=census.to_json(), text=text, rows=rows, header=["j", "count"])
    return EXIT_OK


def cmd_model(args) -> int:
    s = Constellation.parse(args.constellation)
    seed = scan_census(cyc.open_cycle(args.from_prime), s, threads=args.threads)
    trace = propagate_trace(seed, args.to_prime)
    if propagate_diagonal(seed, args.to_prime) != trace[-1].counts:
        raise AssertionError("eigen path disagrees with stepwise propagation")
    stages = []
    for c in trace:
        stages.append(
            {
                "prime": c.stage_prime,
                "counts": [str(n) for n in c.counts],
                "total": str(c.total()),
                "weights": [ratio(w, args) for w in normalize(c).weights],
            }
        )
    payload = {"constellation": list(s.gaps), "j1": seed.j_min, "J": seed.j_max, "stages": stages}
    rows = [[st["prime"], st["total"], *st["counts"]] for st in stages]
    text = "\n".join(f"{st['prime']}: {','.join(st['counts'])}" for st in stages)
    _emit(args, payload=payload, text=text, rows=rows, header=["prime", "total", "counts..."])
    return EXIT_OK


def cmd_winf(args) -> int:
    s = Constellation.parse(args.constellation)
    w, census = winf(s, stage=args.prime, threads=args.threads)
    payload = {
        "constellation": list(s.gaps),
        "weight": ratio(w, args),
        "stage_prime": census.stage_prime,
        "counts": [str(c) for c in census.counts],
        "p0_asymptotic": p0_asymptotic(s),
        "p0_full_model": p0_full_model(s),
    }
    text = str(w) if not args.approx else f"{w} ~ {approx(w)}"
    _emit(args, payload=payload, text=text, rows=[[str(s), census.stage_prime, str(w)]],
          header=["constellation", "stage_prime", "weight"])
    return EXIT_OK


def cmd_polignac(args) -> int:
    spec = RepetitionSpec(args.gap, args.length)
    rep = report(spec)
    if args.approx and rep["weight"] is not None:
        rep["approx"] = approx(Fraction(rep["weight"]))
    text = f"feasible {rep['weight']}" if rep["feasible"] else "infeasible"
    _emit(args, payload=rep, text=text,
          rows=[[rep["gap"], rep["length"], rep["feasible"], rep["weight"] or ""]],
          header=["gap", "length", "feasible", "weight"])
    return EXIT_OK


def _model_weight(s: Constellation) -> str:
    if not s.all_even:
        return "0"
    if required_seed(s) > MODEL_WEIGHT_MAX_SEED:
        return "n/a"
    return str(winf(s)[0])


def cmd_primes(args) -> int:
    s = Constellation.parse(args.constellation)
    orientations = [s] if s.reversed() == s else [s, s.reversed()]
    results = [count_among_primes(o, args.limit, threads=args.threads) for o in orientations]
    header = ["constellation", "N", "count", "first_occurrence", "sieve_model_weight"]
    rows = [r.csv_row() + [_model_weight(r.constellation)] for r in results]
    payload = [
        {
            "constellation": list(r.constellation.gaps),
            "N": r.bound,
            "count": r.occurrences,
            "first_occurrence": r.first_occurrence,
            "sieve_model_weight": row[-1],
        }
        for r, row in zip(results, rows)
    ]
    fmt_text = "\n".join(
        f"{r.constellation}: count={r.occurrences} first={r.first_occurrence} "
        f"(sieve-model weight, not a prime count: {row[-1]})"
        for r, row in zip(results, rows)
    )
    _emit(args, payload=payload, text=fmt_text, rows=rows, header=header)
    return EXIT_OK


def table1_rows(threads: int | None = None) -> list[dict]:
    out = []
    cycles: dict[int, cyc.GapCycle] = {}
    for text, span, j1, J, p0, n, w in TABLE1:
        s = Constellation.parse(text)
        if p0 not in cycles:
            cycles[p0] = cyc.build_cycle_recursive(p0)
        census = scan_census(cycles[p0], s, threads=threads)
        got = {
            "s": text,
            "span": s.span,
            "j1": s.j1,
            "J": census.j_max,
            "p0": p0,
            "n": census.counts,
            "w": asymptotic_weight(census),
        }
        got["match"] = (got["span"], got["j1"], got["J"], got["n"], got["w"]) == (span, j1, J, n, w)
        out.append(got)
    return out


def cmd_table1(args) -> int:
    rows = table1_rows(args.threads)
    header = ["s", "|s|", "j1", "J", "p0", "n(p0#)", "w_inf", "match"]
    flat = [
        [r["s"], r["span"], r["j1"], r["J"], r["p0"], "[" + ",".join(map(str, r["n"])) + "]", str(r["w"]), r["match"]]
        for r in rows
    ]
    widths = [max(len(str(x)) for x in col) for col in zip(header, *flat)]
    buf = io.StringIO()
    for line in [header, *flat]:
        buf.write("  ".join(str(x).rjust(wd) for x, wd in zip(line, widths)).rstrip() + "\n")
    payload = [
        {**{k: r[k] for k in ("s", "span", "j1", "J", "p0", "match")},
         "n": [str(x) for x in r["n"]], "w": str(r["w"])}
        for r in rows
    ]
    _emit(args, payload=payload, text=buf.getvalue().rstrip("\n"), rows=flat, header=header)
    return EXIT_OK if all(r["match"] for r in rows) else EXIT_MISMATCH


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "csv", "text"], default=None)
    common.add_argument("--output", "-o", default=None, help="write to a file instead of stdout")
    common.add_argument("--threads", type=int, default=None)
    common.add_argument("--approx", action="store_true", help="add 15-digit decimals to ratios")

    parser = argparse.ArgumentParser(prog="sieve-lab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cycle", parents=[common], help="build or stream G(p#)")
    p.add_argument("--prime", "-p", type=int, required=True)
    p.add_argument("--emit", choices=["text", "binary"], default="text")
    p.add_argument("--stats", action="store_true", help="print length, sum and max gap only")
    p.set_defaults(func=cmd_cycle, default_format="text")

    p = sub.add_parser("census", parents=[common], help="driving-term census of s in G(p#)")
    p.add_argument("-s", "--constellation", required=True)
    p.add_argument("-p", "--prime", type=int, required=True)
    p.set_defaults(func=cmd_census, default_format="json")

    p = sub.add_parser("model", parents=[common], help="propagate a census through later stages")
    p.add_argument("-s", "--constellation", required=True)
    p.add_argument("--from", dest="from_prime", type=int, required=True)
    p.add_argument("--to", dest="to_prime", type=int, required=True)
    p.set_defaults(func=cmd_model, default_format="json")

    p = sub.add_parser("winf", parents=[common], help="asymptotic relative weight of s")
    p.add_argument("-s", "--constellation", required=True)
    p.add_argument("-p", "--prime", type=int, default=None, help="seed stage (default: smallest valid)")
    p.set_defaults(func=cmd_winf, default_format="text")

    p = sub.add_parser("polignac", parents=[common], help="feasibility and weight of g,...,g")
    p.add_argument("-g", "--gap", type=int, required=True)
    p.add_argument("-j", "--length", type=int, required=True)
    p.set_defaults(func=cmd_polignac, default_format="json")

    p = sub.add_parser("primes", parents=[common], help="count s among actual consecutive primes")
    p.add_argument("-s", "--constellation", required=True)
    p.add_argument("--limit", "-N", type=int, required=True)
    p.set_defaults(func=cmd_primes, default_format="csv")

    p = sub.add_parser("table1", parents=[common], help="reproduce the published table of seeds")
    p.set_defaults(func=cmd_table1, default_format="text")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    if args.threads is None:
        args.threads = default_threads()
    try:
        return args.func(args)
    except PreconditionError as exc:
        err = {"error": "precondition", "reason": exc.reason, "message": str(exc)}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_PRECONDITION
    except ResourceCeilingError as exc:
        err = {"error": "resource_ceiling", "message": str(exc),
               "gap_count": None if exc.gap_count is None else str(exc.gap_count),
               "bytes": None if exc.nbytes is None else str(exc.nbytes)}
        print(json.dumps(err), file=sys.stderr)
        return EXIT_CEILING


if __name__ == "__main__":
    sys.exit(main())
