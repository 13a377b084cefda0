"""Command-line entry point.

Subcommands::

    cityoverlap ingest  --firms FILE --label TAG --out EDGELIST
    cityoverlap stats   EDGELIST [--format text|csv]
    cityoverlap overlap --from A --to B [--node CITY] [--mode] [--direction]
    cityoverlap rank    --from A --to B [--shortlist K] [--top N] [--dc-source]
    cityoverlap synth   --nodes N --edges M --retain P --new K --max-weight W --seed S --out-prefix PATH

Exit status: 0 success, 1 invalid input, 2 file I/O failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path

from . import __version__
from .errors import CityNetError, ValidationError
from .graph import NodeRegistry, load_edgelist, save_edgelist
from .ingest import aggregate_city_graph, parse_ownership_file
from .metrics import network_stats, topological_overlap, topological_overlap_all
from .pipeline import DEFAULT_SHORTLIST, DEFAULT_TOP, format_csv, format_text, rank_stability
from .synth import SynthConfig, generate_pair

log = logging.getLogger("cityoverlap")

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class UsageError(ValidationError):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad flags; 2 is reserved for I/O failures here.
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_overlap_options(p):
    p.add_argument("--from", dest="earlier", required=True, metavar="EDGELIST", help="earlier snapshot")
    p.add_argument("--to", dest="later", required=True, metavar="EDGELIST", help="later snapshot")
    p.add_argument("--mode", choices=["binary", "weighted"], default="weighted")
    p.add_argument("--direction", choices=["out", "in", "both"], default="out")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--out", metavar="PATH", help="write here instead of standard output")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cityoverlap", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("ingest", help="aggregate ownership records into a city edge list")
    p.add_argument("--firms", required=True, metavar="FILE")
    p.add_argument("--label", required=True, metavar="TAG")
    p.add_argument("--out", required=True, metavar="EDGELIST")

    p = sub.add_parser("stats", help="network summary metrics for one snapshot")
    p.add_argument("edgelist")
    p.add_argument("--format", choices=["text", "csv"], default="text")
    p.add_argument("--out", metavar="PATH")

    p = sub.add_parser("overlap", help="topological overlap between two snapshots")
    _add_overlap_options(p)
    p.add_argument("--node", metavar="CITY", help="score one city instead of all")

    p = sub.add_parser("rank", help="stable and changing cities")
    _add_overlap_options(p)
    p.add_argument("--shortlist", type=int, default=DEFAULT_SHORTLIST, metavar="K")
    p.add_argument("--top", type=int, default=DEFAULT_TOP, metavar="N")
    p.add_argument("--dc-source", choices=["earlier", "later", "max"], default="earlier")

    p = sub.add_parser("synth", help="write a seeded snapshot pair")
    p.add_argument("--nodes", type=int, required=True)
    p.add_argument("--edges", type=int, required=True)
    p.add_argument("--retain", type=float, required=True)
    p.add_argument("--new", type=int, default=0)
    p.add_argument("--max-weight", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-prefix", required=True, metavar="PATH")
    return parser


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _load_pair(args):
    registry = NodeRegistry()
    s1 = load_edgelist(args.earlier, registry, label=None)
    s2 = load_edgelist(args.later, registry, label=None)
    return s1, s2


def cmd_ingest(args):
    log.info("params: firms=%s label=%s out=%s", args.firms, args.label, args.out)
    with open(args.firms, encoding="utf-8", newline="") as fh:
        parsed = parse_ownership_file(fh)
    for err in parsed.errors:
        log.warning("%s: %s", args.firms, err)
    snap = aggregate_city_graph(parsed.records, args.label)
    save_edgelist(snap, args.out)
    log.info(
        "%s; %d cities, %d edges, %d self-loop records dropped",
        parsed.summary(), snap.node_count, snap.edge_count, snap.dropped_self_loops,
    )


def cmd_stats(args):
    log.info("params: edgelist=%s format=%s highest_degree=binary/total", args.edgelist, args.format)
    snap = load_edgelist(args.edgelist)
    stats = network_stats(snap)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    if args.format == "csv":
        writer.writerow(["metric", "value"])
        writer.writerows((name, repr(value)) for name, value in stats.rows())
    else:
        writer.writerows(stats.display_rows())
    _emit(buf.getvalue(), args.out)


def cmd_overlap(args):
    log.info("params: mode=%s direction=%s node=%s", args.mode, args.direction, args.node)
    s1, s2 = _load_pair(args)
    registry = s1.registry
    if args.node is not None:
        node = registry.id_of(args.node)
        scores = [topological_overlap(s1, s2, node, args.mode, args.direction)]
    else:
        scores = list(topological_overlap_all(s1, s2, args.mode, args.direction).values())

    buf = io.StringIO()
    if args.format == "csv":
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["node", "value", "defined"])
        for s in scores:
            writer.writerow([registry.label_of(s.node), "" if s.value is None else repr(s.value),
                             str(s.defined).lower()])
    else:
        width = max((len(registry.label_of(s.node)) for s in scores), default=0)
        for s in scores:
            shown = f"{s.value:.3f}" if s.defined else f"undefined ({s.reason})"
            buf.write(f"{registry.label_of(s.node):<{width}}  {shown}\n")
    _emit(buf.getvalue(), args.out)


def cmd_rank(args):
    log.info(
        "params: mode=%s direction=%s k=%d n=%d dc_source=%s",
        args.mode, args.direction, args.shortlist, args.top, args.dc_source,
    )
    s1, s2 = _load_pair(args)
    report = rank_stability(s1, s2, args.shortlist, args.top, args.mode, args.direction, args.dc_source)
    _emit(format_csv(report) if args.format == "csv" else format_text(report), args.out)


def cmd_synth(args):
    log.info(
        "params: nodes=%d edges=%d retain=%s new=%d max_weight=%d seed=%d",
        args.nodes, args.edges, args.retain, args.new, args.max_weight, args.seed,
    )
    config = SynthConfig(args.nodes, args.edges, args.retain, args.new, args.max_weight, args.seed)
    first, second = generate_pair(config)
    save_edgelist(first, f"{args.out_prefix}_t0")
    save_edgelist(second, f"{args.out_prefix}_t1")


COMMANDS = {
    "ingest": cmd_ingest,
    "stats": cmd_stats,
    "overlap": cmd_overlap,
    "rank": cmd_rank,
    "synth": cmd_synth,
}


def run(argv: list[str] | None = None) -> int:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO)
    try:
        args = build_parser().parse_args(argv)
        COMMANDS[args.command](args)
    except SystemExit as exc:
        # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK
    except CityNetError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    finally:
        log.removeHandler(handler)
    return EXIT_OK


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
