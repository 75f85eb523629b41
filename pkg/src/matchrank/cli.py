"""Command-line front end.

    matchrank verify corpus:c5
    matchrank rank graph.txt --f0 exhaustive --format json
    matchrank corpus                      # bundled corpus
    matchrank corpus path/to/graphs/

Graphs are read from a file, ``-`` (stdin), ``corpus:<name>`` or ``--inline``
text whose lines are separated by ``;``. Flags may also be set through
``MATCHRANK_FORMAT``, ``MATCHRANK_F0``, ``MATCHRANK_MAX_NODES``,
``MATCHRANK_MAX_EDGES``, ``MATCHRANK_MAX_FACETS_EXHAUSTIVE`` and
``MATCHRANK_OUT``.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from . import corpus
from .ears import ConstructionError, odd_ear_decomposition, proper_odd_ear_decomposition, \
    nice_odd_cycle_through_edge
from .graph import Graph, GraphFormatError, GuardExceeded, PreconditionError, parse_graph, read_graph
from .matching import enumerate_matchings, maximum_matching
from .polytope import Inequality, InvalidInequality, Kind, enumerate_facets, face_dimension, \
    is_ridge_pair, polytope_dimension
from .rank import ConjectureViolation, RankReport, lemma_minimal_formulation, rank_hierarchy, \
    rank_zero_facets, verify_rank_at_most_one
from .structure import is_2_connected, is_factor_critical
from .witness import RankZeroFacet, WitnessNotFound, WitnessReport, choose_anchor, witness_all

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_INPUT = 2
EXIT_GUARD = 3
EXIT_INTERNAL = 4

COMMANDS = ("facets", "dim", "ridges", "rank", "witness", "verify", "eardecomp", "matchings", "corpus")
ENV_PREFIX = "MATCHRANK_"


@dataclass
class RunConfig:
    command: str
    graph: str | None = None
    inline: str | None = None
    f0_mode: str = "lemma"
    max_nodes: int = 16
    max_edges: int = 24
    max_facets_exhaustive: int = 12
    output: str = "text"
    out: str | None = None
    # command-specific
    tight: list[str] = field(default_factory=list)
    facet: str | None = None
    oddset: str | None = None
    anchor: int | None = None
    proper: bool | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ValueError(f"unknown command {self.command!r}")
        for name in ("max_nodes", "max_edges", "max_facets_exhaustive"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.f0_mode not in ("lemma", "exhaustive"):
            raise ValueError(f"f0 mode must be lemma or exhaustive, not {self.f0_mode!r}")
        if self.output not in ("text", "json"):
            raise ValueError(f"format must be text or json, not {self.output!r}")


class VerificationFailed(Exception):
    def __init__(self, payload: dict, text: str):
        super().__init__(text)
        self.payload = payload
        self.text = text


# -- loading -------------------------------------------------------------------

def load_graph(cfg: RunConfig) -> Graph:
    if cfg.inline is not None:
        g = parse_graph(cfg.inline.replace(";", "\n"))
    elif cfg.graph is None:
        raise PreconditionError("no graph given")
    elif cfg.graph == "-":
        g = parse_graph(sys.stdin.read())
    elif cfg.graph.startswith("corpus:"):
        name = cfg.graph.split(":", 1)[1]
        if name not in corpus.NAMES:
            raise PreconditionError(f"unknown corpus graph {name!r}; choose from {', '.join(corpus.NAMES)}")
        g = corpus.load(name)
    else:
        g = read_graph(cfg.graph)
    check_guards(g, cfg)
    return g


def check_guards(g: Graph, cfg: RunConfig) -> None:
    if g.node_count > cfg.max_nodes:
        raise GuardExceeded(f"graph has {g.node_count} nodes; limit is --max-nodes {cfg.max_nodes}")
    if g.edge_count > cfg.max_edges:
        raise GuardExceeded(f"graph has {g.edge_count} edges; limit is --max-edges {cfg.max_edges}")


def _graph_json(g: Graph) -> dict:
    return {"n": g.node_count, "edges": [list(e) for e in g.edges]}


def _kind_counts(facets: Sequence[Inequality]) -> dict:
    c = Counter(q.name for q in facets)
    return {k: c.get(k, 0) for k in ("nonneg", "degree", "oddset")}


def _parse_nodes(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise PreconditionError(f"bad node list {text!r}") from None


# -- commands ------------------------------------------------------------------

def cmd_facets(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    facets = enumerate_facets(g, cfg.max_nodes)
    payload = {"graph": _graph_json(g), "counts": _kind_counts(facets),
               "facets": [q.to_json() for q in facets]}
    lines = [f"{len(facets)} facets ({', '.join(f'{k} {v}' for k, v in payload['counts'].items())})"]
    lines += [f"  {q.label(g)}" for q in facets]
    return payload, "\n".join(lines)


def cmd_dim(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    dim = polytope_dimension(g)
    payload: dict = {"graph": _graph_json(g), "dimension": dim, "full_dimensional": dim == g.edge_count}
    lines = [f"dim P = {dim} (|E| = {g.edge_count})"]
    if cfg.tight:
        tight = [Inequality.parse(t) for t in cfg.tight]
        face = face_dimension(g, tight)
        payload["face"] = face.to_json()
        lines.append(f"face {', '.join(q.label(g) for q in face.tight_set)}: dimension {face.dimension}, "
                     f"{len(face.tight_matchings)} tight matchings")
    return payload, "\n".join(lines)


def cmd_ridges(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    facets = enumerate_facets(g, cfg.max_nodes)
    only = Inequality.parse(cfg.facet) if cfg.facet else None
    if only is not None and only not in facets:
        raise PreconditionError(f"{only.label()} is not a facet")
    pairs = []
    for a in range(len(facets)):
        for b in range(a + 1, len(facets)):
            f, h = facets[a], facets[b]
            if only is not None and only not in (f, h):
                continue
            if is_ridge_pair(g, f, h, check_facets=False):
                pairs.append((f, h))
    payload = {"graph": _graph_json(g), "ridges": [[f.to_json(), h.to_json()] for f, h in pairs]}
    text = "\n".join([f"{len(pairs)} ridge pairs"] + [f"  {f.label(g)}  &  {h.label(g)}" for f, h in pairs])
    return payload, text


def _rank_text(g: Graph, rep: RankReport) -> list[str]:
    lines = [f"rho={rep.rho}" + ("" if rep.exhausted else " (hierarchy does not reach every facet)")]
    for r, layer in enumerate(rep.layers()):
        lines.append(f"rank {r}: {len(layer)} facets")
        for q in layer:
            if q in rep.certificates:
                p, face = rep.certificates[q]
                lines.append(f"  {q.label(g)}  via {p.label(g)} (ridge dim {face.dimension})")
            else:
                lines.append(f"  {q.label(g)}")
    for q, (p, face) in sorted(rep.anchor_certificates.items()):
        lines.append(f"anchor ridge: {q.label(g)} & {p.label(g)} (dim {face.dimension})")
    return lines


def cmd_rank(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    facets = enumerate_facets(g, cfg.max_nodes)
    f0 = rank_zero_facets(g, cfg.f0_mode, facets, max_facets=cfg.max_facets_exhaustive)
    rep = rank_hierarchy(g, f0, facets, f0_mode=cfg.f0_mode)
    payload = {"graph": _graph_json(g), **rep.to_json()}
    text = "\n".join(_rank_text(g, rep))
    if not rep.exhausted:
        raise VerificationFailed(payload, text)
    return payload, text


def _witness_text(g: Graph, rep: WitnessReport) -> list[str]:
    lines = [f"facet {Inequality.oddset(rep.U).label()} anchor v={rep.v}"
             f"{' (odd hole)' if rep.hole else ''}: {len(rep.results)} witnesses, "
             f"ridge dim {rep.ridge_dimension} ({'ridge' if rep.ridge else 'NOT a ridge'}), "
             f"fallbacks {rep.fallback_count}"]
    for r in rep.results:
        flag = "ok" if r.ok else "FAIL"
        fb = " [fallback]" if r.fallback else ""
        lines.append(f"  {r.target.label(g):<24} {r.case_tag.value:<7} {flag}{fb} "
                     f"M={r.matching.pairs(g)}")
    return lines


def _witness_targets(g: Graph, facets: Sequence[Inequality]) -> list[Inequality]:
    lemma = set(lemma_minimal_formulation(g, facets))
    return [q for q in facets if q.kind is Kind.ODDSET and q not in lemma]


def cmd_witness(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    facets = enumerate_facets(g, cfg.max_nodes)
    if cfg.oddset:
        sets = [Inequality.oddset(_parse_nodes(cfg.oddset))]
        if sets[0] not in facets:
            raise PreconditionError(f"{sets[0].label()} is not a facet")
    else:
        sets = _witness_targets(g, facets)
    reports = [witness_all(g, q.support, cfg.anchor, facets) for q in sets]
    payload = {"graph": _graph_json(g), "reports": [r.to_json(g) for r in reports],
               "fallback_count": sum(r.fallback_count for r in reports)}
    lines = [line for r in reports for line in _witness_text(g, r)] or ["no odd-set facet above rank 0"]
    text = "\n".join(lines)
    if not all(r.ok for r in reports):
        raise VerificationFailed(payload, text)
    return payload, text


def cmd_verify(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    facets = enumerate_facets(g, cfg.max_nodes)
    try:
        rep = verify_rank_at_most_one(g, facets)
    except ConjectureViolation as exc:
        payload = {"graph": _graph_json(g), "ok": False, "error": str(exc)}
        if exc.report is not None:
            payload.update(exc.report.to_json())
        raise VerificationFailed(payload, f"VERIFICATION FAILED: {exc}") from exc
    reports = [witness_all(g, q.support, None, facets) for q in _witness_targets(g, facets)]
    fallbacks = sum(r.fallback_count for r in reports)
    ok = rep.rho <= 1 and all(r.ok for r in reports)
    payload = {"graph": _graph_json(g), "ok": ok, "counts": _kind_counts(facets),
               "rank": rep.to_json(),
               "witnesses": [r.to_json(g) for r in reports], "fallback_count": fallbacks}
    lines = [f"rho={rep.rho}", f"facets: {len(facets)} {_kind_counts(facets)}",
             f"certificates: {len(rep.certificates)}",
             f"witnessed odd sets: {len(reports)}, fallbacks: {fallbacks}",
             "PASS" if ok else "FAIL"]
    text = "\n".join(lines)
    if not ok:
        raise VerificationFailed(payload, text)
    return payload, text


def cmd_eardecomp(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    if not is_factor_critical(g):
        raise PreconditionError("graph is not factor-critical")
    proper = cfg.proper
    if proper is None:
        proper = g.node_count >= 3 and is_2_connected(g)
    if proper:
        dec = proper_odd_ear_decomposition(g)
    else:
        dec = odd_ear_decomposition(g, nice_odd_cycle_through_edge(g, g.edges[0]))
    payload = {"graph": _graph_json(g), "proper": proper, **dec.to_json()}
    lines = [f"{'proper ' if proper else ''}odd ear decomposition",
             f"  C  = {list(dec.initial_cycle)}"]
    lines += [f"  P{t + 1} = {list(e.path)}{'' if e.is_proper else ' (closed)'}" for t, e in enumerate(dec.ears)]
    return payload, "\n".join(lines)


def cmd_matchings(g: Graph, cfg: RunConfig) -> tuple[dict, str]:
    ms = enumerate_matchings(g, cfg.max_edges)
    best = maximum_matching(g)
    payload = {"graph": _graph_json(g), "count": len(ms), "maximum": [list(p) for p in best.pairs(g)],
               "matchings": [[list(p) for p in m.pairs(g)] for m in ms]}
    lines = [f"{len(ms)} matchings; maximum size {len(best)}: {best.pairs(g)}"]
    lines += [f"  {m.pairs(g)}" for m in ms]
    return payload, "\n".join(lines)


HANDLERS = {
    "facets": cmd_facets, "dim": cmd_dim, "ridges": cmd_ridges, "rank": cmd_rank,
    "witness": cmd_witness, "verify": cmd_verify, "eardecomp": cmd_eardecomp,
    "matchings": cmd_matchings,
}


# -- corpus --------------------------------------------------------------------

def verify_row(g: Graph, cfg: RunConfig) -> dict:
    facets = enumerate_facets(g, cfg.max_nodes)
    rep = verify_rank_at_most_one(g, facets)
    reports = [witness_all(g, q.support, None, facets) for q in _witness_targets(g, facets)]
    return {
        "n": g.node_count, "m": g.edge_count, **_kind_counts(facets),
        "rho": rep.rho, "fallbacks": sum(r.fallback_count for r in reports),
        "ok": rep.rho <= 1 and all(r.ok for r in reports),
    }


def run_corpus(directory: str | os.PathLike | None, cfg: RunConfig) -> tuple[int, list[dict]]:
    """One row per graph file; a failing file is recorded and the run continues."""
    if directory is None:
        files = [(name, corpus.corpus_dir().joinpath(f"{name}.txt")) for name in corpus.NAMES]
    else:
        d = Path(directory)
        if not d.is_dir():
            raise PreconditionError(f"{directory} is not a directory")
        files = [(p.stem, p) for p in sorted(d.glob("*.txt"))]
    rows = []
    status = EXIT_OK
    for name, path in files:
        start = time.perf_counter()
        row: dict = {"graph": name}
        try:
            g = parse_graph(path.read_text(encoding="utf-8"))
            check_guards(g, cfg)
            row.update(verify_row(g, cfg))
            if not row["ok"]:
                status = max(status, EXIT_VERIFY_FAILED)
        except GuardExceeded as exc:
            row.update(ok=False, error=f"GuardExceeded: {exc}")
            status = max(status, EXIT_GUARD)
        except (GraphFormatError, PreconditionError, OSError, ValueError) as exc:
            row.update(ok=False, error=f"{type(exc).__name__}: {exc}")
            status = max(status, EXIT_INPUT)
        except ConjectureViolation as exc:
            row.update(ok=False, error=f"ConjectureViolation: {exc}")
            status = max(status, EXIT_VERIFY_FAILED)
        except AssertionError as exc:
            row.update(ok=False, error=f"{type(exc).__name__}: {exc}")
            status = EXIT_INTERNAL
        row["runtime_s"] = time.perf_counter() - start
        rows.append(row)
    return status, rows


def corpus_text(rows: list[dict]) -> str:
    head = f"{'graph':<16}{'|V|':>4}{'|E|':>5}{'nonneg':>8}{'degree':>8}{'oddset':>8}{'rho':>5}{'fallb':>7}{'time':>9}  status"
    lines = [head]
    for r in rows:
        if "error" in r:
            lines.append(f"{r['graph']:<16}{'':>54}  ERROR {r['error']}")
            continue
        lines.append(f"{r['graph']:<16}{r['n']:>4}{r['m']:>5}{r['nonneg']:>8}{r['degree']:>8}{r['oddset']:>8}"
                     f"{r['rho']:>5}{r['fallbacks']:>7}{r['runtime_s']:>8.2f}s  {'ok' if r['ok'] else 'FAIL'}")
    passed = sum(1 for r in rows if r.get("ok"))
    lines.append(f"{passed}/{len(rows)} graphs pass" + ("" if passed == len(rows) else "  FAIL"))
    return "\n".join(lines)


# -- driver --------------------------------------------------------------------

def render(payload: dict, text: str, cfg: RunConfig) -> str:
    if cfg.output == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    return text + "\n"


def run(cfg: RunConfig) -> tuple[int, str]:
    """Execute one command; returns the exit status and the report text."""
    try:
        if cfg.command == "corpus":
            status, rows = run_corpus(cfg.graph, cfg)
            # timings are left out of JSON so repeated runs are byte-identical
            payload = {"rows": [{k: v for k, v in r.items() if k != "runtime_s"} for r in rows],
                       "pass": status == EXIT_OK}
            return status, render(payload, corpus_text(rows), cfg)
        g = load_graph(cfg)
        payload, text = HANDLERS[cfg.command](g, cfg)
        return EXIT_OK, render(payload, text, cfg)
    except VerificationFailed as exc:
        return EXIT_VERIFY_FAILED, render(exc.payload, exc.text, cfg)
    except GuardExceeded as exc:
        return EXIT_GUARD, f"error: {exc}\n"
    except (RankZeroFacet, GraphFormatError, PreconditionError, InvalidInequality, OSError, ValueError) as exc:
        return EXIT_INPUT, f"error: {exc}\n"
    except ConjectureViolation as exc:
        return EXIT_VERIFY_FAILED, f"VERIFICATION FAILED: {exc}\n"
    except (ConstructionError, WitnessNotFound, AssertionError) as exc:
        return EXIT_INTERNAL, f"internal error: {type(exc).__name__}: {exc}\n"


def _env(name: str, default):
    raw = os.environ.get(ENV_PREFIX + name)
    if raw is None:
        return default
    return type(default)(raw) if default is not None else raw


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", dest="output", choices=("text", "json"), default=_env("FORMAT", "text"))
    common.add_argument("--f0", dest="f0_mode", choices=("lemma", "exhaustive"), default=_env("F0", "lemma"))
    common.add_argument("--max-nodes", type=int, default=_env("MAX_NODES", 16))
    common.add_argument("--max-edges", type=int, default=_env("MAX_EDGES", 24))
    common.add_argument("--max-facets-exhaustive", type=int, default=_env("MAX_FACETS_EXHAUSTIVE", 12))
    common.add_argument("--out", default=_env("OUT", None), help="write the report to FILE")
    common.add_argument("--inline", help="graph text with ';' as line separator")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="matchrank", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    graph_help = "graph file, '-' for stdin, or corpus:<name>"
    for name, desc in [
        ("facets", "list the facets of the matching polytope"),
        ("dim", "polytope dimension, or the dimension of a face"),
        ("ridges", "facet pairs meeting in a ridge"),
        ("rank", "rank hierarchy from the chosen rank-0 set"),
        ("witness", "witness matchings for odd-set facets"),
        ("verify", "check rank <= 1 with certificates and witnesses"),
        ("eardecomp", "odd ear decomposition of a factor-critical graph"),
        ("matchings", "enumerate all matchings"),
    ]:
        p = sub.add_parser(name, parents=[common], help=desc, description=desc)
        p.add_argument("graph", nargs="?", help=graph_help)
        if name == "dim":
            p.add_argument("--tight", action="append", default=[],
                           help="inequality held tight: nonneg:<edge>, degree:<node>, oddset:<a,b,c>")
        if name == "ridges":
            p.add_argument("--facet", help="only pairs containing this facet")
        if name == "witness":
            p.add_argument("--set", dest="oddset", help="comma-separated odd set U (default: all rank>=1)")
            p.add_argument("--anchor", type=int, help="anchor node v (default: chosen automatically)")
        if name == "eardecomp":
            g = p.add_mutually_exclusive_group()
            g.add_argument("--proper", dest="proper", action="store_true", default=None)
            g.add_argument("--any", dest="proper", action="store_false")
    p = sub.add_parser("corpus", parents=[common], help="verify every graph in a directory")
    p.add_argument("graph", nargs="?", metavar="DIR", help="directory of *.txt graphs (default: bundled corpus)")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = RunConfig(
            command=args.command, graph=args.graph, inline=args.inline, f0_mode=args.f0_mode,
            max_nodes=args.max_nodes, max_edges=args.max_edges,
            max_facets_exhaustive=args.max_facets_exhaustive, output=args.output, out=args.out,
            tight=getattr(args, "tight", []), facet=getattr(args, "facet", None),
            oddset=getattr(args, "oddset", None), anchor=getattr(args, "anchor", None),
            proper=getattr(args, "proper", None),
        )
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    status, report = run(cfg)
    if cfg.out:
        Path(cfg.out).write_text(report, encoding="utf-8")
    else:
        stream = sys.stdout if status in (EXIT_OK, EXIT_VERIFY_FAILED) else sys.stderr
        stream.write(report)
    return status


if __name__ == "__main__":
    sys.exit(main())
