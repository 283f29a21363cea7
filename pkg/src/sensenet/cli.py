"""Operator command line: run pipeline phases, materialize networks, start
the servers, and issue ad-hoc queries.

Exit codes: 0 success, 1 usage error, 2 data error. Phase outputs are the
plain-text line grammars, so `pipeline` is byte-identical to chaining the
phase subcommands. Flags may also be supplied through a JSON config file
(same keys, dashes as underscores); the port pool is configurable via the
SENSENET_PORT_RANGE environment variable ("20000-20999").
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import time
from pathlib import Path

from .core import (ConceptNet, GrammarError, ProfileAttrs, RegistryError,
                   compute_density, default_registry, load_type_registry)
from .extraction import NEGATION_LEXICONS, ExportLine, load_rules
from .filtering import Materializer, QueryError, parse_profile_query
from .game import GameService
from .game_http import GameHttpServer
from .normalization import NormalizationStats, load_lexicon
from .pipeline import (Pipeline, parse_raw_lines, parse_relation_lines,
                       raw_lines, relation_lines)
from .relaxation import HeuristicConfig, PassReport
from .server import DEFAULT_PORT_RANGE, ManagementServer, dispatch, get_api
from .store import StatementStore, StoreError, load_templates

USAGE_ERROR = 1
DATA_ERROR = 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _read_lines(path: str) -> list[str]:
    return Path(path).read_text("utf-8").splitlines()


def _write_lines(path: str, lines) -> None:
    Path(path).write_text("".join(line + "\n" for line in lines), "utf-8")


def _load_rules_arg(spec: str):
    if spec in ("pt", "en"):
        return load_rules(bundled=spec)
    return load_rules(path=spec)


def _load_lexicon_arg(spec: str):
    if spec in ("pt", "en"):
        return load_lexicon(bundled=spec)
    return load_lexicon(path=spec)


def _registry_arg(spec):
    return load_type_registry(spec) if spec else default_registry()


def _heuristics(args) -> HeuristicConfig:
    return HeuristicConfig(
        thematic_kline=args.thematic_kline,
        capable_of=args.capable_of,
        capable_of_receiving_action=args.capable_of_receiving_action,
        super_thematic_kline=args.super_thematic_kline,
    )


def _pipeline(args) -> Pipeline:
    return Pipeline(
        rules=_load_rules_arg(args.rules),
        provider=_load_lexicon_arg(args.lexicon),
        registry=_registry_arg(args.types),
        heuristics=_heuristics(args),
        negation_lexicon=NEGATION_LEXICONS[args.negation],
        normalize=args.normalize,
        property_composition=args.property_composition,
    )


def _port_range() -> tuple[int, int]:
    spec = os.environ.get("SENSENET_PORT_RANGE")
    if not spec:
        return DEFAULT_PORT_RANGE
    low, _, high = spec.partition("-")
    return int(low), int(high)


def _add_pipeline_flags(p: argparse.ArgumentParser, need_rules=True,
                        need_lexicon=True) -> None:
    if need_rules:
        p.add_argument("--rules", default="pt",
                       help="rule file path or builtin set: pt, en")
    if need_lexicon:
        p.add_argument("--lexicon", default="pt",
                       help="lexicon file path or builtin set: pt, en")
    p.add_argument("--types", default=None, help="relation-type TSV path")
    p.add_argument("--negation", default="pt", choices=sorted(NEGATION_LEXICONS))
    p.add_argument("--no-normalize", dest="normalize", action="store_false")
    p.add_argument("--no-thematic-kline", dest="thematic_kline",
                   action="store_false")
    p.add_argument("--capable-of", action="store_true")
    p.add_argument("--capable-of-receiving-action", action="store_true")
    p.add_argument("--super-thematic-kline", action="store_true")
    p.add_argument("--no-property-composition", dest="property_composition",
                   action="store_false")


def build_parser() -> _Parser:
    parser = _Parser(prog="sensenet")
    parser.add_argument("--config", default=None,
                        help="JSON file of default flag values")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("export", help="statement dump -> seven-slot corpus")
    p.add_argument("--statements", required=True,
                   help="JSON list of {id, text, gender, age_group, education, city, state}")
    p.add_argument("--out", required=True)

    p = sub.add_parser("extract", help="corpus -> profiled relations")
    p.add_argument("--corpus", required=True)
    p.add_argument("--out", required=True)
    _add_pipeline_flags(p, need_lexicon=False)
    p.set_defaults(lexicon="pt")

    p = sub.add_parser("normalize", help="tag and lemmatize relation parameters")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--stats", default=None, help="write counter report here")
    _add_pipeline_flags(p, need_rules=False)
    p.set_defaults(rules="pt")

    p = sub.add_parser("relax", help="seed counters, group, derive relations")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--report", default=None, help="write pass report here")
    _add_pipeline_flags(p, need_rules=False, need_lexicon=False)
    p.set_defaults(rules="pt", lexicon="pt")

    p = sub.add_parser("filter", help="materialize a profile-scoped network")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--profile", default="[[],[],[],[],[]]",
                   help="JSON five-list query")
    p.add_argument("--out", default=None, help="write network lines here")
    p.add_argument("--outdir", default=None,
                   help="materialize into this cache directory instead")
    _add_pipeline_flags(p, need_rules=False, need_lexicon=False)
    p.set_defaults(rules="pt", lexicon="pt")

    p = sub.add_parser("pipeline", help="run every phase over a corpus")
    p.add_argument("--corpus", required=True)
    p.add_argument("--outdir", required=True)
    p.add_argument("--profile", default="[[],[],[],[],[]]")
    _add_pipeline_flags(p)

    p = sub.add_parser("metrics", help="node/relation/density report")
    p.add_argument("--net", default=None, help="network file to measure")
    p.add_argument("--corpus", default=None,
                   help="measure a corpus with and without normalization")
    _add_pipeline_flags(p)

    p = sub.add_parser("serve", help="start management server and game service")
    p.add_argument("--corpus", required=True)
    p.add_argument("--netdir", required=True)
    p.add_argument("--mgmt-port", type=int, default=8700)
    p.add_argument("--game-port", type=int, default=8800)
    p.add_argument("--templates", default="en",
                   help="collection template file or builtin set: pt, en")
    p.add_argument("--seed", type=int, default=None)
    _add_pipeline_flags(p)

    p = sub.add_parser("query", help="call an inference method over the wire")
    p.add_argument("--mgmt", default="127.0.0.1:8700", help="management host:port")
    p.add_argument("--profile", default="[[],[],[],[],[]]")
    p.add_argument("method")
    p.add_argument("args", nargs="*")

    p = sub.add_parser("evict", help="shut down idle network instances")
    p.add_argument("--mgmt", default="127.0.0.1:8700")
    p.add_argument("--max-idle", type=float, required=True)

    return parser


def _cmd_export(args) -> int:
    records = json.loads(Path(args.statements).read_text("utf-8"))
    lines = []
    for rec in sorted(records, key=lambda r: r["id"]):
        profile = ProfileAttrs(rec["gender"], rec["age_group"], rec["education"],
                               rec["city"], rec["state"])
        lines.append(ExportLine(rec["text"], profile, rec["id"]).serialize())
    _write_lines(args.out, lines)
    return 0


def _cmd_extract(args) -> int:
    pipe = _pipeline(args)
    raws = pipe.extract(_read_lines(args.corpus))
    _write_lines(args.out, raw_lines(raws))
    return 0


def _cmd_normalize(args) -> int:
    pipe = _pipeline(args)
    stats = NormalizationStats()
    raws = pipe.normalize_raws(parse_raw_lines(_read_lines(args.infile),
                                               pipe.registry), stats)
    _write_lines(args.out, raw_lines(raws))
    if args.stats:
        Path(args.stats).write_text(stats.report() + "\n", "utf-8")
    return 0


def _cmd_relax(args) -> int:
    pipe = _pipeline(args)
    report = PassReport()
    relaxed = pipe.relax_raws(parse_raw_lines(_read_lines(args.infile),
                                              pipe.registry), report)
    _write_lines(args.out, relation_lines(relaxed))
    if args.report:
        Path(args.report).write_text(
            json.dumps(report.counts, sort_keys=True) + "\n", "utf-8")
    return 0


def _cmd_filter(args) -> int:
    pipe = _pipeline(args)
    query = parse_profile_query(json.loads(args.profile))
    relaxed = parse_relation_lines(_read_lines(args.infile), pipe.registry)
    if args.outdir:
        materializer = Materializer(relaxed, args.outdir, pipe.registry,
                                    pipe.property_composition)
        handle = materializer.materialize(query)
        print(handle.path)
        return 0
    if not args.out:
        raise UsageError("filter needs --out or --outdir")
    from .filtering import build_conceptnet

    net = build_conceptnet(query, relaxed, pipe.registry,
                           pipe.property_composition)
    _write_lines(args.out, net.to_lines())
    return 0


def _cmd_pipeline(args) -> int:
    pipe = _pipeline(args)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    corpus = _read_lines(args.corpus)

    raws = pipe.extract(corpus)
    _write_lines(outdir / "extracted.txt", raw_lines(raws))

    stats = NormalizationStats()
    normalized = pipe.normalize_raws(raws, stats)
    _write_lines(outdir / "normalized.txt", raw_lines(normalized))

    report = PassReport()
    relaxed = pipe.relax_raws(normalized, report)
    _write_lines(outdir / "relaxed.txt", relation_lines(relaxed))

    from .filtering import build_conceptnet

    query = parse_profile_query(json.loads(args.profile))
    net = build_conceptnet(query, relaxed, pipe.registry,
                           pipe.property_composition)
    _write_lines(outdir / "network.net", net.to_lines())

    metrics = compute_density(net)
    (outdir / "metrics.json").write_text(json.dumps({
        "nodes": metrics.nodes, "relations": metrics.relations,
        "density": metrics.density, "normalization": json.loads(stats.report()),
        "relaxation": report.counts,
    }, sort_keys=True, indent=2) + "\n", "utf-8")
    print(f"pipeline complete: {len(net)} relations -> {outdir}")
    return 0


def _cmd_metrics(args) -> int:
    if args.net:
        net = ConceptNet.from_lines(_read_lines(args.net), _registry_arg(args.types))
        m = compute_density(net)
        print(json.dumps({"nodes": m.nodes, "relations": m.relations,
                          "density": m.density}))
        return 0
    if not args.corpus:
        raise UsageError("metrics needs --net or --corpus")
    corpus = _read_lines(args.corpus)
    results = {}
    for label, normalize in (("non_normalized", False), ("normalized", True)):
        pipe = _pipeline(args)
        pipe.normalize = normalize
        m = compute_density(pipe.network(corpus))
        results[label] = {"nodes": m.nodes, "relations": m.relations,
                          "density": m.density}
    before, after = results["non_normalized"], results["normalized"]

    def pct(a, b):
        return 0.0 if a == 0 else 100.0 * (b - a) / a

    results["change_pct"] = {
        "nodes": pct(before["nodes"], after["nodes"]),
        "relations": pct(before["relations"], after["relations"]),
        "density": pct(before["density"], after["density"]),
    }
    print(json.dumps(results, indent=2, sort_keys=True))
    return 0


def _cmd_serve(args) -> int:
    pipe = _pipeline(args)
    relaxed = pipe.relaxed_from_corpus(_read_lines(args.corpus))
    materializer = Materializer(relaxed, args.netdir, pipe.registry,
                                pipe.property_composition)
    rng = random.Random(args.seed)
    if args.templates in ("pt", "en"):
        templates = load_templates(bundled=args.templates)
    else:
        templates = load_templates(path=args.templates)
    store = StatementStore(templates, rng=rng)
    mgmt = ManagementServer(materializer, pipe.registry,
                            provider=pipe.provider, port=args.mgmt_port,
                            port_range=_port_range())
    service = GameService(store, materializer, pipe.provider, pipe.registry,
                          rng=rng)
    game_server = GameHttpServer(service, port=args.game_port)
    mgmt.start()
    game_server.start()
    print(f"management endpoint on port {mgmt.port}, "
          f"game service on port {game_server.port}", flush=True)
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        game_server.stop()
        mgmt.stop()
    return 0


def _cmd_query(args) -> int:
    host, _, port = args.mgmt.partition(":")
    info = get_api(int(port), json.loads(args.profile), host=host)
    if info["state"] != "ready":
        for _ in range(50):
            time.sleep(0.1)
            info = get_api(int(port), json.loads(args.profile), host=host)
            if info["state"] == "ready":
                break
    params = [json.loads(a) if a[:1] in '[{"0123456789' else a for a in args.args]
    result = dispatch(info["port"], args.method, params, host=host)
    print(json.dumps(result, ensure_ascii=False, indent=2))
    return 0


def _cmd_evict(args) -> int:
    import xmlrpc.client

    host, _, port = args.mgmt.partition(":")
    proxy = xmlrpc.client.ServerProxy(f"http://{host}:{port}/")
    print(proxy.evictIdle(args.max_idle))
    return 0


_COMMANDS = {
    "export": _cmd_export,
    "extract": _cmd_extract,
    "normalize": _cmd_normalize,
    "relax": _cmd_relax,
    "filter": _cmd_filter,
    "pipeline": _cmd_pipeline,
    "metrics": _cmd_metrics,
    "serve": _cmd_serve,
    "query": _cmd_query,
    "evict": _cmd_evict,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.config:
            defaults = json.loads(Path(args.config).read_text("utf-8"))
            for key, value in defaults.items():
                attr = key.replace("-", "_")
                if hasattr(args, attr) and parser.get_default(attr) == getattr(args, attr):
                    setattr(args, attr, value)
        if not args.command:
            parser.print_usage(sys.stderr)
            return USAGE_ERROR
        return _COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return USAGE_ERROR
    except (OSError, json.JSONDecodeError, GrammarError, RegistryError,
            QueryError, StoreError, KeyError, ValueError) as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return DATA_ERROR


if __name__ == "__main__":
    sys.exit(main())
