"""Command line entry points: compile / eval / check / serve."""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import codegen, persistence
from .errors import ShaderEvoError
from .evolution import EvolutionConfig
from .interpreter import EvalContext, interpret, shade_genome


def _load_genome(path):
    return persistence.parse_genome(Path(path).read_text(encoding="utf-8"))


def _cmd_compile(args):
    genome = _load_genome(args.genome)
    bundle = codegen.compile(genome)
    text = json.dumps(bundle.to_doc(), indent=2) + "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_eval(args):
    genome = _load_genome(args.genome)
    ctx_doc = {}
    if args.ctx:
        ctx_doc = json.loads(Path(args.ctx).read_text(encoding="utf-8"))
    ctx = EvalContext(
        uv=tuple(ctx_doc.get("uv", (0.5, 0.5))),
        object_position=tuple(ctx_doc.get("object_position", (0.0, 0.0, 0.0))),
        world_normal=tuple(ctx_doc.get("world_normal", (0.0, 0.0, 1.0))),
        view_direction=tuple(ctx_doc.get("view_direction", (0.0, 0.0, 1.0))),
        time=ctx_doc.get("time", 0.0),
        uniforms={k: tuple(v) for k, v in ctx_doc.get("uniforms", {}).items()},
    )
    result = interpret(genome, ctx)
    shaded = shade_genome(genome, ctx)
    sys.stdout.write(json.dumps({
        "vertex": {k: list(v) for k, v in result.vertex.items()},
        "fragment": {k: list(v) for k, v in result.fragment.items()},
        "nonfinite": result.nonfinite,
        "rgba": list(shaded.rgba),
        "discarded": shaded.discarded,
    }, indent=2) + "\n")
    return 0


def _cmd_check(args):
    genome = _load_genome(args.genome)
    report = genome.validate()
    if report.ok:
        note = f" ({len(report.orphans)} orphan nodes)" if report.orphans else ""
        print(f"ok: {len(genome.nodes)} nodes, {len(genome.in_edges)} edges{note}")
        return 0
    for v in report.violations:
        print(f"violation [{v.kind}] {v.subject}: {v.message}")
    return 1


def _cmd_serve(args):
    from .service import serve

    out_dir = args.out_dir or os.environ.get("SHADEREVO_OUT_DIR") or "shaderevo-out"
    config = EvolutionConfig()
    if args.config:
        doc = json.loads(Path(args.config).read_text(encoding="utf-8"))
        config = EvolutionConfig.from_doc(doc)
    static_dir = None
    if not args.headless:
        candidate = Path(args.static_dir) if args.static_dir \
            else Path(__file__).resolve().parents[2] / "frontend" / "dist"
        if candidate.is_dir():
            static_dir = candidate
        else:
            print(f"note: static dir {candidate} not found, serving API only",
                  file=sys.stderr)
    server = serve(out_dir, port=args.port, host=args.host, config=config,
                   seed=args.seed, static_dir=static_dir)
    host, port = server.server_address[:2]
    print(f"serving on http://{host}:{port}{'' if static_dir else ' (headless)'}")
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        server.shutdown()
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="shaderevo",
                                     description="Interactive shader evolution workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compile", help="compile a genome file to a shader bundle")
    p.add_argument("genome")
    p.add_argument("-o", "--output")
    p.set_defaults(func=_cmd_compile)

    p = sub.add_parser("eval", help="evaluate a genome with the CPU interpreter")
    p.add_argument("genome")
    p.add_argument("--ctx", help="JSON file with uv/time/normal/view overrides")
    p.set_defaults(func=_cmd_eval)

    p = sub.add_parser("check", help="validate a genome file")
    p.add_argument("genome")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--port", type=int, default=8734)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--out-dir", help="output directory (or $SHADEREVO_OUT_DIR)")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="session rng seed")
    p.add_argument("--headless", action="store_true", help="API only, no static files")
    p.add_argument("--static-dir", help="directory with the built web client")
    p.set_defaults(func=_cmd_serve)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ShaderEvoError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
