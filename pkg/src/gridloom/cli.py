"""Command-line interface for the full teaching pipeline.

Every subcommand is a thin wrapper over session/solver operations; no model
logic lives here.  Exit codes: 0 success, 1 usage, 2 data or format error,
3 generate exhausted its restart budget on every requested sample.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .adjacency import LearningStrategy, diff_validity, format_diff_text
from .catalog import REFLECTIONS, ROTATIONS, PatternConfig
from .errors import GridloomError
from .grid import ingest_image, ingest_text
from .session import TeachingSession
from .solver import stats_text

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_EXHAUSTED = 3


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors by default; the contract wants 1
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _rect(text):
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("rect must be x,y,w,h")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("rect values must be integers")


def _symmetry(text):
    if not text:
        return frozenset()
    opts = frozenset(p.strip() for p in text.split(",") if p.strip())
    bad = opts - {ROTATIONS, REFLECTIONS}
    if bad:
        raise argparse.ArgumentTypeError(
            f"symmetry options are 'rotations' and 'reflections', got {sorted(bad)}"
        )
    return opts


def _read_example_grid(path: Path):
    if path.suffix.lower() == ".txt":
        return ingest_text(path.read_text())
    return ingest_image(path.read_bytes())


def build_parser():
    parser = _Parser(prog="gridloom", description="Example-driven tile generator.")
    sub = parser.add_subparsers(dest="command", required=True, metavar="command")

    ses = sub.add_parser("session", help="manage a teaching session directory")
    ses_sub = ses.add_subparsers(dest="session_command", required=True, metavar="action")

    p = ses_sub.add_parser("init", help="create a new session directory")
    p.add_argument("--session", required=True, help="session directory")
    p.add_argument("--n", type=int, default=3, help="pattern side length (default 3)")
    p.add_argument(
        "--strategy",
        choices=[s.value for s in LearningStrategy],
        default=LearningStrategy.MGG_MINUS_NEGATIVES.value,
    )
    p.add_argument("--symmetry", type=_symmetry, default=frozenset())
    p.add_argument(
        "--no-wrap-input",
        action="store_true",
        help="read example images without toroidal wraparound",
    )
    p.set_defaults(func=cmd_session_init)

    for label in ("positive", "negative"):
        p = ses_sub.add_parser(f"add-{label}", help=f"add a {label} example image")
        p.add_argument("--session", required=True)
        p.add_argument("file", help="PNG image (or .txt character grid)")
        p.add_argument(
            "--origin", choices=["authored", "imported"], default="authored"
        )
        if label == "positive":
            wrap = p.add_mutually_exclusive_group()
            wrap.add_argument("--wrap", dest="wrap", action="store_true", default=None)
            wrap.add_argument("--no-wrap", dest="wrap", action="store_false")
        p.set_defaults(func=cmd_session_add, label=label)

    p = ses_sub.add_parser(
        "crop-negative", help="crop a region of a work sample into an example"
    )
    p.add_argument("--session", required=True)
    p.add_argument("--from", dest="sample", required=True, metavar="SAMPLE_ID")
    p.add_argument("--rect", type=_rect, required=True, metavar="X,Y,W,H")
    p.add_argument("--label", choices=["negative", "positive"], default="negative")
    p.set_defaults(func=cmd_session_crop)

    p = sub.add_parser("train", help="retrain the catalog and validity whitelist")
    p.add_argument("--session", required=True)
    p.add_argument("--strategy", choices=[s.value for s in LearningStrategy])
    p.add_argument("--n", type=int)
    p.add_argument("--symmetry", type=_symmetry)
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("generate", help="generate a portfolio of work samples")
    p.add_argument("--session", required=True)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--width", type=int, default=32)
    p.add_argument("--height", type=int, default=32)
    p.add_argument("--no-wrap", action="store_true", help="non-toroidal output")
    p.add_argument("--max-restarts", type=int, default=9)
    p.add_argument("--backend", choices=["pure", "compiled"], default=None)
    p.set_defaults(func=cmd_generate)

    ins = sub.add_parser("inspect", help="inspect trained artifacts")
    ins_sub = ins.add_subparsers(dest="inspect_command", required=True, metavar="what")
    p = ins_sub.add_parser("diff", help="triple diff between two training runs")
    p.add_argument("--session", help="session directory (for iteration numbers)")
    p.add_argument("--a", required=True, help="iteration number or validity JSON path")
    p.add_argument("--b", required=True, help="iteration number or validity JSON path")
    p.add_argument("--json", action="store_true", help="emit JSON instead of text")
    p.set_defaults(func=cmd_inspect_diff)

    p = sub.add_parser("serve", help="start the HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument(
        "--session-root",
        default="sessions",
        help="directory holding one subdirectory per session",
    )
    p.add_argument(
        "--ui-dir",
        default=None,
        help="static UI bundle to mount at /ui (e.g. frontend/dist)",
    )
    p.set_defaults(func=cmd_serve)

    return parser


def cmd_session_init(args):
    root = Path(args.session)
    if (root / "manifest.json").exists():
        raise GridloomError(f"session already exists at {root}")
    cfg = PatternConfig(
        n=args.n, wrap_input=not args.no_wrap_input, symmetry=args.symmetry
    )
    TeachingSession(cfg, strategy=args.strategy, root=root)
    print(f"initialized session at {root}")
    return EXIT_OK


def cmd_session_add(args):
    session = TeachingSession.load(args.session)
    grid = _read_example_grid(Path(args.file))
    wrap = getattr(args, "wrap", None)
    example = session.add_example(
        grid, args.label, origin={"kind": args.origin}, wrap=wrap
    )
    print(
        f"added {example.id} ({example.label}, "
        f"{example.grid.width}x{example.grid.height})"
    )
    return EXIT_OK


def cmd_session_crop(args):
    session = TeachingSession.load(args.session)
    example = session.add_cropped_example(args.sample, args.rect, args.label)
    x, y, w, h = args.rect
    print(f"added {example.id} ({example.label}, {w}x{h} crop of {args.sample})")
    return EXIT_OK


def cmd_train(args):
    session = TeachingSession.load(args.session)
    if args.strategy:
        session.strategy = LearningStrategy(args.strategy)
    if args.n is not None or args.symmetry is not None:
        session.pattern_cfg = PatternConfig(
            n=args.n if args.n is not None else session.pattern_cfg.n,
            wrap_input=session.pattern_cfg.wrap_input,
            symmetry=args.symmetry
            if args.symmetry is not None
            else session.pattern_cfg.symmetry,
        )
    record = session.retrain()
    model = session.model
    weighted = sum(1 for w in model.catalog.weights if w > 0)
    print(f"iteration {record.iteration}")
    print(f"patterns {len(model.catalog)} ({weighted} weighted)")
    print(f"valid triples {len(model.valid.triples)}")
    print(f"validity digest {record.validity_digest}")
    if model.starved:
        print(f"starved pattern/direction pairs {len(model.starved)}")
    return EXIT_OK


def cmd_generate(args):
    session = TeachingSession.load(args.session)
    portfolio = session.generate_portfolio(
        count=args.count,
        base_seed=args.seed,
        out_width=args.width,
        out_height=args.height,
        wrap_output=not args.no_wrap,
        max_restarts=args.max_restarts,
        backend=args.backend,
    )
    failures = 0
    for sample in portfolio.samples:
        print(f"{sample.sid} {stats_text(sample.result)}")
        if sample.result.solved:
            ext = "png" if session.palette.kind == "color" else "txt"
            if session.root is not None:
                print(f"wrote {session.root / 'samples' / (sample.sid + '.' + ext)}")
        else:
            failures += 1
    if failures == len(portfolio.samples):
        print("all samples exhausted their restart budget", file=sys.stderr)
        return EXIT_EXHAUSTED
    return EXIT_OK


def _load_validity_doc(session, value):
    try:
        iteration = int(value)
    except ValueError:
        return json.loads(Path(value).read_text())
    if session is None:
        raise GridloomError("--session is required when diffing by iteration number")
    return session.record_for(iteration).validity_doc


def cmd_inspect_diff(args):
    session = TeachingSession.load(args.session) if args.session else None
    doc_a = _load_validity_doc(session, args.a)
    doc_b = _load_validity_doc(session, args.b)
    diff = diff_validity(doc_a, doc_b)
    if args.json:
        print(json.dumps(diff, indent=2, sort_keys=True))
    else:
        sys.stdout.write(format_diff_text(diff))
    return EXIT_OK


def cmd_serve(args):
    import uvicorn

    from .service import create_app

    ui_dir = Path(args.ui_dir) if args.ui_dir else None
    app = create_app(Path(args.session_root), ui_dir=ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return EXIT_OK


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if exc.code is not None else EXIT_OK
    try:
        return args.func(args)
    except GridloomError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return EXIT_DATA
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
