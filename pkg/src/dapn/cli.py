"""Command-line interface: ``dapn <command> ...``."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import encoding, engine, harness, netfmt, netgen, tm
from .encoding import Side
from .model import NetError

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config(spec: tm.TmSpec, args) -> tm.TmConfig:
    state = args.state
    if state is not None and state not in spec.states:
        raise tm.TmError(f"unknown state {state!r}")
    if args.tape is None:
        return spec.start_config(state)
    left, head, right = tm.parse_tape(spec, args.tape)
    if state is None:
        state = spec.start_config().state
    return tm.TmConfig(state, left, head, right)


def cmd_run(args) -> int:
    net = netfmt.parse_net(Path(args.net).read_text(encoding="utf-8"))
    mode = engine.Mode(args.mode)
    trace, marking = engine.run(net, None, mode, args.steps, args.snapshot_every)
    if args.trace:
        with open(args.trace, "w", newline="", encoding="utf-8") as f:
            trace.write_csv(f, net.n_places if args.snapshot_every else None)
    print(f"steps {trace.length} {'halted' if trace.halted else 'budget exhausted'}")
    for name, count in zip(net.places, marking):
        print(f"{name} {count}")
    return EXIT_OK


def cmd_build(args) -> int:
    net, layout = netgen.build_polyupn()
    _emit(netfmt.serialize_net(net), args.out)
    sys.stderr.write(netgen.build_log(net, layout))
    return EXIT_OK


def cmd_compile(args) -> int:
    net, layout = netgen.compile_tm(tm.load_tm(args.tm))
    _emit(netfmt.serialize_net(net), args.out)
    sys.stderr.write(netgen.build_log(net, layout))
    return EXIT_OK


def cmd_oracle(args) -> int:
    spec = tm.load_tm(args.tm)
    result = tm.tm_run(spec, _config(spec, args), args.steps)
    print(f"steps {len(result.log)}{' halted' if result.halted else ''}")
    print(f"state {result.config.state}")
    cells = tm.window(spec, result.config, args.window)
    cells[args.window] = f"[{cells[args.window]}]"
    print("window " + " ".join(cells))
    return EXIT_OK


def cmd_verify(args) -> int:
    spec = tm.load_tm(args.tm)
    net, layout = netgen.compile_tm(spec)
    cfg = _config(spec, args)
    report = harness.cross_validate(net, layout, spec, cfg, args.steps, args.window)
    print(report.summary())
    if args.report:
        rows = harness.complexity_report(net, layout, spec, cfg, args.steps)
        with open(args.report, "w", newline="", encoding="utf-8") as f:
            harness.write_csv(rows, f)
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_encode(args) -> int:
    print(encoding.encode_word(encoding.parse_word(args.word), Side(args.side)))
    return EXIT_OK


def cmd_decode(args) -> int:
    print(encoding.format_word(encoding.decode_word(args.code, Side(args.side))))
    return EXIT_OK


def _nonneg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dapn", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate a .dapn net")
    p.add_argument("net")
    p.add_argument("--steps", type=_nonneg, required=True)
    p.add_argument("--mode", choices=[m.value for m in engine.Mode], default="multichannel")
    p.add_argument("--trace", metavar="CSV")
    p.add_argument("--snapshot-every", type=int, metavar="S")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("build", help="emit PolyUPN(15,29)")
    p.add_argument("which", choices=["polyupn"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("compile", help="compile a TM file into a net")
    p.add_argument("tm")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compile)

    tape_help = 'tokens, head marked as "[x]" (default: first token)'
    p = sub.add_parser("oracle", help="run a TM directly")
    p.add_argument("tm")
    p.add_argument("--steps", type=_nonneg, required=True)
    p.add_argument("--tape", help=tape_help)
    p.add_argument("--state")
    p.add_argument("--window", type=_nonneg, default=16)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="compile a TM and cross-validate the net against it")
    p.add_argument("tm")
    p.add_argument("--steps", type=_nonneg, required=True)
    p.add_argument("--window", type=_nonneg, default=16)
    p.add_argument("--tape", help=tape_help)
    p.add_argument("--state")
    p.add_argument("--report", metavar="CSV")
    p.set_defaults(func=cmd_verify)

    for name, func in (("encode", cmd_encode), ("decode", cmd_decode)):
        p = sub.add_parser(name, help=f"{name} a tape word")
        p.add_argument("--side", choices=["left", "right"], required=True)
        if name == "encode":
            p.add_argument("word", help='e.g. "0 0 0/ 1"')
        else:
            p.add_argument("code", type=_nonneg)
        p.set_defaults(func=func)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return args.func(args)
    except NetError as e:
        print(f"dapn: invalid net: {e}", file=sys.stderr)
        return EXIT_FAIL
    except (ValueError, FileNotFoundError) as e:  # parse errors, unknown symbols, bad codes
        print(f"dapn: error: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
