"""Command-line front end.

Exit codes: 0 success, 1 usage error, 2 data error.
"""

from __future__ import annotations

import argparse
import hashlib
import io
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path

from . import ledger as ledger_mod
from . import occam, sequence, strategy
from .errors import ChanceCheckError
from .probability import DEFAULT_INFORMATIVE_CUTOFF

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2


class UsageError(Exception):
    pass


class DataError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class Report:
    command: str
    inputs_digest: str
    results: dict
    warnings: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "command": self.command,
                "inputs_digest": self.inputs_digest,
                "results": self.results,
                "warnings": self.warnings,
            },
            indent=2,
        )


def _digest(params: dict, paths=()) -> str:
    h = hashlib.sha256()
    h.update(json.dumps(params, sort_keys=True, default=str).encode())
    for path in paths:
        h.update(b"\0")
        h.update(Path(path).read_bytes())
    return h.hexdigest()


def _read(path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror or exc}") from None


def _pct(x: float) -> str:
    return f"{x:.6g} ({x * 100:.6g}%)"


def _emit(report: Report, as_json: bool, lines: list[str], out) -> None:
    if as_json:
        print(report.to_json(), file=out)
        return
    for line in lines:
        print(line, file=out)
    for w in report.warnings:
        print(f"warning: {w}", file=out)
    print(f"inputs sha256: {report.inputs_digest}", file=out)


def cmd_eval(args, out) -> int:
    if args.attempts < 1:
        raise UsageError("--attempts must be at least 1")
    if not 0.0 <= args.risk <= 1.0:
        raise UsageError("--risk must lie in [0, 1]")
    trades = strategy.ingest_trades(_read(args.trades))
    if not trades:
        raise DataError(f"{args.trades}: no trades")
    paths = [args.trades]
    if args.baseline is not None:
        p0, source = args.baseline, "given"
    else:
        if args.prices is None:
            raise UsageError("give --baseline or --prices with --direction")
        prices = strategy.load_prices(_read(args.prices))
        p0 = strategy.baseline_win_prob(prices, args.direction)
        source = f"prices ({args.direction})"
        paths.append(args.prices)
    if not 0.0 <= p0 <= 1.0:
        raise UsageError("--baseline must lie in [0, 1]")
    wins, n = strategy.win_count(trades)
    value = strategy.track_record_uncertainty(
        trades, p0, args.attempts, strict=not args.equal_or_better
    )
    verdict = "significant" if value <= args.risk else "not significant"
    warnings = []
    if any(t.size is not None for t in trades):
        warnings.append("trade sizes were parsed but do not weight the uncertainty")
    report = Report(
        "eval",
        _digest(
            {"baseline": args.baseline, "direction": args.direction,
             "attempts": args.attempts, "risk": args.risk,
             "equal_or_better": args.equal_or_better},
            paths,
        ),
        {
            "wins": wins,
            "trades": n,
            "p0": p0,
            "p0_source": source,
            "attempts": args.attempts,
            "comparison": ">=" if args.equal_or_better else ">",
            "uncertainty": value,
            "risk": args.risk,
            "verdict": verdict,
        },
        warnings,
    )
    lines = [
        f"wins: {wins} / {n} trades",
        f"baseline win probability p0: {p0:.6g} [{source}]",
        f"attempts: {args.attempts}",
        f"random wins {'>=' if args.equal_or_better else '>'} {wins}: uncertainty {_pct(value)}",
        f"verdict: {verdict} at risk threshold {args.risk:g}",
    ]
    _emit(report, args.json, lines, out)
    return EXIT_OK


def cmd_monitor(args, out) -> int:
    trades = strategy.ingest_trades(_read(args.trades))
    if not 0.0 < args.threshold < 1.0:
        raise UsageError("--threshold must lie in (0, 1)")
    if args.window < 1:
        raise UsageError("--window must be at least 1")
    states = strategy.replay_control(
        (t.outcome for t in trades), args.window, args.threshold, args.baseline
    )
    steps = [
        {"index": i, "outcome": t.outcome.value, "probability": s.probability,
         "mode": s.mode.value}
        for i, (t, s) in enumerate(zip(trades, states), start=1)
    ]
    switches = sum(1 for a, b in zip(states, states[1:]) if a.mode is not b.mode)
    final = states[-1].mode.value if states else strategy.Mode.LIVE.value
    report = Report(
        "monitor",
        _digest({"window": args.window, "threshold": args.threshold,
                 "baseline": args.baseline}, [args.trades]),
        {"window": args.window, "threshold": args.threshold, "p0": args.baseline,
         "steps": steps, "final_mode": final, "mode_switches": switches},
    )
    lines = ["index,probability,mode"]
    lines += [f"{s['index']},{s['probability']:.12g},{s['mode']}" for s in steps]
    lines.append(f"final mode: {final}")
    _emit(report, args.json, lines, out)
    return EXIT_OK


def _write_or_print(text: str, path, out) -> None:
    if path:
        Path(path).write_text(text, encoding="utf-8")
    else:
        out.write(text)


def cmd_stpetersburg(args, out) -> int:
    if args.l_max < 10:
        raise UsageError("--l-max must be at least 10")
    if args.step < 1:
        raise UsageError("--step must be positive")
    rows = strategy.st_petersburg_curve(args.l_max, args.step)
    buf = io.StringIO()
    buf.write("L,EV,AB,beat_prob\n")
    for r in rows:
        buf.write(f"{r.L},{r.ev:g},{r.ab:g},{r.beat_prob:.12g}\n")
    if args.json:
        report = Report(
            "stpetersburg",
            _digest({"l_max": args.l_max, "step": args.step}),
            {"rows": [{"L": r.L, "EV": r.ev, "AB": r.ab, "beat_prob": r.beat_prob}
                      for r in rows]},
        )
        if args.out:
            _write_or_print(buf.getvalue(), args.out, out)
        print(report.to_json(), file=out)
    else:
        _write_or_print(buf.getvalue(), args.out, out)
    return EXIT_OK


def cmd_equity_sim(args, out) -> int:
    if args.replicates < 100:
        raise UsageError("--replicates must be at least 100")
    if args.prices:
        prices = strategy.load_prices(_read(args.prices))
        paths = [args.prices]
    else:
        prices = strategy.load_synthetic_prices()
        paths = []
    equity = strategy.random_equity_line(prices, args.seed)
    est = strategy.equity_uncertainty(equity[-1], prices, args.replicates, args.seed)
    csv_text = "time,equity\n" + "".join(
        f"{t},{e:.12g}\n" for t, e in zip(prices.times, equity)
    )
    report = Report(
        "equity-sim",
        _digest({"seed": args.seed, "replicates": args.replicates,
                 "prices": args.prices or "bundled:synthetic_400"}, paths),
        {"final_equity": float(equity[-1]), "estimate": est.point,
         "lower": est.lower, "upper": est.upper, "confidence": est.confidence,
         "replicates": est.replicates, "seed": args.seed},
    )
    if args.out:
        _write_or_print(csv_text, args.out, out)
    elif not args.json:
        out.write(csv_text)
    lines = [
        f"final equity: {equity[-1]:g}",
        f"equal-or-better probability: {est.point:.6g} "
        f"[{est.lower:.6g}, {est.upper:.6g}] at {est.confidence:.0%}, "
        f"{est.replicates} replicates",
    ]
    if not args.json and not args.out:
        lines = ["# " + line for line in lines]
    _emit(report, args.json, lines, out)
    return EXIT_OK


def _scope(args):
    if args.all or not args.agents:
        return ledger_mod.ALL
    return [a.strip() for a in args.agents.split(",") if a.strip()]


def cmd_ledger(args, out) -> int:
    path = Path(args.ledger)
    if args.action == "register":
        led = ledger_mod.load(path, bind=True) if path.exists() else ledger_mod.Ledger(path=path)
        rec = ledger_mod.AttemptRecord(
            id=args.id, agent=args.agent, timestamp=args.ts,
            n_predictions=args.n, n_successes=args.k, p0=args.p0, note=args.note,
        )
        led.register(rec)
        report = Report("ledger register", _digest(rec.to_json(), [path]),
                        {"id": rec.id, "records": len(led)})
        _emit(report, args.json, [f"registered {rec.id} ({len(led)} records)"], out)
        return EXIT_OK
    if not path.exists():
        raise DataError(f"cannot read {path}: no such file")
    led = ledger_mod.load(path)
    if args.action == "uncertainty":
        scope = _scope(args)
        rep = led.assess(args.id, scope)
        scope_label = "ALL" if scope is ledger_mod.ALL else sorted(scope)
        report = Report(
            "ledger uncertainty",
            _digest({"id": args.id, "scope": scope_label}, [path]),
            {"id": args.id, "scope": scope_label, "attempts": rep.attempts,
             "single_attempt": rep.single_attempt, "uncertainty": rep.value},
            rep.warnings,
        )
        lines = [
            f"result {args.id}: scope {scope_label}, {rep.attempts} attempt(s)",
            f"single-attempt probability: {_pct(rep.single_attempt)}",
            f"uncertainty: {_pct(rep.value)}",
        ]
        _emit(report, args.json, lines, out)
        return EXIT_OK
    ids = args.ids
    value = led.reviewer_combine(ids, args.cutoff)
    report = Report(
        "ledger combine",
        _digest({"ids": ids, "cutoff": args.cutoff}, [path]),
        {"ids": ids, "cutoff": args.cutoff, "uncertainty": value},
    )
    _emit(report, args.json, [f"combined uncertainty of {', '.join(ids)}: {_pct(value)}"], out)
    return EXIT_OK


def cmd_sequence(args, out) -> int:
    trace = sequence.parse_trace(_read(args.trace))
    events = sequence.parse_events(_read(args.events))
    if not events:
        raise DataError(f"{args.events}: no events")
    rep = sequence.assess_events(trace, events)
    report = Report(
        "sequence",
        _digest({}, [args.trace, args.events]),
        {
            "change_points": rep.change_points,
            "events": [
                {"a": e.event.a, "b": e.event.b, "value": e.event.predicted_value,
                 "probability": e.probability, "dependence": e.dependence.value}
                for e in rep.events
            ],
            "compound": rep.compound,
        },
        rep.warnings,
    )
    lines = [f"change points: {' '.join(map(str, rep.change_points)) or '(none)'}"]
    for i, e in enumerate(rep.events, start=1):
        lines.append(
            f"event {i} [{e.event.a}, {e.event.b}] -> {e.event.predicted_value}: "
            f"p = {e.probability:.6g}, {e.dependence.value}"
        )
    lines.append(f"compound probability: {rep.compound:.6g}")
    _emit(report, args.json, lines, out)
    return EXIT_OK


def cmd_occam(args, out) -> int:
    space1, hist1 = occam.load_history(args.h1)
    space2, hist2 = occam.load_history(args.h2)
    if (space1.C, space1.N) != (space2.C, space2.N):
        raise DataError("the two histories use different sequence spaces")
    cmp = occam.compare(hist1, hist2, space1)
    report = Report(
        "occam",
        _digest({}, list(args.h1) + list(args.h2)),
        {"C": space1.C, "N": space1.N, "nph1": cmp.nph1, "nph2": cmp.nph2,
         "ntph1": cmp.ntph1, "ntph2": cmp.ntph2, "case": cmp.case.value,
         "preferred": cmp.preferred, "prob_true1": cmp.prob_true1,
         "prob_true2": cmp.prob_true2},
    )
    lines = [
        f"space: C={space1.C} N={space1.N} ({space1.size} sequences)",
        f"H1: NPH={cmp.nph1} NTPH={cmp.ntph1} P(true)={cmp.prob_true1:.6g}",
        f"H2: NPH={cmp.nph2} NTPH={cmp.ntph2} P(true)={cmp.prob_true2:.6g}",
        f"case: {cmp.case.value}; preferred: {cmp.preferred}",
    ]
    _emit(report, args.json, lines, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="chancecheck",
        description="Probability that a result could have been obtained at random.",
    )
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p):
        p.add_argument("--json", action="store_true", help="machine-readable output")

    p = sub.add_parser("eval", help="uncertainty of a trade log")
    p.add_argument("--trades", required=True)
    p.add_argument("--baseline", type=float, help="random win probability p0")
    p.add_argument("--prices", help="price CSV to derive p0 from")
    p.add_argument("--direction", choices=["long", "short"], default="long")
    p.add_argument("--attempts", type=int, default=1)
    p.add_argument("--risk", type=float, default=0.05)
    p.add_argument(
        "--equal-or-better",
        action="store_true",
        help="count random records with equal wins too (default: strictly more)",
    )
    common(p)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("monitor", help="replay the LIVE/VIRTUAL gate over a trade log")
    p.add_argument("--trades", required=True)
    p.add_argument("--window", type=int, required=True)
    p.add_argument("--threshold", type=float, required=True)
    p.add_argument("--baseline", type=float, default=0.5)
    common(p)
    p.set_defaults(func=cmd_monitor)

    p = sub.add_parser("stpetersburg", help="beat-probability curve as CSV")
    p.add_argument("--l-max", type=int, default=200)
    p.add_argument("--step", type=int, default=10)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_stpetersburg)

    p = sub.add_parser("equity-sim", help="coin-toss equity line and its uncertainty")
    p.add_argument("--prices", help="price CSV (default: bundled 400-day series)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--replicates", type=int, default=10_000)
    p.add_argument("--out")
    common(p)
    p.set_defaults(func=cmd_equity_sim)

    p = sub.add_parser("ledger", help="hypothesis ledger")
    lsub = p.add_subparsers(dest="action", required=True, parser_class=_Parser)
    r = lsub.add_parser("register")
    r.add_argument("--ledger", required=True)
    r.add_argument("--id", required=True)
    r.add_argument("--agent", required=True)
    r.add_argument("--ts", type=int, required=True)
    r.add_argument("--n", type=int, required=True)
    r.add_argument("--k", type=int, required=True)
    r.add_argument("--p0", type=float, required=True)
    r.add_argument("--note", default="")
    common(r)
    u = lsub.add_parser("uncertainty")
    u.add_argument("--ledger", required=True)
    u.add_argument("--id", required=True)
    scope = u.add_mutually_exclusive_group()
    scope.add_argument("--agents", help="comma-separated agents in scope")
    scope.add_argument("--all", action="store_true", help="every agent (default)")
    common(u)
    c = lsub.add_parser("combine")
    c.add_argument("--ledger", required=True)
    c.add_argument("--ids", nargs="+", required=True)
    c.add_argument("--cutoff", type=float, default=DEFAULT_INFORMATIVE_CUTOFF)
    common(c)
    p.set_defaults(func=cmd_ledger)

    p = sub.add_parser("sequence", help="compound probability of forecasts on a trace")
    p.add_argument("--trace", required=True)
    p.add_argument("--events", required=True)
    common(p)
    p.set_defaults(func=cmd_sequence)

    p = sub.add_parser("occam", help="compare two hypothesis histories")
    p.add_argument("--h1", nargs="+", required=True, help="rule tables in time order")
    p.add_argument("--h2", nargs="+", required=True)
    common(p)
    p.set_defaults(func=cmd_occam)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"chancecheck: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (DataError, ChanceCheckError, ValueError, OSError) as exc:
        print(f"chancecheck: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
