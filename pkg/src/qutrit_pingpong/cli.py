"""Command-line front end.

Subcommands: entropy, curve, attack-verify, simulate, rounds, compare.
Exit codes: 0 success, 2 bad input or usage, 3 numerical failure
(including a failed reference verification).
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .attack import verify_reference_attacks
from .comparison import comparison_curve_data, format_protocol_table, protocol_table
from .information import (
    FREQUENCY_PRESETS,
    TRIT_TO_BIT,
    FrequencyTable,
    info_curve,
    load_frequency_table,
    source_entropy,
)
from .protocol import (
    ProtocolConfig,
    load_protocol_config,
    rounds_for_confidence,
    run,
    write_transcript,
)
from .qutrit import NumericalError


def _add_freq_options(parser: argparse.ArgumentParser) -> None:
    group = parser.add_mutually_exclusive_group()
    group.add_argument("--freq", metavar="PATH", help="frequency table JSON file")
    group.add_argument(
        "--preset",
        choices=sorted(FREQUENCY_PRESETS),
        help="named bigram frequency preset",
    )


def _resolve_freq(args) -> FrequencyTable:
    if getattr(args, "freq", None):
        return load_frequency_table(args.freq)
    if getattr(args, "preset", None):
        return FREQUENCY_PRESETS[args.preset]
    return FrequencyTable.uniform()


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qutrit-pingpong",
        description="Qutrit ping-pong protocol: attack analysis and simulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_entropy = sub.add_parser("entropy", help="Shannon entropy of a bigram source")
    _add_freq_options(p_entropy)
    p_entropy.add_argument("--unit", choices=["trit", "bit", "both"], default="both")

    p_curve = sub.add_parser("curve", help="information vs detection for the symmetric attack")
    _add_freq_options(p_curve)
    p_curve.add_argument("--points", type=int, default=67, help="grid size (default 67)")
    p_curve.add_argument("--out", metavar="PATH", help="write CSV here instead of stdout")

    sub.add_parser("attack-verify", help="recompute the bundled reference attack rows")

    p_sim = sub.add_parser("simulate", help="run the full-state protocol simulation")
    p_sim.add_argument("--config", required=True, metavar="PATH", help="run config JSON file")
    p_sim.add_argument("--seed", type=int, help="override the config seed")
    p_sim.add_argument("--out", metavar="PATH", help="write the report JSON here")
    p_sim.add_argument("--transcript", metavar="PATH", help="write a per-cycle CSV transcript")

    p_rounds = sub.add_parser("rounds", help="control rounds needed to reach a confidence")
    p_rounds.add_argument("d", type=float, help="per-round detection probability")
    p_rounds.add_argument("target", type=float, nargs="?", default=0.99, help="confidence (default 0.99)")

    p_cmp = sub.add_parser("compare", help="compare ping-pong protocol variants")
    p_cmp.add_argument("--json", action="store_true", help="emit the table as JSON")
    p_cmp.add_argument("--curve-out", metavar="PATH", help="also write the qutrit leak curve CSV")
    _add_freq_options(p_cmp)
    p_cmp.add_argument("--points", type=int, default=67, help="curve grid size (default 67)")

    return parser


def _cmd_entropy(args) -> int:
    freq = _resolve_freq(args)
    if args.unit in ("trit", "both"):
        print(f"H = {source_entropy(freq, 'trit').value:.4f} trit")
    if args.unit in ("bit", "both"):
        print(f"H = {source_entropy(freq, 'bit').value:.4f} bit")
    return 0


def _curve_rows(freq: FrequencyTable, points: int) -> list[tuple[float, float]]:
    if points < 2:
        raise ValueError(f"curve needs at least 2 points, got {points}")
    grid = np.linspace(0.0, 2.0 / 3.0, points)
    return info_curve(freq, grid)


def _cmd_curve(args) -> int:
    freq = _resolve_freq(args)
    rows = _curve_rows(freq, args.points)
    lines = ["d_z,I0_trits,I0_bits"]
    for d, v in rows:
        lines.append(f"{d:.17g},{v:.17g},{v * TRIT_TO_BIT:.17g}")
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote {len(rows)} points to {args.out}")
    else:
        sys.stdout.write(text)
    h = source_entropy(freq).value
    print(
        f"endpoints: I(0) = {rows[0][1]:.4f}, I(2/3) = {rows[-1][1]:.4f}, source H = {h:.4f} (trits)",
        file=sys.stderr,
    )
    return 0


def _cmd_attack_verify(args) -> int:
    checks = verify_reference_attacks()
    worst = 0.0
    failed = 0
    for idx, chk in enumerate(checks, start=1):
        worst = max(worst, chk.deviation)
        failed += 0 if chk.passed else 1
        tag = "ok" if chk.passed else "FAIL"
        kind = "symmetric" if chk.row.symmetric else "general"
        print(
            f"row {idx:2d} [{kind:9s}] d_x = {chk.d_x:.6f} (table {chk.row.d_x:.6f})  "
            f"d_z = {chk.d_z:.6f} (table {chk.row.d_z:.6f})  dev = {chk.deviation:.2e}  {tag}"
        )
    print(f"max deviation {worst:.2e} over {len(checks)} rows")
    if failed:
        print(f"{failed} row(s) exceeded tolerance", file=sys.stderr)
        return 3
    print("PASS")
    return 0


def _cmd_simulate(args) -> int:
    config = load_protocol_config(args.config)
    if args.seed is not None:
        if args.seed < 0:
            raise ValueError("seed must be non-negative")
        config = ProtocolConfig(
            cycles=config.cycles,
            seed=args.seed,
            freq=config.freq,
            attack=config.attack,
            q=config.q,
            basis_weights=config.basis_weights,
            ancilla=config.ancilla,
        )
    if args.transcript:
        report, transcript = run(config, keep_transcript=True)
        write_transcript(transcript, args.transcript)
    else:
        report = run(config)
    text = report.to_json() + "\n"
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        print(f"wrote report to {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_rounds(args) -> int:
    print(rounds_for_confidence(args.d, args.target))
    return 0


def _cmd_compare(args) -> int:
    if args.json:
        rows = [
            {
                "name": r.name,
                "carrier_dim": r.carrier_dim,
                "group_size": r.group_size,
                "capacity_bits": r.capacity_bits,
                "d_max": [r.d_max.numerator, r.d_max.denominator],
                "d_min": [r.d_min.numerator, r.d_min.denominator],
            }
            for r in protocol_table()
        ]
        print(json.dumps(rows, indent=2))
    else:
        print(format_protocol_table())
    if args.curve_out:
        freq = _resolve_freq(args)
        if args.points < 2:
            raise ValueError(f"curve needs at least 2 points, got {args.points}")
        grid = np.linspace(0.0, 2.0 / 3.0, args.points)
        rows = comparison_curve_data(freq, grid)
        with open(args.curve_out, "w", encoding="utf-8") as fh:
            fh.write("# qubit-variant curves are published reference values, not recomputed here\n")
            fh.write("d,qutrit_bits\n")
            for d, bits in rows:
                fh.write(f"{d:.17g},{bits:.17g}\n")
        print(f"wrote {len(rows)} curve points to {args.curve_out}")
    return 0


_DISPATCH = {
    "entropy": _cmd_entropy,
    "curve": _cmd_curve,
    "attack-verify": _cmd_attack_verify,
    "simulate": _cmd_simulate,
    "rounds": _cmd_rounds,
    "compare": _cmd_compare,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else 0
    try:
        return _DISPATCH[args.command](args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entry() -> None:
    raise SystemExit(main())
