#!/usr/bin/env python3
"""Export the bundled data products: leak curves for every frequency preset,
the preset tables themselves, and the protocol comparison table.

Writes CSV/JSON files into --out-dir (default ./exports). The curve CSVs
carry full double precision so downstream plots reproduce exactly.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from qutrit_pingpong.comparison import comparison_curve_data, format_protocol_table, protocol_table
from qutrit_pingpong.information import FREQUENCY_PRESETS, TRIT_TO_BIT, info_curve, source_entropy


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="exports", help="output directory (default ./exports)")
    parser.add_argument("--points", type=int, default=67, help="curve grid size (default 67)")
    args = parser.parse_args(argv)
    if args.points < 2:
        parser.error("--points must be at least 2")

    out = Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(0.0, 2.0 / 3.0, args.points)

    for name, freq in FREQUENCY_PRESETS.items():
        rows = info_curve(freq, grid)
        curve_path = out / f"curve_{name}.csv"
        with curve_path.open("w", encoding="utf-8") as fh:
            fh.write("d_z,I0_trits,I0_bits\n")
            for d, v in rows:
                fh.write(f"{d:.17g},{v:.17g},{v * TRIT_TO_BIT:.17g}\n")
        freq_path = out / f"freq_{name}.json"
        freq_path.write_text(
            json.dumps({"p": [[float(x) for x in row] for row in freq.p]}, indent=2) + "\n"
        )
        h = source_entropy(freq).value
        print(f"{name:11s} H = {h:.5f} trit  ->  {curve_path}")

    cmp_rows = comparison_curve_data()
    cmp_path = out / "comparison_curve.csv"
    with cmp_path.open("w", encoding="utf-8") as fh:
        fh.write("# qubit-variant curves are published reference values, not recomputed here\n")
        fh.write("d,qutrit_bits\n")
        for d, bits in cmp_rows:
            fh.write(f"{d:.17g},{bits:.17g}\n")
    table_path = out / "protocol_table.json"
    table_path.write_text(
        json.dumps(
            [
                {
                    "name": r.name,
                    "carrier_dim": r.carrier_dim,
                    "group_size": r.group_size,
                    "capacity_bits": r.capacity_bits,
                    "d_max": [r.d_max.numerator, r.d_max.denominator],
                    "d_min": [r.d_min.numerator, r.d_min.denominator],
                }
                for r in protocol_table()
            ],
            indent=2,
        )
        + "\n"
    )
    print(f"comparison  ->  {cmp_path}, {table_path}")
    print()
    print(format_protocol_table())
    return 0


if __name__ == "__main__":
    sys.exit(main())
