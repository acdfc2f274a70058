"""Write the (p, q, alpha) constant table to CSV and summarise it.

Thin wrapper over ``revhardy scan``; the summary line reports the largest
lower factor and the largest profile spread among re-checked rows.
"""

import argparse
import csv
import io
import sys

from revhardy.cli import RunConfig, render, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--space", default="euclidean:1")
    ap.add_argument("--p-grid", default="-3:-0.25:12")
    ap.add_argument("--q-grid", default="-3:-0.25:12")
    ap.add_argument("--alpha-grid", default="-2:2:5")
    ap.add_argument("--check-rows", type=int, default=20)
    ap.add_argument("--out", default="scan.csv")
    args = ap.parse_args()

    cfg = RunConfig("scan", space=args.space, p_grid=args.p_grid, q_grid=args.q_grid,
                    alpha_grid=args.alpha_grid, check_rows=args.check_rows,
                    numeric_check=True, format="csv")
    env, code = run(cfg)
    text = render(env, "csv")
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)
    rows = list(csv.DictReader(io.StringIO(text)))
    good = [r for r in rows if not r["reason"]]
    spreads = [float(r["numeric_spread"]) for r in good if r["numeric_spread"]]
    print(f"{len(rows)} rows, {len(good)} admissible, verdict {env['verdict']}")
    if good:
        print(f"max factor {max(float(r['factor']) for r in good):.6g}")
    if spreads:
        print(f"max profile spread over {len(spreads)} checked rows {max(spreads):.3g}")
    sys.exit(code)


if __name__ == "__main__":
    main()
