"""Sample the boundary curve, write CSV and SVG, and summarize its roughness."""

from __future__ import annotations

import argparse
from pathlib import Path

from lexboundary import boundary


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n", type=int, default=boundary.DEFAULT_N)
    ap.add_argument("--seed", type=int, default=boundary.DEFAULT_SEED)
    ap.add_argument("--resolution", type=int, default=4096)
    ap.add_argument("--depth", type=int, default=boundary.DEFAULT_DEPTH)
    ap.add_argument("--out-dir", type=Path, default=Path("curve_out"))
    args = ap.parse_args()

    setup = boundary.theorem_setup(args.n, args.seed)
    args.out_dir.mkdir(parents=True, exist_ok=True)
    series = boundary.sample_curve(setup, args.resolution, args.depth)
    (args.out_dir / "curve.csv").write_text(series.to_csv())
    (args.out_dir / "curve.svg").write_text(series.to_svg())
    (args.out_dir / "setup.json").write_text(setup.to_json() + "\n")

    print(f"gamma = {setup.gamma:.12f}  (attempt {setup.attempt})")
    print(f"endpoints: ({setup.alpha1:.10e}, {setup.beta1:.10f}) -> ({setup.alpha2:.10e}, {setup.beta2:.10f})")
    print(f"{len(series.points)} points, truncation bound {series.trunc_bound:.2e}")
    print("j  M_j  M_j / M_(j-1)")
    previous = None
    for j, m in zip(range(4, 21), boundary.quotient_scan(setup, 4, 20, args.depth)):
        ratio = "" if previous is None else f"{m / previous:.4f}"
        print(f"{j:2d}  {m:.6e}  {ratio}")
        previous = m


if __name__ == "__main__":
    main()
