"""Normalized-Laplacian spectrum of a generated graph's LWCC, before and after rewiring.

Prints a two-column histogram (bin centre, count) per graph; pipe into
any plotting tool. Full G1 exceeds the dense cap, so it runs a scaled
copy with ``--nodes``.

    python3 scripts/spectrum_histogram.py --preset g1 --nodes 4000 --bins 50
"""

import argparse
from dataclasses import replace

from socialgen.metrics import connected_components, laplacian_spectrum
from socialgen.pipeline import generate, rewire
from socialgen.presets import PRESETS
from socialgen.rewire import RewireConfig


def main():
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--preset", default="g4", choices=sorted(PRESETS))
    ap.add_argument("--nodes", type=int, help="override the preset's node count")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--bins", type=int, default=40)
    args = ap.parse_args()

    model = PRESETS[args.preset]
    if args.nodes:
        model = replace(model, n=args.nodes)
    g, _ = generate(model, args.seed)
    for label in ("intermediary", "rewired"):
        if label == "rewired":
            rewire(g, RewireConfig(), args.seed)
        _, lwcc = connected_components(g)
        centers, counts = laplacian_spectrum(g, lwcc).histogram(args.bins)
        print(f"# {label}: LWCC {len(lwcc)} nodes")
        for c, k in zip(centers, counts):
            print(f"{c:.3f}\t{k}")


if __name__ == "__main__":
    main()
