#!/usr/bin/env python3
"""Write seeded random chain fixtures as .mdp files.

Example:
    python scripts/generate_chains.py --seed 7 --count 5 --max-states 12 \
        --density 0.35 --accepting-fraction 0.3 --out-dir /tmp/chains
"""
import argparse
import pathlib

from buchidp.generator import chain_suite
from buchidp.model import mdp_from_chain
from buchidp.parser import serialize_model


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--count", type=int, default=10)
    ap.add_argument("--min-states", type=int, default=2)
    ap.add_argument("--max-states", type=int, default=12)
    ap.add_argument("--density", type=float, default=0.35)
    ap.add_argument("--accepting-fraction", type=float, default=0.3)
    ap.add_argument("--out-dir", default="generated_chains")
    args = ap.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    chains = chain_suite(
        args.seed,
        args.count,
        min_states=args.min_states,
        max_states=args.max_states,
        density=args.density,
        accepting_fraction=args.accepting_fraction,
    )
    for i, mc in enumerate(chains):
        path = out / f"chain_seed{args.seed}_{i:03d}.mdp"
        path.write_text(serialize_model(mdp_from_chain(mc)), encoding="utf-8")
        print(f"wrote {path} ({mc.num_states} states, |B|={len(mc.accepting)})")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
