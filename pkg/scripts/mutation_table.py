"""Print each documented mutation, the suite it targets and the first failures it causes."""

import argparse

from berezin_kit.algebra import Params
from berezin_kit.mutations import failing_items, mutations

if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("-m", default="3/2")
    p.add_argument("-c", default="5/7")
    p.add_argument("--show", type=int, default=3, help="failures to show per mutation")
    args = p.parse_args()
    for mut in mutations(Params(args.m, args.c)):
        bad = failing_items(mut.run())
        hit = any(mut.locus in b for b in bad)
        control = "clean" if not failing_items(mut.control()) else "DIRTY"
        print(f"{mut.name:22s} suite={mut.suite:13s} failures={len(bad):3d} locus-hit={hit} control={control}")
        print(f"    {mut.description}")
        for item in bad[: args.show]:
            print(f"      - {item}")
