"""How often is a walk orbit of size 2^t, and what happens when it is not."""

import argparse
import random
from collections import Counter

from blobkit.walks import (
    Hyperplane,
    Walk,
    effective_touches,
    hyperplane_closure,
    orbit_size_formula,
    walk_orbit,
)


def sample(rng, d, max_len):
    while True:
        n = rng.randint(1, max_len)
        w = Walk(tuple(rng.randint(1, d) for _ in range(n)))
        gens = []
        for _ in range(rng.randint(1, 2)):
            i, j = rng.sample(range(1, d + 1), 2)
            gens.append(Hyperplane(i, j, rng.choice([-3, -2, -1, 1, 2, 3])))
        hs = hyperplane_closure(gens, d, max(n, d))
        if all(h.x != 0 for h in hs):
            return w, gens, hs


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--cases", type=int, default=2000)
    ap.add_argument("--d", type=int, default=3)
    ap.add_argument("--max-len", type=int, default=7)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    tally = Counter()
    shown = 0
    for _ in range(args.cases):
        w, gens, hs = sample(rng, args.d, args.max_len)
        size = len(walk_orbit(w, gens))
        t = sum(len(effective_touches(w, h)) for h in hs)
        corner = any(sum(h.value(p) == 0 for h in hs) > 1 for p in w.points(args.d))
        tally[(corner, size == 2 ** t)] += 1
        assert size == orbit_size_formula(w, gens)
        if size != 2 ** t and shown < 5:
            shown += 1
            print(f"  {w}  gens {', '.join(map(str, gens))}  orbit {size}, 2^t = {2 ** t}")
    for (corner, ok), k in sorted(tally.items()):
        print(f"corner={corner!s:5}  2^t holds={ok!s:5}  {k}")


if __name__ == "__main__":
    main()
