"""Soergel prediction at v = 1 against Gram-matrix decomposition numbers."""

import argparse
import time

from blobkit.alcove import decomposition_prediction
from blobkit.blob import decomposition_oracle


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--pairs", default="3:1,4:1,5:2,6:1,5:-2")
    ap.add_argument("--nmax", type=int, default=8)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    for pair in args.pairs.split(","):
        l, m = map(int, pair.split(":"))
        t = time.time()
        bad = []
        for n in range(args.nmax + 1):
            regular, mat, _ = decomposition_prediction(n, l, m)
            res = decomposition_oracle(n, l, m, workers=args.workers)
            pred = [[mat[a][b] for b in regular] for a in regular]
            if pred != res.restrict(regular).square():
                bad.append(n)
        status = "agree" if not bad else f"mismatch at n = {bad}"
        print(f"l={l} m={m} n<={args.nmax}: {status} ({time.time() - t:.1f}s)")


if __name__ == "__main__":
    main()
