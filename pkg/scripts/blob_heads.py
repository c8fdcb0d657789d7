"""Simple-head dimensions of blob standards at m = -1, -2 next to Temperley-Lieb dimensions."""

import argparse
from math import comb

from blobkit.blob import pascal_report


def tl_dim(n, w):
    k = (n - w) // 2
    return comb(n, k) - (comb(n, k - 1) if k else 0)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=6)
    args = ap.parse_args()
    for m in (-1, -2):
        print(f"m = {m}")
        rows = pascal_report(args.nmax, m)
        for n in range(args.nmax + 1):
            heads = [(r["weight"], r["head"]) for r in rows if r["n"] == n]
            shift = -m - 1
            tl = [tl_dim(n + shift, shift - w) if shift - w >= 0 and (n + shift - (shift - w)) % 2 == 0 else None
                  for w, _ in heads]
            print(f"  n={n}: heads {[h for _, h in heads]}  T_(n+{shift}) dims {tl}")


if __name__ == "__main__":
    main()
