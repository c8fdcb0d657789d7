"""Zero-charge spectra of the full twist C_n, as exponents of q^-1."""

import argparse

from blobkit.tensor import twist_spectrum


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--nmax", type=int, default=6)
    args = ap.parse_args()
    for n in range(2, args.nmax + 1):
        spec = twist_spectrum(n)
        parts = ", ".join(f"q^{-e} x{k}" for e, k in sorted(spec.items()))
        # one spin-j summand per exponent; predicted offset n(n-4)/2 - 2j(j+1)
        j0 = (n % 2) / 2
        pred = sorted(int(n * (n - 4) / 2 + 2 * j * (j + 1)) for j in (j0 + k for k in range(len(spec))))
        print(f"C_{n}: {parts}   pattern {'ok' if pred == sorted(spec) else 'differs'}")


if __name__ == "__main__":
    main()
