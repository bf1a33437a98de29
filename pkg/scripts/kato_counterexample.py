"""The 2x2 family Z = [[0, 1], [a, 0]], Z0 = [[0, 1], [0, 0]] as a -> 0.

Distances to sigma(Z0) = {0} give a ratio 2 a^{p/2} / a^p that blows up,
while distances to the numerical range of Z0 (the disk of radius 1/2) stay
within the bound.
"""

import argparse

import numpy as np

from specbounds.bounds import kato_numrange_check


def rows(p, exponents):
    out = []
    for k in exponents:
        a = 10.0 ** -k
        Z = np.array([[0, 1], [a, 0]])
        Z0 = np.array([[0, 1], [0, 0]])
        spec = kato_numrange_check(Z, Z0, p, variant="spectrum")
        num = kato_numrange_check(Z, Z0, p)
        out.append((a, spec.lhs, spec.rhs_core, spec.ratio, num.lhs, num.passed))
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=float, default=1.0)
    ap.add_argument("--kmax", type=int, default=8)
    args = ap.parse_args(argv)
    print(f"{'a':>8} {'sum dist(l, sigma)^p':>22} {'||Z-Z0||_p^p':>14} {'ratio':>12} "
          f"{'sum dist(l, Num)^p':>20} numrange ok")
    for a, lhs, rhs, ratio, nlhs, ok in rows(args.p, range(1, args.kmax + 1)):
        print(f"{a:8.0e} {lhs:22.6e} {rhs:14.6e} {ratio:12.6g} {nlhs:20.6e} {ok}")


if __name__ == "__main__":
    main()
