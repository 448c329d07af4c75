#!/usr/bin/env python3
"""Generate Taylor coefficients of the Riemann-Siegel remainder functions.

The remainder of the Riemann-Siegel formula is expanded as

    R(t) = (-1)^(N-1) (2 pi / t)^(1/4) * sum_k C_k(p) (2 pi / t)^(k/2)

with p the fractional part of sqrt(t / 2 pi) and

    Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p)
    C0 = Psi
    C1 = -Psi'''/(96 pi^2)
    C2 = Psi''/(64 pi^2) + Psi^(6)/(18432 pi^4)
    C3 = -Psi'/(64 pi^2) - Psi^(5)/(3840 pi^4) - Psi^(9)/(5308416 pi^6)

Coefficients are emitted as polynomials in u = p - 1/2 (Psi is entire, so the
series converge on the whole interval 0 <= p <= 1).
"""
import mpmath as mp

mp.mp.dps = 60
DEGREE = 60


def psi(p):
    return mp.cos(2 * mp.pi * (p * p - p - mp.mpf(1) / 16)) / mp.cos(2 * mp.pi * p)


def main():
    # Taylor coefficients of Psi around p = 1/2 (psi is regular there).
    base = mp.taylor(psi, mp.mpf(1) / 2, DEGREE + 12)

    def deriv(coeffs, m):
        out = []
        for i in range(len(coeffs) - m):
            f = mp.mpf(1)
            for j in range(m):
                f *= i + m - j
            out.append(coeffs[i + m] * f)
        return out

    def add(*polys):
        n = min(len(p) for p in polys)
        return [sum(p[i] for p in polys) for i in range(n)]

    def scale(poly, c):
        return [c * x for x in poly]

    pi = mp.pi
    c0 = base
    c1 = scale(deriv(base, 3), -1 / (96 * pi**2))
    c2 = add(scale(deriv(base, 2), 1 / (64 * pi**2)),
             scale(deriv(base, 6), 1 / (18432 * pi**4)))
    c3 = add(scale(deriv(base, 1), -1 / (64 * pi**2)),
             scale(deriv(base, 5), -1 / (3840 * pi**4)),
             scale(deriv(base, 9), -1 / (5308416 * pi**6)))

    print("// Generated by tools/gen_rs_coefficients.py; do not edit.")
    print("// Taylor coefficients in u = p - 1/2 of the Riemann-Siegel remainder terms.")
    print("#pragma once\n")
    print("#include <array>\n")
    print("namespace xiprime::detail {\n")
    for name, poly in (("kRsC0", c0), ("kRsC1", c1), ("kRsC2", c2), ("kRsC3", c3)):
        # |u| <= 1/2: drop trailing terms that cannot reach 1e-20.
        keep = len(poly)
        while keep > 1 and abs(poly[keep - 1]) * mp.mpf(0.5) ** (keep - 1) < mp.mpf("1e-21"):
            keep -= 1
        poly = poly[:keep]
        print(f"inline constexpr std::array<double, {len(poly)}> {name} = {{")
        for x in poly:
            if abs(x) < mp.mpf("1e-40"):
                x = mp.mpf(0)  # odd terms vanish by symmetry of Psi about p = 1/2
            print(f"    {mp.nstr(x, 20, min_fixed=0, max_fixed=0)},")
        print("};\n")
    print("}  // namespace xiprime::detail")


if __name__ == "__main__":
    main()
