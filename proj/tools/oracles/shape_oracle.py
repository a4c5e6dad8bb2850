#!/usr/bin/env python3
"""High-precision reference values for the shape-function test fixtures.

Run once with mpmath; the printed values are frozen into
tests/special_functions_test.cpp. Not part of the build.
"""
import mpmath as mp

mp.mp.dps = 50


def psi(k, x):
    return mp.polygamma(k, x)


def xi(mu, rho):
    a, b = psi(1, rho), psi(1, mu - rho)
    return a / (a + b), b / (a + b)


def f(mu, rho):
    a, b = psi(1, rho), psi(1, mu - rho)
    return -(a * psi(0, mu - rho) + b * psi(0, rho)) / (a + b)


def slope(mu, rho, z):
    return psi(1, mu - rho - z) / psi(1, rho + z)


def inverse_slope(mu, m):
    return mp.findroot(lambda z: slope(mu, mu / 2, z) - m, 0.0)


def shape_at(mu, p):
    x, y = p
    z = inverse_slope(mu, mp.mpf(y) / x)
    return (x + y) * f(mu, mu / 2 + z)


if __name__ == "__main__":
    for k in (0, 1, 2):
        for x in ("0.001", "0.1", "0.5", "1", "1.4616321449683623", "2.5",
                  "7.3", "11.9", "12", "50", "1000", "1000000"):
            print(f"psi{k}({x}) = {mp.nstr(psi(k, mp.mpf(x)), 25)}")
    mu = mp.mpf(2)
    print("xi(2,0.5) =", [mp.nstr(v, 20) for v in xi(mu, mp.mpf("0.5"))])
    print("f(2,0.5) =", mp.nstr(f(mu, mp.mpf("0.5")), 20))
    print("f(2,1) =", mp.nstr(f(mu, mp.mpf(1)), 20))
    print("f(5,1.3) =", mp.nstr(f(mp.mpf(5), mp.mpf("1.3")), 20))
    print("z(2,1.25) =", mp.nstr(inverse_slope(mu, mp.mpf("1.25")), 20))
    print("z(2,0.001) =", mp.nstr(inverse_slope(mu, mp.mpf("0.001")), 20))
    print("z(2,1000) =", mp.nstr(inverse_slope(mu, mp.mpf("1000")), 20))
    print("shape_at(2,(40,60)) =", mp.nstr(shape_at(mu, (40, 60)), 20))
    print("shape_at(2,(30,40)) =", mp.nstr(shape_at(mu, (30, 40)), 20))
    print("half psi2(1) =", mp.nstr(psi(2, 1) / 2, 20))
    for z in ("0.1", "0.05", "0.025", "0.0125"):
        zz = mp.mpf(z)
        print(f"curv({z}) =", mp.nstr((f(mu, 1 + zz) - f(mu, 1)) / zz**2, 20))
    print("30*gamma =", mp.nstr(30 * mp.euler, 20))
    print("-psi0(2) =", mp.nstr(-psi(0, 2), 20))
