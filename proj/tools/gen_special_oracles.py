"""Reference values for tests/unit/test_special.cpp, computed with mpmath."""
import mpmath as mp

mp.mp.dps = 40


def L(s):
    return 1 / s + 1 / (s - 1) - mp.log(mp.pi) / 2 + mp.digamma(s / 2) / 2


def Lp(s):
    return -1 / s**2 - 1 / (s - 1) ** 2 + mp.polygamma(1, s / 2) / 4


def xi(s):
    return s * (s - 1) / 2 * mp.pi ** (-s / 2) * mp.gamma(s / 2) * mp.zeta(s)


def show(name, v):
    if isinstance(v, mp.mpc):
        print(f"{name} = {mp.nstr(v.real, 17)} {mp.nstr(v.imag, 17)}")
    else:
        print(f"{name} = {mp.nstr(v, 17)}")


for z in [mp.mpc(0.25, 7), mp.mpc(3.5, -2), mp.mpc(-0.75, 40)]:
    show(f"loggamma{z}", mp.loggamma(z))
    show(f"digamma{z}", mp.digamma(z))
    show(f"trigamma{z}", mp.polygamma(1, z))
for s in [mp.mpf(2), mp.mpc(1.5, 50), mp.mpc(-0.5, 1000), mp.mpc(0.5, 14)]:
    show(f"L{s}", L(s))
    show(f"Lp{s}", Lp(s))
for s in [mp.mpc(0.5, 30), mp.mpc(1.5, 1000), mp.mpc(0.5, 199)]:
    show(f"zeta{s}", mp.zeta(s))
    show(f"zeta'{s}", mp.zeta(s, derivative=1))
    show(f"zeta''{s}", mp.zeta(s, derivative=2))
for t in [0, 1, 5, 9.99, 10, 17, 100, 1000]:
    show(f"theta({t})", mp.siegeltheta(t))
    show(f"theta'({t})", mp.siegeltheta(t, derivative=1))
for t in [0, 3, 14, 50, 150, 199.5, 200.5, 500, 1000, 5000, 20000]:
    show(f"Z({t})", mp.siegelz(t))
    show(f"Z'({t})", mp.siegelz(t, derivative=1))
for t in [0, 14.1347251417346937904572519836, 30]:
    show(f"Xi({t})", xi(mp.mpf(0.5) + 1j * t).real)
    show(f"Xi'({t})", mp.diff(lambda u: xi(mp.mpf(0.5) + 1j * u).real, t))
