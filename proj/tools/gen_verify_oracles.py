"""Reference values for tests/unit/test_verify.cpp, computed with mpmath.

The Xi' zeros are located independently here from mpmath's Z and Z' and the
gamma factor; the arithmetic coefficients come from a plain divisor-sum
convolution.
"""
import mpmath as mp

mp.mp.dps = 30


def L(s):
    return 1 / s + 1 / (s - 1) - mp.log(mp.pi) / 2 + mp.digamma(s / 2) / 2


def mangoldt(n):
    for p in range(2, n + 1):
        if n % p == 0:
            while n % p == 0:
                n //= p
            return mp.log(p) if n == 1 else mp.mpf(0)
    return mp.mpf(0)


def alphas(N, K):
    lam = [mp.mpf(0)] + [mangoldt(n) for n in range(1, N + 1)]
    lamj = [[mp.mpf(0)] * (N + 1)]
    lamj[0][1] = mp.mpf(1)
    for j in range(1, K + 1):
        row = [mp.mpf(0)] * (N + 1)
        for d in range(1, N + 1):
            for m in range(d, N + 1, d):
                row[m] += lamj[j - 1][d] * lam[m // d]
        lamj.append(row)
    al = [[-lam[n] for n in range(N + 1)]]
    for k in range(1, K + 1):
        row = [mp.mpf(0)] * (N + 1)
        for d in range(1, N + 1):
            for m in range(d, N + 1, d):
                row[m] += lamj[k - 1][d] * lam[m // d] * mp.log(m // d)
        al.append(row)
    return al


def a_K(al, K, n, s):
    Ls = L(s)
    return sum(al[k][n] / Ls**k for k in range(K + 1))


def series(s, K):
    z = mp.zeta(s)
    r = mp.zeta(s, derivative=1) / z
    rp = mp.zeta(s, derivative=2) / z - r * r
    return r + sum((-r) ** (k - 1) * rp / L(s) ** k for k in range(1, K + 1))


def rhs(x, t, sigma, K, al):
    s = mp.mpc(sigma, t)
    w = 1 - mp.conj(s)
    head = sum(a_K(al, K, n, w) * (mp.mpf(x) / n) ** w for n in range(2, x + 1))
    tail = mp.mpf(x) ** s * series(s, K) - sum(
        a_K(al, K, n, s) * (mp.mpf(x) / n) ** s for n in range(2, x + 1))
    tau = abs(t) + 2
    return (head + tail) / mp.sqrt(x) + mp.mpf(x) ** (mp.mpf(0.5) - mp.conj(s)) * mp.log(tau / (2 * mp.pi))


def xi_prime_target(t):
    dlogE = 2 * t / (t * t + mp.mpf(0.25)) - mp.im(mp.digamma(mp.mpc(0.25, t / 2))) / 2
    return mp.siegelz(t, derivative=1) + dlogE * mp.siegelz(t)


def xi_prime_zeros(hi, step=0.02):
    mp.mp.dps = 15
    out = []
    t = mp.mpf(0.5)
    f0 = xi_prime_target(t)
    while t < hi:
        t1 = t + step
        f1 = xi_prime_target(t1)
        if f0 * f1 < 0:
            out.append(mp.findroot(xi_prime_target, (t, t1), solver="anderson"))
        t, f0 = t1, f1
    mp.mp.dps = 30
    return out


def lhs(x, t, sigma, zs, window):
    ords = [-g for g in reversed(zs)] + [mp.mpf(0)] + zs
    acc = mp.mpc(0)
    for g in ords:
        if abs(g - t) <= window:
            acc += mp.expj(g * mp.log(x)) / ((sigma - mp.mpf(0.5)) ** 2 + (t - g) ** 2)
    return (2 * sigma - 1) * acc


def show(name, v):
    print(f"{name} = {mp.nstr(mp.re(v), 17)} {mp.nstr(mp.im(v), 17)}")


al = alphas(100, 5)
s = mp.mpc(1.5, 1000)
show("series(1.5+1000i, K=8)", series(s, 8))
show("rhs(10, 50, 1.5, 5)", rhs(10, 50, mp.mpf(1.5), 5, al))
show("rhs(100, 1000, 1.5, 5)", rhs(100, 1000, mp.mpf(1.5), 5, al))
show("rhs(1, 100, 1.5, 5)", rhs(1, 100, mp.mpf(1.5), 5, al))
zs = xi_prime_zeros(551)
print("xi' zeros below 551:", len(zs))
show("lhs(10, 50, 1.5, W=500)", lhs(10, 50, mp.mpf(1.5), zs, 500))
show("lhs(1, 50, 1.5, W=500)", lhs(1, 50, mp.mpf(1.5), zs, 500))
