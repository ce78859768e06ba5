"""High-precision reference values for the renewal measure (mpmath).

Independent of the C++ implementation: evaluates the closed form directly at
60 digits and sums series by brute force.
"""
import mpmath as mp

mp.mp.dps = 60


def T(k, a):
    return mp.e ** (-(mp.mpf(k) ** a))


def mu(n, a):
    if n == 0:
        return 1 - mp.e ** -1
    return (T(n - 1, a) - T(n, a)) / (n - 1)


def isqrt(t):
    return int(mp.floor(mp.sqrt(t)))


def count(t):
    return min(isqrt(t), t - 1)


def second_moment(a, b, N):
    mu0 = mu(0, a)
    s = mp.mpf(0)
    for t in range(2, N + 1):
        s += mu(t, a) / mu0 * (count(t) * mp.mpf(t) ** (-b)) ** 2
    return s


def p1(a, N):
    mu0 = mu(0, a)
    s = mp.mpf(0)
    for t in range(2, N + 1):
        s += mu(t, a)
    # bracket the tail: 0 <= tail <= T(N)/N
    return 1 - s / mu0, T(N, a) / N / mu0


def autocov(a, b, k, N):
    s = mp.mpf(0)
    for t in range(2, N + 1):
        c = max(0, min(isqrt(t), t - 1) - k)
        if c:
            s += mu(t, a) * mp.mpf(t) ** (-2 * b) * c
    return s


def survival(a, n, N):
    mu0 = mu(0, a)
    s = mp.mpf(0)
    for t in range(n + 1, N + 1):
        s += mu(t, a)
    return s / mu0


def dprime_tail(a, b, n, x, N):
    """P[S''_n > x] by summing mu over end states (age, residual), double precision."""
    import math

    import numpy as np

    def T_(k):
        return math.exp(-(k ** a))

    terms = []
    for t in range(2, N + 1):
        m = (T_(t - 1) - T_(t)) / (t - 1)
        damp = t ** (-b)
        s = math.isqrt(t)
        # rewards sit at excursion ages 1..min(s, t-1); the window sees ages age-n+1..age
        age = np.arange(1, t)
        seen_hi = np.minimum(age, min(s, t - 1))
        seen_lo = np.maximum(1, age - n + 1)
        c = np.clip(seen_hi - seen_lo + 1, 0, None)
        terms.append(int(np.count_nonzero(c * damp > x)) * m)
    return 0.5 * math.fsum(terms)


if __name__ == "__main__":
    a = mp.mpf("0.3")
    print("mu0", mp.nstr(mu(0, a), 20))
    print("mu2(0.3)", mp.nstr(mu(2, a), 20), "ln", mp.nstr(mp.log(mu(2, a)), 20))
    print("ln p2(0.3)", mp.nstr(mp.log(mu(2, a) / mu(0, a)), 20))
    for al in ["0.3", "0.45"]:
        v, err = p1(mp.mpf(al), 100000)
        print("p1", al, mp.nstr(v, 20), "tail<=", mp.nstr(err, 5))
    mp.mp.dps = 30
    print("EX2(0.3,0) N=1e5", mp.nstr(second_moment(mp.mpf("0.3"), 0, 100000), 20))
    print("EX2(0.3,0.05) N=1e5", mp.nstr(second_moment(mp.mpf("0.3"), mp.mpf("0.05"), 100000), 20))
    for k in [0, 1, 2, 5, 10]:
        print("r(%d) (0.3,0.05) N=2e5" % k, mp.nstr(autocov(mp.mpf("0.3"), mp.mpf("0.05"), k, 200000), 20))
    for n in [10, 100, 1000]:
        print("G(%d) (0.3) N=2e5" % n, mp.nstr(survival(mp.mpf("0.3"), n, 200000), 20))
    for n, x in [(50, 0.5), (50, 1.0), (200, 2.0), (200, 5.0)]:
        print("P[S''>%g] n=%d (0.3,0.05) N=2e4" % (x, n), repr(dprime_tail(0.3, 0.05, n, x, 20000)))
