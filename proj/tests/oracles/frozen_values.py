"""High-precision reference values frozen into the C++ unit tests.

Run with `python3 tests/oracles/frozen_values.py`; it prints C++ constants.
Everything here is computed directly with mpmath quadrature on the defining
integrals, independently of the library's own routines.
"""
from mpmath import mp, mpf, quad, exp, log, cos, sin, sqrt, inf, linspace, findroot, diff, expj

mp.dps = 30


def kernel(alpha):
    alpha = mpf(alpha)
    eps = min(exp(-(alpha + 2)), mpf("0.05"))
    L = log(1 / eps)
    B0 = 1 / (eps * L**alpha)
    dB = -(L - alpha) / (eps**2 * L ** (alpha + 1))
    t0 = eps + B0 / (-dB)

    def B(t):
        t = abs(t)
        if t <= eps:
            return 1 / (t * log(1 / t) ** alpha)
        if t >= t0:
            return mpf(0)
        return B0 + dB * (t - eps)

    return alpha, eps, L, t0, B


def weighted(alpha, w):
    """int_0^t0 w(t) B(t) dt with the singular part in u = ln(1/t)."""
    a, eps, L, t0, B = kernel(alpha)
    sing = quad(lambda u: w(exp(-u)) * u ** (-a), [L, L + 1, L + 5, L + 20, L + 80, inf])
    tail = quad(lambda t: w(t) * B(t), [eps, t0])
    return sing + tail


def bhat(alpha, lam):
    a, eps, L, t0, B = kernel(alpha)
    lam = mpf(lam)
    npan = max(2, int(lam * t0) + 2)
    sing = quad(lambda u: cos(lam * exp(-u)) * u ** (-a),
                [L, L + 1, L + 5, L + 20, L + 80, inf])
    if lam > 0:
        # resolve oscillations of the singular piece on (eps e^{-k}, ...)
        pts = sorted(set([L] + [-log(t) for t in linspace(eps, eps / max(2, lam * eps), npan)[1:]] + [L + 80]))
        sing = quad(lambda u: cos(lam * exp(-u)) * u ** (-a), pts) + quad(lambda u: cos(lam * exp(-u)) * u ** (-a), [pts[-1], inf])
    tail = quad(lambda t: cos(lam * t) * B(t), linspace(eps, t0, npan))
    return 2 * (sing + tail)


def singular_moment(alpha, j, lam, b):
    """int_0^b e^{i lam t} t^j / (t ln^alpha(1/t)) dt."""
    a = mpf(alpha)
    lam = mpf(lam)
    Lb = log(1 / mpf(b))
    f = lambda u: expj(lam * exp(-u)) * exp(-j * u) * u ** (-a)
    # oscillation nodes t_k = b - 2 pi k / lam down to 1/lam
    ts = [mpf(b) - 2 * mp.pi * k / lam for k in range(int(lam * b / (2 * mp.pi)) + 1)]
    ts = [t for t in ts if t > 1 / lam] + [1 / lam]
    us = sorted(set([-log(t) for t in ts] + [Lb]))
    head = quad(f, us)
    return head + quad(f, [us[-1], us[-1] + 5, us[-1] + 30, inf])


def overlap(alpha, a1, b1, a2, b2):
    """int_{a1}^{b1} int_{a2}^{b2} B(s - t) dt ds by nested quadrature."""
    a, eps, L, t0, B = kernel(alpha)
    a1, b1, a2, b2 = map(mpf, (a1, b1, a2, b2))
    # inner integral of B over (s - b2, s - a2), split at 0 and +-eps, +-t0
    def half(x):
        # int_0^x B for 0 <= x, singular part in u = ln(1/t)
        if x <= 0:
            return mpf(0)
        e = min(x, eps)
        v = quad(lambda u: u ** (-a), [log(1 / e), log(1 / e) + 10, inf])
        if x > eps:
            v += quad(B, [eps, min(x, t0)])
        return v

    def inner(s):
        lo, hi = s - b2, s - a2
        if lo >= 0 or hi <= 0:
            lo, hi = sorted((abs(lo), abs(hi)))
            return half(hi) - half(lo)
        return half(-lo) + half(hi)
    cuts = sorted(set([a1, b1] + [c for c in (a2, b2, a2 - t0, b2 + t0, a2 + t0, b2 - t0) if a1 < c < b1]))
    return quad(inner, cuts)


def M(r):
    r = mpf(r)
    f = lambda p: exp(-p**2 / (2 * r**2)) * 2 * sin(p / 2)
    p = findroot(lambda p: diff(f, p), 0.95)
    return f(p)


if __name__ == "__main__":
    out = {}
    for lam in (0, 1, 100, 10000):
        out[f"kBhatAlpha2_{lam}"] = bhat(2, lam)
    out["kBhatAlpha3_10"] = bhat(3, 10)
    out["kNormX0Alpha2"] = 2 * weighted(2, lambda t: 1 - t)
    out["kNormX0Alpha1p5"] = 2 * weighted(1.5, lambda t: 1 - t)
    out["kFirstMomentAlpha2"] = weighted(2, lambda t: t)
    for j in (0, 1):
        v = singular_moment(2, j, 500, mpf("0.05"))
        out[f"kSingularMoment{j}Re"] = v.real
        out[f"kSingularMoment{j}Im"] = v.imag
    out["kOverlapA"] = overlap(2, "0.1", "0.2", "0.15", "0.3")
    out["kOverlapB"] = overlap(2, "0.1", "0.12", "0.13", "0.2")
    out["kMofOne"] = M(1)
    out["kGaussAffinity4"] = mpf("1.25") ** mpf("-0.5")
    for k, v in out.items():
        print(f"inline constexpr double {k} = {mp.nstr(v, 17)};")
