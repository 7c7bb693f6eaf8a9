"""Independent oracles for the frozen expected values used in the unit tests.

Run with `python3 tests/oracles/derived_values.py`. Uses numpy/scipy only; none
of this code shares a path with the C++ implementation.
"""
import itertools
import math

import numpy as np
from scipy import integrate


def proj_pd_fixture():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    s = (a + a.T) / 2
    w, v = np.linalg.eigh(s)
    w = np.maximum(w, 0.01)
    out = v @ np.diag(w) @ v.T
    print("proj_pd [[0,1],[0,0]] eps=0.01 ->", out.tolist(), "eig", sorted(w))


def poet_spike_fixture():
    p = 6
    q = np.arange(1, p + 1, dtype=float)
    q /= np.linalg.norm(q)
    pert = np.zeros((p, p))
    pert[0, 1] = pert[1, 0] = 1.0
    pert[2, 4] = pert[4, 2] = -1.0
    pert[3, 5] = pert[5, 3] = 3.0
    a = 10 * np.outer(q, q) + 0.05 * pert + np.eye(p)
    # Algorithm steps written out directly.
    w, v = np.linalg.eigh(a)
    order = np.argsort(-w)
    w, v = w[order], v[:, order]
    low = w[0] * np.outer(v[:, 0], v[:, 0])
    rem = a - low
    thr = rem.copy()
    lam = 0.1
    for i in range(p):
        for j in range(p):
            if i != j:
                thr[i, j] = np.sign(rem[i, j]) * max(abs(rem[i, j]) - lam, 0.0)
    b = low + thr
    bw, bv = np.linalg.eigh(b)
    out = bv @ np.diag(np.maximum(bw, 1e-8)) @ bv.T
    np.set_printoptions(precision=17)
    print("poet spike input A =")
    print(repr(a))
    print("poet spike output =")
    print(repr(out))
    print("rank-1 part top eig", w[0])


def ar_sqrt():
    s = np.array([[0.5 ** abs(i - j) for j in range(3)] for i in range(3)])
    w, v = np.linalg.eigh(s)
    r = v @ np.diag(np.sqrt(w)) @ v.T
    print("AR(0.5) sqrt residual", np.abs(r @ r - s).max())


def dispersion():
    med = np.array([[0.0, 1.0], [0.0, -1.0]])
    cbar = med.mean(axis=0)
    print("D =", np.abs(med - cbar).sum(axis=0))


def kmedian_partitions():
    x = [0, 0, 10, 10]
    best = None
    for labels in itertools.product([0, 1], repeat=4):
        if len(set(labels)) < 2:
            continue
        q = 0.0
        for k in (0, 1):
            pts = [x[i] for i in range(4) if labels[i] == k]
            m = float(np.median(pts))
            q += sum(abs(t - m) for t in pts)
        if best is None or q < best[0]:
            best = (q, labels)
    print("best 2-partition of (0,0,10,10):", best)


def generator_values():
    resp = np.array([[1.0, 0.0], [0.5, 0.5]])
    print("n_eff =", 4 / (resp ** 2).sum())
    print("bandwidth sigma=1 n_eff=100 =", 1.06 * 100 ** (-0.2))
    lo, hi, h = 0.0, 1.0, 0.1
    print("grid =", np.linspace(max(0.0, lo - 3 * h), hi + 3 * h, 3))
    # Constant density on a grid: trapezoid sum vs adaptive quadrature of 1/(1+u).
    y = np.linspace(0.0, 2.0, 200)
    u = np.maximum(np.exp(y) - 1, 1e-8)
    c = 0.37
    trap = sum((u[m] - u[m - 1]) / 2 * (c / (1 + u[m]) + c / (1 + u[m - 1])) for m in range(1, len(u)))
    quad = c * sum(integrate.quad(lambda t: 1 / (1 + t), u[m - 1], u[m], epsabs=1e-14)[0] for m in range(1, len(u)))
    print("const-density C trapezoid", trap, "quadrature", quad, "exact", c * math.log((1 + u[-1]) / (1 + u[0])))


def spline_ols():
    y = np.linspace(0, 3, 12)
    v = np.sin(2 * y) + 0.3 * y
    a = np.vstack([np.ones_like(y), y]).T
    coef, *_ = np.linalg.lstsq(a, v, rcond=None)
    print("OLS on sin fixture: intercept, slope", coef.tolist())


def factor_ratio(d):
    p = len(d)
    v = [sum(d[j:p - 1]) for j in range(p)]
    out = []
    for j in range(min(8, p - 2)):
        out.append(math.log(1 + d[j] / v[j]) / math.log(1 + d[j + 1] / v[j + 1]))
    return out


def shape_values():
    print("GR (10,1,1,1) =", factor_ratio([10, 1, 1, 1]))
    print("glasso 2x2 =", np.linalg.inv(np.array([[1, 0.4], [0.4, 1]])).tolist())
    blend = 0.5 * np.eye(2) + 0.5 * 4 * np.eye(2)
    sig = np.linalg.inv(blend)
    sig = 2 * sig / np.trace(sig)
    print("update_precision chain blend", np.diag(blend), "final Omega", np.diag(np.linalg.inv(sig)))


def gem_values():
    # softmax of (log 3, 0) with equal pi
    a = np.array([math.log(3), 0.0])
    print("e_step row =", np.exp(a - a.max()) / np.exp(a - a.max()).sum())
    print("pseudo-loglik =", math.log(0.5 * 1 + 0.5 * 3))
    x = np.array([1.0, 1.0])
    print("mahalanobis =", x @ np.diag([1.0, 4.0]) @ x)


def metric_values():
    def acc(est, truth, k):
        n = len(est)
        return max(sum(1 for i in range(n) if perm[est[i]] == truth[i]) / n for perm in itertools.permutations(range(k)))

    def ari(est, truth):
        n = len(est)
        ka, kb = max(est) + 1, max(truth) + 1
        nab = np.zeros((ka, kb))
        for a, b in zip(est, truth):
            nab[a, b] += 1
        c2 = lambda t: t * (t - 1) / 2
        sij = c2(nab).sum()
        sa = c2(nab.sum(1)).sum()
        sb = c2(nab.sum(0)).sum()
        e = sa * sb / c2(n)
        return (sij - e) / (0.5 * (sa + sb) - e)

    print("accuracy (0,0,0,1) vs (0,0,1,1) =", acc([0, 0, 0, 1], [0, 0, 1, 1], 2))
    print("ari (0,1,0,1) vs (0,0,1,1) =", ari([0, 1, 0, 1], [0, 0, 1, 1]))
    print("ari constant vs balanced =", ari([0, 0, 0, 0], [0, 0, 1, 1]))


def gap_values():
    gap = [2.0, 1.9, 1.8]
    s = [0.05] * 3
    ks = [2, 3, 4]
    sel = next((ks[j] for j in range(len(ks) - 1) if gap[j] >= gap[j + 1] - s[j + 1]), ks[-1])
    print("K_lse =", sel)
    print("within dispersion {0, e^2-1} =", (math.log(1) + math.log(math.e ** 2)) / 2)


if __name__ == "__main__":
    proj_pd_fixture()
    poet_spike_fixture()
    ar_sqrt()
    dispersion()
    kmedian_partitions()
    generator_values()
    spline_ols()
    shape_values()
    gem_values()
    metric_values()
    gap_values()
