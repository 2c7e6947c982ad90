"""Search for fully symmetric quadrature rules on the triangle (0,0),(1,0),(0,1).

Each rule is parametrised by its orbit structure (centroid, S21, S111 orbits),
solved in double precision from random starts and polished with mpmath to
well beyond f64 accuracy. Prints Rust-ready barycentric orbit data.
"""
import itertools
import math
import random
import sys

import mpmath as mp
import numpy as np
from scipy.optimize import least_squares

mp.mp.dps = 50


def monomials(deg):
    return [(a, b) for d in range(deg + 1) for a in range(d + 1) for b in [d - a]]


def exact(a, b):
    return math.factorial(a) * math.factorial(b) / math.factorial(a + b + 2)


def expand(params, n_c, n21, n111, lib=np):
    """params -> list of (r, s, w)."""
    pts = []
    i = 0
    if n_c:
        w = params[i]; i += 1
        pts.append((lib.mpf(1) / 3 if lib is mp else 1 / 3, lib.mpf(1) / 3 if lib is mp else 1 / 3, w))
    for _ in range(n21):
        a, w = params[i], params[i + 1]; i += 2
        b = 1 - 2 * a
        for (l1, l2, l3) in [(a, a, b), (a, b, a), (b, a, a)]:
            pts.append((l2, l3, w))
    for _ in range(n111):
        a, b, w = params[i], params[i + 1], params[i + 2]; i += 3
        c = 1 - a - b
        for perm in set(itertools.permutations((0, 1, 2))):
            l = [a, b, c]
            pts.append((l[perm[1]], l[perm[2]], w))
    return pts


def residual(params, deg, n_c, n21, n111, lib=np):
    pts = expand(params, n_c, n21, n111, lib)
    out = []
    for (a, b) in monomials(deg):
        s = sum(w * r ** a * t ** b for (r, t, w) in pts)
        ex = lib.mpf(math.factorial(a) * math.factorial(b)) / math.factorial(a + b + 2) if lib is mp else exact(a, b)
        out.append(s - ex)
    return out


def residual_fast(params, deg, n_c, n21, n111):
    pts = np.array(expand(params, n_c, n21, n111), dtype=float)
    r, t, w = pts[:, 0], pts[:, 1], pts[:, 2]
    mons = monomials(deg)
    A = np.array([a for a, _ in mons])[:, None]
    B = np.array([b for _, b in mons])[:, None]
    ex = np.array([exact(a, b) for a, b in mons])
    return (r[None, :] ** A * t[None, :] ** B) @ w - ex


def dubiner(deg, r, s):
    """Orthonormal basis values, shape (modes, points), same recurrences as the solver."""
    x = 2 * r - 1 + s
    y2 = (1 - s) ** 2
    z = 2 * s - 1
    q = [np.ones_like(r), x]
    for a in range(1, deg):
        q.append(((2 * a + 1) * x * q[a] - a * y2 * q[a - 1]) / (a + 1))
    rows = []
    for d in range(deg + 1):
        for a in range(d + 1):
            b = d - a
            al = 2 * a + 1
            p = [np.ones_like(r), 0.5 * (al + 2) * z + 0.5 * al]
            for n in range(2, b + 1):
                c = 2 * n + al
                a1 = 2 * n * (n + al) * (c - 2)
                p.append((((c - 1) * c * (c - 2) * z + (c - 1) * al * al) * p[n - 1] - 2 * (n + al - 1) * (n - 1) * c * p[n - 2]) / a1)
            rows.append(math.sqrt(2 * al * (a + b + 1)) * q[a] * p[b])
    return np.array(rows)


def residual_orth(params, deg, n_c, n21, n111):
    pts = np.array(expand(params, n_c, n21, n111), dtype=float)
    r, t, w = pts[:, 0], pts[:, 1], pts[:, 2]
    out = dubiner(deg, r, t) @ w
    out[0] -= 1 / math.sqrt(2)
    return out


def n_unknowns(n_c, n21, n111):
    return n_c + 2 * n21 + 3 * n111


def bounds(n_c, n21, n111):
    lo, hi = [], []
    if n_c:
        lo.append(0.0); hi.append(0.5)
    for _ in range(n21):
        lo += [1e-3, 0.0]; hi += [0.5 - 1e-3, 0.5]
    for _ in range(n111):
        lo += [1e-3, 1e-3, 0.0]; hi += [0.98, 0.98, 0.5]
    return lo, hi


def admissible(params, n_c, n21, n111):
    pts = expand(params, n_c, n21, n111)
    return all(w > 0 and r > 0 and s > 0 and r + s < 1 for (r, s, w) in pts)


def search(deg, n_c, n21, n111, seed=1, tries=20000):
    rng = random.Random(seed)
    lo, hi = bounds(n_c, n21, n111)
    for _ in range(tries):
        x0 = [rng.uniform(l, h) for l, h in zip(lo, hi)]
        sol = least_squares(residual_orth, x0, args=(deg, n_c, n21, n111), bounds=(lo, hi), xtol=1e-15, ftol=1e-15, gtol=1e-15)
        if max(abs(v) for v in sol.fun) < 1e-13 and admissible(sol.x, n_c, n21, n111):
            return list(sol.x)
    raise RuntimeError("no rule found")


def polish(x, deg, n_c, n21, n111):
    x = mp.matrix([mp.mpf(v) for v in x])
    n = len(x)
    for _ in range(60):
        r = mp.matrix(residual(list(x), deg, n_c, n21, n111, lib=mp))
        if mp.norm(r) < mp.mpf(10) ** -45:
            break
        J = mp.matrix(len(r), n)
        h = mp.mpf(10) ** -25
        for j in range(n):
            xp = x.copy(); xp[j] += h
            rp = mp.matrix(residual(list(xp), deg, n_c, n21, n111, lib=mp))
            for i in range(len(r)):
                J[i, j] = (rp[i] - r[i]) / h
        JT = J.T
        A = JT * J
        for i in range(n):
            A[i, i] += mp.mpf(10) ** -30
        dx = mp.lu_solve(A, -(JT * r))
        x = x + dx
    res = max(abs(v) for v in residual(list(x), deg, n_c, n21, n111, lib=mp))
    return list(x), res


STRUCTURES = {
    2: (0, 1, 0),
    4: (0, 2, 0),
    6: (0, 2, 1),
    8: (1, 3, 1),
    10: (1, 3, 3),
}

if __name__ == "__main__":
    degs = [int(a) for a in sys.argv[1:]] or sorted(STRUCTURES)
    for deg in degs:
        n_c, n21, n111 = STRUCTURES[deg]
        x = search(deg, n_c, n21, n111)
        x, res = polish(x, deg, n_c, n21, n111)
        npts = len(expand([float(v) for v in x], n_c, n21, n111))
        print(f"// degree {deg}: {npts} points, max moment residual {mp.nstr(res, 3)}")
        i = 0
        if n_c:
            print(f"centroid w={mp.nstr(x[i], 20)}"); i += 1
        for _ in range(n21):
            print(f"s21 a={mp.nstr(x[i], 20)} w={mp.nstr(x[i+1], 20)}"); i += 2
        for _ in range(n111):
            print(f"s111 a={mp.nstr(x[i], 20)} b={mp.nstr(x[i+1], 20)} w={mp.nstr(x[i+2], 20)}"); i += 3
