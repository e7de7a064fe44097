"""McMurchie-Davidson molecular integrals over contracted Gaussians.

Hermite expansion coefficients are tabulated per AO pair, vectorized over
all primitive pairs at once; the Coulomb kernels run on the bra-pair x
ket-pair grid.  The Boys function comes from scipy's confluent
hypergeometric with a stable downward recursion.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import hyp1f1


def boys(nmax: int, t):
    """F_n(t) for n = 0..nmax; returns array (nmax+1, *t.shape)."""
    t = np.asarray(t, dtype=float)
    out = np.empty((nmax + 1,) + t.shape)
    out[nmax] = hyp1f1(nmax + 0.5, nmax + 1.5, -t) / (2 * nmax + 1)
    if nmax > 0:
        et = np.exp(-t)
        for m in range(nmax - 1, -1, -1):
            out[m] = (2.0 * t * out[m + 1] + et) / (2 * m + 1)
    return out


def _e_tables(imax: int, jmax: int, a, b, q: float):
    """E[i, j, t] Hermite expansion coefficients, vectorized over pairs.

    a, b: exponent arrays (n,); q: fixed center separation along the axis.
    Returns array (imax+1, jmax+1, imax+jmax+1, n).
    """
    n = a.shape[0]
    p = a + b
    tdim = imax + jmax + 1
    e = np.zeros((imax + 1, jmax + 1, tdim, n))
    e[0, 0, 0] = np.exp(-(a * b / p) * q * q)
    pa = -b * q / p
    pb = a * q / p
    inv2p = 0.5 / p
    for i in range(imax):
        for t in range(i + 2):
            val = pa * e[i, 0, t]
            if t > 0:
                val = val + inv2p * e[i, 0, t - 1]
            if t + 1 < tdim:
                val = val + (t + 1) * e[i, 0, t + 1]
            e[i + 1, 0, t] = val
    for i in range(imax + 1):
        for j in range(jmax):
            for t in range(i + j + 2):
                val = pb * e[i, j, t]
                if t > 0:
                    val = val + inv2p * e[i, j, t - 1]
                if t + 1 < tdim:
                    val = val + (t + 1) * e[i, j, t + 1]
                e[i, j + 1, t] = val
    return e


class PairData:
    """Precomputed primitive-pair quantities for one AO pair."""

    def __init__(self, ao1, ao2):
        c1 = np.asarray(ao1.coefs)
        c2 = np.asarray(ao2.coefs)
        a1 = np.asarray(ao1.exponents)
        a2 = np.asarray(ao2.exponents)
        p1 = np.asarray(ao1.powers, dtype=int)
        p2 = np.asarray(ao2.powers, dtype=int)
        n1, n2 = c1.shape[0], c2.shape[0]
        self.a = np.repeat(a1, n2)
        self.b = np.tile(a2, n1)
        self.c12 = np.repeat(c1, n2) * np.tile(c2, n1)
        self.p = self.a + self.b
        A = np.asarray(ao1.center)
        B = np.asarray(ao2.center)
        self.P = (self.a[:, None] * A + self.b[:, None] * B) / self.p[:, None]
        i_ax = np.repeat(p1, n2, axis=0)
        j_ax = np.tile(p2, (n1, 1))
        rng = np.arange(self.a.shape[0])
        # esel[axis]: (n, tmax+1) Hermite coefficients at each pair's own
        # (i, j); ksel[axis]: the three t=0 values at j-2, j, j+2 that the
        # kinetic-energy decomposition needs
        self.esel = []
        self.ksel = []
        self.i_ax = i_ax
        self.j_ax = j_ax
        for ax in range(3):
            ia, ja = i_ax[:, ax], j_ax[:, ax]
            imax, jmax = int(ia.max()), int(ja.max())
            tab = _e_tables(imax, jmax + 2, self.a, self.b,
                            float(A[ax] - B[ax]))
            tmax = imax + jmax
            sel = tab[ia, ja, : tmax + 1, rng]
            self.esel.append(sel)
            at0 = tab[:, :, 0, :]
            km = np.where(ja >= 2, at0[ia, np.maximum(ja - 2, 0), rng], 0.0)
            k0 = at0[ia, ja, rng]
            kp = at0[ia, ja + 2, rng]
            self.ksel.append((km, k0, kp))

    def overlap(self) -> float:
        rad = (math.pi / self.p) ** 1.5
        return float(np.sum(self.c12 * rad * self.esel[0][:, 0]
                            * self.esel[1][:, 0] * self.esel[2][:, 0]))

    def kinetic(self) -> float:
        sq = np.sqrt(math.pi / self.p)
        o = [self.ksel[ax][1] * sq for ax in range(3)]
        total = np.zeros_like(self.p)
        for ax in range(3):
            km, _, kp = self.ksel[ax]
            j = self.j_ax[:, ax]
            b = self.b
            kin = (b * (2 * j + 1) * self.ksel[ax][1]
                   - 2.0 * b * b * kp
                   - 0.5 * j * (j - 1) * km) * sq
            term = kin
            for other in range(3):
                if other != ax:
                    term = term * o[other]
            total = total + term
        return float(np.sum(self.c12 * total))

    def nuclear(self, charges, centers) -> float:
        ex, ey, ez = self.esel
        tx, ty, tz = ex.shape[1] - 1, ey.shape[1] - 1, ez.shape[1] - 1
        nmax = tx + ty + tz
        total = 0.0
        for zc, C in zip(charges, centers):
            d = self.P - np.asarray(C)
            t = self.p * np.sum(d * d, axis=1)
            f = boys(nmax, t)
            r = _hermite_coulomb(tx, ty, tz, self.p,
                                 d[:, 0], d[:, 1], d[:, 2], f)
            acc = np.zeros_like(self.p)
            for it in range(tx + 1):
                cx = ex[:, it]
                if not np.any(cx):
                    continue
                for iu in range(ty + 1):
                    cxy = cx * ey[:, iu]
                    if not np.any(cxy):
                        continue
                    for iv in range(tz + 1):
                        cz = ez[:, iv]
                        if not np.any(cz):
                            continue
                        acc = acc + cxy * cz * r[(it, iu, iv)]
            total += -zc * float(np.sum(
                self.c12 * (2.0 * math.pi / self.p) * acc))
        return total


def _hermite_coulomb(tx, ty, tz, rho, x, y, z, f):
    """R_{tuv} arrays on the pair grid from Boys values f[(n, ...)]."""
    memo = {}

    def r(n, t, u, v):
        key = (n, t, u, v)
        if key in memo:
            return memo[key]
        if t == u == v == 0:
            val = (-2.0 * rho) ** n * f[n]
        elif t > 0:
            val = x * r(n + 1, t - 1, u, v)
            if t > 1:
                val = val + (t - 1) * r(n + 1, t - 2, u, v)
        elif u > 0:
            val = y * r(n + 1, t, u - 1, v)
            if u > 1:
                val = val + (u - 1) * r(n + 1, t, u - 2, v)
        else:
            val = z * r(n + 1, t, u, v - 1)
            if v > 1:
                val = val + (v - 1) * r(n + 1, t, u, v - 2)
        memo[key] = val
        return val

    return {(t, u, v): r(0, t, u, v)
            for t in range(tx + 1)
            for u in range(ty + 1)
            for v in range(tz + 1)}


def _hermite_weights(pd: PairData):
    """c12-weighted Hermite tensor W[n, t, u, v] plus nonzero index list."""
    ex, ey, ez = pd.esel
    w = np.einsum("n,nt,nu,nv->ntuv", pd.c12, ex, ey, ez)
    idx = [(t, u, v)
           for t in range(ex.shape[1])
           for u in range(ey.shape[1])
           for v in range(ez.shape[1])
           if np.any(w[:, t, u, v])]
    return w, idx


def overlap_matrix(aos):
    n = len(aos)
    s = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            s[i, j] = s[j, i] = PairData(aos[i], aos[j]).overlap()
    return s


def kinetic_matrix(aos):
    n = len(aos)
    t = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            t[i, j] = t[j, i] = PairData(aos[i], aos[j]).kinetic()
    return t


def nuclear_matrix(aos, charges, centers):
    n = len(aos)
    v = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            v[i, j] = v[j, i] = PairData(aos[i], aos[j]).nuclear(
                charges, centers)
    return v


def eri_tensor(aos):
    """Chemist-notation (ij|kl) with full 8-fold symmetry."""
    n = len(aos)
    pairs = {}
    weights = {}
    for i in range(n):
        for j in range(i, n):
            pd = PairData(aos[i], aos[j])
            pairs[(i, j)] = pd
            weights[(i, j)] = _hermite_weights(pd)
    g = np.zeros((n, n, n, n))
    plist = sorted(pairs)
    for pi, (i, j) in enumerate(plist):
        pd1 = pairs[(i, j)]
        w1, idx1 = weights[(i, j)]
        for (k, l) in plist[pi:]:
            pd2 = pairs[(k, l)]
            w2, idx2 = weights[(k, l)]
            val = _eri_quartet(pd1, w1, idx1, pd2, w2, idx2)
            for a, b in ((i, j), (j, i)):
                for c, d in ((k, l), (l, k)):
                    g[a, b, c, d] = val
                    g[c, d, a, b] = val
    return g


def _eri_quartet(pd1, w1, idx1, pd2, w2, idx2) -> float:
    p1, p2 = pd1.p, pd2.p
    rho = p1[:, None] * p2[None, :] / (p1[:, None] + p2[None, :])
    dx = pd1.P[:, 0, None] - pd2.P[None, :, 0]
    dy = pd1.P[:, 1, None] - pd2.P[None, :, 1]
    dz = pd1.P[:, 2, None] - pd2.P[None, :, 2]
    t = rho * (dx * dx + dy * dy + dz * dz)
    tx = max(a[0] for a in idx1) + max(b[0] for b in idx2)
    ty = max(a[1] for a in idx1) + max(b[1] for b in idx2)
    tz = max(a[2] for a in idx1) + max(b[2] for b in idx2)
    f = boys(tx + ty + tz, t)
    r = _hermite_coulomb(tx, ty, tz, rho, dx, dy, dz, f)
    pref = (2.0 * math.pi ** 2.5
            / (p1[:, None] * p2[None, :] * np.sqrt(p1[:, None] + p2[None, :])))
    total = 0.0
    for (t1, u1, v1) in idx1:
        x1 = w1[:, t1, u1, v1]
        for (t2, u2, v2) in idx2:
            sign = -1.0 if (t2 + u2 + v2) % 2 else 1.0
            x2 = w2[:, t2, u2, v2]
            kern = r[(t1 + t2, u1 + u2, v1 + v2)]
            total += sign * float(x1 @ (pref * kern) @ x2)
    return total
