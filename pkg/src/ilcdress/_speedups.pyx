# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel backend. Mirrors ilcdress.kernels_py exactly.

Inputs bind to const memoryviews (SparsePauliOp storage is read-only);
complex outputs are written through float64 component views so the
real/imag slots are produced exactly as in the numpy fallback.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

cdef extern from *:
    """
    #if defined(_MSC_VER)
    #include <intrin.h>
    static inline unsigned long long ild_popcnt(unsigned long long v)
    { return (unsigned long long)__popcnt64(v); }
    #else
    static inline unsigned long long ild_popcnt(unsigned long long v)
    { return (unsigned long long)__builtin_popcountll(v); }
    #endif
    """
    unsigned long long ild_popcnt(unsigned long long v) nogil

BACKEND = "compiled"


def row_popcount(bits):
    cdef const cnp.uint64_t[:, ::1] b = bits
    cdef Py_ssize_t t = b.shape[0], l = b.shape[1], i, j
    out = np.zeros(t, dtype=np.int64)
    cdef cnp.int64_t[::1] ov = out
    cdef long long acc
    for i in range(t):
        acc = 0
        for j in range(l):
            acc += <long long>ild_popcnt(b[i, j])
        ov[i] = acc
    return out


def mul_term_word(x, z, wx, wz, side):
    cdef const cnp.uint64_t[:, ::1] xv = x
    cdef const cnp.uint64_t[:, ::1] zv = z
    cdef const cnp.uint64_t[::1] wxv = wx
    cdef const cnp.uint64_t[::1] wzv = wz
    cdef Py_ssize_t t = xv.shape[0], l = xv.shape[1], i, j
    cdef int left
    if side == "left":
        left = 1
    elif side == "right":
        left = 0
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    xc = np.empty((t, l), dtype=np.uint64)
    zc = np.empty((t, l), dtype=np.uint64)
    kk = np.empty(t, dtype=np.uint8)
    cdef cnp.uint64_t[:, ::1] xcv = xc
    cdef cnp.uint64_t[:, ::1] zcv = zc
    cdef cnp.uint8_t[::1] kv = kk
    cdef long long ya, yc, cross, kacc, yw = 0
    cdef unsigned long long a, bz, xn, zn
    for j in range(l):
        yw += <long long>ild_popcnt(wxv[j] & wzv[j])
    for i in range(t):
        ya = 0; yc = 0; cross = 0
        for j in range(l):
            a = xv[i, j]; bz = zv[i, j]
            xn = a ^ wxv[j]; zn = bz ^ wzv[j]
            xcv[i, j] = xn; zcv[i, j] = zn
            ya += <long long>ild_popcnt(a & bz)
            yc += <long long>ild_popcnt(xn & zn)
            if left:
                cross += <long long>ild_popcnt(wzv[j] & a)
            else:
                cross += <long long>ild_popcnt(bz & wxv[j])
        kacc = (ya + yw - yc + 2 * cross) % 4
        if kacc < 0:
            kacc += 4
        kv[i] = <cnp.uint8_t>kacc
    return xc, zc, kk


def sandwich_term(x, z, w1x, w1z, w2x, w2z):
    cdef const cnp.uint64_t[:, ::1] xv = x
    cdef const cnp.uint64_t[:, ::1] zv = z
    cdef const cnp.uint64_t[::1] w1xv = w1x
    cdef const cnp.uint64_t[::1] w1zv = w1z
    cdef const cnp.uint64_t[::1] w2xv = w2x
    cdef const cnp.uint64_t[::1] w2zv = w2z
    cdef Py_ssize_t t = xv.shape[0], l = xv.shape[1], i, j
    xc = np.empty((t, l), dtype=np.uint64)
    zc = np.empty((t, l), dtype=np.uint64)
    kk = np.empty(t, dtype=np.uint8)
    cdef cnp.uint64_t[:, ::1] xcv = xc
    cdef cnp.uint64_t[:, ::1] zcv = zc
    cdef cnp.uint8_t[::1] kv = kk
    cdef long long y1 = 0, y2 = 0, ya, ym, yc, cross1, cross2, kacc
    cdef unsigned long long a, bz, xm, zm, xn, zn
    for j in range(l):
        y1 += <long long>ild_popcnt(w1xv[j] & w1zv[j])
        y2 += <long long>ild_popcnt(w2xv[j] & w2zv[j])
    for i in range(t):
        ya = 0; ym = 0; yc = 0; cross1 = 0; cross2 = 0
        for j in range(l):
            a = xv[i, j]; bz = zv[i, j]
            xm = a ^ w1xv[j]; zm = bz ^ w1zv[j]
            xn = xm ^ w2xv[j]; zn = zm ^ w2zv[j]
            xcv[i, j] = xn; zcv[i, j] = zn
            ya += <long long>ild_popcnt(a & bz)
            ym += <long long>ild_popcnt(xm & zm)
            yc += <long long>ild_popcnt(xn & zn)
            cross1 += <long long>ild_popcnt(w1zv[j] & a)
            cross2 += <long long>ild_popcnt(zm & w2xv[j])
        kacc = ((y1 + ya - ym + 2 * cross1) + (ym + y2 - yc + 2 * cross2)) % 4
        if kacc < 0:
            kacc += 4
        kv[i] = <cnp.uint8_t>kacc
    return xc, zc, kk


def anticommute_mask(x, z, wx, wz):
    cdef const cnp.uint64_t[:, ::1] xv = x
    cdef const cnp.uint64_t[:, ::1] zv = z
    cdef const cnp.uint64_t[::1] wxv = wx
    cdef const cnp.uint64_t[::1] wzv = wz
    cdef Py_ssize_t t = xv.shape[0], l = xv.shape[1], i, j
    out = np.empty(t, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef long long cross
    for i in range(t):
        cross = 0
        for j in range(l):
            cross += <long long>ild_popcnt(xv[i, j] & wzv[j])
            cross += <long long>ild_popcnt(zv[i, j] & wxv[j])
        ov[i] = <cnp.uint8_t>(cross & 1)
    return out.view(np.bool_)


def phase_apply(c, k):
    cdef const double complex[::1] cv = c
    cdef const cnp.uint8_t[::1] kv = k
    cdef Py_ssize_t t = cv.shape[0], i
    out = np.empty(t, dtype=np.complex128)
    cdef double[:, ::1] ov = out.view(np.float64).reshape(t, 2)
    cdef double re, im
    cdef int kk
    for i in range(t):
        re = cv[i].real; im = cv[i].imag
        kk = kv[i]
        if kk == 0:
            ov[i, 0] = re; ov[i, 1] = im
        elif kk == 1:
            ov[i, 0] = -im; ov[i, 1] = re
        elif kk == 2:
            ov[i, 0] = -re; ov[i, 1] = -im
        else:
            ov[i, 0] = im; ov[i, 1] = -re
    return out


def merge_canonical(x, z, c, double threshold):
    cdef Py_ssize_t t = x.shape[0], l = x.shape[1]
    if t == 0:
        return x.copy(), z.copy(), c.copy()
    # permutation from numpy (its lexsort is already fast); segment
    # combine + prune in the C loop below.
    keys = [z[:, j] for j in range(l)] + [x[:, j] for j in range(l)]
    perm = np.lexsort(tuple(keys))
    cdef const cnp.intp_t[::1] pv = perm
    cdef const cnp.uint64_t[:, ::1] xv = x
    cdef const cnp.uint64_t[:, ::1] zv = z
    cdef const double complex[::1] cv = c
    xo = np.empty((t, l), dtype=np.uint64)
    zo = np.empty((t, l), dtype=np.uint64)
    co = np.empty(t, dtype=np.complex128)
    cdef cnp.uint64_t[:, ::1] xov = xo
    cdef cnp.uint64_t[:, ::1] zov = zo
    cdef double[:, ::1] cov = co.view(np.float64).reshape(t, 2)
    cdef Py_ssize_t i, j, q, p, pj, n_out = 0
    cdef double re, im
    cdef bint same
    cdef double thr2 = threshold * threshold
    i = 0
    while i < t:
        p = pv[i]
        re = cv[p].real; im = cv[p].imag
        j = i + 1
        while j < t:
            pj = pv[j]
            same = True
            for q in range(l):
                if xv[pj, q] != xv[p, q] or zv[pj, q] != zv[p, q]:
                    same = False
                    break
            if not same:
                break
            re += cv[pj].real; im += cv[pj].imag
            j += 1
        if re * re + im * im > thr2:
            for q in range(l):
                xov[n_out, q] = xv[p, q]
                zov[n_out, q] = zv[p, q]
            cov[n_out, 0] = re; cov[n_out, 1] = im
            n_out += 1
        i = j
    return xo[:n_out].copy(), zo[:n_out].copy(), co[:n_out].copy()


def diag_basis_sum(x, z, c, phi):
    cdef const cnp.uint64_t[:, ::1] xv = x
    cdef const cnp.uint64_t[:, ::1] zv = z
    cdef const double complex[::1] cv = c
    cdef const cnp.uint64_t[::1] pv = phi
    cdef Py_ssize_t t = xv.shape[0], l = xv.shape[1], i, j
    cdef double re = 0.0, im = 0.0
    cdef long long par
    cdef bint diag
    for i in range(t):
        diag = True
        for j in range(l):
            if xv[i, j] != 0:
                diag = False
                break
        if not diag:
            continue
        par = 0
        for j in range(l):
            par += <long long>ild_popcnt(zv[i, j] & pv[j])
        if par & 1:
            re -= cv[i].real; im -= cv[i].imag
        else:
            re += cv[i].real; im += cv[i].imag
    return complex(re, im)
