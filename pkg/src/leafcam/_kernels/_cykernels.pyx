# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled pixel kernels.

Each function mirrors its ``_pykernels`` twin bit-for-bit: same border
policy (out-of-bounds = background), same label numbering, same float64
interpolation arithmetic.
"""
import numpy as np

from libc.math cimport floor


def erode(const unsigned char[:, ::1] mask, int k):
    # separable min with zero border: AND of k shifted streams per axis.
    # The plain elementwise inner loops vectorize under -O3.
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    cdef Py_ssize_t y, x, d, c
    cdef Py_ssize_t r = k // 2
    if k == 1:
        return np.asarray(mask).copy()
    buf_arr = np.zeros(w + 2 * r, dtype=np.uint8)
    tmp_arr = np.empty((h, w), dtype=np.uint8)
    out_arr = np.zeros((h, w), dtype=np.uint8)
    cdef unsigned char[::1] buf = buf_arr
    cdef unsigned char[:, ::1] tmp = tmp_arr
    cdef unsigned char[:, ::1] out = out_arr
    for y in range(h):
        for x in range(w):
            buf[r + x] = mask[y, x]
        for x in range(w):
            tmp[y, x] = buf[x]
        for d in range(1, k):
            for x in range(w):
                tmp[y, x] &= buf[x + d]
    # rows whose vertical window exits the image stay background
    for c in range(r, h - r):
        for x in range(w):
            out[c, x] = tmp[c - r, x]
        for d in range(1, k):
            for x in range(w):
                out[c, x] &= tmp[c - r + d, x]
    return out_arr


def dilate(const unsigned char[:, ::1] mask, int k):
    # separable max, window clipped to the image: OR of shifted streams
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    cdef Py_ssize_t y, x, d, c, lo, hi
    cdef Py_ssize_t r = k // 2
    if k == 1:
        return np.asarray(mask).copy()
    buf_arr = np.zeros(w + 2 * r, dtype=np.uint8)
    tmp_arr = np.empty((h, w), dtype=np.uint8)
    out_arr = np.empty((h, w), dtype=np.uint8)
    cdef unsigned char[::1] buf = buf_arr
    cdef unsigned char[:, ::1] tmp = tmp_arr
    cdef unsigned char[:, ::1] out = out_arr
    for y in range(h):
        for x in range(w):
            buf[r + x] = mask[y, x]
        for x in range(w):
            tmp[y, x] = buf[x]
        for d in range(1, k):
            for x in range(w):
                tmp[y, x] |= buf[x + d]
    for c in range(h):
        lo = c - r if c - r > 0 else 0
        hi = c + r if c + r < h - 1 else h - 1
        for x in range(w):
            out[c, x] = tmp[lo, x]
        for d in range(lo + 1, hi + 1):
            for x in range(w):
                out[c, x] |= tmp[d, x]
    return out_arr


def resize_bilinear(const float[:, ::1] src, Py_ssize_t out_h, Py_ssize_t out_w):
    cdef Py_ssize_t in_h = src.shape[0], in_w = src.shape[1]
    cdef double scale_y = in_h / <double>out_h
    cdef double scale_x = in_w / <double>out_w
    out_arr = np.empty((out_h, out_w), dtype=np.float32)
    cdef float[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, y0, y1, x0, x1
    cdef double sy, sx, fy, fx, a, b, c, d, top, bot
    for i in range(out_h):
        sy = (i + 0.5) * scale_y - 0.5
        if sy < 0.0:
            sy = 0.0
        if sy > in_h - 1.0:
            sy = in_h - 1.0
        y0 = <Py_ssize_t>floor(sy)
        fy = sy - y0
        y1 = y0 + 1
        if y1 > in_h - 1:
            y1 = in_h - 1
        for j in range(out_w):
            sx = (j + 0.5) * scale_x - 0.5
            if sx < 0.0:
                sx = 0.0
            if sx > in_w - 1.0:
                sx = in_w - 1.0
            x0 = <Py_ssize_t>floor(sx)
            fx = sx - x0
            x1 = x0 + 1
            if x1 > in_w - 1:
                x1 = in_w - 1
            a = src[y0, x0]
            b = src[y0, x1]
            c = src[y1, x0]
            d = src[y1, x1]
            top = a + fx * (b - a)
            bot = c + fx * (d - c)
            out[i, j] = <float>(top + fy * (bot - top))
    return out_arr


cdef inline int _find(int[::1] parent, int x):
    while parent[x] != x:
        parent[x] = parent[parent[x]]
        x = parent[x]
    return x


def label_components(const unsigned char[:, ::1] mask):
    cdef Py_ssize_t h = mask.shape[0], w = mask.shape[1]
    lab_arr = np.zeros((h, w), dtype=np.int32)
    parent_arr = np.zeros(h * w + 1, dtype=np.int32)
    cdef int[:, ::1] lab = lab_arr
    cdef int[::1] parent = parent_arr
    cdef Py_ssize_t y, x, nx
    cdef int next_label = 1, best, neigh, ra, rb, tmp
    for y in range(h):
        for x in range(w):
            if mask[y, x] == 0:
                continue
            best = 0
            if x > 0 and lab[y, x - 1]:
                best = lab[y, x - 1]
            if y > 0:
                for nx in range(x - 1, x + 2):
                    if 0 <= nx < w and lab[y - 1, nx]:
                        neigh = lab[y - 1, nx]
                        if best == 0:
                            best = neigh
                        elif neigh != best:
                            ra = _find(parent, best)
                            rb = _find(parent, neigh)
                            if ra != rb:
                                if ra > rb:
                                    tmp = ra
                                    ra = rb
                                    rb = tmp
                                parent[rb] = ra
                                best = ra
            if best == 0:
                parent[next_label] = next_label
                best = next_label
                next_label += 1
            lab[y, x] = best
    dense_arr = np.zeros(next_label, dtype=np.int32)
    cdef int[::1] dense = dense_arr
    cdef int ncomp = 0, p, root
    for p in range(1, next_label):
        root = _find(parent, p)
        if dense[root] == 0:
            ncomp += 1
            dense[root] = ncomp
    for y in range(h):
        for x in range(w):
            if lab[y, x]:
                lab[y, x] = dense[_find(parent, lab[y, x])]
    return lab_arr, ncomp
