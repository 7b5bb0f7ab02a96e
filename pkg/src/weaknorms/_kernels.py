"""Hot inner loops, each with a numba version and a pure-numpy version.

Set ``WEAKNORMS_NUMBA=0`` in the environment to force the numpy path.
The numba path is also skipped silently when numba cannot be imported.
Both paths are importable directly (``*_nb`` / ``*_np``) so tests and the
benchmark can compare them.
"""
import os

import numpy as np

try:
    from numba import njit
    HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and os.environ.get("WEAKNORMS_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


# ---------------------------------------------------------------------------
# direct (O(N^2n)) linear convolution, used only as an independent oracle

def direct_convolve_np(a, b):
    """Full linear convolution of two equal-shape arrays by shift-and-add."""
    out_shape = tuple(2 * s for s in a.shape)
    out = np.zeros(out_shape, dtype=np.result_type(a, b, np.float64))
    for idx in np.ndindex(*a.shape):
        v = a[idx]
        if v == 0.0:
            continue
        sl = tuple(slice(i, i + s) for i, s in zip(idx, b.shape))
        out[sl] += v * b
    return out


if HAS_NUMBA:
    @njit(cache=True)
    def _direct_convolve_1d(a, b):
        n = a.shape[0]
        out = np.zeros(2 * n)
        for i in range(n):
            ai = a[i]
            if ai == 0.0:
                continue
            for j in range(n):
                out[i + j] += ai * b[j]
        return out

    @njit(cache=True)
    def _direct_convolve_2d(a, b):
        n0, n1 = a.shape
        out = np.zeros((2 * n0, 2 * n1))
        for i0 in range(n0):
            for i1 in range(n1):
                ai = a[i0, i1]
                if ai == 0.0:
                    continue
                for j0 in range(n0):
                    for j1 in range(n1):
                        out[i0 + j0, i1 + j1] += ai * b[j0, j1]
        return out

    @njit(cache=True)
    def _direct_convolve_3d(a, b):
        n0, n1, n2 = a.shape
        out = np.zeros((2 * n0, 2 * n1, 2 * n2))
        for i0 in range(n0):
            for i1 in range(n1):
                for i2 in range(n2):
                    ai = a[i0, i1, i2]
                    if ai == 0.0:
                        continue
                    for j0 in range(n0):
                        for j1 in range(n1):
                            for j2 in range(n2):
                                out[i0 + j0, i1 + j1, i2 + j2] += ai * b[j0, j1, j2]
        return out

    def direct_convolve_nb(a, b):
        a = np.ascontiguousarray(a, dtype=np.float64)
        b = np.ascontiguousarray(b, dtype=np.float64)
        return (_direct_convolve_1d, _direct_convolve_2d, _direct_convolve_3d)[a.ndim - 1](a, b)
else:  # pragma: no cover
    direct_convolve_nb = direct_convolve_np


def direct_convolve(a, b):
    if USE_NUMBA:
        return direct_convolve_nb(a, b)
    return direct_convolve_np(a, b)


# ---------------------------------------------------------------------------
# brute-force (L1, Linf) K-functional: minimum over two families of splits

def kfunc_bruteforce_np(absvals, candidates, t, vol):
    absvals = np.asarray(absvals, dtype=np.float64)
    best = np.inf
    for start in range(0, candidates.size, 256):
        m = candidates[start:start + 256, None]
        over = absvals[None, :] > m
        # amplitude split: g*chi(|g|>M) in L1, g*chi(|g|<=M) in Linf
        hi = np.where(over, absvals[None, :], 0.0).sum(axis=1) * vol
        lo = np.where(over, 0.0, absvals[None, :]).max(axis=1)
        best = min(best, float(np.min(hi + t * lo)))
        # truncation split: (|g|-M)_+ in L1, min(|g|, M) in Linf
        hi = np.maximum(absvals[None, :] - m, 0.0).sum(axis=1) * vol
        lo = np.minimum(absvals[None, :], m).max(axis=1)
        best = min(best, float(np.min(hi + t * lo)))
    return best


if HAS_NUMBA:
    @njit(cache=True)
    def kfunc_bruteforce_nb(absvals, candidates, t, vol):
        best = np.inf
        for c in range(candidates.shape[0]):
            m = candidates[c]
            hi_a = 0.0
            lo_a = 0.0
            hi_t = 0.0
            lo_t = 0.0
            for k in range(absvals.shape[0]):
                v = absvals[k]
                if v > m:
                    hi_a += v
                    hi_t += v - m
                    if m > lo_t:
                        lo_t = m
                else:
                    if v > lo_a:
                        lo_a = v
                    if v > lo_t:
                        lo_t = v
            val = min(hi_a * vol + t * lo_a, hi_t * vol + t * lo_t)
            if val < best:
                best = val
        return best
else:  # pragma: no cover
    kfunc_bruteforce_nb = kfunc_bruteforce_np


def kfunc_bruteforce(absvals, candidates, t, vol):
    absvals = np.ascontiguousarray(absvals, dtype=np.float64)
    candidates = np.ascontiguousarray(candidates, dtype=np.float64)
    if USE_NUMBA:
        return float(kfunc_bruteforce_nb(absvals, candidates, float(t), float(vol)))
    return kfunc_bruteforce_np(absvals, candidates, float(t), float(vol))


# ---------------------------------------------------------------------------
# dyadic mean oscillation: (1/|Q|) int_Q |f - f_Q| for every cube at one level

def _blocked(grid, level):
    """View an n-d array of side N as (2^l, b, 2^l, b, ...) blocks."""
    n = grid.ndim
    side = grid.shape[0]
    k = 2 ** level
    b = side // k
    shape = []
    for _ in range(n):
        shape.extend((k, b))
    return grid.reshape(shape), tuple(range(1, 2 * n, 2))


def mean_oscillation_np(grid, level):
    blocks, axes = _blocked(grid, level)
    means = blocks.mean(axis=axes, keepdims=True)
    return np.abs(blocks - means).mean(axis=axes)


if HAS_NUMBA:
    @njit(cache=True)
    def _mean_oscillation_flat(flat, ncubes, csize):
        # flat is laid out cube-major: cube c owns flat[c*csize:(c+1)*csize]
        out = np.empty(ncubes)
        for c in range(ncubes):
            s = 0.0
            base = c * csize
            for i in range(csize):
                s += flat[base + i]
            mean = s / csize
            acc = 0.0
            for i in range(csize):
                acc += abs(flat[base + i] - mean)
            out[c] = acc / csize
        return out

    def mean_oscillation_nb(grid, level):
        n = grid.ndim
        blocks, _ = _blocked(grid, level)
        k = 2 ** level
        # move cube indices to the front, cell indices to the back
        order = tuple(range(0, 2 * n, 2)) + tuple(range(1, 2 * n, 2))
        flat = np.ascontiguousarray(blocks.transpose(order), dtype=np.float64).ravel()
        ncubes = k ** n
        out = _mean_oscillation_flat(flat, ncubes, flat.size // ncubes)
        return out.reshape((k,) * n)
else:  # pragma: no cover
    mean_oscillation_nb = mean_oscillation_np


def mean_oscillation(grid, level):
    if USE_NUMBA:
        return mean_oscillation_nb(grid, level)
    return mean_oscillation_np(grid, level)


def block_sums(grid, level):
    """Sum of an n-d array of side N over each dyadic block at ``level``."""
    blocks, axes = _blocked(grid, level)
    return blocks.sum(axis=axes)
