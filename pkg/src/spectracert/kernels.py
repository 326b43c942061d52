"""Batched integer determinants: a numba kernel with a pure-numpy fallback.

The fallback is selected when numba is missing or ``SPECTRACERT_NO_NUMBA=1``.
Both backends run fraction-free elimination on int64 and are exact as long as
every intermediate fits; :func:`batch_det` checks a Hadamard bound first and
drops to Python integers when it does not.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    njit = None

ENV_FLAG = "SPECTRACERT_NO_NUMBA"
# Bareiss multiplies two minors before dividing, so minors must stay below 2**31.5
_INT64_SAFE = float(2**62)


def backend() -> str:
    if njit is None or os.environ.get(ENV_FLAG, "") not in ("", "0"):
        return "numpy"
    return "numba"


def _bareiss_one(a: np.ndarray) -> int:
    n = a.shape[0]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k, k] == 0:
            r = k + 1
            while r < n and a[r, k] == 0:
                r += 1
            if r == n:
                return 0
            for j in range(n):
                tmp = a[k, j]
                a[k, j] = a[r, j]
                a[r, j] = tmp
            sign = -sign
        akk = a[k, k]
        for i in range(k + 1, n):
            aik = a[i, k]
            for j in range(k + 1, n):
                a[i, j] = (a[i, j] * akk - aik * a[k, j]) // prev
        prev = akk
    return sign * a[n - 1, n - 1]


def _bareiss_batch_py(mats: np.ndarray) -> np.ndarray:
    out = np.empty(mats.shape[0], dtype=np.int64)
    for b in range(mats.shape[0]):
        out[b] = _bareiss_one(mats[b].copy())
    return out


if njit is not None:
    _bareiss_one_nb = njit(cache=True)(_bareiss_one)

    @njit(cache=True)
    def _bareiss_batch_nb(mats):
        out = np.empty(mats.shape[0], dtype=np.int64)
        for b in range(mats.shape[0]):
            out[b] = _bareiss_one_nb(mats[b].copy())
        return out


def _bareiss_batch_np(mats: np.ndarray) -> np.ndarray:
    """Same elimination, vectorised across the batch axis."""
    a = mats.copy()
    bsz, n, _ = a.shape
    if n == 0:
        return np.ones(bsz, dtype=np.int64)
    sign = np.ones(bsz, dtype=np.int64)
    prev = np.ones(bsz, dtype=np.int64)
    dead = np.zeros(bsz, dtype=bool)
    rows = np.arange(bsz)
    for k in range(n - 1):
        need = a[:, k, k] == 0
        if need.any():
            cand = a[:, k + 1 :, k] != 0
            has = cand.any(axis=1)
            swap = np.nonzero(need & has)[0]
            if swap.size:
                r = k + 1 + np.argmax(cand[swap], axis=1)
                top = a[swap, k, :].copy()
                a[swap, k, :] = a[swap, r, :]
                a[swap, r, :] = top
                sign[swap] = -sign[swap]
            stuck = need & ~has
            if stuck.any():
                dead |= stuck
                a[stuck, k, k] = 1
        akk = a[:, k, k][:, None, None]
        block = a[:, k + 1 :, k + 1 :] * akk - a[:, k + 1 :, k : k + 1] * a[:, k : k + 1, k + 1 :]
        a[:, k + 1 :, k + 1 :] = block // prev[:, None, None]
        prev = a[rows, k, k]
    out = sign * a[:, n - 1, n - 1]
    out[dead] = 0
    return out


def hadamard_bound(mats: np.ndarray) -> float:
    """Largest product of row norms over the batch: bounds every minor."""
    if mats.size == 0:
        return 1.0
    norms = np.sqrt((mats.astype(np.float64) ** 2).sum(axis=2))
    norms = np.maximum(norms, 1.0)
    return float(np.exp(np.log(norms).sum(axis=1).max()))


def fits_int64(mats: np.ndarray) -> bool:
    """Hadamard bound check: every minor squared stays inside int64."""
    h = hadamard_bound(mats)
    return h * h * (1 + 1e-9) < _INT64_SAFE


def _dets(mats: np.ndarray, force: str | None):
    """int64 array of determinants, or ``None`` when int64 is not safe."""
    if mats.dtype == object or not fits_int64(mats):
        return None
    mats = mats.astype(np.int64)
    which = force or backend()
    if which == "numba" and njit is None:
        which = "numpy"
    if which == "numba":
        return _bareiss_batch_nb(mats)
    if which == "numpy":
        return _bareiss_batch_np(mats)
    if which == "python":
        return _bareiss_batch_py(mats)
    raise ValueError(f"unknown backend {which!r}")


def _check(mats) -> np.ndarray:
    mats = np.asarray(mats)
    if mats.ndim != 3 or mats.shape[1] != mats.shape[2]:
        raise ValueError("expected an array of shape (batch, n, n)")
    return mats


def batch_det(mats: np.ndarray, force: str | None = None) -> list[int]:
    """Exact determinants of a stack of integer matrices, as Python ints."""
    mats = _check(mats)
    if mats.shape[1] == 0:
        return [1] * mats.shape[0]
    dets = _dets(mats, force)
    if dets is None:
        return [_bareiss_exact([[int(c) for c in row] for row in m]) for m in mats]
    return [int(d) for d in dets]


def batch_det_sum(mats: np.ndarray, force: str | None = None) -> int:
    """Exact sum of the determinants of a stack of integer matrices."""
    mats = _check(mats)
    if mats.shape[1] == 0:
        return mats.shape[0]
    dets = _dets(mats, force)
    if dets is None:
        return sum(_bareiss_exact([[int(c) for c in row] for row in m]) for m in mats)
    # each |det| <= H < 2**31, so an int64 sum is safe while batch * H stays below 2**62
    if hadamard_bound(mats) * len(dets) < _INT64_SAFE:
        return int(dets.sum())
    return sum(int(d) for d in dets)


def _bareiss_exact(a: list[list[int]]) -> int:
    from .pencils import bareiss_det

    return bareiss_det(a)
