"""Numpy implementations of the spectra kernels (fallback when the extension is absent).

All kernels take an ``int64`` lookup table of length ``q = 2^n`` and fill a
caller-owned ``int32`` output over a half-open index range, so the caller can
split work across threads without sharing any accumulator.
"""
from __future__ import annotations

import numpy as np

_ROW_CHUNK = 64


def ddt_block(table: np.ndarray, a0: int, a1: int, out: np.ndarray) -> None:
    """``out[a - a0, b] = #{x : F(x) ^ F(x ^ a) == b}`` for ``a0 <= a < a1``."""
    q = table.shape[0]
    xs = np.arange(q, dtype=np.int64)
    for c0 in range(a0, a1, _ROW_CHUNK):
        c1 = min(c0 + _ROW_CHUNK, a1)
        rows = np.arange(c0, c1, dtype=np.int64)[:, None]
        d = table[None, :] ^ table[rows ^ xs[None, :]]
        flat = ((rows - c0) * q + d).ravel()
        counts = np.bincount(flat, minlength=(c1 - c0) * q).reshape(c1 - c0, q)
        out[c0 - a0:c1 - a0] = counts


def fwht_rows(m: np.ndarray) -> None:
    """In-place unnormalised Walsh-Hadamard transform along axis 1."""
    rows, q = m.shape
    h = 1
    while h < q:
        v = m.reshape(rows, -1, 2, h)
        lo = v[:, :, 0, :].copy()
        v[:, :, 0, :] += v[:, :, 1, :]
        v[:, :, 1, :] = lo - v[:, :, 1, :]
        h <<= 1


def walsh_block(table: np.ndarray, v0: int, v1: int, out: np.ndarray) -> None:
    """``out[v - v0, u] = sum_x (-1)^(u.x + v.F(x))`` for mask indices ``v0 <= v < v1``."""
    for c0 in range(v0, v1, _ROW_CHUNK):
        c1 = min(c0 + _ROW_CHUNK, v1)
        vs = np.arange(c0, c1, dtype=np.int64)[:, None]
        par = (np.bitwise_count(vs & table[None, :]) & 1).astype(np.int32)
        block = 1 - 2 * par
        fwht_rows(block)
        out[c0 - v0:c1 - v0] = block


def bct_block(table: np.ndarray, b0: int, b1: int, out: np.ndarray) -> None:
    """Accumulate ``out[a, b]`` (system-(2) orientation) for output differences ``b0 <= b < b1``.

    For each input difference ``alpha`` the inputs are bucketed by
    ``b = F(x) ^ F(x ^ alpha)``; every unordered pair ``{x, x'}`` inside a
    bucket adds 2 to ``out[x ^ x', b]``.
    """
    q = table.shape[0]
    xs = np.arange(q, dtype=np.int64)
    flat = out.reshape(-1)
    pending: list[np.ndarray] = []
    pending_size = 0
    for alpha in range(1, q):
        d = table ^ table[xs ^ alpha]
        sel = (d >= b0) & (d < b1)
        keys = d[sel]
        members = xs[sel]
        order = np.argsort(keys, kind="stable")
        keys = keys[order]
        members = members[order]
        offset = 1
        while offset < keys.size:
            same = keys[:-offset] == keys[offset:]
            if not same.any():
                break
            a = members[:-offset][same] ^ members[offset:][same]
            pending.append(a * q + keys[:-offset][same])
            pending_size += a.size
            offset += 1
        if pending_size > 1 << 22:
            _flush(pending, flat)
            pending_size = 0
    _flush(pending, flat)


def _flush(pending: list[np.ndarray], flat: np.ndarray) -> None:
    if not pending:
        return
    idx = np.concatenate(pending)
    pending.clear()
    flat += (2 * np.bincount(idx, minlength=flat.size)).astype(flat.dtype)
