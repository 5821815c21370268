"""Differential, Walsh and boomerang spectra, each with a literal-definition oracle.

Fast paths dispatch to the selected kernel backend (see ``_backend``).  Every
entry point accepts a :class:`LutFunction` or a bare integer table whose length
is a power of two; the latter is how subfield restrictions are analysed.

Table orientation: ``ddt.table[a, b] = #{x : F(x+a) + F(x) = b}``;
``walsh.table[a, b] = W_F(a, b)``; ``bct.table[a, b]`` counts the pairs
``(x, alpha)`` with ``D_alpha F(x+a) = D_alpha F(x) = b``.  The last one equals
the classical ``T_F(b, a)``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np

from . import _backend, gf2n
from .errors import InvariantViolation, ParameterError
from .funcrep import LutFunction, is_permutation

if TYPE_CHECKING:
    from .constructions import PiecewiseSpec

ORACLE_MAX_N = 8


def _table(obj) -> np.ndarray:
    t = obj.table if isinstance(obj, LutFunction) else np.asarray(obj, dtype=np.int64)
    q = t.shape[0]
    if t.ndim != 1 or q < 2 or q & (q - 1):
        raise ParameterError("table length must be a power of two >= 2")
    return np.ascontiguousarray(t, dtype=np.int64)


def _n_of(t: np.ndarray) -> int:
    return t.shape[0].bit_length() - 1


def _hist(values: np.ndarray) -> dict[int, int]:
    vals, counts = np.unique(values, return_counts=True)
    return {int(v): int(c) for v, c in zip(vals, counts)}


def _merge(into: Counter, values: np.ndarray) -> None:
    for v, c in _hist(values).items():
        into[v] += c


@dataclass
class DifferentialSpectrum:
    uniformity: int
    row_max: np.ndarray
    histogram: dict[int, int]
    table: np.ndarray | None = field(default=None, repr=False)

    def summary(self) -> dict:
        return {"delta": self.uniformity, "histogram": self.histogram}


@dataclass
class WalshSpectrum:
    nonlinearity: int
    max_abs: int
    value_histogram: dict[int, int]
    table: np.ndarray | None = field(default=None, repr=False)

    def abs_histogram(self) -> dict[int, int]:
        out: Counter = Counter()
        for v, c in self.value_histogram.items():
            out[abs(v)] += c
        return dict(sorted(out.items()))

    def summary(self) -> dict:
        return {"nl": self.nonlinearity, "max_abs": self.max_abs, "histogram": self.value_histogram}


@dataclass
class BoomerangSpectrum:
    uniformity: int
    histogram: dict[int, int]
    table: np.ndarray | None = field(default=None, repr=False)
    case_partition: dict[str, int] | None = None

    def summary(self) -> dict:
        out = {"beta": self.uniformity, "histogram": self.histogram}
        if self.case_partition is not None:
            out["cases"] = self.case_partition
        return out


# --- DDT ---------------------------------------------------------------------

_DDT_BLOCK = 256


def ddt(lut, full: bool = False, threads: int = 1, backend: str | None = None) -> DifferentialSpectrum:
    """Differential spectrum in one pass over ``(a, x)``; rows are processed in blocks."""
    t = _table(lut)
    q = t.shape[0]
    kern = _backend.get(backend)
    row_max = np.zeros(q - 1, dtype=np.int64)
    hist: Counter = Counter()
    full_table = np.zeros((q, q), dtype=np.int32) if full else None
    if full:
        full_table[0, t[0] ^ t[0]] = q

    for lo in range(1, q, _DDT_BLOCK):
        hi = min(lo + _DDT_BLOCK, q)
        block = np.zeros((hi - lo, q), dtype=np.int32)

        def work(r0, r1, block=block, lo=lo):
            kern.ddt_block(t, r0, r1, block[r0 - lo:r1 - lo])

        _backend.run_ranges(work, lo, hi, threads)
        row_max[lo - 1:hi - 1] = block.max(axis=1)
        _merge(hist, block)
        if full:
            full_table[lo:hi] = block
    return DifferentialSpectrum(int(row_max.max()), row_max, dict(sorted(hist.items())), full_table)


def ddt_naive(lut, max_n: int | None = None) -> DifferentialSpectrum:
    """Literal count of solutions of ``F(x + a) + F(x) = b`` for every ``(a, b)``."""
    t = _table(lut)
    _oracle_guard(t, max_n)
    q = t.shape[0]
    xs = np.arange(q)
    bs = np.arange(q)[:, None]
    tab = np.zeros((q, q), dtype=np.int32)
    for a in range(q):
        lhs = t[xs ^ a] ^ t
        tab[a] = (lhs[None, :] == bs).sum(axis=1)
    body = tab[1:]
    return DifferentialSpectrum(int(body.max()), body.max(axis=1).astype(np.int64), _hist(body), tab)


# --- Walsh -------------------------------------------------------------------

_WALSH_BLOCK = 256


def walsh(lut, full: bool = False, threads: int = 1, backend: str | None = None) -> WalshSpectrum:
    """Walsh spectrum through one fast Hadamard transform per component.

    Components are indexed by bit masks ``v`` (``v . F(x)``) and inputs by
    masks ``u``.  When ``lut`` is a :class:`LutFunction` the full table is
    re-indexed by field elements through the trace-dual basis, so
    ``table[a, b]`` is the character sum with ``Tr(a x + b F(x))``.
    """
    t = _table(lut)
    q = t.shape[0]
    n = _n_of(t)
    kern = _backend.get(backend)
    hist: Counter = Counter()
    max_abs = 0
    mask_table = np.zeros((q, q), dtype=np.int32) if full else None
    for lo in range(1, q, _WALSH_BLOCK):
        hi = min(lo + _WALSH_BLOCK, q)
        block = np.zeros((hi - lo, q), dtype=np.int32)

        def work(r0, r1, block=block, lo=lo):
            kern.walsh_block(t, r0, r1, block[r0 - lo:r1 - lo])

        _backend.run_ranges(work, lo, hi, threads)
        max_abs = max(max_abs, int(np.abs(block).max()))
        _merge(hist, block)
        if full:
            mask_table[lo:hi] = block

    full_table = None
    if full:
        mask_table[0, 0] = q
        if isinstance(lut, LutFunction):
            u = gf2n.trace_dual_masks(lut.spec)
            full_table = mask_table[np.ix_(u, u)].T.copy()
        else:
            full_table = mask_table.T.copy()
    nl = (1 << (n - 1)) - max_abs // 2
    return WalshSpectrum(nl, max_abs, dict(sorted(hist.items())), full_table)


def walsh_naive(lut: LutFunction, max_n: int | None = None) -> WalshSpectrum:
    """``W_F(a, b) = sum_x (-1)^Tr(a x + b F(x))`` evaluated term by term."""
    if not isinstance(lut, LutFunction):
        raise ParameterError("walsh_naive needs a LutFunction (trace is field-dependent)")
    spec = lut.spec
    t = lut.table
    _oracle_guard(t, max_n)
    q = spec.order
    # scalar arithmetic on purpose: independent of the vectorised tables
    sign = np.array([1 - 2 * gf2n.absolute_trace(spec, y) for y in range(q)], dtype=np.int32)
    prod = np.array([[gf2n.mul(spec, a, x) for x in range(q)] for a in range(q)], dtype=np.int64)
    tab = np.zeros((q, q), dtype=np.int32)
    for b in range(q):
        bf = prod[b, t]
        tab[:, b] = sign[prod ^ bf[None, :]].sum(axis=1)
    body = tab[:, 1:]
    max_abs = int(np.abs(body).max())
    return WalshSpectrum((q >> 1) - max_abs // 2, max_abs, _hist(body), tab)


# --- BCT ---------------------------------------------------------------------

def _require_permutation(t: np.ndarray) -> None:
    if np.unique(t).size != t.shape[0]:
        raise ParameterError("boomerang spectra are defined for permutations only")


def bct(lut, full: bool = False, s: int | None = None, threads: int = 1,
        backend: str | None = None) -> BoomerangSpectrum:
    """Boomerang spectrum via the bucket-pair method.

    Work is ``sum_{alpha, b} |X_{alpha,b}|^2`` where ``X_{alpha,b}`` are the
    solutions of ``D_alpha F(x) = b``.  Output columns are split across threads.
    ``s`` (defaulting to the field's designated subfield) adds the per-case maxima.
    """
    t = _table(lut)
    _require_permutation(t)
    q = t.shape[0]
    kern = _backend.get(backend)
    out = np.zeros((q, q), dtype=np.int32)

    def work(b0, b1):
        kern.bct_block(t, b0, b1, out)

    _backend.run_ranges(work, 1, q, threads)
    # a zero difference on either side is satisfied by every x
    out[0, :] = q
    out[:, 0] = q
    body = out[1:, 1:]
    spec = BoomerangSpectrum(int(body.max()), _hist(body), out if full else None)
    if s is None and isinstance(lut, LutFunction):
        s = lut.spec.s
    if s is not None and isinstance(lut, LutFunction) and s < lut.n:
        spec.case_partition = _case_maxima(out, gf2n.subfield_mask(lut.spec, s))
    return spec


def _case_maxima(tab: np.ndarray, inside: np.ndarray) -> dict[str, int]:
    nz = np.ones(tab.shape[0], dtype=bool)
    nz[0] = False
    a_in, a_out = inside & nz, ~inside
    parts = {
        "a_in_b_in": (a_in, a_in),
        "a_in_b_out": (a_in, a_out),
        "a_out_b_in": (a_out, a_in),
        "a_out_b_out": (a_out, a_out),
    }
    return {k: int(tab[np.ix_(ra, cb)].max()) if ra.any() and cb.any() else 0
            for k, (ra, cb) in parts.items()}


def literal_bct(lut, max_n: int | None = None) -> np.ndarray:
    """``T_F(a, b) = #{x : F^-1(F(x) + a) + F^-1(F(x + b) + a) = b}`` as written."""
    t = _table(lut)
    _oracle_guard(t, max_n)
    _require_permutation(t)
    q = t.shape[0]
    inv = np.empty_like(t)
    inv[t] = np.arange(q)
    xs = np.arange(q)
    bs = np.arange(q)[:, None]
    tab = np.zeros((q, q), dtype=np.int32)
    for a in range(q):
        lhs = inv[t[xs] ^ a][None, :] ^ inv[t[xs[None, :] ^ bs] ^ a]
        tab[a] = (lhs == bs).sum(axis=1)
    return tab


def bct_naive(lut, max_n: int | None = None) -> BoomerangSpectrum:
    """Oracle BCT from the literal inverse-based definition, transposed to our orientation."""
    tab = literal_bct(lut, max_n).T.copy()
    body = tab[1:, 1:]
    return BoomerangSpectrum(int(body.max()), _hist(body), tab)


def _oracle_guard(t: np.ndarray, max_n: int | None) -> None:
    limit = ORACLE_MAX_N if max_n is None else max_n
    if _n_of(t) > limit:
        raise ParameterError(f"oracle refused: n={_n_of(t)} exceeds oracle limit {limit}")


# --- bounds ------------------------------------------------------------------

def nl_lower_bound(n: int, s: int) -> int:
    """``2^(n-1) - 2^(n/2) - 2^(s/2+1)`` for the subfield-modified Gold/Bracken-Leander maps."""
    if n % 2 or s % 2 or s < 2 or n % s:
        raise ParameterError(f"nl_lower_bound needs even n, even s and s | n (got n={n}, s={s})")
    return (1 << (n - 1)) - (1 << (n // 2)) - (1 << (s // 2 + 1))


@dataclass
class CaseBoundReport:
    """Entrywise comparison of a piecewise BCT against the case bounds.

    ``cases`` maps a case label to ``(max beta_F, max bound, worst slack)``
    where slack is ``bound - beta_F`` (negative means violated).
    """

    cases: dict[str, tuple[int, int, int]]
    violations: list[tuple[int, int, int, int, str]]
    n_values: dict[int, int]

    @property
    def ok(self) -> bool:
        return not self.violations


def mixed_alpha_counts(piece: "PiecewiseSpec") -> np.ndarray:
    """``N(b) = #{alpha not in the subfield : f(x) + g(x + alpha) = b for some x in it}``."""
    spec = piece.spec
    inside = gf2n.subfield_mask(spec, piece.s)
    sub = np.asarray(gf2n.subfield_elements(spec, piece.s), dtype=np.int64)
    outside = np.nonzero(~inside)[0]
    g = piece.g.table
    q = spec.order
    # x in subfield, y = x + alpha outside; alpha ranges outside too
    b = (piece.f_values[:, None] ^ g[outside][None, :]).ravel()
    alpha = (sub[:, None] ^ outside[None, :]).ravel()
    pairs = np.unique(b * q + alpha)
    return np.bincount(pairs // q, minlength=q)


def boomerang_case_bounds(piece: "PiecewiseSpec", materialized: LutFunction | None = None,
                          strict: bool = True, threads: int = 1) -> CaseBoundReport:
    """Check every nonzero ``beta_F(a, b)`` against its case bound.

    Cases: both in the subfield, ``beta_f + beta_g`` (``beta_f`` over the
    subfield); ``a`` inside and ``b`` outside, ``beta_g``; ``a`` outside and
    ``b`` inside, ``beta_g`` (reported separately as ``a_out_b_in``); both
    outside, ``beta_g + 4 N(b) + 2``.
    """
    from .constructions import materialize

    spec = piece.spec
    F = materialized if materialized is not None else materialize(piece)
    q = spec.order
    beta_F = bct(F, full=True, threads=threads).table
    beta_g = bct(piece.g, full=True, threads=threads).table
    sub = np.asarray(gf2n.subfield_elements(spec, piece.s), dtype=np.int64)
    index = np.full(q, -1, dtype=np.int64)
    index[sub] = np.arange(sub.size)
    local_f = index[piece.f_values]
    beta_f_local = bct(local_f, full=True).table
    N = mixed_alpha_counts(piece)
    inside = gf2n.subfield_mask(spec, piece.s)

    bound = beta_g.astype(np.int64).copy()
    a_in = inside.copy()
    a_in[0] = False
    both = np.ix_(a_in, a_in)
    bound[both] += beta_f_local[np.ix_(index[a_in], index[a_in])]
    out = ~inside
    bound[np.ix_(out, out)] += 4 * N[out][None, :] + 2

    labels = {
        "a_in_b_in": (a_in, a_in),
        "a_in_b_out": (a_in, out),
        "a_out_b_in": (out, a_in),
        "a_out_b_out": (out, out),
    }
    cases, violations = {}, []
    for label, (ra, cb) in labels.items():
        if not ra.any() or not cb.any():
            continue
        sel = np.ix_(ra, cb)
        fb, bb = beta_F[sel], bound[sel]
        cases[label] = (int(fb.max()), int(bb.max()), int((bb - fb).min()))
        rows, cols = np.nonzero(fb > bb)
        ra_idx, cb_idx = np.nonzero(ra)[0], np.nonzero(cb)[0]
        for r, c in zip(rows, cols):
            a, b = int(ra_idx[r]), int(cb_idx[c])
            violations.append((a, b, int(beta_F[a, b]), int(bound[a, b]), label))
    report = CaseBoundReport(cases, violations, {int(b): int(N[b]) for b in np.nonzero(out)[0]})
    if strict and violations:
        a, b, got, lim, label = violations[0]
        raise InvariantViolation(
            f"boomerang bound violated at a={a:#x}, b={b:#x} ({label}): beta_F={got} > {lim}")
    return report


__all__ = [
    "ORACLE_MAX_N", "DifferentialSpectrum", "WalshSpectrum", "BoomerangSpectrum",
    "ddt", "ddt_naive", "walsh", "walsh_naive", "bct", "bct_naive", "literal_bct",
    "nl_lower_bound", "boomerang_case_bounds", "CaseBoundReport", "mixed_alpha_counts",
    "is_permutation",
]
