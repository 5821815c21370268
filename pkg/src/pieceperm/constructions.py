"""Function families and the subfield piecewise construction.

A piecewise permutation agrees with ``f`` on GF(2^s) and with ``g`` elsewhere,
``F = f + (f + g)(x^(2^s) + x)^(2^n - 1)``.  Every family validates its
parameter conditions literally and raises :class:`ParameterError` naming the
failed clause.  The ``verify_*`` helpers run exhaustive checks and return a
:class:`Verdict` carrying a witness on failure.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Iterator

import numpy as np

from . import gf2n, spectra
from .errors import InvariantViolation, ParameterError
from .funcrep import (AffineMap, LutFunction, evaluate_poly, interpolate,
                      interpolate_on_subfield, is_permutation, monomial,
                      monomial_exponent)
from .gf2n import FieldSpec

AFFINE_ENUM_MAX_S = 4


@dataclass
class Verdict:
    ok: bool
    message: str = ""
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.ok


def _require(cond: bool, clause: str) -> None:
    if not cond:
        raise ParameterError(f"condition violated: {clause}")


# --- primary families -----------------------------------------------------

def _gold_like_conditions(spec: FieldSpec, k: int, name: str) -> None:
    n = spec.n
    _require(n % 2 == 0, f"{name}: n={n} must be even (n = 2k')")
    _require((n // 2) % 2 == 1, f"{name}: n = 2k' needs k' odd, got k'={n // 2}")
    _require(0 < k < n, f"{name}: exponent parameter must satisfy 0 < k < n, got {k}")
    _require(gcd(k, n) == 2, f"{name}: gcd(k, n) = gcd({k}, {n}) = {gcd(k, n)}, need 2")


def gold(spec: FieldSpec, k: int) -> LutFunction:
    _gold_like_conditions(spec, k, "gold")
    return monomial(spec, (1 << k) + 1).renamed(f"gold(k={k})")


def kasami(spec: FieldSpec, k: int) -> LutFunction:
    _gold_like_conditions(spec, k, "kasami")
    e = ((1 << (2 * k)) - (1 << k) + 1) % (spec.order - 1)
    return monomial(spec, e).renamed(f"kasami(k={k})")


def inverse(spec: FieldSpec) -> LutFunction:
    _require(spec.n % 2 == 0, f"inverse: n={spec.n} must be even (n = 2k)")
    return monomial(spec, spec.order - 2).renamed("inverse()")


def bracken_leander(spec: FieldSpec, k: int) -> LutFunction:
    _require(spec.n == 4 * k, f"bracken_leander: n={spec.n} must equal 4k={4 * k}")
    _require(k % 2 == 1, f"bracken_leander: k={k} must be odd")
    return monomial(spec, (1 << (2 * k)) + (1 << k) + 1).renamed(f"bracken_leander(k={k})")


def bracken_tan_tan(spec: FieldSpec, m: int, i: int) -> LutFunction:
    """``zeta x^(2^i+1) + zeta^(2^m) x^(2^(-m) + 2^(m+i))`` with exponents of 2 taken mod n."""
    n = spec.n
    _require(n == 3 * m, f"btt: n={n} must equal 3m={3 * m}")
    _require(m % 2 == 0, f"btt: m={m} must be even")
    _require((m // 2) % 2 == 1, f"btt: m/2={m // 2} must be odd")
    _require(gcd(n, i) == 2, f"btt: gcd(n, i) = gcd({n}, {i}) = {gcd(n, i)}, need 2")
    _require((m + i) % 3 == 0, f"btt: 3 must divide m + i = {m + i}")
    e1 = (1 << (i % n)) + 1
    e2 = (1 << ((n - m) % n)) + (1 << ((m + i) % n))
    zeta = spec.zeta
    c2 = gf2n.frobenius(spec, zeta, m)
    xs = spec.elements
    values = gf2n.vmul(spec, gf2n.vpow(spec, xs, e1), zeta) ^ gf2n.vmul(spec, gf2n.vpow(spec, xs, e2), c2)
    out = LutFunction(spec, values, name=f"btt(m={m},i={i})")
    if not is_permutation(out):
        raise InvariantViolation("Bracken-Tan-Tan map is not a permutation under valid conditions")
    return out


# --- piecewise construction -------------------------------------------------

@dataclass(frozen=True, eq=False)
class PiecewiseSpec:
    """Recipe ``(f, g, s)``; ``f_values`` is aligned with ``gf2n.subfield_elements(spec, s)``."""

    spec: FieldSpec
    s: int
    f_values: np.ndarray
    g: LutFunction
    provenance: str = ""
    f_permutes_subfield: bool = field(init=False)

    def __post_init__(self):
        spec, s = self.spec, self.s
        _require(s >= 1 and spec.n % s == 0, f"piecewise: s={s} must divide n={spec.n}")
        object.__setattr__(self, "spec", spec.with_subfield(s))
        vals = np.array(self.f_values, dtype=np.int64)
        vals.flags.writeable = False
        object.__setattr__(self, "f_values", vals)
        if vals.shape != (1 << s,):
            raise ParameterError(f"f must give {1 << s} subfield values, got {vals.shape}")
        inside = gf2n.subfield_mask(spec, s)
        if not inside[vals].all():
            raise ParameterError(f"f does not map GF(2^{s}) into itself")
        object.__setattr__(self, "f_permutes_subfield", np.unique(vals).size == vals.size)
        if self.g.spec.key()[:2] != spec.key()[:2]:
            raise ParameterError("g lives on a different field")
        if not is_permutation(self.g):
            raise ParameterError("g must permute GF(2^n)")
        bad = coefficients_outside_subfield(self.g, s)
        if bad:
            raise ParameterError(f"g has coefficients outside GF(2^{s}) at exponents {bad[:5]}")

    @property
    def subfield(self) -> np.ndarray:
        return np.asarray(gf2n.subfield_elements(self.spec, self.s), dtype=np.int64)

    def local_f(self) -> np.ndarray:
        """``f`` relabelled as a table on ``range(2^s)`` (XOR-compatible indices)."""
        index = np.full(self.spec.order, -1, dtype=np.int64)
        index[self.subfield] = np.arange(1 << self.s)
        return index[self.f_values]


def coefficients_outside_subfield(g: LutFunction, s: int) -> list[int]:
    """Exponents whose univariate coefficient is not in GF(2^s) (power maps skip interpolation)."""
    mono = monomial_exponent(g)
    coeffs = {mono[1]: mono[0]} if mono else interpolate(g)
    return sorted(e for e, c in coeffs.items() if not gf2n.subfield_membership(g.spec, s, c))


def make_piecewise(spec: FieldSpec, s: int, f, g: LutFunction, provenance: str = "") -> PiecewiseSpec:
    """``f`` may be a full-field LUT (restricted here), a callable, or subfield values."""
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    if isinstance(f, LutFunction):
        vals = f.table[sub]
    elif callable(f):
        vals = np.array([f(int(x)) for x in sub], dtype=np.int64)
    else:
        vals = np.asarray(f, dtype=np.int64)
    return PiecewiseSpec(spec.with_subfield(s), s, vals, g, provenance)


def materialize(piece: PiecewiseSpec, check_closed_form: bool = True) -> LutFunction:
    """Branch definition, cross-checked against the closed polynomial form."""
    spec = piece.spec
    table = piece.g.table.copy()
    table[piece.subfield] = piece.f_values
    if check_closed_form:
        f_ext = evaluate_poly(spec, interpolate_on_subfield(spec, piece.s, piece.f_values)).table
        xs = spec.elements
        indicator = gf2n.vpow(spec, gf2n.vfrobenius(spec, xs, piece.s) ^ xs, spec.order - 1)
        closed = f_ext ^ gf2n.vmul(spec, f_ext ^ piece.g.table, indicator)
        if not np.array_equal(closed, table):
            raise InvariantViolation("closed-form and branch definitions disagree")
    return LutFunction(spec, table, name=piece.provenance or None)


def _inv_on_subfield(spec: FieldSpec, xs: np.ndarray) -> np.ndarray:
    return gf2n.vpow(spec, xs, spec.order - 2)


def affine_inverse_values(spec: FieldSpec, s: int, A1: AffineMap, A2: AffineMap | None = None) -> np.ndarray:
    """Values of ``A1 o Inv o A2`` on the subfield, aligned with its element order."""
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    for A, label in ((A1, "A1"), (A2, "A2")):
        if A is not None and (A.s != s or A.spec.key()[:2] != spec.key()[:2]):
            raise ParameterError(f"{label} must be an affine map of GF(2^{s}) in this field")
    inner = A2.apply(sub) if A2 is not None else sub
    return A1.apply(_inv_on_subfield(spec, inner))


# --- hypothesis / lemma verifiers -----------------------------------------

def verify_h3(g: LutFunction, s: int, use_power_shortcut: bool = True) -> Verdict:
    """For nonzero a and any b in GF(2^s), ``g(x) + g(x + a) = b`` has no root outside GF(2^s).

    For power maps only ``a = 1`` is examined, since ``x -> x/a`` rescales the equation.
    """
    spec = g.spec
    _require(s >= 1 and spec.n % s == 0, f"verify_h3: s={s} must divide n={spec.n}")
    inside = gf2n.subfield_mask(spec, s)
    outside = np.nonzero(~inside)[0]
    if outside.size == 0:
        return Verdict(True, "subfield is the whole field; nothing to check")
    shifts = gf2n.subfield_elements(spec, s)[1:]
    if use_power_shortcut and monomial_exponent(g) is not None:
        shifts = [1]
    t = g.table
    for a in shifts:
        d = t[outside] ^ t[outside ^ a]
        hit = np.nonzero(inside[d])[0]
        if hit.size:
            x = int(outside[hit[0]])
            return Verdict(False, f"g(x)+g(x+a) lands in GF(2^{s})", (a, int(d[hit[0]]), x))
    return Verdict(True, f"checked a in {len(shifts)} subfield shift(s)")


def _no_outside_root(spec: FieldSpec, s: int, lhs: np.ndarray, label: str) -> Verdict:
    inside = gf2n.subfield_mask(spec, s)
    bad = np.nonzero(~inside & inside[lhs])[0]
    if bad.size:
        x = int(bad[0])
        return Verdict(False, f"{label}: root outside GF(2^{s})", (int(lhs[x]), x))
    return Verdict(True, f"{label}: no root outside GF(2^{s}) for any b in GF(2^{s})")


def verify_lemma1(spec: FieldSpec, s: int, k: int) -> Verdict:
    """``x^(2^k) + x = b`` has no root outside GF(2^s) for b in GF(2^s)."""
    n = spec.n
    _require(s % 2 == 0 and s >= 2, f"lemma1: s={s} must be even")
    _require(n % s == 0 and (n // s) % 2 == 1, f"lemma1: n/s must be an odd integer (n={n}, s={s})")
    _require(gcd(k, n) == 2, f"lemma1: gcd(k, n) = {gcd(k, n)}, need 2")
    xs = spec.elements
    return _no_outside_root(spec, s, gf2n.vfrobenius(spec, xs, k) ^ xs, "x^(2^k)+x")


def verify_lemma4k(spec: FieldSpec, s: int, k: int) -> Verdict:
    """Bracken-Leander derivative at 1 (minus constants) has no root outside GF(2^s)."""
    n = spec.n
    _require(n == 4 * k, f"lemma4k: n={n} must equal 4k={4 * k}")
    _require(n % s == 0, f"lemma4k: s={s} must divide n={n}")
    _require(k % 2 == 1, f"lemma4k: k={k} must be odd")
    _require((n // s) % 2 == 1, f"lemma4k: m = n/s = {n // s} must be odd")
    xs = spec.elements
    p2k, p1k = 1 << (2 * k), 1 << k
    lhs = (gf2n.vpow(spec, xs, p2k + p1k) ^ gf2n.vpow(spec, xs, p2k + 1) ^ gf2n.vpow(spec, xs, p1k + 1)
           ^ gf2n.vpow(spec, xs, p2k) ^ gf2n.vpow(spec, xs, p1k) ^ xs)
    return _no_outside_root(spec, s, lhs, "bracken-leander derivative")


# --- corollary families -------------------------------------------------------

def _cor1_conditions(spec: FieldSpec, s: int, k: int) -> None:
    n = spec.n
    _require(s >= 2 and s % 2 == 0, f"corollary1: s={s} must be even")
    _require((s // 2) % 2 == 1, f"corollary1: s/2={s // 2} must be odd")
    _require(n % s == 0 and (n // s) % 2 == 1, f"corollary1: m = n/s must be an odd integer (n={n}, s={s})")
    _require(gcd(k, n) == 2, f"corollary1: gcd(k, n) = gcd({k}, {n}) = {gcd(k, n)}, need 2")


def _cor2_conditions(spec: FieldSpec, s: int, k: int) -> None:
    n = spec.n
    _require(n == 4 * k, f"corollary2: n={n} must equal 4k={4 * k}")
    _require(k % 2 == 1, f"corollary2: k={k} must be odd")
    _require(s >= 2 and s % 2 == 0, f"corollary2: s={s} must be even")
    _require(n % s == 0 and (n // s) % 2 == 1, f"corollary2: m = n/s must be an odd integer (n={n}, s={s})")


def corollary1_spec(spec: FieldSpec, s: int, k: int, A1: AffineMap | None = None,
                    A2: AffineMap | None = None) -> PiecewiseSpec:
    _cor1_conditions(spec, s, k)
    A1 = A1 or AffineMap.identity(spec, s)
    vals = affine_inverse_values(spec, s, A1, A2)
    label = f"cor1(k={k};A1={A1.describe()}" + (f";A2={A2.describe()})" if A2 else ")")
    return PiecewiseSpec(spec, s, vals, gold(spec.with_subfield(s), k), label)


def corollary1(spec: FieldSpec, s: int, k: int, A1: AffineMap | None = None,
               A2: AffineMap | None = None) -> LutFunction:
    """Gold ``x^(2^k+1)`` outside GF(2^s), ``A1 o Inv o A2`` inside."""
    return materialize(corollary1_spec(spec, s, k, A1, A2))


def corollary2_spec(spec: FieldSpec, s: int, k: int, A1: AffineMap | None = None,
                    A2: AffineMap | None = None) -> PiecewiseSpec:
    _cor2_conditions(spec, s, k)
    A1 = A1 or AffineMap.identity(spec, s)
    vals = affine_inverse_values(spec, s, A1, A2)
    label = f"cor2(k={k};A1={A1.describe()}" + (f";A2={A2.describe()})" if A2 else ")")
    return PiecewiseSpec(spec, s, vals, bracken_leander(spec.with_subfield(s), k), label)


def corollary2(spec: FieldSpec, s: int, k: int, A1: AffineMap | None = None,
               A2: AffineMap | None = None) -> LutFunction:
    """Bracken-Leander outside GF(2^s), ``A1 o Inv o A2`` inside."""
    return materialize(corollary2_spec(spec, s, k, A1, A2))


def gold_plus_one_spec(spec: FieldSpec, s: int, k: int) -> PiecewiseSpec:
    _cor1_conditions(spec, s, k)
    g = gold(spec.with_subfield(s), k)
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    return PiecewiseSpec(spec, s, g.table[sub] ^ 1, g, f"gold_plus_one(k={k})")


def gold_plus_one(spec: FieldSpec, s: int, k: int) -> LutFunction:
    """``x^(2^k+1) + 1 + (x^(2^s) + x)^(2^n-1)``, checked against its closed form."""
    piece = gold_plus_one_spec(spec, s, k)
    F = materialize(piece)
    xs = spec.elements
    ind = gf2n.vpow(spec, gf2n.vfrobenius(spec, xs, s) ^ xs, spec.order - 1)
    closed = piece.g.table ^ 1 ^ ind
    if not np.array_equal(closed, F.table):
        raise InvariantViolation("gold_plus_one closed form mismatch")
    return F


def apn_piecewise(spec: FieldSpec, s: int, f, g: LutFunction) -> LutFunction:
    """Piecewise map of two APN permutations (subfield and full field); differentially 4-uniform."""
    n = spec.n
    _require(n % s == 0 and (n // s) % 2 == 1, f"apn_piecewise: m = n/s must be an odd integer (n={n}, s={s})")
    piece = make_piecewise(spec, s, f, g, "apn_piecewise")
    _require(piece.f_permutes_subfield, "apn_piecewise: f must permute GF(2^s)")
    if s > 1:
        d_f = spectra.ddt(piece.local_f()).uniformity
        _require(d_f == 2, f"apn_piecewise: f must be APN on GF(2^s), computed delta_f={d_f}")
    d_g = spectra.ddt(g).uniformity
    _require(d_g == 2, f"apn_piecewise: g must be APN on GF(2^n), computed delta_g={d_g}")
    F = materialize(piece)
    d_F = spectra.ddt(F).uniformity
    if d_F > 4:
        raise InvariantViolation(f"apn_piecewise produced delta={d_F} > 4")
    return F


def _inverse_family_conditions(spec: FieldSpec, s: int, name: str) -> None:
    n = spec.n
    _require(s >= 2 and s % 2 == 0, f"{name}: s={s} must be even")
    _require(n % s == 0 and (n // s) % 2 == 1, f"{name}: m = n/s must be an odd integer (n={n}, s={s})")


def _in_subfield(spec: FieldSpec, s: int, value: int, label: str) -> None:
    _require(0 <= value < spec.order and gf2n.subfield_membership(spec, s, value),
             f"{label}={value:#x} must lie in GF(2^{s})")


def _inverse_family(spec: FieldSpec, s: int, vals: np.ndarray, label: str) -> LutFunction:
    spec = spec.with_subfield(s)
    F = materialize(PiecewiseSpec(spec, s, vals, inverse(spec), label))
    delta = spectra.ddt(F).uniformity
    if delta != 4:
        raise InvariantViolation(f"{label}: expected a differentially 4-uniform map, computed {delta}")
    return F


def f_t1t2(spec: FieldSpec, s: int, t1: int, t2: int) -> LutFunction:
    """``t1 x^-1 + t2`` on GF(2^s), ``x^-1`` elsewhere."""
    _inverse_family_conditions(spec, s, "f_t1t2")
    _in_subfield(spec, s, t1, "t1")
    _in_subfield(spec, s, t2, "t2")
    _require(t1 != 0, "f_t1t2: t1 must be nonzero")
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    vals = gf2n.vmul(spec, _inv_on_subfield(spec, sub), t1) ^ t2
    return _inverse_family(spec, s, vals, f"f_t1t2(t1={t1:#x},t2={t2:#x})")


def f_alphabeta(spec: FieldSpec, s: int, alpha: int, beta: int) -> LutFunction:
    """``beta (x+1)^-1 + alpha`` on GF(2^s), ``x^-1`` elsewhere."""
    _inverse_family_conditions(spec, s, "f_alphabeta")
    _in_subfield(spec, s, alpha, "alpha")
    _in_subfield(spec, s, beta, "beta")
    _require(beta != 0, "f_alphabeta: beta must be nonzero")
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    vals = gf2n.vmul(spec, _inv_on_subfield(spec, sub ^ 1), beta) ^ alpha
    return _inverse_family(spec, s, vals, f"f_alphabeta(alpha={alpha:#x},beta={beta:#x})")


def f_gamma(spec: FieldSpec, s: int, gamma: int) -> LutFunction:
    """``(gamma x)^-1`` on GF(2^s), ``x^-1`` elsewhere."""
    _inverse_family_conditions(spec, s, "f_gamma")
    _in_subfield(spec, s, gamma, "gamma")
    _require(gamma != 0, "f_gamma: gamma must be nonzero")
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    vals = _inv_on_subfield(spec, gf2n.vmul(spec, sub, gamma))
    return _inverse_family(spec, s, vals, f"f_gamma(gamma={gamma:#x})")


# --- affine enumeration -----------------------------------------------------

def iter_affine_maps(spec: FieldSpec, s: int) -> Iterator[AffineMap]:
    """All affine permutations of GF(2^s); linear part first, constant varies fastest."""
    _require(s >= 1 and spec.n % s == 0, f"affine enumeration: s={s} must divide n={spec.n}")
    if s > AFFINE_ENUM_MAX_S:
        raise ParameterError(f"affine enumeration over GF(2^{s}) exceeds the budget (s <= {AFFINE_ENUM_MAX_S})")
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    # images of the subfield basis under each x^(2^j) decide the linear map
    frob = [gf2n.vfrobenius(spec, sub, j) for j in range(s)]
    for coeffs in itertools.product(sub.tolist(), repeat=s):
        if not any(coeffs):
            continue
        image = np.zeros_like(sub)
        for c, fj in zip(coeffs, frob):
            if c:
                image ^= gf2n.vmul(spec, fj, c)
        if np.unique(image).size != sub.size:
            continue
        for const in sub.tolist():
            yield AffineMap._unchecked(spec, s, coeffs, const)


def enumerate_affine_maps(spec: FieldSpec, s: int) -> list[AffineMap]:
    return list(iter_affine_maps(spec, s))


# --- bound verifiers ----------------------------------------------------------

@dataclass
class DifferentialBoundReport:
    delta_f: int
    delta_g: int
    inside_max: int
    outside_max: int
    violations: list[tuple[int, int, int]]

    @property
    def ok(self) -> bool:
        return not self.violations


def differential_case_bounds(piece: PiecewiseSpec, materialized: LutFunction | None = None,
                             threads: int = 1) -> DifferentialBoundReport:
    """Row maxima of the DDT against ``max(delta_f, delta_g)`` (a in the subfield) or ``delta_g + 2``."""
    F = materialized if materialized is not None else materialize(piece)
    spec = piece.spec
    d_f = spectra.ddt(piece.local_f()).uniformity if piece.s > 1 else 0
    d_g = spectra.ddt(piece.g, threads=threads).uniformity
    row_max = spectra.ddt(F, threads=threads).row_max
    inside = gf2n.subfield_mask(spec, piece.s)[1:]
    bound = np.where(inside, max(d_f, d_g), d_g + 2)
    bad = np.nonzero(row_max > bound)[0]
    violations = [(int(i + 1), int(row_max[i]), int(bound[i])) for i in bad]
    inside_max = int(row_max[inside].max()) if inside.any() else 0
    outside_max = int(row_max[~inside].max()) if (~inside).any() else 0
    return DifferentialBoundReport(d_f, d_g, inside_max, outside_max, violations)


def verify_prop9(spec: FieldSpec, s: int, k: int, threads: int = 1) -> Verdict:
    """Gold+1 boomerang entries: at most 4 when a or b is a nonzero subfield element, else 22."""
    F = gold_plus_one(spec, s, k)
    tab = spectra.bct(F, full=True, threads=threads).table
    inside = gf2n.subfield_mask(spec, s)
    star = inside.copy()
    star[0] = False
    nz = np.ones(spec.order, dtype=bool)
    nz[0] = False
    near = (star[:, None] & nz[None, :]) | (nz[:, None] & star[None, :])
    far = (~inside)[:, None] & (~inside)[None, :]
    for mask, limit, label in ((near, 4, "a or b in subfield*"), (far, 22, "a, b outside subfield")):
        over = np.argwhere(mask & (tab > limit))
        if over.size:
            a, b = (int(v) for v in over[0])
            return Verdict(False, f"{label}: beta_F({a:#x},{b:#x}) = {tab[a, b]} > {limit}", (a, b))
    return Verdict(True, f"near max {int(tab[near].max())} <= 4, far max {int(tab[far].max())} <= 22")


def verify_degree_inverse(lut: LutFunction) -> Verdict:
    """A permutation has degree n-1 iff its inverse does."""
    from .funcrep import algebraic_degree, invert
    n = lut.n
    d, di = algebraic_degree(lut, cross_check=False), algebraic_degree(invert(lut), cross_check=False)
    ok = (d == n - 1) == (di == n - 1)
    return Verdict(ok, f"deg F = {d}, deg F^-1 = {di}", None if ok else (d, di))
