"""Representations of functions GF(2^n) -> GF(2^n) and conversions among them."""
from __future__ import annotations

import hashlib
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import gf2n
from .errors import InvariantViolation, ParameterError
from .gf2n import FieldSpec

UnivariatePoly = dict  # exponent -> nonzero coefficient


class LutFunction:
    """A function given by its full lookup table; immutable once built."""

    __slots__ = ("spec", "table", "name")

    def __init__(self, spec: FieldSpec, table, name: str | None = None):
        arr = np.array(table, dtype=np.int64)
        if arr.shape != (spec.order,):
            raise ParameterError(f"LUT must have {spec.order} entries, got shape {arr.shape}")
        if arr.size and (arr.min() < 0 or arr.max() >= spec.order):
            raise ParameterError(f"LUT entries must lie in [0, 2^{spec.n})")
        arr.flags.writeable = False
        self.spec = spec
        self.table = arr
        self.name = name

    @property
    def n(self) -> int:
        return self.spec.n

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def __len__(self) -> int:
        return self.spec.order

    def __eq__(self, other: object) -> bool:
        # the designated subfield is analysis context, not part of the function
        return (isinstance(other, LutFunction) and self.spec.key()[:2] == other.spec.key()[:2]
                and np.array_equal(self.table, other.table))

    def __hash__(self) -> int:
        return hash(self.digest())

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<LutFunction{label} n={self.n} sha={self.digest()[:10]}>"

    def renamed(self, name: str | None) -> "LutFunction":
        out = LutFunction.__new__(LutFunction)
        out.spec, out.table, out.name = self.spec, self.table, name
        return out

    def to_text(self) -> str:
        width = (self.n + 3) // 4
        body = "\n".join(
            " ".join(f"{int(v):0{width}x}" for v in self.table[i:i + 16])
            for i in range(0, self.spec.order, 16))
        return f"n={self.n} mod=0x{self.spec.modulus:x}\n{body}\n"

    def digest(self) -> str:
        """Content hash of the LUT file form; the spectrum-cache key."""
        return hashlib.sha256(self.to_text().encode()).hexdigest()


def lut_from_text(text: str, s: int | None = None) -> LutFunction:
    header, _, body = text.strip().partition("\n")
    fields = dict(tok.partition("=")[::2] for tok in header.split())
    try:
        n = int(fields["n"])
        modulus = int(fields["mod"], 16)
    except (KeyError, ValueError):
        raise ParameterError(f"bad LUT header {header!r}; expected 'n=<int> mod=0x<hex>'") from None
    spec = gf2n.make_field(n, modulus, s)
    try:
        values = [int(tok, 16) for tok in body.split()]
    except ValueError as exc:
        raise ParameterError(f"bad LUT entry: {exc}") from None
    return LutFunction(spec, values)


def read_lut(path: str | Path, s: int | None = None) -> LutFunction:
    return lut_from_text(Path(path).read_text(), s)


def write_lut(lut: LutFunction, path: str | Path) -> None:
    Path(path).write_text(lut.to_text())


def identity(spec: FieldSpec) -> LutFunction:
    return LutFunction(spec, spec.elements, name="x")


def monomial(spec: FieldSpec, e: int, coeff: int = 1) -> LutFunction:
    values = gf2n.vpow(spec, spec.elements, e)
    if coeff != 1:
        values = gf2n.vmul(spec, values, coeff)
    return LutFunction(spec, values, name=f"x^{e}" if coeff == 1 else f"{coeff:#x}*x^{e}")


def monomial_exponent(lut: LutFunction) -> tuple[int, int] | None:
    """Return ``(c, d)`` if the LUT equals ``c * x^d`` with ``1 <= d < 2^n - 1``."""
    spec = lut.spec
    t = lut.table
    c = int(t[1])
    if t[0] != 0 or c == 0:
        return None
    ratio = gf2n.mul(spec, int(t[spec.zeta]), gf2n.inverse(spec, c))
    if ratio == 0:
        return None
    # discrete log of the ratio w.r.t. zeta
    if spec.has_tables:
        d = int(spec.log_table[ratio])
    else:
        d, y = 0, 1
        while y != ratio:
            y = gf2n.mul(spec, y, spec.zeta)
            d += 1
    d = d or spec.order - 1
    expected = gf2n.vmul(spec, gf2n.vpow(spec, spec.elements, d), c)
    return (c, d) if np.array_equal(expected, t) else None


# --- univariate form --------------------------------------------------------

def evaluate_poly(spec: FieldSpec, poly: UnivariatePoly) -> LutFunction:
    xs = spec.elements
    acc = np.zeros(spec.order, dtype=np.int64)
    for e, c in poly.items():
        if not 0 <= e < spec.order:
            raise ParameterError(f"exponent {e} out of range for n={spec.n}")
        if c:
            acc ^= gf2n.vmul(spec, gf2n.vpow(spec, xs, e), c)
    return LutFunction(spec, acc)


def interpolate(lut: LutFunction, chunk: int = 256) -> UnivariatePoly:
    """Univariate form via ``a_i = sum_{x != 0} F(x) x^{-i}``, ``a_0 = F(0)``.

    ``a_{2^n-1}`` is the plain sum of all outputs.
    """
    spec = lut.spec
    q1 = spec.order - 1
    t = lut.table
    poly: UnivariatePoly = {}
    if t[0]:
        poly[0] = int(t[0])
    top = int(np.bitwise_xor.reduce(t))
    if top:
        poly[q1] = top
    if q1 == 1:
        return poly
    if not spec.has_tables:
        raise ParameterError(f"interpolation needs log tables (n <= {gf2n.TABLE_MAX_N})")
    # x = zeta^j for j in [0, q1); F(x) x^{-i} = zeta^(log F(x) - i j)
    fvals = t[spec.exp_table[:q1]]
    nz = fvals != 0
    logf = spec.log_table[fvals[nz]]
    js = np.arange(q1, dtype=np.int64)[nz]
    exp = spec.exp_table
    for i0 in range(1, q1, chunk):
        i = np.arange(i0, min(i0 + chunk, q1), dtype=np.int64)[:, None]
        terms = exp[(logf[None, :] - i * js[None, :]) % q1]
        coeffs = np.bitwise_xor.reduce(terms, axis=1)
        for k in np.nonzero(coeffs)[0]:
            poly[int(i0 + k)] = int(coeffs[k])
    return poly


def weight(e: int) -> int:
    return bin(e).count("1")


def degree_from_poly(poly: UnivariatePoly) -> int:
    return max((weight(e) for e, c in poly.items() if c), default=0)


# --- algebraic normal form --------------------------------------------------

@dataclass(frozen=True)
class AnfSystem:
    """ANF of each output coordinate as a frozenset of monomial masks."""

    n: int
    coordinates: tuple

    def degree(self) -> int:
        return max((weight(m) for coord in self.coordinates for m in coord), default=0)

    def evaluate(self) -> np.ndarray:
        xs = np.arange(1 << self.n, dtype=np.int64)
        out = np.zeros(1 << self.n, dtype=np.int64)
        for bit, coord in enumerate(self.coordinates):
            acc = np.zeros(1 << self.n, dtype=np.int64)
            for m in coord:
                acc ^= ((xs & m) == m).astype(np.int64)
            out |= acc << bit
        return out


def _moebius(table: np.ndarray, n: int) -> np.ndarray:
    """Binary Moebius transform applied to all coordinates at once (bit-parallel)."""
    t = table.copy()
    h = 1
    while h < (1 << n):
        v = t.reshape(-1, 2, h)
        v[:, 1, :] ^= v[:, 0, :]
        h <<= 1
    return t


def to_anf(lut: LutFunction) -> AnfSystem:
    coeffs = _moebius(lut.table, lut.n)
    coords = tuple(frozenset(int(m) for m in np.nonzero((coeffs >> bit) & 1)[0])
                   for bit in range(lut.n))
    return AnfSystem(lut.n, coords)


def anf_degree(lut: LutFunction) -> int:
    coeffs = _moebius(lut.table, lut.n)
    support = np.nonzero(coeffs)[0]
    if support.size == 0:
        return 0
    return int(max(weight(int(m)) for m in support))


def algebraic_degree(lut: LutFunction, cross_check: bool = True) -> int:
    """Algebraic degree from the ANF, optionally re-derived from the univariate form."""
    deg = anf_degree(lut)
    if cross_check and lut.spec.has_tables:
        alt = degree_from_poly(interpolate(lut))
        if alt != deg:
            raise InvariantViolation(f"degree mismatch: ANF gives {deg}, univariate form gives {alt}")
    return deg


def degree_witness(lut: LutFunction, j: int) -> int:
    """``sum_x F(x) x^(2^j)``; nonzero for some j iff there is a term of 2-weight n-1."""
    if not 0 <= j < lut.n:
        raise ParameterError(f"j must lie in [0, {lut.n})")
    spec = lut.spec
    lin = gf2n.vfrobenius(spec, spec.elements, j)
    return int(np.bitwise_xor.reduce(gf2n.vmul(spec, lut.table, lin)))


def has_degree_n_minus_1_term(lut: LutFunction) -> bool:
    return any(degree_witness(lut, j) for j in range(lut.n))


# --- composition helpers ----------------------------------------------------

def is_permutation(lut: LutFunction) -> bool:
    return np.unique(lut.table).size == lut.spec.order


def invert(lut: LutFunction) -> LutFunction:
    if not is_permutation(lut):
        raise ParameterError("cannot invert a non-permutation")
    inv = np.empty_like(lut.table)
    inv[lut.table] = lut.spec.elements
    name = f"({lut.name})^-1" if lut.name else None
    return LutFunction(lut.spec, inv, name=name)


def compose(outer: LutFunction, inner: LutFunction) -> LutFunction:
    """``x -> outer(inner(x))``."""
    if outer.spec != inner.spec:
        raise ParameterError("compose: functions live on different fields")
    return LutFunction(outer.spec, outer.table[inner.table])


def pointwise_add(a: LutFunction, b: LutFunction) -> LutFunction:
    if a.spec != b.spec:
        raise ParameterError("pointwise_add: functions live on different fields")
    return LutFunction(a.spec, a.table ^ b.table)


# --- affine maps over a subfield --------------------------------------------

@dataclass(frozen=True, eq=False)
class AffineMap:
    """``A(x) = sum_j c_j x^(2^j) + c`` with all coefficients in GF(2^s)."""

    spec: FieldSpec
    s: int
    linear_coeffs: tuple
    constant: int = 0

    def __post_init__(self):
        if len(self.linear_coeffs) != self.s:
            raise ParameterError(f"need {self.s} linear coefficients, got {len(self.linear_coeffs)}")
        for c in (*self.linear_coeffs, self.constant):
            if not gf2n.subfield_membership(self.spec, self.s, c):
                raise ParameterError(f"coefficient {c:#x} is not in GF(2^{self.s})")
        if len(set(self.on_subfield())) != 1 << self.s:
            raise ParameterError(f"{self.describe()} is not a permutation of GF(2^{self.s})")

    @classmethod
    def _unchecked(cls, spec: FieldSpec, s: int, linear_coeffs: tuple, constant: int) -> "AffineMap":
        obj = object.__new__(cls)
        object.__setattr__(obj, "spec", spec)
        object.__setattr__(obj, "s", s)
        object.__setattr__(obj, "linear_coeffs", tuple(linear_coeffs))
        object.__setattr__(obj, "constant", constant)
        return obj

    @classmethod
    def identity(cls, spec: FieldSpec, s: int) -> "AffineMap":
        return cls(spec, s, (1,) + (0,) * (s - 1), 0)

    def __call__(self, x: int) -> int:
        acc, y = self.constant, x
        for c in self.linear_coeffs:
            if c:
                acc ^= gf2n.mul(self.spec, c, y)
            y = gf2n.mul(self.spec, y, y)
        return acc

    def apply(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=np.int64)
        acc = np.full(xs.shape, self.constant, dtype=np.int64)
        y = xs.copy()
        for c in self.linear_coeffs:
            if c:
                acc ^= gf2n.vmul(self.spec, y, c)
            y = gf2n.vmul(self.spec, y, y)
        return acc

    def on_subfield(self) -> list[int]:
        return [int(v) for v in self.apply(gf2n.subfield_elements(self.spec, self.s))]

    def kernel_trivial(self) -> bool:
        lin = AffineMap._unchecked(self.spec, self.s, self.linear_coeffs, 0)
        return sum(1 for v in lin.on_subfield() if v == 0) == 1

    def key(self) -> tuple:
        return (self.spec.key(), self.s, self.linear_coeffs, self.constant)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, AffineMap) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def describe(self) -> str:
        """Recipe-syntax text, e.g. ``0x3*x^2+0x2``."""
        terms = []
        for j, c in enumerate(self.linear_coeffs):
            if not c:
                continue
            mono = "x" if j == 0 else f"x^{1 << j}"
            terms.append(mono if c == 1 else f"{c:#x}*{mono}")
        if self.constant or not terms:
            terms.append(f"{self.constant:#x}" if self.constant > 1 else str(self.constant))
        return "+".join(terms)

    def __repr__(self) -> str:
        return f"AffineMap(s={self.s}, {self.describe()})"


def interpolate_on_subfield(spec: FieldSpec, s: int, values) -> UnivariatePoly:
    """Polynomial of degree < 2^s, coefficients in GF(2^s), matching ``values`` on the subfield.

    ``values`` is aligned with :func:`gf2n.subfield_elements`.
    """
    sub = np.asarray(gf2n.subfield_elements(spec, s), dtype=np.int64)
    vals = np.asarray(values, dtype=np.int64)
    r = (1 << s) - 1
    poly: UnivariatePoly = {}
    lookup = dict(zip(sub.tolist(), vals.tolist()))
    if lookup[0]:
        poly[0] = lookup[0]
    nz = sub != 0
    for i in range(1, r):
        c = int(np.bitwise_xor.reduce(gf2n.vmul(spec, vals[nz], gf2n.vpow(spec, sub[nz], r - i))))
        if c:
            poly[i] = c
    top = int(np.bitwise_xor.reduce(vals))
    if top:
        poly[r] = top
    return poly


def parse_recipe(spec: FieldSpec, text: str) -> LutFunction:
    """Build a function from recipe text; see :mod:`pieceperm.recipe` for the grammar."""
    from .recipe import parse_recipe as _parse
    return _parse(spec, text)
