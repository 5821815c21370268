"""Arithmetic in GF(2^n) with polynomial-basis integer encoding.

An element is a Python ``int`` (or a numpy unsigned array for the vectorised
helpers) whose bit ``i`` is the coefficient of ``x^i``.  Addition is XOR.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd

import numpy as np

from .errors import ParameterError

MIN_N = 2
MAX_N = 24
TABLE_MAX_N = 16

# One primitive polynomial per degree, leading term included.  Every entry is
# re-checked by make_field, nothing here is trusted.
DEFAULT_MODULI = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x83,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
    17: 0x20009,
    18: 0x40081,
    19: 0x80027,
    20: 0x100009,
    21: 0x200005,
    22: 0x400003,
    23: 0x800021,
    24: 0x1000087,
}


# --- polynomials over GF(2), encoded as ints -------------------------------

def _pdeg(p: int) -> int:
    return p.bit_length() - 1


def _pmod(a: int, m: int) -> int:
    dm = _pdeg(m)
    while a and _pdeg(a) >= dm:
        a ^= m << (_pdeg(a) - dm)
    return a


def _pmulmod(a: int, b: int, m: int) -> int:
    dm = _pdeg(m)
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> dm) & 1:
            a ^= m
    return r


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def _prime_factors(k: int) -> list[int]:
    out, d = [], 2
    while d * d <= k:
        if k % d == 0:
            out.append(d)
            while k % d == 0:
                k //= d
        d += 1
    if k > 1:
        out.append(k)
    return out


def is_irreducible(p: int) -> bool:
    """Rabin's irreducibility test for a binary polynomial."""
    n = _pdeg(p)
    if n < 1:
        return False
    if n == 1:
        return True

    def x_pow_2k(k: int) -> int:
        r = 0b10
        for _ in range(k):
            r = _pmulmod(r, r, p)
        return r

    if x_pow_2k(n) != _pmod(0b10, p):
        return False
    for r in _prime_factors(n):
        if _pgcd(p, x_pow_2k(n // r) ^ 0b10) != 1:
            return False
    return True


# --- field specification ----------------------------------------------------

@dataclass(frozen=True, eq=False)
class FieldSpec:
    """A concrete GF(2^n): modulus, primitive element and optional subfield degree."""

    n: int
    modulus: int
    zeta: int
    omega: int | None = None
    s: int | None = None
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def order(self) -> int:
        return 1 << self.n

    @property
    def mask(self) -> int:
        return (1 << self.n) - 1

    def key(self) -> tuple[int, int, int | None]:
        return (self.n, self.modulus, self.s)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FieldSpec) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def with_subfield(self, s: int | None) -> "FieldSpec":
        if s == self.s:
            return self
        return make_field(self.n, self.modulus, s)

    def describe(self) -> str:
        return format_field_spec(self)

    @cached_property
    def has_tables(self) -> bool:
        return self.n <= TABLE_MAX_N

    @cached_property
    def exp_table(self) -> np.ndarray:
        """``exp[i] = zeta^i`` for ``0 <= i < 2(2^n - 1)`` (doubled to skip a modulo)."""
        q1 = self.order - 1
        out = np.empty(2 * q1, dtype=np.int64)
        # Powers of zeta via repeated vectorised doubling of the exponent range.
        out[0] = 1
        filled = 1
        step = self.zeta
        while filled < q1:
            take = min(filled, q1 - filled)
            out[filled:filled + take] = vmul(self, out[:take], np.full(take, step, dtype=np.int64), tables=False)
            filled += take
            step = mul(self, step, step)
        out[q1:] = out[:q1]
        return out

    @cached_property
    def log_table(self) -> np.ndarray:
        """``log[zeta^i] = i``; ``log[0]`` is a sentinel and must be masked by callers."""
        q1 = self.order - 1
        out = np.zeros(self.order, dtype=np.int64)
        out[self.exp_table[:q1]] = np.arange(q1, dtype=np.int64)
        return out

    @cached_property
    def elements(self) -> np.ndarray:
        out = np.arange(self.order, dtype=np.int64)
        out.flags.writeable = False
        return out


def make_field(n: int, modulus: int | None = None, s: int | None = None) -> FieldSpec:
    """Build and validate a field; a built-in primitive modulus is used when omitted."""
    if not isinstance(n, int) or not MIN_N <= n <= MAX_N:
        raise ParameterError(f"n must be an integer in [{MIN_N}, {MAX_N}], got {n!r}")
    if modulus is None:
        modulus = DEFAULT_MODULI[n]
    if _pdeg(modulus) != n:
        raise ParameterError(
            f"modulus 0x{modulus:x} has degree {_pdeg(modulus)}, expected {n}")
    if not is_irreducible(modulus):
        raise ParameterError(f"modulus 0x{modulus:x} is reducible over GF(2)")
    if s is not None and (s < 1 or n % s):
        raise ParameterError(f"subfield degree s={s} does not divide n={n}")

    probe = FieldSpec(n=n, modulus=modulus, zeta=0)
    q1 = (1 << n) - 1
    cofactors = [q1 // r for r in _prime_factors(q1)]
    zeta = next(z for z in range(2, 1 << n)
                if all(power(probe, z, c) != 1 for c in cofactors))
    omega = power(probe, zeta, q1 // 3) if q1 % 3 == 0 else None
    spec = FieldSpec(n=n, modulus=modulus, zeta=zeta, omega=omega, s=s)
    if power(spec, zeta, q1) != 1:
        raise ParameterError("internal: zeta order check failed")
    if omega is not None and (mul(spec, omega, omega) != omega ^ 1 or power(spec, omega, 3) != 1):
        raise ParameterError("internal: omega is not a primitive cube root of unity")
    return spec


_FIELD_RE = re.compile(r"^\s*n\s*=\s*(\d+)\s*((?:,\s*\w+\s*=\s*\w+\s*)*)$")


def parse_field_spec(text: str) -> FieldSpec:
    """Parse ``n=<int>[,mod=0x<hex>][,s=<int>]``."""
    m = _FIELD_RE.match(text)
    if not m:
        raise ParameterError(f"bad field spec {text!r}; expected n=<int>[,mod=0x<hex>][,s=<int>]")
    n = int(m.group(1))
    modulus = s = None
    for part in filter(None, (p.strip() for p in m.group(2).split(","))):
        key, _, value = (t.strip() for t in part.partition("="))
        try:
            if key == "mod":
                modulus = int(value, 16) if value.lower().startswith("0x") else int(value)
            elif key == "s":
                s = int(value)
            else:
                raise ParameterError(f"unknown field-spec key {key!r}")
        except ValueError as exc:
            if isinstance(exc, ParameterError):
                raise
            raise ParameterError(f"bad value for {key!r}: {value!r}") from None
    return make_field(n, modulus, s)


def format_field_spec(spec: FieldSpec) -> str:
    text = f"n={spec.n},mod=0x{spec.modulus:x}"
    if spec.s is not None:
        text += f",s={spec.s}"
    return text


# --- scalar arithmetic ------------------------------------------------------

def mul(spec: FieldSpec, a: int, b: int) -> int:
    n, m = spec.n, spec.modulus
    r = 0
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if (a >> n) & 1:
            a ^= m
    return r


def power(spec: FieldSpec, a: int, e: int) -> int:
    """``a**e`` with ``0**0 == 1``; exponents are reduced mod 2^n - 1 for a != 0."""
    if e < 0:
        raise ParameterError("negative exponent")
    if a == 0:
        return 1 if e == 0 else 0
    q1 = spec.order - 1
    if e >= q1:
        e = e % q1 or q1
    r = 1
    while e:
        if e & 1:
            r = mul(spec, r, a)
        a = mul(spec, a, a)
        e >>= 1
    return r


def inverse(spec: FieldSpec, a: int) -> int:
    """Multiplicative inverse with the convention ``0^{-1} = 0``."""
    return power(spec, a, spec.order - 2)


def _check_divides(spec: FieldSpec, m: int) -> None:
    if m < 1 or spec.n % m:
        raise ParameterError(f"{m} does not divide n={spec.n}")


def trace_to(spec: FieldSpec, m: int, x: int) -> int:
    """Relative trace ``Tr^n_m(x) = sum_i x^(2^(i m))``."""
    _check_divides(spec, m)
    acc, y = 0, x
    for _ in range(spec.n // m):
        acc ^= y
        for _ in range(m):
            y = mul(spec, y, y)
    return acc


def absolute_trace(spec: FieldSpec, x: int) -> int:
    return trace_to(spec, 1, x)


def frobenius(spec: FieldSpec, x: int, k: int) -> int:
    """``x^(2^k)``."""
    for _ in range(k % spec.n):
        x = mul(spec, x, x)
    return x


def subfield_membership(spec: FieldSpec, s: int, x: int) -> bool:
    _check_divides(spec, s)
    return frobenius(spec, x, s) == x


def subfield_elements(spec: FieldSpec, s: int) -> list[int]:
    """All ``2^s`` elements of the subfield, in span order of a greedy basis.

    Element ``i`` is the XOR of the basis vectors selected by the bits of ``i``,
    so index arithmetic under XOR matches field addition inside the subfield.
    """
    _check_divides(spec, s)
    key = ("subfield", s)
    if key in spec._cache:
        return list(spec._cache[key])
    q1 = spec.order - 1
    eta = power(spec, spec.zeta, q1 // ((1 << s) - 1))
    members, y = [], 1
    for _ in range((1 << s) - 1):
        members.append(y)
        y = mul(spec, y, eta)
    basis: list[int] = []
    reduced: list[int] = []  # echelon form used only for the span test
    for v in sorted(members):
        r = v
        for piv in reduced:
            r = min(r, r ^ piv)
        if r:
            basis.append(v)
            reduced.append(r)
            reduced.sort(reverse=True)
    out = [0] * (1 << s)
    for i in range(1, 1 << s):
        low = (i & -i).bit_length() - 1
        out[i] = out[i & (i - 1)] ^ basis[low]
    spec._cache[key] = tuple(out)
    return out


def subfield_mask(spec: FieldSpec, s: int) -> np.ndarray:
    """Boolean array over all field elements marking the subfield of degree ``s``."""
    mask = np.zeros(spec.order, dtype=bool)
    mask[subfield_elements(spec, s)] = True
    return mask


def primitive_cube_root(spec: FieldSpec) -> int:
    if spec.omega is None:
        raise ParameterError(f"GF(2^{spec.n}) has no primitive cube root of unity (n odd)")
    return spec.omega


def gcd_ok(k: int, n: int, want: int) -> bool:
    return gcd(k, n) == want


# --- vectorised arithmetic --------------------------------------------------

def vmul(spec: FieldSpec, a, b, tables: bool | None = None) -> np.ndarray:
    """Elementwise product of integer arrays (broadcasting)."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if tables is None:
        tables = spec.has_tables
    if tables:
        log, exp = spec.log_table, spec.exp_table
        out = exp[log[a] + log[b]]
        return np.where((a == 0) | (b == 0), 0, out)
    a, b = np.broadcast_arrays(a, b)
    a = a.copy()
    b = b.copy()
    r = np.zeros_like(a)
    top = np.int64(1 << spec.n)
    for _ in range(spec.n):
        r ^= np.where(b & 1, a, 0)
        b >>= 1
        a <<= 1
        a = np.where(a & top, a ^ spec.modulus, a)
    return r


def vpow(spec: FieldSpec, a, e: int) -> np.ndarray:
    """Elementwise ``a**e`` with the same zero conventions as :func:`power`."""
    a = np.asarray(a, dtype=np.int64)
    if e == 0:
        return np.ones_like(a)
    q1 = spec.order - 1
    e = e % q1 or q1
    if spec.has_tables:
        out = spec.exp_table[(spec.log_table[a] * e) % q1]
        return np.where(a == 0, 0, out)
    r = np.ones_like(a)
    base = a.copy()
    while e:
        if e & 1:
            r = vmul(spec, r, base)
        base = vmul(spec, base, base)
        e >>= 1
    return np.where(a == 0, 0, r)


def vfrobenius(spec: FieldSpec, a, k: int) -> np.ndarray:
    return vpow(spec, a, 1 << (k % spec.n)) if k % spec.n else np.asarray(a, dtype=np.int64).copy()


def vtrace(spec: FieldSpec, a, m: int = 1) -> np.ndarray:
    _check_divides(spec, m)
    y = np.asarray(a, dtype=np.int64).copy()
    acc = np.zeros_like(y)
    for _ in range(spec.n // m):
        acc ^= y
        y = vfrobenius(spec, y, m)
    return acc


def trace_dual_masks(spec: FieldSpec) -> np.ndarray:
    """``u[a]`` with ``Tr(a*x) == parity(u[a] & x)`` for every element ``a``."""
    key = "trace_dual"
    if key not in spec._cache:
        basis = np.array([1 << i for i in range(spec.n)], dtype=np.int64)
        elems = spec.elements
        u = np.zeros(spec.order, dtype=np.int64)
        for i, e in enumerate(basis):
            u |= vtrace(spec, vmul(spec, elems, e)) << i
        u.flags.writeable = False
        spec._cache[key] = u
    return spec._cache[key]
