import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pieceperm import gf2n
from pieceperm.errors import ParameterError
from pieceperm.gf2n import make_field, parse_field_spec


def clmul_mod(a, b, mod, n):
    """Schoolbook carry-less product reduced bit by bit."""
    r = 0
    for i in range(n):
        if (b >> i) & 1:
            r ^= a << i
    for i in range(2 * n - 2, n - 1, -1):
        if (r >> i) & 1:
            r ^= mod << (i - n)
    return r


def is_irreducible_brute(p):
    d = p.bit_length() - 1
    for q in range(2, 1 << (d // 2 + 1)):
        dq = q.bit_length() - 1
        if dq == 0 or dq > d // 2:
            continue
        r = p
        while r.bit_length() - 1 >= dq:
            r ^= q << (r.bit_length() - 1 - dq)
        if r == 0:
            return False
    return True


@pytest.mark.parametrize("n", range(2, 25))
def test_default_moduli_are_irreducible(n):
    spec = make_field(n)
    assert spec.modulus.bit_length() - 1 == n
    if n <= 12:
        assert is_irreducible_brute(spec.modulus)


def test_rabin_matches_brute_force_degree_6():
    for p in range(1 << 6, 1 << 7):
        assert gf2n.is_irreducible(p) == is_irreducible_brute(p), hex(p)


@pytest.mark.parametrize("n", [4, 6, 8, 9])
def test_mul_matches_schoolbook(n, rng):
    spec = make_field(n)
    a = rng.integers(0, spec.order, 200)
    b = rng.integers(0, spec.order, 200)
    want = [clmul_mod(int(x), int(y), spec.modulus, n) for x, y in zip(a, b)]
    assert [gf2n.mul(spec, int(x), int(y)) for x, y in zip(a, b)] == want
    assert gf2n.vmul(spec, a, b).tolist() == want
    assert gf2n.vmul(spec, a, b, tables=False).tolist() == want


def test_large_field_uses_shift_xor():
    spec = make_field(20)
    assert not spec.has_tables
    a, b = 0x9ABCD, 0x12345
    assert gf2n.mul(spec, a, b) == clmul_mod(a, b, spec.modulus, 20)
    assert gf2n.vmul(spec, np.array([a]), np.array([b]))[0] == clmul_mod(a, b, spec.modulus, 20)


@pytest.mark.parametrize("n", [2, 3, 4, 6, 10, 12])
def test_zeta_is_smallest_primitive(n):
    spec = make_field(n)
    q1 = spec.order - 1

    def order(x):
        e, y = 1, x
        while y != 1:
            y = gf2n.mul(spec, y, x)
            e += 1
        return e

    assert order(spec.zeta) == q1
    if n <= 10:
        assert all(order(x) < q1 for x in range(2, spec.zeta))


def test_omega_cube_root(f6):
    w = gf2n.primitive_cube_root(f6)
    assert w != 1 and gf2n.power(f6, w, 3) == 1
    assert gf2n.mul(f6, w, w) ^ w ^ 1 == 0  # w^2 + w + 1 = 0
    with pytest.raises(ParameterError):
        gf2n.primitive_cube_root(make_field(7))


def test_power_and_inverse(f6):
    assert gf2n.power(f6, 0, 0) == 1
    for x in range(1, 64):
        assert gf2n.mul(f6, x, gf2n.inverse(f6, x)) == 1
        assert gf2n.power(f6, x, 63) == 1
    assert gf2n.inverse(f6, 0) == 0
    assert gf2n.power(f6, 0, 62) == 0


@pytest.mark.parametrize("n,s", [(6, 2), (6, 3), (12, 4), (10, 2), (9, 3)])
def test_subfield_elements(n, s):
    spec = make_field(n)
    sub = gf2n.subfield_elements(spec, s)
    assert len(sub) == 1 << s and len(set(sub)) == 1 << s
    brute = [x for x in range(spec.order) if gf2n.frobenius(spec, x, s) == x]
    assert sorted(sub) == brute
    # XOR of indices maps to XOR of elements
    for i, j in itertools.product(range(1 << s), repeat=2):
        assert sub[i] ^ sub[j] == sub[i ^ j]


def test_trace_dual_masks(f6):
    u = gf2n.trace_dual_masks(f6)
    for a in range(64):
        for x in range(64):
            assert gf2n.absolute_trace(f6, gf2n.mul(f6, a, x)) == bin(int(u[a]) & x).count("1") % 2


def test_relative_trace_lands_in_subfield(f12):
    xs = f12.elements
    tr = gf2n.vtrace(f12, xs, 4)
    assert gf2n.subfield_mask(f12, 4)[tr].all()
    assert gf2n.trace_to(f12, 4, 0x123) == int(tr[0x123])


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_field_axioms_gf256(a, b, c):
    spec = make_field(8)
    m = lambda x, y: gf2n.mul(spec, x, y)
    assert m(a, b) == m(b, a)
    assert m(a, m(b, c)) == m(m(a, b), c)
    assert m(a, b ^ c) == m(a, b) ^ m(a, c)


def test_parse_field_spec_roundtrip():
    spec = parse_field_spec("n=8,mod=0x11d,s=4")
    assert (spec.n, spec.modulus, spec.s) == (8, 0x11D, 4)
    assert parse_field_spec(gf2n.format_field_spec(spec)) == spec


@pytest.mark.parametrize("text", ["n=1", "n=40", "n=6,mod=0x41", "n=6,s=4", "n=6,mod=0x13", "m=6", "n=six"])
def test_bad_field_specs(text):
    with pytest.raises(ParameterError):
        parse_field_spec(text)
