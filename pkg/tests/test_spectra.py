import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pieceperm import gf2n, spectra
from pieceperm.constructions import corollary1, gold, inverse
from pieceperm.errors import ParameterError
from pieceperm.funcrep import AffineMap, LutFunction, identity, monomial
from pieceperm.gf2n import make_field


def brute_ddt(t):
    q = len(t)
    tab = [[0] * q for _ in range(q)]
    for a in range(q):
        for x in range(q):
            tab[a][t[x] ^ t[x ^ a]] += 1
    return np.array(tab)


def brute_bct_system2(t):
    """#{(x, alpha): D_alpha F(x + a) = D_alpha F(x) = b}, straight from the system."""
    q = len(t)
    tab = np.zeros((q, q), dtype=int)
    for a in range(1, q):
        for alpha in range(1, q):
            for x in range(q):
                b = t[x] ^ t[x ^ alpha]
                if t[x ^ a] ^ t[x ^ a ^ alpha] == b:
                    tab[a, b] += 1
    return tab


def perm_strategy(n):
    return st.permutations(list(range(1 << n)))


@pytest.fixture(scope="module")
def omega_x_6():
    spec = make_field(6, s=2)
    return corollary1(spec, 2, 2, AffineMap(spec, 2, (spec.omega, 0), 0))


def test_ddt_against_brute_force(backend, rng):
    spec = make_field(4)
    for _ in range(3):
        lut = LutFunction(spec, rng.integers(0, 16, 16))
        assert np.array_equal(spectra.ddt(lut, full=True, backend=backend).table, brute_ddt(lut.table.tolist()))


def test_bct_against_system_enumeration(backend, rng):
    spec = make_field(4)
    for _ in range(3):
        lut = LutFunction(spec, rng.permutation(16))
        fast = spectra.bct(lut, full=True, backend=backend).table
        assert np.array_equal(fast[1:, 1:], brute_bct_system2(lut.table.tolist())[1:, 1:])


def test_literal_bct_is_transpose_of_system(rng):
    spec = make_field(5)
    lut = LutFunction(spec, rng.permutation(32))
    lit = spectra.literal_bct(lut)
    sysb = brute_bct_system2(lut.table.tolist())
    assert np.array_equal(lit.T[1:, 1:], sysb[1:, 1:])


@pytest.mark.parametrize("n", [4, 6, 8])
def test_fast_equals_oracles(n, backend, rng):
    spec = make_field(n)
    lut = LutFunction(spec, rng.permutation(spec.order))
    assert np.array_equal(spectra.ddt(lut, full=True, backend=backend).table, spectra.ddt_naive(lut).table)
    assert np.array_equal(spectra.walsh(lut, full=True, backend=backend).table, spectra.walsh_naive(lut).table)
    assert np.array_equal(spectra.bct(lut, full=True, backend=backend).table, spectra.bct_naive(lut).table)


def test_threads_do_not_change_results(omega_x_6, backend):
    for fn in (spectra.ddt, spectra.walsh, spectra.bct):
        a = fn(omega_x_6, full=True, threads=1, backend=backend).table
        b = fn(omega_x_6, full=True, threads=4, backend=backend).table
        assert np.array_equal(a, b)


def test_backends_agree_at_n10():
    names = spectra._backend.available()
    if len(names) < 2:
        pytest.skip("compiled backend not built")
    spec = make_field(10, s=2)
    F = corollary1(spec, 2, 2, AffineMap(spec, 2, (1, 0), spec.omega))
    for fn in (spectra.ddt, spectra.walsh, spectra.bct):
        tabs = [fn(F, full=True, backend=b).table for b in names]
        assert np.array_equal(tabs[0], tabs[1])


def test_known_values(f6):
    assert spectra.ddt(gold(f6, 2)).uniformity == 4
    assert spectra.walsh(gold(f6, 2)).nonlinearity == 24
    inv = inverse(f6)
    assert spectra.ddt_naive(inv).uniformity == 4
    assert spectra.bct_naive(inv).uniformity == 4  # n = 2 mod 4; regression constant
    assert spectra.bct(inv).uniformity == 4
    assert spectra.bct(inverse(make_field(8))).uniformity == 6  # n = 0 mod 4


def test_apn_has_uniformity_2():
    spec = make_field(7)
    assert spectra.ddt(monomial(spec, 3)).uniformity == 2


def test_walsh_nonlinearity_of_affine_is_zero(f6):
    assert spectra.walsh(identity(f6)).nonlinearity == 0


def test_bct_rejects_non_permutation():
    with pytest.raises(ParameterError):
        spectra.bct(monomial(make_field(4), 3))


def test_oracle_guard(f10):
    with pytest.raises(ParameterError):
        spectra.ddt_naive(gold(f10, 2))
    # an explicit limit lifts the guard
    spec = make_field(9)
    assert spectra.ddt_naive(monomial(spec, 3), max_n=9).uniformity == 2


def test_nl_lower_bound():
    assert [spectra.nl_lower_bound(6, 2), spectra.nl_lower_bound(10, 2), spectra.nl_lower_bound(12, 4)] == [20, 476, 1976]
    with pytest.raises(ParameterError):
        spectra.nl_lower_bound(9, 3)


def test_case_partition(omega_x_6):
    cases = spectra.bct(omega_x_6).case_partition
    assert set(cases) == {"a_in_b_in", "a_in_b_out", "a_out_b_in", "a_out_b_out"}
    assert max(cases.values()) == 16


@settings(max_examples=25, deadline=None)
@given(perm_strategy(4))
def test_properties_random_permutations_n4(p):
    spec = make_field(4)
    lut = LutFunction(spec, p)
    d = spectra.ddt(lut, full=True)
    w = spectra.walsh(lut, full=True)
    b = spectra.bct(lut, full=True)
    # every DDT row sums to q with even entries
    assert (d.table.sum(axis=1) == 16).all() and (d.table % 2 == 0).all()
    # Parseval per component
    assert ((w.table.astype(np.int64) ** 2).sum(axis=0) == 16 * 16).all()
    # beta >= delta entrywise on the nonzero block
    assert (b.table[1:, 1:] >= d.table[1:, 1:]).all()
    assert np.array_equal(b.table, spectra.bct_naive(lut).table)


@settings(max_examples=20, deadline=None)
@given(st.lists(st.integers(0, 63), min_size=64, max_size=64))
def test_ddt_walsh_oracles_random_functions_n6(vals):
    spec = make_field(6)
    lut = LutFunction(spec, vals)
    assert np.array_equal(spectra.ddt(lut, full=True).table, spectra.ddt_naive(lut).table)
    assert np.array_equal(spectra.walsh(lut, full=True).table, spectra.walsh_naive(lut).table)


def test_walsh_table_is_field_indexed(f6):
    F = gold(f6, 2)
    tab = spectra.walsh(F, full=True).table
    a, b = 5, 9
    direct = sum(1 - 2 * gf2n.absolute_trace(f6, gf2n.mul(f6, a, x) ^ gf2n.mul(f6, b, F(x))) for x in range(64))
    assert tab[a, b] == direct
