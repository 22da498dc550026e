import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitary_motives.errors import CharTwo, DegenerateAlgebra, NonPrime
from unitary_motives.fields import (
    EtaleAlgebra,
    annihilated_mask,
    annihilator_nonzero,
    extend,
    find_modulus,
    is_split,
    make_field,
    sigma,
    split_idempotents,
)

SMALL_FIELDS = [(3, 1), (5, 1), (7, 1), (3, 2), (5, 2), (3, 3), (3, 4), (7, 2)]


def test_prime_field_elements():
    F = make_field(3, 1)
    assert list(F.elements()) == [0, 1, 2]


def test_rejects_char_two_and_nonprime():
    with pytest.raises(CharTwo):
        make_field(2, 1)
    with pytest.raises(NonPrime):
        make_field(9, 1)
    with pytest.raises(NonPrime):
        make_field(1, 1)


def test_f9_units_have_order_dividing_8():
    F = make_field(3, 2)
    assert F.q == 9
    assert all(F.pow(int(x), 8) == 1 for x in F.elements()[1:])


@pytest.mark.parametrize("p,m", SMALL_FIELDS)
def test_fermat_identity_exhaustive(p, m):
    F = make_field(p, m)
    xs = F.elements()
    acc = xs.copy()
    # x^q by repeated p-th powers, through mul only
    for _ in range(m):
        y = np.ones_like(acc)
        for _ in range(p):
            y = F.mul(y, acc)
        acc = y
    assert np.array_equal(acc, xs)


@pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (3, 2), (5, 2), (3, 3)])
def test_field_axioms_exhaustive(p, m):
    F = make_field(p, m)
    a, b, c = np.meshgrid(F.elements(), F.elements(), F.elements(), indexing="ij")
    assert np.array_equal(F.add(a, b), F.add(b, a))
    assert np.array_equal(F.mul(a, b), F.mul(b, a))
    assert np.array_equal(F.mul(F.mul(a, b), c), F.mul(a, F.mul(b, c)))
    assert np.array_equal(F.add(F.add(a, b), c), F.add(a, F.add(b, c)))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    xs = F.elements()
    assert np.all(F.add(xs, F.neg(xs)) == 0)
    assert np.all(F.mul(xs[1:], F.inv(xs[1:])) == 1)


def test_large_field_uses_log_tables_consistently():
    F = make_field(7, 4)  # 2401 > table threshold
    rng = np.random.default_rng(1)
    a, b, c = rng.integers(0, F.q, size=(3, 500))
    assert np.array_equal(F.mul(a, F.add(b, c)), F.add(F.mul(a, b), F.mul(a, c)))
    assert np.array_equal(F.sub(F.add(a, b), b), a)


def test_modulus_is_first_irreducible():
    assert find_modulus(3, 2) == (1, 0, 1)  # x^2 + 1
    assert find_modulus(5, 1) == (0, 1)


def test_multiplicative_group_order():
    F = make_field(5, 2)
    rng = np.random.default_rng(0)
    for x in rng.integers(1, F.q, size=20):
        assert F.pow(int(x), F.q - 1) == 1


@pytest.mark.parametrize("p,m,k", [(3, 1, 2), (3, 1, 3), (5, 1, 2), (3, 2, 2), (7, 1, 2)])
def test_extension_embedding_is_homomorphism(p, m, k):
    base = make_field(p, m)
    ext = extend(base, k)
    assert ext.field.q == base.q**k
    xs = base.elements()
    a, b = np.meshgrid(xs, xs, indexing="ij")
    e = ext.embed
    assert np.array_equal(e(base.add(a, b)), ext.field.add(e(a), e(b)))
    assert np.array_equal(e(base.mul(a, b)), ext.field.mul(e(a), e(b)))
    assert e(1) == 1 and e(0) == 0
    assert len(set(ext.table.tolist())) == base.q


def test_sigma_examples():
    L = EtaleAlgebra(make_field(3), 2)
    assert sigma(L.element(2, 0)) == L.element(2, 0)
    assert sigma(L.beta) == L.element(0, -1)


def test_sigma_is_multiplicative_exhaustive():
    L = EtaleAlgebra(make_field(3), 2)
    els = L.elements()
    assert len(els) == 9
    for x, y in itertools.product(els, els):  # 81 pairs
        assert sigma(x * y) == sigma(x) * sigma(y)
        assert sigma(x + y) == sigma(x) + sigma(y)
        assert sigma(sigma(x)) == x


@pytest.mark.parametrize("p,m,b", [(3, 1, 1), (3, 1, 2), (5, 1, 2), (3, 2, 2), (7, 1, 3)])
def test_trace_and_norm_are_invariant(p, m, b):
    L = EtaleAlgebra(make_field(p, m), b)
    for x in L.elements():
        t = x + sigma(x)
        nrm = x * sigma(x)
        assert t.v == 0 and nrm.v == 0
        assert nrm.u == x.norm()


def test_split_examples():
    F3 = make_field(3)
    L = EtaleAlgebra(F3, 1)
    assert is_split(L)
    e1, e2 = split_idempotents(L)
    # e1 = (1 + beta)/2 = 2 + 2 beta over F_3
    assert e1 == L.element(2, 2)
    assert e1 * e1 == e1 and e2 * e2 == e2
    assert (e1 * e2).is_zero()
    assert e1 + e2 == L.one
    assert sigma(e1) == e2
    assert not is_split(EtaleAlgebra(F3, 2))
    assert split_idempotents(EtaleAlgebra(F3, 2)) is None
    assert is_split(EtaleAlgebra(make_field(3, 2), 2))


def test_b_zero_rejected():
    with pytest.raises(DegenerateAlgebra):
        EtaleAlgebra(make_field(3), 0)


def test_annihilator_examples():
    F3 = make_field(3)
    L = EtaleAlgebra(F3, 1)
    zero = L.element(0, 0)
    assert annihilator_nonzero([zero, zero])
    e1, e2 = split_idempotents(L)
    assert annihilator_nonzero([e1, e1 * L.element(2)])
    assert (e2 * e1).is_zero()
    K = EtaleAlgebra(F3, 2)
    assert not any(annihilator_nonzero([x, y]) for x in K.elements() for y in K.elements() if not (x.is_zero() and y.is_zero()))


def _brute_ann(L, m):
    return any(all((ell * mi).is_zero() for mi in m) for ell in L.elements() if not ell.is_zero())


@pytest.mark.parametrize("p,b", [(3, 1), (3, 2), (5, 1), (5, 2)])
def test_annihilator_matches_brute_force_on_rank_two(p, b):
    L = EtaleAlgebra(make_field(p), b)
    els = L.elements()
    vals = [annihilator_nonzero([x, y]) == _brute_ann(L, [x, y]) for x in els for y in els]
    assert all(vals)
    nonzero_hit = any(annihilator_nonzero([x, y]) for x in els for y in els if not (x.is_zero() and y.is_zero()))
    assert nonzero_hit == is_split(L)


@pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_split_under_base_change(p, m):
    F = make_field(p, m)
    for b in F.elements()[1:]:
        L = EtaleAlgebra(F, int(b))
        for k in range(1, 5 if F.q < 9 else 3):
            Lk = L.base_change(extend(F, k))
            expected = True if is_split(L) else (k % 2 == 0)
            assert is_split(Lk) == expected


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_annihilated_mask_rank_one_criterion(field, data):
    F = make_field(*field)
    b = data.draw(st.integers(1, F.q - 1))
    L = EtaleAlgebra(F, b)
    ell = L.element(data.draw(st.integers(0, F.q - 1)), data.draw(st.integers(0, F.q - 1)))
    m = [L.element(data.draw(st.integers(0, F.q - 1)), data.draw(st.integers(0, F.q - 1))) for _ in range(3)]
    # multiples of a zero divisor are always annihilated
    if not ell.is_unit():
        prod = [ell * x for x in m]
        assert annihilator_nonzero(prod)
    U = np.array([[x.u for x in m]])
    V = np.array([[x.v for x in m]])
    assert bool(annihilated_mask(L, U, V)[0]) == annihilator_nonzero(m)
