import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_herm, brute_quadric, brute_S, brute_weil, hermitian_formula, proj_count, quadric_formula
from unitary_motives.errors import DegeneratePoint, EnumerationBoundExceeded, InvalidInput, NotSplit
from unitary_motives.fields import EtaleAlgebra, extend, is_split, make_field
from unitary_motives.forms import HermitianDiag, QuadraticForm, trace_form
from unitary_motives.points import (
    ModuleSpec,
    count_blowup_formula,
    count_hermitian_variety,
    count_proj_space,
    count_quadric,
    count_S,
    count_weil_proj,
    enum_incidence_blowup,
    enum_span_incidence,
    iter_llines,
    lline_point,
    lline_size,
    normalize_rows,
    proj_points,
    span_map,
    unrank_normalized,
)

F3 = make_field(3)
F5 = make_field(5)


def module(F, b, n):
    return ModuleSpec(EtaleAlgebra(F, b), n)


def test_proj_space_examples():
    assert count_proj_space(4, F3) == 40
    assert count_proj_space(2, F5) == 6
    assert count_proj_space(4, make_field(3, 2)) == 820
    assert count_proj_space(4, F3, extend(F3, 2)) == 820
    with pytest.raises(InvalidInput):
        count_proj_space(0, F3)


def test_S_examples():
    assert count_S(module(F3, 1, 2)) == 8
    assert count_S(module(F3, 2, 2)) == 0
    assert count_S(module(F3, 2, 2), extend(F3, 2)) == 20
    assert count_S(module(make_field(3, 2), 2, 2)) == 20


def test_weilproj_examples():
    assert count_weil_proj(module(F3, 1, 2)) == 16
    assert count_weil_proj(module(F3, 2, 2)) == 10
    for p in (3, 5, 7):
        assert count_weil_proj(module(make_field(p), 1, 1)) == 1


def test_quadric_examples():
    assert count_quadric(QuadraticForm(F3, (1, -1, -1, 1))) == 16
    assert count_quadric(QuadraticForm(F3, (1, 1, 1))) == 4
    assert count_quadric(QuadraticForm(F5, (1, -1))) == 2


def test_hermitian_examples():
    assert count_hermitian_variety(HermitianDiag(EtaleAlgebra(F3, 1), (1, -1))) == 4
    assert count_hermitian_variety(HermitianDiag(EtaleAlgebra(F3, 2), (1, -1))) == 4
    assert count_hermitian_variety(HermitianDiag(EtaleAlgebra(F3, 1), (1, -1, 1))) == 52


@pytest.mark.parametrize("p,m,b,n", [(3, 1, 1, 2), (3, 1, 2, 2), (5, 1, 2, 2), (5, 1, 1, 2), (3, 1, 1, 3), (3, 1, 2, 3), (3, 2, 2, 2)])
def test_S_and_weil_match_brute_force(p, m, b, n):
    F = make_field(p, m)
    N = module(F, b, n)
    assert count_S(N) == brute_S(F, b, n)
    if F.q**n <= 125:
        assert count_weil_proj(N) == brute_weil(F, b, n)


@pytest.mark.parametrize(
    "p,m,b,coeffs",
    [(3, 1, 1, (1, -1)), (3, 1, 2, (1, -1)), (3, 1, 2, (1, 1)), (5, 1, 2, (1, 3)), (5, 1, 1, (2, 4)), (3, 1, 1, (1, -1, 1)), (3, 1, 2, (1, 2, 1)), (3, 2, 2, (1, 5))],
)
def test_hermitian_matches_brute_force_and_closed_form(p, m, b, coeffs):
    F = make_field(p, m)
    h = HermitianDiag(EtaleAlgebra(F, b), coeffs)
    got = count_hermitian_variety(h)
    assert got == hermitian_formula(F.q, len(coeffs), is_split(h.algebra))
    if F.q ** len(coeffs) <= 125:
        assert got == brute_herm(F, b, h.coeffs)


@pytest.mark.parametrize("p,m", [(3, 1), (5, 1), (7, 1), (3, 2)])
def test_quadrics_match_brute_force_and_closed_form(p, m):
    F = make_field(p, m)
    rng = np.random.default_rng(p * 10 + m)
    for dim in (2, 3, 4, 5):
        for _ in range(3):
            coeffs = tuple(int(x) for x in rng.integers(1, F.q, size=dim))
            got = count_quadric(QuadraticForm(F, coeffs))
            assert got == quadric_formula(F, coeffs)
            if F.q**dim <= 10**4:
                assert got == brute_quadric(F, coeffs)


def test_quadric_over_extension_equals_direct_field():
    q3 = QuadraticForm(F3, (1, 1, 2, 2))
    q9 = QuadraticForm(make_field(3, 2), (1, 1, 2, 2))
    assert count_quadric(q3, extend(F3, 2)) == count_quadric(q9)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from([(3, 1), (5, 1), (7, 1), (3, 2)]), st.data())
def test_quadric_count_invariant_under_rescaling(field, data):
    F = make_field(*field)
    dim = data.draw(st.integers(2, 4))
    coeffs = tuple(data.draw(st.lists(st.integers(1, F.q - 1), min_size=dim, max_size=dim)))
    c = data.draw(st.integers(1, F.q - 1))
    q = QuadraticForm(F, coeffs)
    assert count_quadric(q) == count_quadric(q.scaled(c))


@pytest.mark.parametrize("N,A", [(1, 3), (2, 3), (3, 5), (4, 3), (3, 9)])
def test_normalized_unranking_is_a_bijection(N, A):
    pts = np.concatenate(list(proj_points(N, A, chunk=7)))
    assert len(pts) == proj_count(N, A)
    keys = [tuple(r) for r in pts]
    assert keys == sorted(keys)
    assert len(set(keys)) == len(keys)
    for r in pts:
        nz = np.flatnonzero(r)
        assert r[nz[0]] == 1
    # every nonzero vector scales to exactly one normalized vector
    assert len(pts) * (A - 1) == A**N - 1


def test_unrank_matches_lexicographic_enumeration():
    A, N = 3, 3
    expected = [w for w in itertools.product(range(A), repeat=N) if any(w) and w[next(i for i, x in enumerate(w) if x)] == 1]
    expected.sort()
    got = [tuple(r) for r in unrank_normalized(np.arange(len(expected)), N, A)]
    assert got == expected


def test_normalize_rows_scales_to_leading_one():
    F = make_field(7)
    W = np.array([[0, 3, 5], [2, 0, 1], [0, 0, 6]])
    out = normalize_rows(F, W)
    assert out.tolist() == [[0, 1, 4], [1, 0, 4], [0, 0, 1]]


def test_llines_are_distinct_and_complete():
    for F, b, n in [(F3, 1, 2), (F3, 2, 2), (F5, 2, 2)]:
        N = module(F, b, n)
        pts = set()
        for U, V in iter_llines(N, chunk=11):
            for u, v in zip(U, V):
                pts.add(lline_point(N, u, v))
        assert len(pts) == lline_size(N) == brute_weil(F, b, n)


def test_jobs_do_not_change_counts():
    F7 = make_field(7)
    N = module(F7, 3, 3)  # 57^2 L-lines, large enough to split across workers
    h = HermitianDiag(EtaleAlgebra(F7, 3), (1, 2, 4))
    q = QuadraticForm(F7, (1, 2, 3, 4, 5, 6))
    assert count_weil_proj(N, jobs=1) == count_weil_proj(N, jobs=3)
    assert count_S(N, jobs=1) == count_S(N, jobs=4)
    assert count_quadric(q, jobs=1) == count_quadric(q, jobs=3)
    assert count_hermitian_variety(h, jobs=1) == count_hermitian_variety(h, jobs=2)
    r1 = enum_span_incidence(N, jobs=1)
    r2 = enum_span_incidence(N, jobs=3)
    assert r1.total == r2.total and np.array_equal(r1.fiber_sizes, r2.fiber_sizes)


def test_bound_is_enforced():
    N = module(F3, 1, 3)
    with pytest.raises(EnumerationBoundExceeded):
        count_S(N, bound=100)
    with pytest.raises(EnumerationBoundExceeded):
        count_quadric(QuadraticForm(F5, (1, 1, 1, 1)), bound=100)
    assert count_S(N, bound=10**6) == 26


def test_bound_from_environment(monkeypatch):
    monkeypatch.setenv("UNITARY_MOTIVES_BOUND", "39")
    with pytest.raises(EnumerationBoundExceeded):
        count_S(module(F3, 1, 2))


def test_incidence_examples():
    N = module(F3, 1, 2)
    full = enum_incidence_blowup(N)
    assert full.total == 64
    assert full.n_fibers == 16
    assert full.uniform and full.variance == 0
    assert full.histogram() == {4: 16}
    q = trace_form(HermitianDiag(N.algebra, (1, -1)))
    res = enum_incidence_blowup(N, restrict_to=q)
    assert res.total == 16 and res.n_fibers == 4
    assert res.closure_violations == 0


def test_incidence_requires_split_algebra():
    with pytest.raises(NotSplit):
        enum_incidence_blowup(module(F3, 2, 2))
    res = enum_incidence_blowup(module(F3, 2, 2), extend(F3, 2))
    assert res.uniform


@pytest.mark.parametrize("p,b,n,k", [(3, 1, 2, 1), (3, 2, 2, 2), (5, 1, 2, 1), (3, 1, 3, 1), (5, 2, 2, 2)])
def test_blowup_consistency_unrestricted(p, b, n, k):
    F = make_field(p)
    N = module(F, b, n)
    ext = extend(F, k)
    Q = ext.Q
    res = enum_incidence_blowup(N, ext)
    expected = count_blowup_formula(count_proj_space(2 * n, F, ext), count_S(N, ext), n, Q)
    assert res.total == expected
    assert res.uniform and res.variance == 0


@pytest.mark.parametrize("p,b,coeffs,k", [(3, 1, (1, -1), 1), (3, 1, (1, 1, 1), 1), (5, 2, (1, 3), 1), (3, 2, (1, 2, 2), 1), (3, 2, (1, 1, 2), 2)])
def test_span_model_restricted_total(p, b, coeffs, k):
    F = make_field(p)
    ext = extend(F, k)
    h = HermitianDiag(EtaleAlgebra(F, b), coeffs)
    n = len(coeffs)
    res = enum_span_incidence(ModuleSpec(h.algebra, n), ext, restrict_to=trace_form(h))
    Q = ext.Q
    assert res.uniform and res.closure_violations == 0
    x = count_quadric(trace_form(h), ext)
    s = count_S(ModuleSpec(h.algebra, n), ext)
    assert res.total == count_blowup_formula(x, s, n - 1, Q) == (Q + 1) * count_hermitian_variety(h, ext)


def test_split_and_span_models_agree():
    N = module(F5, 4, 2)
    q = trace_form(HermitianDiag(N.algebra, (1, 2)))
    a = enum_incidence_blowup(N, restrict_to=q)
    b = enum_span_incidence(N, restrict_to=q)
    assert a.total == b.total
    assert a.histogram() == b.histogram()


def test_span_map_examples():
    N = module(F3, 1, 2)
    # e1 + e2 = 1, so m = (1, 0) in interleaved coordinates (1, 0, 0, 0)
    pt = span_map((1, 0, 0, 0), N)
    assert pt.kind == "split" and pt.data == ((1, 0), (1, 0))
    with pytest.raises(DegeneratePoint):
        span_map((2, 2, 0, 0), N)  # e1 alone
    K = module(F3, 2, 2)
    for w in itertools.product(range(3), repeat=4):
        if any(w):
            assert span_map(w, K).kind == "field"


def test_span_map_is_constant_on_lines():
    N = module(F3, 2, 2)
    L = N.algebra
    g = (1, 2, 0, 1)
    pt = span_map(g, N)
    for lam in L.elements():
        if lam.is_zero():
            continue
        w = []
        for i in range(2):
            u, v = L.mul_uv(lam.u, lam.v, g[2 * i], g[2 * i + 1])
            w += [int(u), int(v)]
        assert span_map(w, N) == pt


def test_blowup_formula_examples():
    assert count_blowup_formula(17, 5, 1, 3) == 17
    assert count_blowup_formula(40, 8, 2, 3) == 64
    assert count_blowup_formula(16, 8, 2, 3) == 40
    with pytest.raises(InvalidInput):
        count_blowup_formula(1, 1, 0, 3)
