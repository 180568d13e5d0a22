from itertools import product

from hypothesis import given
from hypothesis import strategies as st

from locfrac.trider.linalg import identity, kernel, matmul, matvec, snf, solve, subquotient
from locfrac.trider.rings import CoeffRing, ring_from_spec

from strategies import SMALL_RINGS, elements, matrices, rings


def test_ring_names():
    assert ring_from_spec("z4") == CoeffRing("cyclic", 2, 2)
    assert ring_from_spec("f2e") == CoeffRing("dual", 2)
    assert ring_from_spec("f3") == CoeffRing("field", 3)
    assert ring_from_spec({"kind": "cyclic", "p": 3, "k": 2}).size == 9


def test_ring_tables_exhaustive():
    for r in SMALL_RINGS:
        els = list(r.elements())
        zero = 0
        for a, b in product(els, els):
            assert r.add(a, b) == r.add(b, a)
            assert r.mul(a, b) == r.mul(b, a)
            assert r.add(a, r.neg(a)) == zero
        for a in els:
            if r.is_unit(a):
                assert r.mul(a, r.inv(a)) == 1
            else:
                assert r.val(a) >= 1


@given(rings, st.data())
def test_ring_distributive(r, data):
    a, b, c = (data.draw(elements(r)) for _ in range(3))
    assert r.mul(a, r.add(b, c)) == r.add(r.mul(a, b), r.mul(a, c))
    assert r.mul(r.mul(a, b), c) == r.mul(a, r.mul(b, c))


@given(rings, st.data())
def test_split_and_divide(r, data):
    a = data.draw(elements(r))
    v, u = r.split(a)
    assert r.mul(r.pow_pi(v), u) == a
    b = data.draw(elements(r))
    q = r.divide(a, b)
    if q is not None:
        assert r.mul(q, b) == a
    else:
        assert r.val(a) < r.val(b)


def _diag(r, s, m, n):
    d = [[0] * n for _ in range(m)]
    for i, v in enumerate(s.diag):
        d[i][i] = r.pow_pi(v)
    return d


@given(rings, st.integers(1, 3), st.integers(1, 3), st.data())
def test_snf_factorization(r, m, n, data):
    a = data.draw(matrices(r, m, n))
    s = snf(r, a, n)
    assert matmul(r, matmul(r, s.P, a, m, n), s.Q, n, n) == _diag(r, s, m, n)
    assert matmul(r, s.P, s.Pinv, m, m) == identity(m)
    assert matmul(r, s.Q, s.Qinv, n, n) == identity(n)
    assert s.diag == sorted(s.diag)


@given(st.sampled_from(SMALL_RINGS[:1] + SMALL_RINGS[3:5]), st.integers(1, 2), st.integers(1, 3), st.data())
def test_kernel_against_enumeration(r, m, n, data):
    a = data.draw(matrices(r, m, n))
    gens = kernel(r, a, n)
    for g in gens:
        assert matvec(r, a, g) == [0] * m
    truth = {v for v in product(r.elements(), repeat=n) if matvec(r, a, list(v)) == [0] * m}
    span = subquotient(r, n, gens, [])
    assert span.size == len(truth)


@given(rings, st.integers(1, 3), st.integers(1, 3), st.data())
def test_solve_roundtrip(r, m, n, data):
    a = data.draw(matrices(r, m, n))
    x0 = data.draw(st.lists(elements(r), min_size=n, max_size=n))
    b = matvec(r, a, x0)
    x, fail = solve(r, a, b, n)
    assert fail is None
    assert matvec(r, a, x) == b


def test_solve_failure_reports_row():
    r = CoeffRing("cyclic", 2, 2)
    x, fail = solve(r, [[2]], [1], 1)
    assert x is None
    assert fail.as_dict()["inconsistent_row"] == 0
    assert fail.as_dict()["pivot_valuation"] == 1


@given(st.sampled_from(SMALL_RINGS[:1] + SMALL_RINGS[3:5]), st.integers(1, 2), st.data())
def test_subquotient_size_matches_enumeration(r, n, data):
    U = data.draw(st.lists(st.lists(elements(r), min_size=n, max_size=n), max_size=3))
    V = data.draw(st.lists(st.lists(elements(r), min_size=n, max_size=n), max_size=2))
    sq = subquotient(r, n, U + V, V)

    def span(gens):
        out = {tuple([0] * n)}
        for g in gens:
            out = {tuple(r.add(x, r.mul(c, y)) for x, y in zip(v, g)) for v in out for c in r.elements()}
        return out

    assert sq.size * len(span(V)) == len(span(U + V))
    # coordinates separate cosets
    seen = {}
    for v in span(U + V):
        seen.setdefault(sq.coords(list(v)), set()).add(v)
    assert len(seen) == sq.size
