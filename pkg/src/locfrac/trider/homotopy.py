"""The Hom complex and homotopy classes of chain maps.

``Hom^n(X, Y) = (+)_d Hom(X^d, Y^{d+n})`` with ``D f = d_Y f - (-1)^n f d_X``.
Its ``H^0`` is the group of chain maps modulo homotopy and ``H^n`` that of
maps ``X -> Y[n]``. Each ``Hom(X^d, Y^e)`` is handled as a subquotient of a
free module of matrices: numerator entries ``pi^{max(0, e_i - e_j)} R``,
denominator entries ``pi^{e_i} R``.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import Budget, ensure_budget
from .complexes import BoundedComplex, ChainMap
from .linalg import Subquotient, from_columns, kernel, matmul, solve, subquotient
from .rings import CoeffRing


class HomComplex:
    def __init__(self, x: BoundedComplex, y: BoundedComplex):
        if x.ring != y.ring:
            raise ValueError("complexes over different rings")
        self.x, self.y, self.ring = x, y, x.ring
        self._cache: dict = {}

    def layout(self, n: int) -> list[tuple[int, int, int, int]]:
        """Blocks ``(d, rows, cols, offset)`` of the flattened ``Hom^n``."""
        out, off = [], 0
        for d in self.x.modules:
            rows, cols = self.y.rank(d + n), self.x.rank(d)
            if rows and cols:
                out.append((d, rows, cols, off))
                off += rows * cols
        return out

    def dim(self, n: int) -> int:
        lay = self.layout(n)
        return lay[-1][3] + lay[-1][1] * lay[-1][2] if lay else 0

    def flatten(self, f: ChainMap) -> list:
        n = f.degree
        v = [0] * self.dim(n)
        for d, rows, cols, off in self.layout(n):
            a = f.at(d)
            for i in range(rows):
                for j in range(cols):
                    v[off + i * cols + j] = a[i][j]
        return v

    def unflatten(self, v: list, n: int) -> ChainMap:
        mats = {}
        for d, rows, cols, off in self.layout(n):
            mats[d] = [[v[off + i * cols + j] for j in range(cols)] for i in range(rows)]
        return ChainMap(self.x, self.y, mats, n)

    def numerator(self, n: int) -> list:
        r = self.ring
        gens = []
        dim = self.dim(n)
        for d, rows, cols, off in self.layout(n):
            ey, ex = self.y.module(d + n).exps, self.x.module(d).exps
            for i in range(rows):
                for j in range(cols):
                    v = [0] * dim
                    v[off + i * cols + j] = r.pow_pi(max(0, ey[i] - ex[j]))
                    gens.append(v)
        return gens

    def denominator(self, n: int) -> list:
        r = self.ring
        gens = []
        dim = self.dim(n)
        for d, rows, cols, off in self.layout(n):
            ey = self.y.module(d + n).exps
            for i in range(rows):
                if ey[i] >= r.length:
                    continue
                for j in range(cols):
                    v = [0] * dim
                    v[off + i * cols + j] = r.pow_pi(ey[i])
                    gens.append(v)
        return gens

    def D(self, n: int) -> list:
        """Matrix of ``D: Hom^n -> Hom^{n+1}`` on flattened coordinates."""
        key = ("D", n)
        if key in self._cache:
            return self._cache[key]
        r = self.ring
        m, k = self.dim(n + 1), self.dim(n)
        cols = []
        sign = r.neg(1) if n % 2 else 1
        for t in range(k):
            e = [0] * k
            e[t] = 1
            f = self.unflatten(e, n)
            mats = {}
            for d in self.x.modules:
                rows_, cols_ = self.y.rank(d + n + 1), self.x.rank(d)
                if not rows_ or not cols_:
                    continue
                a = matmul(r, self.y.d(d + n), f.at(d), inner=self.y.rank(d + n), cols=cols_)
                b = matmul(r, f.at(d + 1), self.x.d(d), inner=self.x.rank(d + 1), cols=cols_)
                mats[d] = [[r.sub(p, r.mul(sign, q)) for p, q in zip(ra, rb)] for ra, rb in zip(a, b)]
            cols.append(self.flatten(ChainMap(self.x, self.y, mats, n + 1)) if m else [])
        out = from_columns(cols, m)
        self._cache[key] = out
        return out

    def cohomology(self, n: int = 0) -> Subquotient:
        key = ("H", n)
        if key in self._cache:
            return self._cache[key]
        r = self.ring
        dim = self.dim(n)
        U0 = self.numerator(n)
        V1 = self.denominator(n + 1)
        Dn = self.D(n)
        m = self.dim(n + 1)
        if m:
            DG = matmul(r, Dn, from_columns(U0, dim), inner=dim, cols=len(U0)) if U0 else [[] for _ in range(m)]
            big = [row + [v[i] for v in V1] for i, row in enumerate(DG)]
            ker = kernel(r, big, len(U0) + len(V1))
            G = from_columns(U0, dim)
            U = [matmul_vec(r, G, y[: len(U0)]) for y in ker]
        else:
            U = [list(u) for u in U0]
        V = [list(v) for v in self.denominator(n)]
        Um = self.numerator(n - 1)
        if Um and dim:
            Dm = self.D(n - 1)
            V += [matmul_vec(r, Dm, u) for u in Um]
        sq = subquotient(r, dim, U + V, V)
        self._cache[key] = sq
        return sq


def matmul_vec(r: CoeffRing, a, v) -> list:
    return [sum_ring(r, (r.mul(x, y) for x, y in zip(row, v))) for row in a]


def sum_ring(r: CoeffRing, xs) -> int:
    s = 0
    for x in xs:
        s = r.add(s, x)
    return s


@dataclass
class HomotopyClasses:
    """``Hom_K(X, Y[n])`` as a finite module with coordinates."""

    hom: HomComplex
    n: int
    sq: Subquotient

    @property
    def exps(self) -> list:
        return list(self.sq.exps)

    @property
    def size(self) -> int:
        return self.sq.size

    def coords(self, f: ChainMap) -> tuple:
        return self.sq.coords(self.hom.flatten(f))

    def is_zero(self, f: ChainMap) -> bool:
        return all(c == 0 for c in self.coords(f))

    def representative(self, coords) -> ChainMap:
        return self.hom.unflatten(self.sq.element(coords), self.n)

    def representatives(self) -> list[ChainMap]:
        return [self.representative(c) for c in self.sq.elements()]

    def as_dict(self) -> dict:
        return {"factors": [self.hom.ring.p**e for e in self.exps], "size": self.size, "degree": self.n}


def homotopy_classes(x: BoundedComplex, y: BoundedComplex, n: int = 0, hom: HomComplex | None = None) -> HomotopyClasses:
    h = hom or HomComplex(x, y)
    return HomotopyClasses(h, n, h.cohomology(n))


def is_nullhomotopic(f: ChainMap) -> bool:
    return homotopy_classes(f.source, f.target, f.degree).is_zero(f)


def homotopic(f: ChainMap, g: ChainMap) -> bool:
    return is_nullhomotopic(f - g)


def null_homotopy(f: ChainMap) -> ChainMap | None:
    """``h`` of degree ``deg f - 1`` with ``D h == f``, if any."""
    hc = HomComplex(f.source, f.target)
    n = f.degree
    r = f.ring
    Um = hc.numerator(n - 1)
    V = hc.denominator(n)
    dim = hc.dim(n)
    if not dim:
        return hc.unflatten([0] * hc.dim(n - 1), n - 1)
    DG = matmul(r, hc.D(n - 1), from_columns(Um, hc.dim(n - 1)), inner=hc.dim(n - 1), cols=len(Um)) if Um else [[] for _ in range(dim)]
    A = [row + [v[i] for v in V] for i, row in enumerate(DG)]
    y, _ = solve(r, A, hc.flatten(f), len(Um) + len(V))
    if y is None:
        return None
    return hc.unflatten(matmul_vec(r, from_columns(Um, hc.dim(n - 1)), y[: len(Um)]) if Um else [0] * hc.dim(n - 1), n - 1)


# ---------------------------------------------------------------------------
# linear problems over chain maps


@dataclass
class MapProblem:
    """Find a chain map ``u: S -> T`` subject to ``A_k . u . B_k ~ C_k`` for each k.

    ``~`` is homotopy. Unknowns: ``u`` in ``Hom^0(S, T)`` (numerator lifts)
    and one homotopy per constraint. Constraint ``k`` lives in
    ``Hom^0(S_k, T_k)`` with ``A_k: T -> T_k`` and ``B_k: S_k -> S``.
    """

    source: BoundedComplex
    target: BoundedComplex
    constraints: list        # (A or None, B or None, C)


def solve_map(prob: MapProblem, budget: Budget | None = None):
    """Return ``(u, None)`` or ``(None, failure dict)``."""
    budget = ensure_budget(budget)
    r = prob.source.ring
    hu = HomComplex(prob.source, prob.target)
    Ug = hu.numerator(0)
    nu = len(Ug)
    Gu = from_columns(Ug, hu.dim(0))
    blocks = []       # (name, matrix on u, rhs, denominator gens, homotopy matrix)
    unknown_extra = []
    # chain condition: D u in denominator of Hom^1
    D0 = hu.D(0)
    m1 = hu.dim(1)
    V1 = hu.denominator(1)
    rows_chain = matmul(r, D0, Gu, inner=hu.dim(0), cols=nu) if (m1 and nu) else [[0] * nu for _ in range(m1)]
    blocks.append(("chain", rows_chain, [0] * m1, V1, None))
    for k, (A, B, C) in enumerate(prob.constraints):
        hk = HomComplex(C.source, C.target)
        dim = hk.dim(0)
        cols = []
        for t in range(nu):
            comp = hu.unflatten(Ug[t], 0)
            if B is not None:
                comp = B.then(comp)
            if A is not None:
                comp = comp.then(A)
            cols.append(hk.flatten(comp))
            budget.tick("linear system")
        M = from_columns(cols, dim) if dim else []
        Hm = hk.numerator(-1)
        DH = matmul(r, hk.D(-1), from_columns(Hm, hk.dim(-1)), inner=hk.dim(-1), cols=len(Hm)) if (Hm and dim) else [[] for _ in range(dim)]
        blocks.append((f"constraint[{k}]", M, hk.flatten(C), hk.denominator(0), DH))
        unknown_extra.append(len(Hm))
    total_extra = sum(unknown_extra)
    rows, rhs = [], []
    den_total = sum(len(b[3]) for b in blocks)
    den_off = 0
    names = []
    for bi, (name, M, b, den, DH) in enumerate(blocks):
        nrow = len(b)
        for i in range(nrow):
            row = list(M[i]) if M else [0] * nu
            ext = [0] * total_extra
            if DH is not None:
                k = bi - 1
                off = sum(unknown_extra[:k])
                for j in range(unknown_extra[k]):
                    ext[off + j] = r.neg(DH[i][j])
            dn = [0] * den_total
            for j, v in enumerate(den):
                dn[den_off + j] = v[i]
            rows.append(row + ext + dn)
            rhs.append(b[i])
            names.append(name)
        den_off += len(den)
    ncols = nu + total_extra + den_total
    sol, fail = solve(r, rows, rhs, ncols)
    if sol is None:
        info = fail.as_dict()
        info["system"] = names[fail.bad_row] if fail.bad_row < len(names) else "rank"
        return None, info
    u = hu.unflatten(matmul_vec(r, Gu, sol[:nu]) if nu else [0] * hu.dim(0), 0)
    return u, None
