"""Finite modules, bounded complexes, chain maps, cones and triangles.

A module is ``R^n / (pi^{e_1}, ..., pi^{e_n})``, i.e. ``(+) R/pi^{e_i}``;
``e_i == length`` is a free summand. A morphism ``M -> N`` is a matrix with
``rank N`` rows and ``rank M`` columns, entry ``(i, j)`` reduced mod
``pi^{e_i(N)}``.

Cones use ``d_C = [[-d_X[1], 0], [f[1], d_Y]]`` on ``C^d = X^{d+1} (+) Y^d``; the
triangle is ``X -f-> Y -i-> C(f) -p-> X[1]``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from ..errors import InternalInconsistency
from .linalg import Matrix, block_diag, identity, kernel, mat_neg, matmul, subquotient, zeros
from .rings import CoeffRing


@dataclass(frozen=True)
class FModule:
    ring: CoeffRing
    exps: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "exps", tuple(int(e) for e in self.exps))
        for e in self.exps:
            if not 1 <= e <= self.ring.length:
                raise ValueError(f"factor exponent {e} out of range for {self.ring.name}")

    @property
    def rank(self) -> int:
        return len(self.exps)

    @property
    def invariants(self) -> tuple:
        """Cyclic factor exponents, descending: the normal form."""
        return tuple(sorted(self.exps, reverse=True))

    @property
    def orders(self) -> list[int]:
        return [self.ring.p**e for e in self.invariants]

    @property
    def size(self) -> int:
        return self.ring.p ** sum(self.exps)

    def is_zero(self) -> bool:
        return not self.exps

    def is_free(self) -> bool:
        return all(e == self.ring.length for e in self.exps)

    def isomorphic(self, other: "FModule") -> bool:
        return self.ring == other.ring and self.invariants == other.invariants

    def relations(self) -> list[list]:
        r = self.ring
        out = []
        for i, e in enumerate(self.exps):
            if e < r.length:
                v = [0] * self.rank
                v[i] = r.pow_pi(e)
                out.append(v)
        return out

    def reduce_vec(self, v) -> list:
        return [self.ring.reduce(x, e) for x, e in zip(v, self.exps)]

    def __add__(self, other: "FModule") -> "FModule":
        return FModule(self.ring, self.exps + other.exps)

    def as_dict(self) -> dict:
        return {"factors": [self.ring.p**e for e in self.exps]}


def free(r: CoeffRing, n: int) -> FModule:
    return FModule(r, (r.length,) * n)


def zero_module(r: CoeffRing) -> FModule:
    return FModule(r, ())


def reduce_matrix(src: FModule, tgt: FModule, a: Matrix) -> Matrix:
    r = tgt.ring
    return [[r.reduce(x, e) for x in row] for row, e in zip(a, tgt.exps)] if tgt.rank else []


def hom_valid(src: FModule, tgt: FModule, a: Matrix) -> bool:
    """``a`` kills the relations of ``src`` modulo those of ``tgt``."""
    r = src.ring
    for j, ej in enumerate(src.exps):
        pe = r.pow_pi(ej)
        for i, ei in enumerate(tgt.exps):
            if r.reduce(r.mul(pe, a[i][j]), ei) != 0:
                return False
    return True


def mat_equal(tgt: FModule, a: Matrix, b: Matrix) -> bool:
    """Entrywise congruence modulo the relations of the target."""
    r = tgt.ring
    for row_a, row_b, e in zip(a, b, tgt.exps):
        for x, y in zip(row_a, row_b):
            if r.reduce(r.sub(x, y), e) != 0:
                return False
    return True


def mat_zero(tgt: FModule, a: Matrix) -> bool:
    r = tgt.ring
    return all(r.reduce(x, e) == 0 for row, e in zip(a, tgt.exps) for x in row)


# ---------------------------------------------------------------------------
# complexes


@dataclass(frozen=True, eq=False)
class BoundedComplex:
    """``modules[d]`` in degree ``d``; ``diffs[d]: X^d -> X^{d+1}``."""

    ring: CoeffRing
    modules: dict
    diffs: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        mods = {d: m for d, m in self.modules.items() if not m.is_zero()}
        object.__setattr__(self, "modules", dict(sorted(mods.items())))
        ds = {}
        for d in self.modules:
            if d + 1 in self.modules:
                a = self.diffs.get(d)
                if a is None:
                    a = zeros(self.modules[d + 1].rank, self.modules[d].rank)
                ds[d] = reduce_matrix(self.modules[d], self.modules[d + 1], a)
        object.__setattr__(self, "diffs", ds)

    @property
    def lo(self) -> int:
        return min(self.modules) if self.modules else 0

    @property
    def hi(self) -> int:
        return max(self.modules) if self.modules else -1

    def support(self) -> list[int]:
        return list(self.modules)

    def width(self) -> int:
        return self.hi - self.lo + 1 if self.modules else 0

    def module(self, d: int) -> FModule:
        return self.modules.get(d, FModule(self.ring, ()))

    def rank(self, d: int) -> int:
        return self.module(d).rank

    def d(self, d: int) -> Matrix:
        if d in self.diffs:
            return self.diffs[d]
        return zeros(self.rank(d + 1), self.rank(d))

    def problems(self) -> list[dict]:
        out = []
        for d in self.modules:
            if d in self.diffs and not hom_valid(self.module(d), self.module(d + 1), self.diffs[d]):
                out.append({"law": "differential_not_a_module_map", "degree": d})
            if d in self.diffs and d + 1 in self.diffs:
                dd = matmul(self.ring, self.diffs[d + 1], self.diffs[d], inner=self.rank(d + 1), cols=self.rank(d))
                if not mat_zero(self.module(d + 2), dd):
                    out.append({"law": "d_squared", "degree": d})
        return out

    def is_degreewise_free(self) -> bool:
        return all(m.is_free() for m in self.modules.values())

    def shift(self, n: int = 1) -> "BoundedComplex":
        """``X[n]``: ``X[n]^d = X^{d+n}``, ``d_{X[n]} = (-1)^n d_X``."""
        sign = -1 if n % 2 else 1
        mods = {d - n: m for d, m in self.modules.items()}
        ds = {d - n: (mat_neg(self.ring, a) if sign < 0 else a) for d, a in self.diffs.items()}
        return BoundedComplex(self.ring, mods, ds, name=f"{self.name}[{n}]")

    def same_as(self, other: "BoundedComplex") -> bool:
        return (
            self.ring == other.ring
            and self.modules == other.modules
            and all(mat_equal(self.module(d + 1), self.d(d), other.d(d)) for d in self.modules)
        )

    @cached_property
    def _cohomology(self) -> dict:
        return {d: cohomology_at(self, d) for d in range(self.lo, self.hi + 1)} if self.modules else {}

    def cohomology(self) -> dict:
        """Degree -> FModule in normal form (zero degrees omitted)."""
        return {d: FModule(self.ring, sq.exps) for d, sq in self._cohomology.items() if sq.exps}

    def is_acyclic(self) -> bool:
        return not self.cohomology()

    def as_dict(self) -> dict:
        return {
            "ring": self.ring.as_dict(),
            "degrees": {str(d): m.as_dict() for d, m in self.modules.items()},
            "differentials": {str(d): a for d, a in self.diffs.items()},
        }


def cohomology_at(x: BoundedComplex, d: int):
    """``H^d`` as a subquotient of ``R^{rank X^d}``."""
    r = x.ring
    n = x.rank(d)
    mod = x.module(d)
    nxt = x.module(d + 1)
    # cycles: u with d u in relations(next)
    dm = x.d(d)
    rel_next = nxt.relations()
    big = [list(row) for row in dm] if nxt.rank else []
    if nxt.rank:
        for i, row in enumerate(big):
            row.extend(v[i] for v in rel_next)
    ker = kernel(r, big, n + len(rel_next)) if nxt.rank else identity(n)
    U = [v[:n] for v in ker] + mod.relations()
    prev = x.d(d - 1)
    V = [list(c) for c in zip(*prev)] if x.rank(d - 1) and n else []
    V += mod.relations()
    return subquotient(r, n, U, V)


def complex_from_module(m: FModule, degree: int = 0, name: str = "") -> BoundedComplex:
    return BoundedComplex(m.ring, {degree: m}, {}, name=name)


def direct_sum(x: BoundedComplex, y: BoundedComplex) -> BoundedComplex:
    r = x.ring
    degs = sorted(set(x.modules) | set(y.modules))
    mods = {d: x.module(d) + y.module(d) for d in degs}
    ds = {}
    for d in degs:
        ds[d] = block_diag([(x.d(d), x.rank(d + 1), x.rank(d)), (y.d(d), y.rank(d + 1), y.rank(d))])
    return BoundedComplex(r, mods, ds, name=f"{x.name}+{y.name}")


# ---------------------------------------------------------------------------
# chain maps


@dataclass(frozen=True, eq=False)
class ChainMap:
    """``mats[d]: X^d -> Y^{d + degree}``; ``degree`` is 0 for chain maps."""

    source: BoundedComplex
    target: BoundedComplex
    mats: dict
    degree: int = 0

    def __post_init__(self):
        out = {}
        for d in self.source.modules:
            e = d + self.degree
            if e not in self.target.modules:
                continue
            a = self.mats.get(d)
            if a is None:
                a = zeros(self.target.rank(e), self.source.rank(d))
            out[d] = reduce_matrix(self.source.module(d), self.target.module(e), a)
        object.__setattr__(self, "mats", out)

    @property
    def ring(self) -> CoeffRing:
        return self.source.ring

    def at(self, d: int) -> Matrix:
        if d in self.mats:
            return self.mats[d]
        return zeros(self.target.rank(d + self.degree), self.source.rank(d))

    def problems(self) -> list[dict]:
        out = []
        x, y = self.source, self.target
        for d, a in self.mats.items():
            if not hom_valid(x.module(d), y.module(d + self.degree), a):
                out.append({"law": "component_not_a_module_map", "degree": d})
        if self.degree == 0:
            r = self.ring
            for d in sorted(set(x.modules) | {d - 1 for d in x.modules}):
                lhs = matmul(r, y.d(d), self.at(d), inner=y.rank(d), cols=x.rank(d))
                rhs = matmul(r, self.at(d + 1), x.d(d), inner=x.rank(d + 1), cols=x.rank(d))
                if not mat_equal(y.module(d + 1), lhs, rhs):
                    out.append({"law": "chain_map_commutation", "degree": d})
        return out

    def then(self, g: "ChainMap") -> "ChainMap":
        """``g . self``."""
        r = self.ring
        mats = {}
        for d in self.source.modules:
            e = d + self.degree
            mats[d] = matmul(r, g.at(e), self.at(d), inner=self.target.rank(e), cols=self.source.rank(d))
        return ChainMap(self.source, g.target, mats, self.degree + g.degree)

    def __add__(self, other: "ChainMap") -> "ChainMap":
        r = self.ring
        return ChainMap(self.source, self.target, {d: _madd(r, self.at(d), other.at(d)) for d in self.source.modules}, self.degree)

    def __neg__(self) -> "ChainMap":
        return ChainMap(self.source, self.target, {d: mat_neg(self.ring, a) for d, a in self.mats.items()}, self.degree)

    def __sub__(self, other: "ChainMap") -> "ChainMap":
        return self + (-other)

    def same_as(self, other: "ChainMap") -> bool:
        y = self.target
        return all(mat_equal(y.module(d + self.degree), self.at(d), other.at(d)) for d in self.source.modules)

    def is_zero(self) -> bool:
        y = self.target
        return all(mat_zero(y.module(d + self.degree), a) for d, a in self.mats.items())

    def shift(self, n: int = 1) -> "ChainMap":
        """``f[n]`` between shifted complexes (no sign on components)."""
        return ChainMap(self.source.shift(n), self.target.shift(n), {d - n: a for d, a in self.mats.items()}, self.degree)

    def as_dict(self) -> dict:
        return {str(d): a for d, a in self.mats.items()}


def _madd(r, a, b):
    return [[r.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def identity_map(x: BoundedComplex) -> ChainMap:
    return ChainMap(x, x, {d: identity(x.rank(d)) for d in x.modules})


def zero_map(x: BoundedComplex, y: BoundedComplex, degree: int = 0) -> ChainMap:
    return ChainMap(x, y, {}, degree)


def check_chain_map(f: ChainMap) -> ChainMap:
    bad = f.problems()
    if bad:
        raise InternalInconsistency("constructed map is not a chain map", bad)
    return f


def check_complex(x: BoundedComplex) -> BoundedComplex:
    bad = x.problems()
    if bad:
        raise InternalInconsistency("constructed complex fails d^2 = 0", bad)
    return x


# ---------------------------------------------------------------------------
# cones and triangles


def cone(f: ChainMap) -> BoundedComplex:
    x, y, r = f.source, f.target, f.ring
    degs = sorted({d - 1 for d in x.modules} | set(y.modules))
    mods, ds = {}, {}
    for d in degs:
        mods[d] = x.module(d + 1) + y.module(d)
    for d in degs:
        a, b = x.rank(d + 1), y.rank(d)
        a2, b2 = x.rank(d + 2), y.rank(d + 1)
        m = zeros(a2 + b2, a + b)
        dx = x.d(d + 1)
        for i in range(a2):
            for j in range(a):
                m[i][j] = r.neg(dx[i][j])
        fa = f.at(d + 1)
        for i in range(b2):
            for j in range(a):
                m[a2 + i][j] = fa[i][j]
        dy = y.d(d)
        for i in range(b2):
            for j in range(b):
                m[a2 + i][a + j] = dy[i][j]
        ds[d] = m
    return check_complex(BoundedComplex(r, mods, ds, name=f"C({x.name}->{y.name})"))


@dataclass(frozen=True, eq=False)
class Triangle:
    """``X -f-> Y -g-> Z -h-> X[1]``."""

    X: BoundedComplex
    Y: BoundedComplex
    Z: BoundedComplex
    f: ChainMap
    g: ChainMap
    h: ChainMap          # Z -> X[1]

    def problems(self) -> list[dict]:
        out = []
        for name, m in (("f", self.f), ("g", self.g), ("h", self.h)):
            for p in m.problems():
                out.append({"map": name, **p})
        return out

    def rotate(self) -> "Triangle":
        """``Y -g-> Z -h-> X[1] -(-f[1])-> Y[1]``."""
        return Triangle(self.Y, self.Z, self.X.shift(1), self.g, self.h, -self.f.shift(1))

    def vertices(self) -> tuple:
        return (self.X, self.Y, self.Z)


def triangle_build(f: ChainMap) -> Triangle:
    check_chain_map(f)
    x, y = f.source, f.target
    c = cone(f)
    inc = {}
    proj = {}
    for d in c.modules:
        a, b = x.rank(d + 1), y.rank(d)
        i = zeros(a + b, b)
        for k in range(b):
            i[a + k][k] = 1
        inc[d] = i
        p = zeros(a, a + b)
        for k in range(a):
            p[k][k] = 1
        proj[d] = p
    g = check_chain_map(ChainMap(y, c, {d: inc[d] for d in y.modules if d in c.modules}))
    x1 = x.shift(1)
    h = check_chain_map(ChainMap(c, x1, {d: proj[d] for d in c.modules if d in x1.modules}))
    return Triangle(x, y, c, f, g, h)


def cylinder(f: ChainMap) -> tuple[BoundedComplex, ChainMap, ChainMap, ChainMap]:
    """``(Cyl, alpha: X -> Cyl, beta: Y -> Cyl, pi: Cyl -> Y)``.

    ``Cyl^d = X^{d+1} (+) X^d (+) Y^d`` with
    ``d(x', x, y) = (-d x', x' + d x, -f x' + d y)``; ``pi . beta = id`` and
    ``pi . alpha = f``.
    """
    x, y, r = f.source, f.target, f.ring
    degs = sorted({d - 1 for d in x.modules} | set(x.modules) | set(y.modules))
    mods = {d: x.module(d + 1) + x.module(d) + y.module(d) for d in degs}
    ds = {}
    for d in degs:
        a, b, c = x.rank(d + 1), x.rank(d), y.rank(d)
        a2, b2, c2 = x.rank(d + 2), x.rank(d + 1), y.rank(d + 1)
        m = zeros(a2 + b2 + c2, a + b + c)
        dx1, dx, dy, fa = x.d(d + 1), x.d(d), y.d(d), f.at(d + 1)
        for i in range(a2):
            for j in range(a):
                m[i][j] = r.neg(dx1[i][j])
        for k in range(min(b2, a)):
            m[a2 + k][k] = 1
        for i in range(b2):
            for j in range(b):
                m[a2 + i][a + j] = dx[i][j]
        for i in range(c2):
            for j in range(a):
                m[a2 + b2 + i][j] = r.neg(fa[i][j])
            for j in range(c):
                m[a2 + b2 + i][a + b + j] = dy[i][j]
        ds[d] = m
    cyl = check_complex(BoundedComplex(r, mods, ds, name=f"Cyl({x.name}->{y.name})"))
    alpha, beta, pi = {}, {}, {}
    for d in degs:
        a, b, c = x.rank(d + 1), x.rank(d), y.rank(d)
        al = zeros(a + b + c, b)
        for k in range(b):
            al[a + k][k] = 1
        alpha[d] = al
        be = zeros(a + b + c, c)
        for k in range(c):
            be[a + b + k][k] = 1
        beta[d] = be
        p = zeros(c, a + b + c)
        fd = f.at(d)
        for i in range(c):
            for j in range(b):
                p[i][a + j] = fd[i][j]
            p[i][a + b + i] = 1
        pi[d] = p
    al = check_chain_map(ChainMap(x, cyl, alpha))
    be = check_chain_map(ChainMap(y, cyl, beta))
    pm = check_chain_map(ChainMap(cyl, y, pi))
    return cyl, al, be, pm


def pad(x: BoundedComplex, w: BoundedComplex) -> tuple[BoundedComplex, ChainMap, ChainMap]:
    """``x (+) cone(id_w)`` with the inclusion and projection (a contractible summand)."""
    c = cone(identity_map(w))
    z = direct_sum(x, c)
    inc, proj = {}, {}
    for d in z.modules:
        n, m = x.rank(d), c.rank(d)
        i = zeros(n + m, n)
        p = zeros(n, n + m)
        for k in range(n):
            i[k][k] = 1
            p[k][k] = 1
        inc[d], proj[d] = i, p
    return z, check_chain_map(ChainMap(x, z, inc)), check_chain_map(ChainMap(z, x, proj))


def is_qis(f: ChainMap) -> bool:
    """``cone(f)`` is acyclic."""
    return cone(f).is_acyclic()


def in_null_system(x: BoundedComplex) -> bool:
    return x.is_acyclic()
