"""Free resolutions on either side and derived Hom by two routes.

Over a finite chain ring a free module is both projective and injective,
so a bounded degreewise-free complex is K-injective and K-projective.

* ``injective_resolution(y, top)`` builds ``psi: y -> I`` upward, making
  ``cone(psi)`` exact one degree at a time: ``I^d`` is a free hull of the
  cokernel of ``I^{d-2} (+) Y^{d-1} -> I^{d-1} (+) Y^d``. Above ``hi(y)``
  the resolution need not stop, so it is cut off (brutally) at ``top``;
  ``psi`` is then a quasi-isomorphism only in degrees below ``top``.
* ``projective_resolution(x, bottom)`` builds ``phi: P -> x`` downward,
  ``P^d`` a minimal free cover of the cycles of ``cone(phi)`` in degree
  ``d``. It is cut off below ``bottom``.

``derived_hom(x, y, n)`` computes ``Hom_D(x, y[n])`` as
``H^n Hom(x, I(y))`` and as ``H^n Hom(P(x), y)`` and compares the two.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..errors import InternalInconsistency
from .complexes import BoundedComplex, ChainMap, FModule, complex_from_module, free, identity_map
from .homotopy import HomotopyClasses, homotopy_classes
from .linalg import from_columns, kernel, snf, subquotient


@dataclass
class Resolution:
    """``complex`` with ``qis`` (``y -> I`` or ``P -> x``), exact within ``window``."""

    complex: BoundedComplex
    qis: ChainMap
    window: tuple           # (lo, hi) degrees where the map is a quasi-isomorphism
    trivial: bool = False   # the input was already degreewise free

    def as_dict(self) -> dict:
        return {
            "complex": self.complex.as_dict(),
            "window": list(self.window),
            "trivial": self.trivial,
        }


def _rel_cols(m: FModule) -> list:
    return m.relations()


def injective_resolution(y: BoundedComplex, top: int) -> Resolution:
    """Free ``I`` and ``psi: y -> I``; exact below ``top``, ``I^d = 0`` past it."""
    r = y.ring
    if y.is_degreewise_free():
        return Resolution(y, identity_map(y), (None, None), trivial=True)
    L = r.length
    if not y.modules:
        return Resolution(y, identity_map(y), (None, None), trivial=True)
    start = y.lo
    I_rank: dict[int, int] = {}
    dI: dict[int, list] = {}       # d -> matrix I^d -> I^{d+1}
    psi: dict[int, list] = {}      # d -> matrix Y^d -> I^d
    for d in range(start, top + 1):
        a_prev = I_rank.get(d - 1, 0)
        y_d = y.rank(d)
        m = a_prev + y_d
        if m == 0:
            I_rank[d] = 0
            continue
        # columns of alpha: images of I^{d-2}, Y^{d-1}, plus relations of Y^d
        cols = []
        a2 = I_rank.get(d - 2, 0)
        for j in range(a2):
            top_part = [dI[d - 2][i][j] for i in range(a_prev)] if a_prev else []
            cols.append(top_part + [0] * y_d)
        for j in range(y.rank(d - 1)):
            top_part = [psi[d - 1][i][j] for i in range(a_prev)] if a_prev else []
            low = [r.neg(y.d(d - 1)[i][j]) for i in range(y_d)]
            cols.append(top_part + low)
        for v in _rel_cols(y.module(d)):
            cols.append([0] * a_prev + v)
        A = from_columns(cols, m)
        s = snf(r, A, len(cols))
        rows = []
        for i in range(m):
            e = s.diag[i] if i < s.rank else L
            if e == 0:
                continue
            c = r.pow_pi(L - e)
            rows.append([r.mul(c, x) for x in s.P[i]])
        k = len(rows)
        I_rank[d] = k
        if k:
            dI[d - 1] = [row[:a_prev] for row in rows]
            psi[d] = [row[a_prev:] for row in rows]
    mods = {d: free(r, n) for d, n in I_rank.items() if n}
    diffs = {d: mat for d, mat in dI.items() if I_rank.get(d, 0) and I_rank.get(d + 1, 0)}
    I = BoundedComplex(r, mods, diffs, name=f"I({y.name})")
    q = ChainMap(y, I, psi)
    return Resolution(I, q, (None, top))


def projective_resolution(x: BoundedComplex, bottom: int) -> Resolution:
    """Free ``P`` and ``phi: P -> x``; exact above ``bottom``, ``P^d = 0`` below it."""
    r = x.ring
    if x.is_degreewise_free() or not x.modules:
        return Resolution(x, identity_map(x), (None, None), trivial=True)
    P_rank: dict[int, int] = {}
    dP: dict[int, list] = {}       # d -> matrix P^d -> P^{d+1}
    phi: dict[int, list] = {}      # d -> matrix P^d -> X^d
    for d in range(x.hi, bottom - 1, -1):
        b = P_rank.get(d + 1, 0)
        xd = x.rank(d)
        n = b + xd
        if n == 0:
            P_rank[d] = 0
            continue
        # cycles: d_P p == 0 in P^{d+2}, phi p == d_X x in X^{d+1}
        c = P_rank.get(d + 2, 0)
        x1 = x.rank(d + 1)
        rels1 = _rel_cols(x.module(d + 1))
        rows = []
        for i in range(c):
            rows.append([dP[d + 1][i][j] for j in range(b)] + [0] * xd + [0] * len(rels1))
        for i in range(x1):
            ph = [phi[d + 1][i][j] for j in range(b)] if b else []
            dx = [r.neg(x.d(d)[i][j]) for j in range(xd)]
            rows.append(ph + dx + [v[i] for v in rels1])
        width = n + len(rels1)
        ker = kernel(r, rows, width) if rows else [[1 if i == j else 0 for i in range(width)] for j in range(width)]
        U = [v[:n] for v in ker]
        V = [[0] * b + v for v in _rel_cols(x.module(d))]
        dxm = x.d(d - 1)
        for j in range(x.rank(d - 1)):
            V.append([0] * b + [dxm[i][j] for i in range(xd)])
        sq = subquotient(r, n, U + V, V)
        gens = sq.reps
        k = len(gens)
        P_rank[d] = k
        if k:
            G = from_columns(gens, n)
            dP[d] = G[:b]
            phi[d] = G[b:]
    mods = {d: free(r, k) for d, k in P_rank.items() if k}
    diffs = {d: mat for d, mat in dP.items() if P_rank.get(d, 0) and P_rank.get(d + 1, 0)}
    P = BoundedComplex(r, mods, diffs, name=f"P({x.name})")
    q = ChainMap(P, x, phi)
    return Resolution(P, q, (bottom, None))


@dataclass
class DerivedHom:
    n: int
    factors: list
    size: int
    routes: dict = field(default_factory=dict)    # route -> factors
    agree: bool = True
    classes: HomotopyClasses | None = None        # route A classes

    @property
    def p(self) -> int:
        return self.classes.hom.ring.p if self.classes else 1

    def as_dict(self) -> dict:
        p = self.p
        return {
            "degree": self.n,
            "factors": [p**e for e in self.factors],
            "size": self.size,
            "routes": {k: [p**e for e in v] for k, v in self.routes.items()},
            "agree": self.agree,
        }


def injective_top(x: BoundedComplex, n: int, margin: int = 0) -> int:
    return (x.hi if x.modules else 0) + n + 2 + margin


def projective_bottom(y: BoundedComplex, n: int, margin: int = 0) -> int:
    return (y.lo if y.modules else 0) - n - 2 - margin


def derived_hom(x: BoundedComplex, y: BoundedComplex, n: int = 0, margin: int = 0, check: bool = True) -> DerivedHom:
    """``Hom_D(x, y[n])`` through an injective and a projective resolution."""
    ires = injective_resolution(y, injective_top(x, n, margin))
    a = homotopy_classes(x, ires.complex, n)
    pres = projective_resolution(x, projective_bottom(y, n, margin))
    b = homotopy_classes(pres.complex, y, n)
    fa, fb = sorted(a.exps, reverse=True), sorted(b.exps, reverse=True)
    out = DerivedHom(n, fa, a.size, {"injective": fa, "projective": fb}, fa == fb, a)
    if check and not out.agree:
        raise InternalInconsistency(
            "derived Hom differs between resolutions",
            [{"degree": n, "injective": fa, "projective": fb}],
        )
    return out


def ext(m: FModule, nmod: FModule, n: int, margin: int = 0) -> DerivedHom:
    """``Ext^n(m, nmod)`` for modules placed in degree 0."""
    return derived_hom(complex_from_module(m, 0, "M"), complex_from_module(nmod, 0, "N"), n, margin)
