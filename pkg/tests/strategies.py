"""Hypothesis strategies shared by the test modules."""

from __future__ import annotations

from hypothesis import strategies as st

from locfrac.fincat import poset_category
from locfrac.multsys import MorphismClass
from locfrac.trider.complexes import BoundedComplex, ChainMap, FModule
from locfrac.trider.rings import CoeffRing

SMALL_RINGS = [
    CoeffRing("cyclic", 2, 2),
    CoeffRing("cyclic", 2, 3),
    CoeffRing("cyclic", 3, 2),
    CoeffRing("dual", 2),
    CoeffRing("field", 2),
    CoeffRing("field", 3),
]
TINY_RINGS = [CoeffRing("cyclic", 2, 2), CoeffRing("dual", 2), CoeffRing("field", 2)]

rings = st.sampled_from(SMALL_RINGS)
tiny_rings = st.sampled_from(TINY_RINGS)


def elements(r: CoeffRing):
    return st.integers(0, r.size - 1).map(r.norm)


def matrices(r: CoeffRing, m: int, n: int):
    return st.lists(st.lists(elements(r), min_size=n, max_size=n), min_size=m, max_size=m)


@st.composite
def modules(draw, r: CoeffRing, max_rank: int = 2, allow_zero: bool = True):
    k = draw(st.integers(0 if allow_zero else 1, max_rank))
    return FModule(r, tuple(draw(st.integers(1, r.length)) for _ in range(k)))


@st.composite
def homs(draw, src: FModule, tgt: FModule):
    """A random module map ``src -> tgt`` (entries scaled so the map is well defined)."""
    r = src.ring
    out = []
    for ei in tgt.exps:
        row = []
        for ej in src.exps:
            a = draw(elements(r))
            row.append(r.reduce(r.mul(a, r.pow_pi(max(0, ei - ej))), ei))
        out.append(row)
    return out


@st.composite
def two_term(draw, r: CoeffRing, lo: int = 0, max_rank: int = 2):
    """``M0 -> M1`` placed in degrees ``lo, lo + 1``."""
    m0 = draw(modules(r, max_rank, allow_zero=False))
    m1 = draw(modules(r, max_rank, allow_zero=False))
    return BoundedComplex(r, {lo: m0, lo + 1: m1}, {lo: draw(homs(m0, m1))})


@st.composite
def free_two_term(draw, r: CoeffRing, lo: int = 0, max_rank: int = 2):
    a, b = draw(st.integers(1, max_rank)), draw(st.integers(1, max_rank))
    m0, m1 = FModule(r, (r.length,) * a), FModule(r, (r.length,) * b)
    return BoundedComplex(r, {lo: m0, lo + 1: m1}, {lo: draw(homs(m0, m1))})


@st.composite
def degree_zero_maps(draw, x: BoundedComplex, y: BoundedComplex):
    """A random degree-0 chain map between two-term complexes, or ``None``."""
    mats = {d: draw(homs(x.module(d), y.module(d))) for d in x.modules if y.module(d).rank}
    f = ChainMap(x, y, mats)
    return None if f.problems() else f


@st.composite
def posets(draw, max_n: int = 4):
    n = draw(st.integers(1, max_n))
    names = [str(i) for i in range(n)]
    pairs = [(names[i], names[j]) for i in range(n) for j in range(i + 1, n)]
    leq = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return poset_category(names, leq, name="P")


@st.composite
def poset_systems(draw, max_n: int = 4):
    c = draw(posets(max_n))
    gens = [m.id for m in c.morphisms if m.id not in set(c.identities.values())]
    chosen = draw(st.lists(st.sampled_from(gens), unique=True)) if gens else []
    return MorphismClass.generated(c, chosen, name="S")
