"""Linear algebra over a finite chain ring.

Matrices are lists of rows of encoded ring elements. Smith normal form
picks, in the remaining block, an entry of minimal ``pi``-adic valuation
(first in row-major order on ties); in a chain ring it divides every other
entry, so a single pivot clears its row and column.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .rings import CoeffRing

Matrix = list  # list[list[int]]


def zeros(m: int, n: int) -> Matrix:
    return [[0] * n for _ in range(m)]


def identity(n: int) -> Matrix:
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def shape(a: Matrix, cols: int | None = None) -> tuple[int, int]:
    return len(a), (len(a[0]) if a else (cols or 0))


def matmul(r: CoeffRing, a: Matrix, b: Matrix, inner: int | None = None, cols: int | None = None) -> Matrix:
    """``a @ b``; ``inner``/``cols`` give dimensions when a factor has no rows."""
    m = len(a)
    k = len(b) if b else (inner or 0)
    n = len(b[0]) if b else (cols or 0)
    out = zeros(m, n)
    for i in range(m):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x == 0:
                continue
            bt = b[t]
            for j in range(n):
                y = bt[j]
                if y:
                    oi[j] = r.add(oi[j], r.mul(x, y))
    return out


def matvec(r: CoeffRing, a: Matrix, v: list) -> list:
    return [_dot(r, row, v) for row in a]


def _dot(r: CoeffRing, u, v) -> int:
    s = 0
    for x, y in zip(u, v):
        if x and y:
            s = r.add(s, r.mul(x, y))
    return s


def mat_add(r: CoeffRing, a: Matrix, b: Matrix) -> Matrix:
    return [[r.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_neg(r: CoeffRing, a: Matrix) -> Matrix:
    return [[r.neg(x) for x in row] for row in a]


def mat_sub(r: CoeffRing, a: Matrix, b: Matrix) -> Matrix:
    return mat_add(r, a, mat_neg(r, b))


def scale(r: CoeffRing, c: int, a: Matrix) -> Matrix:
    return [[r.mul(c, x) for x in row] for row in a]


def transpose(a: Matrix, cols: int = 0) -> Matrix:
    if not a:
        return [[] for _ in range(cols)]
    return [list(col) for col in zip(*a)]


def columns(a: Matrix, n: int | None = None) -> list[list]:
    return transpose(a, n or 0)


def from_columns(cols: list[list], m: int) -> Matrix:
    if not cols:
        return [[] for _ in range(m)]
    return [list(row) for row in zip(*cols)]


def hstack(blocks: list[Matrix], m: int) -> Matrix:
    out = [[] for _ in range(m)]
    for b in blocks:
        for i in range(m):
            out[i].extend(b[i])
    return out


def block_diag(blocks: list[tuple[Matrix, int, int]]) -> Matrix:
    """Block-diagonal matrix from ``(block, rows, cols)`` triples."""
    m = sum(b[1] for b in blocks)
    n = sum(b[2] for b in blocks)
    out = zeros(m, n)
    ro = co = 0
    for b, bm, bn in blocks:
        for i in range(bm):
            for j in range(bn):
                out[ro + i][co + j] = b[i][j]
        ro += bm
        co += bn
    return out


def is_zero(a: Matrix) -> bool:
    return all(x == 0 for row in a for x in row)


# ---------------------------------------------------------------------------
# Smith normal form


@dataclass
class SNF:
    """``P A Q == D`` with ``D`` diagonal (entries ``pi^v``), ``P``, ``Q`` invertible."""

    ring: CoeffRing
    m: int
    n: int
    diag: list            # valuations of the diagonal entries (length ``rank``)
    P: Matrix
    Pinv: Matrix
    Q: Matrix
    Qinv: Matrix

    @property
    def rank(self) -> int:
        return len(self.diag)


def snf(r: CoeffRing, a: Matrix, n: int | None = None) -> SNF:
    m = len(a)
    n = len(a[0]) if a else (n or 0)
    A = [list(row) for row in a]
    P, Pinv, Q, Qinv = identity(m), identity(m), identity(n), identity(n)
    diag = []
    L = r.length
    for t in range(min(m, n)):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x:
                    v = r.val(x)
                    if best is None or v < best[0]:
                        best = (v, i, j)
                        if v == 0:
                            break
            if best is not None and best[0] == 0:
                break
        if best is None:
            break
        v, i, j = best
        if i != t:
            A[i], A[t] = A[t], A[i]
            P[i], P[t] = P[t], P[i]
            for row in Pinv:
                row[i], row[t] = row[t], row[i]
        if j != t:
            for row in A:
                row[j], row[t] = row[t], row[j]
            for row in Q:
                row[j], row[t] = row[t], row[j]
            Qinv[j], Qinv[t] = Qinv[t], Qinv[j]
        # normalize the pivot to pi^v by scaling column t with a unit
        _, u = r.split(A[t][t])
        ui = r.inv(u)
        if ui != 1:
            for row in A:
                row[t] = r.mul(row[t], ui)
            for row in Q:
                row[t] = r.mul(row[t], ui)
            Qinv[t] = [r.mul(u, x) for x in Qinv[t]]
        piv = A[t][t]
        # clear column t
        for i2 in range(t + 1, m):
            x = A[i2][t]
            if x == 0:
                continue
            c = r.divide(x, piv)
            A[i2] = [r.sub(y, r.mul(c, z)) for y, z in zip(A[i2], A[t])]
            P[i2] = [r.sub(y, r.mul(c, z)) for y, z in zip(P[i2], P[t])]
            for row in Pinv:
                row[t] = r.add(row[t], r.mul(c, row[i2]))
        # clear row t
        for j2 in range(t + 1, n):
            x = A[t][j2]
            if x == 0:
                continue
            c = r.divide(x, piv)
            for row in A:
                row[j2] = r.sub(row[j2], r.mul(c, row[t]))
            for row in Q:
                row[j2] = r.sub(row[j2], r.mul(c, row[t]))
            Qinv[t] = [r.add(y, r.mul(c, z)) for y, z in zip(Qinv[t], Qinv[j2])]
        diag.append(v)
        if v >= L:
            diag.pop()
            break
    return SNF(r, m, n, diag, P, Pinv, Q, Qinv)


def kernel(r: CoeffRing, a: Matrix, n: int | None = None) -> list[list]:
    """Generators of ``{x : a x == 0}`` as vectors of length ``n``."""
    n = len(a[0]) if a else (n or 0)
    s = snf(r, a, n)
    L = r.length
    gens = []
    qcols = columns(s.Q, n)
    for i in range(n):
        if i < s.rank:
            v = s.diag[i]
            if v == 0:
                continue
            c = r.pow_pi(L - v)
            gens.append([r.mul(c, x) for x in qcols[i]])
        else:
            gens.append(list(qcols[i]))
    return gens


@dataclass
class SolveFailure:
    rank: int
    rows: int
    cols: int
    bad_row: int
    needed: int
    available: int

    def as_dict(self) -> dict:
        return {
            "rank": self.rank,
            "rows": self.rows,
            "cols": self.cols,
            "inconsistent_row": self.bad_row,
            "rhs_valuation": self.needed,
            "pivot_valuation": self.available,
        }


def solve(r: CoeffRing, a: Matrix, b: list, n: int | None = None) -> tuple[list | None, SolveFailure | None]:
    """A solution ``x`` of ``a x == b`` or a failure record with rank data."""
    m = len(a)
    n = len(a[0]) if a else (n or 0)
    s = snf(r, a, n)
    pb = matvec(r, s.P, b) if m else []
    z = [0] * n
    for i in range(m):
        if i < s.rank:
            c = r.divide(pb[i], r.pow_pi(s.diag[i]))
            if c is None:
                return None, SolveFailure(s.rank, m, n, i, r.val(pb[i]), s.diag[i])
            z[i] = c
        elif pb[i] != 0:
            return None, SolveFailure(s.rank, m, n, i, r.val(pb[i]), r.length)
    return matvec(r, s.Q, z) if n else [], None


# ---------------------------------------------------------------------------
# subquotients of free modules


@dataclass
class Subquotient:
    """``U / V`` for submodules ``V <= U`` of ``R^n`` given by generators.

    ``exps`` lists the cyclic factors ``R/pi^e`` (descending); ``coords``
    sends an element of ``U`` to its coordinates in that decomposition and
    ``reps`` are representatives in ``R^n`` of the standard generators.
    """

    ring: CoeffRing
    n: int
    U: list
    V: list
    exps: list = field(default_factory=list)
    _snf: SNF | None = None
    _keep: list = field(default_factory=list)
    reps: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return self.ring.p ** sum(self.exps)

    def lift(self, u: list) -> list | None:
        """Coefficients ``y`` with ``sum y_i U_i == u`` (``None`` if ``u`` is not in U)."""
        G = from_columns(self.U, self.n)
        y, _ = solve(self.ring, G, list(u), len(self.U))
        return y

    def coords(self, u: list) -> tuple:
        y = self.lift(u)
        if y is None:
            raise ValueError("element is not in the subquotient's numerator")
        py = matvec(self.ring, self._snf.P, y) if y else []
        return tuple(self.ring.reduce(py[i], e) for i, e in zip(self._keep, self.exps))

    def contains(self, u: list) -> bool:
        return self.lift(u) is not None

    def is_zero_class(self, u: list) -> bool:
        return all(c == 0 for c in self.coords(u))

    def element(self, coords) -> list:
        """A representative in ``R^n`` of the class with the given coordinates."""
        r = self.ring
        out = [0] * self.n
        for c, rep in zip(coords, self.reps):
            if c:
                out = [r.add(x, r.mul(c, y)) for x, y in zip(out, rep)]
        return out

    def elements(self):
        from itertools import product

        r = self.ring
        ranges = [[x for x in r.elements() if r.reduce(x, e) == x] for e in self.exps]
        for cs in product(*ranges):
            yield cs


def subquotient(r: CoeffRing, n: int, U: list, V: list) -> Subquotient:
    """Structure of ``U/V``; ``V`` must lie in ``U``."""
    U = [list(u) for u in U]
    a = len(U)
    G = from_columns(U, n)
    # relations among the generators of U, plus lifts of V
    rel = kernel(r, G, a) if a else []
    for v in V:
        y, _ = solve(r, G, list(v), a)
        if y is None:
            raise ValueError("denominator is not contained in the numerator")
        rel.append(y)
    M = from_columns(rel, a)
    s = snf(r, M, len(rel))
    L = r.length
    exps, keep = [], []
    for i in range(a):
        e = s.diag[i] if i < s.rank else L
        if e > 0:
            exps.append(e)
            keep.append(i)
    # descending normal form: stable sort by exponent
    order = sorted(range(len(exps)), key=lambda t: -exps[t])
    exps = [exps[t] for t in order]
    keep = [keep[t] for t in order]
    pinv_cols = columns(s.Pinv, a)
    reps = [matvec(r, G, pinv_cols[i]) if a else [] for i in keep]
    return Subquotient(r, n, U, [list(v) for v in V], exps, s, keep, reps)


def normal_form(r: CoeffRing, a: Matrix, n: int | None = None) -> dict:
    """Kernel, image and cokernel of ``a: R^n -> R^m`` in cyclic normal form."""
    m = len(a)
    n = len(a[0]) if a else (n or 0)
    s = snf(r, a, n)
    L = r.length
    image = sorted((L - v for v in s.diag if v < L), reverse=True)
    coker = sorted([v for v in s.diag if v > 0] + [L] * (m - s.rank), reverse=True)
    ker = sorted([v for v in s.diag if v > 0] + [L] * (n - s.rank), reverse=True)
    return {"kernel": ker, "image": image, "cokernel": coker, "rank": s.rank, "diagonal": list(s.diag)}
