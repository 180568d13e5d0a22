"""Finite chain rings: ``Z/p^k``, ``F_p[e]/(e^2)`` and ``F_p``.

Each is local with principal maximal ideal ``(pi)`` and length ``L``
(``pi^L == 0``), so every element is ``unit * pi^v``. Elements are encoded
as ints: residues mod ``p^k``; ``a + p*b`` for ``a + b e``; residues mod ``p``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

KINDS = ("cyclic", "dual", "field")


@dataclass(frozen=True)
class CoeffRing:
    kind: str
    p: int
    k: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown ring kind {self.kind!r}")
        if self.p < 2 or any(self.p % q == 0 for q in range(2, int(self.p**0.5) + 1)):
            raise ValueError(f"p={self.p} is not prime")
        if self.kind == "cyclic" and self.k < 1:
            raise ValueError("k must be positive")
        if self.kind != "cyclic":
            object.__setattr__(self, "k", 1 if self.kind == "field" else 2)

    @property
    def name(self) -> str:
        if self.kind == "cyclic":
            return f"Z/{self.p ** self.k}"
        if self.kind == "dual":
            return f"F_{self.p}[e]"
        return f"F_{self.p}"

    @cached_property
    def length(self) -> int:
        return {"cyclic": self.k, "dual": 2, "field": 1}[self.kind]

    @cached_property
    def size(self) -> int:
        return self.p**self.length

    @property
    def pi(self) -> int:
        return {"cyclic": self.p % self.size, "dual": self.p, "field": 0}[self.kind]

    def elements(self) -> range:
        return range(self.size)

    def norm(self, a: int) -> int:
        return a % self.size if self.kind != "dual" else (a % self.p) + self.p * ((a // self.p) % self.p)

    def from_int(self, n: int) -> int:
        """The image of the integer ``n``."""
        return n % self.p if self.kind == "dual" else n % self.size

    # arithmetic

    def add(self, a: int, b: int) -> int:
        if self.kind == "dual":
            p = self.p
            return (a % p + b % p) % p + p * ((a // p + b // p) % p)
        return (a + b) % self.size

    def neg(self, a: int) -> int:
        if self.kind == "dual":
            p = self.p
            return (-(a % p)) % p + p * ((-(a // p)) % p)
        return (-a) % self.size

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.kind == "dual":
            p = self.p
            a0, a1, b0, b1 = a % p, a // p, b % p, b // p
            return (a0 * b0) % p + p * ((a0 * b1 + a1 * b0) % p)
        return (a * b) % self.size

    def pow_pi(self, v: int) -> int:
        if v >= self.length:
            return 0
        out = 1
        for _ in range(v):
            out = self.mul(out, self.pi)
        return out

    def val(self, a: int) -> int:
        """``pi``-adic valuation; ``length`` for zero."""
        if a == 0:
            return self.length
        if self.kind == "dual":
            return 0 if a % self.p else 1
        if self.kind == "field":
            return 0
        v = 0
        while a % self.p == 0:
            a //= self.p
            v += 1
        return v

    def is_unit(self, a: int) -> bool:
        return a != 0 and self.val(a) == 0

    def inv(self, a: int) -> int:
        if not self.is_unit(a):
            raise ZeroDivisionError(f"{a} is not a unit of {self.name}")
        if self.kind == "dual":
            p = self.p
            a0, a1 = a % p, a // p
            i0 = pow(a0, -1, p)
            return i0 + p * ((-a1 * i0 * i0) % p)
        return pow(a, -1, self.size)

    def split(self, a: int) -> tuple[int, int]:
        """``(v, u)`` with ``a == u * pi^v`` and ``u`` a unit (``u = 1`` for zero)."""
        v = self.val(a)
        if v >= self.length:
            return self.length, 1
        if self.kind == "dual":
            return (0, a) if v == 0 else (1, a // self.p)
        if self.kind == "field":
            return 0, a
        return v, (a // self.p**v) % self.size or 1

    def divide(self, a: int, b: int) -> int | None:
        """Some ``c`` with ``b * c == a``, or ``None``."""
        va, ua = self.split(a)
        vb, ub = self.split(b)
        if a == 0:
            return 0
        if va < vb:
            return None
        return self.mul(self.mul(ua, self.inv(ub)), self.pow_pi(va - vb))

    def reduce(self, a: int, e: int) -> int:
        """Canonical representative of ``a`` modulo ``pi^e``."""
        if e >= self.length:
            return a
        if e <= 0:
            return 0
        if self.kind == "dual":        # e == 1
            return a % self.p
        return a % (self.p**e)

    def residue_field_size(self) -> int:
        return self.p

    def as_dict(self) -> dict:
        return {"kind": self.kind, "p": self.p, "k": self.k}


def ring_from_spec(spec) -> CoeffRing:
    """Accept ``{kind, p, k}`` or short names such as ``z4``, ``f2``, ``f2e``."""
    if isinstance(spec, CoeffRing):
        return spec
    if isinstance(spec, dict):
        return CoeffRing(spec["kind"], int(spec["p"]), int(spec.get("k", 1)))
    s = str(spec).lower()
    if s.startswith("z"):
        n = int(s[1:])
        for p in range(2, n + 1):
            if n % p == 0:
                k, m = 0, n
                while m % p == 0:
                    m //= p
                    k += 1
                if m != 1:
                    raise ValueError(f"{spec}: not a prime power")
                return CoeffRing("cyclic", p, k)
    if s.startswith("f") and s.endswith("e"):
        return CoeffRing("dual", int(s[1:-1]))
    if s.startswith("f"):
        return CoeffRing("field", int(s[1:]))
    raise ValueError(f"unknown ring {spec!r}")
