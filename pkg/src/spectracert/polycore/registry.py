"""Variables and variable registries.

A registry fixes an ordered tuple of variables. Monomials over a registry are
packed into a single Python int: one 16-bit field per variable (variable 0 in
the most significant field) topped by a total-degree field. With that layout
integer order *is* graded lexicographic order and monomial multiplication is
integer addition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

BITS = 16
MAX_EXP = (1 << (BITS - 1)) - 1  # top bit of each field is a guard bit
_FIELD = (1 << BITS) - 1

KINDS = ("x", "w", "t", "X", "Y")


class RegistryMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Var:
    kind: str
    origin: Hashable = None
    name: str = field(default="", compare=False)

    def __str__(self) -> str:
        if self.name:
            return self.name
        if self.origin is None:
            return self.kind
        if isinstance(self.origin, tuple):
            return f"{self.kind.lower()}_{''.join(str(o) for o in self.origin)}"
        return f"{self.kind}_{self.origin}"


class VarRegistry:
    """Immutable ordered set of variables; ids are positions."""

    __slots__ = ("vars", "_index", "n", "deg_shift", "guard", "units", "_hash")

    def __init__(self, variables: Iterable[Var]):
        self.vars: tuple[Var, ...] = tuple(variables)
        self._index = {v: i for i, v in enumerate(self.vars)}
        if len(self._index) != len(self.vars):
            raise ValueError("duplicate variable in registry")
        n = self.n = len(self.vars)
        self.deg_shift = n * BITS
        self.guard = sum(1 << (BITS - 1 + BITS * j) for j in range(n + 1))
        self.units = tuple((1 << self.deg_shift) + (1 << ((n - 1 - i) * BITS)) for i in range(n))
        self._hash = hash(self.vars)

    def __len__(self) -> int:
        return self.n

    def __iter__(self):
        return iter(self.vars)

    def __contains__(self, v: Var) -> bool:
        return v in self._index

    def __eq__(self, other) -> bool:
        if self is other:
            return True
        return isinstance(other, VarRegistry) and self.vars == other.vars

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"VarRegistry({', '.join(str(v) for v in self.vars)})"

    def index(self, v: Var) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"variable {v} not in registry") from None

    def find(self, kind: str, origin: Hashable = None) -> Var:
        return self.vars[self.index(Var(kind, origin))]

    def of_kind(self, kind: str) -> list[Var]:
        return [v for v in self.vars if v.kind == kind]

    # --- monomial packing -------------------------------------------------

    def pack(self, exps: Sequence[int]) -> int:
        n = self.n
        key = 0
        deg = 0
        for i, e in enumerate(exps):
            if e:
                if e < 0 or e > MAX_EXP:
                    raise OverflowError(f"exponent {e} out of range")
                key += e << ((n - 1 - i) * BITS)
                deg += e
        if deg > MAX_EXP:
            raise OverflowError("total degree out of range")
        return key + (deg << self.deg_shift)

    def pack_dict(self, exps: dict) -> int:
        vec = [0] * self.n
        for v, e in exps.items():
            vec[v if isinstance(v, int) else self.index(v)] += e
        return self.pack(vec)

    def unpack(self, key: int) -> tuple[int, ...]:
        n = self.n
        return tuple((key >> ((n - 1 - i) * BITS)) & _FIELD for i in range(n))

    def degree_of(self, key: int) -> int:
        return key >> self.deg_shift

    def divides(self, small: int, big: int) -> bool:
        g = self.guard
        return ((big | g) - small) & g == g

    def union(self, other: "VarRegistry") -> "VarRegistry":
        if other == self:
            return self
        return VarRegistry(list(self.vars) + [v for v in other.vars if v not in self._index])
