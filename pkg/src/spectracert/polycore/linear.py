"""Linear forms and linear substitutions of variables."""

from __future__ import annotations

from typing import Iterable, Mapping

from .multipoly import MultiPoly
from .rational import Number, as_rational, format_rational, parse_rational
from .registry import Var, VarRegistry


class LinearForm:
    """``constant + sum coeff_v * v`` with a sparse, zero-free coefficient map."""

    __slots__ = ("constant", "coeffs")

    def __init__(self, coeffs: Mapping[Var, Number] | None = None, constant: Number = 0):
        self.constant = as_rational(constant)
        self.coeffs: dict[Var, Number] = {}
        for v, c in (coeffs or {}).items():
            c = as_rational(c)
            if c:
                self.coeffs[v] = c

    @classmethod
    def of(cls, v: Var, c: Number = 1) -> "LinearForm":
        return cls({v: c})

    @classmethod
    def sum_of(cls, variables: Iterable[Var], c: Number = 1) -> "LinearForm":
        return cls({v: c for v in variables})

    def is_homogeneous(self) -> bool:
        return self.constant == 0

    def is_zero(self) -> bool:
        return not self.coeffs and not self.constant

    def variables(self) -> list[Var]:
        return list(self.coeffs)

    def __add__(self, other: "LinearForm") -> "LinearForm":
        out = dict(self.coeffs)
        for v, c in other.coeffs.items():
            out[v] = out.get(v, 0) + c
        return LinearForm(out, self.constant + other.constant)

    def __neg__(self) -> "LinearForm":
        return LinearForm({v: -c for v, c in self.coeffs.items()}, -self.constant)

    def __sub__(self, other: "LinearForm") -> "LinearForm":
        return self + (-other)

    def scale(self, c: Number) -> "LinearForm":
        c = as_rational(c)
        return LinearForm({v: a * c for v, a in self.coeffs.items()}, self.constant * c)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.constant == other.constant and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.constant, frozenset(self.coeffs.items())))

    def evaluate(self, point: Mapping[Var, Number]) -> Number:
        acc = self.constant
        for v, c in self.coeffs.items():
            acc += c * point.get(v, 0)
        return acc

    def to_poly(self, registry: VarRegistry) -> MultiPoly:
        terms = {registry.units[registry.index(v)]: c for v, c in self.coeffs.items()}
        if self.constant:
            terms[0] = self.constant
        return MultiPoly(registry, terms)

    def __repr__(self) -> str:
        return f"LinearForm({self})"

    def __str__(self) -> str:
        parts = []
        for v, c in self.coeffs.items():
            if c == 1:
                parts.append(str(v))
            elif c == -1:
                parts.append(f"-{v}")
            else:
                parts.append(f"{format_rational(c)}*{v}")
        if self.constant or not parts:
            parts.append(format_rational(self.constant))
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self, registry: VarRegistry) -> dict:
        return {
            "constant": format_rational(self.constant),
            "coeffs": {str(registry.index(v)): format_rational(c) for v, c in sorted(self.coeffs.items(), key=lambda vc: registry.index(vc[0]))},
        }

    @classmethod
    def from_json(cls, data: dict, registry: VarRegistry) -> "LinearForm":
        coeffs = {}
        for vid, c in data.get("coeffs", {}).items():
            val = parse_rational(c)
            if not val:
                raise ValueError("zero coefficient in serialized linear form")
            coeffs[registry.vars[int(vid)]] = val
        return cls(coeffs, parse_rational(data.get("constant", "0")))


class Substitution:
    """Map from variables to linear forms; unmapped variables map to themselves.

    With ``strict=True`` applying the substitution to a polynomial that uses an
    unmapped variable raises ``KeyError``.
    """

    def __init__(self, images: Mapping[Var, LinearForm], strict: bool = False):
        self.images = dict(images)
        self.strict = strict

    def __getitem__(self, v: Var) -> LinearForm:
        img = self.images.get(v)
        if img is None:
            if self.strict:
                raise KeyError(f"unmapped variable {v}")
            return LinearForm.of(v)
        return img

    def is_homogeneous(self) -> bool:
        return all(f.is_homogeneous() for f in self.images.values())

    def target_variables(self, source: Iterable[Var]) -> list[Var]:
        seen: dict[Var, None] = {}
        for v in source:
            for u in self[v].coeffs:
                seen.setdefault(u, None)
        return list(seen)

    def compose(self, inner: "Substitution") -> "Substitution":
        """``self`` after ``inner``: each ``v`` goes to ``self(inner[v])``."""
        out = {}
        for v, form in inner.images.items():
            acc = LinearForm(constant=form.constant)
            for u, c in form.coeffs.items():
                acc = acc + self[u].scale(c)
            out[v] = acc
        for v, form in self.images.items():
            out.setdefault(v, form)
        return Substitution(out, self.strict and inner.strict)


def apply_substitution(p: MultiPoly, sub: Substitution, target: VarRegistry | None = None) -> MultiPoly:
    """Exact image of ``p`` under a linear change of variables.

    ``target`` defaults to the registry of ``p`` extended by any new variables
    the images mention.
    """
    used = p.variables()
    if target is None:
        extra = [v for v in sub.target_variables(used) if v not in p.registry]
        target = VarRegistry(list(p.registry.vars) + extra) if extra else p.registry
    images = {v: sub[v].to_poly(target) for v in used}
    return p.substitute(images, target, strict=sub.strict)
