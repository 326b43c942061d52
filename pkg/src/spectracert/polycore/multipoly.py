"""Sparse multivariate polynomials with exact rational coefficients."""

from __future__ import annotations

import heapq
import json
import math
from fractions import Fraction
from typing import Iterable, Iterator, Mapping

from .rational import Number, as_rational, div, format_rational, normalize, parse_rational
from .registry import MAX_EXP, RegistryMismatch, Var, VarRegistry
from .univariate import UniPoly


def _int_mul(a: list[int], b: list[int]) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, u in enumerate(a):
        if u:
            for j, w in enumerate(b):
                out[i + j] += u * w
    return out


def _clean(terms: dict) -> dict:
    out = {}
    for k, c in terms.items():
        if c:
            if isinstance(c, Fraction) and c.denominator == 1:
                c = c.numerator
            out[k] = c
    return out


class MultiPoly:
    """Immutable sparse polynomial over a :class:`VarRegistry`.

    ``terms`` maps packed monomial keys to nonzero int/Fraction coefficients.
    """

    __slots__ = ("registry", "terms", "_exps")

    def __init__(self, registry: VarRegistry, terms: Mapping[int, Number] | None = None, *, _trusted: bool = False):
        self.registry = registry
        if terms is None:
            self.terms = {}
        elif _trusted:
            self.terms = terms
        else:
            self.terms = _clean({k: as_rational(c) for k, c in terms.items()})
        self._exps = None

    # --- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, registry: VarRegistry) -> "MultiPoly":
        return cls(registry, {}, _trusted=True)

    @classmethod
    def const(cls, registry: VarRegistry, c) -> "MultiPoly":
        c = as_rational(c)
        return cls(registry, {0: c} if c else {}, _trusted=True)

    @classmethod
    def var(cls, registry: VarRegistry, v: Var | int, power: int = 1) -> "MultiPoly":
        i = v if isinstance(v, int) else registry.index(v)
        if power == 0:
            return cls.const(registry, 1)
        if power > MAX_EXP:
            raise OverflowError("exponent out of range")
        return cls(registry, {registry.units[i] * power: 1}, _trusted=True)

    @classmethod
    def from_terms(cls, registry: VarRegistry, items: Iterable[tuple[Mapping, Number]]) -> "MultiPoly":
        acc: dict[int, Number] = {}
        for exps, c in items:
            k = registry.pack_dict(exps)
            acc[k] = acc.get(k, 0) + as_rational(c)
        return cls(registry, _clean(acc), _trusted=True)

    # --- basic queries --------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> int:
        if not self.terms:
            return -1
        return self.registry.degree_of(max(self.terms))

    def is_homogeneous(self) -> bool:
        if not self.terms:
            return True
        ds = self.registry.deg_shift
        d = next(iter(self.terms)) >> ds
        return all((k >> ds) == d for k in self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> Number:
        return self.terms.get(0, 0)

    def variables(self) -> list[Var]:
        used = [False] * self.registry.n
        for e in self.exponent_vectors():
            for i, x in enumerate(e):
                if x:
                    used[i] = True
        return [v for v, u in zip(self.registry.vars, used) if u]

    def exponent_vectors(self) -> list[tuple[int, ...]]:
        if self._exps is None:
            unpack = self.registry.unpack
            self._exps = [(unpack(k), c) for k, c in self.terms.items()]
        return [e for e, _ in self._exps]

    def _exp_items(self):
        if self._exps is None:
            self.exponent_vectors()
        return self._exps

    def items(self) -> Iterator[tuple[dict[Var, int], Number]]:
        """Yield ``(exponents, coeff)`` in canonical (descending grlex) order."""
        vs = self.registry.vars
        unpack = self.registry.unpack
        for k in sorted(self.terms, reverse=True):
            e = unpack(k)
            yield {vs[i]: x for i, x in enumerate(e) if x}, self.terms[k]

    def coefficient(self, exps: Mapping) -> Number:
        return self.terms.get(self.registry.pack_dict(exps), 0)

    def leading_term(self) -> tuple[int, Number]:
        k = max(self.terms)
        return k, self.terms[k]

    # --- arithmetic -----------------------------------------------------

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            if other.registry != self.registry:
                raise RegistryMismatch("operands live on different registries")
            return other
        return MultiPoly.const(self.registry, other)

    def __add__(self, other) -> "MultiPoly":
        other = self._coerce(other)
        if len(other.terms) > len(self.terms):
            big, small = other.terms, self.terms
        else:
            big, small = self.terms, other.terms
        out = dict(big)
        for k, c in small.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                v += c
                if v:
                    out[k] = normalize(v) if isinstance(v, Fraction) else v
                else:
                    del out[k]
        return MultiPoly(self.registry, out, _trusted=True)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.registry, {k: -c for k, c in self.terms.items()}, _trusted=True)

    def __sub__(self, other) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "MultiPoly":
        return self._coerce(other) - self

    def scale(self, c) -> "MultiPoly":
        c = as_rational(c)
        if not c:
            return MultiPoly.zero(self.registry)
        if c == 1:
            return self
        out = {k: v * c for k, v in self.terms.items()}
        if isinstance(c, Fraction):
            out = _clean(out)
        return MultiPoly(self.registry, out, _trusted=True)

    def __mul__(self, other) -> "MultiPoly":
        if not isinstance(other, MultiPoly):
            return self.scale(other)
        other = self._coerce(other)
        a, b = self.terms, other.terms
        if not a or not b:
            return MultiPoly.zero(self.registry)
        if self.degree() + other.degree() > MAX_EXP:
            raise OverflowError("product degree out of range")
        if len(a) > len(b):
            a, b = b, a
        b_items = list(b.items())
        out: dict[int, Number] = {}
        get = out.get
        for ka, ca in a.items():
            for kb, cb in b_items:
                k = ka + kb
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return MultiPoly(self.registry, _clean(out), _trusted=True)

    def __rmul__(self, other) -> "MultiPoly":
        return self.scale(other)

    def __pow__(self, n: int) -> "MultiPoly":
        if not isinstance(n, int) or n < 0:
            raise ValueError("power must be a non-negative int")
        result = MultiPoly.const(self.registry, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, MultiPoly):
            return self.registry == other.registry and self.terms == other.terms
        try:
            c = as_rational(other)
        except TypeError:
            return NotImplemented
        return self.terms == ({0: c} if c else {})

    def __hash__(self) -> int:
        return hash((self.registry, frozenset(self.terms.items())))

    # --- calculus, evaluation, substitution -----------------------------

    def derivative(self, v: Var | int) -> "MultiPoly":
        reg = self.registry
        i = v if isinstance(v, int) else reg.index(v)
        unit = reg.units[i]
        out = {}
        for e, c in self._exp_items():
            x = e[i]
            if x:
                k = reg.pack(e) - unit
                out[k] = c * x
        return MultiPoly(reg, out, _trusted=True)

    def directional_derivative(self, direction) -> "MultiPoly":
        """``sum_k v_k dp/dx_k``; ``direction`` is a sequence or a Var-keyed mapping."""
        vec = as_point(self.registry, direction)
        out = MultiPoly.zero(self.registry)
        for i, vk in enumerate(vec):
            if vk:
                out = out + self.derivative(i).scale(vk)
        return out

    def evaluate(self, point) -> Number:
        vals = as_point(self.registry, point)
        n = self.registry.n
        cache: list[dict[int, Number]] = [{} for _ in range(n)]
        total: Number = 0
        for e, c in self._exp_items():
            term = c
            for i in range(n):
                x = e[i]
                if x:
                    p = cache[i].get(x)
                    if p is None:
                        p = cache[i][x] = vals[i] ** x
                    term = term * p
                    if not term:
                        break
            total += term
        return normalize(total) if isinstance(total, Fraction) else total

    __call__ = evaluate

    def restrict_line(self, e, x, sign: int = -1) -> UniPoly:
        """Univariate ``t -> p(t*e + sign*x)`` (default ``p(te - x)``)."""
        ev = [Fraction(c) for c in as_point(self.registry, e)]
        xv = [Fraction(c) for c in as_point(self.registry, x)]
        n = self.registry.n
        # clear denominators: work with integer lines D*(sign*x_i + t*e_i), rescale once at the end
        den = math.lcm(*(c.denominator for c in ev + xv), *(Fraction(c).denominator for c in self.terms.values()))
        lines = [[int(sign * xv[i] * den), int(ev[i] * den)] for i in range(n)]
        cache: list[dict[int, list[int]]] = [{1: lines[i]} for i in range(n)]

        def power(i: int, k: int) -> list[int]:
            p = cache[i].get(k)
            if p is None:
                half = power(i, k // 2)
                p = _int_mul(half, half)
                if k % 2:
                    p = _int_mul(p, lines[i])
                cache[i][k] = p
            return p

        top = max(self.degree(), 0)

        def horner(items: list, i: int) -> list[int]:
            # sum of c * prod_{j >= i} line_j^ex_j, grouped on the exponent of variable i
            if i == n:
                return [sum(c for _, c in items)]
            groups: dict[int, list] = {}
            for ex, c in items:
                groups.setdefault(ex[i], []).append((ex, c))
            out: list[int] = [0]
            for k, grp in groups.items():
                part = horner(grp, i + 1)
                if k:
                    part = _int_mul(part, power(i, k))
                if len(part) > len(out):
                    out.extend([0] * (len(part) - len(out)))
                for j, a in enumerate(part):
                    out[j] += a
            return out

        items = [(ex, int(Fraction(c) * den) * den ** (top - sum(ex))) for ex, c in self._exp_items()]
        acc = horner(items, 0) if items else [0]
        scale = den ** (top + 1)
        return UniPoly([Fraction(a, scale) for a in acc])

    def collapse(self, to_t, others: Number = 1) -> UniPoly:
        """Univariate image with every variable in ``to_t`` sent to ``t`` and the rest to ``others``."""
        idx = {i for i, v in enumerate(self.registry.vars) if v in set(to_t)}
        acc: dict[int, Number] = {}
        for ex, c in self._exp_items():
            d = 0
            rest = 0
            for i, x in enumerate(ex):
                if x:
                    if i in idx:
                        d += x
                    else:
                        rest += x
            if rest and others != 1:
                c = c * as_rational(others) ** rest
            acc[d] = acc.get(d, 0) + c
        top = max(acc, default=-1)
        return UniPoly([acc.get(i, 0) for i in range(top + 1)])

    def substitute(self, images: Mapping[Var, "MultiPoly"], target: VarRegistry, strict: bool = False) -> "MultiPoly":
        """Replace each variable by a polynomial over ``target``.

        Unmapped variables map to themselves (they must exist in ``target``)
        unless ``strict`` is set.
        """
        reg = self.registry
        imgs: list[MultiPoly | None] = []
        for i, v in enumerate(reg.vars):
            img = images.get(v)
            if img is None:
                imgs.append(None)
            else:
                if img.registry != target:
                    raise RegistryMismatch("substitution image on wrong registry")
                imgs.append(img)
        cache: list[dict[int, MultiPoly]] = [{} for _ in range(reg.n)]

        def image(i: int) -> MultiPoly:
            if imgs[i] is None:
                v = reg.vars[i]
                if strict:
                    raise KeyError(f"unmapped variable {v}")
                if v not in target:
                    raise KeyError(f"variable {v} missing from target registry")
                imgs[i] = MultiPoly.var(target, v)
            return imgs[i]

        def power(i: int, k: int) -> MultiPoly:
            p = cache[i].get(k)
            if p is None:
                if k == 1:
                    p = image(i)
                else:
                    half = power(i, k // 2)
                    p = half * half
                    if k % 2:
                        p = p * image(i)
                cache[i][k] = p
            return p

        acc: dict[int, Number] = {}
        for ex, c in self._exp_items():
            term = MultiPoly.const(target, c)
            for i, k in enumerate(ex):
                if k:
                    term = term * power(i, k)
                    if not term:
                        break
            for kk, cc in term.terms.items():
                acc[kk] = acc.get(kk, 0) + cc
        return MultiPoly(target, _clean(acc), _trusted=True)

    def embed(self, target: VarRegistry) -> "MultiPoly":
        """Re-express over a registry containing all variables of this one."""
        if target == self.registry:
            return self
        idx = [target.index(v) for v in self.registry.vars]
        out = {}
        for e, c in self._exp_items():
            vec = [0] * target.n
            for i, x in enumerate(e):
                if x:
                    vec[idx[i]] = x
            out[target.pack(vec)] = c
        return MultiPoly(target, out, _trusted=True)

    # --- printing / serialization --------------------------------------

    def __repr__(self) -> str:
        return f"MultiPoly({self})"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exps, c in self.items():
            mono = "*".join(str(v) if e == 1 else f"{v}^{e}" for v, e in exps.items())
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {
            "vars": registry_to_json(self.registry),
            "terms": [
                {"coeff": format_rational(c), "exps": {str(self.registry.index(v)): e for v, e in exps.items()}}
                for exps, c in self.items()
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "MultiPoly":
        reg = registry_from_json(data["vars"])
        acc: dict[int, Number] = {}
        for t in data["terms"]:
            c = parse_rational(t["coeff"])
            if not c:
                raise ValueError("zero coefficient in serialized polynomial")
            vec = [0] * reg.n
            for vid, e in t["exps"].items():
                vec[int(vid)] = int(e)
            k = reg.pack(vec)
            if k in acc:
                raise ValueError("duplicate monomial in serialized polynomial")
            acc[k] = c
        return cls(reg, acc, _trusted=True)

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


def _origin_to_json(o):
    return list(o) if isinstance(o, tuple) else o


def _origin_from_json(o):
    return tuple(o) if isinstance(o, list) else o


def registry_to_json(reg: VarRegistry) -> list[dict]:
    return [{"id": i, "kind": v.kind, "origin": _origin_to_json(v.origin), "name": str(v)} for i, v in enumerate(reg.vars)]


def registry_from_json(items: list[dict]) -> VarRegistry:
    items = sorted(items, key=lambda d: int(d["id"]))
    if [int(d["id"]) for d in items] != list(range(len(items))):
        raise ValueError("variable ids must be 0..n-1")
    return VarRegistry(Var(d["kind"], _origin_from_json(d.get("origin")), d.get("name", "")) for d in items)


def as_point(reg: VarRegistry, point) -> list[Number]:
    if isinstance(point, Mapping):
        vals = [0] * reg.n
        for v, a in point.items():
            vals[v if isinstance(v, int) else reg.index(v)] = as_rational(a)
        return vals
    vals = [as_rational(a) for a in point]
    if len(vals) != reg.n:
        raise ValueError(f"point has {len(vals)} coordinates, registry has {reg.n}")
    return vals


def exact_divide(num: MultiPoly, den: MultiPoly, max_terms: int | None = None) -> MultiPoly | None:
    """Exact quotient ``num / den``, or ``None`` when ``den`` does not divide ``num``.

    Division with remainder under grlex; the first leading term of the running
    remainder that ``LT(den)`` does not divide proves non-divisibility. The
    quotient is checked by one multiplication before being returned.
    ``max_terms`` bounds the working remainder (raises ``MemoryError``).
    """
    if num.registry != den.registry:
        raise RegistryMismatch("operands live on different registries")
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    reg = num.registry
    if num.is_zero():
        return MultiPoly.zero(reg)
    lt_key, lt_c = den.leading_term()
    rest = [(k, c) for k, c in den.terms.items() if k != lt_key]
    g = reg.guard
    rem = dict(num.terms)
    heap = [-k for k in rem]
    heapq.heapify(heap)
    quot: dict[int, Number] = {}
    while heap:
        k = -heapq.heappop(heap)
        c = rem.pop(k, None)
        if c is None:
            continue
        if ((k | g) - lt_key) & g != g:
            return None
        qk = k - lt_key
        qc = div(c, lt_c)
        quot[qk] = qc
        for dk, dc in rest:
            nk = qk + dk
            v = rem.get(nk)
            if v is None:
                rem[nk] = -qc * dc
                heapq.heappush(heap, -nk)
            else:
                v -= qc * dc
                if v:
                    rem[nk] = v
                else:
                    del rem[nk]
        if max_terms is not None and len(rem) > max_terms:
            raise MemoryError("remainder exceeded max_terms")
    q = MultiPoly(reg, _clean(quot), _trusted=True)
    if q * den != num:
        return None
    return q
