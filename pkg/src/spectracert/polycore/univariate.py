"""Dense univariate polynomials and Sturm-based real root isolation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .rational import Number, as_rational, format_rational, normalize

ISOLATION_WIDTH = Fraction(1, 1 << 32)


class UniPoly:
    """Coefficients stored low degree first; trailing zeros stripped."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs: tuple[Number, ...] = tuple(cs)

    @classmethod
    def monomial(cls, degree: int, c: Number = 1) -> "UniPoly":
        return cls([0] * degree + [c])

    @classmethod
    def from_roots(cls, roots: Sequence[Number]) -> "UniPoly":
        p = cls([1])
        for r in roots:
            p = p * cls([-as_rational(r), 1])
        return p

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def lead(self) -> Number:
        return self.coeffs[-1] if self.coeffs else 0

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == ((other,) if other else ())
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"UniPoly({self})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if not mono:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{format_rational(c)}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    def __add__(self, other) -> "UniPoly":
        other = _lift(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        return UniPoly([x + (b[i] if i < len(b) else 0) for i, x in enumerate(a)])

    __radd__ = __add__

    def __neg__(self) -> "UniPoly":
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other) -> "UniPoly":
        return self + (-_lift(other))

    def __rsub__(self, other) -> "UniPoly":
        return _lift(other) - self

    def __mul__(self, other) -> "UniPoly":
        other = _lift(other)
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly()
        out = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    out[i + j] += x * y
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "UniPoly":
        out = UniPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def __call__(self, x) -> Number:
        acc: Number = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return normalize(acc)

    def derivative(self) -> "UniPoly":
        return UniPoly([i * c for i, c in enumerate(self.coeffs)][1:])

    def shift(self, a: Number) -> "UniPoly":
        """``p(t + a)``."""
        out = UniPoly()
        lin = UniPoly([a, 1])
        for c in reversed(self.coeffs):
            out = out * lin + UniPoly([c])
        return out

    def divmod(self, other: "UniPoly") -> tuple["UniPoly", "UniPoly"]:
        if not other:
            raise ZeroDivisionError("division by zero polynomial")
        rem = list(self.coeffs)
        d = other.degree()
        lc = other.lead()
        if len(rem) <= d:
            return UniPoly(), self
        q = [0] * (len(rem) - d)
        for i in range(len(rem) - 1, d - 1, -1):
            c = rem[i]
            if c:
                f = Fraction(c) / lc
                q[i - d] = f
                for j, oc in enumerate(other.coeffs):
                    rem[i - d + j] -= f * oc
        return UniPoly(q), UniPoly(rem[:d])

    def __floordiv__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[0]

    def __mod__(self, other: "UniPoly") -> "UniPoly":
        return self.divmod(other)[1]

    def monic(self) -> "UniPoly":
        lc = self.lead()
        return UniPoly([Fraction(c) / lc for c in self.coeffs])

    def primitive(self) -> "UniPoly":
        """Integer coefficients, content 1, same sign as ``self``."""
        if not self.coeffs:
            return self
        den = 1
        for c in self.coeffs:
            if isinstance(c, Fraction):
                den = den * c.denominator // gcd(den, c.denominator)
        ints = [int(c * den) for c in self.coeffs]
        g = 0
        for c in ints:
            g = gcd(g, c)
        return UniPoly([c // g for c in ints])

    def sign_at(self, x: Number) -> int:
        cs = self.coeffs
        if isinstance(x, Fraction) and all(type(c) is int for c in cs):
            # integer Horner on the homogenised form; the denominator is positive
            a, b = x.numerator, x.denominator
            acc, bp = 0, 1
            for c in reversed(cs):
                acc = acc * a + c * bp
                bp *= b
            return (acc > 0) - (acc < 0)
        v = self(x)
        return (v > 0) - (v < 0)

    def sign_at_infinity(self, positive: bool) -> int:
        if not self.coeffs:
            return 0
        s = 1 if self.lead() > 0 else -1
        if not positive and self.degree() % 2:
            s = -s
        return s


def _lift(x) -> UniPoly:
    return x if isinstance(x, UniPoly) else UniPoly([x])


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (the zero polynomial if both are zero)."""
    while b:
        a, b = b, (a % b).primitive()
    return a.monic() if a else a


def square_free_part(p: UniPoly) -> UniPoly:
    g = poly_gcd(p, p.derivative())
    return (p // g).primitive() if g.degree() > 0 else p.primitive()


def square_free_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: ``p = c * prod f_i^i`` with pairwise coprime square-free ``f_i``."""
    if p.degree() < 1:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    d = dp // a - b.derivative()
    i = 1
    while b.degree() > 0:
        a = poly_gcd(b, d)
        if a.degree() > 0:
            out.append((a.primitive(), i))
        b = b // a
        d = d // a - b.derivative()
        i += 1
    return out


def sturm_chain(p: UniPoly) -> list[UniPoly]:
    chain = [p.primitive(), p.derivative().primitive()]
    while chain[-1].degree() > 0:
        r = chain[-2] % chain[-1]
        if not r:
            break
        chain.append((-r).primitive())
    return [q for q in chain if q]


def _variations(signs: list[int]) -> int:
    nz = [s for s in signs if s]
    return sum(1 for a, b in zip(nz, nz[1:]) if a != b)


def _var_at(chain: list[UniPoly], x) -> int:
    if x is None or x == float("inf"):
        return _variations([q.sign_at_infinity(True) for q in chain])
    if x == float("-inf"):
        return _variations([q.sign_at_infinity(False) for q in chain])
    return _variations([q.sign_at(x) for q in chain])


def real_root_count(u: UniPoly, lo=float("-inf"), hi=float("inf")) -> int:
    """Number of distinct real roots in ``(lo, hi]``; infinite bounds allowed."""
    if not u:
        raise ValueError("the zero polynomial has infinitely many roots")
    if u.degree() == 0:
        return 0
    chain = sturm_chain(square_free_part(u))
    lo = lo if lo in (float("-inf"), float("inf")) else as_rational(lo)
    hi = hi if hi in (float("-inf"), float("inf")) else as_rational(hi)
    return _var_at(chain, lo) - _var_at(chain, hi)


def real_root_total(u: UniPoly) -> int:
    """Number of real roots counted with multiplicity."""
    if not u:
        raise ValueError("the zero polynomial has infinitely many roots")
    total = 0
    for f, m in square_free_decomposition(u):
        chain = sturm_chain(f)
        total += m * (_var_at(chain, float("-inf")) - _var_at(chain, float("inf")))
    return total


@dataclass(frozen=True)
class IsolatingInterval:
    """One real root: exactly ``exact`` if set, otherwise strictly inside ``(lo, hi)``."""

    lo: Fraction
    hi: Fraction
    exact: Fraction | None = None
    multiplicity: int = 1

    def midpoint(self) -> Fraction:
        return self.exact if self.exact is not None else (self.lo + self.hi) / 2

    def __float__(self) -> float:
        return float(self.midpoint())

    def sign(self) -> int:
        """Sign of the root (``0`` only for an exact zero root)."""
        if self.exact is not None:
            return (self.exact > 0) - (self.exact < 0)
        if self.lo >= 0:
            return 1
        if self.hi <= 0:
            return -1
        raise ValueError("interval straddles zero")


def root_bound(p: UniPoly) -> Fraction:
    lc = abs(p.lead())
    return 1 + max((Fraction(abs(c)) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def _isolate_square_free(p: UniPoly, width: Fraction) -> list[IsolatingInterval]:
    if p.degree() < 1:
        return []
    chain = sturm_chain(p)
    b = root_bound(p)
    out: list[IsolatingInterval] = []
    # endpoints are never roots: the bound is strict and split points avoid roots
    stack = [(-b, b, _var_at(chain, -b), _var_at(chain, b))]
    while stack:
        lo, hi, vlo, vhi = stack.pop()
        n = vlo - vhi
        if n == 0:
            continue
        if n == 1:
            out.append(_refine(p, lo, hi, width))
            continue
        mid = (lo + hi) / 2
        k = 3
        while p.sign_at(mid) == 0:
            mid = lo + (hi - lo) / k
            k += 1
        vmid = _var_at(chain, mid)
        stack.append((lo, mid, vlo, vmid))
        stack.append((mid, hi, vmid, vhi))
    out.sort(key=lambda iv: iv.midpoint())
    return out


def _refine(p: UniPoly, lo: Fraction, hi: Fraction, width: Fraction) -> IsolatingInterval:
    """Bisect the single simple root strictly inside ``(lo, hi)``."""
    s_lo = p.sign_at(lo)
    while hi - lo > width:
        mid = (lo + hi) / 2
        s = p.sign_at(mid)
        if s == 0:
            return IsolatingInterval(mid, mid, mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    return IsolatingInterval(lo, hi)


def isolate_real_roots(u: UniPoly, width: Fraction = ISOLATION_WIDTH) -> list[IsolatingInterval]:
    """Disjoint isolating intervals of all real roots, ascending, with multiplicities."""
    if not u:
        raise ValueError("the zero polynomial has no isolated roots")
    if u.degree() < 1:
        return []
    sf = square_free_part(u)
    roots = _isolate_square_free(sf, width)
    factors = square_free_decomposition(u)
    if len(factors) == 1 and factors[0][1] == 1:
        return roots
    chains = [(sturm_chain(f), f, m) for f, m in factors]
    out = []
    for iv in roots:
        mult = 0
        for chain, f, m in chains:
            if iv.exact is not None:
                hit = f.sign_at(iv.exact) == 0
            else:
                hit = _var_at(chain, iv.lo) - _var_at(chain, iv.hi) > 0
            if hit:
                mult = m
                break
        out.append(IsolatingInterval(iv.lo, iv.hi, iv.exact, mult))
    return out
