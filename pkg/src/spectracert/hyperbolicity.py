"""Eigenvalues, cone membership and sampled hyperbolicity checks."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .polycore import (
    IsolatingInterval,
    MultiPoly,
    Number,
    UniPoly,
    as_point,
    as_rational,
    format_rational,
    isolate_real_roots,
    real_root_count,
    real_root_total,
)

INTERIOR = "interior"
BOUNDARY = "boundary"
EXTERIOR = "exterior"

MAX_NUMERATOR = 100
MAX_DENOMINATOR = 16
SHRINK_STEPS = 60


class NonRealSpectrum(ArithmeticError):
    """``t -> h(te - x)`` has non-real roots; ``point`` and ``poly`` are the witness."""

    def __init__(self, point, poly: UniPoly, real_count: int):
        super().__init__(f"only {real_count} of {poly.degree()} roots are real at {fmt_point(point)}")
        self.point = point
        self.poly = poly
        self.real_count = real_count


def fmt_point(point) -> str:
    return "(" + ", ".join(format_rational(c) for c in point) + ")"


@dataclass(frozen=True)
class EigenvalueList:
    roots: tuple[IsolatingInterval, ...]
    direction: tuple
    point: tuple
    poly: UniPoly

    def values(self) -> list[Fraction]:
        """Root approximations repeated by multiplicity, ascending."""
        return [r.midpoint() for r in self.roots for _ in range(r.multiplicity)]

    def minimum(self) -> IsolatingInterval:
        return self.roots[0]

    def maximum(self) -> IsolatingInterval:
        return self.roots[-1]


def _line(h: MultiPoly, e, x) -> UniPoly:
    if not h.evaluate(e):
        raise ValueError("h vanishes at the direction e")
    return h.restrict_line(e, x)


def eigenvalues(h: MultiPoly, e, x) -> EigenvalueList:
    """Roots of ``t -> h(te - x)``; raises :class:`NonRealSpectrum` if any are not real."""
    e = tuple(as_point(h.registry, e))
    x = tuple(as_point(h.registry, x))
    u = _line(h, e, x)
    roots = isolate_real_roots(u) if u.degree() > 0 else []
    total = sum(r.multiplicity for r in roots)
    if total < u.degree():
        raise NonRealSpectrum(x, u, total)
    return EigenvalueList(tuple(roots), e, x, u)


@dataclass(frozen=True)
class ConeMembership:
    status: str
    nonpositive_roots: int  # distinct roots in (-inf, 0]
    zero_root: bool

    def __str__(self) -> str:
        return self.status


def classify_line(u: UniPoly) -> ConeMembership:
    if u.degree() <= 0:
        return ConeMembership(INTERIOR, 0, False)
    nonpos = real_root_count(u, float("-inf"), 0)
    zero = u(0) == 0
    if nonpos == 0:
        status = INTERIOR
    elif zero and nonpos == 1:
        status = BOUNDARY
    else:
        status = EXTERIOR
    return ConeMembership(status, nonpos, zero)


def cone_membership(h: MultiPoly, e, x, check_real: bool = True) -> ConeMembership:
    """Classify ``x`` against the closed hyperbolicity cone of ``h`` in direction ``e``."""
    e = as_point(h.registry, e)
    x = as_point(h.registry, x)
    u = _line(h, e, x)
    if check_real and u.degree() > 0:
        total = real_root_total(u)
        if total < u.degree():
            raise NonRealSpectrum(tuple(x), u, total)
    return classify_line(u)


# --- sampling -------------------------------------------------------------------


def random_rational(rng: np.random.Generator) -> Fraction:
    a = int(rng.integers(-MAX_NUMERATOR, MAX_NUMERATOR + 1))
    b = int(rng.integers(1, MAX_DENOMINATOR + 1))
    return Fraction(a, b)


def random_point(rng: np.random.Generator, n: int) -> list[Number]:
    return [as_rational(random_rational(rng)) for _ in range(n)]


def interior_point(h: MultiPoly, e: Sequence[Number], rng: np.random.Generator) -> list[Number]:
    """``e + r*d`` for a random ``d``, halving ``r`` until the point is interior."""
    d = random_point(rng, len(e))
    r = Fraction(1)
    for _ in range(SHRINK_STEPS):
        p = [as_rational(a + r * b) for a, b in zip(e, d)]
        if h.evaluate(p) and cone_membership(h, e, p, check_real=False).status == INTERIOR:
            return p
        r /= 2
    return list(e)


@dataclass
class SampleFailure:
    index: int
    point: tuple
    poly: UniPoly | None
    reason: str

    def to_json(self) -> dict:
        return {
            "index": self.index,
            "point": [format_rational(c) for c in self.point],
            "line_poly": [format_rational(c) for c in self.poly.coeffs] if self.poly is not None else None,
            "reason": self.reason,
        }


@dataclass
class SampleReport:
    seed: int
    samples: int
    failures: list[SampleFailure] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures and self.checked == self.samples

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "samples": self.samples,
            "checked": self.checked,
            "passed": self.passed,
            "failures": [f.to_json() for f in self.failures],
        }


def hyperbolicity_sample_test(h: MultiPoly, e, n: int = 50, seed: int = 0) -> SampleReport:
    """Check full real-rootedness of ``t -> h(te - x)`` at ``n`` seeded points."""
    e = as_point(h.registry, e)
    rng = np.random.default_rng(seed)
    rep = SampleReport(seed, n)
    for i in range(n):
        x = random_point(rng, len(e))
        u = _line(h, e, x)
        rep.checked += 1
        if u.degree() <= 0:
            continue
        total = real_root_total(u)
        if total < u.degree():
            rep.failures.append(SampleFailure(i, tuple(x), u, f"{total} of {u.degree()} roots real"))
    return rep


def cone_inclusion_sample_test(inner: MultiPoly, outer: MultiPoly, e, n: int = 100, seed: int = 0) -> SampleReport:
    """Sample interior points of the inner cone and check they are interior for the outer one."""
    e = as_point(inner.registry, e)
    rng = np.random.default_rng(seed)
    rep = SampleReport(seed, n)
    for i in range(n):
        p = interior_point(inner, e, rng)
        rep.checked += 1
        try:
            m = cone_membership(outer, e, p)
        except NonRealSpectrum as exc:
            rep.failures.append(SampleFailure(i, tuple(p), exc.poly, "outer polynomial not real-rooted"))
            continue
        except ValueError as exc:
            rep.failures.append(SampleFailure(i, tuple(p), None, str(exc)))
            continue
        if m.status != INTERIOR:
            rep.failures.append(SampleFailure(i, tuple(p), outer.restrict_line(e, p), f"outer membership is {m.status}"))
    return rep


def derivative_relaxation_check(h: MultiPoly, v, e=None, n: int = 100, seed: int = 0) -> SampleReport:
    """Interior points of the cone of ``h`` must be interior for ``D_v h``.

    ``v`` has to lie in the closed cone; sampling uses ``e`` (default ``v``).
    """
    v = as_point(h.registry, v)
    e = v if e is None else as_point(h.registry, e)
    if cone_membership(h, e, v).status == EXTERIOR:
        raise ValueError("v lies outside the hyperbolicity cone")
    dh = h.directional_derivative(v)
    if dh.is_zero():
        raise ValueError("directional derivative vanishes")
    return cone_inclusion_sample_test(h, dh, e, n, seed)
