"""Multivariate polynomials over a scalar domain, in sum-of-monomials normal form.

Normal form means: no two monomials share a factor list and no monomial has a
zero coefficient.  Field- and subgroup-sorted variables commute, so their
factor lists are kept sorted by variable name; ring-sorted variables do not
commute and their factor order is preserved.  The length measure ``length()``
counts one symbol per variable occurrence plus one per coefficient;
``product_length()`` counts factor symbols only (a bare constant counts as
one), which is the measure the rewriting size bounds are stated in.
"""

from __future__ import annotations

from dataclasses import dataclass

from .domains import Scalar

FIELD = "field"
SUBGROUP = "subgroup"
RING = "ring"


class PolyError(ValueError):
    """Malformed polynomial expression or evaluation request."""


@dataclass(frozen=True)
class Variable:
    """A sorted variable; subgroup-valued variables carry their row index."""

    name: str
    sort: str = FIELD
    row: int = None

    def __repr__(self):
        return self.name


def _canon_factors(factors):
    factors = tuple(factors)
    if any(v.sort == RING for v in factors):
        return factors
    return tuple(sorted(factors, key=lambda v: v.name))


def _term_key(factors):
    return (-len(factors), tuple(v.name for v in factors))


class Polynomial:
    """Immutable polynomial; arithmetic keeps the normal form invariant."""

    __slots__ = ("domain", "_terms")

    def __init__(self, domain, terms=()):
        coeffs = {}
        for factors, raw in terms:
            factors = _canon_factors(factors)
            acc = coeffs.get(factors)
            coeffs[factors] = domain.radd(acc, raw) if acc is not None else raw
        self.domain = domain
        self._terms = tuple(sorted(
            ((f, c) for f, c in coeffs.items() if c != domain.rzero),
            key=lambda t: _term_key(t[0])))

    @classmethod
    def _raw(cls, domain, terms):
        """Internal: terms already canonical, merged, zero-free, sorted."""
        self = cls.__new__(cls)
        self.domain = domain
        self._terms = terms
        return self

    @classmethod
    def zero(cls, domain):
        return cls._raw(domain, ())

    @classmethod
    def constant(cls, value: Scalar):
        if value.raw == value.domain.rzero:
            return cls.zero(value.domain)
        return cls._raw(value.domain, (((), value.raw),))

    @classmethod
    def variable(cls, domain, var: Variable):
        return cls._raw(domain, (((var,), domain.rone),))

    @classmethod
    def from_terms(cls, domain, terms):
        """Build from (coefficient Scalar, factor iterable) pairs."""
        raw_terms = []
        for coeff, factors in terms:
            coeff = domain.scalar(coeff)
            raw_terms.append((tuple(factors), coeff.raw))
        return cls(domain, raw_terms)

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return not self._terms

    def monomials(self):
        """(coefficient Scalar, factor tuple) pairs in canonical order."""
        return tuple((Scalar(self.domain, c), f) for f, c in self._terms)

    def monomial_count(self) -> int:
        return len(self._terms)

    def variables(self):
        seen = {}
        for factors, _ in self._terms:
            for v in factors:
                seen[v] = None
        return tuple(seen)

    def degree(self) -> int:
        return max((len(f) for f, _ in self._terms), default=0)

    def length(self) -> int:
        """Symbol count: each variable occurrence and each coefficient is 1."""
        return sum(len(f) + 1 for f, _ in self._terms)

    def product_length(self) -> int:
        """Factor-symbol count: a monomial of d factors counts max(d, 1)."""
        return sum(max(len(f), 1) for f, _ in self._terms)

    # -- arithmetic ---------------------------------------------------------

    def _lift(self, other):
        if isinstance(other, Polynomial):
            if other.domain != self.domain:
                raise PolyError("mixed polynomial domains: %s vs %s"
                                % (self.domain, other.domain))
            return other
        if isinstance(other, Variable):
            return Polynomial.variable(self.domain, other)
        if isinstance(other, (Scalar, int)):
            return Polynomial.constant(self.domain.scalar(other))
        return NotImplemented

    def __add__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        coeffs = dict(self._terms)
        dom = self.domain
        for factors, raw in other._terms:
            acc = coeffs.get(factors)
            coeffs[factors] = dom.radd(acc, raw) if acc is not None else raw
        return Polynomial._raw(dom, tuple(sorted(
            ((f, c) for f, c in coeffs.items() if c != dom.rzero),
            key=lambda t: _term_key(t[0]))))

    __radd__ = __add__

    def __neg__(self):
        dom = self.domain
        return Polynomial._raw(
            dom, tuple((f, dom.rneg(c)) for f, c in self._terms))

    def __sub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, Variable):
            return self.times_variable(other)
        if isinstance(other, (Scalar, int)):
            return self.times_scalar(self.domain.scalar(other))
        other = self._lift(other)
        if other is NotImplemented:
            return NotImplemented
        dom = self.domain
        coeffs = {}
        for f1, c1 in self._terms:
            for f2, c2 in other._terms:
                factors = _canon_factors(f1 + f2)
                raw = dom.rmul(c1, c2)
                acc = coeffs.get(factors)
                coeffs[factors] = dom.radd(acc, raw) if acc is not None else raw
        return Polynomial(dom, coeffs.items())

    def __rmul__(self, other):
        if isinstance(other, (Scalar, int, Variable)):
            return self.__mul__(other)
        return NotImplemented

    def times_scalar(self, s: Scalar) -> "Polynomial":
        s = self.domain.scalar(s)
        if s.raw == self.domain.rzero:
            return Polynomial.zero(self.domain)
        dom = self.domain
        return Polynomial._raw(
            dom, tuple((f, dom.rmul(c, s.raw)) for f, c in self._terms))

    def times_variable(self, var: Variable) -> "Polynomial":
        dom = self.domain
        terms = tuple((_canon_factors(f + (var,)), c) for f, c in self._terms)
        return Polynomial._raw(dom, tuple(sorted(terms, key=lambda t: _term_key(t[0]))))

    # -- evaluation ---------------------------------------------------------

    def evaluate(self, assignment, domains=None) -> Scalar:
        """Exact value under a {Variable: Scalar} assignment.

        When a per-variable domain map is supplied, values are checked
        against it (subgroup-valued variables must receive subgroup members).
        """
        dom = self.domain
        if domains is not None:
            for v in self.variables():
                if v not in assignment:
                    raise PolyError("no value for variable %s" % v.name)
                allowed = domains.get(v)
                if allowed is not None and assignment[v] not in allowed:
                    raise PolyError("value %r outside the domain of %s"
                                    % (assignment[v], v.name))
        total = dom.rzero
        try:
            for factors, raw in self._terms:
                acc = raw
                for v in factors:
                    acc = dom.rmul(acc, assignment[v].raw)
                total = dom.radd(total, acc)
        except KeyError as exc:
            raise PolyError("no value for variable %s" % exc.args[0]) from None
        return Scalar(dom, total)

    # -- comparison / rendering --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.domain == other.domain and self._terms == other._terms
        if isinstance(other, (Scalar, int)):
            lifted = self._lift(other)
            return self._terms == lifted._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.domain, self._terms))

    def __repr__(self):
        if not self._terms:
            return "0"
        parts = []
        for factors, raw in self._terms:
            coeff = self.domain.encode(raw)
            names = [v.name for v in factors]
            if not names:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append("*".join(names))
            else:
                parts.append("*".join([str(coeff)] + names))
        return " + ".join(parts)


# -- raw expression trees ----------------------------------------------------
#
# The raw form feeds normalize(); keeping it separate from Polynomial gives an
# evaluation path that is independent of the normal-form arithmetic, which the
# tests lean on.

class Expr:
    def __add__(self, other):
        return EAdd((self, _as_expr(other)))

    __radd__ = __add__

    def __mul__(self, other):
        return EMul((self, _as_expr(other)))

    __rmul__ = __mul__

    def __sub__(self, other):
        return EAdd((self, ENeg(_as_expr(other))))

    def __neg__(self):
        return ENeg(self)


@dataclass(frozen=True)
class EConst(Expr):
    value: Scalar


@dataclass(frozen=True)
class EVar(Expr):
    var: Variable


@dataclass(frozen=True)
class EAdd(Expr):
    parts: tuple


@dataclass(frozen=True)
class EMul(Expr):
    parts: tuple


@dataclass(frozen=True)
class ENeg(Expr):
    part: Expr


def _as_expr(obj):
    if isinstance(obj, Expr):
        return obj
    if isinstance(obj, Scalar):
        return EConst(obj)
    if isinstance(obj, Variable):
        return EVar(obj)
    raise PolyError("cannot use %r in a polynomial expression" % (obj,))


def normalize(expr, domain) -> Polynomial:
    """Rewrite a raw expression into sum-of-monomials normal form."""
    if isinstance(expr, Polynomial):
        if expr.domain != domain:
            raise PolyError("mixed domains in expression")
        return expr
    if isinstance(expr, Scalar):
        if expr.domain != domain:
            raise PolyError("mixed domains in expression")
        return Polynomial.constant(expr)
    if isinstance(expr, Variable):
        return Polynomial.variable(domain, expr)
    if isinstance(expr, EConst):
        return normalize(expr.value, domain)
    if isinstance(expr, EVar):
        return normalize(expr.var, domain)
    if isinstance(expr, ENeg):
        return -normalize(expr.part, domain)
    if isinstance(expr, EAdd):
        total = Polynomial.zero(domain)
        for part in expr.parts:
            total = total + normalize(part, domain)
        return total
    if isinstance(expr, EMul):
        total = Polynomial.constant(domain.one())
        for part in expr.parts:
            total = total * normalize(part, domain)
        return total
    raise PolyError("not a polynomial expression: %r" % (expr,))


def eval_expr(expr, assignment, domain) -> Scalar:
    """Evaluate a raw expression tree directly, without normalizing."""
    if isinstance(expr, Polynomial):
        return expr.evaluate(assignment)
    if isinstance(expr, Scalar):
        return expr
    if isinstance(expr, Variable):
        try:
            return assignment[expr]
        except KeyError:
            raise PolyError("no value for variable %s" % expr.name) from None
    if isinstance(expr, EConst):
        return expr.value
    if isinstance(expr, EVar):
        return eval_expr(expr.var, assignment, domain)
    if isinstance(expr, ENeg):
        return -eval_expr(expr.part, assignment, domain)
    if isinstance(expr, EAdd):
        total = domain.zero()
        for part in expr.parts:
            total = total + eval_expr(part, assignment, domain)
        return total
    if isinstance(expr, EMul):
        total = domain.one()
        for part in expr.parts:
            total = total * eval_expr(part, assignment, domain)
        return total
    raise PolyError("not a polynomial expression: %r" % (expr,))
