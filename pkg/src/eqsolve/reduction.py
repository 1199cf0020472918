"""Reduction of group word equations to polynomial systems over the field.

Every letter of a word becomes a symbolic upper triangular matrix: constant
letters carry their concrete entries, and each distinct variable gets one
diagonal slot variable y[i][k] per row (ranging over the row's subgroup) and
one slot variable x[i][j][k] per pattern position (ranging over the field).
Multiplying the symbolic letters left to right yields an m x m grid of entry
polynomials: the diagonal entries are single monomials (products of the y
slots) and each above-diagonal entry is a sum of products, one per
non-decreasing index chain through the pattern, with constants folded into
the coefficients.  Positions outside the pattern hold the constant zero, so
chains through them vanish as the product is formed; this keeps the grid
within its O(n^m) size bound instead of enumerating chains up front.

A word equation F = rhs then holds for a substitution exactly when all the
entry polynomials attain the corresponding rhs entries, which is a
solvability question handed to the system solver.  SAT witnesses are
reassembled into group elements and re-checked through evaluate_word before
being returned.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .domains import Scalar
from .groups import (DEFAULT_GUARD, GroupElement, GroupError, SemipatternGroup,
                     element_list, evaluate_word, word_variables)
from .poly import FIELD, SUBGROUP, Polynomial, Variable
from .solver import Constraint, Decision, PolySystem, SolveRequest, solve


def x_variable(i: int, j: int, k: int) -> Variable:
    return Variable("x[%d][%d][%d]" % (i, j, k), FIELD)


def y_variable(i: int, k: int) -> Variable:
    return Variable("y[%d][%d]" % (i, k), SUBGROUP, row=i)


class SymbolicLetter:
    """One word letter as a grid of slots: Scalars, Variables, or zero (None)."""

    __slots__ = ("m", "slots")

    def __init__(self, m, slots):
        self.m = m
        self.slots = slots  # dict (i, j) -> Scalar | Variable, 1-based, i <= j

    def slot(self, i, j):
        return self.slots.get((i, j))

    @classmethod
    def from_constant(cls, group: SemipatternGroup, element: GroupElement):
        slots = {}
        for i in range(1, group.m + 1):
            slots[(i, i)] = element.scalar(i, i)
        for (i, j) in group.pattern:
            v = element.scalar(i, j)
            if not v.is_zero():
                slots[(i, j)] = v
        return cls(group.m, slots)

    @classmethod
    def for_variable(cls, group: SemipatternGroup, k: int):
        slots = {}
        for i in range(1, group.m + 1):
            slots[(i, i)] = y_variable(i, k)
        for (i, j) in group.pattern:
            slots[(i, j)] = x_variable(i, j, k)
        return cls(group.m, slots)


@dataclass(frozen=True)
class SymbolicMatrix:
    """Entry polynomials of a symbolic letter product; zero below the diagonal."""

    group: SemipatternGroup
    nletters: int
    grid: tuple  # m x m tuple of Polynomial

    def entry(self, i: int, j: int) -> Polynomial:
        return self.grid[i - 1][j - 1]

    def upper_entries(self):
        """((i, j), polynomial) for all 1 <= i <= j <= m."""
        m = self.group.m
        return tuple(((i, j), self.grid[i - 1][j - 1])
                     for i in range(1, m + 1) for j in range(i, m + 1))

    def evaluate(self, assignment) -> GroupElement:
        """Evaluate every entry at a slot assignment and rebuild the element."""
        dom = self.group.domain
        m = self.group.m
        rows = [[dom.rzero] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                rows[i][j] = self.grid[i][j].evaluate(assignment).raw
        element = GroupElement(self.group, tuple(tuple(r) for r in rows))
        self.group._check_membership(element.rows)
        return element


def symbolic_letters(group: SemipatternGroup, word, var_index):
    """Symbolic letter per word position; equal variables share slot variables."""
    letters = []
    for letter in word:
        if isinstance(letter, str):
            letters.append(SymbolicLetter.for_variable(group, var_index[letter]))
        else:
            if letter.group != group:
                raise GroupError("constant letter from a different group")
            letters.append(SymbolicLetter.from_constant(group, letter))
    return letters


def symbolic_product(group: SemipatternGroup, letters) -> SymbolicMatrix:
    """Multiply symbolic letters left to right into entry polynomials.

    The empty product is the symbolic identity.  Constants are folded into
    monomial coefficients as the product is formed, and entries at positions
    forced to zero by the pattern stay structurally zero.
    """
    m = group.m
    dom = group.domain
    zero = Polynomial.zero(dom)
    one = Polynomial.constant(dom.one())
    grid = [[one if i == j else zero for j in range(m)] for i in range(m)]
    for letter in letters:
        new = [[zero] * m for _ in range(m)]
        for i in range(m):
            for j in range(i, m):
                acc = zero
                for l in range(i, j + 1):
                    left = grid[i][l]
                    if left.is_zero():
                        continue
                    slot = letter.slot(l + 1, j + 1)
                    if slot is None:
                        continue
                    if isinstance(slot, Variable):
                        acc = acc + left.times_variable(slot)
                    else:
                        acc = acc + left.times_scalar(slot)
                new[i][j] = acc
        grid = new
    return SymbolicMatrix(group, len(letters), tuple(tuple(r) for r in grid))


def entry_monomial_count(n: int, i: int, j: int) -> int:
    """Products contributing to entry (i, j) of an n-letter all-variable word."""
    if not 1 <= i < j:
        raise ValueError("need 1 <= i < j")
    return math.comb(n + j - i - 1, j - i)


@dataclass
class ReducedSystem:
    """Polynomial system for one word equation, plus the witness bookkeeping."""

    group: SemipatternGroup
    lhs: tuple
    rhs: object                  # GroupElement or word tuple
    var_names: tuple             # distinct variable names, first occurrence order
    system: PolySystem
    lhs_matrix: SymbolicMatrix
    rhs_matrix: SymbolicMatrix = None

    def assemble_witness(self, assignment) -> dict:
        """Slot assignment -> {variable name: GroupElement}.

        Slots that dropped out of the system (cancelled or never constrained)
        default to the identity's entries.
        """
        group = self.group
        dom = group.domain
        out = {}
        for k, name in enumerate(self.var_names, start=1):
            rows = [[dom.rzero] * group.m for _ in range(group.m)]
            for i in range(1, group.m + 1):
                val = assignment.get(y_variable(i, k))
                rows[i - 1][i - 1] = val.raw if val is not None else dom.rone
            for (i, j) in group.pattern:
                val = assignment.get(x_variable(i, j, k))
                if val is not None:
                    rows[i - 1][j - 1] = val.raw
            element = GroupElement(group, tuple(tuple(r) for r in rows))
            group._check_membership(element.rows)
            out[name] = element
        return out


def build_system(group: SemipatternGroup, lhs, rhs) -> ReducedSystem:
    """Reduce the word equation lhs = rhs to a polynomial system over GF(q).

    rhs may be a constant element (targets are its entries) or another word
    (the two entry polynomials are equated by moving everything left).
    Domains: x variables range over the field, y variables over their row's
    subgroup.
    """
    lhs = tuple(lhs)
    rhs_is_word = not isinstance(rhs, GroupElement)
    if rhs_is_word:
        rhs = tuple(rhs)
        names = word_variables(lhs + rhs)
    else:
        names = word_variables(lhs)
    var_index = {name: k for k, name in enumerate(names, start=1)}

    lhs_matrix = symbolic_product(group, symbolic_letters(group, lhs, var_index))
    rhs_matrix = None
    constraints = []
    if rhs_is_word:
        rhs_matrix = symbolic_product(group, symbolic_letters(group, rhs, var_index))
        zero = group.domain.zero()
        for (pos, left) in lhs_matrix.upper_entries():
            right = rhs_matrix.entry(*pos)
            constraints.append(Constraint(left - right, zero))
    else:
        if rhs.group != group:
            raise GroupError("right-hand side from a different group")
        for ((i, j), left) in lhs_matrix.upper_entries():
            constraints.append(Constraint(left, rhs.scalar(i, j)))

    domains = {}
    field_elements = tuple(group.domain.elements())
    for c in constraints:
        for v in c.poly.variables():
            if v in domains:
                continue
            if v.sort == SUBGROUP:
                domains[v] = group.subgroups[v.row - 1].elements
            else:
                domains[v] = field_elements
    system = PolySystem(group.domain, tuple(constraints), domains)
    return ReducedSystem(group, lhs, rhs, names, system, lhs_matrix, rhs_matrix)


def decide_equation(group: SemipatternGroup, lhs, rhs, *,
                    guard: int = DEFAULT_GUARD, backend: str = "pruned") -> Decision:
    """Decide solvability of lhs = rhs over the group via the reduction.

    On SAT the witness maps variable names to group elements and has been
    re-verified through evaluate_word.
    """
    reduced = build_system(group, lhs, rhs)
    decision = solve(SolveRequest(reduced.system, backend=backend, guard=guard))
    if not decision.sat:
        return Decision(False, None, decision.stats)
    witness = reduced.assemble_witness(decision.witness)
    left = evaluate_word(group, reduced.lhs, witness)
    if isinstance(reduced.rhs, GroupElement):
        right = reduced.rhs
    else:
        right = evaluate_word(group, reduced.rhs, witness)
    if left != right:
        raise RuntimeError("internal error: reduction witness failed re-check")
    return Decision(True, witness, decision.stats)


def separating_substitution(group: SemipatternGroup, f, g, *,
                            guard: int = DEFAULT_GUARD, backend: str = "pruned"):
    """First substitution (by constant order) where f and g differ, or None.

    f and g agree everywhere iff f = c*g is unsolvable for every c != identity,
    so each candidate c is tried as a constant prefix of g.
    """
    identity = group.identity()
    g = tuple(g)
    for c in element_list(group):
        if c == identity:
            continue
        decision = decide_equation(group, f, (c,) + g,
                                   guard=guard, backend=backend)
        if decision.sat:
            return decision.witness
    return None


def decide_equivalence(group: SemipatternGroup, f, g, *,
                       guard: int = DEFAULT_GUARD, backend: str = "pruned") -> bool:
    """True iff f and g take the same value under every substitution."""
    return separating_substitution(group, f, g, guard=guard, backend=backend) is None
