"""Semipattern matrix groups: upper triangular groups N_P*D inside T_m(GF(q)).

A group is described by a field, a matrix size m, a pattern set P of
above-diagonal positions (closed under (i,j),(j,k) -> (i,k), which is exactly
what makes the unipotent part multiplicatively closed), and per-row
multiplicative subgroup orders for the diagonal.  Elements are upper
triangular matrices whose diagonal entry i lies in the row-i subgroup and
whose entry (i,j) vanishes unless (i,j) is in P.

Words are sequences of letters; a letter is either a constant element or a
variable name (equal names denote the same unknown).  The brute-force solver
here is the reference oracle for the symbolic reduction pipeline: it
enumerates all assignments through a cached multiplication table and returns
the first witness in canonical order.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .domains import DomainError, Scalar, subgroup_of_order
from .solver import Decision, GuardExceeded, SolveStats

DEFAULT_GUARD = 10 ** 8
_TABLE_LIMIT = 4096  # largest group order for which a Cayley table is built


class GroupError(ValueError):
    """Invalid group description, element, or word."""


class PatternError(GroupError):
    """Pattern set not closed; carries a witnessing position triple."""

    def __init__(self, i, j, k):
        super().__init__(
            "pattern not closed: (%d,%d) and (%d,%d) require (%d,%d)"
            % (i, j, j, k, i, k))
        self.triple = ((i, j), (j, k), (i, k))


@dataclass(frozen=True)
class SemipatternGroup:
    """Validated descriptor of N_P*D; build via make_group()."""

    domain: object
    m: int
    pattern: tuple           # sorted (i, j) pairs, 1-based, i < j
    orders: tuple            # diagonal subgroup orders d_1..d_m
    subgroups: tuple         # MultSubgroup per row

    @property
    def order(self) -> int:
        return (self.domain.size ** len(self.pattern)) * math.prod(self.orders)

    def identity(self) -> "GroupElement":
        one, zero = self.domain.rone, self.domain.rzero
        rows = tuple(tuple(one if i == j else zero for j in range(self.m))
                     for i in range(self.m))
        return GroupElement(self, rows)

    def element(self, rows) -> "GroupElement":
        """Build a validated element from an m x m grid of residues/scalars."""
        if len(rows) != self.m or any(len(r) != self.m for r in rows):
            raise GroupError("element grid must be %d x %d" % (self.m, self.m))
        raw = tuple(tuple(self.domain.scalar(v).raw for v in r) for r in rows)
        self._check_membership(raw)
        return GroupElement(self, raw)

    def _check_membership(self, raw):
        dom = self.domain
        pat = set(self.pattern)
        for i in range(self.m):
            for j in range(self.m):
                v = raw[i][j]
                if i == j:
                    if Scalar(dom, v) not in self.subgroups[i]:
                        raise GroupError(
                            "diagonal entry %d = %r outside its subgroup of "
                            "order %d" % (i + 1, Scalar(dom, v), self.orders[i]))
                elif i > j or (i + 1, j + 1) not in pat:
                    if v != dom.rzero:
                        raise GroupError(
                            "entry (%d,%d) must be zero" % (i + 1, j + 1))

    def elements(self):
        """All group elements, in canonical (diagonal, then pattern-slot) order."""
        dom = self.domain
        zero = dom.rzero
        slots = list(self.pattern)
        diag_choices = [tuple(s.raw for s in sub) for sub in self.subgroups]
        slot_values = tuple(s.raw for s in dom.elements())
        for diag in itertools.product(*diag_choices):
            for fill in itertools.product(slot_values, repeat=len(slots)):
                rows = [[zero] * self.m for _ in range(self.m)]
                for i in range(self.m):
                    rows[i][i] = diag[i]
                for (i, j), v in zip(slots, fill):
                    rows[i - 1][j - 1] = v
                yield GroupElement(self, tuple(tuple(r) for r in rows))

    def __repr__(self):
        return "SemipatternGroup(q=%d, m=%d, pattern=%s, orders=%s)" % (
            self.domain.size, self.m, list(self.pattern), list(self.orders))


class GroupElement:
    """Upper triangular matrix over the group's field; immutable."""

    __slots__ = ("group", "rows")

    def __init__(self, group, rows):
        self.group = group
        self.rows = rows  # raw scalar values, tuple of tuples

    def scalar(self, i, j) -> Scalar:
        """Entry at 1-based position (i, j)."""
        return Scalar(self.group.domain, self.rows[i - 1][j - 1])

    def __mul__(self, other):
        if not isinstance(other, GroupElement) or other.group != self.group:
            return NotImplemented
        return multiply(self, other)

    def inverse(self) -> "GroupElement":
        """Exact inverse by back substitution; stays in the group."""
        g = self.group
        dom = g.domain
        m = g.m
        rows = self.rows
        inv = [[dom.rzero] * m for _ in range(m)]
        for i in range(m):
            inv[i][i] = dom.rinv(rows[i][i])
        for i in range(m - 1, -1, -1):  # rows below i must be ready first
            for j in range(i + 1, m):
                acc = dom.rzero
                for l in range(i + 1, j + 1):
                    acc = dom.radd(acc, dom.rmul(rows[i][l], inv[l][j]))
                inv[i][j] = dom.rneg(dom.rmul(dom.rinv(rows[i][i]), acc))
        result = GroupElement(g, tuple(tuple(r) for r in inv))
        g._check_membership(result.rows)
        return result

    def __eq__(self, other):
        return (isinstance(other, GroupElement)
                and self.group == other.group and self.rows == other.rows)

    def __hash__(self):
        return hash(self.rows)

    def __repr__(self):
        enc = self.group.domain.encode
        return "[%s]" % ",".join(
            "[%s]" % ",".join(str(enc(v)) for v in row) for row in self.rows)


def make_group(domain, m: int, pattern, orders) -> SemipatternGroup:
    """Validate and build a semipattern group descriptor.

    The pattern must satisfy the closure condition (i,j),(j,k) in P implies
    (i,k) in P; a violation is reported with the witnessing triple.  Each
    diagonal order must divide q - 1.
    """
    if getattr(domain, "kind", None) != "field":
        raise GroupError("semipattern groups live over a field domain")
    if m < 1:
        raise GroupError("matrix size must be positive")
    pat = set()
    for i, j in pattern:
        if not (1 <= i < j <= m):
            raise GroupError("pattern position (%d,%d) out of range" % (i, j))
        pat.add((i, j))
    for (i, j) in sorted(pat):
        for (j2, k) in sorted(pat):
            if j2 == j and (i, k) not in pat:
                raise PatternError(i, j, k)
    orders = tuple(int(d) for d in orders)
    if len(orders) != m:
        raise GroupError("expected %d diagonal orders, got %d" % (m, len(orders)))
    try:
        subgroups = tuple(subgroup_of_order(domain, d) for d in orders)
    except DomainError as exc:
        raise GroupError("bad diagonal subgroup order: %s" % exc) from exc
    return SemipatternGroup(domain, m, tuple(sorted(pat)), orders, subgroups)


def full_pattern(m: int):
    return tuple((i, j) for i in range(1, m + 1) for j in range(i + 1, m + 1))


def unitriangular_group(domain, m: int) -> SemipatternGroup:
    """UT(m, GF(q)): full pattern, trivial diagonal."""
    return make_group(domain, m, full_pattern(m), (1,) * m)


def multiply(a: GroupElement, b: GroupElement) -> GroupElement:
    """Matrix product; validates that the result stays in the group."""
    if a.group != b.group:
        raise GroupError("elements of different groups")
    g = a.group
    dom = g.domain
    m = g.m
    radd, rmul, zero = dom.radd, dom.rmul, dom.rzero
    ra, rb = a.rows, b.rows
    rows = []
    for i in range(m):
        row = [zero] * m
        for j in range(i, m):
            acc = zero
            for l in range(i, j + 1):
                acc = radd(acc, rmul(ra[i][l], rb[l][j]))
            row[j] = acc
        rows.append(tuple(row))
    result = GroupElement(g, tuple(rows))
    g._check_membership(result.rows)
    return result


# -- words --------------------------------------------------------------------
#
# A word is a sequence whose letters are GroupElement constants or variable
# name strings.

def word_variables(word):
    """Distinct variable names in order of first occurrence."""
    seen = {}
    for letter in word:
        if isinstance(letter, str):
            seen.setdefault(letter, None)
    return tuple(seen)


def evaluate_word(group: SemipatternGroup, word, assignment) -> GroupElement:
    """Left-to-right product of the letters; the empty word gives the identity."""
    result = group.identity()
    for letter in word:
        if isinstance(letter, str):
            try:
                value = assignment[letter]
            except KeyError:
                raise GroupError("no value for word variable %r" % letter) from None
            if not isinstance(value, GroupElement) or value.group != group:
                raise GroupError("value for %r is not an element of the group"
                                 % letter)
        else:
            value = letter
            if value.group != group:
                raise GroupError("constant letter from a different group")
        result = multiply(result, value)
    return result


def exponent_bound(group: SemipatternGroup) -> int:
    """E with g^E = identity for every g: p^ceil(log_p m) * lcm of the orders."""
    p = group.domain.p
    e = 0
    while p ** e < group.m:
        e += 1
    return (p ** e) * math.lcm(*group.orders)


def invert_word(group: SemipatternGroup, word):
    """Word w' with w'(a) = w(a)^-1 for every assignment.

    The word is reversed; constant letters are inverted as matrices and each
    variable letter x becomes E - 1 consecutive copies of x, where E is the
    group exponent bound.
    """
    e = exponent_bound(group)
    out = []
    for letter in reversed(word):
        if isinstance(letter, str):
            out.extend([letter] * (e - 1))
        else:
            out.append(letter.inverse())
    return tuple(out)


# -- enumeration and the brute-force oracle -----------------------------------

@lru_cache(maxsize=None)
def element_list(group: SemipatternGroup):
    """Canonically ordered tuple of all elements (cached)."""
    return tuple(group.elements())


@lru_cache(maxsize=None)
def _cayley(group: SemipatternGroup):
    """(elements, index map, multiplication table) for table-driven evaluation."""
    elems = element_list(group)
    n = len(elems)
    index = {el: i for i, el in enumerate(elems)}
    table = np.empty((n, n), dtype=np.int32)
    for i, a in enumerate(elems):
        for j, b in enumerate(elems):
            table[i, j] = index[multiply(a, b)]
    return elems, index, table


def _word_over_grid(group, word, names, coords, table, index):
    """Evaluate a word over vectorized per-variable element-index arrays."""
    pos = {name: i for i, name in enumerate(names)}
    cur = np.full(coords.shape[1], index[group.identity()], dtype=np.int32)
    for letter in word:
        if isinstance(letter, str):
            col = coords[pos[letter]]
        else:
            col = index[letter]
        cur = table[cur, col]
    return cur


def brute_force_solve(group: SemipatternGroup, word, target,
                      guard: int = DEFAULT_GUARD) -> Decision:
    """Exhaustive oracle: SAT with the first witness in canonical order.

    The target may be a constant element or another word.  Assignments are
    scanned lexicographically over (variables in first occurrence order) x
    (elements in canonical enumeration order); the witness is re-verified
    through evaluate_word before it is returned.
    """
    word = tuple(word)
    target_is_word = not isinstance(target, GroupElement)
    if target_is_word:
        target = tuple(target)
        names = word_variables(word + target)
    else:
        names = word_variables(word)
    v = len(names)
    size = group.order
    space = size ** v
    if space > guard:
        raise GuardExceeded(space, guard)
    stats = SolveStats()

    def check(assignment):
        left = evaluate_word(group, word, assignment)
        right = (evaluate_word(group, target, assignment) if target_is_word
                 else target)
        return left == right

    if v == 0:
        stats.explored = 1
        ok = check({})
        return Decision(ok, {} if ok else None, stats)

    if size <= _TABLE_LIMIT:
        elems, index, table = _cayley(group)
        chunk = 1 << 16
        for start in range(0, space, chunk):
            stop = min(space, start + chunk)
            flat = np.arange(start, stop, dtype=np.int64)
            coords = np.empty((v, stop - start), dtype=np.int64)
            rest = flat
            for d in range(v - 1, -1, -1):
                coords[d] = rest % size
                rest = rest // size
            cur = _word_over_grid(group, word, names, coords, table, index)
            if target_is_word:
                hits = np.nonzero(cur == _word_over_grid(
                    group, target, names, coords, table, index))[0]
            else:
                hits = np.nonzero(cur == index[target])[0]
            if hits.size:
                first = int(hits[0])
                stats.explored = start + first + 1
                witness = {name: elems[int(coords[d][first])]
                           for d, name in enumerate(names)}
                if not check(witness):
                    raise RuntimeError("internal error: oracle witness failed")
                return Decision(True, witness, stats)
        stats.explored = space
        return Decision(False, None, stats)

    for combo in itertools.product(element_list(group), repeat=v):
        stats.explored += 1
        witness = dict(zip(names, combo))
        if check(witness):
            return Decision(True, witness, stats)
    return Decision(False, None, stats)


def words_agree_everywhere(group: SemipatternGroup, f, g,
                           guard: int = DEFAULT_GUARD):
    """Exhaustively compare two words at every substitution.

    Returns (True, None) when they agree everywhere, else (False, assignment)
    with the first separating substitution in canonical order.
    """
    names = word_variables(tuple(f) + tuple(g))
    v = len(names)
    size = group.order
    space = size ** v
    if space > guard:
        raise GuardExceeded(space, guard)
    if v == 0:
        same = evaluate_word(group, f, {}) == evaluate_word(group, g, {})
        return (same, None if same else {})
    if size <= _TABLE_LIMIT:
        elems, index, table = _cayley(group)
        chunk = 1 << 16
        for start in range(0, space, chunk):
            stop = min(space, start + chunk)
            flat = np.arange(start, stop, dtype=np.int64)
            coords = np.empty((v, stop - start), dtype=np.int64)
            rest = flat
            for d in range(v - 1, -1, -1):
                coords[d] = rest % size
                rest = rest // size
            left = _word_over_grid(group, f, names, coords, table, index)
            right = _word_over_grid(group, g, names, coords, table, index)
            diffs = np.nonzero(left != right)[0]
            if diffs.size:
                first = int(diffs[0])
                return False, {name: elems[int(coords[d][first])]
                               for d, name in enumerate(names)}
        return True, None
    for combo in itertools.product(element_list(group), repeat=v):
        assignment = dict(zip(names, combo))
        if (evaluate_word(group, f, assignment)
                != evaluate_word(group, g, assignment)):
            return False, assignment
    return True, None
