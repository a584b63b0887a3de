"""Finite posets and lattices backed by a dense order relation.

Elements are opaque hashable labels mapped to dense integer indices at
construction time.  The stored element order is always a linear extension
of the partial order, so the ``leq`` matrix is upper triangular with a
True diagonal.  Posets are immutable once built and safe for concurrent
reads; derived structures (cover relation, meet/join tables, Mobius
table) are computed lazily and cached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property, reduce

import numpy as np


class PosetError(ValueError):
    """Malformed poset input: cycles, duplicate labels, bad covers, bad files."""


class LatticeError(PosetError):
    """A lattice operation failed: missing meet/join, or no bottom/top."""


# status codes used in the cached meet/join tables
_OK, _NO_BOUND, _NOT_UNIQUE = 0, 1, 2


def _transitive_closure(rel: np.ndarray) -> np.ndarray:
    n = rel.shape[0]
    reach = rel | np.eye(n, dtype=bool)
    while True:
        nxt = reach | (reach @ reach)
        if np.array_equal(nxt, reach):
            return reach
        reach = nxt


class Poset:
    """A finite partially ordered set with a precomputed order relation."""

    def __init__(self, labels, leq: np.ndarray, _validate: bool = True):
        labels = list(labels)
        leq = np.asarray(leq, dtype=bool)
        if _validate:
            n = len(labels)
            if len(set(labels)) != n:
                raise PosetError("duplicate element labels")
            if leq.shape != (n, n):
                raise PosetError("leq matrix shape does not match element count")
            if not leq.diagonal().all():
                raise PosetError("order relation is not reflexive")
            if (leq & leq.T & ~np.eye(n, dtype=bool)).any():
                raise PosetError("order relation is not antisymmetric")
            if ((leq @ leq) & ~leq).any():
                raise PosetError("order relation is not transitive")
            if np.tril(leq, -1).any():
                raise PosetError("element order is not a linear extension")
        self._labels = tuple(labels)
        self._index = {x: i for i, x in enumerate(self._labels)}
        leq = leq.copy()
        leq.setflags(write=False)
        self._leq = leq

    # -- basic queries ----------------------------------------------------

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label) -> bool:
        return label in self._index

    def __repr__(self) -> str:
        if len(self) <= 8:
            return f"Poset({list(self._labels)})"
        return f"Poset(<{len(self)} elements>)"

    @property
    def elements(self) -> tuple:
        return self._labels

    @property
    def leq_matrix(self) -> np.ndarray:
        return self._leq

    def index_of(self, label) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise PosetError(f"unknown element {label!r}") from None

    def label_of(self, i: int):
        return self._labels[i]

    def leq(self, x, y) -> bool:
        return bool(self._leq[self.index_of(x), self.index_of(y)])

    def comparable(self, x, y) -> bool:
        i, j = self.index_of(x), self.index_of(y)
        return bool(self._leq[i, j] or self._leq[j, i])

    @cached_property
    def covers(self) -> list:
        """Cover pairs (x, y) with x covered by y."""
        strict = self._leq & ~np.eye(len(self), dtype=bool)
        cov = strict & ~(strict @ strict)
        return [(self._labels[i], self._labels[j]) for i, j in zip(*np.nonzero(cov))]

    @cached_property
    def _bottom_index(self):
        return 0 if len(self) and self._leq[0].all() else None

    @cached_property
    def _top_index(self):
        n = len(self)
        return n - 1 if n and self._leq[:, n - 1].all() else None

    @property
    def has_bottom(self) -> bool:
        return self._bottom_index is not None

    @property
    def has_top(self) -> bool:
        return self._top_index is not None

    @property
    def bottom(self):
        return None if self._bottom_index is None else self._labels[self._bottom_index]

    @property
    def top(self):
        return None if self._top_index is None else self._labels[self._top_index]

    # -- meets and joins ---------------------------------------------------

    @cached_property
    def _meet_data(self):
        # For each pair, the greatest lower bound has the largest index among
        # common lower bounds (the element order is a linear extension), so it
        # suffices to locate that candidate and verify it dominates the rest.
        leq = self._leq
        n = len(self)
        table = np.zeros((n, n), dtype=np.int64)
        status = np.full((n, n), _NO_BOUND, dtype=np.int8)
        for i in range(n):
            cand = leq[:, i : i + 1] & leq  # cand[z, j]: z below both i and j
            has = cand.any(axis=0)
            best = n - 1 - np.argmax(cand[::-1, :], axis=0)
            dominated = ~(cand & ~leq[:, best]).any(axis=0)
            table[i, :] = best
            status[i, has & dominated] = _OK
            status[i, has & ~dominated] = _NOT_UNIQUE
        return table, status

    @cached_property
    def _join_data(self):
        leq = self._leq
        n = len(self)
        table = np.zeros((n, n), dtype=np.int64)
        status = np.full((n, n), _NO_BOUND, dtype=np.int8)
        above = leq.T  # above[z, x]: z is an upper bound of x
        for i in range(n):
            cand = above[:, i : i + 1] & above
            has = cand.any(axis=0)
            best = np.argmax(cand, axis=0)  # least upper bound has smallest index
            dominated = ~(cand & ~leq[best, :].T).any(axis=0)
            table[i, :] = best
            status[i, has & dominated] = _OK
            status[i, has & ~dominated] = _NOT_UNIQUE
        return table, status

    def _meet_index(self, i: int, j: int) -> int:
        table, status = self._meet_data
        if status[i, j] == _NO_BOUND:
            raise LatticeError(
                f"no common lower bound of {self._labels[i]!r} and {self._labels[j]!r}"
            )
        if status[i, j] == _NOT_UNIQUE:
            raise LatticeError(
                f"greatest lower bound of {self._labels[i]!r} and {self._labels[j]!r} "
                "is not unique (not a lattice at this pair)"
            )
        return int(table[i, j])

    def _join_index(self, i: int, j: int) -> int:
        table, status = self._join_data
        if status[i, j] == _NO_BOUND:
            raise LatticeError(
                f"no common upper bound of {self._labels[i]!r} and {self._labels[j]!r}"
            )
        if status[i, j] == _NOT_UNIQUE:
            raise LatticeError(
                f"least upper bound of {self._labels[i]!r} and {self._labels[j]!r} "
                "is not unique (not a lattice at this pair)"
            )
        return int(table[i, j])

    def meet(self, x, y):
        """Greatest lower bound of x and y; raises LatticeError if undefined."""
        return self._labels[self._meet_index(self.index_of(x), self.index_of(y))]

    def join(self, x, y):
        """Least upper bound of x and y; raises LatticeError if undefined."""
        return self._labels[self._join_index(self.index_of(x), self.index_of(y))]

    def is_lattice(self) -> bool:
        """True iff every pair of elements has a unique meet and a unique join."""
        _, mstat = self._meet_data
        _, jstat = self._join_data
        return bool((mstat == _OK).all() and (jstat == _OK).all())

    # -- Mobius function ---------------------------------------------------

    def mobius(self) -> "MobiusTable":
        return self._mobius

    @cached_property
    def _mobius(self) -> "MobiusTable":
        # The zeta matrix is unit upper triangular under a linear extension;
        # its inverse is the Mobius matrix.  Both recursion directions amount
        # to the right and the left inverse, computed independently and
        # cross-checked.
        z = self._leq.astype(np.int64)
        n = len(self)
        right = np.eye(n, dtype=np.int64)
        for i in range(n - 2, -1, -1):
            row = -(z[i, i + 1 :] @ right[i + 1 :, :])
            row[i] += 1
            right[i, :] = row
        left = np.eye(n, dtype=np.int64)
        for j in range(1, n):
            col = -(left[:, :j] @ z[:j, j])
            col[j] += 1
            left[:, j] = col
        if not np.array_equal(left, right):
            raise RuntimeError("Mobius recursion directions disagree")
        right.setflags(write=False)
        return MobiusTable(self, right)

    # -- subsets and intervals ----------------------------------------------

    def subset(self, labels, *, reorder: bool = True) -> "ElementSubset":
        """Wrap labels as an ElementSubset of this poset.

        With reorder=True (default) the members are sorted by their position
        in the poset, which always yields an admissible enumeration
        (comparable members appear in order).  With reorder=False the given
        order is validated instead.
        """
        indices = [self.index_of(x) for x in labels]
        if len(set(indices)) != len(indices):
            raise PosetError("subset members must be distinct")
        if reorder:
            indices.sort()
        return ElementSubset(self, indices)

    def interval(self, a, b) -> "Poset":
        """The closed interval between a and b as a sub-poset."""
        ia, ib = self.index_of(a), self.index_of(b)
        if not self._leq[ia, ib]:
            raise PosetError(f"{a!r} is not below {b!r}; interval is undefined")
        keep = np.nonzero(self._leq[ia, :] & self._leq[:, ib])[0]
        sub = self._leq[np.ix_(keep, keep)]
        return Poset([self._labels[k] for k in keep], sub, _validate=False)

    def dual(self) -> "Poset":
        """Order dual: elements reversed so the order stays a linear extension."""
        rev = self._leq[::-1, ::-1].T
        return Poset(self._labels[::-1], rev, _validate=False)


class ElementSubset:
    """An ordered subset S of a poset, the index set of a matrix.

    The canonical ordering (produced by ``Poset.subset``) places comparable
    members in order: x_i below x_j implies i <= j.  Outputs of
    ``order_ideal``/``order_filter`` put the generating set first instead,
    which matrix factorizations rely on; those orderings may break the
    comparability convention for the trailing elements and are not
    revalidated.
    """

    def __init__(self, parent: Poset, indices, validate: bool = True):
        self.parent = parent
        self.indices = tuple(int(i) for i in indices)
        if len(set(self.indices)) != len(self.indices):
            raise PosetError("subset members must be distinct")
        if validate:
            leq = parent._leq
            for a, i in enumerate(self.indices):
                for b in range(a):
                    if leq[i, self.indices[b]]:
                        raise PosetError(
                            f"subset order violates the comparability convention: "
                            f"{parent.label_of(i)!r} precedes {parent.label_of(self.indices[b])!r} "
                            "in the order but follows it in the subset"
                        )
        self._member_set = frozenset(self.indices)

    def __len__(self) -> int:
        return len(self.indices)

    def __contains__(self, label) -> bool:
        return label in self.parent and self.parent.index_of(label) in self._member_set

    def __repr__(self) -> str:
        return f"ElementSubset({list(self.labels)})"

    @property
    def labels(self) -> tuple:
        return tuple(self.parent.label_of(i) for i in self.indices)

    def is_meet_closed(self) -> bool:
        """True iff the meet of every member pair is again a member."""
        for a, i in enumerate(self.indices):
            for j in self.indices[: a + 1]:
                if self.parent._meet_index(i, j) not in self._member_set:
                    return False
        return True

    def is_join_closed(self) -> bool:
        for a, i in enumerate(self.indices):
            for j in self.indices[: a + 1]:
                if self.parent._join_index(i, j) not in self._member_set:
                    return False
        return True

    def order_ideal(self) -> "ElementSubset":
        """Downward closure of S, ordered with the members of S first.

        The remaining ideal elements follow in poset order.  Requires the
        parent to have a bottom element.
        """
        if not self.parent.has_bottom:
            raise LatticeError("order ideal requires a bottom element")
        mask = self.parent._leq[:, list(self.indices)].any(axis=1)
        rest = [k for k in np.nonzero(mask)[0] if k not in self._member_set]
        return ElementSubset(self.parent, list(self.indices) + rest, validate=False)

    def order_filter(self) -> "ElementSubset":
        """Upward closure of S, ordered with the members of S first."""
        if not self.parent.has_top:
            raise LatticeError("order filter requires a top element")
        mask = self.parent._leq[list(self.indices), :].any(axis=0)
        rest = [k for k in np.nonzero(mask)[0] if k not in self._member_set]
        return ElementSubset(self.parent, list(self.indices) + rest, validate=False)

    def meet_of_all(self):
        return reduce(self.parent.meet, self.labels)

    def join_of_all(self):
        return reduce(self.parent.join, self.labels)

    def bounding_interval(self) -> Poset:
        """The interval from the meet of S to the join of S."""
        return self.parent.interval(self.meet_of_all(), self.join_of_all())


@dataclass(frozen=True, repr=False)
class MobiusTable:
    """Mobius function of a poset as a dense integer matrix.

    ``matrix[i, j]`` holds the value for the elements at indices i, j; it is
    zero whenever the two are incomparable.
    """

    poset: Poset
    matrix: np.ndarray

    def value(self, x, y) -> int:
        return int(self.matrix[self.poset.index_of(x), self.poset.index_of(y)])

    def __repr__(self) -> str:
        return f"MobiusTable(<{len(self.poset)} elements>)"


# -- constructors ----------------------------------------------------------


def from_cover_relations(labels, covers) -> Poset:
    """Build a poset from its cover pairs (x, y) meaning x is covered by y."""
    labels = list(labels)
    if len(set(labels)) != len(labels):
        raise PosetError("duplicate element labels")
    pos = {x: i for i, x in enumerate(labels)}
    n = len(labels)
    succ = [[] for _ in range(n)]
    indeg = [0] * n
    for x, y in covers:
        if x not in pos or y not in pos:
            missing = x if x not in pos else y
            raise PosetError(f"cover references unknown label {missing!r}")
        succ[pos[x]].append(pos[y])
        indeg[pos[y]] += 1

    # Kahn topological sort, deterministic: ready nodes taken in input order.
    order = []
    ready = sorted(i for i in range(n) if indeg[i] == 0)
    while ready:
        i = ready.pop(0)
        order.append(i)
        changed = False
        for j in succ[i]:
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
                changed = True
        if changed:
            ready.sort()
    if len(order) != n:
        raise PosetError("cycle detected in cover relations")

    rank = {old: new for new, old in enumerate(order)}
    cov = np.zeros((n, n), dtype=bool)
    for x, y in covers:
        cov[rank[pos[x]], rank[pos[y]]] = True
    leq = _transitive_closure(cov)
    return Poset([labels[i] for i in order], leq)


def divisor_poset(integers) -> Poset:
    """The given positive integers ordered by divisibility, sorted ascending."""
    vals = sorted(set(int(v) for v in integers))
    if not vals:
        raise PosetError("divisor poset needs at least one element")
    if vals[0] < 1:
        raise PosetError("divisor poset entries must be positive")
    a = np.array(vals, dtype=np.int64)
    leq = (a[None, :] % a[:, None]) == 0
    return Poset(vals, leq, _validate=False)


def chain_poset(n: int) -> Poset:
    """The total order 1 < 2 < ... < n."""
    if n < 1:
        raise PosetError("chain length must be at least 1")
    leq = np.triu(np.ones((n, n), dtype=bool))
    return Poset(range(1, n + 1), leq, _validate=False)


def divisors_of(m: int) -> list:
    """All positive divisors of m, ascending."""
    if m < 1:
        raise PosetError("argument must be a positive integer")
    small = [d for d in range(1, int(math.isqrt(m)) + 1) if m % d == 0]
    large = [m // d for d in reversed(small) if d * d != m]
    return small + large


def gcd_lcm_closure(integers) -> list:
    """Close a set of positive integers under pairwise gcd and lcm."""
    current = set(int(v) for v in integers)
    if not current or min(current) < 1:
        raise PosetError("closure needs positive integers")
    while True:
        new = set()
        vals = sorted(current)
        for a, x in enumerate(vals):
            for y in vals[: a + 1]:
                g = math.gcd(x, y)
                l = x * y // g
                if g not in current:
                    new.add(g)
                if l not in current:
                    new.add(l)
        if not new:
            return sorted(current)
        current |= new


def divisor_lattice(integers) -> Poset:
    """Divisibility lattice generated by a set: its gcd/lcm closure."""
    return divisor_poset(gcd_lcm_closure(integers))


# -- text format -----------------------------------------------------------
#
# Line-oriented UTF-8:
#   # comment                      (ignored, as are blank lines)
#   elements: a b c d              (whitespace-separated labels)
#   covers:                        (header; then one pair per line)
#   a b                            (a covered by b)
# or the single-line shorthand
#   divisors: 1 2 3 4 6 12
# Numeric-looking labels are read as integers.


def _parse_label(token: str):
    try:
        return int(token)
    except ValueError:
        return token


def parse_poset(text: str) -> Poset:
    """Parse the poset text format; errors report 1-based line numbers."""
    labels = None
    covers = []
    in_covers = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("divisors:"):
            if labels is not None or in_covers:
                raise PosetError(f"line {lineno}: 'divisors:' cannot be mixed with other sections")
            toks = line[len("divisors:") :].split()
            if not toks:
                raise PosetError(f"line {lineno}: 'divisors:' needs at least one integer")
            try:
                ints = [int(t) for t in toks]
            except ValueError:
                raise PosetError(f"line {lineno}: 'divisors:' entries must be integers") from None
            if min(ints) < 1:
                raise PosetError(f"line {lineno}: 'divisors:' entries must be positive")
            return divisor_poset(ints)
        if line.startswith("elements:"):
            if labels is not None:
                raise PosetError(f"line {lineno}: duplicate 'elements:' line")
            labels = [_parse_label(t) for t in line[len("elements:") :].split()]
            if not labels:
                raise PosetError(f"line {lineno}: 'elements:' needs at least one label")
            continue
        if line == "covers:":
            if labels is None:
                raise PosetError(f"line {lineno}: 'covers:' before 'elements:'")
            in_covers = True
            continue
        if in_covers:
            toks = line.split()
            if len(toks) != 2:
                raise PosetError(f"line {lineno}: cover line must have exactly two labels")
            covers.append((_parse_label(toks[0]), _parse_label(toks[1])))
            continue
        raise PosetError(f"line {lineno}: unrecognized content {line!r}")
    if labels is None:
        raise PosetError("no 'elements:' or 'divisors:' line found")
    try:
        return from_cover_relations(labels, covers)
    except PosetError as exc:
        raise PosetError(f"invalid poset description: {exc}") from None


def format_poset(p: Poset) -> str:
    lines = ["elements: " + " ".join(str(x) for x in p.elements), "covers:"]
    lines += [f"{x} {y}" for x, y in p.covers]
    return "\n".join(lines) + "\n"


def load_poset(path) -> Poset:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_poset(fh.read())
