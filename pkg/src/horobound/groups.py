"""Exact elements and validated descriptions for four computable group families.

Families:

* ``fg_abelian``     -- Z^d x Z/t_1 x ... x Z/t_k, elements are integer tuples
                        with torsion coordinates reduced.
* ``vab_extension``  -- Z^d extended by a finite quotient Q: pairs (v, q) with
                        unimodular action matrices and an integral 2-cocycle.
* ``finite``         -- an explicit multiplication table, identity at index 0.
* ``lamplighter_z2`` -- (sum_Z Z/2) x| Z, elements (finite lamp support, shift).

Every element is stored in a canonical form, so equality of stored data is
equality in the group; this is what makes breadth-first searches over balls
exact. All structural invariants are checked eagerly at build time.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .errors import (
    BadCocycle,
    DoesNotGenerate,
    GroupMismatch,
    IdentityGenerator,
    NonUnimodularAction,
    TableNotGroup,
)
from .linalg import (
    identity_matrix,
    lattice_index,
    mat_det,
    mat_inv_int,
    mat_mul,
    mat_vec,
)

IntVec = tuple[int, ...]
IntMatrix = tuple[IntVec, ...]

__all__ = [
    "Element",
    "Group",
    "FgAbelianSpec",
    "VAbExtensionSpec",
    "FiniteGroupSpec",
    "LamplighterZ2Spec",
    "GroupSpec",
    "GeneratingSet",
    "build_group",
    "multiply",
    "inverse",
    "symmetric_generating_set",
    "cyclic_table",
    "direct_product_table",
]


# ---------------------------------------------------------------------------
# specs


@dataclass(frozen=True)
class FgAbelianSpec:
    """Z^free_rank times the product of Z/t for t in torsion."""

    free_rank: int
    torsion: tuple[int, ...] = ()


@dataclass(frozen=True)
class VAbExtensionSpec:
    """Z^rank twisted by a finite quotient.

    ``quotient_table[q][p]`` is the product in Q (identity at index 0),
    ``action[q]`` the matrix by which q acts on Z^rank, and
    ``cocycle[q][p]`` the correction vector entering (v,q)*(w,p) =
    (v + action[q] w + cocycle[q][p], q p).
    """

    rank: int
    quotient_table: tuple[tuple[int, ...], ...]
    action: tuple[IntMatrix, ...]
    cocycle: tuple[tuple[IntVec, ...], ...]


@dataclass(frozen=True)
class FiniteGroupSpec:
    table: tuple[tuple[int, ...], ...]


@dataclass(frozen=True)
class LamplighterZ2Spec:
    pass


GroupSpec = Union[FgAbelianSpec, VAbExtensionSpec, FiniteGroupSpec, LamplighterZ2Spec]


def cyclic_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Multiplication table of Z/n with identity at index 0."""
    if n < 1:
        raise ValueError(f"cyclic order must be >= 1, got {n}")
    return tuple(tuple((i + j) % n for j in range(n)) for i in range(n))


def direct_product_table(orders: Sequence[int]) -> tuple[tuple[int, ...], ...]:
    """Table of a product of cyclic groups, indexed in mixed radix."""
    size = 1
    for t in orders:
        size *= t

    def decode(i: int) -> list[int]:
        out = []
        for t in orders:
            out.append(i % t)
            i //= t
        return out

    def encode(coords: Sequence[int]) -> int:
        i = 0
        for t, c in zip(reversed(orders), reversed(list(coords))):
            i = i * t + c
        return i

    rows = []
    for i in range(size):
        a = decode(i)
        rows.append(
            tuple(
                encode([(x + y) % t for x, y, t in zip(a, decode(j), orders)])
                for j in range(size)
            )
        )
    return tuple(rows)


# ---------------------------------------------------------------------------
# elements


@dataclass(frozen=True, slots=True)
class Element:
    """A group element: a group handle plus canonical payload data."""

    group: "Group"
    data: tuple

    def __mul__(self, other: "Element") -> "Element":
        return self.group.mul(self, other)

    def inverse(self) -> "Element":
        return self.group.inv(self)

    def __pow__(self, n: int) -> "Element":
        g = self.group
        if n < 0:
            return g.inv(self) ** (-n)
        acc = g.identity_data()
        base = self.data
        while n:
            if n & 1:
                acc = g.mul_data(acc, base)
            base = g.mul_data(base, base)
            n >>= 1
        return Element(g, acc)

    def is_identity(self) -> bool:
        return self.data == self.group.identity_data()

    def __str__(self) -> str:
        return self.group.format_data(self.data)

    def __repr__(self) -> str:
        return f"Element({self})"


class Group:
    """Shared machinery; subclasses provide the data-level operations."""

    family = "abstract"

    # data-level interface -------------------------------------------------
    def identity_data(self) -> tuple:
        raise NotImplementedError

    def mul_data(self, a: tuple, b: tuple) -> tuple:
        raise NotImplementedError

    def inv_data(self, a: tuple) -> tuple:
        raise NotImplementedError

    def canonical(self, data) -> tuple:
        raise NotImplementedError

    def format_data(self, data: tuple) -> str:
        raise NotImplementedError

    def parse(self, text: str) -> Element:
        raise NotImplementedError

    def describe(self) -> dict:
        raise NotImplementedError

    # element-level wrappers ------------------------------------------------
    def identity(self) -> Element:
        return Element(self, self.identity_data())

    def element(self, data) -> Element:
        return Element(self, self.canonical(data))

    def mul(self, a: Element, b: Element) -> Element:
        if a.group is not self or b.group is not self:
            raise GroupMismatch(f"cannot multiply across groups: {a!r} * {b!r}")
        return Element(self, self.mul_data(a.data, b.data))

    def inv(self, a: Element) -> Element:
        if a.group is not self:
            raise GroupMismatch(f"element {a!r} does not belong to this group")
        return Element(self, self.inv_data(a.data))


def multiply(a: Element, b: Element) -> Element:
    """Product a * b; errors if the elements live in different groups."""
    if a.group is not b.group:
        raise GroupMismatch(f"cannot multiply across groups: {a!r} * {b!r}")
    return a * b


def inverse(a: Element) -> Element:
    return a.inverse()


# ---------------------------------------------------------------------------
# family: finitely generated abelian


class FgAbelianGroup(Group):
    family = "fg_abelian"

    def __init__(self, spec: FgAbelianSpec):
        if spec.free_rank < 0:
            raise ValueError(f"free rank must be >= 0, got {spec.free_rank}")
        for t in spec.torsion:
            if t < 2:
                raise ValueError(f"torsion orders must be >= 2, got {t}")
        self.spec = spec
        self.free_rank = spec.free_rank
        self.torsion = tuple(spec.torsion)
        self._n = self.free_rank + len(self.torsion)

    def identity_data(self) -> tuple:
        return (0,) * self._n

    def canonical(self, data) -> tuple:
        coords = tuple(int(x) for x in data)
        if len(coords) != self._n:
            raise ValueError(
                f"expected {self._n} coordinates, got {len(coords)}"
            )
        free = coords[: self.free_rank]
        tors = tuple(c % t for c, t in zip(coords[self.free_rank:], self.torsion))
        return free + tors

    def mul_data(self, a: tuple, b: tuple) -> tuple:
        d = self.free_rank
        free = tuple(a[i] + b[i] for i in range(d))
        tors = tuple((a[d + i] + b[d + i]) % t for i, t in enumerate(self.torsion))
        return free + tors

    def inv_data(self, a: tuple) -> tuple:
        d = self.free_rank
        free = tuple(-a[i] for i in range(d))
        tors = tuple((-a[d + i]) % t for i, t in enumerate(self.torsion))
        return free + tors

    def format_data(self, data: tuple) -> str:
        return "(" + ",".join(str(x) for x in data) + ")"

    def parse(self, text: str) -> Element:
        return self.element(_parse_int_tuple(text, self._n))

    def describe(self) -> dict:
        return {
            "family": self.family,
            "free_rank": self.free_rank,
            "torsion": list(self.torsion),
        }


# ---------------------------------------------------------------------------
# family: virtually abelian extension


def _check_table(table: Sequence[Sequence[int]], what: str) -> None:
    n = len(table)
    if n == 0:
        raise TableNotGroup(f"{what}: empty table")
    for row in table:
        if len(row) != n or any(not (0 <= x < n) for x in row):
            raise TableNotGroup(f"{what}: table is not square over 0..{n - 1}")
    for i in range(n):
        if table[0][i] != i or table[i][0] != i:
            raise TableNotGroup(f"{what}: index 0 is not a two-sided identity")
        if sorted(table[i]) != list(range(n)) or sorted(r[i] for r in table) != list(range(n)):
            raise TableNotGroup(f"{what}: row/column {i} is not a permutation")
    for a in range(n):
        for b in range(n):
            ab = table[a][b]
            for c in range(n):
                if table[ab][c] != table[a][table[b][c]]:
                    raise TableNotGroup(
                        f"{what}: associativity fails at ({a},{b},{c})"
                    )
    for a in range(n):
        if not any(table[a][b] == 0 and table[b][a] == 0 for b in range(n)):
            raise TableNotGroup(f"{what}: element {a} has no two-sided inverse")


def _table_inverses(table: Sequence[Sequence[int]]) -> tuple[int, ...]:
    n = len(table)
    return tuple(next(b for b in range(n) if table[a][b] == 0) for a in range(n))


class VAbExtensionGroup(Group):
    family = "vab_extension"

    def __init__(self, spec: VAbExtensionSpec):
        d = spec.rank
        if d < 0:
            raise ValueError(f"rank must be >= 0, got {d}")
        table = tuple(tuple(row) for row in spec.quotient_table)
        _check_table(table, "quotient")
        nq = len(table)
        action = tuple(tuple(tuple(row) for row in m) for m in spec.action)
        if len(action) != nq:
            raise BadCocycle(f"need one action matrix per quotient element: {len(action)} != {nq}")
        for q, m in enumerate(action):
            if len(m) != d or any(len(row) != d for row in m):
                raise BadCocycle(f"action matrix for q={q} is not {d}x{d}")
            if abs(mat_det(m)) != 1:
                raise NonUnimodularAction(
                    f"action matrix for q={q} has determinant {mat_det(m)}"
                )
        if action[0] != identity_matrix(d):
            raise BadCocycle("action at the quotient identity must be the identity matrix")
        for q in range(nq):
            for p in range(nq):
                if mat_mul(action[q], action[p]) != action[table[q][p]]:
                    raise BadCocycle(
                        f"action is not a homomorphism at ({q},{p})"
                    )
        cocycle = tuple(tuple(tuple(v) for v in row) for row in spec.cocycle)
        if len(cocycle) != nq or any(len(row) != nq for row in cocycle):
            raise BadCocycle("cocycle must be indexed by Q x Q")
        zero = (0,) * d
        for q in range(nq):
            if cocycle[0][q] != zero or cocycle[q][0] != zero:
                raise BadCocycle("cocycle must be normalized: c(1,q) = c(q,1) = 0")
            for v in cocycle[q]:
                if len(v) != d:
                    raise BadCocycle(f"cocycle vectors must have length {d}")
        for q in range(nq):
            for p in range(nq):
                for s in range(nq):
                    lhs = tuple(
                        x + y
                        for x, y in zip(mat_vec(action[q], cocycle[p][s]), cocycle[q][table[p][s]])
                    )
                    rhs = tuple(x + y for x, y in zip(cocycle[q][p], cocycle[table[q][p]][s]))
                    if lhs != rhs:
                        raise BadCocycle(f"cocycle identity fails at ({q},{p},{s})")
        self.spec = spec
        self.rank = d
        self.table = table
        self.action = action
        self.cocycle = cocycle
        self.quotient_order = nq
        self.q_inverse = _table_inverses(table)
        self._action_inv = tuple(mat_inv_int(m) for m in action)

    def identity_data(self) -> tuple:
        return ((0,) * self.rank, 0)

    def canonical(self, data) -> tuple:
        vec, q = data
        vec = tuple(int(x) for x in vec)
        q = int(q)
        if len(vec) != self.rank:
            raise ValueError(f"expected a rank-{self.rank} vector, got {vec}")
        if not (0 <= q < self.quotient_order):
            raise ValueError(f"quotient index {q} out of range")
        return (vec, q)

    def mul_data(self, a: tuple, b: tuple) -> tuple:
        v, q = a
        w, p = b
        tw = mat_vec(self.action[q], w)
        c = self.cocycle[q][p]
        return (tuple(x + y + z for x, y, z in zip(v, tw, c)), self.table[q][p])

    def inv_data(self, a: tuple) -> tuple:
        v, q = a
        p = self.q_inverse[q]
        c = self.cocycle[q][p]
        w = mat_vec(self._action_inv[q], tuple(-(x + y) for x, y in zip(v, c)))
        return (w, p)

    # extension-specific helpers -------------------------------------------
    def coset_of(self, data: tuple) -> int:
        return data[1]

    def in_kernel(self, data: tuple) -> bool:
        return data[1] == 0

    def xi(self, data: tuple) -> IntVec:
        """Coordinates of an element of the free abelian kernel."""
        if data[1] != 0:
            raise ValueError(f"{self.format_data(data)} is not in the free abelian kernel")
        return data[0]

    def kernel_element(self, vec: Sequence[int]) -> Element:
        return self.element((tuple(int(x) for x in vec), 0))

    def format_data(self, data: tuple) -> str:
        vec, q = data
        return "(" + ",".join(str(x) for x in vec) + f";{q})"

    def parse(self, text: str) -> Element:
        m = re.fullmatch(r"\s*\(([^;]*);\s*(-?\d+)\s*\)\s*", text)
        if not m:
            raise ValueError(f"cannot parse extension element from {text!r}")
        body = m.group(1).strip()
        vec = tuple(int(x) for x in body.split(",")) if body else ()
        return self.element((vec, int(m.group(2))))

    def describe(self) -> dict:
        return {
            "family": self.family,
            "rank": self.rank,
            "quotient_order": self.quotient_order,
            "action": [[list(r) for r in m] for m in self.action],
        }


# ---------------------------------------------------------------------------
# family: finite table group


class FiniteTableGroup(Group):
    family = "finite"

    def __init__(self, spec: FiniteGroupSpec):
        table = tuple(tuple(row) for row in spec.table)
        _check_table(table, "group")
        self.spec = spec
        self.table = table
        self.order = len(table)
        self.inverses = _table_inverses(table)

    def identity_data(self) -> tuple:
        return (0,)

    def canonical(self, data) -> tuple:
        if isinstance(data, int):
            data = (data,)
        (i,) = data
        i = int(i)
        if not (0 <= i < self.order):
            raise ValueError(f"index {i} out of range for group of order {self.order}")
        return (i,)

    def mul_data(self, a: tuple, b: tuple) -> tuple:
        return (self.table[a[0]][b[0]],)

    def inv_data(self, a: tuple) -> tuple:
        return (self.inverses[a[0]],)

    def format_data(self, data: tuple) -> str:
        return f"({data[0]})"

    def parse(self, text: str) -> Element:
        m = re.fullmatch(r"\s*\(?\s*(\d+)\s*\)?\s*", text)
        if not m:
            raise ValueError(f"cannot parse finite-group element from {text!r}")
        return self.element((int(m.group(1)),))

    def describe(self) -> dict:
        return {"family": self.family, "order": self.order}


# ---------------------------------------------------------------------------
# family: lamplighter over Z/2


class LamplighterGroup(Group):
    """(sum_Z Z/2) x| Z: data = (sorted tuple of lit lamp positions, shift)."""

    family = "lamplighter_z2"

    def __init__(self, spec: LamplighterZ2Spec | None = None):
        self.spec = spec or LamplighterZ2Spec()

    def identity_data(self) -> tuple:
        return ((), 0)

    def canonical(self, data) -> tuple:
        support, shift = data
        return (tuple(sorted(set(int(p) for p in support))), int(shift))

    def mul_data(self, a: tuple, b: tuple) -> tuple:
        sup_a, s = a
        sup_b, t = b
        moved = set(sup_a)
        moved.symmetric_difference_update(p + s for p in sup_b)
        return (tuple(sorted(moved)), s + t)

    def inv_data(self, a: tuple) -> tuple:
        sup, s = a
        return (tuple(sorted(p - s for p in sup)), -s)

    def format_data(self, data: tuple) -> str:
        sup, s = data
        return "({" + ",".join(str(p) for p in sup) + "};" + f"{s})"

    def parse(self, text: str) -> Element:
        m = re.fullmatch(r"\s*\(\{([^}]*)\}\s*;\s*(-?\d+)\s*\)\s*", text)
        if not m:
            raise ValueError(f"cannot parse lamplighter element from {text!r}")
        body = m.group(1).strip()
        sup = tuple(int(x) for x in body.split(",")) if body else ()
        return self.element((sup, int(m.group(2))))

    def describe(self) -> dict:
        return {"family": self.family}


# ---------------------------------------------------------------------------
# builder


def build_group(spec: GroupSpec) -> Group:
    """Validate a spec eagerly and return the group handle."""
    if isinstance(spec, FgAbelianSpec):
        return FgAbelianGroup(spec)
    if isinstance(spec, VAbExtensionSpec):
        return VAbExtensionGroup(spec)
    if isinstance(spec, FiniteGroupSpec):
        return FiniteTableGroup(spec)
    if isinstance(spec, LamplighterZ2Spec):
        return LamplighterGroup(spec)
    raise TypeError(f"unknown group spec: {spec!r}")


def _parse_int_tuple(text: str, expect: int) -> tuple:
    m = re.fullmatch(r"\s*\(([^()]*)\)\s*", text)
    if not m:
        raise ValueError(f"cannot parse element from {text!r}")
    body = m.group(1).strip()
    coords = tuple(int(x) for x in body.split(",")) if body else ()
    if len(coords) != expect:
        raise ValueError(f"expected {expect} coordinates in {text!r}")
    return coords


# ---------------------------------------------------------------------------
# generating sets


@dataclass(frozen=True)
class GeneratingSet:
    """Ordered, inverse-closed generating set with stable labels.

    ``verified`` records whether generation of the whole group was certified
    (exact for the abelian/extension/finite families, witness-based for the
    lamplighter).
    """

    elements: tuple[Element, ...]
    labels: tuple[str, ...]
    inverse_index: tuple[int, ...]
    verified: bool

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    @property
    def group(self) -> Group:
        return self.elements[0].group

    def label(self, i: int) -> str:
        return self.labels[i]

    def describe(self) -> dict:
        return {
            "elements": [str(s) for s in self.elements],
            "labels": list(self.labels),
            "verified": self.verified,
        }


def symmetric_generating_set(
    group: Group,
    elements: Iterable[Element],
    labels: Sequence[str] | None = None,
    *,
    witnesses: Iterable[Element] | None = None,
    witness_radius: int = 8,
) -> GeneratingSet:
    """Close the listed elements under inverse, label them, verify generation.

    Listed elements come first in their given order (duplicates dropped);
    missing inverses are appended as ``<label>^-1``. Verification is exact for
    the fg_abelian / vab_extension families (finite-quotient coset sweep plus
    an integer lattice index check on the kernel) and for finite groups (full
    closure). For the lamplighter, a BFS up to ``witness_radius`` must reach
    every declared witness, otherwise the set is flagged unverified.
    """
    listed: list[Element] = []
    for x in elements:
        if x.group is not group:
            raise GroupMismatch(f"generator {x!r} belongs to a different group")
        if x.is_identity():
            raise IdentityGenerator("the identity is not allowed as a generator")
        if x not in listed:
            listed.append(x)
    if not listed:
        raise DoesNotGenerate("empty generating set")
    if labels is not None:
        if len(labels) < len(listed):
            raise ValueError("fewer labels than distinct generators")
        base_labels = list(labels[: len(listed)])
    else:
        base_labels = [f"s{i}" for i in range(len(listed))]

    elems = list(listed)
    labs = list(base_labels)
    for x, lab in zip(listed, base_labels):
        ix = x.inverse()
        if ix not in elems:
            elems.append(ix)
            labs.append(f"{lab}^-1")

    inverse_index = tuple(elems.index(x.inverse()) for x in elems)
    verified = _verify_generation(group, elems, witnesses, witness_radius)
    return GeneratingSet(tuple(elems), tuple(labs), inverse_index, verified)


def _verify_generation(
    group: Group,
    gens: Sequence[Element],
    witnesses: Iterable[Element] | None,
    witness_radius: int,
) -> bool:
    if isinstance(group, FiniteTableGroup):
        seen = {group.identity_data()}
        frontier = [group.identity_data()]
        while frontier:
            nxt = []
            for x in frontier:
                for s in gens:
                    y = group.mul_data(x, s.data)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        if len(seen) != group.order:
            raise DoesNotGenerate(
                f"generators reach {len(seen)} of {group.order} elements"
            )
        return True

    if isinstance(group, (FgAbelianGroup, VAbExtensionGroup)):
        _verify_extension_generation(group, gens)
        return True

    # Lamplighter: generation is not decidable from a finite sweep; certify
    # against declared witnesses only.
    if witnesses is None:
        return False
    targets = {w.data for w in witnesses}
    seen = {group.identity_data()}
    frontier = [group.identity_data()]
    for _ in range(witness_radius):
        targets -= seen
        if not targets:
            return True
        nxt = []
        for x in frontier:
            for s in gens:
                y = group.mul_data(x, s.data)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return not (targets - seen)


def _verify_extension_generation(group: Group, gens: Sequence[Element]) -> None:
    """Coset sweep over the finite quotient, then a kernel lattice check."""
    if isinstance(group, FgAbelianGroup):
        d = group.free_rank
        torsion = group.torsion

        def coset(data):
            return data[d:]

        def vec(data):
            return data[:d]

        identity_coset = (0,) * len(torsion)
    else:
        d = group.rank

        def coset(data):
            return (data[1],)

        def vec(data):
            return data[0]

        identity_coset = (0,)

    reps = {identity_coset: group.identity()}
    order = [identity_coset]
    frontier = [identity_coset]
    while frontier:
        nxt = []
        for q in frontier:
            for s in gens:
                y = reps[q] * s
                cq = coset(y.data)
                if cq not in reps:
                    reps[cq] = y
                    order.append(cq)
                    nxt.append(cq)
        frontier = nxt

    expected = 1
    if isinstance(group, FgAbelianGroup):
        for t in group.torsion:
            expected *= t
    else:
        expected = group.quotient_order
    if len(reps) != expected:
        raise DoesNotGenerate(
            f"generator images reach {len(reps)} of {expected} quotient cosets"
        )

    if d == 0:
        return
    schreier: list[IntVec] = []
    for q in order:
        for s in gens:
            y = reps[q] * s
            back = reps[coset(y.data)].inverse()
            k = y * back
            schreier.append(tuple(vec(k.data)))
    if lattice_index(schreier, d) != 1:
        raise DoesNotGenerate(
            "kernel relations of the generators span a proper sublattice of Z^d"
        )
