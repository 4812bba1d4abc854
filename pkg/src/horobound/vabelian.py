"""Boundary-counting pipeline for groups with a finite-index free abelian kernel.

The chain runs: quotient graph on cosets, simple-cycle labels C, the
conjugation cloud F = {pi_q(xi(x))/|x|_S}, its exact rational hull P, a
supporting functional at a chosen extreme point, the induced functional
f = phi o xi on the kernel, and finally coset representatives whose Busemann
restrictions are pairwise distinct. Everything is exact; every claim the
construction rests on is re-verified on the finite ball and failures raise
rather than degrade.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

from .boundary import busemann_functional
from .cayley import Ball, grow_ball, DEFAULT_BUDGET
from .errors import (
    GroupMismatch,
    NotConnected,
    NotExtreme,
    OutOfBall,
    VerificationFailed,
)
from .groups import (
    Element,
    FgAbelianGroup,
    GeneratingSet,
    Group,
    VAbExtensionGroup,
    direct_product_table,
)
from .linalg import identity_matrix, mat_vec
from .polytope import (
    Point,
    RationalPolytope,
    SupportingFunctional,
    convex_hull,
    supporting_functional,
)

__all__ = [
    "ExtensionView",
    "QuotientGraph",
    "SimpleCycleSet",
    "Cloud",
    "LipschitzHomData",
    "SeparationVerdict",
    "WitnessReport",
    "extension_view",
    "quotient_graph",
    "simple_cycle_labels",
    "conjugate_cloud",
    "cloud_hull",
    "select_extreme",
    "step1_membership",
    "lipschitz_hom",
    "busemann_coset_separation",
    "infinite_boundary_witness",
]


# ---------------------------------------------------------------------------
# normal form: every supported group as (Z^d, Q, action, cocycle)


class ExtensionView:
    """Uniform access to the kernel/quotient structure of a group.

    Extension groups are their own view; a finitely generated abelian group
    splits as free part x torsion, a trivial-action extension. Families with
    no finite-index free abelian kernel structure are rejected.
    """

    def __init__(self, group: Group):
        if isinstance(group, VAbExtensionGroup):
            self.group = group
            self.rank = group.rank
            self.quotient_order = group.quotient_order
            self.quotient_table = group.table
            self.action = group.action
            self._torsion = None
        elif isinstance(group, FgAbelianGroup):
            self.group = group
            self.rank = group.free_rank
            self._torsion = group.torsion
            self.quotient_table = (
                direct_product_table(group.torsion) if group.torsion else ((0,),)
            )
            self.quotient_order = len(self.quotient_table)
            self.action = tuple(
                identity_matrix(self.rank) for _ in range(self.quotient_order)
            )
        else:
            raise GroupMismatch(
                f"family {group.family!r} has no declared free abelian kernel"
            )
        if self.rank < 1:
            raise GroupMismatch("kernel rank is 0; the pipeline needs a free part")
        self.q_inverse = tuple(
            next(p for p in range(self.quotient_order) if self.quotient_table[q][p] == 0)
            for q in range(self.quotient_order)
        )

    # torsion coordinates <-> quotient index, little-endian like the table
    def _encode(self, coords: Sequence[int]) -> int:
        i = 0
        for t, c in zip(reversed(self._torsion), reversed(list(coords))):
            i = i * t + c
        return i

    def _decode(self, i: int) -> tuple[int, ...]:
        out = []
        for t in self._torsion:
            out.append(i % t)
            i //= t
        return tuple(out)

    def coset_of(self, data: tuple) -> int:
        if self._torsion is None:
            return self.group.coset_of(data)
        return self._encode(data[self.rank:])

    def in_kernel(self, data: tuple) -> bool:
        return self.coset_of(data) == 0

    def xi(self, data: tuple) -> tuple[int, ...]:
        if not self.in_kernel(data):
            raise ValueError(
                f"{self.group.format_data(data)} is not in the free abelian kernel"
            )
        return tuple(data[0]) if self._torsion is None else data[: self.rank]

    def free_part(self, data: tuple) -> tuple[int, ...]:
        """xi extended to all elements: the translation coordinates."""
        return tuple(data[0]) if self._torsion is None else data[: self.rank]

    def kernel_element(self, vec: Sequence[int]) -> Element:
        if self._torsion is None:
            return self.group.kernel_element(vec)
        return self.group.element(tuple(int(x) for x in vec) + (0,) * len(self._torsion))

    def act_vec(self, q: int, vec: Sequence) -> tuple:
        return tuple(mat_vec(self.action[q], tuple(vec)))

    def quotient_mul(self, q: int, p: int) -> int:
        return self.quotient_table[q][p]


def extension_view(group: Group) -> ExtensionView:
    return ExtensionView(group)


# ---------------------------------------------------------------------------
# quotient graph and simple cycles


@dataclass(frozen=True)
class QuotientGraph:
    """Finite graph on kernel cosets with one labeled edge per generator."""

    group: Group
    gens: GeneratingSet
    view: ExtensionView
    edges: tuple[tuple[int, ...], ...]  # edges[q][s] = q . coset(s)
    base: int = 0

    @property
    def order(self) -> int:
        return len(self.edges)

    def to_json_dict(self) -> dict:
        return {
            "vertices": self.order,
            "base": self.base,
            "generators": list(self.gens.labels),
            "edges": [list(row) for row in self.edges],
        }


def quotient_graph(group: Group, gens: GeneratingSet) -> QuotientGraph:
    """Coset graph of the free abelian kernel, with connectivity verified."""
    if gens.group is not group:
        raise GroupMismatch("generating set belongs to a different group")
    view = extension_view(group)
    nq = view.quotient_order
    gen_cosets = [view.coset_of(s.data) for s in gens.elements]
    edges = tuple(
        tuple(view.quotient_mul(q, c) for c in gen_cosets) for q in range(nq)
    )
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for q in frontier:
            for q2 in edges[q]:
                if q2 not in seen:
                    seen.add(q2)
                    nxt.append(q2)
        frontier = nxt
    if len(seen) != nq:
        missing = sorted(set(range(nq)) - seen)
        raise NotConnected(
            f"generators do not reach cosets {missing}; S fails to generate modulo the kernel"
        )
    return QuotientGraph(group, gens, view, edges)


@dataclass(frozen=True)
class SimpleCycleSet:
    """Kernel elements read around simple cycles at the base coset.

    pairs: every (label, generator-index word) found by the DFS, identity
    labels dropped. labels: the distinct elements, sorted by data. norms:
    exact word norms from a dedicated ball (word length is only an upper
    bound and is never trusted).
    """

    graph: QuotientGraph
    pairs: tuple[tuple[Element, tuple[int, ...]], ...]
    labels: tuple[Element, ...]
    norms: dict

    def norm_of(self, x: Element) -> int:
        return self.norms[x.data]

    def to_json_dict(self) -> dict:
        g = self.graph.gens
        return {
            "labels": [str(x) for x in self.labels],
            "norms": {str(x): self.norms[x.data] for x in self.labels},
            "words": [
                {"label": str(x), "word": [g.label(i) for i in word]}
                for x, word in self.pairs
            ],
        }


def simple_cycle_labels(qg: QuotientGraph) -> SimpleCycleSet:
    """DFS all simple cycles at the base vertex and read off their labels.

    A path may revisit no intermediate coset and closes only at the base, so
    word lengths never exceed the quotient order. The label set is verified
    to be inverse-closed, which reversing each cycle guarantees.
    """
    group = qg.group
    view = qg.view
    gens = qg.gens
    base = qg.base
    identity = group.identity_data()
    pairs: list[tuple[Element, tuple[int, ...]]] = []

    def dfs(vertex: int, visited: set[int], word: list[int], acc: tuple) -> None:
        for s, elt in enumerate(gens.elements):
            target = qg.edges[vertex][s]
            nxt = group.mul_data(acc, elt.data)
            if target == base:
                if nxt != identity:
                    if not view.in_kernel(nxt):
                        raise VerificationFailed(
                            f"cycle word closed outside the kernel at {group.format_data(nxt)}"
                        )
                    pairs.append((Element(group, nxt), tuple(word + [s])))
            elif target not in visited:
                visited.add(target)
                word.append(s)
                dfs(target, visited, word, nxt)
                word.pop()
                visited.discard(target)

    dfs(base, {base}, [], identity)
    label_data = sorted({x.data for x, _ in pairs})
    for d in label_data:
        if group.inv_data(d) not in label_data:
            raise VerificationFailed(
                f"cycle labels are not inverse-closed at {group.format_data(d)}"
            )
    labels = tuple(Element(group, d) for d in label_data)
    if not labels:
        raise VerificationFailed("no nontrivial simple cycles; the kernel sees no labels")
    max_len = max(len(w) for _, w in pairs)
    ball = grow_ball(group, gens, max_len)
    norms = {x.data: ball.norm(x) for x in labels}
    pairs.sort(key=lambda pw: (pw[0].data, pw[1]))
    return SimpleCycleSet(qg, tuple(pairs), labels, norms)


# ---------------------------------------------------------------------------
# cloud and hull


@dataclass(frozen=True)
class Cloud:
    """F = {pi_q(xi(x))/|x|_S}: exact rational points with provenance."""

    view: ExtensionView
    points: tuple[Point, ...]
    provenance: dict  # point -> tuple of (q, Element)

    def provenance_of(self, point: Point) -> tuple[int, Element]:
        return self.provenance[point][0]

    def to_json_dict(self) -> dict:
        return {
            "points": [[str(c) for c in p] for p in self.points],
            "provenance": {
                ",".join(str(c) for c in p): [[q, str(x)] for q, x in prov]
                for p, prov in sorted(self.provenance.items())
            },
        }


def conjugate_cloud(cycles: SimpleCycleSet, group: Group) -> Cloud:
    """Apply every quotient action to every normalized cycle label.

    Conjugating a kernel element by anything in the coset of q moves its
    coordinates by pi_q, so the conjugation orbit of xi(x)/|x|_S is exactly
    the pi-orbit. Central symmetry and pi-invariance of the result are
    verified before returning.
    """
    if group is not cycles.graph.group:
        raise GroupMismatch("cycle set was built over a different group")
    view = cycles.graph.view
    prov: dict[Point, list[tuple[int, Element]]] = {}
    for x in cycles.labels:
        nx = cycles.norms[x.data]
        xi = view.xi(x.data)
        for q in range(view.quotient_order):
            pt = tuple(Fraction(c, nx) for c in view.act_vec(q, xi))
            prov.setdefault(pt, []).append((q, x))
    points = tuple(sorted(prov))
    pts = set(points)
    for p in points:
        if tuple(-c for c in p) not in pts:
            raise VerificationFailed(f"cloud is not centrally symmetric at {p}")
    for q in range(view.quotient_order):
        if {tuple(Fraction(c) for c in view.act_vec(q, p)) for p in points} != pts:
            raise VerificationFailed(f"cloud is not invariant under the action of q={q}")
    provenance = {p: tuple(sorted(prov[p], key=lambda qx: (qx[0], qx[1].data))) for p in points}
    return Cloud(view, points, provenance)


def cloud_hull(cloud: Cloud) -> RationalPolytope:
    """Exact hull of the cloud; symmetric clouds must contain the origin."""
    poly = convex_hull(cloud.points)
    origin = (Fraction(0),) * cloud.view.rank
    if not poly.contains(origin):
        raise VerificationFailed("hull of a symmetric cloud must contain the origin")
    verts = set(poly.vertices)
    for q in range(cloud.view.quotient_order):
        if {tuple(Fraction(c) for c in cloud.view.act_vec(q, v)) for v in verts} != verts:
            raise VerificationFailed(f"hull vertices are not permuted by the action of q={q}")
    return poly


@dataclass(frozen=True)
class Step1Report:
    r: int
    checked: int
    violations: tuple[Element, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        return {
            "r": self.r,
            "checked": self.checked,
            "violations": [str(x) for x in self.violations],
            "ok": self.ok,
        }


def step1_membership(poly: RationalPolytope, ball: Ball, r: int) -> Step1Report:
    """Check xi(x)/|x|_S in P for every nontrivial kernel element of B_r."""
    if r > ball.radius:
        raise OutOfBall(f"radius {r} exceeds the computed radius {ball.radius}")
    view = extension_view(ball.group)
    checked = 0
    violations = []
    for data in ball.data_up_to(r):
        if not view.in_kernel(data):
            continue
        n = ball.dist_data(data)
        if n == 0:
            continue
        checked += 1
        pt = tuple(Fraction(c, n) for c in view.xi(data))
        if not poly.contains(pt):
            violations.append(Element(ball.group, data))
    return Step1Report(r, checked, tuple(violations))


# ---------------------------------------------------------------------------
# the Lipschitz functional on the kernel


@dataclass(frozen=True)
class LipschitzHomData:
    """A supporting functional pulled back to the kernel, fully verified.

    f(y) = phi . xi(y) satisfies |f| <= |.|_S on the kernel, attains equality
    at w = x^p, and its equality locus in the checked ball lies inside the
    cyclic subgroup generated by the primitive x.
    """

    e_prime: Point
    conjugator: int
    w: Element
    e: Point
    phi: tuple[Fraction, ...]
    margin: Fraction
    x: Element
    p: int
    equality_locus: tuple[Element, ...]
    checked: int

    def f(self, y: Element) -> Fraction:
        view = extension_view(y.group)
        return sum(
            (a * b for a, b in zip(self.phi, view.xi(y.data))), Fraction(0)
        )

    def in_cyclic(self, y: Element) -> bool:
        """Whether y is a power of x."""
        view = extension_view(y.group)
        if not view.in_kernel(y.data):
            return False
        vy = view.xi(y.data)
        vx = view.xi(self.x.data)
        ratio = None
        for a, b in zip(vy, vx):
            if b == 0:
                if a != 0:
                    return False
            else:
                r = Fraction(a, b)
                if ratio is not None and r != ratio:
                    return False
                ratio = r
        return ratio is None or ratio.denominator == 1

    def to_json_dict(self) -> dict:
        return {
            "e_prime": [str(c) for c in self.e_prime],
            "conjugator": self.conjugator,
            "w": str(self.w),
            "e": [str(c) for c in self.e],
            "phi": [str(c) for c in self.phi],
            "margin": str(self.margin),
            "x": str(self.x),
            "p": self.p,
            "equality_locus": [str(y) for y in self.equality_locus],
            "checked": self.checked,
        }


def lipschitz_hom(
    poly: RationalPolytope, e_prime: Point, cloud: Cloud, ball: Ball
) -> LipschitzHomData:
    """Build and verify the functional attached to an extreme cloud point.

    The provenance (q, w) of e' pulls it back to e = xi(w)/|w|_S, also
    extreme by invariance; phi supports P at e; p is the positive gcd of
    xi(w) and x the primitive kernel element with w = x^p. The three
    defining properties are then checked exhaustively on the kernel part of
    the ball and any failure raises with the offending element.
    """
    view = cloud.view
    ept = tuple(Fraction(c) for c in e_prime)
    if ept not in poly.vertices:
        raise NotExtreme(f"{e_prime} is not an extreme point of the hull")
    if ept not in cloud.provenance:
        raise VerificationFailed(f"{e_prime} has no recorded cloud provenance")
    q, w = cloud.provenance_of(ept)
    xi_w = view.xi(w.data)
    nw = ball.norm(w)
    e = tuple(Fraction(c, nw) for c in xi_w)
    if tuple(Fraction(c) for c in view.act_vec(q, e)) != ept:
        raise VerificationFailed("provenance does not reproduce the extreme point")
    support = supporting_functional(poly, e)
    phi = support.phi

    p = 0
    for c in xi_w:
        p = gcd(p, abs(c))
    if p == 0:
        raise VerificationFailed(f"cycle label {w} has zero free part")
    x = view.kernel_element(tuple(c // p for c in xi_w))
    if (x ** p).data != w.data:
        raise VerificationFailed(f"{w} is not the {p}-th power of {x}")

    def f_of(data: tuple) -> Fraction:
        return sum(
            (a * Fraction(b) for a, b in zip(phi, view.xi(data))), Fraction(0)
        )

    if f_of(w.data) != nw:
        raise VerificationFailed(
            f"f({w}) = {f_of(w.data)} but |{w}| = {nw}; support normalization broke"
        )

    data_stub = LipschitzHomData(
        ept, q, w, e, phi, support.margin, x, p, (), 0
    )
    locus = []
    checked = 0
    for data in ball.data_up_to(ball.radius):
        if not view.in_kernel(data):
            continue
        checked += 1
        val = f_of(data)
        n = ball.dist_data(data)
        if abs(val) > n:
            raise VerificationFailed(
                f"|f({ball.group.format_data(data)})| = {val} exceeds the norm {n}"
            )
        if val == n:
            y = Element(ball.group, data)
            if not data_stub.in_cyclic(y):
                raise VerificationFailed(
                    f"equality locus escapes <x>: f({y}) = |{y}| = {n}"
                )
            locus.append(y)
    locus.sort(key=lambda y: (ball.norm(y), y.data))
    return LipschitzHomData(
        ept, q, w, e, phi, support.margin, x, p, tuple(locus), checked
    )


# ---------------------------------------------------------------------------
# separation and witnesses


@dataclass(frozen=True)
class SeparationVerdict:
    verdict: str  # "separated" | "undetermined at level"
    n_used: int
    m: int
    predicted_separated: bool

    def to_json_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "n_used": self.n_used,
            "m": self.m,
            "predicted_separated": self.predicted_separated,
        }


def busemann_coset_separation(
    y: Element,
    z: Element,
    data: LipschitzHomData,
    ball: Ball,
    n: int,
    m: int,
) -> SeparationVerdict:
    """Compare b_{y w^n} and b_{z w^n} on B_m at the largest feasible n.

    Distinct restrictions certify distinct classes at this level; agreement
    is only "undetermined", since separation is an asymptotic statement. The
    prediction flag records whether y^-1 z lies outside <x>, the condition
    under which the limits must eventually differ.
    """
    view = extension_view(ball.group)
    for elt in (y, z):
        if not view.in_kernel(elt.data):
            raise ValueError(f"{elt} is not in the free abelian kernel")
    predicted = not data.in_cyclic(y.inverse() * z)
    group = ball.group
    n_used = 0
    for k in range(n, 0, -1):
        wk = (data.w ** k).data
        uy = group.mul_data(y.data, wk)
        uz = group.mul_data(z.data, wk)
        dy, dz = ball.dist_data(uy), ball.dist_data(uz)
        if dy is not None and dz is not None and max(dy, dz) + m <= ball.radius:
            n_used = k
            break
    if n_used == 0:
        raise OutOfBall(
            f"no power up to {n} keeps both endpoints inside radius {ball.radius - m}"
        )
    wk = data.w ** n_used
    fy = busemann_functional(ball, y * wk, m)
    fz = busemann_functional(ball, z * wk, m)
    verdict = "separated" if fy.vector != fz.vector else "undetermined at level"
    return SeparationVerdict(verdict, n_used, m, predicted)


@dataclass(frozen=True)
class WitnessReport:
    """k coset representatives with pairwise distinct Busemann restrictions."""

    r: int
    m: int
    k_requested: int
    k_achieved: int
    selector: str
    data: LipschitzHomData
    witnesses: tuple[tuple[Element, int, Element, tuple[int, ...]], ...]
    cloud_size: int
    hull_vertices: int
    cycle_count: int

    @property
    def ok(self) -> bool:
        return self.k_achieved >= self.k_requested

    def to_json_dict(self) -> dict:
        return {
            "level": {"r": self.r, "m": self.m},
            "k_requested": self.k_requested,
            "k_achieved": self.k_achieved,
            "selector": self.selector,
            "pipeline": {
                "cloud_size": self.cloud_size,
                "hull_vertices": self.hull_vertices,
                "cycle_count": self.cycle_count,
            },
            "functional": self.data.to_json_dict(),
            "witnesses": [
                {
                    "rep": str(y),
                    "power": n,
                    "endpoint": str(u),
                    "restriction": list(vec),
                }
                for y, n, u, vec in self.witnesses
            ],
            "ok": self.ok,
        }


def select_extreme(poly: RationalPolytope, selector: str) -> Point:
    if selector == "lex":
        return poly.vertices[0]
    if selector.startswith("index:"):
        i = int(selector.split(":", 1)[1])
        if not (0 <= i < len(poly.vertices)):
            raise NotExtreme(
                f"extreme index {i} out of range 0..{len(poly.vertices) - 1}"
            )
        return poly.vertices[i]
    raise ValueError(f"unknown extreme-point selector {selector!r}")


def infinite_boundary_witness(
    group: Group,
    gens: GeneratingSet,
    r: int,
    m: int,
    k: int = 5,
    selector: str = "lex",
    budget: int = DEFAULT_BUDGET,
) -> WitnessReport:
    """Produce k pairwise-distinct Busemann restrictions at level (r, m).

    Runs the whole pipeline, then walks kernel elements in ball order,
    keeping representatives of new <x>-cosets whose pushed-out restriction
    b_{y x^n}|B_m differs from everything kept so far. Reaching k certifies
    that the boundary at this level has at least k classes; the report is
    honest about falling short.
    """
    view = extension_view(group)
    if view.rank < 2:
        raise ValueError(
            f"kernel rank {view.rank} < 2: a line has a two-point boundary, nothing to count"
        )
    if not (0 < m < r):
        raise ValueError(f"need 0 < m < r, got m={m}, r={r}")
    ball = grow_ball(group, gens, r + m, budget=budget)
    qg = quotient_graph(group, gens)
    cycles = simple_cycle_labels(qg)
    cloud = conjugate_cloud(cycles, group)
    poly = cloud_hull(cloud)
    e_prime = select_extreme(poly, selector)
    data = lipschitz_hom(poly, e_prime, cloud, ball)

    nx = ball.norm(data.x)
    kept: list[tuple[Element, int, Element, tuple[int, ...]]] = []
    seen_vectors: set[tuple[int, ...]] = set()
    for cand in ball.data_up_to(r - nx):
        if not view.in_kernel(cand):
            continue
        y = Element(group, cand)
        if any(data.in_cyclic(prev.inverse() * y) for prev, _, _, _ in kept):
            continue
        n = (r - ball.dist_data(cand)) // nx
        u = y * (data.x ** n)
        fn = busemann_functional(ball, u, m)
        if fn.vector in seen_vectors:
            continue
        seen_vectors.add(fn.vector)
        kept.append((y, n, u, fn.vector))
        if len(kept) == k:
            break
    return WitnessReport(
        r,
        m,
        k,
        len(kept),
        selector,
        data,
        tuple(kept),
        len(cloud.points),
        len(poly.vertices),
        len(cycles.labels),
    )
