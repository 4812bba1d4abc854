"""Integer-valued left-invariant metrics that are not word metrics.

The ball-system construction takes a nested chain of finite subgroups F_n
and defines B_n = F_n (union of B_k B_{n-k}) F_n; the resulting norm
|g| = min{n : g in B_n} is a proper left-invariant metric in which every
element of every F_n eventually looks like the identity. Sets are exact and
the subgroup/symmetry/submultiplicativity facts the metric rests on are
asserted while building, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence, Union

from .cayley import Ball
from .errors import (
    AxiomViolation,
    NotASubgroup,
    OutOfRange,
    SizeBudget,
)
from .groups import Element, GeneratingSet, Group

__all__ = [
    "DEFAULT_SET_BUDGET",
    "DEFAULT_MAX_LEVELS",
    "BallSystem",
    "BsAnnihilatorReport",
    "MetricAxiomReport",
    "build_ball_system",
    "bs_norm",
    "bs_annihilator_check",
    "metric_axiom_check",
]

DEFAULT_SET_BUDGET = 1_000_000
DEFAULT_MAX_LEVELS = 5


class BallSystem:
    """Nested sets B_0 .. B_{n_max} and the norm they induce."""

    def __init__(
        self,
        group: Group,
        chain: tuple[frozenset, ...],
        levels: tuple[frozenset, ...],
    ):
        self.group = group
        self.chain = chain
        self.levels = levels
        self.n_max = len(levels) - 1
        self._norm: dict[tuple, int] = {}
        for n, level in enumerate(levels):
            for data in level:
                self._norm.setdefault(data, n)

    def norm_data(self, data: tuple) -> int | None:
        return self._norm.get(data)

    def layer_sizes(self) -> list[int]:
        return [len(level) for level in self.levels]

    def sphere_data(self, n: int) -> list[tuple]:
        if not (0 <= n <= self.n_max):
            raise OutOfRange(f"level {n} outside 0..{self.n_max}")
        prev = self.levels[n - 1] if n else frozenset()
        return sorted(self.levels[n] - prev)

    def elements(self, n: int | None = None) -> list[Element]:
        n = self.n_max if n is None else n
        if not (0 <= n <= self.n_max):
            raise OutOfRange(f"level {n} outside 0..{self.n_max}")
        return [
            Element(self.group, d)
            for d in sorted(self.levels[n], key=lambda d: (self._norm[d], d))
        ]

    def to_json_dict(self) -> dict:
        return {
            "n_max": self.n_max,
            "chain_sizes": [len(f) for f in self.chain],
            "level_sizes": self.layer_sizes(),
        }


def _check_subgroup(group: Group, elems: frozenset, name: str) -> None:
    if group.identity_data() not in elems:
        raise NotASubgroup(f"{name} does not contain the identity")
    for a in elems:
        if group.inv_data(a) not in elems:
            raise NotASubgroup(f"{name} is not inverse-closed at {group.format_data(a)}")
        for b in elems:
            if group.mul_data(a, b) not in elems:
                raise NotASubgroup(
                    f"{name} is not closed under products at "
                    f"{group.format_data(a)} * {group.format_data(b)}"
                )


def _expand_right(group: Group, core: Iterable[tuple], subgroup: frozenset) -> set:
    """core . subgroup, walking whole right cosets at a time."""
    out: set = set()
    for m in core:
        if m in out:
            continue  # its entire coset is already present
        for f in subgroup:
            out.add(group.mul_data(m, f))
    return out


def _expand_left(group: Group, subgroup: frozenset, core: Iterable[tuple]) -> set:
    out: set = set()
    for m in core:
        if m in out:
            continue
        for f in subgroup:
            out.add(group.mul_data(f, m))
    return out


def build_ball_system(
    group: Group,
    s1: GeneratingSet,
    f_chain: Sequence[Iterable[Element]],
    n_max: int,
    budget: int = DEFAULT_SET_BUDGET,
    max_levels: int = DEFAULT_MAX_LEVELS,
) -> BallSystem:
    """Compute B_0..B_{n_max} for the chain, verifying every assumption.

    Each F_n must be a finite subgroup and the chain must be nested; the
    doubling construction is cut off by the element budget. Symmetry of every
    computed level is asserted (the chain and S_1 make it automatic, but the
    metric depends on it, so it is checked, not trusted).
    """
    if n_max < 1:
        raise OutOfRange(f"n_max must be >= 1, got {n_max}")
    if n_max > max_levels:
        raise SizeBudget(f"n_max {n_max} exceeds the level budget {max_levels}")
    if len(f_chain) < n_max:
        raise NotASubgroup(
            f"chain supplies {len(f_chain)} subgroups, need {n_max}"
        )
    if s1.group is not group:
        raise NotASubgroup("generating set belongs to a different group")
    chain = tuple(
        frozenset(x.data for x in f_chain[i]) for i in range(n_max)
    )
    for i, f in enumerate(chain):
        _check_subgroup(group, f, f"F_{i + 1}")
        if i and not chain[i - 1] <= f:
            raise NotASubgroup(f"chain is not nested: F_{i} is not inside F_{i + 1}")

    identity = group.identity_data()
    levels = [frozenset([identity])]
    b1 = frozenset({s.data for s in s1.elements} | {identity})
    levels.append(b1)
    for n in range(2, n_max + 1):
        core: set = set()
        for k in range(1, n):
            for a in levels[k]:
                for b in levels[n - k]:
                    core.add(group.mul_data(a, b))
            if len(core) > budget:
                raise SizeBudget(
                    f"B_{n} exceeded the element budget {budget} while merging products"
                )
        f_n = chain[n - 1]
        right = _expand_right(group, sorted(core), f_n)
        if len(right) > budget:
            raise SizeBudget(f"B_{n} exceeded the element budget {budget}")
        full = _expand_left(group, f_n, sorted(right))
        if len(full) > budget:
            raise SizeBudget(f"B_{n} exceeded the element budget {budget}")
        if not core <= full:
            raise AxiomViolation(
                f"construction lost products while building B_{n}"
            )
        levels.append(frozenset(full))

    for n, level in enumerate(levels):
        for x in level:
            if group.inv_data(x) not in level:
                raise AxiomViolation(
                    f"B_{n} is not symmetric", element=group.format_data(x)
                )
    return BallSystem(group, chain, tuple(levels))


def bs_norm(bs: BallSystem, g: Element) -> int:
    """min{n : g in B_n}; errors when g is beyond B_{n_max}."""
    n = bs.norm_data(g.data)
    if n is None:
        raise OutOfRange(f"{g} lies outside B_{bs.n_max}")
    return n


@dataclass(frozen=True)
class BsAnnihilatorReport:
    """Indistinguishability evidence for f against the ball-system norm."""

    f: Element
    n: int
    range_radius: int
    threshold: int
    checked: int
    violations: tuple[tuple[Element, int, int], ...]
    exceptional: tuple[tuple[Element, int, int], ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json_dict(self) -> dict:
        def rows(items):
            return [
                {"g": str(g), "norm_g": a, "norm_fg": b} for g, a, b in items
            ]

        return {
            "f": str(self.f),
            "n": self.n,
            "range_radius": self.range_radius,
            "threshold": self.threshold,
            "checked": self.checked,
            "violations": rows(self.violations),
            "exceptional": rows(self.exceptional),
            "ok": self.ok,
        }


def bs_annihilator_check(bs: BallSystem, f: Element, n: int) -> BsAnnihilatorReport:
    """Verify |f^-1 g| = |g| for in-range g, over g in B_{n_max - n}.

    f must belong to the declared F_n. In range means both |g| and |f^-1 g|
    reach max(n, 2): equality follows from F_k B_k F_k = B_k, which holds at
    every constructed level k >= 2 but not at k = 1, where B_1 is a bare
    generating set. Disagreements below the threshold are collected
    separately: those are the finitely many exceptions the construction
    permits, not violations.
    """
    if not (1 <= n <= bs.n_max):
        raise OutOfRange(f"chain index {n} outside 1..{bs.n_max}")
    if f.data not in bs.chain[n - 1]:
        raise OutOfRange(f"{f} is not in F_{n}")
    group = bs.group
    radius = bs.n_max - n
    cut = max(n, 2)
    f_inv = group.inv_data(f.data)
    checked = 0
    violations = []
    exceptional = []
    for g_data in sorted(bs.levels[radius], key=lambda d: (bs.norm_data(d), d)):
        ng = bs.norm_data(g_data)
        fg = group.mul_data(f_inv, g_data)
        nfg = bs.norm_data(fg)
        if nfg is None:
            raise OutOfRange(
                f"f^-1 g escaped B_{bs.n_max} at g = {group.format_data(g_data)}"
            )
        checked += 1
        g = Element(group, g_data)
        if ng >= cut and nfg >= cut:
            if nfg != ng:
                violations.append((g, ng, nfg))
        elif nfg != ng:
            exceptional.append((g, ng, nfg))
    return BsAnnihilatorReport(
        f, n, radius, cut, checked, tuple(violations), tuple(exceptional)
    )


@dataclass(frozen=True)
class MetricAxiomReport:
    source: str
    radius: int
    pairs_checked: int
    layer_sizes: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "source": self.source,
            "radius": self.radius,
            "pairs_checked": self.pairs_checked,
            "layer_sizes": list(self.layer_sizes),
        }


def metric_axiom_check(
    source: Union[Ball, BallSystem], radius: int | None = None
) -> MetricAxiomReport:
    """Identity, symmetry and triangle axioms over all in-range pairs.

    Pairs (x, y) with |x| + |y| <= radius are checked exhaustively; properness
    at scale is reported as the finite layer sizes. The first failure raises
    with a witness; a clean pass returns the report.
    """
    group = source.group
    identity = group.identity_data()
    if isinstance(source, Ball):
        kind = "ball"
        max_radius = source.radius
        norm_of = source.dist_data
        sphere = lambda k: source.layer_data(k)  # noqa: E731
    else:
        kind = "ballsystem"
        max_radius = source.n_max
        norm_of = source.norm_data
        sphere = source.sphere_data
    if radius is None:
        radius = max_radius
    if radius > max_radius:
        raise OutOfRange(f"radius {radius} exceeds the computed range {max_radius}")

    layer_sizes = tuple(len(sphere(k)) for k in range(radius + 1))
    for x in sphere(0):
        if x != identity:
            raise AxiomViolation(
                "a non-identity element has norm 0", element=group.format_data(x)
            )
    if norm_of(identity) != 0:
        raise AxiomViolation("the identity does not have norm 0")

    for k in range(radius + 1):
        for x in sphere(k):
            ni = norm_of(group.inv_data(x))
            if ni != k:
                raise AxiomViolation(
                    "symmetry fails",
                    element=group.format_data(x),
                    norm=k,
                    inverse_norm=ni,
                )

    pairs = 0
    for i in range(radius + 1):
        for j in range(radius + 1 - i):
            for x in sphere(i):
                for y in sphere(j):
                    nxy = norm_of(group.mul_data(x, y))
                    pairs += 1
                    if nxy is None or nxy > i + j:
                        raise AxiomViolation(
                            "triangle inequality fails",
                            x=group.format_data(x),
                            y=group.format_data(y),
                            norm_x=i,
                            norm_y=j,
                            norm_xy=nxy,
                        )
    return MetricAxiomReport(kind, radius, pairs, layer_sizes)
