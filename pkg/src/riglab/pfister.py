"""Pfister-index bookkeeping for function fields over iterated Laurent series fields.

Levels, Pythagoras numbers and known Pfister indices of residue fields are
declared inputs.  Unknown or unbounded values are ``INF`` and arithmetic
with them saturates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

INF = math.inf

Bound = int | float


class ProfileError(ValueError):
    """A field profile that no field can have."""


def _is_power_of_two(x: int) -> bool:
    return x >= 1 and x & (x - 1) == 0


@dataclass(frozen=True)
class FieldProfile:
    """Level ``s``, Pythagoras number ``p``, and known Pfister indices of a field."""

    level: Bound
    pythagoras: Bound
    rho: Mapping[int, Bound] = field(default_factory=dict)

    def __post_init__(self):
        s, p = self.level, self.pythagoras
        if s != INF:
            if not isinstance(s, int) or not _is_power_of_two(s):
                raise ProfileError(f"a finite level is a power of two, got {s!r}")
            if not (p != INF and s <= p <= s + 1):
                raise ProfileError(f"a nonreal field has level <= Pythagoras number <= level + 1, got s={s}, p={p}")
        if p != INF and (not isinstance(p, int) or p < 1):
            raise ProfileError(f"Pythagoras number must be a positive integer or INF, got {p!r}")
        for ell, r in self.rho.items():
            if not isinstance(ell, int) or ell < 0:
                raise ProfileError(f"Pfister index position must be a nonnegative integer, got {ell!r}")
            if r != INF and (not isinstance(r, int) or r < 0):
                raise ProfileError(f"Pfister index must be a nonnegative integer or INF, got {r!r}")
            if p != INF and p <= 2 ** ell and r != 0:
                raise ProfileError(f"p={p} <= 2^{ell} forces rho_{ell} = 0, got {r}")

    @property
    def real(self) -> bool:
        return self.level == INF

    def rho_at(self, ell: int) -> Bound:
        if ell in self.rho:
            return self.rho[ell]
        return 0 if self.pythagoras != INF and self.pythagoras <= 2 ** ell else INF


def hensel_lift_bound(residue: FieldProfile, ell: int) -> Bound:
    """Upper bound for rho_ell of a henselian discretely valued field with this residue field."""
    if not isinstance(ell, int) or ell < 0:
        raise ProfileError(f"ell must be a nonnegative integer, got {ell!r}")
    s, p = residue.level, residue.pythagoras
    if ell >= 1 and (s <= 2 ** (ell - 1) or (s == INF and p <= 2 ** ell)):
        return 0
    rho = residue.rho_at(ell)
    if s == 2 ** ell:
        return 1 + rho
    return rho


def hensel_branch(residue: FieldProfile, ell: int) -> str:
    s, p = residue.level, residue.pythagoras
    if ell >= 1 and (s <= 2 ** (ell - 1) or (s == INF and p <= 2 ** ell)):
        return "vanishing"
    return "equal" if s == 2 ** ell else "above"


LEVEL_ABOVE = ">l"
LEVEL_EQUAL = "=l"


def localglobal_sum_bound(entries: Iterable[tuple[str, Bound]]) -> Bound:
    """Sum of rho over level-above residues plus (1 + rho) over level-equal residues."""
    total: Bound = 0
    for cls, rho in entries:
        if cls in (LEVEL_ABOVE, ">ℓ", ">ell"):
            total += rho
        elif cls in (LEVEL_EQUAL, "=ℓ", "=ell"):
            total += 1 + rho
        else:
            raise ValueError(f"unknown residue class {cls!r}")
    return total


@dataclass(frozen=True)
class CurveDescriptor:
    n: int
    genus: int
    real: bool

    def __post_init__(self):
        for name in ("n", "genus"):
            v = getattr(self, name)
            if not isinstance(v, int) or v < 0:
                raise ValueError(f"{name} must be a nonnegative integer, got {v!r}")

    @property
    def budget(self) -> int:
        """Genus, plus one for a nonreal function field."""
        return self.genus if self.real else self.genus + 1


@dataclass(frozen=True)
class TraceStep:
    rank: int
    real: bool
    genus: int
    budget: int
    entries: tuple[tuple[str, int], ...]
    inner: tuple[int, int, bool] | None
    value: int


def rho_trace(c: CurveDescriptor, ell: int = 1) -> list[TraceStep]:
    """The recursion behind ``rho_upper_bound``, one step per rank from n down to 1.

    At rank m the genus inequality caps the residue budget at the genus (plus
    one if nonreal).  The bound is maximized by spending it on budget-many
    genus-zero residue curves that are nonreal over real constants: each costs
    one unit and contributes 1 + (their own bound at rank m - 1).
    """
    steps = []
    for m in range(c.n, 0, -1):
        budget = c.budget if m == c.n else 1
        inner = (m - 1, 0, False)
        inner_value = (m - 1) * 1
        entries = tuple((LEVEL_EQUAL, inner_value) for _ in range(budget))
        value = localglobal_sum_bound(entries)
        steps.append(TraceStep(m, c.real if m == c.n else False, c.genus if m == c.n else 0,
                               budget, entries, inner if m > 1 else None, value))
    return steps


def check_trace(c: CurveDescriptor, steps: Sequence[TraceStep], ell: int = 1) -> bool:
    """Each step is a legal lift/sum/budget application and the top value is the closed form."""
    if c.n == 0:
        return not steps
    for step in steps:
        if len(step.entries) > step.budget:
            return False
        lifted = FieldProfile(2 ** ell, 2 ** ell + 1, {ell: step.rank - 1})
        for cls, rho in step.entries:
            if cls != LEVEL_EQUAL or hensel_lift_bound(lifted, ell) != 1 + rho:
                return False
            if rho != (step.rank - 1) * 1:
                return False
        if localglobal_sum_bound(step.entries) != step.value:
            return False
        if step.value != step.rank * step.budget:
            return False
    return steps[0].rank == c.n and steps[0].value == closed_form(c)


def closed_form(c: CurveDescriptor) -> int:
    return c.n * c.budget


def rho_upper_bound(c: CurveDescriptor, ell: int = 1) -> int:
    """n*g for a real function field, n*(g+1) for a nonreal one."""
    if not isinstance(ell, int) or ell < 1:
        raise ValueError(f"ell must be a positive integer, got {ell!r}")
    steps = rho_trace(c, ell)
    if not check_trace(c, steps, ell):
        raise AssertionError(f"inconsistent bound trace for {c}")
    return steps[0].value if steps else 0


@dataclass(frozen=True)
class IndexBound:
    exponent: int

    @property
    def value(self) -> int:
        return 1 << self.exponent

    def __str__(self) -> str:
        return f"2^{self.exponent}"


def index_bound(c: CurveDescriptor) -> IndexBound:
    """Bound 2^rho_1 on the index of sums of two squares among all sums of squares."""
    return IndexBound(rho_upper_bound(c, 1))


@dataclass(frozen=True)
class WitnessNode:
    label: str
    rank: int
    residue_level: int | None
    children: tuple[WitnessNode, ...] = ()

    def walk(self):
        """Preorder traversal; iterative because composite chains are deep."""
        stack = [self]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))

    def to_json(self) -> dict:
        data = {"label": self.label, "rank": self.rank, "residue_level": self.residue_level}
        if self.children:
            data["children"] = [ch.to_json() for ch in self.children]
        return data


def _witness_tree(gauss_count: int, n: int, root_label: str) -> WitnessNode:
    branches = []
    if n >= 1:
        for j in range(1, gauss_count + 1):
            node = None
            for d in range(n, 1, -1):
                node = WitnessNode(f"w{j}.{d}", d, 2, (node,) if node else ())
            branches.append(WitnessNode(f"w{j}", 1, 2, (node,) if node else ()))
    return WitnessNode(root_label, 0, None, tuple(branches))


def witness_count(tree: WitnessNode) -> int:
    return sum(1 for node in tree.walk() if node.rank >= 1)


def _check_tree(tree: WitnessNode) -> None:
    for node in tree.walk():
        for ch in node.children:
            if ch.rank <= node.rank:
                raise AssertionError(f"rank of {ch.label} does not exceed its parent's")
            if ch.residue_level != 2:
                raise AssertionError(f"{ch.label} must keep residue level 2")


def real_witness_tree(g: int, n: int) -> WitnessNode:
    """Gauss valuations w_1..w_g, each refined by a chain of n-1 composites of ranks 2..n."""
    tree = _witness_tree(g, n, "F")
    _check_tree(tree)
    return tree


def optimal_witness_count(g: int, n: int) -> tuple[int, WitnessNode]:
    tree = real_witness_tree(g, n)
    count = witness_count(tree)
    if count != rho_upper_bound(CurveDescriptor(n, g, True), 1):
        raise AssertionError("real witness count differs from the bound")
    return count, tree


def nonreal_witness_tree(g: int, n: int) -> WitnessNode:
    tree = _witness_tree(g + 1, n, "F")
    _check_tree(tree)
    return tree


def nonreal_witness_count(g: int, n: int) -> int:
    count = witness_count(nonreal_witness_tree(g, n))
    if count != rho_upper_bound(CurveDescriptor(n, g, False), 1):
        raise AssertionError("nonreal witness count differs from the bound")
    return count


class LexValue(tuple):
    """An element of Z^n, compared lexicographically (tuple order)."""

    def __new__(cls, values: Iterable[int] = ()):
        vals = tuple(values)
        if any(not isinstance(v, int) for v in vals):
            raise TypeError("LexValue entries must be integers")
        return super().__new__(cls, vals)

    @property
    def rank(self) -> int:
        return len(self)

    def __add__(self, other):
        if not isinstance(other, LexValue) or len(other) != len(self):
            raise ValueError("LexValue addition needs equal ranks")
        return LexValue(a + b for a, b in zip(self, other))

    def __repr__(self) -> str:
        return f"LexValue{tuple(self)!r}"


def compose_values(outer: LexValue, inner: LexValue) -> LexValue:
    """Stack an outer value on top of an inner one."""
    return LexValue(tuple(outer) + tuple(inner))


def coarsen(value: LexValue, rank: int = 1) -> LexValue:
    """Projection onto the ``rank`` lexicographically dominant components."""
    if rank > len(value):
        raise ValueError(f"cannot coarsen a rank-{len(value)} value to rank {rank}")
    return LexValue(value[:rank])


def compose_valuation(outer: Callable[[object], int], inner: Callable[[object], LexValue],
                      unit_residue: Callable[[object, int], object], inner_rank: int) -> Callable[[object], LexValue]:
    """Composite of a rank-1 valuation with a valuation on its residue field.

    ``unit_residue(x, k)`` must return the residue of ``x * pi^-k`` for the
    chosen uniformizer ``pi``; the composite sends ``x`` to
    ``(outer(x), inner(residue))``.
    """

    def value(x) -> LexValue:
        k = outer(x)
        if not isinstance(k, int):
            raise ValueError("outer valuation must be integer valued")
        w = LexValue(inner(unit_residue(x, k)))
        if w.rank != inner_rank:
            raise ValueError(f"inner valuation returned rank {w.rank}, expected {inner_rank}")
        return compose_values(LexValue((k,)), w)

    return value


@dataclass(frozen=True)
class LocalSquareBound:
    exponent: int
    budget: int | None
    consistent: bool | None

    @property
    def index(self) -> IndexBound:
        return IndexBound(self.exponent)


def local_square_bound(rg) -> LocalSquareBound:
    """log2 bound on the local squares modulo squares: the Betti number after base change.

    With a declared generic genus the bound is also compared with the genus
    budget g_F - sum [G:stab]*genus.
    """
    from .graphs import betti
    from .reduction import base_change, genus_sum

    bp = betti(base_change(rg).ggraph.graph)
    g_f = rg.declared.g_F
    if g_f is None:
        return LocalSquareBound(bp, None, None)
    budget = g_f - genus_sum(rg)
    return LocalSquareBound(bp, budget, bp <= budget)
