"""Finite product spaces and partitions used as information structures.

A :class:`ProductSpace` is an ordered list of finite factors; its points are
tuples of per-factor element indices, enumerated in row-major order (last
factor varies fastest).  A :class:`Partition` labels every point with an atom
id; on finite sets a partition carries exactly the same data as the sigma-field
it generates, so inclusion, product, and measurability all reduce to linear
scans over points.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

FACTOR_KINDS = ("nature-exogenous", "nature-type", "action")

Point = tuple[int, ...]


@dataclass(frozen=True)
class FiniteFactor:
    """One finite coordinate of a product space.

    ``kind`` records what the factor houses: an exogenous chunk of Nature,
    a player's private type, or an agent's action set.
    """

    id: str
    label: str
    elements: tuple[str, ...]
    kind: str

    def __post_init__(self):
        if len(self.elements) < 1:
            raise ValueError(f"factor {self.id!r} must have at least one element")
        if len(set(self.elements)) != len(self.elements):
            raise ValueError(f"factor {self.id!r} has duplicate element labels")
        if self.kind not in FACTOR_KINDS:
            raise ValueError(f"factor {self.id!r} has unknown kind {self.kind!r}")

    @property
    def size(self) -> int:
        return len(self.elements)

    def element_index(self, label: str) -> int:
        try:
            return self.elements.index(label)
        except ValueError:
            raise ValueError(f"factor {self.id!r} has no element {label!r}") from None


@dataclass(frozen=True)
class ProductSpace:
    """Ordered product of finite factors with row-major point enumeration."""

    factors: tuple[FiniteFactor, ...]
    # Strides for index arithmetic; derived from factors, excluded from
    # equality so two spaces are equal iff their factors are.
    _strides: tuple[int, ...] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        strides = []
        acc = 1
        for f in reversed(self.factors):
            strides.append(acc)
            acc *= f.size
        object.__setattr__(self, "_strides", tuple(reversed(strides)))

    @property
    def size(self) -> int:
        n = 1
        for f in self.factors:
            n *= f.size
        return n

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(f.size for f in self.factors)

    def factor_index(self, factor_id: str) -> int:
        for i, f in enumerate(self.factors):
            if f.id == factor_id:
                return i
        raise ValueError(f"unknown factor id {factor_id!r}")

    def points(self) -> Iterator[Point]:
        """All points in row-major order (last factor fastest)."""
        return itertools.product(*(range(f.size) for f in self.factors))

    def point_index(self, point: Sequence[int]) -> int:
        if len(point) != len(self.factors):
            raise ValueError(
                f"point has {len(point)} coordinates, space has {len(self.factors)}"
            )
        idx = 0
        for coord, f, stride in zip(point, self.factors, self._strides):
            if not 0 <= coord < f.size:
                raise ValueError(f"coordinate {coord} out of range for factor {f.id!r}")
            idx += coord * stride
        return idx

    def point_at(self, index: int) -> Point:
        if not 0 <= index < self.size:
            raise ValueError(f"point index {index} out of range")
        coords = []
        for stride in self._strides:
            coords.append(index // stride)
            index %= stride
        return tuple(coords)

    def point_labels(self, point: Sequence[int]) -> tuple[str, ...]:
        return tuple(f.elements[c] for f, c in zip(self.factors, point))


def make_product_space(factors: Iterable[FiniteFactor]) -> ProductSpace:
    """Assemble a product space, rejecting duplicate ids and empty input."""
    factors = tuple(factors)
    if not factors:
        raise ValueError("a product space needs at least one factor")
    ids = [f.id for f in factors]
    if len(set(ids)) != len(ids):
        dup = next(i for i in ids if ids.count(i) > 1)
        raise ValueError(f"duplicate factor id {dup!r}")
    return ProductSpace(factors)


@dataclass(frozen=True)
class Partition:
    """A partition of a product space, canonically labelled.

    Atom ids are renumbered by first occurrence in point enumeration order,
    so two partitions of the same space are equal iff their ``atom_of``
    tables are equal.
    """

    space: ProductSpace
    atom_of: tuple[int, ...]
    atom_count: int

    def __post_init__(self):
        if len(self.atom_of) != self.space.size:
            raise ValueError("atom table length does not match space size")

    @staticmethod
    def from_labels(space: ProductSpace, labels: Sequence) -> "Partition":
        """Build a partition from arbitrary hashable per-point labels."""
        if len(labels) != space.size:
            raise ValueError("label sequence length does not match space size")
        canon: dict = {}
        atom_of = []
        for lab in labels:
            if lab not in canon:
                canon[lab] = len(canon)
            atom_of.append(canon[lab])
        return Partition(space, tuple(atom_of), len(canon))

    def atoms(self) -> list[list[int]]:
        """Point indices grouped by atom, in atom-id order."""
        groups: list[list[int]] = [[] for _ in range(self.atom_count)]
        for idx, a in enumerate(self.atom_of):
            groups[a].append(idx)
        return groups


def trivial_partition(space: ProductSpace) -> Partition:
    return Partition(space, (0,) * space.size, 1)


def singleton_partition(space: ProductSpace) -> Partition:
    return Partition(space, tuple(range(space.size)), space.size)


def cylinder_partition(space: ProductSpace, visible: Iterable[str]) -> Partition:
    """Partition where two points share an atom iff they agree on every
    visible factor.  Hidden factors contribute the trivial field."""
    visible_ids = set(visible)
    axes = sorted(space.factor_index(v) for v in visible_ids)
    labels = [tuple(pt[i] for i in axes) for pt in space.points()]
    return Partition.from_labels(space, labels)


def refines(fine: Partition, coarse: Partition) -> bool:
    """True iff every atom of ``fine`` lies inside a single atom of ``coarse``
    (the field generated by ``coarse`` is then a subfield of ``fine``'s)."""
    if fine.space != coarse.space:
        raise ValueError("partitions are over different spaces")
    rep: list[int | None] = [None] * fine.atom_count
    for f_atom, c_atom in zip(fine.atom_of, coarse.atom_of):
        if rep[f_atom] is None:
            rep[f_atom] = c_atom
        elif rep[f_atom] != c_atom:
            return False
    return True


def common_refinement(p: Partition, q: Partition) -> Partition:
    """The coarsest partition refining both arguments (pairwise atom meet)."""
    if p.space != q.space:
        raise ValueError("partitions are over different spaces")
    return Partition.from_labels(p.space, list(zip(p.atom_of, q.atom_of)))


def is_measurable(values, wrt: Partition) -> bool:
    """True iff the point map is constant on every atom of ``wrt``.

    ``values`` is either a sequence indexed by point index or a callable on
    point tuples.
    """
    if callable(values):
        table = [values(pt) for pt in wrt.space.points()]
    else:
        table = list(values)
        if len(table) != wrt.space.size:
            raise ValueError("value table length does not match space size")
    rep: list = [None] * wrt.atom_count
    seen = [False] * wrt.atom_count
    for idx, atom in enumerate(wrt.atom_of):
        if not seen[atom]:
            rep[atom] = table[idx]
            seen[atom] = True
        elif rep[atom] != table[idx]:
            return False
    return True
