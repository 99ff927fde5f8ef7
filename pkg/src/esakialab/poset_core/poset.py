"""Finite posets stored as per-point bitmask up-sets.

Bit j of ``P.up[i]`` is set iff ``P.points[i] <= P.points[j]``. All order
combinatorics (closures, maximal traces, covers, depth, width, upset
enumeration) are mask operations on these rows.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence


class OrderConstructionError(ValueError):
    """The input relation cannot be completed to a partial order."""


class ParentMismatchError(ValueError):
    """A PointSet was used with a poset it does not belong to."""


class UnknownPointError(KeyError):
    """A point label is not present in the poset."""


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FinitePoset:
    """A finite partial order over labelled points.

    Construction takes generating pairs (x, y) meaning x <= y, computes the
    reflexive-transitive closure and rejects cycles. Reflexive pairs may be
    omitted. Equality is by (point labels, order), not by name.
    """

    __slots__ = ("points", "up", "down", "name", "_index", "_maximal")

    def __init__(
        self,
        points: Iterable[str],
        pairs: Iterable[tuple[str, str]] = (),
        name: str | None = None,
    ):
        pts = tuple(points)
        if len(set(pts)) != len(pts):
            raise OrderConstructionError("duplicate point labels")
        index = {p: i for i, p in enumerate(pts)}
        n = len(pts)
        up = [1 << i for i in range(n)]
        for a, b in pairs:
            if a not in index:
                raise UnknownPointError(a)
            if b not in index:
                raise UnknownPointError(b)
            up[index[a]] |= 1 << index[b]
        # Floyd-Warshall reachability, one bitmask row per point
        for k in range(n):
            bit = 1 << k
            row = up[k]
            for i in range(n):
                if up[i] & bit:
                    up[i] |= row
        for i in range(n):
            for j in _bits(up[i] & ~((1 << (i + 1)) - 1)):
                if up[j] >> i & 1:
                    raise OrderConstructionError(
                        f"cycle between {pts[i]!r} and {pts[j]!r}"
                    )
        down = [0] * n
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        self.points = pts
        self.up = tuple(up)
        self.down = tuple(down)
        self.name = name
        self._index = index
        maximal = 0
        for i in range(n):
            if up[i] == 1 << i:
                maximal |= 1 << i
        self._maximal = maximal
        # finite posets always have a maximal point above every point
        assert all(up[i] & maximal for i in range(n))

    # -- basic queries -------------------------------------------------

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self) -> Iterator[str]:
        return iter(self.points)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinitePoset):
            return NotImplemented
        return self.points == other.points and self.up == other.up

    def __hash__(self) -> int:
        return hash((self.points, self.up))

    def __repr__(self) -> str:
        tag = f" {self.name!r}" if self.name else ""
        return f"<FinitePoset{tag} n={len(self.points)}>"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise UnknownPointError(label) from None

    def leq(self, a: str, b: str) -> bool:
        return bool(self.up[self.index(a)] >> self.index(b) & 1)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.points)) - 1

    @property
    def maximal_mask(self) -> int:
        return self._maximal

    # -- mask-level order combinatorics --------------------------------

    def strict_up(self, i: int) -> int:
        return self.up[i] ^ (1 << i)

    def m_mask(self, i: int) -> int:
        """Maximal points above point i, as a mask."""
        return self.up[i] & self._maximal

    def covers_mask(self, i: int) -> int:
        """Immediate successors of point i: minimal elements of its strict up-set."""
        strict = self.strict_up(i)
        out = 0
        for j in _bits(strict):
            if strict & self.down[j] == 1 << j:
                out |= 1 << j
        return out

    def up_mask_of(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= self.up[i]
        return out

    def down_mask_of(self, mask: int) -> int:
        out = 0
        for i in _bits(mask):
            out |= self.down[i]
        return out

    def is_upset(self, mask: int) -> bool:
        return self.up_mask_of(mask) == mask

    def upsets(self) -> list[int]:
        """All upward-closed subsets, as masks, in a fixed deterministic order."""
        n = len(self.points)
        order = sorted(range(n), key=lambda i: (self.up[i].bit_count(), i))
        out: list[int] = []

        def rec(pos: int, mask: int) -> None:
            if pos == n:
                out.append(mask)
                return
            i = order[pos]
            rec(pos + 1, mask)
            if self.strict_up(i) & ~mask == 0:
                rec(pos + 1, mask | 1 << i)

        rec(0, 0)
        return out

    def components(self) -> list[int]:
        """Connected components of the comparability graph, as masks."""
        n = len(self.points)
        seen = 0
        comps = []
        for start in range(n):
            if seen >> start & 1:
                continue
            comp = 0
            stack = [start]
            while stack:
                i = stack.pop()
                if comp >> i & 1:
                    continue
                comp |= 1 << i
                for j in _bits((self.up[i] | self.down[i]) & ~comp):
                    stack.append(j)
            seen |= comp
            comps.append(comp)
        return comps

    def induced(self, mask: int, name: str | None = None) -> "FinitePoset":
        """Subposet on the points of ``mask``, keeping label order."""
        keep = [i for i in _bits(mask)]
        pts = [self.points[i] for i in keep]
        pairs = [
            (self.points[i], self.points[j])
            for i in keep
            for j in _bits(self.up[i] & mask)
            if i != j
        ]
        return FinitePoset(pts, pairs, name=name)

    # -- serialization --------------------------------------------------

    def cover_pairs(self) -> list[tuple[str, str]]:
        out = []
        for i in range(len(self.points)):
            for j in _bits(self.covers_mask(i)):
                out.append((self.points[i], self.points[j]))
        return out

    def to_json(self) -> str:
        obj = {
            "name": self.name or "",
            "points": list(self.points),
            "leq": [list(p) for p in self.cover_pairs()],
        }
        return json.dumps(obj, indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "FinitePoset":
        obj = json.loads(text)
        return cls(obj["points"], [tuple(p) for p in obj["leq"]], name=obj.get("name") or None)

    def to_dot(self) -> str:
        # one edge per cover, drawn upward
        lines = [f'digraph "{self.name or "poset"}" {{', "  rankdir=BT;"]
        for p in self.points:
            lines.append(f'  "{p}";')
        for a, b in self.cover_pairs():
            lines.append(f'  "{a}" -> "{b}";')
        lines.append("}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class PointSet:
    """A subset of a specific poset's points, stored as a mask."""

    poset: FinitePoset
    mask: int

    @classmethod
    def from_labels(cls, poset: FinitePoset, labels: Iterable[str]) -> "PointSet":
        mask = 0
        for lbl in labels:
            mask |= 1 << poset.index(lbl)
        return cls(poset, mask)

    @property
    def members(self) -> tuple[str, ...]:
        return tuple(self.poset.points[i] for i in _bits(self.mask))

    def __contains__(self, label: str) -> bool:
        return bool(self.mask >> self.poset.index(label) & 1)

    def __len__(self) -> int:
        return self.mask.bit_count()


def _owned(P: FinitePoset, S: "PointSet | int") -> int:
    if isinstance(S, int):
        if S >> len(P.points):
            raise UnknownPointError(f"mask {S:#x} has bits beyond the poset")
        return S
    if S.poset != P:
        raise ParentMismatchError("point set belongs to a different poset")
    return S.mask


def _like(S: "PointSet | int", P: FinitePoset, mask: int) -> "PointSet | int":
    return mask if isinstance(S, int) else PointSet(P, mask)


def upset_closure(P: FinitePoset, S: "PointSet | int") -> "PointSet | int":
    """Least upward-closed superset of S; accepts and returns masks too."""
    return _like(S, P, P.up_mask_of(_owned(P, S)))


def downset_closure(P: FinitePoset, S: "PointSet | int") -> "PointSet | int":
    """Least downward-closed superset of S; accepts and returns masks too."""
    return _like(S, P, P.down_mask_of(_owned(P, S)))


def maximal_of(P: FinitePoset, S: "PointSet | int") -> "PointSet | int":
    """Elements of S with nothing of S strictly above them."""
    mask = _owned(P, S)
    out = 0
    for i in _bits(mask):
        if P.up[i] & mask == 1 << i:
            out |= 1 << i
    return _like(S, P, out)


def immediate_successors(P: FinitePoset, x: str) -> PointSet:
    """The covers of x; empty iff x is maximal."""
    return PointSet(P, P.covers_mask(P.index(x)))


def point_depths(P: FinitePoset) -> dict[str, int]:
    """Depth of each point: 0 for maximal points, else 1 + max over covers."""
    n = len(P.points)
    order = sorted(range(n), key=lambda i: (P.up[i].bit_count(), i))
    depth = [0] * n
    for i in order:
        strict = P.strict_up(i)
        if strict:
            depth[i] = 1 + max(depth[j] for j in _bits(strict))
    return {P.points[i]: depth[i] for i in range(n)}


def depth_width(P: FinitePoset) -> tuple[int, int]:
    """(depth, width): longest-chain length and largest-antichain size."""
    n = len(P.points)
    if n == 0:
        raise ValueError("empty poset has no depth")
    depth = 1 + max(point_depths(P).values())

    # Dilworth via bipartite matching: width = n - max matching on i < j
    succ = [list(_bits(P.strict_up(i))) for i in range(n)]
    match_to = [-1] * n

    def augment(i: int, seen: list[bool]) -> bool:
        for j in succ[i]:
            if not seen[j]:
                seen[j] = True
                if match_to[j] < 0 or augment(match_to[j], seen):
                    match_to[j] = i
                    return True
        return False

    matched = sum(augment(i, [False] * n) for i in range(n))
    return depth, n - matched
