"""P-morphisms between finite posets: validation, search, reductions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .poset import FinitePoset, UnknownPointError, _bits


class ReductionError(ValueError):
    """The side condition of a point reduction does not hold."""


@dataclass(frozen=True)
class PMorphism:
    """A total point map between two posets.

    ``mapping[i]`` is the target index of the i-th source point. Validity
    (monotone plus back condition) is checked by :func:`validate_p_morphism`,
    not at construction.
    """

    source: FinitePoset
    target: FinitePoset
    mapping: tuple[int, ...]

    @classmethod
    def from_dict(
        cls, source: FinitePoset, target: FinitePoset, assignment: dict[str, str]
    ) -> "PMorphism":
        try:
            mapping = tuple(target.index(assignment[p]) for p in source.points)
        except KeyError as err:
            raise UnknownPointError(*err.args) from None
        return cls(source, target, mapping)

    def __call__(self, label: str) -> str:
        return self.target.points[self.mapping[self.source.index(label)]]

    def as_dict(self) -> dict[str, str]:
        return {p: self.target.points[self.mapping[i]] for i, p in enumerate(self.source.points)}

    def image_mask(self, source_mask: int) -> int:
        out = 0
        for i in _bits(source_mask):
            out |= 1 << self.mapping[i]
        return out

    def preimage_mask(self, target_mask: int) -> int:
        out = 0
        for i, q in enumerate(self.mapping):
            if target_mask >> q & 1:
                out |= 1 << i
        return out

    @property
    def is_surjective(self) -> bool:
        return self.image_mask(self.source.full_mask) == self.target.full_mask


def p_morphism_violation(f: PMorphism) -> tuple[str, str, str] | None:
    """First violated condition as (kind, point, point), or None if valid."""
    src, tgt, m = f.source, f.target, f.mapping
    if len(m) != len(src.points) or any(not 0 <= q < len(tgt.points) for q in m):
        return ("total", "", "")
    for i in range(len(src.points)):
        for j in _bits(src.strict_up(i)):
            if not tgt.up[m[i]] >> m[j] & 1:
                return ("monotone", src.points[i], src.points[j])
    for i in range(len(src.points)):
        image_up = f.image_mask(src.up[i])
        missing = tgt.up[m[i]] & ~image_up
        if missing:
            q = next(_bits(missing))
            return ("back", src.points[i], tgt.points[q])
    return None


def validate_p_morphism(f: PMorphism) -> bool:
    """True iff f is monotone and satisfies the back condition."""
    return p_morphism_violation(f) is None


def iter_surjective_p_morphisms(P: FinitePoset, Q: FinitePoset) -> Iterator[PMorphism]:
    """Backtracking search for surjective p-morphisms P onto Q.

    Points are assigned top-down (a linear extension from the maximal
    points), so monotonicity constraints and the back condition at a point
    can both be checked exactly at assignment time.
    """
    n, m = len(P.points), len(Q.points)
    if n < m or m == 0:
        return
    order = sorted(range(n), key=lambda i: (P.up[i].bit_count(), i))
    assign = [-1] * n

    def rec(pos: int, image: int) -> Iterator[PMorphism]:
        if pos == n:
            if image == Q.full_mask:
                yield PMorphism(P, Q, tuple(assign))
            return
        i = order[pos]
        # everything strictly above i is already assigned
        above = list(_bits(P.strict_up(i)))
        for q in range(m):
            if any(not Q.up[q] >> assign[j] & 1 for j in above):
                continue
            image_up = 1 << q
            for j in above:
                image_up |= 1 << assign[j]
            if Q.up[q] & ~image_up:
                continue  # back condition at i can never be repaired later
            new_image = image | 1 << q
            if m - new_image.bit_count() > n - pos - 1:
                continue  # not enough points left to reach surjectivity
            assign[i] = q
            yield from rec(pos + 1, new_image)
            assign[i] = -1

    yield from rec(0, 0)


def enumerate_surjective_p_morphisms(P: FinitePoset, Q: FinitePoset) -> list[PMorphism]:
    """All surjective p-morphisms P onto Q, sorted by their mapping tuple."""
    found = list(iter_surjective_p_morphisms(P, Q))
    found.sort(key=lambda f: f.mapping)
    return found


def _alpha_condition(P: FinitePoset, xi: int, yi: int) -> bool:
    return P.up[xi] == P.up[yi] | 1 << xi


def _beta_condition(P: FinitePoset, xi: int, yi: int) -> bool:
    return P.strict_up(xi) == P.strict_up(yi)


def apply_reduction(
    P: FinitePoset, kind: str, x: str, y: str
) -> tuple[FinitePoset, PMorphism]:
    """Collapse y onto x under an alpha or beta side condition.

    alpha needs up(x) = up(y) + {x} (y is the unique cover of x); beta needs
    up(x) - {x} = up(y) - {y}. The result is the quotient identifying x and
    y, named P minus y; its order adds a <= x for every a <= y so that the
    collapse map is monotone.
    """
    xi, yi = P.index(x), P.index(y)
    if xi == yi:
        raise ReductionError("reduction needs two distinct points")
    if kind == "alpha":
        if not _alpha_condition(P, xi, yi):
            raise ReductionError(
                f"alpha reduction needs up({x!r}) = up({y!r}) with {x!r} added; "
                f"the up-set equality fails"
            )
    elif kind == "beta":
        if not _beta_condition(P, xi, yi):
            raise ReductionError(
                f"beta reduction needs up({x!r}) minus {x!r} = up({y!r}) minus {y!r}; "
                f"the up-set equality fails"
            )
    else:
        raise ReductionError(f"unknown reduction kind {kind!r}")

    keep = [p for p in P.points if p != y]
    pairs = []
    for i in range(len(P.points)):
        if i == yi:
            continue
        for j in _bits(P.up[i]):
            if j != yi and j != i:
                pairs.append((P.points[i], P.points[j]))
        if P.up[i] >> yi & 1:
            pairs.append((P.points[i], x))
    reduced = FinitePoset(
        keep, pairs, name=f"{P.name}/{kind}" if P.name else None
    )
    assignment = {p: (x if p == y else p) for p in P.points}
    h = PMorphism.from_dict(P, reduced, assignment)
    if not validate_p_morphism(h):
        raise RuntimeError("reduction map failed validation; this is a bug")
    return reduced, h


def enumerate_reductions(P: FinitePoset) -> list[tuple[str, str, str]]:
    """Every ordered pair admitting a reduction, as (kind, x, y).

    Beta pairs are symmetric and appear in both orders; alpha pairs only as
    (lower point, its unique cover). At most one kind fits a given pair.
    """
    out = []
    n = len(P.points)
    for xi in range(n):
        for yi in range(n):
            if xi == yi:
                continue
            if _alpha_condition(P, xi, yi):
                out.append(("alpha", P.points[xi], P.points[yi]))
            elif _beta_condition(P, xi, yi):
                out.append(("beta", P.points[xi], P.points[yi]))
    return out


def strong_regularization(P: FinitePoset) -> tuple[FinitePoset, PMorphism]:
    """Add a fresh maximal point over every non-maximal point's downset.

    Returns (P*, p) where p retracts P* onto P: identity on the original
    points, and each added star goes to the least maximal point above its
    base. P* always has pairwise distinct maximal-point traces.
    """
    existing = set(P.points)
    starred: list[tuple[str, str]] = []
    for i, p in enumerate(P.points):
        if P.up[i] != 1 << i:
            star = p + "*"
            while star in existing:
                star += "*"
            existing.add(star)
            starred.append((p, star))
    points = list(P.points) + [s for _, s in starred]
    pairs = P.cover_pairs() + [(p, s) for p, s in starred]
    result = FinitePoset(points, pairs, name=f"{P.name}*" if P.name else None)
    assignment = {p: p for p in P.points}
    for p, s in starred:
        base = P.index(p)
        assignment[s] = P.points[next(_bits(P.m_mask(base)))]
    retraction = PMorphism.from_dict(result, P, assignment)
    if not validate_p_morphism(retraction):
        raise RuntimeError("star retraction failed validation; this is a bug")
    return result, retraction
