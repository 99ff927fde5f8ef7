"""Regularity machinery: bounded-bisimulation partitions, quotients,
implication rank, and the morphism preservation reports.

Four independent oracles decide regularity of a finite poset: the
structural cover condition, discreteness of the limit partition, regular
generation of the upset algebra, and (at small sizes) a brute-force sweep
over maximal-bijective p-morphic collapses. Tests pin their agreement.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .heyting import FiniteHeytingAlgebra, dual_algebra, generated_subalgebra, regular_upsets
from .poset_core import FinitePoset, ParentMismatchError, PMorphism
from .poset_core.poset import _bits


@dataclass(frozen=True)
class Partition:
    """Disjoint blocks (bitmasks) covering the poset, ordered by least member."""

    poset: FinitePoset
    blocks: tuple[int, ...]

    def __post_init__(self):
        union = 0
        for b in self.blocks:
            if union & b:
                raise ValueError("blocks overlap")
            union |= b
        if union != self.poset.full_mask:
            raise ValueError("blocks do not cover the poset")

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def is_discrete(self) -> bool:
        return len(self.blocks) == len(self.poset)

    def block_index(self) -> list[int]:
        out = [0] * len(self.poset)
        for k, b in enumerate(self.blocks):
            for i in _bits(b):
                out[i] = k
        return out

    def same_block(self, a: str, b: str) -> bool:
        idx = self.block_index()
        return idx[self.poset.index(a)] == idx[self.poset.index(b)]

    def blocks_as_labels(self) -> list[list[str]]:
        return [
            [self.poset.points[i] for i in _bits(b)] for b in self.blocks
        ]


def _classes_to_partition(P: FinitePoset, cls: list[int]) -> Partition:
    masks: dict[int, int] = {}
    for i, c in enumerate(cls):
        masks[c] = masks.get(c, 0) | 1 << i
    blocks = sorted(masks.values(), key=lambda m: (m & -m).bit_length())
    return Partition(P, tuple(blocks))


def _sim0_classes(P: FinitePoset) -> list[int]:
    seen: dict[int, int] = {}
    cls = []
    for i in range(len(P)):
        sig = P.m_mask(i)
        if sig not in seen:
            seen[sig] = len(seen)
        cls.append(seen[sig])
    return cls


def _refine(P: FinitePoset, cls: list[int]) -> list[int]:
    seen: dict[frozenset[int], int] = {}
    out = []
    for i in range(len(P)):
        sig = frozenset(cls[j] for j in _bits(P.up[i]))
        if sig not in seen:
            seen[sig] = len(seen)
        out.append(seen[sig])
    return out


def sim_n(P: FinitePoset, n: int) -> Partition:
    """The level-n trace equivalence: level 0 groups by maximal trace,
    each further level by the set of previous-level classes in the up-set."""
    if n < 0:
        raise ValueError("n must be >= 0")
    cls = _sim0_classes(P)
    for _ in range(n):
        cls = _refine(P, cls)
    return _classes_to_partition(P, cls)


def sim_infty(P: FinitePoset) -> Partition:
    return sim_n(P, sim_stabilization_index(P))


def sim_stabilization_index(P: FinitePoset) -> int:
    """Least n with the level-n partition equal to the limit partition."""
    cls = _sim0_classes(P)
    n = 0
    while True:
        nxt = _refine(P, cls)
        if _classes_to_partition(P, nxt) == _classes_to_partition(P, cls):
            return n
        cls = nxt
        n += 1


def quotient(P: FinitePoset, part: Partition) -> FinitePoset:
    """Poset on the blocks with the induced order.

    Intended for sim_n / sim_infty partitions, where the relation is a
    partial order; anything else may fail the antisymmetry check inside
    the poset constructor, which names the offending cycle.
    """
    if part.poset != P:
        raise ParentMismatchError("partition belongs to a different poset")
    labels = []
    for members in part.blocks_as_labels():
        labels.append(members[0] if len(members) == 1 else "{" + ",".join(members) + "}")
    pairs = []
    for a, ba in enumerate(part.blocks):
        for b, bb in enumerate(part.blocks):
            if a == b:
                continue
            if any(P.up[i] & bb for i in _bits(ba)):
                pairs.append((labels[a], labels[b]))
    name = f"{P.name}/~" if P.name else None
    return FinitePoset(labels, pairs, name=name)


def quotient_map(P: FinitePoset, part: Partition) -> PMorphism:
    Q = quotient(P, part)
    idx = part.block_index()
    return PMorphism(P, Q, tuple(idx))


# -- regularity oracles -------------------------------------------------------


def is_regular_structural(P: FinitePoset) -> bool:
    """Every non-maximal point has >= 2 covers, and distinct non-maximal
    points have distinct cover sets."""
    seen: dict[int, int] = {}
    for i in range(len(P)):
        if P.maximal_mask >> i & 1:
            continue
        covers = P.covers_mask(i)
        if covers.bit_count() < 2:
            return False
        if covers in seen:
            return False
        seen[covers] = i
    return True


def is_strongly_regular(P: FinitePoset) -> bool:
    traces = {P.m_mask(i) for i in range(len(P))}
    return len(traces) == len(P)


def is_stable_under_sim_infty(P: FinitePoset) -> bool:
    return sim_infty(P).is_discrete


def _set_partitions(n: int) -> Iterator[list[int]]:
    # restricted growth strings: cls[i] <= 1 + max(cls[:i])
    cls = [0] * n

    def rec(i: int, top: int):
        if i == n:
            yield list(cls)
            return
        for c in range(top + 2):
            cls[i] = c
            yield from rec(i + 1, max(top, c))

    yield from rec(1, 0) if n else iter(())


BRUTEFORCE_LIMIT = 7


def is_regular_bruteforce_morphism(P: FinitePoset) -> bool:
    """Sweep all proper p-morphic collapses; regular iff none of them is
    injective-on-maximals with a bijective maximal image.

    Kernels are enumerated as set partitions, pruned first by the
    maximal-bijection requirement.
    """
    n = len(P)
    if n > BRUTEFORCE_LIMIT:
        raise ValueError(f"brute-force oracle is limited to {BRUTEFORCE_LIMIT} points (got {n})")
    for cls in _set_partitions(n):
        if max(cls) == n - 1:
            continue
        blocks: dict[int, int] = {}
        for i, c in enumerate(cls):
            blocks[c] = blocks.get(c, 0) | 1 << i
        # prune: two maximal points in one block can never stay injective
        if any((b & P.maximal_mask).bit_count() > 1 for b in blocks.values()):
            continue
        order = sorted(blocks)
        masks = [blocks[c] for c in order]
        k = len(masks)
        # induced relation, then antisymmetry via the closure matrix
        rel = [[False] * k for _ in range(k)]
        for a in range(k):
            for b in range(k):
                if a != b and any(P.up[i] & masks[b] for i in _bits(masks[a])):
                    rel[a][b] = True
        for m in range(k):
            for a in range(k):
                if rel[a][m]:
                    for b in range(k):
                        if rel[m][b]:
                            rel[a][b] = True
        if any(rel[a][b] and rel[b][a] for a in range(k) for b in range(k)):
            continue
        labels = [f"q{c}" for c in range(k)]
        pairs = [
            (labels[a], labels[b]) for a in range(k) for b in range(k) if rel[a][b]
        ]
        Q = FinitePoset(labels, pairs)
        remap = {c: j for j, c in enumerate(order)}
        f = PMorphism(P, Q, tuple(remap[cls[i]] for i in range(n)))
        if not f.is_surjective:
            continue
        from .poset_core import validate_p_morphism

        if not validate_p_morphism(f):
            continue
        source_max_blocks = {remap[cls[i]] for i in _bits(P.maximal_mask)}
        target_max = {i for i in range(k) if Q.maximal_mask >> i & 1}
        if source_max_blocks != target_max:
            continue
        if len(source_max_blocks) != P.maximal_mask.bit_count():
            continue
        return False
    return True


# -- implication rank ---------------------------------------------------------


@dataclass(frozen=True)
class RankTable:
    algebra: FiniteHeytingAlgebra
    ranks: dict[int, int]

    def rank(self, u: int) -> int:
        return self.ranks[u]

    def __contains__(self, u: int) -> bool:
        return u in self.ranks

    @property
    def domain(self) -> tuple[int, ...]:
        return tuple(sorted(self.ranks, key=self.algebra.index))

    @property
    def max_rank(self) -> int:
        return max(self.ranks.values())

    def as_labelled(self) -> dict[str, int]:
        return {self.algebra.element_label(u): self.ranks[u] for u in self.domain}


def _meet_join_close(H: FiniteHeytingAlgebra, seed: set[int]) -> set[int]:
    out = set(seed)
    frontier = list(out)
    while frontier:
        u = frontier.pop()
        for v in list(out):
            for w in (u & v, u | v):
                if w not in out:
                    out.add(w)
                    frontier.append(w)
    return out


def rank_table(P: FinitePoset) -> RankTable:
    """Staged closure: level 0 is the meet/join closure of the regular
    upsets with the bounds; each next level adds one implication layer and
    re-closes. The least level reaching an element is its rank."""
    H = dual_algebra(P)
    current = _meet_join_close(H, set(H.regulars) | {H.bot, H.top})
    ranks = {u: 0 for u in current}
    level = 0
    while True:
        grown = set(current)
        for u in current:
            for v in current:
                grown.add(H.imp(u, v))
        grown = _meet_join_close(H, grown)
        if grown == current:
            return RankTable(H, ranks)
        level += 1
        for u in grown - current:
            ranks[u] = level
        current = grown


@dataclass(frozen=True)
class SeparationCheck:
    ok: bool
    witness: tuple | None

    def __bool__(self) -> bool:
        return self.ok


def separation_equivalence_check(P: FinitePoset, n: int | None) -> SeparationCheck:
    """Verify both directions of: x and y are level-n equivalent iff they
    agree on every table element of rank <= n. n=None means the limit
    level against the whole table."""
    table = rank_table(P)
    if n is None:
        part = sim_infty(P)
        tests = list(table.domain)
    else:
        part = sim_n(P, n)
        tests = [u for u in table.domain if table.rank(u) <= n]
    idx = part.block_index()
    for a in range(len(P)):
        for b in range(a + 1, len(P)):
            equivalent = idx[a] == idx[b]
            agree_on = None
            for u in tests:
                if (u >> a & 1) != (u >> b & 1):
                    agree_on = u
                    break
            agree = agree_on is None
            if equivalent and not agree:
                return SeparationCheck(False, (P.points[a], P.points[b], agree_on))
            if agree and not equivalent:
                return SeparationCheck(False, (P.points[a], P.points[b], None))
    return SeparationCheck(True, None)


# -- morphism preservation ----------------------------------------------------


@dataclass(frozen=True)
class MorphismRegularityReport:
    preserves_regulars: bool
    preserves_polynomials: bool
    max_injective: bool
    regular_pullback_iso: bool
    sim_distinctness_forward: bool
    generated_pullback_equal: bool


def _preimage(f: PMorphism, v: int) -> int:
    out = 0
    for i, q in enumerate(f.mapping):
        if v >> q & 1:
            out |= 1 << i
    return out


def morphism_regularity_report(f: PMorphism) -> MorphismRegularityReport:
    """Both preservation properties, each decided by two independent routes.

    Route one for regulars: injectivity on maximal points. Route two: the
    pullback is a Boolean isomorphism from the target's regular upsets onto
    the source's. Polynomials likewise: forward preservation of limit-level
    distinctness against pullback equality of the generated subalgebras.
    Requires a surjective p-morphism; the pullback routes are only
    equivalences under surjectivity.
    """
    from .poset_core import validate_p_morphism

    if not validate_p_morphism(f):
        raise ValueError("not a p-morphism")
    if not f.is_surjective:
        raise ValueError("report requires a surjective p-morphism")
    src, tgt = f.source, f.target

    seen: set[int] = set()
    max_injective = True
    for i in _bits(src.maximal_mask):
        q = f.mapping[i]
        if q in seen:
            max_injective = False
            break
        seen.add(q)

    src_regs = set(regular_upsets(src))
    tgt_regs = regular_upsets(tgt)
    pulled = [_preimage(f, v) for v in tgt_regs]
    regular_pullback_iso = set(pulled) == src_regs and len(set(pulled)) == len(pulled)
    if regular_pullback_iso:
        HS, HT = dual_algebra(src), dual_algebra(tgt)
        for v in tgt_regs:
            if _preimage(f, HT.neg(v)) != HS.neg(_preimage(f, v)):
                regular_pullback_iso = False
                break
            for w in tgt_regs:
                if _preimage(f, HT.core_join(v, w)) != HS.core_join(
                    _preimage(f, v), _preimage(f, w)
                ):
                    regular_pullback_iso = False
                    break
            if not regular_pullback_iso:
                break
    if regular_pullback_iso != max_injective:
        raise RuntimeError(
            "regularity routes disagree; this indicates an implementation bug"
        )

    src_part = sim_infty(src).block_index()
    tgt_part = sim_infty(tgt).block_index()
    sim_forward = True
    for a in range(len(src)):
        for b in range(a + 1, len(src)):
            if src_part[a] != src_part[b] and tgt_part[f.mapping[a]] == tgt_part[f.mapping[b]]:
                sim_forward = False
                break
        if not sim_forward:
            break

    HS, HT = dual_algebra(src), dual_algebra(tgt)
    src_gen, _ = generated_subalgebra(HS, HS.regulars)
    tgt_gen, _ = generated_subalgebra(HT, HT.regulars)
    gen_pullback_equal = {_preimage(f, v) for v in tgt_gen} == set(src_gen)
    if gen_pullback_equal != sim_forward:
        raise RuntimeError(
            "polynomial routes disagree; this indicates an implementation bug"
        )

    return MorphismRegularityReport(
        preserves_regulars=max_injective,
        preserves_polynomials=sim_forward,
        max_injective=max_injective,
        regular_pullback_iso=regular_pullback_iso,
        sim_distinctness_forward=sim_forward,
        generated_pullback_equal=gen_pullback_equal,
    )
