"""Finite Heyting algebras presented as upset algebras of finite posets.

Elements are upset bitmasks of a base poset; all equality is bitmask
equality. Both duality directions, the regular-element Boolean core,
subalgebra generation with witness terms, and the tensor operation live
here.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .logic import (
    And,
    Atom,
    Bot,
    Formula,
    Implies,
    Or,
    Top,
    is_dna_valid,
    is_valid,
    ml_proxy_formulas,
)
from .poset_core import FinitePoset, PointSet, downset_closure, iter_surjective_p_morphisms


class TensorUndefinedError(RuntimeError):
    """Tensor was requested on an algebra outside its precondition."""


def _mask_key(mask: int) -> tuple[int, tuple[int, ...]]:
    bits = tuple(i for i in range(mask.bit_length()) if mask >> i & 1)
    return (len(bits), bits)


class FiniteHeytingAlgebra:
    """The algebra of all upsets of a finite poset.

    meet/join are intersection/union; u -> v is the complement of the
    downset of u minus v. Elements are listed in a canonical order: by
    size, then by member point indices.
    """

    __slots__ = (
        "base",
        "elements",
        "_index",
        "_imp_memo",
        "_regulars",
        "_tensor_ok",
        "_tensor_memo",
    )

    def __init__(self, base: FinitePoset):
        self.base = base
        self.elements: tuple[int, ...] = tuple(sorted(base.upsets(), key=_mask_key))
        self._index = {u: i for i, u in enumerate(self.elements)}
        self._imp_memo: dict[tuple[int, int], int] = {}
        self._regulars: tuple[int, ...] | None = None
        self._tensor_ok: bool | None = None
        self._tensor_memo: dict[tuple[int, int], int] = {}

    # -- lattice structure --

    @property
    def bot(self) -> int:
        return 0

    @property
    def top(self) -> int:
        return self.base.full_mask

    def __len__(self) -> int:
        return len(self.elements)

    def __repr__(self) -> str:
        return f"FiniteHeytingAlgebra(base={self.base.name or self.base.points}, size={len(self.elements)})"

    def index(self, u: int) -> int:
        try:
            return self._index[u]
        except KeyError:
            raise ValueError(f"mask {u:#x} is not an upset of the base poset") from None

    def leq(self, u: int, v: int) -> bool:
        return u & ~v == 0

    def meet(self, u: int, v: int) -> int:
        return u & v

    def join(self, u: int, v: int) -> int:
        return u | v

    def imp(self, u: int, v: int) -> int:
        key = (u, v)
        got = self._imp_memo.get(key)
        if got is None:
            got = self.top & ~downset_closure(self.base, u & ~v)
            self._imp_memo[key] = got
        return got

    def neg(self, u: int) -> int:
        return self.imp(u, 0)

    @property
    def regulars(self) -> tuple[int, ...]:
        if self._regulars is None:
            self._regulars = tuple(
                u for u in self.elements if self.neg(self.neg(u)) == u
            )
        return self._regulars

    def core_join(self, u: int, v: int) -> int:
        return self.neg(self.meet(self.neg(u), self.neg(v)))

    def element_label(self, u: int) -> str:
        names = [self.base.points[i] for i in range(len(self.base)) if u >> i & 1]
        return "{" + ",".join(names) + "}"

    def element_sets(self) -> list[PointSet]:
        return [PointSet(self.base, u) for u in self.elements]

    def component_algebras(self) -> list["FiniteHeytingAlgebra"]:
        comps = self.base.components()
        if len(comps) <= 1:
            return [self]
        return [FiniteHeytingAlgebra(self.base.induced(c)) for c in comps]

    # -- tensor --

    def tensor_defined(self) -> bool:
        if self._tensor_ok is None:
            self._tensor_ok = is_regularly_generated(self) and all(
                is_dna_valid(self, f) for f in ml_proxy_formulas()
            )
        return self._tensor_ok

    def tensor_op(self, u: int, v: int) -> int:
        if not self.tensor_defined():
            raise TensorUndefinedError(
                "tensor needs a regularly generated algebra validating the proxy suite"
            )
        key = (u, v)
        got = self._tensor_memo.get(key)
        if got is None:
            got = 0
            for a in self.regulars:
                if a & ~u:
                    continue
                for b in self.regulars:
                    if b & ~v:
                        continue
                    got |= self.core_join(a, b)
            self._tensor_memo[key] = got
        return got

    def to_json(self) -> str:
        sets = sorted(
            (sorted(self.base.points[i] for i in range(len(self.base)) if u >> i & 1)
             for u in self.elements),
            key=lambda names: (len(names), names),
        )
        return json.dumps(
            {"base": json.loads(self.base.to_json()), "elements": sets},
            indent=2,
            sort_keys=True,
        )


def dual_algebra(P: FinitePoset) -> FiniteHeytingAlgebra:
    return FiniteHeytingAlgebra(P)


# -- duality, algebra to poset ------------------------------------------------


def _join_irreducibles(H: FiniteHeytingAlgebra) -> list[int]:
    # primality swept over every pair, not read off principal upsets
    gens = []
    for a in H.elements:
        if a == H.bot:
            continue
        prime = True
        for x in H.elements:
            if not prime:
                break
            for y in H.elements:
                if H.leq(a, x | y) and not (H.leq(a, x) or H.leq(a, y)):
                    prime = False
                    break
        if prime:
            gens.append(a)
    return gens


def dual_poset(H: FiniteHeytingAlgebra) -> FinitePoset:
    """Prime filters of H ordered by inclusion.

    Finite case: prime filters are exactly the principal filters of
    join-irreducible elements. Point f{i} stands for the filter generated
    by the element with canonical index i; the filter of a gets smaller as
    a gets larger, so f_a <= f_b iff b <= a.
    """
    gens = _join_irreducibles(H)
    labels = {a: f"f{H.index(a)}" for a in gens}
    pairs = [
        (labels[a], labels[b])
        for a in gens
        for b in gens
        if a != b and H.leq(b, a)
    ]
    name = f"pf({H.base.name})" if H.base.name else None
    return FinitePoset([labels[a] for a in gens], pairs, name=name)


def duality_unit(P: FinitePoset):
    """The canonical order-iso from P onto dual_poset(dual_algebra(P)).

    Sends x to the filter generated by the principal upset of x. Returns
    (dual poset, mapping of labels).
    """
    H = dual_algebra(P)
    Q = dual_poset(H)
    mapping = {P.points[i]: f"f{H.index(P.up[i])}" for i in range(len(P))}
    return Q, mapping


def duality_counit(H: FiniteHeytingAlgebra):
    """The Stone map from H onto the upset algebra of its prime-filter poset.

    Sends u to the set of prime filters containing u. Returns
    (dual algebra of the dual poset, mapping of masks).
    """
    gens = _join_irreducibles(H)
    Q = dual_poset(H)
    K = dual_algebra(Q)
    mapping = {}
    for u in H.elements:
        mask = 0
        for a in gens:
            if H.leq(a, u):
                mask |= 1 << Q.index(f"f{H.index(a)}")
        mapping[u] = mask
    return K, mapping


def is_heyting_iso(
    H: FiniteHeytingAlgebra, K: FiniteHeytingAlgebra, f: Mapping[int, int]
) -> bool:
    """Check that f is a bijective homomorphism for 0, 1, meet, join, imp."""
    if len(H.elements) != len(K.elements):
        return False
    if sorted(f[u] for u in H.elements) != sorted(K.elements):
        return False
    if f[H.bot] != K.bot or f[H.top] != K.top:
        return False
    for u in H.elements:
        for v in H.elements:
            if f[H.meet(u, v)] != K.meet(f[u], f[v]):
                return False
            if f[H.join(u, v)] != K.join(f[u], f[v]):
                return False
            if f[H.imp(u, v)] != K.imp(f[u], f[v]):
                return False
    return True


# -- regular elements ---------------------------------------------------------


@dataclass(frozen=True)
class BooleanCore:
    """The regular elements with the Boolean join x +. y = neg(neg x meet neg y)."""

    algebra: FiniteHeytingAlgebra
    elements: tuple[int, ...]

    def __contains__(self, u: int) -> bool:
        return u in set(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def join(self, u: int, v: int) -> int:
        return self.algebra.core_join(u, v)

    def meet(self, u: int, v: int) -> int:
        return self.algebra.meet(u, v)

    def imp(self, u: int, v: int) -> int:
        return self.algebra.imp(u, v)

    def neg(self, u: int) -> int:
        return self.algebra.neg(u)

    def complement_law_holds(self) -> bool:
        H = self.algebra
        return all(
            self.join(u, self.neg(u)) == H.top and self.meet(u, self.neg(u)) == H.bot
            for u in self.elements
        )


def regular_elements(H: FiniteHeytingAlgebra) -> BooleanCore:
    return BooleanCore(H, H.regulars)


def regular_upsets(P: FinitePoset) -> list[int]:
    """Upsets U with Int(Cl(U)) = U, computed topologically.

    Cl is the downset closure, Int the largest upset inside a set. This
    route never consults the algebra's negation tables.
    """
    full = P.full_mask
    out = []
    for u in sorted(P.upsets(), key=_mask_key):
        cl = downset_closure(P, u)
        interior = full & ~downset_closure(P, full & ~cl)
        if interior == u:
            out.append(u)
    return out


@dataclass(frozen=True)
class CoreTraceReport:
    """Outcome of checking V |-> V intersect M(P) on the regular upsets."""

    ok: bool
    trace_map: dict[int, int]
    inverse_map: dict[int, int]
    counterexample: tuple | None


def boolean_core_iso_maximal(P: FinitePoset) -> CoreTraceReport:
    """Check the trace map is a Boolean iso onto the full powerset of M(P).

    The inverse sends A to {x | M(x) subseteq A}. Failure returns the first
    offending pair instead of raising.
    """
    H = dual_algebra(P)
    maximal = P.maximal_mask
    regs = H.regulars
    trace = {u: u & maximal for u in regs}

    traces = sorted(trace.values())
    subsets = sorted(_submasks(maximal))
    if traces != subsets:
        return CoreTraceReport(False, trace, {}, ("trace-image", traces, subsets))

    inverse = {}
    for a in subsets:
        mask = 0
        for i in range(len(P)):
            if P.m_mask(i) & ~a == 0:
                mask |= 1 << i
        inverse[a] = mask

    for u in regs:
        if inverse[trace[u]] != u:
            return CoreTraceReport(False, trace, inverse, ("round-trip", u))
    for u in regs:
        if trace[H.neg(u)] != maximal & ~trace[u]:
            return CoreTraceReport(False, trace, inverse, ("negation", u))
        for v in regs:
            if trace[H.core_join(u, v)] != trace[u] | trace[v]:
                return CoreTraceReport(False, trace, inverse, ("join", u, v))
            if trace[H.meet(u, v)] != trace[u] & trace[v]:
                return CoreTraceReport(False, trace, inverse, ("meet", u, v))
    return CoreTraceReport(True, trace, inverse, None)


def _submasks(mask: int):
    s = mask
    while True:
        yield s
        if s == 0:
            return
        s = (s - 1) & mask


# -- subalgebra generation ----------------------------------------------------


def generated_subalgebra(
    H: FiniteHeytingAlgebra,
    seeds: Iterable[int],
    witness_order: str = "size",
) -> tuple[tuple[int, ...], dict[int, Formula]]:
    """Close seeds plus {0, 1} under meet, join, imp, with witness terms.

    Seed atoms are named p<canonical index>. "size" assigns each element
    the first term found in a smallest-first search (ties broken by the
    operation order meet, join, imp, then operand indices); "round" is an
    alternative admissible choice that fills rounds in discovery order.
    """
    import heapq

    seed_list = sorted(set(seeds), key=H.index)
    base_terms: list[tuple[int, Formula, int]] = []
    for u in seed_list:
        base_terms.append((u, Atom(f"p{H.index(u)}"), 1))
    if H.bot not in set(seed_list):
        base_terms.append((H.bot, Bot(), 1))
    if H.top not in set(seed_list):
        base_terms.append((H.top, Top(), 1))

    ops = [(0, And, H.meet), (1, Or, H.join), (2, Implies, H.imp)]
    terms: dict[int, Formula] = {}
    sizes: dict[int, int] = {}
    order: list[int] = []

    if witness_order == "size":
        heap: list[tuple[int, int, int, int, int, int, Formula]] = []
        tick = 0
        for u, t, s in base_terms:
            heapq.heappush(heap, (s, -1, H.index(u), -1, tick, u, t))
            tick += 1
        while heap:
            size, op_rank, ia, ib, _, value, term = heapq.heappop(heap)
            if value in terms:
                continue
            terms[value] = term
            sizes[value] = size
            order.append(value)
            for rank, node, fn in ops:
                for other in order:
                    for a, b in ((value, other), (other, value)):
                        w = fn(a, b)
                        if w in terms:
                            continue
                        s = sizes[a] + sizes[b] + 1
                        heapq.heappush(
                            heap,
                            (s, rank, H.index(a), H.index(b), tick, w, node(terms[a], terms[b])),
                        )
                        tick += 1
    elif witness_order == "round":
        for u, t, s in base_terms:
            if u not in terms:
                terms[u] = t
                order.append(u)
        changed = True
        while changed:
            changed = False
            snapshot = list(order)
            for rank, node, fn in ops:
                for a in snapshot:
                    for b in snapshot:
                        w = fn(a, b)
                        if w not in terms:
                            terms[w] = node(terms[a], terms[b])
                            order.append(w)
                            changed = True
    else:
        raise ValueError(f"unknown witness order {witness_order!r}")

    members = tuple(sorted(terms, key=H.index))
    return members, terms


def is_regularly_generated(H: FiniteHeytingAlgebra) -> bool:
    members, _ = generated_subalgebra(H, H.regulars)
    return len(members) == len(H.elements)


# -- tensor, module-level and pointwise --------------------------------------


def tensor(P: FinitePoset, U: int | PointSet, V: int | PointSet) -> int:
    u = U.mask if isinstance(U, PointSet) else U
    v = V.mask if isinstance(V, PointSet) else V
    H = dual_algebra(P)
    return H.tensor_op(u, v)


def tensor_pointwise(P: FinitePoset, U: int | PointSet, V: int | PointSet) -> int:
    """Independent description: x lands in the tensor iff M(x) splits.

    x is included iff there are maximal-point sets A, B whose regular hulls
    sit inside U and V and with M(x) inside A union B. No algebra tables
    are consulted.
    """
    u = U.mask if isinstance(U, PointSet) else U
    v = V.mask if isinstance(V, PointSet) else V
    maximal = P.maximal_mask
    n = len(P)

    def hull(a: int) -> int:
        mask = 0
        for i in range(n):
            if P.m_mask(i) & ~a == 0:
                mask |= 1 << i
        return mask

    good_pairs = [
        (a, b)
        for a in _submasks(maximal)
        for b in _submasks(maximal)
        if hull(a) & ~u == 0 and hull(b) & ~v == 0
    ]
    out = 0
    for i in range(n):
        mx = P.m_mask(i)
        if any(mx & ~(a | b) == 0 for a, b in good_pairs):
            out |= 1 << i
    return out


@dataclass
class TensorAxiomReport:
    proxy_valid: dict[str, bool] = field(default_factory=dict)
    core_join_violations: list = field(default_factory=list)
    distributivity_violations: list = field(default_factory=list)
    printed_implication_violations: list = field(default_factory=list)
    repaired_implication_violations: list = field(default_factory=list)

    @property
    def printed_form_holds(self) -> bool:
        return not self.printed_implication_violations

    @property
    def repaired_form_holds(self) -> bool:
        return not self.repaired_implication_violations

    @property
    def ok_except_printed_form(self) -> bool:
        return (
            all(self.proxy_valid.values())
            and not self.core_join_violations
            and not self.distributivity_violations
            and self.repaired_form_holds
        )


def check_inqb_tensor_axioms(P: FinitePoset) -> TensorAxiomReport:
    """Sweep the tensor-algebra axioms over the upset algebra of P.

    The implication axiom is evaluated both as the printed equation
    (x->z) -> (y->k) = (x(+)y) -> (z(+)k) and as the conjunctive reading
    (x->z) & (y->k) <= (x(+)y) -> (z(+)k); both verdicts are reported.
    """
    H = dual_algebra(P)
    if not H.tensor_defined():
        raise TensorUndefinedError(
            "axiom sweep needs a regularly generated algebra validating the proxy suite"
        )
    report = TensorAxiomReport()
    for name, f in zip(("KP", "ND_2", "ND_3"), ml_proxy_formulas()):
        report.proxy_valid[name] = is_valid(H, f, force=True)

    core = H.regulars
    for u in core:
        for v in core:
            if H.tensor_op(u, v) != H.core_join(u, v):
                report.core_join_violations.append((u, v))

    els = H.elements
    for x in els:
        for y in els:
            for z in els:
                lhs = H.tensor_op(x, y | z)
                rhs = H.join(H.tensor_op(x, y), H.tensor_op(x, z))
                if lhs != rhs:
                    report.distributivity_violations.append((x, y, z))

    for x in els:
        for z in els:
            for y in els:
                for k in els:
                    lhs = H.imp(H.imp(x, z), H.imp(y, k))
                    rhs = H.imp(H.tensor_op(x, y), H.tensor_op(z, k))
                    if lhs != rhs:
                        report.printed_implication_violations.append(
                            ((x, z, y, k), (lhs, rhs))
                        )
                    conj = H.meet(H.imp(x, z), H.imp(y, k))
                    if not H.leq(conj, rhs):
                        report.repaired_implication_violations.append(
                            ((x, z, y, k), (conj, rhs))
                        )
    return report


# -- the algebra preorder -----------------------------------------------------


def is_leq(Apos: FinitePoset, Bpos: FinitePoset) -> bool:
    """True iff some upset of Bpos admits a surjective p-morphism onto Apos."""
    target = len(Apos)
    for u in Bpos.upsets():
        if bin(u).count("1") < target:
            continue
        sub = Bpos.induced(u)
        for _ in iter_surjective_p_morphisms(sub, Apos):
            return True
    return False
