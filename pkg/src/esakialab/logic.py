"""Propositional formulas and their algebra, negative-valuation and team semantics.

The grammar is ASCII: atoms match [a-z][a-zA-Z0-9_]*, constants are ``bot``
and ``top``, the connectives are ``~ & (+) | -> <->`` with precedence
``~ > & > (+) > | > -> > <->``; ``->`` associates right, the rest left.
``~p`` and ``<->`` are parse-time sugar (implication to bot, conjunction of
two implications).
"""
from __future__ import annotations

import os
import random
import re
from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Mapping, Sequence


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class UnboundAtomError(KeyError):
    """A formula atom has no value under the given valuation."""


class SweepGuardError(RuntimeError):
    """An exhaustive sweep would exceed the configured evaluation budget."""


def sweep_limit() -> int:
    return int(os.environ.get("ESAKIA_MAX_SWEEP", 10_000_000))


# -- abstract syntax -----------------------------------------------------


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Tensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"


Formula = Atom | Bot | Top | And | Or | Tensor | Implies
_BINARY = (And, Or, Tensor, Implies)


def Neg(f: Formula) -> Implies:
    return Implies(f, Bot())


def Iff(a: Formula, b: Formula) -> And:
    return And(Implies(a, b), Implies(b, a))


def atoms(f: Formula) -> tuple[str, ...]:
    """Atom names occurring in f, sorted."""
    seen: set[str] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Atom):
            seen.add(g.name)
        elif isinstance(g, _BINARY):
            stack += [g.left, g.right]
    return tuple(sorted(seen))


def formula_size(f: Formula) -> int:
    """Number of AST nodes."""
    total = 0
    stack = [f]
    while stack:
        g = stack.pop()
        total += 1
        if isinstance(g, _BINARY):
            stack += [g.left, g.right]
    return total


def has_tensor(f: Formula) -> bool:
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Tensor):
            return True
        if isinstance(g, _BINARY):
            stack += [g.left, g.right]
    return False


def is_standard(f: Formula) -> bool:
    """True iff f contains no disjunction node."""
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, Or):
            return False
        if isinstance(g, _BINARY):
            stack += [g.left, g.right]
    return True


def _balanced(parts: Sequence[Formula], node) -> Formula:
    # balanced fold keeps evaluation recursion logarithmic in len(parts)
    if len(parts) == 1:
        return parts[0]
    mid = len(parts) // 2
    return node(_balanced(parts[:mid], node), _balanced(parts[mid:], node))


def big_and(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return Top()
    return _balanced(list(parts), And)


def big_or(parts: Sequence[Formula]) -> Formula:
    if not parts:
        return Bot()
    return _balanced(list(parts), Or)


# -- parser and formatter -------------------------------------------------

_ATOM_RE = re.compile(r"[a-z][a-zA-Z0-9_]*")
_SYMBOLS = ("(+)", "<->", "->", "~", "&", "|", "(", ")")


def _lex(text: str) -> list[tuple[str, str, int]]:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        for sym in _SYMBOLS:  # "(+)" must be tried before "("
            if text.startswith(sym, i):
                out.append(("sym", sym, i))
                i += len(sym)
                break
        else:
            m = _ATOM_RE.match(text, i)
            if not m:
                raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
            word = m.group()
            out.append(("const" if word in ("bot", "top") else "atom", word, i))
            i = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.tokens = _lex(text)
        self.pos = 0

    def peek(self) -> tuple[str, str, int]:
        return self.tokens[self.pos]

    def take(self) -> tuple[str, str, int]:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, sym: str) -> None:
        kind, val, at = self.take()
        if kind != "sym" or val != sym:
            raise FormulaSyntaxError(f"expected {sym!r}", at)

    def parse(self) -> Formula:
        f = self.iff()
        kind, val, at = self.peek()
        if kind != "end":
            raise FormulaSyntaxError(f"unexpected {val!r}", at)
        return f

    def iff(self) -> Formula:
        f = self.implies()
        while self.peek()[:2] == ("sym", "<->"):
            self.take()
            f = Iff(f, self.implies())
        return f

    def implies(self) -> Formula:
        f = self.disj()
        if self.peek()[:2] == ("sym", "->"):
            self.take()
            return Implies(f, self.implies())
        return f

    def disj(self) -> Formula:
        f = self.tens()
        while self.peek()[:2] == ("sym", "|"):
            self.take()
            f = Or(f, self.tens())
        return f

    def tens(self) -> Formula:
        f = self.conj()
        while self.peek()[:2] == ("sym", "(+)"):
            self.take()
            f = Tensor(f, self.conj())
        return f

    def conj(self) -> Formula:
        f = self.unary()
        while self.peek()[:2] == ("sym", "&"):
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, val, at = self.peek()
        if (kind, val) == ("sym", "~"):
            self.take()
            return Neg(self.unary())
        return self.primary()

    def primary(self) -> Formula:
        kind, val, at = self.take()
        if kind == "atom":
            return Atom(val)
        if kind == "const":
            return Bot() if val == "bot" else Top()
        if (kind, val) == ("sym", "("):
            f = self.iff()
            self.expect(")")
            return f
        raise FormulaSyntaxError(f"unexpected {val or 'end of input'!r}", at)


def parse(text: str) -> Formula:
    return _Parser(text).parse()


_PREC_IMPLIES, _PREC_OR, _PREC_TENSOR, _PREC_AND, _PREC_NEG = 2, 3, 4, 5, 6


def _fmt(f: Formula, need: int) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Bot):
        return "bot"
    if isinstance(f, Top):
        return "top"
    if isinstance(f, Implies) and isinstance(f.right, Bot):
        s, prec = "~" + _fmt(f.left, _PREC_NEG), _PREC_NEG
    elif isinstance(f, And):
        s, prec = f"{_fmt(f.left, _PREC_AND)} & {_fmt(f.right, _PREC_AND + 1)}", _PREC_AND
    elif isinstance(f, Tensor):
        s, prec = f"{_fmt(f.left, _PREC_TENSOR)} (+) {_fmt(f.right, _PREC_TENSOR + 1)}", _PREC_TENSOR
    elif isinstance(f, Or):
        s, prec = f"{_fmt(f.left, _PREC_OR)} | {_fmt(f.right, _PREC_OR + 1)}", _PREC_OR
    else:
        assert isinstance(f, Implies)
        s, prec = f"{_fmt(f.left, _PREC_IMPLIES + 1)} -> {_fmt(f.right, _PREC_IMPLIES)}", _PREC_IMPLIES
    return f"({s})" if prec < need else s


def format_formula(f: Formula) -> str:
    """Render with minimal parentheses; negation sugar is re-applied."""
    return _fmt(f, 0)


# -- algebra semantics -----------------------------------------------------


class NegativeValuation:
    """An atom assignment whose every value is a regular algebra element."""

    def __init__(self, algebra, mapping: Mapping[str, int]):
        regs = set(algebra.regulars)
        for name, value in mapping.items():
            if value not in regs:
                raise ValueError(f"value of {name!r} is not a regular element")
        self.algebra = algebra
        self.mapping = dict(mapping)

    def __getitem__(self, name: str) -> int:
        return self.mapping[name]


def eval_algebra(H, mu, f: Formula) -> int:
    """Interpret f in H under the valuation mu (atom name to element)."""
    # memo keyed by node identity: value-hashing re-walks shared subtrees
    memo: dict[int, int] = {}

    def rec(g: Formula) -> int:
        got = memo.get(id(g))
        if got is not None:
            return got
        if isinstance(g, Atom):
            try:
                value = mu[g.name]
            except KeyError:
                raise UnboundAtomError(g.name) from None
        elif isinstance(g, Bot):
            value = H.bot
        elif isinstance(g, Top):
            value = H.top
        elif isinstance(g, And):
            value = H.meet(rec(g.left), rec(g.right))
        elif isinstance(g, Or):
            value = H.join(rec(g.left), rec(g.right))
        elif isinstance(g, Implies):
            value = H.imp(rec(g.left), rec(g.right))
        else:
            assert isinstance(g, Tensor)
            value = H.tensor_op(rec(g.left), rec(g.right))
        memo[id(g)] = value
        return value

    return rec(f)


def _guard(count: int, force: bool) -> None:
    if not force and count > sweep_limit():
        raise SweepGuardError(
            f"sweep of {count} valuations exceeds the budget of {sweep_limit()}; "
            f"pass force=True or raise ESAKIA_MAX_SWEEP"
        )


def is_valid(H, f: Formula, force: bool = False) -> bool:
    """True iff f evaluates to 1 under every valuation into H."""
    names = atoms(f)
    _guard(len(H.elements) ** len(names), force)
    for values in product(H.elements, repeat=len(names)):
        if eval_algebra(H, dict(zip(names, values)), f) != H.top:
            return False
    return True


def is_dna_valid(H, f: Formula, force: bool = False) -> bool:
    """True iff f evaluates to 1 under every negative (regular-valued) valuation.

    When H exposes component_algebras(), validity is checked on each factor;
    a product algebra validates a formula iff every factor does.
    """
    parts = H.component_algebras() if hasattr(H, "component_algebras") else [H]
    if len(parts) > 1:
        return all(is_dna_valid(K, f, force=force) for K in parts)
    names = atoms(f)
    _guard(len(H.regulars) ** len(names), force)
    for values in product(H.regulars, repeat=len(names)):
        if eval_algebra(H, dict(zip(names, values)), f) != H.top:
            return False
    return True


# -- team semantics ---------------------------------------------------------


@dataclass(frozen=True)
class Team:
    """A set of propositional assignments over a declared atom tuple.

    Each assignment is an int whose bit i gives the value of atoms[i].
    """

    atoms: tuple[str, ...]
    assignments: frozenset[int]

    @classmethod
    def of(cls, atom_names: Iterable[str], rows: Iterable[int]) -> "Team":
        return cls(tuple(atom_names), frozenset(rows))


class _TeamEvaluator:
    """Support evaluation over subteams of a fixed world set, memoized.

    Worlds are the 2^k assignments over k atom slots; a team is a bitmask
    over worlds. The tensor clause searches every pair of subteams whose
    union is the team, with no shortcut.
    """

    def __init__(self, atom_names: Sequence[str]):
        self.atom_names = tuple(atom_names)
        k = len(self.atom_names)
        self.world_count = 1 << k
        self.atom_worlds = {}
        for i, name in enumerate(self.atom_names):
            mask = 0
            for w in range(self.world_count):
                if w >> i & 1:
                    mask |= 1 << w
            self.atom_worlds[name] = mask
        self.memo: dict[tuple[Formula, int], bool] = {}

    def supports(self, f: Formula, team: int) -> bool:
        key = (f, team)
        got = self.memo.get(key)
        if got is not None:
            return got
        if isinstance(f, Atom):
            try:
                value = team & ~self.atom_worlds[f.name] == 0
            except KeyError:
                raise UnboundAtomError(f.name) from None
        elif isinstance(f, Bot):
            value = team == 0
        elif isinstance(f, Top):
            value = True
        elif isinstance(f, And):
            value = self.supports(f.left, team) and self.supports(f.right, team)
        elif isinstance(f, Or):
            value = self.supports(f.left, team) or self.supports(f.right, team)
        elif isinstance(f, Implies):
            value = True
            s = team
            while True:
                if self.supports(f.left, s) and not self.supports(f.right, s):
                    value = False
                    break
                if s == 0:
                    break
                s = (s - 1) & team
        else:
            assert isinstance(f, Tensor)
            value = self._split(f, team)
        self.memo[key] = value
        return value

    def _split(self, f: Tensor, team: int) -> bool:
        s = team
        while True:
            if self.supports(f.left, s):
                rest = team & ~s
                w = s
                while True:
                    if self.supports(f.right, rest | w):
                        return True
                    if w == 0:
                        break
                    w = (w - 1) & s
            if s == 0:
                break
            s = (s - 1) & team
        return False


def team_eval(t: Team, f: Formula) -> bool:
    """True iff the team supports f."""
    ev = _TeamEvaluator(t.atoms)
    mask = 0
    for row in t.assignments:
        if not 0 <= row < ev.world_count:
            raise ValueError(f"assignment {row} out of range for {len(t.atoms)} atoms")
        mask |= 1 << row
    return ev.supports(f, mask)


def team_valid(f: Formula, k: int, force: bool = False) -> bool:
    """True iff every team over the 2^k assignments supports f."""
    names = atoms(f)
    if len(names) > k:
        raise ValueError(f"formula has {len(names)} atoms, more than k={k}")
    if k > 2 and not force:
        raise SweepGuardError(
            f"exhaustive team sweep is limited to k <= 2 (got {k}); pass force=True"
        )
    slots = list(names) + [f"_pad{i}" for i in range(k - len(names))]
    ev = _TeamEvaluator(slots)
    _guard(1 << (1 << k), force or k <= 3)
    for team in range(1 << ev.world_count):
        if not ev.supports(f, team):
            return False
    return True


# -- inquisitive disjunctive normal form ------------------------------------


def dnf_inquisitive(f: Formula) -> list[Formula]:
    """Disjunction-free disjuncts whose join is support-equivalent to f.

    The recursion splits disjunctions, distributes conjunction pairwise and
    expands an implication over all choice functions from antecedent
    disjuncts to consequent disjuncts. Tensor is not supported.
    """
    if has_tensor(f):
        raise ValueError("normal form is defined for tensor-free formulas")

    def rec(g: Formula) -> list[Formula]:
        if isinstance(g, (Atom, Bot, Top)):
            return [g]
        if isinstance(g, Or):
            return rec(g.left) + rec(g.right)
        if isinstance(g, And):
            return [And(a, b) for a in rec(g.left) for b in rec(g.right)]
        assert isinstance(g, Implies)
        ants, cons = rec(g.left), rec(g.right)
        out = []
        for choice in product(range(len(cons)), repeat=len(ants)):
            parts = [Implies(a, cons[c]) for a, c in zip(ants, choice)]
            conj = parts[0]
            for part in parts[1:]:
                conj = And(conj, part)
            out.append(conj)
        return out

    return rec(f)


# -- named axiom instances ---------------------------------------------------


def axiom_instances(name: str, **params) -> Formula:
    """Named axiom schemata: "KP", "ND" (with k >= 2), "dep" (premises, target)."""
    if name == "KP":
        p, q, r = Atom("p"), Atom("q"), Atom("r")
        return Implies(
            Implies(Neg(p), Or(q, r)),
            Or(Implies(Neg(p), q), Implies(Neg(p), r)),
        )
    if name == "ND" or re.fullmatch(r"ND_\d+", name):
        k = int(name.split("_")[1]) if "_" in name else params.get("k", 0)
        if k < 2:
            raise ValueError("ND needs k >= 2")
        p = Atom("p")
        negs = [Neg(Atom(f"q{i}")) for i in range(1, k + 1)]
        disj = negs[0]
        for g in negs[1:]:
            disj = Or(disj, g)
        parts = [Implies(Neg(p), g) for g in negs]
        out = parts[0]
        for g in parts[1:]:
            out = Or(out, g)
        return Implies(Implies(Neg(p), disj), out)
    if name == "dep":
        premises = [Atom(a) for a in params.get("premises", ())]
        target = Atom(params["target"])
        if not premises:
            raise ValueError("dep needs at least one premise atom")
        ants = [Or(a, Neg(a)) for a in premises]
        ant = ants[0]
        for g in ants[1:]:
            ant = And(ant, g)
        return Implies(ant, Or(target, Neg(target)))
    raise ValueError(f"unknown axiom name {name!r}")


def ml_proxy_formulas() -> tuple[Formula, ...]:
    """The fixed finite stand-in suite for the Medvedev-style laws."""
    return (axiom_instances("KP"), axiom_instances("ND", k=2), axiom_instances("ND", k=3))


# -- formula corpora ---------------------------------------------------------


def enumerate_formulas(
    atom_names: Sequence[str], max_size: int, with_tensor: bool = False
) -> list[Formula]:
    """All formulas up to the given AST size, size-major, deterministic order."""
    ops = [And, Or, Implies] + ([Tensor] if with_tensor else [])
    by_size: dict[int, list[Formula]] = {
        1: [Bot(), Top()] + [Atom(a) for a in atom_names]
    }
    for size in range(3, max_size + 1, 2):
        bucket: list[Formula] = []
        for op in ops:
            for left_size in range(1, size - 1, 2):
                rights = by_size.get(size - 1 - left_size, ())
                for left in by_size[left_size]:
                    for right in rights:
                        bucket.append(op(left, right))
        by_size[size] = bucket
    out: list[Formula] = []
    for size in sorted(by_size):
        if size <= max_size:
            out.extend(by_size[size])
    return out


def sample_formulas(
    atom_names: Sequence[str],
    max_size: int,
    count: int,
    seed: int = 0,
    with_tensor: bool = False,
) -> list[Formula]:
    """Deterministic pseudorandom sample of distinct formulas."""
    rnd = random.Random(seed)
    ops = [And, Or, Implies] + ([Tensor] if with_tensor else [])
    leaves: list[Formula] = [Bot(), Top()] + [Atom(a) for a in atom_names]

    def gen(budget: int) -> Formula:
        if budget < 3 or rnd.random() < 0.25:
            return rnd.choice(leaves)
        op = rnd.choice(ops)
        left_size = rnd.randrange(1, budget - 1, 2)
        return op(gen(left_size), gen(budget - 1 - left_size))

    seen: set[Formula] = set()
    out: list[Formula] = []
    while len(out) < count:
        f = gen(max_size)
        if f not in seen:
            seen.add(f)
            out.append(f)
    return out
