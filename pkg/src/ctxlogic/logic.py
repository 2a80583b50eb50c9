"""Propositional contextual logic over a context poset.

Formulas are built from atoms (each bound to a context, i.e. the spectral
algebra of an observable) with ``&``, ``|``, ``->`` and ``~``. Truth values
are downsets of the poset, which form a Heyting algebra; forcing at a
context follows the usual Kripke clauses, with implication and negation
quantifying over the contexts below.

Grammar, loosest binding first (``->`` is right-associative)::

    formula := imp
    imp     := or [ "->" imp ]
    or      := and { "|" and }
    and     := neg { "&" neg }
    neg     := "~" neg | "(" formula ")" | IDENT

Unicode ``¬ ∧ ∨ →`` are accepted as aliases.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping, NamedTuple, Sequence

from .errors import InvalidInput, NotInPoset
from .lattice import ContextPoset, Downset
from .sheaf import LocalSection, extended_valuation, is_local_section

__all__ = [
    "Formula",
    "Atom",
    "And",
    "Or",
    "Implies",
    "Not",
    "FormulaSyntaxError",
    "parse_formula",
    "KripkeModel",
    "forces",
    "eval_formula",
    "heyting_and",
    "heyting_or",
    "heyting_implies",
    "heyting_not",
    "interior",
    "border",
    "HomomorphismReport",
    "check_heyting_homomorphism",
    "excluded_middle_witness",
    "random_formula",
]


class Formula:
    __slots__ = ()

    def atoms(self) -> set:
        raise NotImplementedError


@dataclass(frozen=True)
class Atom(Formula):
    name: str

    def atoms(self):
        return {self.name}

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Not(Formula):
    child: Formula

    def atoms(self):
        return self.child.atoms()

    def __str__(self):
        return f"~{_wrap(self.child, Not)}"


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula

    def atoms(self):
        return self.left.atoms() | self.right.atoms()

    def __str__(self):
        return f"{_wrap(self.left, And)} & {_wrap(self.right, Not)}"


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula

    def atoms(self):
        return self.left.atoms() | self.right.atoms()

    def __str__(self):
        return f"{_wrap(self.left, Or)} | {_wrap(self.right, And)}"


@dataclass(frozen=True)
class Implies(Formula):
    left: Formula
    right: Formula

    def atoms(self):
        return self.left.atoms() | self.right.atoms()

    def __str__(self):
        return f"{_wrap(self.left, Or)} -> {_wrap(self.right, Implies)}"


# binding strength; a child is parenthesised when it binds looser than allowed
_RANK = {Implies: 0, Or: 1, And: 2, Not: 3, Atom: 4}


def _wrap(child: Formula, loosest: type) -> str:
    text = str(child)
    return text if _RANK[type(child)] >= _RANK[loosest] else f"({text})"


# -- parser ----------------------------------------------------------------


class FormulaSyntaxError(InvalidInput):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.position = position


_ALIASES = {"¬": "~", "∧": "&", "∨": "|", "→": "->"}


def _tokenize(text: str) -> list:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _ALIASES:
            tokens.append((_ALIASES[ch], i))
            i += 1
        elif text.startswith("->", i):
            tokens.append(("->", i))
            i += 2
        elif ch in "~&|()":
            tokens.append((ch, i))
            i += 1
        elif ch.isalpha() or ch == "_":
            j = i + 1
            while j < len(text) and (text[j].isalnum() or text[j] in "_'"):
                j += 1
            tokens.append(("IDENT", i, text[i:j]))
            i = j
        else:
            raise FormulaSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("EOF", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def take(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            what = "end of input" if tok[0] == "EOF" else repr(tok[2] if tok[0] == "IDENT" else tok[0])
            raise FormulaSyntaxError(f"expected {kind!r}, found {what}", tok[1])
        self.pos += 1
        return tok

    def formula(self) -> Formula:
        return self.imp()

    def imp(self) -> Formula:
        left = self.disj()
        if self.peek()[0] == "->":
            self.pos += 1
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        node = self.conj()
        while self.peek()[0] == "|":
            self.pos += 1
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.neg()
        while self.peek()[0] == "&":
            self.pos += 1
            node = And(node, self.neg())
        return node

    def neg(self) -> Formula:
        tok = self.peek()
        if tok[0] == "~":
            self.pos += 1
            return Not(self.neg())
        if tok[0] == "(":
            self.pos += 1
            inner = self.formula()
            self.take(")")
            return inner
        if tok[0] == "IDENT":
            self.pos += 1
            return Atom(tok[2])
        what = "end of input" if tok[0] == "EOF" else repr(tok[0])
        raise FormulaSyntaxError(f"expected a formula, found {what}", tok[1])


def parse_formula(text: str) -> Formula:
    parser = _Parser(text)
    phi = parser.formula()
    parser.take("EOF")
    return phi


# -- Kripke semantics ----------------------------------------------------------


class KripkeModel:
    """Frame = the context poset; atoms are interpreted through a local section.

    ``bindings`` maps each atom name to the context (id or Context) of the
    observable it names. Unbound contexts are rejected, never inserted.
    """

    def __init__(self, poset: ContextPoset, section: LocalSection, bindings: Mapping):
        if section.poset is not poset:
            raise InvalidInput("section belongs to a different poset")
        check = is_local_section(section)
        if not check:
            raise InvalidInput(f"not a local section: {check.reason} at {check.violation}")
        resolved = {}
        for name, ctx in bindings.items():
            try:
                resolved[name] = poset.resolve(ctx)
            except NotInPoset as exc:
                raise InvalidInput(f"atom {name!r} is bound outside the poset: {exc}") from None
        self.poset = poset
        self.section = section
        self.bindings = resolved
        self._atom_values = {
            name: extended_valuation(section, cid).members for name, cid in resolved.items()
        }
        self._memo: dict = {}

    def atom_value(self, name: str) -> frozenset:
        try:
            return self._atom_values[name]
        except KeyError:
            raise InvalidInput(f"unknown atom {name!r}") from None


def forces(m: KripkeModel, w, phi: Formula) -> bool:
    """M |=_w phi, clause by clause; memoised per (context, subformula)."""
    return _forces(m, m.poset.resolve(w), phi)


def _forces(m: KripkeModel, wid: str, phi: Formula) -> bool:
    key = (wid, phi)
    hit = m._memo.get(key)
    if hit is not None:
        return hit
    if isinstance(phi, Atom):
        result = wid in m.atom_value(phi.name)
    elif isinstance(phi, Or):
        result = _forces(m, wid, phi.left) or _forces(m, wid, phi.right)
    elif isinstance(phi, And):
        result = _forces(m, wid, phi.left) and _forces(m, wid, phi.right)
    elif isinstance(phi, Implies):
        result = all(not _forces(m, b, phi.left) or _forces(m, b, phi.right) for b in m.poset.below(wid))
    elif isinstance(phi, Not):
        result = not any(_forces(m, b, phi.child) for b in m.poset.below(wid))
    else:
        raise TypeError(f"not a formula: {phi!r}")
    m._memo[key] = result
    return result


def eval_formula(m: KripkeModel, phi: Formula) -> Downset:
    """Extended contextual valuation: the set of contexts forcing ``phi``."""
    for name in phi.atoms():
        m.atom_value(name)
    return Downset(m.poset, (cid for cid in m.poset.ids if _forces(m, cid, phi)), check=False)


# -- Heyting algebra of downsets ---------------------------------------------------


def _same_poset(s: Downset, t: Downset) -> ContextPoset:
    if s.poset is not t.poset:
        raise InvalidInput("downsets of different posets")
    return s.poset


def heyting_and(s: Downset, t: Downset) -> Downset:
    return Downset(_same_poset(s, t), s.members & t.members, check=False)


def heyting_or(s: Downset, t: Downset) -> Downset:
    return Downset(_same_poset(s, t), s.members | t.members, check=False)


def heyting_implies(s: Downset, t: Downset) -> Downset:
    """{P : every X <= P in s is also in t}."""
    p = _same_poset(s, t)
    bad = s.members - t.members
    return Downset(p, (cid for cid in p.ids if not (p.below(cid) & bad)), check=False)


def heyting_not(s: Downset) -> Downset:
    """{P : no X <= P lies in s}."""
    p = s.poset
    return Downset(p, (cid for cid in p.ids if not (p.below(cid) & s.members)), check=False)


def interior(p: ContextPoset, subset: Iterable[str]) -> Downset:
    """Largest downset inside ``subset``, by repeatedly discarding elements
    that sit above something already discarded or outside."""
    keep = set(subset)
    changed = True
    while changed:
        changed = False
        for cid in list(keep):
            if any(lower not in keep for lower in p.below(cid)):
                keep.discard(cid)
                changed = True
    return Downset(p, keep, check=False)


def border(s: Downset) -> frozenset:
    """Contexts in neither s nor its pseudo-complement."""
    p = s.poset
    return frozenset(p.ids) - s.members - heyting_not(s).members


# -- checks built on the semantics -----------------------------------------------


class HomomorphismReport(NamedTuple):
    checked: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations


def check_heyting_homomorphism(
    m: KripkeModel,
    phis: Sequence[Formula],
    evaluator: Callable[[KripkeModel, Formula], Downset] | None = None,
) -> HomomorphismReport:
    """Compare evaluation of compound formulas with the Heyting operations.

    For every ordered pair (a, b) from ``phis`` (including a == b) the
    four laws for |, &, -> and ~ are checked. ``evaluator`` defaults to
    :func:`eval_formula` and exists so tests can inject a faulty one.
    Each violation is (law, left, right, first offending context id).
    """
    ev = evaluator or eval_formula
    values = {phi: ev(m, phi) for phi in phis}
    violations = []
    checked = 0

    def compare(law, a, b, got, want):
        nonlocal checked
        checked += 1
        if got.members != want.members:
            diff = m.poset.sort_ids(got.members ^ want.members)
            violations.append((law, a, b, diff[0]))

    for a in phis:
        va = values[a]
        compare("not", a, None, ev(m, Not(a)), heyting_not(va))
        for b in phis:
            vb = values[b]
            compare("or", a, b, ev(m, Or(a, b)), heyting_or(va, vb))
            compare("and", a, b, ev(m, And(a, b)), heyting_and(va, vb))
            compare("implies", a, b, ev(m, Implies(a, b)), heyting_implies(va, vb))
    return HomomorphismReport(checked, violations)


def excluded_middle_witness(m: KripkeModel) -> tuple | None:
    """First (atom, context) where ``A | ~A`` is not forced, if any."""
    p = m.poset
    for name in sorted(m.bindings):
        undecided = border(Downset(p, m.atom_value(name), check=False))
        if undecided:
            return name, p.sort_ids(undecided)[0]
    return None


def random_formula(rng: random.Random, names: Sequence[str], depth: int) -> Formula:
    """Random formula of depth at most ``depth`` over the given atom names."""
    if depth <= 0 or rng.random() < 0.2:
        return Atom(rng.choice(list(names)))
    kind = rng.randrange(4)
    if kind == 0:
        return Not(random_formula(rng, names, depth - 1))
    left = random_formula(rng, names, depth - 1)
    right = random_formula(rng, names, depth - 1)
    return (And, Or, Implies)[kind - 1](left, right)
