"""Boolean valuations, sections of the spectral sheaf, and the dual presheaf.

A Boolean homomorphism from a finite Boolean algebra to {0, 1} is fixed by
the single atom it sends to 1, so a :class:`Valuation` stores that atom's
index. A :class:`LocalSection` assigns one valuation to every context of
a down-closed domain such that smaller contexts carry the restriction of
larger ones.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from types import MappingProxyType
from typing import Iterator, Mapping, NamedTuple, Sequence

from .errors import InvalidInput, NotInPoset
from .geometry import Operator, Projector
from .lattice import Context, ContextPoset, Downset, all_downsets, intersect, leq, spectral_algebra

__all__ = [
    "Valuation",
    "LocalSection",
    "SectionCheck",
    "SearchResult",
    "DualPresheaf",
    "NaturalTransformationSection",
    "restrict_valuation",
    "principal_section",
    "is_local_section",
    "extend_section",
    "find_global_section",
    "parity_oracle",
    "extended_valuation",
    "boolean_information",
    "build_dual_presheaf",
    "section_to_transformation",
    "transformation_to_section",
    "enumerate_local_sections",
    "value_of",
]


@dataclass(frozen=True)
class Valuation:
    """Boolean homomorphism context -> 2 sending ``selected_atom`` to 1."""

    context: Context
    selected_atom: int

    def __post_init__(self):
        if not 0 <= self.selected_atom < self.context.size:
            raise InvalidInput(f"atom index {self.selected_atom} out of range for {self.context!r}")

    @property
    def context_id(self):
        return self.context.id

    @property
    def atom(self) -> Projector:
        return self.context.atoms[self.selected_atom]

    def __call__(self, mask: int) -> int:
        """Truth value of the element with the given atom bitmask."""
        return (mask >> self.selected_atom) & 1


def restrict_valuation(f: Valuation, v: Context) -> Valuation:
    """f restricted to the subalgebra ``v``: the atom of v containing f's atom."""
    w = f.context
    if not leq(v, w):
        raise InvalidInput(f"{v!r} is not a subalgebra of {w!r}")
    bit = 1 << f.selected_atom
    for j, a in enumerate(v.atoms):
        if w.mask_of(a) & bit:
            return Valuation(v, j)
    raise AssertionError("atoms of a subalgebra must cover every atom")


@dataclass(frozen=True, eq=False)
class LocalSection:
    poset: ContextPoset
    domain: Downset
    assignment: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "assignment", MappingProxyType(dict(self.assignment)))

    @classmethod
    def empty(cls, p: ContextPoset) -> "LocalSection":
        return cls(p, p.empty(), {})

    @classmethod
    def from_indices(cls, p: ContextPoset, indices: Mapping) -> "LocalSection":
        """Build from {context id: atom index}; the domain is the key set."""
        assignment = {cid: Valuation(p.context(cid), int(i)) for cid, i in indices.items()}
        return cls(p, Downset(p, assignment), assignment)

    def indices(self) -> dict:
        return {cid: self.assignment[cid].selected_atom for cid in self.domain.ids()}

    def is_global(self) -> bool:
        return len(self.domain) == len(self.poset)

    def __getitem__(self, cid):
        return self.assignment[self.poset.resolve(cid)]

    def __eq__(self, other):
        return (
            isinstance(other, LocalSection)
            and self.poset is other.poset
            and self.domain == other.domain
            and dict(self.assignment) == dict(other.assignment)
        )

    def __hash__(self):
        return hash((self.domain, frozenset(self.indices().items())))

    def __repr__(self):
        return f"LocalSection({len(self.domain)} of {len(self.poset)} contexts)"


class SectionCheck(NamedTuple):
    ok: bool
    violation: tuple | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def principal_section(p: ContextPoset, w, f) -> LocalSection:
    """The section over (w] induced by a valuation (or atom index) on w."""
    wid = p.resolve(w)
    ctx = p.context(wid)
    if not isinstance(f, Valuation):
        f = Valuation(ctx, int(f))
    elif f.context != ctx:
        raise InvalidInput("valuation is not defined on the base context")
    else:
        f = Valuation(ctx, f.selected_atom)
    below = p.below(wid)
    assignment = {vid: restrict_valuation(f, p.context(vid)) for vid in below}
    return LocalSection(p, Downset(p, below, check=False), assignment)


def is_local_section(candidate: LocalSection) -> SectionCheck:
    p = candidate.poset
    dom = candidate.domain.members
    keys = set(candidate.assignment)
    if keys != dom:
        extra = sorted(keys ^ dom)
        return SectionCheck(False, None, f"assignment keys differ from domain at {extra[0]!r}")
    for cid in p.sort_ids(dom):
        missing = p.below(cid) - dom
        if missing:
            return SectionCheck(False, (p.sort_ids(missing)[0], cid), "domain is not down-closed")
        val = candidate.assignment[cid]
        if val.context != p.context(cid):
            return SectionCheck(False, (cid, cid), "valuation lives on a different context")
    for hi in p.sort_ids(dom):
        top = candidate.assignment[hi]
        for lo in p.sort_ids(p.below(hi) - {hi}):
            if restrict_valuation(top, p.context(lo)).selected_atom != candidate.assignment[lo].selected_atom:
                return SectionCheck(False, (lo, hi), "restriction mismatch")
    return SectionCheck(True)


def extend_section(s: LocalSection, w) -> list:
    """All sections on dom(s) joined with (w] that agree with ``s``."""
    p = s.poset
    wid = p.resolve(w)
    if wid in s.domain:
        raise InvalidInput(f"{wid} is already in the section's domain")
    ctx = p.context(wid)
    below = p.below(wid)
    shared = [vid for vid in p.sort_ids(below) if vid in s.domain]
    out = []
    for i in range(ctx.size):
        f = Valuation(ctx, i)
        restricted = {vid: restrict_valuation(f, p.context(vid)) for vid in below}
        if all(restricted[vid].selected_atom == s.assignment[vid].selected_atom for vid in shared):
            assignment = dict(s.assignment)
            for vid, val in restricted.items():
                assignment.setdefault(vid, val)
            out.append(LocalSection(p, Downset(p, s.domain.members | below, check=False), assignment))
    return out


@dataclass(frozen=True)
class SearchResult:
    section: LocalSection | None
    explored: int

    @property
    def exists(self) -> bool:
        return self.section is not None


def _restriction_table(p: ContextPoset, mid: str) -> list:
    """For each atom of maximal context ``mid``: {V: restricted atom index} over (mid]."""
    m = p.context(mid)
    table = [dict() for _ in range(m.size)]
    for vid in p.below(mid):
        v = p.context(vid)
        for j, a in enumerate(v.atoms):
            mask = m.mask_of(a)
            for i in range(m.size):
                if mask >> i & 1:
                    table[i][vid] = j
    return table


def find_global_section(p: ContextPoset) -> SearchResult:
    """Backtracking search for a section over the whole poset.

    Only maximal contexts are branched on (values below them follow by
    restriction), most-shared first. ``explored`` counts the
    (maximal context, atom) choices tried.
    """
    maximal = list(p.maximal_ids)
    tables = {mid: _restriction_table(p, mid) for mid in maximal}
    nontrivial = {mid: p.below(mid) - {p.bottom_id, mid} for mid in maximal}

    def shared_count(mid):
        others = set()
        for o in maximal:
            if o != mid:
                others |= nontrivial[o]
        return len(nontrivial[mid] & others)

    order = sorted(maximal, key=lambda mid: -shared_count(mid))
    current: dict = {}
    chosen: dict = {}
    explored = 0

    def rec(k: int) -> bool:
        nonlocal explored
        if k == len(order):
            return True
        mid = order[k]
        for i, forced in enumerate(tables[mid]):
            explored += 1
            if any(current.get(vid, j) != j for vid, j in forced.items()):
                continue
            added = [vid for vid in forced if vid not in current]
            for vid in added:
                current[vid] = forced[vid]
            chosen[mid] = i
            if rec(k + 1):
                return True
            for vid in added:
                del current[vid]
            del chosen[mid]
        return False

    if not rec(0):
        return SearchResult(None, explored)
    return SearchResult(LocalSection.from_indices(p, current), explored)


def parity_oracle(bases: Sequence[Sequence[Projector]]) -> str:
    """Independent KS certificate for families of complete rank-one bases.

    If every ray occurs in an even number of bases while the number of
    bases is odd, no 0/1 assignment picks exactly one ray per basis
    consistently: counting picks per basis gives an odd total, counting
    per ray gives an even one. Returns "unsat" in that case, "n/a" when
    the argument does not apply (it never certifies existence).
    """
    if not bases or len(bases) % 2 == 0:
        return "n/a"
    counts: dict = {}
    for basis in bases:
        if any(q.rank != 1 for q in basis):
            return "n/a"
        for q in set(basis):
            counts[q] = counts.get(q, 0) + 1
    if all(c % 2 == 0 for c in counts.values()):
        return "unsat"
    return "n/a"


def extended_valuation(s: LocalSection, wa) -> Downset:
    """Members of dom(s) that are subalgebras of ``wa``."""
    p = s.poset
    return Downset(p, s.domain.members & p.below(wa), check=False)


def boolean_information(s: LocalSection, wb, wa) -> Valuation | None:
    """What the value at ``wb`` says about ``wa``: its restriction to wb ∩ wa."""
    p = s.poset
    bid = p.resolve(wb)
    if bid not in s.domain:
        raise InvalidInput(f"{bid} is not in the section's domain")
    about = wa if isinstance(wa, Context) else p.context(wa)
    meet = intersect(p.context(bid), about)
    if meet not in p:
        return None
    return restrict_valuation(s.assignment[bid], p.context(meet))


def enumerate_local_sections(p: ContextPoset) -> Iterator[LocalSection]:
    """Every local section, over every downset (including the empty one)."""
    tables: dict = {}
    for dom in all_downsets(p):
        tops = [cid for cid in dom.ids() if not (p.above(cid) - {cid}) & dom.members]
        for mid in tops:
            if mid not in tables:
                tables[mid] = _restriction_table(p, mid)
        for choice in product(*(range(p.context(mid).size) for mid in tops)):
            indices: dict = {}
            ok = True
            for mid, i in zip(tops, choice):
                for vid, j in tables[mid][i].items():
                    if indices.setdefault(vid, j) != j:
                        ok = False
                        break
                if not ok:
                    break
            if ok:
                yield LocalSection(p, dom, {cid: Valuation(p.context(cid), j) for cid, j in indices.items()})


class DualPresheaf:
    """Contravariant functor: context -> its valuations, inclusion -> restriction."""

    def __init__(self, poset: ContextPoset):
        self.poset = poset
        self._fibers = {cid: tuple(Valuation(c, i) for i in range(c.size)) for cid, c in zip(poset.ids, poset.contexts)}
        self._tables: dict = {}

    def fiber(self, w) -> tuple:
        return self._fibers[self.poset.resolve(w)]

    def restriction(self, v, w):
        """The map D(w) -> D(v) for v <= w."""
        p = self.poset
        vid, wid = p.resolve(v), p.resolve(w)
        key = (vid, wid)
        if key not in self._tables:
            if not p.leq(vid, wid):
                raise InvalidInput(f"no arrow {vid} -> {wid}")
            self._tables[key] = tuple(restrict_valuation(g, p.context(vid)) for g in self.fiber(wid))
        table, source = self._tables[key], p.context(wid)

        def restrict(g: Valuation) -> Valuation:
            if g.context is not source and g.context != source:
                raise InvalidInput("valuation is not in the source fiber")
            return table[g.selected_atom]

        return restrict

    def check_functoriality(self) -> list:
        """Identity and composition laws on every chain u <= v <= w."""
        p = self.poset
        problems = []
        for wid in p.ids:
            ident = self.restriction(wid, wid)
            for g in self.fiber(wid):
                if ident(g) != g:
                    problems.append(("identity", wid, g.selected_atom))
            for vid in p.below(wid):
                r_wv = self.restriction(vid, wid)
                for uid in p.below(vid):
                    r_vu, r_wu = self.restriction(uid, vid), self.restriction(uid, wid)
                    for g in self.fiber(wid):
                        if r_vu(r_wv(g)) != r_wu(g):
                            problems.append(("composition", uid, vid, wid, g.selected_atom))
        return problems


def build_dual_presheaf(p: ContextPoset) -> DualPresheaf:
    return DualPresheaf(p)


@dataclass(frozen=True, eq=False)
class NaturalTransformationSection:
    """tau: U~ -> D where U~ is the subfunctor of 1 supported on a downset."""

    presheaf: DualPresheaf
    subfunctor_domain: Downset
    components: Mapping

    def __post_init__(self):
        object.__setattr__(self, "components", MappingProxyType(dict(self.components)))

    def subfunctor(self, w) -> frozenset:
        """U~(w): the one-point set when w is in the domain, else empty."""
        return frozenset({"*"}) if self.presheaf.poset.resolve(w) in self.subfunctor_domain else frozenset()

    def check_naturality(self) -> tuple | None:
        """First (v, w) where restricting tau_w disagrees with tau_v, or None."""
        p = self.presheaf.poset
        for wid in self.subfunctor_domain.ids():
            for vid in p.sort_ids(p.below(wid)):
                if self.presheaf.restriction(vid, wid)(self.components[wid]) != self.components[vid]:
                    return (vid, wid)
        return None

    def __eq__(self, other):
        return (
            isinstance(other, NaturalTransformationSection)
            and self.presheaf.poset is other.presheaf.poset
            and self.subfunctor_domain == other.subfunctor_domain
            and dict(self.components) == dict(other.components)
        )

    def __hash__(self):
        return hash((self.subfunctor_domain, frozenset((k, v.selected_atom) for k, v in self.components.items())))


def section_to_transformation(s: LocalSection, presheaf: DualPresheaf | None = None) -> NaturalTransformationSection:
    presheaf = presheaf or DualPresheaf(s.poset)
    if presheaf.poset is not s.poset:
        raise InvalidInput("presheaf and section live on different posets")
    components = {}
    for cid in s.domain.ids():
        components[cid] = s.assignment[cid]
    return NaturalTransformationSection(presheaf, s.domain, components)


def transformation_to_section(t: NaturalTransformationSection) -> LocalSection:
    p = t.presheaf.poset
    support = {cid for cid in p.ids if t.subfunctor(cid)}
    if set(t.components) != support:
        raise InvalidInput("components must be given exactly on the subfunctor's support")
    bad = t.check_naturality()
    if bad is not None:
        raise InvalidInput(f"naturality fails on {bad[0]} <= {bad[1]}")
    assignment = {cid: t.components[cid] for cid in p.sort_ids(support)}
    return LocalSection(p, Downset(p, support), assignment)


def value_of(s: LocalSection, a: Operator) -> Fraction:
    """Eigenvalue of ``a`` whose spectral projector the section selects."""
    p = s.poset
    try:
        wid = p.resolve(spectral_algebra(a))
    except NotInPoset:
        raise InvalidInput("the operator's spectral algebra is not in the poset") from None
    if wid not in s.domain:
        raise InvalidInput(f"{wid} is not in the section's domain")
    atom = s.assignment[wid].atom
    for value, proj in a.spectrum:
        if proj == atom:
            return value
    raise AssertionError("selected atom is not a spectral projector")
