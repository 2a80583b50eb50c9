"""Finite Boolean subalgebras of a projector lattice and the posets they form.

A :class:`Context` is a Boolean algebra of projectors presented by its
atoms, an orthogonal decomposition of the identity. Its elements are the
sums of atom subsets, addressed by bitmasks over atom indices (bit ``i``
set means atom ``i`` is a summand). Subalgebras of a context are exactly
its coarsenings, one per set partition of the atoms.

A :class:`ContextPoset` is a finite family of contexts, closed under
coarsening, ordered by subalgebra inclusion. Its open sets (Alexandrov
topology) are the down-closed subsets, represented by :class:`Downset`.
"""

from __future__ import annotations

from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

from .errors import DimensionMismatch, InvalidDecomposition, InvalidInput, NotInPoset
from .geometry import Operator, Projector, are_orthogonal, mat_mul, sum_is_identity

__all__ = [
    "Context",
    "ContextPoset",
    "Downset",
    "context_from_decomposition",
    "spectral_algebra",
    "leq",
    "set_partitions",
    "coarsenings",
    "intersect",
    "build_poset",
    "principal_downset",
    "is_downset",
    "all_downsets",
    "to_dot",
]


def _canonical_atoms(atoms: Iterable[Projector]) -> tuple:
    return tuple(sorted(atoms, key=Projector.sort_key, reverse=True))


class Context:
    """A finite Boolean subalgebra, given by its atoms in canonical order.

    Equality and hashing depend only on the atom set; ``id`` is a label.
    """

    def __init__(self, atoms: Iterable[Projector], id: str | None = None):
        self.atoms = _canonical_atoms(atoms)
        self.id = id

    @property
    def dim(self) -> int:
        return self.atoms[0].dim

    @property
    def size(self) -> int:
        return len(self.atoms)

    @property
    def full_mask(self) -> int:
        return (1 << len(self.atoms)) - 1

    @cached_property
    def elements(self) -> tuple:
        """All 2^k elements, indexed by bitmask."""
        elems = [Projector.zero(self.dim)]
        for mask in range(1, 1 << len(self.atoms)):
            low = mask & -mask
            rest = mask ^ low
            atom = self.atoms[low.bit_length() - 1]
            elems.append(atom if not rest else elems[rest] + atom)
        return tuple(elems)

    @cached_property
    def element_masks(self) -> dict:
        return {p: mask for mask, p in enumerate(self.elements)}

    def mask_of(self, p: Projector) -> int | None:
        """Bitmask of ``p`` as a sum of this context's atoms, or None."""
        return self.element_masks.get(p)

    def element(self, mask: int) -> Projector:
        return self.elements[mask]

    def is_trivial(self) -> bool:
        return len(self.atoms) == 1

    def with_id(self, id: str | None) -> "Context":
        c = Context.__new__(Context)
        c.atoms = self.atoms
        c.id = id
        for cached in ("elements", "element_masks"):
            if cached in self.__dict__:
                c.__dict__[cached] = self.__dict__[cached]
        return c

    def sort_key(self) -> tuple:
        return (len(self.atoms), tuple(_neg_key(a) for a in self.atoms))

    def __eq__(self, other):
        return isinstance(other, Context) and self.atoms == other.atoms

    def __hash__(self):
        return hash(self.atoms)

    def __repr__(self):
        label = self.id if self.id is not None else "?"
        return f"Context({label!r}, {len(self.atoms)} atoms)"


def _neg_key(p: Projector):
    # negate each rational component so ascending order on the negation
    # matches the descending atom order used inside contexts
    return tuple((-re, -im) for re, im in p.sort_key())


def context_from_decomposition(ps: Sequence[Projector], id: str | None = None) -> Context:
    """Validate an orthogonal decomposition of the identity and wrap it."""
    ps = [p if isinstance(p, Projector) else Projector(p) for p in ps]
    if not ps:
        raise InvalidDecomposition("a decomposition needs at least one projector")
    dims = {p.dim for p in ps}
    if len(dims) != 1:
        raise DimensionMismatch(f"projectors of differing dims {sorted(dims)}")
    for i, p in enumerate(ps):
        if p.is_zero():
            raise InvalidDecomposition(f"projector #{i} is zero")
    for (i, p), (j, q) in combinations(enumerate(ps), 2):
        if not are_orthogonal(p, q):
            raise InvalidDecomposition(f"projectors #{i} and #{j} are not orthogonal")
    if not sum_is_identity(ps):
        raise InvalidDecomposition(f"the {len(ps)} projectors do not sum to the identity")
    return Context(ps, id)


def spectral_algebra(a: Operator, id: str | None = None) -> Context:
    return Context(a.projectors, id)


def _check_same_dim(w1: Context, w2: Context):
    if w1.dim != w2.dim:
        raise DimensionMismatch(f"contexts of dims {w1.dim} and {w2.dim}")


def leq(w1: Context, w2: Context) -> bool:
    """True iff w1 is a subalgebra (coarsening) of w2."""
    _check_same_dim(w1, w2)
    if len(w1.atoms) > len(w2.atoms):
        return False
    masks = w2.element_masks
    return all(a in masks for a in w1.atoms)


def set_partitions(n: int) -> Iterator[list]:
    """All partitions of range(n) as lists of blocks (restricted growth strings)."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, nblocks: int):
        if i == n:
            blocks = [[] for _ in range(nblocks)]
            for idx, b in enumerate(labels):
                blocks[b].append(idx)
            yield blocks
            return
        for b in range(nblocks + 1):
            labels[i] = b
            yield from rec(i + 1, max(nblocks, b + 1))

    labels[0] = 0
    yield from rec(1, 1)


def coarsen(w: Context, blocks: Sequence[Sequence[int]]) -> Context:
    masks = [sum(1 << i for i in block) for block in blocks]
    return Context([w.element(m) for m in masks])


def coarsenings(w: Context) -> list:
    """Every subalgebra of ``w``; there are Bell(#atoms) of them."""
    return [coarsen(w, blocks) for blocks in set_partitions(len(w.atoms))]


def intersect(w1: Context, w2: Context) -> Context:
    """Largest common subalgebra: the context whose elements are shared by both."""
    _check_same_dim(w1, w2)
    other = w2.element_masks
    common = [mask for mask, p in enumerate(w1.elements) if mask and p in other]
    atoms = [m for m in common if not any(n != m and n & m == n for n in common)]
    return Context([w1.element(m) for m in atoms])


def _commute(w1: Context, w2: Context) -> bool:
    return all(mat_mul(p.matrix, q.matrix) == mat_mul(q.matrix, p.matrix) for p in w1.atoms for q in w2.atoms)


def join_if_compatible(w1: Context, w2: Context) -> Context | None:
    """Common refinement of two contexts whose atoms commute, else None."""
    _check_same_dim(w1, w2)
    if not _commute(w1, w2):
        return None
    atoms = []
    for p in w1.atoms:
        for q in w2.atoms:
            pq = Projector(mat_mul(p.matrix, q.matrix), check=False)
            if not pq.is_zero():
                atoms.append(pq)
    return Context(atoms)


class ContextPoset:
    """Coarsening-closed family of contexts under subalgebra inclusion.

    Built by :func:`build_poset`; immutable afterwards. Members are kept in
    a canonical order (by atom count, then atom encoding), which is a
    linear extension of the order and fixes generated ids.
    """

    def __init__(self, contexts: Sequence[Context], input_ids: Sequence[str]):
        self.contexts = tuple(contexts)
        self.ids = tuple(c.id for c in self.contexts)
        self.input_ids = tuple(input_ids)
        self._by_id = {c.id: c for c in self.contexts}
        self._by_ctx = {c: c.id for c in self.contexts}
        self._index = {cid: i for i, cid in enumerate(self.ids)}
        if len(self._by_id) != len(self.contexts):
            raise InvalidInput("duplicate context ids in poset")
        below = {cid: {cid} for cid in self.ids}
        for i, lo in enumerate(self.contexts):
            for hi in self.contexts[i + 1:]:
                if leq(lo, hi):
                    below[hi.id].add(lo.id)
        self._below = {cid: frozenset(s) for cid, s in below.items()}
        above = {cid: set() for cid in self.ids}
        for hi, lows in self._below.items():
            for lo in lows:
                above[lo].add(hi)
        self._above = {cid: frozenset(s) for cid, s in above.items()}
        tops = [cid for cid in self.ids if len(self._above[cid]) == 1]
        first = [cid for cid in self.input_ids if cid in tops]
        self.maximal_ids = tuple(first + [cid for cid in tops if cid not in first])
        self.bottom_id = self.ids[0]

    @property
    def dim(self) -> int:
        return self.contexts[0].dim

    def __len__(self):
        return len(self.contexts)

    def __iter__(self):
        return iter(self.contexts)

    def __contains__(self, item):
        if isinstance(item, Context):
            return item in self._by_ctx
        return item in self._by_id

    def resolve(self, w) -> str:
        """Id of a member given either its id or an equal Context."""
        if isinstance(w, Context):
            try:
                return self._by_ctx[w]
            except KeyError:
                raise NotInPoset(f"context {w!r} is not a member of the poset") from None
        if w in self._by_id:
            return w
        raise NotInPoset(f"unknown context id {w!r}")

    def context(self, w) -> Context:
        return self._by_id[self.resolve(w)]

    def index(self, w) -> int:
        return self._index[self.resolve(w)]

    def sort_ids(self, ids: Iterable[str]) -> list:
        return sorted(ids, key=self._index.__getitem__)

    def leq(self, a, b) -> bool:
        return self.resolve(a) in self._below[self.resolve(b)]

    def below(self, w) -> frozenset:
        return self._below[self.resolve(w)]

    def above(self, w) -> frozenset:
        return self._above[self.resolve(w)]

    def meet(self, a, b) -> str:
        return self.resolve(intersect(self.context(a), self.context(b)))

    def covers(self) -> list:
        """Covering pairs (lower, upper) in canonical order."""
        out = []
        for hi in self.ids:
            strict = self._below[hi] - {hi}
            for lo in self.sort_ids(strict):
                if not any(lo in self._below[mid] for mid in strict if mid != lo):
                    out.append((lo, hi))
        return out

    def downset(self, ids: Iterable[str]) -> "Downset":
        return Downset(self, ids)

    def down_closure(self, ids: Iterable[str]) -> "Downset":
        members = set()
        for cid in ids:
            members |= self.below(cid)
        return Downset(self, members, check=False)

    def full(self) -> "Downset":
        return Downset(self, self.ids, check=False)

    def empty(self) -> "Downset":
        return Downset(self, (), check=False)

    def verify(self) -> list:
        """Re-check the poset invariants from scratch; returns problems found."""
        problems = []
        for a in self.ids:
            if a not in self._below[a]:
                problems.append(f"not reflexive at {a}")
            for b in self.ids:
                ab = a in self._below[b]
                if ab != leq(self._by_id[a], self._by_id[b]):
                    problems.append(f"order disagrees with inclusion at ({a}, {b})")
                if a != b and ab and b in self._below[a]:
                    problems.append(f"not antisymmetric at ({a}, {b})")
                if ab:
                    for c in self._above[b]:
                        if a not in self._below[c]:
                            problems.append(f"not transitive at ({a}, {b}, {c})")
        for c in self.contexts:
            for sub in coarsenings(c):
                if sub not in self._by_ctx:
                    problems.append(f"coarsening of {c.id} missing")
                    break
        return problems

    def __repr__(self):
        return f"ContextPoset({len(self)} contexts, dim {self.dim})"


class Downset:
    """A down-closed set of context ids of one poset (an open set)."""

    __slots__ = ("poset", "members")

    def __init__(self, poset: ContextPoset, members: Iterable[str], *, check: bool = True):
        members = frozenset(members)
        if check:
            for cid in members:
                if cid not in poset._by_id:
                    raise NotInPoset(f"unknown context id {cid!r}")
                missing = poset._below[cid] - members
                if missing:
                    raise InvalidInput(f"not down-closed: {cid} is a member but {sorted(missing)[0]} is not")
        self.poset = poset
        self.members = members

    def __contains__(self, cid):
        return cid in self.members

    def __iter__(self):
        return iter(self.poset.sort_ids(self.members))

    def __len__(self):
        return len(self.members)

    def __le__(self, other: "Downset"):
        return self.members <= other.members

    def __lt__(self, other: "Downset"):
        return self.members < other.members

    def __eq__(self, other):
        return isinstance(other, Downset) and self.poset is other.poset and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def ids(self) -> list:
        return self.poset.sort_ids(self.members)

    def __repr__(self):
        return "Downset{" + ", ".join(self.ids()) + "}"


def build_poset(inputs: Sequence[Context], *, join_compatible: bool = False) -> ContextPoset:
    """Coarsening closure of ``inputs``, deduplicated, ordered by inclusion.

    With ``join_compatible`` the common refinement of every pair of
    commuting generators is added (iterated to a fixpoint) before closing
    under coarsening.
    """
    inputs = list(inputs)
    if not inputs:
        raise InvalidInput("build_poset needs at least one context")
    dims = {c.dim for c in inputs}
    if len(dims) != 1:
        raise DimensionMismatch(f"contexts of mixed dims {sorted(dims)}")

    named: dict = {}
    generators: list = []
    for c in inputs:
        if c not in named:
            named[c] = c.id
            generators.append(c)
        elif named[c] is None:
            named[c] = c.id

    if join_compatible:
        frontier = list(generators)
        while frontier:
            new = []
            for a in frontier:
                for b in list(generators):
                    j = join_if_compatible(a, b)
                    if j is not None and j not in named and j not in new:
                        new.append(j)
            for j in new:
                named[j] = None
                generators.append(j)
            frontier = new

    closure: dict = {}
    for g in generators:
        for sub in coarsenings(g):
            closure.setdefault(sub, sub)

    ordered = sorted(closure, key=Context.sort_key)
    taken = {cid for cid in named.values() if cid is not None}
    counter = 0
    members = []
    for c in ordered:
        cid = named.get(c)
        if cid is None:
            while f"W#{counter}" in taken:
                counter += 1
            cid = f"W#{counter}"
            counter += 1
        members.append(c.with_id(cid))
    input_ids = []
    for c in inputs:
        cid = next(m.id for m in members if m == c)
        if cid not in input_ids:
            input_ids.append(cid)
    return ContextPoset(members, input_ids)


def principal_downset(p: ContextPoset, w) -> Downset:
    """(w]: every member below ``w``."""
    return Downset(p, p.below(w), check=False)


def is_downset(p: ContextPoset, s: Iterable[str]) -> bool:
    s = set(s)
    for cid in s:
        if cid not in p:
            raise NotInPoset(f"unknown context id {cid!r}")
    return all(p.below(cid) <= s for cid in s)


def all_downsets(p: ContextPoset) -> Iterator[Downset]:
    """Enumerate every downset, deciding members along the canonical linear extension."""
    ids = p.ids
    strict_below = [p.below(cid) - {cid} for cid in ids]
    chosen: set = set()

    def rec(i: int):
        if i == len(ids):
            yield Downset(p, chosen, check=False)
            return
        yield from rec(i + 1)
        if strict_below[i] <= chosen:
            chosen.add(ids[i])
            yield from rec(i + 1)
            chosen.discard(ids[i])

    yield from rec(0)


def to_dot(p: ContextPoset) -> str:
    """Graphviz digraph: one node per context, one edge per covering pair."""
    lines = ["digraph contexts {", "  rankdir=BT;"]
    for c in p.contexts:
        plural = "atom" if c.size == 1 else "atoms"
        lines.append(f'  "{c.id}" [label="{c.id}\\n{c.size} {plural}"];')
    for lo, hi in p.covers():
        lines.append(f'  "{lo}" -> "{hi}";')
    lines.append("}")
    return "\n".join(lines) + "\n"
