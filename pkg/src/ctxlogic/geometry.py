"""Exact vectors, projector matrices and spectrally-given operators.

Matrices are tuples of row tuples of :class:`GaussianRational`. A closed
subspace is identified with its orthogonal projector, and since that
matrix is unique per subspace it doubles as the canonical form: two
subspaces are equal iff their projectors compare equal.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable, Mapping, Sequence

from .errors import DimensionMismatch, InvalidInput
from .gaussian import GaussianRational, ONE, ZERO

__all__ = [
    "Ray",
    "Projector",
    "Operator",
    "projector_from_ray",
    "are_orthogonal",
    "sum_is_identity",
    "apply_function",
    "mat_mul",
    "mat_add",
    "identity_matrix",
    "zero_matrix",
    "conj_transpose",
]

Matrix = tuple  # tuple[tuple[GaussianRational, ...], ...]


def identity_matrix(dim: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(dim)) for i in range(dim))


def zero_matrix(dim: int) -> Matrix:
    return tuple((ZERO,) * dim for _ in range(dim))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = tuple(zip(*b))
    out = []
    for row in a:
        new_row = []
        for col in cols:
            acc = ZERO
            for x, y in zip(row, col):
                if x and y:
                    acc = acc + x * y
            new_row.append(acc)
        out.append(tuple(new_row))
    return tuple(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x - y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def conj_transpose(a: Matrix) -> Matrix:
    return tuple(tuple(x.conjugate() for x in col) for col in zip(*a))


def is_zero_matrix(a: Matrix) -> bool:
    return not any(x for row in a for x in row)


def as_matrix(rows: Iterable[Iterable]) -> Matrix:
    """Coerce nested sequences of literals/numbers into an exact square matrix."""
    m = tuple(tuple(GaussianRational.coerce(x) for x in row) for row in rows)
    n = len(m)
    if n == 0 or any(len(row) != n for row in m):
        raise InvalidInput("matrix must be square and nonempty")
    return m


class Ray:
    """A nonzero vector, standing for the one-dimensional subspace it spans."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable):
        entries = tuple(GaussianRational.coerce(x) for x in entries)
        if not entries:
            raise InvalidInput("a ray needs at least one coordinate")
        if not any(entries):
            raise InvalidInput("zero vector does not span a ray")
        self.entries = entries

    @property
    def dim(self) -> int:
        return len(self.entries)

    def inner(self, other: "Ray") -> GaussianRational:
        """<self|other>, conjugate-linear in the first argument."""
        if self.dim != other.dim:
            raise DimensionMismatch(f"rays of dims {self.dim} and {other.dim}")
        acc = ZERO
        for x, y in zip(self.entries, other.entries):
            acc = acc + x.conjugate() * y
        return acc

    def scaled(self, c) -> "Ray":
        c = GaussianRational.coerce(c)
        return Ray(c * x for x in self.entries)

    def equivalent(self, other: "Ray") -> bool:
        """Same subspace, i.e. one ray is a nonzero multiple of the other."""
        return projector_from_ray(self) == projector_from_ray(other)

    def __eq__(self, other):
        return isinstance(other, Ray) and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        return "Ray(" + ", ".join(str(x) for x in self.entries) + ")"


class Projector:
    """Self-adjoint idempotent matrix; equality is matrix equality.

    ``Projector(m)`` validates both defining identities. Internal code that
    already knows the result is a projector (e.g. sums of orthogonal atoms)
    passes ``check=False`` to skip the matrix product.
    """

    __slots__ = ("matrix", "_hash", "_key", "_trace")

    def __init__(self, matrix, *, check: bool = True):
        m = matrix if not check else as_matrix(matrix)
        if check:
            if conj_transpose(m) != m:
                raise InvalidInput("matrix is not self-adjoint")
            if mat_mul(m, m) != m:
                raise InvalidInput("matrix is not idempotent")
        self.matrix = m
        self._hash = hash(m)
        self._key = None
        self._trace = None

    @property
    def dim(self) -> int:
        return len(self.matrix)

    @property
    def rank(self) -> int:
        # trace of a projector is its rank
        if self._trace is None:
            t = sum((self.matrix[i][i].re for i in range(self.dim)), Fraction(0))
            self._trace = int(t)
        return self._trace

    def is_zero(self) -> bool:
        return is_zero_matrix(self.matrix)

    def sort_key(self) -> tuple:
        """Fixed total encoding used to order atoms deterministically."""
        if self._key is None:
            self._key = tuple(x.sort_key() for row in self.matrix for x in row)
        return self._key

    def __add__(self, other: "Projector") -> "Projector":
        # only meaningful for orthogonal summands; caller's responsibility
        return Projector(mat_add(self.matrix, other.matrix), check=False)

    def complement(self) -> "Projector":
        return Projector(mat_sub(identity_matrix(self.dim), self.matrix), check=False)

    def __mul__(self, other: "Projector") -> Matrix:
        return mat_mul(self.matrix, other.matrix)

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Projector) and self._hash == other._hash and self.matrix == other.matrix

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self.sort_key() < other.sort_key()

    def to_json(self) -> list:
        return [[str(x) for x in row] for row in self.matrix]

    def __repr__(self):
        rows = "; ".join(" ".join(str(x) for x in row) for row in self.matrix)
        return f"Projector([{rows}])"

    @classmethod
    def identity(cls, dim: int) -> "Projector":
        return cls(identity_matrix(dim), check=False)

    @classmethod
    def zero(cls, dim: int) -> "Projector":
        return cls(zero_matrix(dim), check=False)


def projector_from_ray(v: Ray) -> Projector:
    """Rank-one projector v v* / (v* v)."""
    if not isinstance(v, Ray):
        v = Ray(v)
    n = v.inner(v).re
    m = tuple(
        tuple(GaussianRational._raw((x * y.conjugate()).re / n, (x * y.conjugate()).im / n) for y in v.entries)
        for x in v.entries
    )
    return Projector(m, check=False)


def _check_dims(ps: Sequence[Projector]) -> int:
    dims = {p.dim for p in ps}
    if len(dims) > 1:
        raise DimensionMismatch(f"projectors of differing dims {sorted(dims)}")
    return dims.pop() if dims else 0


def are_orthogonal(p: Projector, q: Projector) -> bool:
    _check_dims([p, q])
    return is_zero_matrix(p * q)


def sum_is_identity(ps: Sequence[Projector]) -> bool:
    ps = list(ps)
    if not ps:
        return False
    dim = _check_dims(ps)
    total = zero_matrix(dim)
    for p in ps:
        total = mat_add(total, p.matrix)
    return total == identity_matrix(dim)


class Operator:
    """Self-adjoint operator given by its spectral data, sum_i a_i P_i.

    Eigenvalues are real rationals; the projectors must be pairwise
    orthogonal, nonzero and sum to the identity.
    """

    __slots__ = ("spectrum",)

    def __init__(self, spectrum: Iterable[tuple]):
        pairs = []
        for value, proj in spectrum:
            value = Fraction(value)
            if not isinstance(proj, Projector):
                proj = Projector(proj)
            pairs.append((value, proj))
        if not pairs:
            raise InvalidInput("operator needs a nonempty spectrum")
        values = [a for a, _ in pairs]
        if len(set(values)) != len(values):
            raise InvalidInput("eigenvalues must be pairwise distinct")
        projs = [p for _, p in pairs]
        _check_dims(projs)
        for idx, p in enumerate(projs):
            if p.is_zero():
                raise InvalidInput(f"spectral projector for eigenvalue {values[idx]} is zero")
            for q in projs[idx + 1:]:
                if not are_orthogonal(p, q):
                    raise InvalidInput("spectral projectors are not pairwise orthogonal")
        if not sum_is_identity(projs):
            raise InvalidInput("spectral projectors do not sum to the identity")
        pairs.sort(key=lambda t: t[0])
        self.spectrum = tuple(pairs)

    @property
    def dim(self) -> int:
        return self.spectrum[0][1].dim

    @property
    def eigenvalues(self) -> tuple:
        return tuple(a for a, _ in self.spectrum)

    @property
    def projectors(self) -> tuple:
        return tuple(p for _, p in self.spectrum)

    def projector_for(self, value) -> Projector:
        value = Fraction(value)
        for a, p in self.spectrum:
            if a == value:
                return p
        raise KeyError(value)

    def matrix(self) -> Matrix:
        total = zero_matrix(self.dim)
        for a, p in self.spectrum:
            total = mat_add(total, tuple(tuple(a * x for x in row) for row in p.matrix))
        return total

    def __eq__(self, other):
        return isinstance(other, Operator) and self.spectrum == other.spectrum

    def __hash__(self):
        return hash(self.spectrum)

    def __repr__(self):
        return "Operator(" + ", ".join(f"{a}: {p!r}" for a, p in self.spectrum) + ")"


def apply_function(a: Operator, f: Callable | Mapping) -> Operator:
    """f(A) = sum_i f(a_i) P_i, merging projectors whose eigenvalues collide."""
    fn = f.__getitem__ if isinstance(f, Mapping) else f
    groups: dict[Fraction, Projector] = {}
    for value, proj in a.spectrum:
        image = Fraction(fn(value))
        groups[image] = groups[image] + proj if image in groups else proj
    return Operator(groups.items())
