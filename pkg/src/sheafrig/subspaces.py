"""Linear subspaces of Q^n, their annihilators and projection operators."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

import flint

from . import linalg
from .errors import PreconditionError
from .linalg import Matrix

SAMPLE_BOX = 10**6


def make_rng(seed) -> random.Random:
    if isinstance(seed, random.Random):
        return seed
    return random.Random(seed)


@dataclass(frozen=True, eq=False)
class Subspace:
    """A subspace stored by its reduced row echelon basis (s x n)."""

    ambient_dim: int
    basis: Matrix

    def __post_init__(self):
        if self.basis.ncols() != self.ambient_dim:
            raise ValueError("basis width does not match ambient dimension")

    @classmethod
    def span(cls, vectors, ambient_dim: int | None = None) -> "Subspace":
        m = vectors if isinstance(vectors, flint.fmpq_mat) else linalg.matrix(vectors, ambient_dim)
        canon, _ = linalg.rref(m)
        return cls(m.ncols(), canon)

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, linalg.zeros(0, n))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, linalg.identity(n))

    @property
    def dim(self) -> int:
        return self.basis.nrows()

    @property
    def codim(self) -> int:
        return self.ambient_dim - self.dim

    def __eq__(self, other):
        if not isinstance(other, Subspace):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.basis == other.basis

    def __hash__(self):
        return hash(linalg.matrix_key(self.basis))

    def __repr__(self):
        return f"Subspace(n={self.ambient_dim}, basis={linalg.to_strings(self.basis)})"

    def __add__(self, other: "Subspace") -> "Subspace":
        return subspace_sum(self, other)

    def __and__(self, other: "Subspace") -> "Subspace":
        return intersect([self, other])

    def __le__(self, other: "Subspace") -> bool:
        return contains(other, self)

    def contains_vector(self, v) -> bool:
        v = v if isinstance(v, flint.fmpq_mat) else linalg.matrix([list(v)])
        return linalg.rank(linalg.vstack([self.basis, v], self.ambient_dim)) == self.dim

    def quotient_matrix(self) -> Matrix:
        """(n - s) x n matrix whose rows are the echelon annihilator basis.

        Multiplying a vector by it gives coordinates in V / S.
        """
        return linalg.nullspace(self.basis)

    def to_json(self) -> list[list[str]]:
        return linalg.to_strings(self.basis)


@dataclass(frozen=True, eq=False)
class LinearForm:
    """A row vector acting on Q^n."""

    coefficients: Matrix  # 1 x n

    @classmethod
    def of(cls, values: Sequence) -> "LinearForm":
        return cls(linalg.matrix([list(values)]))

    @property
    def ambient_dim(self) -> int:
        return self.coefficients.ncols()

    def __call__(self, v) -> flint.fmpq:
        m = v if isinstance(v, flint.fmpq_mat) else linalg.matrix([[x] for x in v])
        return (self.coefficients * m)[0, 0]

    def kernel(self) -> Subspace:
        return Subspace(self.ambient_dim, linalg.nullspace(self.coefficients))

    def annihilates(self, s: Subspace) -> bool:
        if s.dim == 0:
            return True
        return linalg.is_zero(self.coefficients * s.basis.transpose())

    def is_zero(self) -> bool:
        return linalg.is_zero(self.coefficients)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        return hash(linalg.matrix_key(self.coefficients))

    def __repr__(self):
        return f"LinearForm({linalg.to_strings(self.coefficients)[0]})"

    def to_json(self) -> list[str]:
        return linalg.to_strings(self.coefficients)[0]


@dataclass(frozen=True, eq=False)
class ProjectionOperator:
    matrix: Matrix

    @property
    def ambient_dim(self) -> int:
        return self.matrix.nrows()

    def __eq__(self, other):
        if not isinstance(other, ProjectionOperator):
            return NotImplemented
        return self.matrix == other.matrix

    def __hash__(self):
        return hash(linalg.matrix_key(self.matrix))


def _check_dims(subspaces: Sequence[Subspace]) -> int:
    dims = {s.ambient_dim for s in subspaces}
    if len(dims) > 1:
        raise PreconditionError(f"mismatched ambient dimensions {sorted(dims)}")
    return dims.pop()


def intersect(subspaces: Iterable[Subspace], ambient_dim: int | None = None) -> Subspace:
    """Intersection as the kernel of all stacked annihilator rows.

    The empty intersection is the whole space, so ``ambient_dim`` must be
    supplied in that case.
    """
    subspaces = list(subspaces)
    if not subspaces:
        if ambient_dim is None:
            raise PreconditionError("ambient_dim is required to intersect no subspaces")
        return Subspace.full(ambient_dim)
    n = _check_dims(subspaces)
    if ambient_dim is not None and ambient_dim != n:
        raise PreconditionError("ambient_dim disagrees with the subspaces")
    if len(subspaces) == 1:
        return subspaces[0]
    constraints = linalg.vstack([s.quotient_matrix() for s in subspaces], n)
    return Subspace(n, linalg.nullspace(constraints))


def subspace_sum(*subspaces: Subspace) -> Subspace:
    if not subspaces:
        raise PreconditionError("subspace_sum needs at least one subspace")
    n = _check_dims(subspaces)
    return Subspace.span(linalg.vstack([s.basis for s in subspaces], n))


def contains(big: Subspace, small: Subspace) -> bool:
    """True when ``small`` is a subspace of ``big``."""
    _check_dims([big, small])
    if small.dim == 0:
        return True
    return linalg.is_zero(big.quotient_matrix() * small.basis.transpose())


def annihilator_basis(s: Subspace) -> list[LinearForm]:
    q = s.quotient_matrix()
    return [LinearForm(linalg.row(q, i)) for i in range(q.nrows())]


def forms_kernel(forms: Sequence[LinearForm], ambient_dim: int) -> Subspace:
    if not forms:
        return Subspace.full(ambient_dim)
    return Subspace(ambient_dim, linalg.nullspace(linalg.vstack([f.coefficients for f in forms], ambient_dim)))


def forms_independent(forms: Sequence[LinearForm]) -> bool:
    if not forms:
        return True
    n = forms[0].ambient_dim
    return linalg.rank(linalg.vstack([f.coefficients for f in forms], n)) == len(forms)


def projection_of(s: Subspace) -> ProjectionOperator:
    """Orthogonal projection onto ``s`` for the standard inner product."""
    n = s.ambient_dim
    if s.dim == 0:
        return ProjectionOperator(linalg.zeros(n, n))
    b = s.basis
    p = b.transpose() * (b * b.transpose()).inv() * b
    return ProjectionOperator(p)


def complement_projection(s: Subspace) -> Matrix:
    """Orthogonal projection whose kernel is ``s``."""
    return linalg.identity(s.ambient_dim) - projection_of(s).matrix


def subspace_of(p: ProjectionOperator) -> Subspace:
    m = p.matrix
    if m.nrows() != m.ncols():
        raise PreconditionError("projection matrix must be square")
    if m != m.transpose():
        raise PreconditionError("projection matrix is not symmetric")
    if m * m != m:
        raise PreconditionError("projection matrix is not idempotent")
    s = Subspace.span(m)
    if linalg.trace(m) != s.dim:
        raise PreconditionError("projection trace does not equal its rank")
    return s


def random_matrix(rows: int, cols: int, rng: random.Random, box: int = SAMPLE_BOX) -> Matrix:
    return flint.fmpq_mat(rows, cols, [rng.randint(-box, box) for _ in range(rows * cols)])


def sample_subspace(s: int, n: int, rng_seed=None) -> Subspace:
    """Random s-dimensional subspace with integer basis entries in [-1e6, 1e6]."""
    if not 0 <= s <= n:
        raise PreconditionError(f"need 0 <= s <= n, got s={s}, n={n}")
    rng = make_rng(rng_seed)
    if s == 0:
        return Subspace.zero(n)
    while True:
        b = random_matrix(s, n, rng)
        if linalg.rank(b) == s:
            return Subspace.span(b)


def sample_subspace_within(s: int, host: Subspace, rng_seed=None) -> Subspace:
    """Random s-dimensional subspace of ``host`` (random combinations of its basis)."""
    if not 0 <= s <= host.dim:
        raise PreconditionError(f"cannot fit dimension {s} inside dimension {host.dim}")
    rng = make_rng(rng_seed)
    if s == 0:
        return Subspace.zero(host.ambient_dim)
    while True:
        c = random_matrix(s, host.dim, rng)
        if linalg.rank(c) == s:
            return Subspace.span(c * host.basis)


def sample_form_annihilating(s: Subspace, rng_seed=None) -> LinearForm:
    """Random nonzero form vanishing on ``s`` (requires s != whole space)."""
    rng = make_rng(rng_seed)
    q = s.quotient_matrix()
    if q.nrows() == 0:
        raise PreconditionError("the whole space has no nonzero annihilating form")
    while True:
        c = random_matrix(1, q.nrows(), rng)
        if not linalg.is_zero(c):
            return LinearForm(c * q)


def rank(m) -> int:
    return linalg.rank(m)
