"""Exact-shape complex block linear algebra.

Everything else in the package computes on the objects defined here: finite
direct sums of full complex matrix algebras, their elements, finite Hilbert
spaces with labelled bases, block-placement representations, antiunitary real
structures and Z/2 gradings.  All matrices are dense complex double precision;
Hermitian inputs are routed to Hermitian eigensolvers so spectra are
deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_TOL",
    "AlgebraElement",
    "BlockAlgebra",
    "Grading",
    "HilbertSpace",
    "Placement",
    "RealStructure",
    "Representation",
    "commutator",
    "dagger",
    "mats_close",
    "op_norm",
    "opposite_action",
    "random_complex",
    "random_hermitian",
    "random_unitary",
    "swap_matrix",
]

# Default relative tolerance for matrix equality.  Structural checks (shapes,
# labels, block counts) are always strict.
DEFAULT_TOL = 1e-10


# ---------------------------------------------------------------------------
# free functions on plain matrices
# ---------------------------------------------------------------------------

def op_norm(m) -> float:
    """Operator (spectral) norm: the largest singular value of ``m``."""
    m = np.asarray(m, dtype=complex)
    if m.size == 0:
        return 0.0
    if m.ndim != 2:
        raise ValueError(f"expected a matrix, got ndim={m.ndim}")
    return float(np.linalg.svd(m, compute_uv=False)[0])


def commutator(x, y):
    """Return ``xy - yx``.  Raises on shape mismatch."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    if x.shape != y.shape or x.ndim != 2 or x.shape[0] != x.shape[1]:
        raise ValueError(f"commutator needs equal square shapes, got {x.shape} and {y.shape}")
    return x @ y - y @ x


def dagger(m):
    """Conjugate transpose."""
    return np.asarray(m, dtype=complex).conj().T


def mats_close(a, b, tol: float = DEFAULT_TOL) -> bool:
    """Relative Frobenius comparison, with an absolute floor of ``tol``."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    scale = max(1.0, float(np.linalg.norm(a)), float(np.linalg.norm(b)))
    return float(np.linalg.norm(a - b)) <= tol * scale


def random_complex(rng: np.random.Generator, rows: int, cols: int):
    """Standard complex Gaussian matrix (unit expected square norm per entry)."""
    return (rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))) / np.sqrt(2.0)


def random_hermitian(rng: np.random.Generator, n: int):
    a = random_complex(rng, n, n)
    return (a + a.conj().T) / 2.0


def random_unitary(rng: np.random.Generator, n: int):
    """Haar-ish unitary from a QR decomposition with phase-fixed diagonal."""
    q, r = np.linalg.qr(random_complex(rng, n, n))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def swap_matrix(m: int, n: int):
    """Permutation matrix sending ``u (x) v`` in C^m (x) C^n to ``v (x) u``."""
    s = np.zeros((m * n, m * n))
    for i in range(m):
        for j in range(n):
            s[j * m + i, i * n + j] = 1.0
    return s


# ---------------------------------------------------------------------------
# block algebras and their elements
# ---------------------------------------------------------------------------

class BlockAlgebra:
    """A finite direct sum of full complex matrix algebras M_{n_1} (+) ... (+) M_{n_k}.

    Parameters
    ----------
    summands : sequence of int
        The matrix sizes ``n_i`` of each summand, every one >= 1.
    labels : sequence of str, optional
        Sector names, one per summand.
    """

    def __init__(self, summands: Sequence[int], labels: Sequence[str] | None = None):
        summands = tuple(int(n) for n in summands)
        if not summands or any(n < 1 for n in summands):
            raise ValueError(f"summand sizes must be positive, got {summands}")
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(summands):
                raise ValueError("label count must equal summand count")
        self.summands = summands
        self.labels = labels

    @property
    def num_summands(self) -> int:
        return len(self.summands)

    @property
    def dim(self) -> int:
        """Complex vector-space dimension, sum of n_i^2."""
        return int(sum(n * n for n in self.summands))

    def element(self, blocks) -> "AlgebraElement":
        return AlgebraElement(self, blocks)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.zeros((n, n), dtype=complex) for n in self.summands])

    def identity(self) -> "AlgebraElement":
        return AlgebraElement(self, [np.eye(n, dtype=complex) for n in self.summands])

    def random_element(self, rng: np.random.Generator) -> "AlgebraElement":
        return AlgebraElement(self, [random_complex(rng, n, n) for n in self.summands])

    def random_hermitian_element(self, rng: np.random.Generator) -> "AlgebraElement":
        return AlgebraElement(self, [random_hermitian(rng, n) for n in self.summands])

    def hermitian_basis(self) -> list["AlgebraElement"]:
        """Orthonormal real basis of the Hermitian part, summand by summand."""
        basis = []
        for k, n in enumerate(self.summands):
            for i in range(n):
                blocks = [np.zeros((m, m), dtype=complex) for m in self.summands]
                blocks[k][i, i] = 1.0
                basis.append(AlgebraElement(self, blocks))
            for i in range(n):
                for j in range(i + 1, n):
                    blocks = [np.zeros((m, m), dtype=complex) for m in self.summands]
                    blocks[k][i, j] = blocks[k][j, i] = 1.0 / np.sqrt(2.0)
                    basis.append(AlgebraElement(self, blocks))
                    blocks = [np.zeros((m, m), dtype=complex) for m in self.summands]
                    blocks[k][i, j] = -1j / np.sqrt(2.0)
                    blocks[k][j, i] = 1j / np.sqrt(2.0)
                    basis.append(AlgebraElement(self, blocks))
        return basis

    def __eq__(self, other):
        return isinstance(other, BlockAlgebra) and self.summands == other.summands

    def __repr__(self):
        body = " (+) ".join(f"M{n}" if n > 1 else "C" for n in self.summands)
        return f"BlockAlgebra({body})"


class AlgebraElement:
    """An element of a :class:`BlockAlgebra`: one complex matrix per summand."""

    def __init__(self, parent: BlockAlgebra, blocks):
        blocks = tuple(np.array(b, dtype=complex) for b in blocks)
        if len(blocks) != parent.num_summands:
            raise ValueError("wrong number of blocks")
        for b, n in zip(blocks, parent.summands):
            if b.shape != (n, n):
                raise ValueError(f"block shape {b.shape} does not match summand size {n}")
        self.parent = parent
        self.blocks = blocks

    def __add__(self, other):
        self._check(other)
        return AlgebraElement(self.parent, [a + b for a, b in zip(self.blocks, other.blocks)])

    def __sub__(self, other):
        self._check(other)
        return AlgebraElement(self.parent, [a - b for a, b in zip(self.blocks, other.blocks)])

    def __rmul__(self, scalar):
        return AlgebraElement(self.parent, [scalar * b for b in self.blocks])

    def __matmul__(self, other):
        self._check(other)
        return AlgebraElement(self.parent, [a @ b for a, b in zip(self.blocks, other.blocks)])

    def adjoint(self) -> "AlgebraElement":
        return AlgebraElement(self.parent, [b.conj().T for b in self.blocks])

    def norm(self) -> float:
        """C*-norm of the direct sum: max of the summand operator norms."""
        return max(op_norm(b) for b in self.blocks)

    def is_hermitian(self, tol: float = DEFAULT_TOL) -> bool:
        return all(mats_close(b, b.conj().T, tol) for b in self.blocks)

    def _check(self, other):
        if not isinstance(other, AlgebraElement) or other.parent != self.parent:
            raise ValueError("operands belong to different block algebras")

    def __repr__(self):
        return f"AlgebraElement({self.parent!r})"


# ---------------------------------------------------------------------------
# Hilbert spaces, gradings, real structures
# ---------------------------------------------------------------------------

class HilbertSpace:
    """A finite Hilbert space with a labelled orthonormal basis."""

    def __init__(self, dimension: int, basis_labels: Sequence[str] | None = None):
        dimension = int(dimension)
        if dimension < 1:
            raise ValueError("dimension must be positive")
        if basis_labels is None:
            basis_labels = tuple(f"e{i}" for i in range(dimension))
        else:
            basis_labels = tuple(basis_labels)
        if len(basis_labels) != dimension:
            raise ValueError("label count must equal dimension")
        if len(set(basis_labels)) != dimension:
            raise ValueError("basis labels must be unique")
        self.dimension = dimension
        self.basis_labels = basis_labels

    def basis_vector(self, index: int):
        v = np.zeros(self.dimension, dtype=complex)
        v[index] = 1.0
        return v

    def __repr__(self):
        return f"HilbertSpace(dim={self.dimension})"


@dataclass(frozen=True)
class Grading:
    """Diagonal Z/2 grading: a vector of +-1 signs.  chi^2 = 1, chi = chi*."""

    signs: tuple

    def __post_init__(self):
        signs = tuple(int(s) for s in self.signs)
        if any(s not in (1, -1) for s in signs):
            raise ValueError("grading signs must be +-1")
        object.__setattr__(self, "signs", signs)

    @property
    def matrix(self):
        return np.diag(np.array(self.signs, dtype=complex))

    @property
    def dimension(self) -> int:
        return len(self.signs)


class RealStructure:
    """Antiunitary J = U K with U unitary and K entrywise complex conjugation.

    ``sign_j2`` is the sign in J^2 = +-1 and is validated against U conj(U);
    ``sign_dj`` records the sign a compatible Dirac operator must satisfy in
    DJ = +-JD.
    """

    def __init__(self, unitary, sign_j2: int = 1, sign_dj: int = 1, tol: float = DEFAULT_TOL):
        u = np.array(unitary, dtype=complex)
        if u.ndim != 2 or u.shape[0] != u.shape[1]:
            raise ValueError("real structure needs a square unitary part")
        n = u.shape[0]
        if not mats_close(u @ u.conj().T, np.eye(n), tol):
            raise ValueError("unitary part is not unitary")
        if sign_j2 not in (1, -1) or sign_dj not in (1, -1):
            raise ValueError("signs must be +-1")
        if not mats_close(u @ u.conj(), sign_j2 * np.eye(n), tol):
            raise ValueError(f"U conj(U) != {sign_j2:+d} * 1, inconsistent with sign_j2")
        self.unitary = u
        self.sign_j2 = sign_j2
        self.sign_dj = sign_dj

    @property
    def dimension(self) -> int:
        return self.unitary.shape[0]

    def apply(self, v):
        """J v = U conj(v)."""
        return self.unitary @ np.conj(np.asarray(v, dtype=complex))

    def conjugate_operator(self, m):
        """J m J^{-1} = U conj(m) U* for a linear operator ``m``."""
        return self.unitary @ np.conj(np.asarray(m, dtype=complex)) @ self.unitary.conj().T

    def commutes_with(self, d, sign: int | None = None, tol: float = DEFAULT_TOL) -> bool:
        """Whether D J = sign * J D, i.e. D U = sign * U conj(D)."""
        s = self.sign_dj if sign is None else sign
        d = np.asarray(d, dtype=complex)
        return mats_close(d @ self.unitary, s * self.unitary @ np.conj(d), tol)


# ---------------------------------------------------------------------------
# representations by block placement
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Placement:
    """One entry of a block-placement table.

    The summand's matrix ``B`` (size n x n) is placed at ``offset`` on the
    diagonal as ``1_{id_left} (x) B' (x) 1_{id_right}``, where ``B'`` is ``B``
    after optional entrywise conjugation and, for 1x1 summands, an optional
    scalar embedding:

    * ``scalar_embed="conj_diag"``: z -> diag(conj(z), z) in M_2.
    """

    summand: int
    offset: int
    id_left: int = 1
    id_right: int = 1
    conjugate: bool = False
    scalar_embed: str | None = None

    def block_size(self, n: int) -> int:
        core = 2 if self.scalar_embed == "conj_diag" else n
        return self.id_left * core * self.id_right

    def realize(self, b):
        b = np.asarray(b, dtype=complex)
        if self.conjugate:
            b = np.conj(b)
        if self.scalar_embed == "conj_diag":
            if b.shape != (1, 1):
                raise ValueError("conj_diag embedding applies to 1x1 summands only")
            z = complex(b[0, 0])
            b = np.diag([np.conj(z), z])
        elif self.scalar_embed is not None:
            raise ValueError(f"unknown scalar embedding {self.scalar_embed!r}")
        out = b
        if self.id_left > 1:
            out = np.kron(np.eye(self.id_left), out)
        if self.id_right > 1:
            out = np.kron(out, np.eye(self.id_right))
        return out


class Representation:
    """A *-representation of a :class:`BlockAlgebra` given by a placement table.

    The placement form makes the homomorphism property structural (each
    placement is itself multiplicative and adjoint-compatible); the property
    is nevertheless re-verified by sampling in the test-suite.  Placements
    with ``conjugate=True`` or a ``conj_diag`` embedding are conjugate-linear
    in that summand, so ``embed`` is a real-linear *-map in general.
    """

    def __init__(self, algebra: BlockAlgebra, space: HilbertSpace,
                 placements: Sequence[Placement], faithful: bool = False):
        self.algebra = algebra
        self.space = space
        self.placements = tuple(placements)
        self.faithful = faithful
        for p in self.placements:
            if not 0 <= p.summand < algebra.num_summands:
                raise ValueError(f"placement refers to missing summand {p.summand}")
            size = p.block_size(algebra.summands[p.summand])
            if p.offset < 0 or p.offset + size > space.dimension:
                raise ValueError("placement exceeds the Hilbert space")

    @property
    def dimension(self) -> int:
        return self.space.dimension

    def embed(self, a: AlgebraElement):
        if a.parent != self.algebra:
            raise ValueError("element belongs to a different algebra")
        out = np.zeros((self.dimension, self.dimension), dtype=complex)
        for p in self.placements:
            blk = p.realize(a.blocks[p.summand])
            size = blk.shape[0]
            out[p.offset:p.offset + size, p.offset:p.offset + size] += blk
        return out

    def check_faithful(self, tol: float = 1e-8) -> bool:
        """Exact real-linear kernel test: embed has zero kernel iff full rank."""
        cols = []
        for k, n in enumerate(self.algebra.summands):
            for i in range(n):
                for j in range(n):
                    for val in (1.0, 1.0j):
                        blocks = [np.zeros((m, m), dtype=complex) for m in self.algebra.summands]
                        blocks[k][i, j] = val
                        m = self.embed(AlgebraElement(self.algebra, blocks))
                        cols.append(np.concatenate([m.real.ravel(), m.imag.ravel()]))
        mat = np.array(cols).T
        rank = np.linalg.matrix_rank(mat, tol=tol * max(1.0, float(np.abs(mat).max())))
        return rank == 2 * self.algebra.dim


def opposite_action(b, j: RealStructure, rep: Representation | None = None):
    """Right-action matrix of ``b`` through the real structure: J b* J^{-1}.

    ``b`` may be an :class:`AlgebraElement` (then ``rep`` embeds it first) or
    a plain matrix on J's space.  As an operator identity this equals
    U b^T U*, which is conjugate to the transpose and hence reverses products:
    opposite_action(b1 b2) = opposite_action(b2) opposite_action(b1).
    """
    if isinstance(b, AlgebraElement):
        if rep is None:
            raise ValueError("an AlgebraElement needs a representation")
        m = rep.embed(b)
    else:
        m = np.asarray(b, dtype=complex)
    if m.shape != (j.dimension, j.dimension):
        raise ValueError(f"operator shape {m.shape} does not match J's space of dim {j.dimension}")
    return j.unitary @ m.T @ j.unitary.conj().T
