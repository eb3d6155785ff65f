"""Real even finite spectral triples.

A triple bundles a represented block algebra, a Hilbert space, a Hermitian
Dirac matrix, an antiunitary real structure and a grading, with the usual
sign and order conditions.  On top sit the spectral action Tr f(D), Dirac
fluctuations, the fermion bilinear, state expectation values and the state
distance induced by D as a constrained optimisation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .lincore import (
    DEFAULT_TOL,
    AlgebraElement,
    BlockAlgebra,
    Grading,
    HilbertSpace,
    RealStructure,
    Representation,
    commutator,
    dagger,
    mats_close,
    op_norm,
    opposite_action,
)

__all__ = [
    "DistanceResult",
    "StateFunctional",
    "TripleData",
    "TripleReport",
    "check_axioms",
    "connes_distance",
    "expectation",
    "fermion_bilinear",
    "fluctuate",
    "spectral_action",
    "vector_state",
]

EUCLIDEAN_SECTOR_SIGNS = (1, -1, -1, 1)
LORENTZIAN_SECTOR_SIGNS = (1, -1, 1, -1)


# ---------------------------------------------------------------------------
# states
# ---------------------------------------------------------------------------

class StateFunctional:
    """A state stored as a density operator on the represented space.

    ``rho`` must be positive semidefinite with unit trace; the state of an
    algebra element ``a`` is Tr(rho embed(a)).
    """

    def __init__(self, density, rep: Representation | None = None, tol: float = 1e-9):
        rho = np.array(density, dtype=complex)
        if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
            raise ValueError("density must be a square matrix")
        if not mats_close(rho, dagger(rho), tol):
            raise ValueError("density must be Hermitian")
        lam = np.linalg.eigvalsh(rho)
        if lam[0] < -tol:
            raise ValueError(f"density has negative eigenvalue {lam[0]:.3e}")
        if abs(np.trace(rho).real - 1.0) > tol:
            raise ValueError(f"density trace is {np.trace(rho).real}, expected 1")
        self.density = rho
        self.rep = rep

    @property
    def dimension(self) -> int:
        return self.density.shape[0]

    def is_pure(self, tol: float = 1e-9) -> bool:
        return mats_close(self.density @ self.density, self.density, tol)

    def is_faithful(self, tol: float = 1e-12) -> bool:
        return bool(np.linalg.eigvalsh(self.density)[0] > tol)

    def __call__(self, a) -> complex:
        if isinstance(a, AlgebraElement):
            if self.rep is None:
                raise ValueError("state needs a representation to evaluate algebra elements")
            a = self.rep.embed(a)
        return complex(np.trace(self.density @ np.asarray(a, dtype=complex)))


def vector_state(dim: int, index: int, rep: Representation | None = None) -> StateFunctional:
    rho = np.zeros((dim, dim), dtype=complex)
    rho[index, index] = 1.0
    return StateFunctional(rho, rep)


def expectation(rho: StateFunctional, x, tol: float = 1e-12) -> float:
    """Tr(rho X) for Hermitian X; the imaginary residue must vanish."""
    x = np.asarray(x, dtype=complex)
    val = complex(np.trace(rho.density @ x))
    if abs(val.imag) > tol * max(1.0, abs(val.real)):
        raise ValueError(f"expectation of a non-Hermitian observable (imag part {val.imag:.3e})")
    return float(val.real)


# ---------------------------------------------------------------------------
# the triple and its axioms
# ---------------------------------------------------------------------------

@dataclass
class TripleData:
    """(A, H, D, J, chi) with declared signs.

    ``signature`` selects the four-sector grading convention: 'euclidean'
    for signs (1, -1, -1, 1) per sector, 'lorentzian' for (1, -1, 1, -1);
    it is informational unless the grading was built from it.
    """

    algebra: BlockAlgebra
    rep: Representation
    space: HilbertSpace
    dirac: np.ndarray
    real_structure: RealStructure | None = None
    grading: Grading | None = None
    signature: str = "euclidean"

    def __post_init__(self):
        self.dirac = np.asarray(self.dirac, dtype=complex)
        d = self.space.dimension
        if self.dirac.shape != (d, d):
            raise ValueError("Dirac matrix does not act on the declared space")
        if self.real_structure is not None and self.real_structure.dimension != d:
            raise ValueError("real structure acts on a different space")
        if self.grading is not None and self.grading.dimension != d:
            raise ValueError("grading acts on a different space")


@dataclass
class AxiomCheck:
    name: str
    passed: bool
    detail: str | None = None


@dataclass
class TripleReport:
    checks: list[AxiomCheck]
    samples: int
    seed: int
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def failed(self) -> list[AxiomCheck]:
        return [c for c in self.checks if not c.passed]

    def lines(self) -> list[str]:
        out = [f"triple_axioms: {'pass' if self.passed else 'fail'}",
               f"samples: {self.samples}", f"seed: {self.seed}"]
        for c in self.checks:
            out.append(f"{c.name}: {'pass' if c.passed else 'fail'}")
            if c.detail and not c.passed:
                out.append(f"{c.name}_detail: {c.detail}")
        out.extend(f"note: {n}" for n in self.notes)
        return out


def check_axioms(t: TripleData, samples: int = 100, seed: int = 0,
                 tol: float = DEFAULT_TOL) -> TripleReport:
    """Run the real-even-triple axiom battery with witnesses.

    Checks: self-adjointness of D, J^2 sign, DJ = sign JD, grading
    anticommutation D chi = -chi D, the zeroth-order commutant condition
    [a, b^opp] = 0 and the first-order condition [[D, a], b^opp] = 0 on
    seeded random algebra pairs.
    """
    rng = np.random.Generator(np.random.PCG64(seed))
    d = t.dirac
    checks: list[AxiomCheck] = []

    dev = op_norm(d - dagger(d))
    checks.append(AxiomCheck("selfadjoint", dev <= tol * max(1.0, op_norm(d)),
                             f"|D - D*| = {dev:.3e}"))

    if t.real_structure is not None:
        j = t.real_structure
        u = j.unitary
        dev = op_norm(u @ u.conj() - j.sign_j2 * np.eye(j.dimension))
        checks.append(AxiomCheck("j_squared_sign", dev <= tol, f"|J^2 - ({j.sign_j2:+d})| = {dev:.3e}"))
        dev = op_norm(d @ u - j.sign_dj * u @ np.conj(d))
        checks.append(AxiomCheck("dirac_commutes_with_j", dev <= tol * max(1.0, op_norm(d)),
                                 f"|DJ - ({j.sign_dj:+d})JD| = {dev:.3e}"))

    if t.grading is not None:
        chi = t.grading.matrix
        dev = op_norm(d @ chi + chi @ d)
        checks.append(AxiomCheck("grading_anticommutes", dev <= tol * max(1.0, op_norm(d)),
                                 f"|D chi + chi D| = {dev:.3e}"))

    if t.real_structure is not None:
        worst_zeroth = 0.0
        worst_first = 0.0
        for _ in range(samples):
            a = t.rep.embed(t.algebra.random_element(rng))
            b = opposite_action(t.algebra.random_element(rng), t.real_structure, t.rep)
            worst_zeroth = max(worst_zeroth, op_norm(commutator(a, b)))
            worst_first = max(worst_first, op_norm(commutator(commutator(d, a), b)))
        scale = max(1.0, op_norm(d))
        checks.append(AxiomCheck("zeroth_order", worst_zeroth <= tol,
                                 f"max |[a, b_opp]| = {worst_zeroth:.3e} over {samples} samples"))
        checks.append(AxiomCheck("first_order", worst_first <= tol * scale,
                                 f"max |[[D, a], b_opp]| = {worst_first:.3e} over {samples} samples"))

    return TripleReport(checks, samples, seed)


# ---------------------------------------------------------------------------
# fluctuations, action, bilinear
# ---------------------------------------------------------------------------

def fluctuate(d, autos: Sequence, weights: Sequence[float], tol: float = 1e-9):
    """Weighted sum of conjugates of D by unitaries: sum r_j L_j D L_j^{-1}.

    Real weights preserve Hermiticity; non-unitary conjugators are rejected.
    """
    d = np.asarray(d, dtype=complex)
    if len(autos) != len(weights):
        raise ValueError("one weight per automorphism")
    out = np.zeros_like(d)
    for u, r in zip(autos, weights):
        u = np.asarray(u, dtype=complex)
        if not mats_close(u @ dagger(u), np.eye(u.shape[0]), tol):
            raise ValueError("fluctuation requires unitary conjugators")
        if abs(complex(r).imag) > 0:
            raise ValueError("fluctuation weights must be real")
        out = out + float(np.real(r)) * (u @ d @ dagger(u))
    return out


def _as_eigen_function(f) -> Callable[[np.ndarray], np.ndarray]:
    if callable(f):
        return lambda lam: np.asarray(f(lam), dtype=float)
    coeffs = np.asarray(f, dtype=float)  # c_0 + c_1 x + c_2 x^2 + ...
    return lambda lam: np.polynomial.polynomial.polyval(lam, coeffs)


def spectral_action(d, f, tol: float = 1e-9) -> float:
    """Tr f(D): the cutoff function evaluated on the spectrum and summed.

    ``f`` is a polynomial coefficient sequence (ascending) or a vectorised
    callable on eigenvalues.  D must be Hermitian so the spectrum is real.
    """
    d = np.asarray(d, dtype=complex)
    if not mats_close(d, dagger(d), tol):
        raise ValueError("spectral action needs a Hermitian operator")
    lam = np.linalg.eigvalsh(d)
    return float(np.sum(_as_eigen_function(f)(lam)))


def fermion_bilinear(psi, d) -> complex:
    """<psi, D psi>; real whenever D is Hermitian."""
    psi = np.asarray(psi, dtype=complex)
    d = np.asarray(d, dtype=complex)
    if d.shape != (psi.size, psi.size):
        raise ValueError("vector and operator dimensions differ")
    return complex(np.vdot(psi, d @ psi))


# ---------------------------------------------------------------------------
# the state distance
# ---------------------------------------------------------------------------

@dataclass
class DistanceResult:
    value: float
    unbounded: bool
    maximizer: AlgebraElement | None
    restart_values: list[float]
    converged: bool

    def __float__(self):
        return float("inf") if self.unbounded else self.value


def _hermitian_frames(t: TripleData):
    basis = t.algebra.hermitian_basis()
    embedded = [t.rep.embed(h) for h in basis]
    return basis, embedded


def connes_distance(t: TripleData, omega1: StateFunctional, omega2: StateFunctional,
                    restarts: int = 20, seed: int = 0, tol: float = 1e-6,
                    max_iter: int = 400) -> DistanceResult:
    """sup { |w1(a) - w2(a)| : a = a*, |[D, a]| <= 1 } by projected ascent.

    The Hermitian part of the algebra is coordinatised by a real basis; the
    objective is linear in those coordinates and the constraint set convex,
    so multi-start ascent with the norm constraint enforced by rescaling is
    reliable at these dimensions.  Directions on which [D, .] vanishes are
    split off exactly first: if the state difference sees them the distance
    is unbounded and reported by flag, not by error.
    """
    basis, embedded = _hermitian_frames(t)
    p = len(basis)
    delta = np.array([float((omega1(m) - omega2(m)).real) for m in embedded])

    # Realified commutator map and its exact null space.
    d = t.dirac
    cols = [commutator(d, m).ravel() for m in embedded]
    cmat = np.array([np.concatenate([c.real, c.imag]) for c in cols]).T  # (2n^2, p)
    svd_u, svals, svd_vt = np.linalg.svd(cmat, full_matrices=True)
    scale = svals[0] if svals.size and svals[0] > 0 else 1.0
    rank = int(np.sum(svals > 1e-12 * scale))
    null = svd_vt[rank:].T  # columns span ker [D, .]

    if null.size and np.linalg.norm(null.T @ delta) > 1e-9 * max(1.0, np.linalg.norm(delta)):
        return DistanceResult(float("inf"), True, None, [], True)

    if np.linalg.norm(delta) <= 1e-14:
        return DistanceResult(0.0, False, None, [0.0] * min(3, restarts), True)

    # Work orthogonal to the kernel; there |[D, a]| > 0 for a != 0.
    live = svd_vt[:rank].T  # (p, rank)
    dproj = live.T @ delta

    def comm_norm(w):
        a = np.tensordot(live @ w, np.stack(embedded), axes=(0, 0))
        return op_norm(commutator(d, a))

    def rescaled_value(w):
        nrm = comm_norm(w)
        if nrm <= 1e-14:
            return 0.0, w
        w = w / nrm
        return float(dproj @ w), w

    rng = np.random.Generator(np.random.PCG64(seed))
    finals: list[float] = []
    best_val, best_w = -np.inf, None
    for _ in range(max(1, restarts)):
        w = rng.standard_normal(rank)
        if dproj @ w < 0:
            w = -w
        val, w = rescaled_value(w)
        step = 1.0
        for _ in range(max_iter):
            moved = False
            for direction in (dproj, rng.standard_normal(rank)):
                cand_val, cand_w = rescaled_value(w + step * direction)
                if cand_val > val + 1e-15:
                    val, w, moved = cand_val, cand_w, True
            if not moved:
                step *= 0.5
                if step < 1e-12:
                    break
        finals.append(val)
        if val > best_val:
            best_val, best_w = val, w

    finals_sorted = sorted(finals, reverse=True)
    agreeing = [v for v in finals_sorted if finals_sorted[0] - v <= tol]
    converged = len(agreeing) >= min(3, len(finals))

    maximizer = None
    if best_w is not None:
        coeffs = live @ best_w
        elem = None
        for c, h in zip(coeffs, basis):
            elem = float(c) * h if elem is None else elem + float(c) * h
        maximizer = elem
    return DistanceResult(float(best_val), False, maximizer, finals_sorted, converged)
