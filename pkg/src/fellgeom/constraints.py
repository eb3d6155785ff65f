"""Admissible Dirac-section block patterns and their parameter counts.

Over a product bundle the candidate Dirac operators are sections of the
domain map whose fiber elements are simple tensors ``u (x) v``; the block
support of such a section is the permutation grid of an involution ``sigma``
on objects.  Compatibility with the real structure ties the element at
``tau(j)`` to the conjugate factor-swap of the element at ``j``, which is
what cuts the free parameters of a mass block from the full matrix dimension
down to the additive count of its two tensor factors.

This module enumerates the admissible patterns, selects the mass-bearing
one, solves the tying equations with exact per-orbit charts, counts
parameters two ways (the additive fiber count and the Jacobian-rank
dimension of the realised block manifold, which differ by the scalar
redundancy ``u (x) v = (c u) (x) (v / c)``), and runs the structural
exclusion checks: combined block layouts are not sections, and mass-bearing
sections cannot connect distinct matter sectors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .fellbundle import (
    BlockGrid,
    DiracSection,
    FellBundleGeometry,
    SectionCheck,
    assemble,
    is_dirac_section,
    product_real_structure,
)
from .lincore import (
    DEFAULT_TOL,
    Grading,
    RealStructure,
    dagger,
    random_complex,
    random_hermitian,
)

__all__ = [
    "BlockPattern",
    "ConstraintSolution",
    "MassSpectrum",
    "check_leptoquark_exclusion",
    "check_sector_mixing",
    "diagonalize_mass",
    "enumerate_admissible_patterns",
    "random_tied_section",
    "select_mass_pattern",
    "solve_reality_constraint",
    "tied_section_from_params",
]


# ---------------------------------------------------------------------------
# patterns
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BlockPattern:
    """An involutive object pairing and the block grid it supports.

    ``pairing[j]`` is the block-row of the (only) block in block-column
    ``j``; symmetry of the grid under transposition is exactly the
    involution property.
    """

    objects: tuple
    pairing_map: tuple  # pairing_map[k] = index of pairing(objects[k])
    chi_relation: str | None = None

    def pairing(self) -> dict:
        return {self.objects[k]: self.objects[self.pairing_map[k]]
                for k in range(len(self.objects))}

    @property
    def grid(self) -> np.ndarray:
        n = len(self.objects)
        g = np.zeros((n, n), dtype=bool)
        for col, row in enumerate(self.pairing_map):
            g[row, col] = True
        return g

    @property
    def is_identity(self) -> bool:
        return all(self.pairing_map[k] == k for k in range(len(self.objects)))

    @property
    def fixed_point_free(self) -> bool:
        return all(self.pairing_map[k] != k for k in range(len(self.objects)))

    def supported_arrows(self) -> list[tuple]:
        return [(self.objects[self.pairing_map[k]], self.objects[k])
                for k in range(len(self.objects))]

    def describe(self) -> str:
        if self.is_identity:
            return "diagonal"
        pairs = []
        seen = set()
        for k, m in enumerate(self.pairing_map):
            if k in seen:
                continue
            seen.update({k, m})
            pairs.append(f"{self.objects[k]}<->{self.objects[m]}" if m != k
                         else f"{self.objects[k]} loop")
        return ", ".join(pairs)

    def diagram(self) -> str:
        """Text grid of the pattern, one row per block-row."""
        n = len(self.objects)
        width = max(len(str(o)) for o in self.objects) + 1
        head = " " * width + "".join(f"{str(o):>{width}}" for o in self.objects)
        rows = [head]
        g = self.grid
        for r in range(n):
            cells = "".join(f"{'[*]' if g[r, c] else ' . ':>{width}}" for c in range(n))
            rows.append(f"{str(self.objects[r]):>{width}}" + cells)
        return "\n".join(rows)


def _involutions(items: tuple):
    if not items:
        yield {}
        return
    first, rest = items[0], items[1:]
    for m in _involutions(rest):
        yield {first: first, **m}
    for k, other in enumerate(rest):
        for m in _involutions(rest[:k] + rest[k + 1:]):
            yield {first: other, other: first, **m}


def _chi_relation(pattern_pairs: Sequence[tuple], chi_signs: Mapping) -> str:
    rel = set()
    for i, j in pattern_pairs:
        rel.add("anticommutes" if chi_signs[i] == -chi_signs[j] else "commutes")
    return rel.pop() if len(rel) == 1 else "mixed"


def enumerate_admissible_patterns(geom: FellBundleGeometry,
                                  j: RealStructure | None = None,
                                  chi: Mapping | Grading | None = None,
                                  chi_signs: Mapping | None = None) -> list[BlockPattern]:
    """All block patterns a self-adjoint, reality-compatible section can carry.

    Candidates are the involutions ``sigma`` of the object set (forced by
    self-adjointness of the assembly).  When the geometry carries a
    conjugate pairing ``tau`` with no fixed objects, reality compatibility
    requires ``sigma`` to commute with ``tau``, and only the homogeneous
    involutions are admitted: ``sigma`` must move every object or none.  A
    mixed involution would assign unit loops to one conjugate pair and
    proper arrows to another, breaking the uniform conjugate structure of
    the section space; such patterns are excluded here by definition of
    admissibility.  Without a conjugate pairing every involution is
    admissible.

    ``chi_signs`` (per-object +-1) only annotates each pattern with the sign
    relation of its blocks; it never filters.  Patterns are returned in
    canonical lexicographic order of their pairing tuples.
    """
    objects = geom.groupoid.objects
    tau = geom.opp_pairing if geom.is_product_bundle else None
    restrict_uniform = tau is not None and all(tau[o] != o for o in objects)

    found = []
    for sigma in _involutions(objects):
        if tau is not None and any(sigma[tau[o]] != tau[sigma[o]] for o in objects):
            continue
        if restrict_uniform:
            moved = [o for o in objects if sigma[o] != o]
            if moved and len(moved) != len(objects):
                continue
        found.append(tuple(objects.index(sigma[o]) for o in objects))

    found.sort()
    patterns = []
    for pm in found:
        rel = None
        if chi_signs is not None:
            pairs = [(objects[pm[k]], objects[k]) for k in range(len(objects))]
            rel = _chi_relation(pairs, chi_signs)
        patterns.append(BlockPattern(objects, pm, chi_relation=rel))
    return patterns


def select_mass_pattern(patterns: Sequence[BlockPattern], geom: FellBundleGeometry,
                        chi_signs: Mapping | None = None) -> BlockPattern:
    """The unique pattern sending every left-handed particle to the
    right-handed particle of its own matter sector.

    Requires per-object metadata (``sector``, ``chirality``,
    ``antiparticle``).  With grading signs supplied, the selected pattern
    must anticommute with the grading (which rejects the diagonal pattern).
    """
    meta = geom.object_meta
    if not meta:
        raise ValueError("mass-pattern selection needs object metadata")
    left_particles = [o for o in geom.groupoid.objects
                      if meta[o].get("chirality") == "L" and not meta[o].get("antiparticle")]
    if not left_particles:
        raise ValueError("no chirality-connecting pattern: no left-handed objects declared")

    def is_mass(p: BlockPattern) -> bool:
        pairing = p.pairing()
        for o in left_particles:
            target = pairing[o]
            tm = meta[target]
            if tm.get("chirality") != "R" or tm.get("antiparticle") or \
                    tm.get("sector") != meta[o].get("sector"):
                return False
        return True

    hits = [p for p in patterns if is_mass(p)]
    if chi_signs is not None:
        hits = [p for p in hits
                if _chi_relation([(a, b) for a, b in
                                  zip([p.objects[k] for k in p.pairing_map], p.objects)],
                                 chi_signs) == "anticommutes"]
    if not hits:
        raise ValueError("no chirality-connecting pattern among the admissible set")
    if len(hits) > 1:
        raise ValueError(f"mass pattern is not unique: {[h.describe() for h in hits]}")
    return hits[0]


# ---------------------------------------------------------------------------
# orbit charts for the reality-tied section space
# ---------------------------------------------------------------------------

@dataclass
class _OrbitChart:
    representative: object
    members: tuple
    case: str                 # 'free' | 'sigma_eq_tau' | 'sigma_fixed' | 'point'
    shapes: tuple             # ((own rows, own cols), (mirror rows, mirror cols))
    real_params: int
    naive_complex: float

    def describe(self, sigma, tau) -> str:
        j = self.representative
        own, mir = self.shapes
        if self.case == "free":
            return (f"block({sigma[j]}<-{j}) = u (x) v with u {own[0]}x{own[1]}, "
                    f"v {mir[0]}x{mir[1]}; block({tau[sigma[j]]}<-{tau[j]}) = "
                    f"conj(v) (x) conj(u); adjoint blocks tied")
        if self.case == "sigma_eq_tau":
            return (f"block({sigma[j]}<-{j}) = u (x) c u^T, u {own[0]}x{own[1]}; "
                    f"adjoint block tied")
        if self.case == "sigma_fixed":
            return (f"block({j}<-{j}) = H1 (x) H2 Hermitian; block({tau[j]}<-{tau[j]}) = "
                    f"conj(H2) (x) conj(H1)")
        return f"block({j}<-{j}) = H (x) c conj(H), H Hermitian, c real"


def _orbit_charts(geom: FellBundleGeometry, pattern: BlockPattern, sign_dj: int):
    if not geom.is_product_bundle:
        raise ValueError("the reality constraint is expressible only on a product bundle")
    sigma = pattern.pairing()
    tau = geom.opp_pairing
    dims = geom.fiber_dims
    objects = geom.groupoid.objects
    charts: list[_OrbitChart] = []
    seen: set = set()
    for jj in objects:
        if jj in seen:
            continue
        members = tuple(dict.fromkeys([jj, sigma[jj], tau[jj], sigma[tau[jj]]]))
        seen.update(members)
        own = (dims[sigma[jj]], dims[jj])
        mirror = (dims[tau[sigma[jj]]], dims[tau[jj]])
        if sigma[jj] != jj and tau[jj] not in (jj, sigma[jj]):
            case, rp = "free", 2 * (own[0] * own[1] + mirror[0] * mirror[1])
            naive = own[0] * own[1] + mirror[0] * mirror[1]
        elif sigma[jj] == tau[jj] and sigma[jj] != jj:
            if sign_dj != 1:
                raise NotImplementedError("sigma = tau orbits are implemented for DJ = +JD")
            case, rp = "sigma_eq_tau", 2 * (own[0] * own[1] + 1)
            naive = own[0] * own[1] + 1
        elif sigma[jj] == jj and tau[jj] != jj:
            case, rp = "sigma_fixed", dims[jj] ** 2 + dims[tau[jj]] ** 2
            naive = rp / 2
        else:  # sigma[jj] == tau[jj] == jj
            if sign_dj != 1:
                raise NotImplementedError("self-paired orbits are implemented for DJ = +JD")
            case, rp = "point", dims[jj] ** 2 + 1
            naive = rp / 2
        charts.append(_OrbitChart(jj, members, case, (own, mirror), rp, naive))
    return charts, sigma, tau


def _hermitian_basis_mats(n: int) -> list[np.ndarray]:
    out = []
    for i in range(n):
        b = np.zeros((n, n), dtype=complex)
        b[i, i] = 1.0
        out.append(b)
    for i in range(n):
        for j in range(i + 1, n):
            b = np.zeros((n, n), dtype=complex)
            b[i, j] = b[j, i] = 1.0
            out.append(b)
            b = np.zeros((n, n), dtype=complex)
            b[i, j] = -1j
            b[j, i] = 1j
            out.append(b)
    return out


def _chart_elements(chart: _OrbitChart, params: np.ndarray, sign_dj: int):
    """Realise one orbit chart: returns {object: fiber element} (tied)."""
    (a, b), (c, d) = chart.shapes
    if chart.case == "free":
        nu, nv = a * b, c * d
        u = (params[:nu] + 1j * params[nu:2 * nu]).reshape(a, b)
        v = (params[2 * nu:2 * nu + nv] + 1j * params[2 * nu + nv:]).reshape(c, d)
        e = np.kron(u, v)
        e_tau = sign_dj * np.kron(np.conj(v), np.conj(u))
        return {"rep": e, "tau": e_tau}
    if chart.case == "sigma_eq_tau":
        nu = a * b
        u = (params[:nu] + 1j * params[nu:2 * nu]).reshape(a, b)
        cc = params[2 * nu] + 1j * params[2 * nu + 1]
        return {"rep": np.kron(u, cc * u.T)}
    if chart.case == "sigma_fixed":
        h1 = _unpack_hermitian(params[:a * a], a)
        h2 = _unpack_hermitian(params[a * a:], c)
        e = np.kron(h1, h2)
        e_tau = sign_dj * np.kron(np.conj(h2), np.conj(h1))
        return {"rep": e, "tau": e_tau}
    # point
    h = _unpack_hermitian(params[:a * a], a)
    cc = params[a * a]
    return {"rep": cc * np.kron(h, np.conj(h))}


def _unpack_hermitian(params: np.ndarray, n: int) -> np.ndarray:
    basis = _hermitian_basis_mats(n)
    return sum(p * b for p, b in zip(params, basis))


def tied_section_from_params(geom: FellBundleGeometry, pattern: BlockPattern,
                             params: np.ndarray, sign_dj: int = 1) -> DiracSection:
    """Assemble a full self-adjoint, reality-tied section from chart params."""
    charts, sigma, tau = _orbit_charts(geom, pattern, sign_dj)
    params = np.asarray(params, dtype=float)
    if params.size != sum(c.real_params for c in charts):
        raise ValueError(f"expected {sum(c.real_params for c in charts)} real parameters, "
                         f"got {params.size}")
    elements: dict = {}
    pos = 0
    for chart in charts:
        vals = _chart_elements(chart, params[pos:pos + chart.real_params], sign_dj)
        pos += chart.real_params
        jj = chart.representative
        elements[jj] = vals["rep"]
        if sigma[jj] != jj:
            elements[sigma[jj]] = dagger(vals["rep"])
        if "tau" in vals and tau[jj] not in elements:
            elements[tau[jj]] = vals["tau"]
            if sigma[tau[jj]] != tau[jj]:
                elements[sigma[tau[jj]]] = dagger(vals["tau"])
    return DiracSection(geom, sigma, elements)


def random_tied_section(geom: FellBundleGeometry, pattern: BlockPattern,
                        rng: np.random.Generator, sign_dj: int = 1) -> DiracSection:
    charts, _, _ = _orbit_charts(geom, pattern, sign_dj)
    params = rng.standard_normal(sum(c.real_params for c in charts))
    return tied_section_from_params(geom, pattern, params, sign_dj)


# ---------------------------------------------------------------------------
# the constraint solution: counting two ways
# ---------------------------------------------------------------------------

@dataclass
class ConstraintSolution:
    pattern: BlockPattern
    equations: list[str]
    naive_param_count: int
    manifold_dim: int
    real_param_count: int
    orbit_details: list[dict]
    witnesses: list[DiracSection]
    mass_block_shape: tuple | None
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        out = [f"pattern: {self.pattern.describe()}",
               f"naive_param_count: {self.naive_param_count}",
               f"manifold_dim: {self.manifold_dim}",
               f"real_param_count: {self.real_param_count}"]
        if self.mass_block_shape is not None:
            out.append(f"mass_block_shape: {self.mass_block_shape[0]}x{self.mass_block_shape[1]}")
        out.extend(f"equation: {e}" for e in self.equations)
        out.extend(f"note: {n}" for n in self.notes)
        return out


def _matrix_unit_directions(rows: int, cols: int):
    for p in range(rows):
        for q in range(cols):
            for phase in (1.0, 1.0j):
                e = np.zeros((rows, cols), dtype=complex)
                e[p, q] = phase
                yield e


def _orbit_jacobian_columns(chart: _OrbitChart, x0: np.ndarray, sign_dj: int):
    """Exact derivative of the chart's representative block at ``x0``."""
    (a, b), (c, d) = chart.shapes
    if chart.case == "free":
        nu = a * b
        u0 = (x0[:nu] + 1j * x0[nu:2 * nu]).reshape(a, b)
        v0 = (x0[2 * nu:2 * nu + c * d] + 1j * x0[2 * nu + c * d:]).reshape(c, d)
        du = [np.kron(e, v0) for e in _matrix_unit_directions(a, b)]
        dv = [np.kron(u0, e) for e in _matrix_unit_directions(c, d)]
        # parameter layout is (Re u, Im u, Re v, Im v); the direction
        # generator interleaves Re/Im per entry, so reorder to match
        return du[0::2] + du[1::2] + dv[0::2] + dv[1::2]
    if chart.case == "sigma_eq_tau":
        nu = a * b
        u0 = (x0[:nu] + 1j * x0[nu:2 * nu]).reshape(a, b)
        c0 = x0[2 * nu] + 1j * x0[2 * nu + 1]
        du = [np.kron(e, c0 * u0.T) + np.kron(u0, c0 * e.T)
              for e in _matrix_unit_directions(a, b)]
        dc = [np.kron(u0, u0.T), np.kron(u0, 1j * u0.T)]
        return du[0::2] + du[1::2] + dc
    if chart.case == "sigma_fixed":
        h1 = _unpack_hermitian(x0[:a * a], a)
        h2 = _unpack_hermitian(x0[a * a:], c)
        d1 = [np.kron(bmat, h2) for bmat in _hermitian_basis_mats(a)]
        d2 = [np.kron(h1, bmat) for bmat in _hermitian_basis_mats(c)]
        return d1 + d2
    # point
    h = _unpack_hermitian(x0[:a * a], a)
    c0 = x0[a * a]
    dh = [c0 * (np.kron(bmat, np.conj(h)) + np.kron(h, np.conj(bmat)))
          for bmat in _hermitian_basis_mats(a)]
    return dh + [np.kron(h, np.conj(h))]


def _orbit_jacobian_rank(chart: _OrbitChart, rng: np.random.Generator,
                         sign_dj: int, cutoff: float = 1e-8) -> int:
    """Real rank of the chart differential at a random generic point."""
    x0 = rng.standard_normal(chart.real_params)
    cols = [np.concatenate([m.real.ravel(), m.imag.ravel()])
            for m in _orbit_jacobian_columns(chart, x0, sign_dj)]
    jac = np.array(cols).T
    svals = np.linalg.svd(jac, compute_uv=False)
    if svals.size == 0 or svals[0] == 0.0:
        return 0
    return int(np.sum(svals > cutoff * svals[0]))


def solve_reality_constraint(geom: FellBundleGeometry, pattern: BlockPattern,
                             j: RealStructure | None = None, seeds: Sequence[int] = (0, 1, 2, 3, 4),
                             witness_count: int = 3, sign_dj: int = 1,
                             tol: float = DEFAULT_TOL) -> ConstraintSolution:
    """Solve the tying equations of a pattern and count its parameters.

    Returns both the additive fiber-factor count and the complex dimension
    of the manifold of realised blocks (the rank of the chart Jacobian at a
    generic point, halved from real coordinates).  The rank is recomputed at
    one generic point per seed and must agree across all seeds.  Witnesses
    are random tied sections, each re-verified against the section
    predicate and the real structure.
    """
    charts, sigma, tau = _orbit_charts(geom, pattern, sign_dj)
    if j is None:
        j = product_real_structure(geom, sign_dj=sign_dj)

    ranks_by_seed = []
    for seed in seeds:
        rng = np.random.Generator(np.random.PCG64(seed))
        ranks_by_seed.append(sum(_orbit_jacobian_rank(c, rng, sign_dj) for c in charts))
    if len(set(ranks_by_seed)) != 1:
        raise ArithmeticError(f"Jacobian rank unstable across seeds: {ranks_by_seed}")
    real_rank = ranks_by_seed[0]
    if real_rank % 2 != 0:
        raise ArithmeticError(f"realised-block manifold has odd real rank {real_rank}")
    manifold_dim = real_rank // 2

    naive = sum(c.naive_complex for c in charts)
    naive_int = int(naive) if float(naive).is_integer() else int(round(naive))

    witnesses = []
    wrng = np.random.Generator(np.random.PCG64(max(seeds) + 101))
    for _ in range(witness_count):
        sec = random_tied_section(geom, pattern, wrng, sign_dj)
        check = is_dirac_section(sec, j, tol=tol)
        if not check.ok:
            raise ArithmeticError(f"tied witness failed the section predicate: {check.violations}")
        witnesses.append(sec)

    meta = geom.object_meta
    mass_shape = None
    for c in charts:
        jj = c.representative
        if meta and meta.get(jj, {}).get("chirality") in ("L", "R") and sigma[jj] != jj \
                and meta.get(sigma[jj], {}).get("chirality") in ("L", "R") \
                and meta[jj].get("chirality") != meta[sigma[jj]].get("chirality") \
                and not meta[jj].get("antiparticle"):
            mass_shape = (geom.block_dim(sigma[jj]), geom.block_dim(jj))

    notes = []
    if manifold_dim < naive_int:
        notes.append(f"factor scale redundancy: u (x) v = (c u) (x) (v / c) removes "
                     f"{naive_int - manifold_dim} of the {naive_int} additive parameters")

    return ConstraintSolution(
        pattern=pattern,
        equations=[c.describe(sigma, tau) for c in charts],
        naive_param_count=naive_int,
        manifold_dim=manifold_dim,
        real_param_count=sum(c.real_params for c in charts),
        orbit_details=[{"representative": c.representative, "members": c.members,
                        "case": c.case, "shapes": c.shapes,
                        "real_params": c.real_params, "naive_complex": c.naive_complex}
                       for c in charts],
        witnesses=witnesses,
        mass_block_shape=mass_shape,
        notes=notes,
    )


# ---------------------------------------------------------------------------
# exclusion checks
# ---------------------------------------------------------------------------

@dataclass
class ExclusionReport:
    cases: list[dict]

    @property
    def passed(self) -> bool:
        return all(c["as_expected"] for c in self.cases)

    def lines(self) -> list[str]:
        out = [f"exclusion_checks: {'pass' if self.passed else 'fail'}"]
        for c in self.cases:
            out.append(f"{c['name']}: {'rejected' if c['rejected'] else 'accepted'}"
                       f" ({'expected' if c['as_expected'] else 'UNEXPECTED'})")
            for v in c.get("violations", []):
                out.append(f"{c['name']}_violation: {v}")
        return out


def _pattern_by_pairs(patterns: Sequence[BlockPattern], wanted: dict) -> BlockPattern:
    for p in patterns:
        if p.pairing() == wanted:
            return p
    raise ValueError("required pattern is not admissible on this geometry")


def check_leptoquark_exclusion(geom: FellBundleGeometry, j: RealStructure | None = None,
                               chi_signs: Mapping | None = None, seed: int = 7,
                               tol: float = DEFAULT_TOL) -> ExclusionReport:
    """Combined block layouts are rejected; the pure mass layout is accepted.

    On a four-object conjugate-paired geometry, the mass pattern (left <->
    right within particles and within conjugates) is superposed once with
    the cross pattern connecting particles to opposite-chirality conjugates,
    and once with the pair of same-chirality conjugate patterns.  Each
    superposition places two blocks in every block-row, so it is not a
    section of the domain map; the report names the offending rows.
    """
    if j is None:
        j = product_real_structure(geom)
    objects = geom.groupoid.objects
    meta = geom.object_meta
    tau = geom.opp_pairing
    patterns = enumerate_admissible_patterns(geom, j, chi_signs=chi_signs)
    mass = select_mass_pattern(patterns, geom, chi_signs=None)
    sigma_m = mass.pairing()
    # cross pattern: left particle <-> right conjugate
    sigma_g = {o: tau[sigma_m[o]] for o in objects}
    cross = _pattern_by_pairs(patterns, sigma_g)
    conj_pairs = _pattern_by_pairs(patterns, dict(tau))

    rng = np.random.Generator(np.random.PCG64(seed))
    grid = geom.grid()
    d_mass = assemble(random_tied_section(geom, mass, rng, j.sign_dj))
    d_cross = assemble(random_tied_section(geom, cross, rng, j.sign_dj))
    d_conj = assemble(random_tied_section(geom, conj_pairs, rng, j.sign_dj))

    cases = []
    for name, matrix, expect_reject in (
            ("mass_with_cross_blocks", d_mass + d_cross, True),
            ("mass_with_conjugate_pair_blocks", d_mass + d_conj, True),
            ("pure_mass_pattern", d_mass, False)):
        check = is_dirac_section(matrix, j, grid=grid, tol=tol)
        rejected = not check.ok
        rows_with_two = sorted({v.split()[1] for v in check.violations
                                if v.startswith("block-row")})
        cases.append({
            "name": name,
            "rejected": rejected,
            "as_expected": rejected == expect_reject,
            "violations": check.violations,
            "offending_rows": rows_with_two,
            "selfadjoint": check.selfadjoint_ok,
            "reality": check.reality_ok,
        })
    return ExclusionReport(cases)


@dataclass
class MixingReport:
    mass_bearing: list[BlockPattern]
    cross_connecting: list[BlockPattern]
    mixing_blocks: list[tuple]
    vacuous: bool = False

    @property
    def passed(self) -> bool:
        return not self.mixing_blocks

    def lines(self) -> list[str]:
        out = [f"sector_mixing: {'absent' if self.passed else 'PRESENT'}"]
        if self.vacuous:
            out.append("note: single-sector geometry, vacuously no mixing")
        out.append(f"mass_bearing_patterns: {len(self.mass_bearing)}")
        for p in self.mass_bearing:
            out.append(f"mass_pattern: {p.describe()}")
        out.append(f"cross_connecting_patterns: {len(self.cross_connecting)}")
        for blk in self.mixing_blocks:
            out.append(f"mixing_block: {blk}")
        return out


def check_sector_mixing(geom: FellBundleGeometry, chi_signs: Mapping | None = None) -> MixingReport:
    """Mass-bearing sections carry no blocks between matter sectors.

    A pattern is mass-bearing when it connects left to right within every
    declared sector (particles and, by conjugate symmetry, antiparticles).
    Because a section holds one block per row and column, such a pattern
    uses up every row inside its own sector, so any block between two
    different sectors is identically zero.  The report lists the admissible
    cross-connecting patterns too; none of them can be mass-bearing.
    """
    meta = geom.object_meta
    sectors = {meta[o].get("sector") for o in geom.groupoid.objects if meta}
    patterns = enumerate_admissible_patterns(geom, chi_signs=chi_signs)
    if len(sectors) <= 1:
        return MixingReport([], [], [], vacuous=True)

    def sector(o):
        return meta[o].get("sector")

    left_particles = [o for o in geom.groupoid.objects
                      if meta[o].get("chirality") == "L" and not meta[o].get("antiparticle")]

    mass_bearing, cross = [], []
    mixing_blocks: list[tuple] = []
    for p in patterns:
        pairing = p.pairing()
        crosses = [(pairing[o], o) for o in geom.groupoid.objects
                   if sector(pairing[o]) != sector(o)]
        is_mass = all(meta[pairing[o]].get("chirality") == "R"
                      and not meta[pairing[o]].get("antiparticle")
                      and sector(pairing[o]) == sector(o)
                      for o in left_particles)
        if is_mass:
            mass_bearing.append(p)
            mixing_blocks.extend(crosses)
        elif crosses:
            cross.append(p)
    return MixingReport(mass_bearing, cross, mixing_blocks)


# ---------------------------------------------------------------------------
# mass diagonalisation
# ---------------------------------------------------------------------------

@dataclass
class MassSpectrum:
    masses: np.ndarray            # singular values, descending, padded with
                                  # zeros to the row dimension
    multiplicities: list[tuple]   # (value, multiplicity), descending
    left_basis: np.ndarray
    right_basis: np.ndarray

    def lines(self) -> list[str]:
        out = ["mass_spectrum:"]
        for v, m in self.multiplicities:
            out.append(f"mass: {v:.12g} multiplicity: {m}")
        return out


def diagonalize_mass(m, tol: float = 1e-8) -> MassSpectrum:
    """Singular values of a left<->right block and the rotation to mass
    eigenstates; zero modes of the left space are reported as zero masses."""
    m = np.asarray(m, dtype=complex)
    if m.ndim == 1:
        m = m.reshape(-1, 1)
    u, s, vt = np.linalg.svd(m)
    masses = np.zeros(m.shape[0])
    masses[:s.size] = s
    mult: list[tuple] = []
    scale = max(1.0, masses[0] if masses.size else 1.0)
    for v in masses:
        if mult and abs(mult[-1][0] - v) <= tol * scale:
            mult[-1] = (mult[-1][0], mult[-1][1] + 1)
        else:
            mult.append((float(v), 1))
    return MassSpectrum(masses, mult, u, vt.conj().T)
