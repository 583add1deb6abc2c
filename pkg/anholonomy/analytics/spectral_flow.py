"""Quasienergy branches and their continuation in the kick strength.

A sweep evaluates U_lam on a grid, matches eigenvectors step to step by
overlap, unwraps the quasienergies into continuous curves and rephases the
eigenvectors into the parallel-transport gauge (real positive overlap
between neighbouring grid points). For a periodic family the period end
reuses the decomposition at lam0 exactly, so the holonomy permutation and
the quasienergy increments are read off exact spectrum points.
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union
import logging

import numpy as np
from scipy.integrate import trapezoid
from scipy.optimize import linear_sum_assignment

from anholonomy.config import TOL_DEG, settings
from anholonomy.exceptions import (
    DegenerateSpectrum, GridMismatch, TrackingAmbiguity
)
from anholonomy.floquet.family import FloquetFamily
from anholonomy.numerics import UnitaryOperator, UnitarySpectrum, unitary_eigensolve

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * np.pi

GROUND_RULES = ("lowest-phase", "index-of-vector")


def wrap_symmetric(x, cell: float):
    """Map ``x`` into [-cell/2, cell/2)."""
    return np.mod(np.asarray(x) + 0.5 * cell, cell) - 0.5 * cell


@dataclass(frozen=True, eq=False)
class QuasienergyBranch:
    """Ordered quasienergies E_0 < ... < E_{N-1} < E_0 + 2pi/T at one lam.

    ``order[k]`` is the column of the underlying spectrum that carries
    level k, so ``eigenvectors[:, k]`` and ``quasienergies[k]`` belong to
    the same level.
    """

    lam: float
    period_t: float
    quasienergies: np.ndarray
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    order: np.ndarray
    ground_rule: str

    @property
    def dim(self) -> int:
        return len(self.quasienergies)


def _check_nondegenerate(spectrum: UnitarySpectrum, lam: float) -> None:
    if spectrum.degenerate:
        clusters = [c for c in spectrum.clusters if len(c) > 1]
        raise DegenerateSpectrum(
            f"Degenerate quasienergies at lam={lam:.12g}: clusters {clusters}",
            clusters=clusters,
        )


def _branch_from_spectrum(spectrum: UnitarySpectrum, period_t: float, lam: float,
                          ground_rule: str, reference: Optional[np.ndarray]) -> QuasienergyBranch:
    _check_nondegenerate(spectrum, lam)
    if ground_rule not in GROUND_RULES:
        raise ValueError(f"Unknown ground rule {ground_rule}; expected one of {GROUND_RULES}")
    n = spectrum.dim
    if ground_rule == "index-of-vector":
        if reference is None:
            raise ValueError("The index-of-vector ground rule needs a reference vector")
        weights = np.abs(spectrum.eigenvectors.conj().T @ np.asarray(reference, dtype=complex))
        ground = int(np.argmax(weights))
    else:
        ground = 0
    order = np.roll(np.arange(n), -ground)
    cell = TWO_PI / period_t
    energies = spectrum.phases[order] / period_t
    energies = energies[0] + np.mod(energies - energies[0], cell)
    return QuasienergyBranch(
        lam=lam,
        period_t=period_t,
        quasienergies=energies,
        eigenvalues=spectrum.eigenvalues[order],
        eigenvectors=spectrum.eigenvectors[:, order],
        order=order,
        ground_rule=ground_rule,
    )


def quasienergy_branch(u: Union[UnitaryOperator, np.ndarray], period_t: float = 1.0,
                       ground_rule: str = "lowest-phase",
                       reference: Optional[np.ndarray] = None,
                       lam: float = float("nan")) -> QuasienergyBranch:
    """Quasienergies E_n = -Im ln z_n / T ordered upward from the ground level.

    ``lowest-phase`` takes the smallest E in [0, 2pi/T) as ground;
    ``index-of-vector`` takes the level with the largest overlap with
    ``reference``.
    """
    spectrum = unitary_eigensolve(u)
    return _branch_from_spectrum(spectrum, period_t, lam, ground_rule, reference)


def level_velocity(family: FloquetFamily, lam: float, n: int) -> float:
    """dE_n/dlam = <xi_n|V|xi_n> / T, levels ordered as in ``quasienergy_branch``."""
    branch = quasienergy_branch(family.evaluate(lam), family.period_t, lam=lam)
    xi = branch.eigenvectors[:, n]
    return float(np.real(np.vdot(xi, family.kick_matrix @ xi))) / family.period_t


def eigenvector_derivative(family: FloquetFamily, lam: float, n: int,
                           gauge: Union[str, float] = "parallel") -> np.ndarray:
    """d|xi_n>/dlam from the level-dynamics sum formula.

    The component along xi_n is -i A_n xi_n; ``gauge="parallel"`` takes
    A_n = 0 (the positive-overlap gauge used by ``sweep``), a float gives
    A_n explicitly. The derivative is expressed for the eigenvector phase
    returned by the eigensolver.
    """
    branch = quasienergy_branch(family.evaluate(lam), family.period_t, lam=lam)
    xi = branch.eigenvectors
    z = branch.eigenvalues
    kick = xi.conj().T @ family.kick_matrix @ xi
    gauge_potential = 0.0 if gauge == "parallel" else float(gauge)

    coefficients = np.zeros(branch.dim, dtype=complex)
    for m in range(branch.dim):
        if m == n:
            coefficients[m] = -1j * gauge_potential
            continue
        denominator = z[m] - z[n]
        if abs(denominator) < TOL_DEG:
            raise DegenerateSpectrum(f"z_{m} and z_{n} coincide at lam={lam:.12g}",
                                     clusters=[[m, n]])
        coefficients[m] = 1j * z[m] * kick[m, n] / denominator
    return xi @ coefficients


@dataclass(frozen=True, eq=False)
class StepMatch:
    """Column assignment between two neighbouring decompositions."""

    assignment: np.ndarray
    min_overlap: float
    used_global: bool


def match_columns(left: np.ndarray, right: np.ndarray, tie_margin: float) -> StepMatch:
    """Assign every column of ``left`` to a column of ``right`` by |overlap|^2.

    Greedy row maxima are kept when they are unique and unambiguous;
    otherwise a global optimal assignment decides.
    """
    weights = np.abs(left.conj().T @ right) ** 2
    n = weights.shape[0]
    greedy = np.argmax(weights, axis=1)
    ambiguous = len(set(greedy.tolist())) < n
    if not ambiguous and n > 1:
        top_two = np.sort(weights, axis=1)[:, -2:]
        ambiguous = bool(np.any(top_two[:, 1] - top_two[:, 0] < tie_margin))
    if ambiguous:
        rows, cols = linear_sum_assignment(-weights)
        assignment = cols[np.argsort(rows)]
    else:
        assignment = greedy
    min_overlap = float(np.sqrt(np.min(weights[np.arange(n), assignment])))
    return StepMatch(assignment=assignment, min_overlap=min_overlap, used_global=ambiguous)


@dataclass(frozen=True, eq=False)
class SpectralFlow:
    """Tracked levels of a family over a lam grid.

    ``quasienergies[j, n]`` is the unwrapped E_n(lam_j); ``eigenvectors[j][:, n]``
    is xi_n(lam_j) in the parallel-transport gauge; ``step_overlaps[j, n]`` is
    the overlap of xi_n(lam_j) with the raw (not yet rephased) eigenvector at
    lam_{j+1}. ``period_indices[k]`` is the grid index of lam0 + k*Lambda.
    """

    lambdas: np.ndarray
    quasienergies: np.ndarray
    eigenvectors: np.ndarray
    step_overlaps: np.ndarray
    kick_weights: np.ndarray
    start: QuasienergyBranch
    period_t: float
    period_lambda: Optional[float]
    kick_trace: float
    lambda0: float
    cycles: int
    period_indices: List[int]
    permutation: Optional[np.ndarray]
    name: str = ""

    @property
    def dim(self) -> int:
        return self.quasienergies.shape[1]

    @property
    def steps(self) -> int:
        return len(self.lambdas) - 1

    @property
    def is_periodic(self) -> bool:
        return self.permutation is not None

    @property
    def delta_e(self) -> np.ndarray:
        """E_n(end of first period) - E_n(lam0); whole span for open sweeps."""
        end = self.period_indices[1] if self.is_periodic else -1
        return self.quasienergies[end] - self.quasienergies[0]

    def index_of(self, lam: float, atol: float = 1e-12) -> int:
        j = int(np.searchsorted(self.lambdas, lam - atol))
        if j >= len(self.lambdas) or abs(self.lambdas[j] - lam) > atol * max(1.0, abs(lam)):
            raise GridMismatch(f"lam={lam!r} is not a grid point of the flow")
        return j

    def vector(self, j: int, n: int) -> np.ndarray:
        return self.eigenvectors[j][:, n]

    def permutation_power(self, k: int) -> np.ndarray:
        if self.permutation is None:
            raise GridMismatch("Open sweeps carry no holonomy permutation")
        result = np.arange(self.dim)
        for _ in range(k):
            result = self.permutation[result]
        return result


def _refined_steps(family: FloquetFamily, grid: Sequence[float], spectra: List[UnitarySpectrum],
                   match_floor: float, tie_margin: float,
                   max_refinement: int) -> Tuple[List[float], List[UnitarySpectrum], List[StepMatch]]:
    """Match consecutive grid points, bisecting steps whose overlap is too small."""
    out_lams = [grid[0]]
    out_spectra = [spectra[0]]
    out_matches: List[StepMatch] = []

    def descend(lam_a, spec_a, lam_b, spec_b, depth):
        match = match_columns(spec_a.eigenvectors, spec_b.eigenvectors, tie_margin)
        if match.min_overlap >= match_floor:
            out_lams.append(lam_b)
            out_spectra.append(spec_b)
            out_matches.append(match)
            return
        if depth >= max_refinement:
            raise TrackingAmbiguity(
                f"Best overlap {match.min_overlap:.4f} below {match_floor} near lam={lam_a:.12g} "
                f"after {depth} refinements; increase steps",
                lam=lam_a, best_overlap=match.min_overlap,
            )
        lam_m = 0.5 * (lam_a + lam_b)
        spec_m = _spectrum_at(family, lam_m)
        logger.debug(f"Refining step at lam={lam_a:.6g} (overlap {match.min_overlap:.4f})")
        descend(lam_a, spec_a, lam_m, spec_m, depth + 1)
        descend(lam_m, spec_m, lam_b, spec_b, depth + 1)

    for j in range(len(grid) - 1):
        descend(grid[j], spectra[j], grid[j + 1], spectra[j + 1], 0)
    return out_lams, out_spectra, out_matches


def _spectrum_at(family: FloquetFamily, lam: float) -> UnitarySpectrum:
    spectrum = family.evaluate(lam).spectrum
    _check_nondegenerate(spectrum, lam)
    return spectrum


def sweep(family: FloquetFamily, lambda0: float = 0.0, steps: Optional[int] = None,
          cycles: int = 1, span: Optional[float] = None,
          ground_rule: str = "lowest-phase", reference: Optional[np.ndarray] = None,
          match_floor: Optional[float] = None, tie_margin: Optional[float] = None,
          max_refinement: Optional[int] = None) -> SpectralFlow:
    """Continue all levels over ``cycles`` periods (or over an open ``span``).

    ``steps`` counts grid steps per period (per span for open sweeps).
    Steps whose best overlap falls below ``match_floor`` are bisected up to
    ``max_refinement`` times before ``TrackingAmbiguity`` is raised.
    """
    steps = settings.default_steps if steps is None else int(steps)
    match_floor = settings.match_floor if match_floor is None else match_floor
    tie_margin = settings.tie_margin if tie_margin is None else tie_margin
    max_refinement = settings.max_refinement if max_refinement is None else max_refinement
    if steps < 1:
        raise GridMismatch(f"Need at least one step, got {steps}")

    periodic = span is None
    if periodic:
        if family.period_lambda is None:
            raise GridMismatch("Family has no declared period; pass an explicit span")
        if cycles < 1:
            raise GridMismatch(f"Need at least one cycle, got {cycles}")
        if steps < 2:
            # one step would compare the start decomposition with itself
            raise GridMismatch(f"A periodic sweep needs at least two steps per period, got {steps}")
        base_span = family.period_lambda
    else:
        base_span = float(span)
        cycles = 1

    grid = [lambda0 + base_span * j / steps for j in range(steps + 1)]
    spectra = [_spectrum_at(family, lam) for lam in (grid[:-1] if periodic else grid)]
    if periodic:
        # U(lam0 + Lambda) = U(lam0): the period end reuses the start decomposition
        spectra.append(spectra[0])
    lams, step_spectra, matches = _refined_steps(
        family, grid, spectra, match_floor, tie_margin, max_refinement
    )
    refined = len(lams) - len(grid)
    if refined:
        logger.warning(f"Refined {refined} grid points to keep overlaps above {match_floor}")

    start = _branch_from_spectrum(spectra[0], family.period_t, lambda0, ground_rule, reference)
    n = start.dim
    cell = TWO_PI / family.period_t
    kick = family.kick_matrix

    total = cycles * len(matches)
    lambdas = np.empty(total + 1)
    energies = np.empty((total + 1, n))
    vectors = np.empty((total + 1, n, n), dtype=complex)
    overlaps = np.empty((total, n), dtype=complex)
    weights = np.empty((total + 1, n))

    columns = start.order.copy()
    current = start.eigenvectors.copy()
    lambdas[0] = lambda0
    energies[0] = start.quasienergies
    vectors[0] = current
    weights[0] = np.real(np.einsum("in,ij,jn->n", current.conj(), kick, current))
    period_indices = [0]

    j = 0
    for cycle in range(cycles):
        offset = cycle * base_span
        for k, match in enumerate(matches):
            spectrum = step_spectra[k + 1]
            columns = match.assignment[columns]
            raw = spectrum.eigenvectors[:, columns]
            ov = np.einsum("in,in->n", current.conj(), raw)
            current = raw * (np.conj(ov) / np.abs(ov))
            raw_energies = spectrum.phases[columns] / family.period_t
            energies[j + 1] = energies[j] + wrap_symmetric(raw_energies - energies[j], cell)
            lambdas[j + 1] = lams[k + 1] + offset
            vectors[j + 1] = current
            overlaps[j] = ov
            weights[j + 1] = np.real(np.einsum("in,ij,jn->n", current.conj(), kick, current))
            j += 1
        period_indices.append(j)

    permutation = None
    if periodic:
        end_columns = _columns_at(start, matches, cycles=1)
        position = {int(col): level for level, col in enumerate(start.order)}
        permutation = np.array([position[int(col)] for col in end_columns])
        logger.info(f"Sweep of {family.name or 'family'}: permutation {format_permutation(permutation)}")

    return SpectralFlow(
        lambdas=lambdas,
        quasienergies=energies,
        eigenvectors=vectors,
        step_overlaps=overlaps,
        kick_weights=weights,
        start=start,
        period_t=family.period_t,
        period_lambda=family.period_lambda if periodic else None,
        kick_trace=family.kick_trace,
        lambda0=lambda0,
        cycles=cycles,
        period_indices=period_indices if periodic else [0, total],
        permutation=permutation,
        name=family.name,
    )


def _columns_at(start: QuasienergyBranch, matches: List[StepMatch], cycles: int) -> np.ndarray:
    columns = start.order.copy()
    for _ in range(cycles):
        for match in matches:
            columns = match.assignment[columns]
    return columns


def format_permutation(permutation: Sequence[int]) -> str:
    """Cycle notation with fixed points, e.g. ``(0 2 4)(1)(3)``."""
    permutation = [int(p) for p in permutation]
    seen = set()
    parts = []
    for start in range(len(permutation)):
        if start in seen:
            continue
        cycle = [start]
        seen.add(start)
        nxt = permutation[start]
        while nxt != start:
            cycle.append(nxt)
            seen.add(nxt)
            nxt = permutation[nxt]
        parts.append("(" + " ".join(str(c) for c in cycle) + ")")
    return "".join(parts)


def integrated_delta_e(flow: SpectralFlow) -> np.ndarray:
    """Delta E_n by trapezoidal integration of the level velocity over the first period."""
    end = flow.period_indices[1]
    return trapezoid(flow.kick_weights[: end + 1] / flow.period_t, flow.lambdas[: end + 1], axis=0)


def orbifold_path(flow: SpectralFlow) -> np.ndarray:
    """Two-level trajectory folded into the cell, unordered pair as (low, high)."""
    if flow.dim != 2:
        raise GridMismatch(f"Orbifold path is defined for two levels, flow has {flow.dim}")
    folded = np.mod(flow.quasienergies, TWO_PI / flow.period_t)
    return np.sort(folded, axis=1)


def minimum_gap(flow: SpectralFlow) -> Tuple[float, float]:
    """Smallest quasienergy spacing on the circle over the grid, and where it occurs."""
    cell = TWO_PI / flow.period_t
    if flow.dim == 1:
        return cell, float(flow.lambdas[0])
    folded = np.sort(np.mod(flow.quasienergies, cell), axis=1)
    spacings = np.diff(folded, axis=1)
    wrap_around = folded[:, 0] + cell - folded[:, -1]
    gaps = np.minimum(spacings.min(axis=1), wrap_around)
    j = int(np.argmin(gaps))
    return float(gaps[j]), float(flow.lambdas[j])
