"""Catalyst-assisted LOCC transformations.

A transformation psi -> phi that Nielsen's criterion forbids can become
feasible with an ancilla: psi ⊗ chi ≺ phi ⊗ chi' for some residual chi'.
``chi`` is a *general* catalyst when any residual is allowed, *standard*
when chi' = chi, a *supercatalyst* when the residual gained entanglement
and a *subcatalyst* when some catalyst entanglement was consumed.  This
module implements the feasibility predicates, the closed-form conditions
known for small dimensions, catalyst classification, time-reverse
detection, and the mutual-catalysis region scan.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    DEFAULT_TOL,
    CatalystClass,
    CatalystKind,
    OscVector,
    Relation,
    Tolerance,
    entropy_bits,
    majorizes_check,
    padded_array,
    tensor_spectrum,
)
from .errors import DegenerateTarget, DomainError, NotACatalyst

__all__ = [
    "TransformQuery",
    "CatalystReport",
    "RegionGrid",
    "locc_feasible",
    "is_general_catalyst",
    "general_catalyst_2x2",
    "min_residual_2x2",
    "catalyst_bound_3x3",
    "subcatalyst_forced",
    "no_standard_catalyst_2xn",
    "general_catalyst_2to3",
    "classify_catalyst",
    "is_time_reverse",
    "mutual_region_scan",
    "mutual_demo_inequalities",
]

_FEASIBLE = (Relation.MAJORIZED_BY, Relation.EQUIVALENT)


@dataclass(frozen=True)
class TransformQuery:
    """A source/target pair of state spectra."""

    psi: OscVector
    phi: OscVector

    @property
    def dim(self) -> int:
        """Common padded length of the two spectra."""
        return max(len(self.psi), len(self.phi))


@dataclass(frozen=True)
class CatalystReport:
    """Outcome of asking whether a given ancilla catalyzes a transformation.

    ``residual`` is the witness chi' actually used; ``classification`` is
    computed against that witness.  Both are present exactly when feasible.
    """

    feasible: bool
    classification: CatalystClass | None = None
    residual: OscVector | None = None


@dataclass(frozen=True, eq=False)
class RegionGrid:
    """Rasterized feasibility region over residual parameters (x1', x2').

    ``cells[i, j]`` covers the half-open square
    [i/res, (i+1)/res) x [j/res, (j+1)/res) and is evaluated at its center.
    ``constraint_mask`` marks cells whose center is a valid ordered simplex
    point (x1' >= x2' >= x3' >= 0 with x3' = 1 - x1' - x2'); feasible cells
    are always a subset of valid ones.
    """

    resolution: int
    cells: np.ndarray
    constraint_mask: np.ndarray

    def cell_index(self, x1p: float, x2p: float) -> tuple[int, int]:
        i = min(int(x1p * self.resolution), self.resolution - 1)
        j = min(int(x2p * self.resolution), self.resolution - 1)
        return i, j

    def cell_center(self, i: int, j: int) -> tuple[float, float]:
        return (i + 0.5) / self.resolution, (j + 0.5) / self.resolution

    def feasible_at(self, x1p: float, x2p: float) -> bool:
        return bool(self.cells[self.cell_index(x1p, x2p)])

    @property
    def feasible_count(self) -> int:
        return int(self.cells.sum())

    @property
    def valid_count(self) -> int:
        return int(self.constraint_mask.sum())


def locc_feasible(q: TransformQuery, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Deterministic LOCC convertibility psi -> phi (Nielsen's criterion)."""
    return majorizes_check(q.psi, q.phi, tol).relation in _FEASIBLE


def is_general_catalyst(
    q: TransformQuery, chi: OscVector, tol: Tolerance = DEFAULT_TOL
) -> CatalystReport:
    """Does ``chi`` enable psi -> phi for *some* residual chi'?

    Complete consumption is without loss of generality: any residual chi'
    is majorized by the separable spectrum, so psi ⊗ chi ≺ phi ⊗ chi'
    for some chi' iff psi ⊗ chi ≺ phi padded with zeros.  The report
    therefore carries the separable witness; tighter residuals come from
    :func:`min_residual_2x2` or :func:`mutual_region_scan`.
    """
    product = tensor_spectrum(q.psi, chi)
    verdict = majorizes_check(product, q.phi, tol)
    if verdict.relation not in _FEASIBLE:
        return CatalystReport(feasible=False)
    witness = OscVector.separable(len(chi))
    classification = classify_catalyst(q, chi, witness, tol)
    return CatalystReport(feasible=True, classification=classification, residual=witness)


def _require_2x2_blocked(q: TransformQuery, tol: Tolerance) -> None:
    if len(q.psi) != 2 or len(q.phi) != 2:
        raise DomainError("both spectra must have length 2")
    if locc_feasible(q, tol):
        raise DomainError("transformation is already feasible without a catalyst")


def _check_x_range(x: float) -> None:
    if not 0.5 <= x <= 1.0:
        raise DomainError(f"top coefficient x must lie in [0.5, 1], got {x!r}")


def general_catalyst_2x2(q: TransformQuery, x: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Exact condition for (x, 1-x) to be a general catalyst of a 2x2 pair.

    For blocked 2x2 transformations (alpha1 > beta1) the single decisive
    majorization inequality is alpha1 * x <= beta1, i.e. x <= beta1/alpha1.
    Agrees with :func:`is_general_catalyst` on (x, 1-x) by construction.
    """
    _require_2x2_blocked(q, tol)
    _check_x_range(x)
    return x <= q.phi[0] / q.psi[0] + tol.eps_major


def min_residual_2x2(q: TransformQuery, x: float, tol: Tolerance = DEFAULT_TOL) -> float:
    """Smallest feasible residual top coefficient x' for a 2x2 catalyst (x, 1-x).

    With psi = (a1, a2), phi = (b1, b2) and a feasible x, the residual
    constraints reduce to
        x' >= (a1/b1) x,   x' >= 1 - (a2/b2)(1-x),
    plus x' >= a1 when x < a1 (the product spectrum changes order there).
    The returned x' always exceeds x: consuming entanglement is unavoidable
    for blocked 2x2 pairs, so the minimal residual is a subcatalyst residual.
    """
    if len(q.psi) != 2 or len(q.phi) != 2:
        raise DomainError("both spectra must have length 2")
    if q.phi[1] <= 0.0:
        raise DegenerateTarget("target (1, 0) admits every source; no residual bound")
    _require_2x2_blocked(q, tol)
    _check_x_range(x)
    if not general_catalyst_2x2(q, x, tol):
        raise DomainError(f"(x, 1-x) with x={x!r} is not a catalyst for this pair")
    a1, a2 = q.psi[0], q.psi[1]
    b1, b2 = q.phi[0], q.phi[1]
    bound = max(a1 / b1 * x, 1.0 - a2 / b2 * (1.0 - x))
    if x < a1:
        bound = max(bound, a1)
    return bound


def catalyst_bound_3x3(q: TransformQuery, tol: Tolerance = DEFAULT_TOL) -> float:
    """Top-coefficient threshold below which *every* ancilla catalyzes a 3x3 pair.

    For incomparable 3x3 spectra, any chi (of any dimension) with
    chi[0] <= min(beta1/alpha1, (beta1+beta2)/(alpha1+alpha2)) is a general
    catalyst: with complete consumption only the first two prefix
    inequalities of the product spectrum bind, and incomparability makes
    beta1 + beta2 > alpha1 so the remaining constraint is automatic.
    """
    if len(q.psi) != 3 or len(q.phi) != 3:
        raise DomainError("both spectra must have length 3")
    if majorizes_check(q.psi, q.phi, tol).relation is not Relation.INCOMPARABLE:
        raise DomainError("spectra must be incomparable")
    a1, a2 = q.psi[0], q.psi[1]
    b1, b2 = q.phi[0], q.phi[1]
    return min(b1 / a1, (b1 + b2) / (a1 + a2))


def subcatalyst_forced(
    q: TransformQuery,
    chi: OscVector,
    chi_prime: OscVector,
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """Must every 2- or 3-dim catalyst of this pair consume entanglement?

    True when alpha1 > beta1 and alpha_n < beta_n (n the common padded
    length, entries compared literally, trailing zeros included): the top
    product inequality then forces chi strictly below chi' in the
    majorization order, so E(chi) > E(chi').  False means only that this
    criterion is silent, not that a standard catalyst exists.
    """
    if len(chi) != len(chi_prime) or len(chi) not in (2, 3):
        raise DomainError("chi and chi' must both have length 2 or both length 3")
    lhs = tensor_spectrum(q.psi, chi)
    rhs = tensor_spectrum(q.phi, chi_prime)
    if majorizes_check(lhs, rhs, tol).relation not in _FEASIBLE:
        raise NotACatalyst("psi ⊗ chi does not convert to phi ⊗ chi'")
    n = q.dim
    a = padded_array(q.psi, n)
    b = padded_array(q.phi, n)
    if not (a[0] > b[0] and a[n - 1] < b[n - 1]):
        return False
    witness = majorizes_check(chi, chi_prime, tol)
    if witness.relation is not Relation.MAJORIZED_BY:
        raise RuntimeError(
            "internal inconsistency: hypothesis held but chi is not strictly "
            f"majorized by chi' (got {witness.relation})"
        )
    return True


def no_standard_catalyst_2xn(q: TransformQuery, tol: Tolerance = DEFAULT_TOL) -> bool:
    """No-go for blocked transformations out of a two-level source.

    For a 2-dim psi with psi not convertible to phi, no standard catalyst or
    supercatalyst exists: majorization of the product spectra would force
    E(psi) >= E(phi), and for two-level sources that already implies direct
    convertibility.  Always returns True under its preconditions; useful as
    a hard filter before a Monte Carlo search.
    """
    if len(q.psi) != 2:
        raise DomainError("source spectrum must have length 2")
    if locc_feasible(q, tol):
        raise DomainError("transformation is already feasible without a catalyst")
    return True


def general_catalyst_2to3(q: TransformQuery, x: float, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Exact condition for (x, 1-x) to catalyze a 2-dim -> 3-dim transformation.

    No standard catalyst can exist across unequal dimensions, so the ancilla
    is consumed completely and feasibility reduces to
        alpha1 <= beta1 + beta2   and   x <= min(beta1/alpha1, beta1 + beta2).
    """
    if len(q.psi) != 2 or len(q.phi) != 3:
        raise DomainError("expected a 2-dim source and a 3-dim target")
    if locc_feasible(q, tol):
        raise DomainError("transformation is already feasible without a catalyst")
    _check_x_range(x)
    a1 = q.psi[0]
    b1, b2 = q.phi[0], q.phi[1]
    eps = tol.eps_major
    return a1 <= b1 + b2 + eps and x <= min(b1 / a1, b1 + b2) + eps


def _spectra_match(lhs: OscVector, rhs: OscVector, eps: float) -> bool:
    n = max(len(lhs), len(rhs))
    return bool(np.all(np.abs(padded_array(lhs, n) - padded_array(rhs, n)) <= eps))


def is_time_reverse(
    q: TransformQuery,
    chi: OscVector,
    chi_prime: OscVector,
    tol: Tolerance = DEFAULT_TOL,
) -> bool:
    """True iff the spectra of psi ⊗ chi and phi ⊗ chi' coincide elementwise.

    Coinciding product spectra make the assisted transformation reversible:
    each side converts to the other under LOCC.
    """
    lhs = tensor_spectrum(q.psi, chi)
    rhs = tensor_spectrum(q.phi, chi_prime)
    return _spectra_match(lhs, rhs, tol.eps_major)


def classify_catalyst(
    q: TransformQuery,
    chi: OscVector,
    chi_prime: OscVector,
    tol: Tolerance = DEFAULT_TOL,
) -> CatalystClass:
    """Classify a feasible (chi, chi') pair by the residual's entropy change.

    Equal entropies (within ``tol.eps_entropy``) give STANDARD, a drop gives
    SUB, a rise gives SUPER.  Identical product spectra are reported as
    TIME_REVERSE, which subsumes the entropy label; the label stays
    recoverable from the stored entropies via ``entropy_label``.
    """
    lhs = tensor_spectrum(q.psi, chi)
    rhs = tensor_spectrum(q.phi, chi_prime)
    if majorizes_check(lhs, rhs, tol).relation not in _FEASIBLE:
        raise NotACatalyst("psi ⊗ chi does not convert to phi ⊗ chi'")
    before = entropy_bits(chi)
    after = entropy_bits(chi_prime)
    if _spectra_match(lhs, rhs, tol.eps_major):
        kind = CatalystKind.TIME_REVERSE
    elif abs(before - after) <= tol.eps_entropy:
        kind = CatalystKind.STANDARD
    elif before > after:
        kind = CatalystKind.SUB
    else:
        kind = CatalystKind.SUPER
    return CatalystClass(kind=kind, entropy_before=before, entropy_after=after)


def mutual_region_scan(
    psi: OscVector,
    phi: OscVector,
    chi: OscVector,
    resolution: int = 1000,
    tol: Tolerance = DEFAULT_TOL,
) -> RegionGrid:
    """Scan the residual simplex for feasibility of psi ⊗ chi -> phi ⊗ chi'.

    For each grid cell (x1', x2') with x3' = 1 - x1' - x2', the cell is
    valid iff x1' >= x2' >= x3' >= 0 and feasible iff additionally
    psi ⊗ chi ≺ phi ⊗ (x1', x2', x3').  Direct majorization of the product
    spectra is the ground truth; closed-form inequality systems such as
    :func:`mutual_demo_inequalities` are cross-checks for specific inputs.

    Cells are evaluated in bulk with a batched sort, which yields bitwise
    the same verdict as the per-cell merge path (equal product multisets
    sort identically).
    """
    if len(psi) != 3 or len(phi) != 3 or len(chi) != 3:
        raise DomainError("psi, phi and chi must all have length 3")
    if resolution < 1:
        raise DomainError("resolution must be >= 1")
    lhs = tensor_spectrum(psi, chi)
    clhs = np.cumsum(lhs.as_array())

    centers = (np.arange(resolution, dtype=np.float64) + 0.5) / resolution
    x1 = centers[:, None]
    x2 = centers[None, :]
    x3 = 1.0 - x1 - x2
    valid = (x1 >= x2) & (x2 >= x3) & (x3 >= 0.0)

    cells = np.zeros((resolution, resolution), dtype=bool)
    ii, jj = np.nonzero(valid)
    if ii.size:
        residuals = np.stack(
            [centers[ii], centers[jj], 1.0 - centers[ii] - centers[jj]], axis=1
        )
        phi_arr = phi.as_array()
        prods = (residuals[:, None, :] * phi_arr[None, :, None]).reshape(ii.size, 9)
        prods.sort(axis=1)
        crhs = np.cumsum(prods[:, ::-1], axis=1)
        cells[ii, jj] = np.all(clhs[None, :] <= crhs + tol.eps_major, axis=1)
    return RegionGrid(resolution=resolution, cells=cells, constraint_mask=valid)


def mutual_demo_inequalities(x1p: float, x2p: float) -> bool:
    """Hard-coded inequality system for the bundled mutual-catalysis demo.

    Specialization of the residual feasibility system to the demo instance
    psi = (0.5, 0.26, 0.24), phi = (0.49, 0.48, 0.03), chi = (0.62, 0.3, 0.08):
    three binding prefix inequalities, three ordering assumptions on the
    residual products, and a strict cap x1' + x2' < 0.92 that keeps the
    (chi, chi') pair incomparable.  Evaluated exactly, with no tolerance.
    """
    return (
        x1p >= 31.0 / 49.0
        and 0.97 * x1p + 0.49 * x2p >= 0.6212
        and 0.97 * (x1p + x2p) >= 0.77
        and 0.48 * x1p >= 0.49 * x2p
        and 0.49 * x1p + 0.97 * x2p >= 0.49
        and 17.0 * x1p + 16.0 * x2p <= 16.0
        and x1p + x2p < 0.92
    )
