"""Randomized and exhaustive catalyst search.

The standard-catalyst question (does some chi satisfy
psi ⊗ chi ≺ phi ⊗ chi?) has no known closed form, so it is attacked by
Monte Carlo: draw chi uniformly from the ordered probability simplex,
merge the product spectra, test the prefix inequalities, repeat up to a
trial budget.  Success is certified (the catalyst is re-verified through
the merge path); failure is one-sided evidence only.  The general-catalyst
question, by contrast, is decided exactly with a maximally entangled
ancilla.

Determinism contract: a search outcome depends only on
(seed, k, big_number, query).  Trials are indexed 0..M-1; candidate i
lives in block i // TRIAL_BLOCK, drawn from substream (seed, block), and
a success always reports the lowest feasible index, so the result is
identical for any worker count and any evaluation batch size, and success
at budget M implies success at every larger budget.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .catalysis import TransformQuery, locc_feasible
from .core import (
    DEFAULT_TOL,
    OscVector,
    Relation,
    Tolerance,
    majorizes_check,
    padded_array,
    tensor_spectrum,
)
from .errors import DomainError
from .rng import CTX_TRIALS, substream

__all__ = [
    "TRIAL_BLOCK",
    "SearchStatus",
    "SearchConfig",
    "SearchOutcome",
    "sample_sorted_simplex",
    "general_catalyst_exists",
    "monte_carlo_standard_catalyst",
    "exhaustive_catalyst_oracle",
]

# Trials per RNG substream.  Fixed: changing it would change the candidate
# sequence and hence search outcomes.
TRIAL_BLOCK = 4096

# Rows per evaluation batch are capped so the working set stays cache-sized;
# this affects speed only, never verdicts.
_EVAL_CHUNK_ELEMS = 1 << 16

_FEASIBLE = (Relation.MAJORIZED_BY, Relation.EQUIVALENT)


class SearchStatus(Enum):
    SUCCESS = "success"
    FAILURE = "failure"


@dataclass(frozen=True)
class SearchConfig:
    """Parameters of one Monte Carlo run: catalyst dimension k, trial budget
    (the algorithm's "big number"), RNG seed, and comparison tolerances."""

    k: int
    big_number: int
    seed: int
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError("catalyst dimension k must be >= 1")
        if self.big_number < 1:
            raise ValueError("trial budget must be >= 1")
        object.__setattr__(self, "seed", int(self.seed) & ((1 << 64) - 1))


@dataclass(frozen=True)
class SearchOutcome:
    """Search result.  SUCCESS carries the verified catalyst and the number
    of trials consumed (success index + 1); FAILURE used the full budget."""

    status: SearchStatus
    catalyst: Optional[OscVector]
    trials_used: int
    seed: int


def sample_sorted_simplex(k: int, rng: np.random.Generator) -> OscVector:
    """One draw from the uniform (flat Dirichlet) distribution on the
    (k-1)-simplex, sorted nonincreasing.

    Uses the exponential trick: k unit exponentials normalized by their sum.
    Consumes exactly k uniforms from ``rng``, so batched draws reproduce
    repeated calls on the same stream.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    return OscVector(tuple(float(v) for v in _sorted_simplex_rows(rng, 1, k)[0]))


def _sorted_simplex_rows(rng: np.random.Generator, rows: int, k: int) -> np.ndarray:
    u = rng.random((rows, k))
    e = -np.log1p(-u)
    s = e.sum(axis=1)
    zero = s <= 0.0
    if zero.any():  # every uniform hit 0.0; fall back to the flat point
        e[zero] = 1.0
        s = e.sum(axis=1)
    x = e / s[:, None]
    x.sort(axis=1)
    return x[:, ::-1]


def _assisted_rows_ok(
    src: np.ndarray, dst: np.ndarray, chis: np.ndarray, eps: float
) -> np.ndarray:
    """Row-wise test of spectrum(src_i ⊗ chi_i) ≺ spectrum(dst_i ⊗ chi_i).

    ``src`` and ``dst`` are (B, n) state batches (broadcast a single state
    with np.broadcast_to); ``chis`` is (B, k).  Sorting the product batch
    gives exactly the merge-path spectra, so verdicts are bit-identical.
    """
    nrows = chis.shape[0]
    lhs = (src[:, :, None] * chis[:, None, :]).reshape(nrows, -1)
    lhs.sort(axis=1)
    clhs = np.cumsum(lhs[:, ::-1], axis=1)
    rhs = (dst[:, :, None] * chis[:, None, :]).reshape(nrows, -1)
    rhs.sort(axis=1)
    crhs = np.cumsum(rhs[:, ::-1], axis=1)
    return (clhs <= crhs + eps).all(axis=1)


def _first_feasible_row(
    psi: np.ndarray, phi: np.ndarray, chis: np.ndarray, eps: float
) -> Optional[int]:
    """Index of the first row of ``chis`` that is a standard catalyst."""
    n = psi.shape[0]
    chunk = max(64, _EVAL_CHUNK_ELEMS // (n * chis.shape[1]))
    for off in range(0, chis.shape[0], chunk):
        part = chis[off : off + chunk]
        src = np.broadcast_to(psi, (part.shape[0], n))
        dst = np.broadcast_to(phi, (part.shape[0], n))
        ok = _assisted_rows_ok(src, dst, part, eps)
        hits = np.flatnonzero(ok)
        if hits.size:
            return off + int(hits[0])
    return None


def _verify_standard(q: TransformQuery, chi: OscVector, tol: Tolerance) -> None:
    """Re-verify a found catalyst through the canonical merge path."""
    verdict = majorizes_check(tensor_spectrum(q.psi, chi), tensor_spectrum(q.phi, chi), tol)
    if verdict.relation not in _FEASIBLE:
        raise RuntimeError("internal: batched verdict disagrees with the merge path")


def general_catalyst_exists(q: TransformQuery, k: int, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Decide whether *any* k x k general catalyst exists for psi -> phi.

    It suffices to test a maximally entangled ancilla with complete
    consumption: psi ⊗ (1/k, ..., 1/k) ≺ phi (zero-padded).  For k >= n the
    answer is always yes (a maximally entangled state converts to
    everything of its dimension).  For k < n, only the first n - 1 prefix
    inequalities can bind, because the target's partial sums reach 1 at
    index n; only those are evaluated.
    """
    if k < 1:
        raise DomainError("catalyst dimension k must be >= 1")
    if locc_feasible(q, tol):
        return True
    n = q.dim
    if k >= n:
        return True
    psi = padded_array(q.psi, n)
    psi_cum = np.concatenate(([0.0], np.cumsum(psi)))
    phi_cum = np.cumsum(padded_array(q.phi, n))
    for l in range(1, n):
        full, rem = divmod(l, k)
        top = psi_cum[full] + psi[full] * rem / k
        if top > phi_cum[l - 1] + tol.eps_major:
            return False
    return True


def monte_carlo_standard_catalyst(
    q: TransformQuery, cfg: SearchConfig, workers: int = 1
) -> SearchOutcome:
    """Randomized search for a k x k standard catalyst.

    Draws up to ``cfg.big_number`` candidates from the sorted flat-Dirichlet
    distribution and returns the first chi with
    psi ⊗ chi ≺ phi ⊗ chi, re-verified through the merge path.  FAILURE
    after the full budget is evidence, not proof: the algorithm has a
    one-sided false-negative probability that shrinks as the budget grows.

    ``workers`` > 1 evaluates trial blocks on a thread pool; the outcome is
    identical to the sequential run by the lowest-index rule.
    """
    tol = cfg.tol
    if locc_feasible(q, tol):
        raise DomainError("transformation needs no catalyst; it is already feasible")
    n = q.dim
    psi = padded_array(q.psi, n)
    phi = padded_array(q.phi, n)
    big_m = cfg.big_number
    nblocks = math.ceil(big_m / TRIAL_BLOCK)

    def scan_block(block: int) -> Optional[tuple[int, np.ndarray]]:
        start = block * TRIAL_BLOCK
        rows = min(TRIAL_BLOCK, big_m - start)
        chis = _sorted_simplex_rows(substream(cfg.seed, CTX_TRIALS, block), rows, cfg.k)
        hit = _first_feasible_row(psi, phi, chis, tol.eps_major)
        if hit is None:
            return None
        return start + hit, chis[hit].copy()

    found: Optional[tuple[int, np.ndarray]] = None
    if workers <= 1 or nblocks == 1:
        for block in range(nblocks):
            found = scan_block(block)
            if found is not None:
                break
    else:
        executor = ThreadPoolExecutor(max_workers=workers)
        try:
            futures = [executor.submit(scan_block, b) for b in range(nblocks)]
            for future in futures:  # submission order == block order
                result = future.result()
                if result is not None:
                    found = result
                    break
        finally:
            executor.shutdown(wait=True, cancel_futures=True)

    if found is None:
        return SearchOutcome(SearchStatus.FAILURE, None, big_m, cfg.seed)
    index, row = found
    catalyst = OscVector(tuple(float(v) for v in row))
    _verify_standard(q, catalyst, tol)
    return SearchOutcome(SearchStatus.SUCCESS, catalyst, index + 1, cfg.seed)


def _scan_candidates(
    q: TransformQuery,
    batches,
    tol: Tolerance,
) -> Optional[OscVector]:
    """Evaluate candidate batches in order; return the first verified hit."""
    n = q.dim
    psi = padded_array(q.psi, n)
    phi = padded_array(q.phi, n)
    for batch in batches():
        hit = _first_feasible_row(psi, phi, batch, tol.eps_major)
        if hit is not None:
            catalyst = OscVector(tuple(float(v) for v in batch[hit]))
            _verify_standard(q, catalyst, tol)
            return catalyst
    return None


def exhaustive_catalyst_oracle(
    q: TransformQuery, k: int, step: float, tol: Tolerance = DEFAULT_TOL
) -> Optional[OscVector]:
    """Grid enumeration of the sorted simplex; ground truth for small runs.

    Scans lattice points at the given step in lexicographic order (top
    coefficient ascending) and returns the first standard catalyst found,
    or None when the whole grid fails.  Only k = 2 and k = 3 are supported;
    this is a test oracle, not a production search.
    """
    if k not in (2, 3):
        raise DomainError("oracle supports k = 2 or k = 3 only")
    if not 1e-5 <= step <= 0.1:
        raise DomainError(f"step must lie in [1e-5, 0.1], got {step!r}")
    if locc_feasible(q, tol):
        raise DomainError("transformation needs no catalyst; it is already feasible")

    if k == 2:

        def batches():
            count = int(math.floor(0.5 / step + 1e-9)) + 1
            x1 = 0.5 + np.arange(count, dtype=np.float64) * step
            x1 = x1[x1 <= 1.0 + 1e-12]
            yield np.stack([x1, 1.0 - x1], axis=1)

    else:

        def batches():
            i_lo = int(math.ceil(1.0 / (3.0 * step) - 1e-9))
            i_hi = int(math.floor(1.0 / step + 1e-9))
            for i in range(i_lo, i_hi + 1):
                x1 = i * step
                j_lo = int(math.ceil((1.0 - x1) / (2.0 * step) - 1e-9))
                j_hi = min(i, int(math.floor((1.0 - x1) / step + 1e-9)))
                if j_hi < j_lo:
                    continue
                x2 = np.arange(j_lo, j_hi + 1, dtype=np.float64) * step
                x3 = np.maximum(1.0 - x1 - x2, 0.0)
                yield np.stack([np.full_like(x2, x1), x2, x3], axis=1)

    return _scan_candidates(q, batches, tol)
