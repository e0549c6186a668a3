"""Charge-sector computation engine for large mode windows.

The full Fock dimension 2^(2M+1) is out of reach for dense operators past
M = 8, but every operator in the exchange measurements is graded by charge:
bilinears conserve it, the shift implementer raises it by one, diagonal
phases preserve it.  Working inside fixed-charge sectors keeps the state
blocks at binomial size and lets exp(i t dG(A)) run as a Chebyshev series
of sparse matrix products with exact spectral enclosure.

The enclosure uses that charge fixes the occupancy of the diagonalized
window modes: on a charge-q sector the spectrum of dG(A) is exactly the set
of (q + n_minus)-subset sums of the eigenvalues of the window matrix A,
shifted by the normal-ordering constant.
"""

from __future__ import annotations

from collections import OrderedDict
from typing import Callable, Hashable

import numpy as np
import scipy.sparse as sp
from scipy.special import jv

from .errors import ConvergenceFailure, NotHermitian, SectorEmpty
from .fock import FockBasis, psi_bilinear_coo
from .modes import ModeWindow, OneParticleOperator


def _bessel_degree(z: float, tol: float, degree_cap: int) -> int:
    degree = int(abs(z) + 8.0 * abs(z) ** 0.5 + 40)
    while abs(jv(degree, z)) >= tol * 1e-3:
        degree = int(degree * 1.4) + 20
        if degree > degree_cap:
            raise ConvergenceFailure(
                f"Chebyshev degree cap {degree_cap} exceeded for |z|={abs(z):.3g}"
            )
    return degree


def chebyshev_expi_multi_apply(
    h_csr: sp.csr_matrix | None,
    ts: list[float],
    emin: float,
    emax: float,
    block: np.ndarray,
    tol: float = 1e-12,
    degree_cap: int = 100_000,
) -> list[np.ndarray]:
    """exp(i t H) block for every t in ts, sharing one polynomial sweep.

    Jacobi-Anger expansion in Chebyshev polynomials of the affinely
    rescaled operator; Bessel coefficients decay superexponentially once
    the order passes |t| (emax - emin) / 2, giving a certified truncation.
    The polynomial recursion depends only on the operator and the block,
    so all t values ride the same matvec sequence with their own Bessel
    weights; cost is set by max |t|.
    """
    block = np.asarray(block, dtype=complex)
    center = 0.5 * (emax + emin)
    radius = 0.5 * (emax - emin)
    out: list[np.ndarray | None] = [None] * len(ts)
    degrees: dict[int, int] = {}
    for j, t in enumerate(ts):
        if t == 0.0:
            out[j] = block.copy()
        elif abs(t * radius) < 1e-14:
            out[j] = np.exp(1j * t * center) * block
        else:
            degrees[j] = _bessel_degree(t * radius, tol, degree_cap)
    if not degrees:
        return out  # type: ignore[return-value]
    degree = max(degrees.values())
    orders = np.arange(degree + 1)
    signs = 2.0 * np.power(1j, orders % 4)
    coeffs = {j: signs * jv(orders, ts[j] * radius) for j in degrees}
    for c in coeffs.values():
        c[0] *= 0.5

    def rescaled(x: np.ndarray) -> np.ndarray:
        return (h_csr @ x - center * x) / radius

    t_prev = block
    t_cur = rescaled(block)
    accs = {j: coeffs[j][0] * t_prev + coeffs[j][1] * t_cur for j in degrees}
    for k in range(2, degree + 1):
        t_next = 2.0 * rescaled(t_cur) - t_prev
        for j, kmax in degrees.items():
            if k <= kmax:
                accs[j] += coeffs[j][k] * t_next
        t_prev, t_cur = t_cur, t_next
    for j in degrees:
        out[j] = np.exp(1j * ts[j] * center) * accs[j]
    return out  # type: ignore[return-value]


def chebyshev_expi_apply(
    h_csr: sp.csr_matrix,
    t: float,
    emin: float,
    emax: float,
    block: np.ndarray,
    tol: float = 1e-12,
    degree_cap: int = 100_000,
) -> np.ndarray:
    """exp(i t H) block for Hermitian H with spectrum inside [emin, emax]."""
    return chebyshev_expi_multi_apply(
        h_csr, [t], emin, emax, block, tol=tol, degree_cap=degree_cap
    )[0]


def subset_sum_bounds(
    matrix: np.ndarray, window: ModeWindow, charge: int
) -> tuple[float, float]:
    """Exact spectral interval of the charge-q block of dG(A), A Hermitian.

    Diagonalizing the window matrix turns dG(A) into a sum of independent
    mode numbers, so the block spectrum is the set of k-subset sums of the
    eigenvalues with fixed k = q + n_minus (charge fixes the rotated-mode
    occupancy), shifted by the normal-ordering constant.
    """
    mu = np.linalg.eigvalsh(matrix)
    k = charge + window.n_minus
    if k < 0 or k > window.size:
        raise SectorEmpty(f"charge {charge} admits no occupation pattern")
    base = -float(np.sum(np.diag(matrix)[: window.n_minus]).real)
    mu_sorted = np.sort(mu)
    lo = base + float(np.sum(mu_sorted[:k]))
    hi = base + float(np.sum(mu_sorted[window.size - k :])) if k else base
    return lo, hi


class SectorEngine:
    """Per-charge views of the Fock space with sparse sector operators."""

    def __init__(self, window: ModeWindow):
        self.window = window
        self.basis = FockBasis(window)
        self.dim = self.basis.dim
        # pos maps a mask to its index inside its own charge sector; sectors
        # partition the space so one array serves all charges.
        self._pos = np.zeros(self.dim, dtype=np.int64)
        self._sector_masks: dict[int, np.ndarray] = {}
        top_slot = window.size - 1
        self._bit_top = np.int64(1) << top_slot
        self._bit_minus_one = np.int64(1) << (window.n_minus - 1)
        self._bit_zero = np.int64(1) << window.n_minus

    def sector_masks(self, charge: int) -> np.ndarray:
        cached = self._sector_masks.get(charge)
        if cached is not None:
            return cached
        masks = self.basis.sector_masks(charge)
        self._pos[masks] = np.arange(masks.size, dtype=np.int64)
        self._sector_masks[charge] = masks
        return masks

    def sector_dim(self, charge: int) -> int:
        return int(self.sector_masks(charge).size)

    def theta(self, charge: int) -> np.ndarray:
        return self.basis.theta[self.sector_masks(charge)]

    def lift(self, charge: int, block: np.ndarray) -> np.ndarray:
        block = np.asarray(block, dtype=complex)
        shape = (self.dim,) + block.shape[1:]
        out = np.zeros(shape, dtype=complex)
        out[self.sector_masks(charge)] = block
        return out

    def restrict(self, charge: int, full: np.ndarray) -> np.ndarray:
        return np.asarray(full, dtype=complex)[self.sector_masks(charge)]

    def local_index(self, mask: int) -> int:
        charge = int(self.basis.charges[mask])
        self.sector_masks(charge)
        return int(self._pos[mask])

    def positions(self, masks: np.ndarray, charge: int) -> np.ndarray:
        """Local indices of the given masks inside the charge sector."""
        self.sector_masks(charge)
        return self._pos[np.asarray(masks, dtype=np.int64)]

    def dgamma_csr(self, matrix: np.ndarray, charge: int) -> sp.csr_matrix:
        masks = self.sector_masks(charge)
        rows, cols, data = psi_bilinear_coo(masks, matrix, self.window, index_of=self._pos)
        n = masks.size
        return sp.coo_matrix(
            (data, (rows.astype(np.int32), cols.astype(np.int32))), shape=(n, n)
        ).tocsr()

    def expi_dgamma_apply(
        self,
        matrix: np.ndarray,
        t: float,
        charge: int,
        block: np.ndarray,
        tol: float = 1e-12,
        csr: sp.csr_matrix | None = None,
    ) -> np.ndarray:
        return self.expi_dgamma_multi_apply(matrix, [t], charge, block, tol=tol, csr=csr)[0]

    def expi_dgamma_multi_apply(
        self,
        matrix: np.ndarray,
        ts: list[float],
        charge: int,
        block: np.ndarray,
        tol: float = 1e-12,
        csr: sp.csr_matrix | None = None,
    ) -> list[np.ndarray]:
        """exp(i t dG(A)) block for several t values on one matvec sweep."""
        dev = float(np.max(np.abs(matrix - matrix.conj().T)))
        if dev > 1e-10 * max(1.0, float(np.max(np.abs(matrix)))):
            raise NotHermitian(f"generator deviates from Hermitian by {dev:.3e}")
        if csr is None and any(t != 0.0 for t in ts):
            csr = self.dgamma_csr(matrix, charge)
        emin, emax = subset_sum_bounds(matrix, self.window, charge)
        return chebyshev_expi_multi_apply(csr, ts, emin, emax, block, tol=tol)

    def _shift_terms(self, source_charge: int):
        src = self.sector_masks(source_charge)
        ok1 = ((src & self._bit_top) == 0) & ((src & self._bit_minus_one) == 0)
        s1 = src[ok1]
        d1 = (s1 << 1) | self._bit_zero
        p_plus = np.bitwise_count(s1 & self.basis.plus_bits).astype(np.int64)
        amp1 = (1.0 - 2.0 * (p_plus & 1)).astype(complex)

        ok2 = ((src & self._bit_minus_one) != 0) & ((src & self._bit_top) == 0)
        s2 = src[ok2]
        d2 = (s2 ^ self._bit_minus_one) << 1
        jw = np.bitwise_count(s2 & (self._bit_minus_one - 1)).astype(np.int64) & 1
        total = (np.bitwise_count(s2).astype(np.int64) - 1) & 1
        amp2 = ((1.0 - 2.0 * jw) * (1.0 - 2.0 * total)).astype(complex)
        return ok1, d1, amp1, ok2, d2, amp2

    def shift_apply(self, block: np.ndarray, charge: int) -> np.ndarray:
        """Charge-shift implementer block action, sector q to q+1."""
        block = np.asarray(block, dtype=complex)
        dst_masks = self.sector_masks(charge + 1)
        ok1, d1, amp1, ok2, d2, amp2 = self._shift_terms(charge)
        out = np.zeros((dst_masks.size,) + block.shape[1:], dtype=complex)
        out[self._pos[d1]] = amp1[:, None] * block[ok1] if block.ndim > 1 else amp1 * block[ok1]
        if d2.size:
            contrib = amp2[:, None] * block[ok2] if block.ndim > 1 else amp2 * block[ok2]
            out[self._pos[d2]] += contrib
        return out

    def shift_dagger_apply(self, block: np.ndarray, charge: int) -> np.ndarray:
        """Adjoint implementer block action, sector q to q-1."""
        block = np.asarray(block, dtype=complex)
        src_masks = self.sector_masks(charge - 1)
        self.sector_masks(charge)
        ok1, d1, amp1, ok2, d2, amp2 = self._shift_terms(charge - 1)
        out = np.zeros((src_masks.size,) + block.shape[1:], dtype=complex)
        pulled1 = block[self._pos[d1]]
        out[ok1] = np.conj(amp1)[:, None] * pulled1 if block.ndim > 1 else np.conj(amp1) * pulled1
        if d2.size:
            pulled2 = block[self._pos[d2]]
            out[ok2] += np.conj(amp2)[:, None] * pulled2 if block.ndim > 1 else np.conj(amp2) * pulled2
        return out

    def diagonal_apply(
        self, block: np.ndarray, charge: int, phases: Callable[[np.ndarray], np.ndarray]
    ) -> np.ndarray:
        values = phases(self.theta(charge))
        block = np.asarray(block, dtype=complex)
        return values[:, None] * block if block.ndim > 1 else values * block


class SectorMatrixCache:
    """Small LRU cache for sector bilinear matrices; they are expensive to
    build and close to a gigabyte each at the largest windows."""

    def __init__(self, engine: SectorEngine, capacity: int = 2):
        self.engine = engine
        self.capacity = capacity
        self._store: OrderedDict[tuple[Hashable, int], sp.csr_matrix] = OrderedDict()
        self.hits = 0
        self.misses = 0

    def get(self, key: Hashable, matrix: np.ndarray, charge: int) -> sp.csr_matrix:
        full_key = (key, charge)
        cached = self._store.get(full_key)
        if cached is not None:
            self._store.move_to_end(full_key)
            self.hits += 1
            return cached
        self.misses += 1
        csr = self.engine.dgamma_csr(matrix, charge)
        self._store[full_key] = csr
        while len(self._store) > self.capacity:
            self._store.popitem(last=False)
        return csr

    def clear(self) -> None:
        """Drop every cached matrix; counters are kept."""
        self._store.clear()
