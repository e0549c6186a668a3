"""Truncated antisymmetric Fock space over a symmetric mode window.

Basis states are occupation bitmasks over the 2M+1 window modes, slot
j = mode + M, minus modes first.  A set bit on a plus slot is a particle
(created by a*), on a minus slot an antiparticle (created by b*); the
all-zero mask is the vacuum.  Jordan-Wigner signs come from occupation
parities below the acted slot, so the canonical anticommutation relations
hold with all a's anticommuting with all b's.

The charge operator is Q = sum_(n>=0) a*_n a_n - sum_(n<0) b*_n b_n.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp
from scipy.linalg import expm as dense_expm
from scipy.sparse.linalg import expm_multiply

from .errors import (
    NoSignificantEntries,
    NotDiagonal,
    NotHermitian,
    PseudoInverseFailure,
    SectorEmpty,
    WindowTooSmall,
    WrongClass,
)
from .modes import ModeWindow, OneParticleOperator

_DENSE_DIM_LIMIT = 2048
_FULL_SPACE_MAX_CUTOFF = 8


def _popcount(arr: np.ndarray) -> np.ndarray:
    return np.bitwise_count(arr).astype(np.int64)


class FockBasis:
    """Occupation-bitmask basis; the basis index of a state is its mask."""

    def __init__(self, window: ModeWindow):
        if window.cutoff > 12:
            raise ValueError("window cutoff beyond supported Fock dimensions")
        self.window = window
        self.dim = 1 << window.size
        self.minus_bits = (1 << window.n_minus) - 1
        self.plus_bits = ((1 << window.size) - 1) ^ self.minus_bits
        masks = np.arange(self.dim, dtype=np.int64)
        self.charges = (
            _popcount(masks & self.plus_bits) - _popcount(masks & self.minus_bits)
        ).astype(np.int8)
        # theta(S) = sum of modes over particles minus sum over antiparticles
        # = sum over occupied slots of |slot - M|; drives rotation phases.
        theta = np.zeros(self.dim, dtype=np.int64)
        for j in range(window.size):
            theta += ((masks >> j) & 1) * abs(j - window.n_minus)
        self.theta = theta

    def slot(self, mode: int) -> int:
        return self.window.slot(mode)

    def mask_of(self, plus_modes: Iterable[int] = (), minus_modes: Iterable[int] = ()) -> int:
        mask = 0
        for n in plus_modes:
            if n < 0:
                raise ValueError("particle modes must be >= 0")
            mask |= 1 << self.slot(n)
        for n in minus_modes:
            if n >= 0:
                raise ValueError("antiparticle modes must be < 0")
            mask |= 1 << self.slot(n)
        return mask

    def charge_of(self, mask: int) -> int:
        return int(self.charges[mask])

    def sector_masks(self, charge: int) -> np.ndarray:
        masks = np.nonzero(self.charges == charge)[0].astype(np.int64)
        if masks.size == 0:
            raise SectorEmpty(f"no states of charge {charge} at M={self.window.cutoff}")
        return masks

    def basis_vector(self, mask: int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[mask] = 1.0
        return v

    def vacuum(self) -> np.ndarray:
        return self.basis_vector(0)


@dataclass
class FockOperator:
    """Linear operator on the truncated Fock space with declared charge grading."""

    basis: FockBasis
    matrix: sp.spmatrix | np.ndarray
    charge_shift: int | None = None

    def apply(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.matrix @ x)

    def dagger(self) -> "FockOperator":
        mat = self.matrix.conj().T
        if sp.issparse(mat):
            mat = mat.tocsr()
        shift = None if self.charge_shift is None else -self.charge_shift
        return FockOperator(self.basis, mat, shift)

    def __matmul__(self, other: "FockOperator") -> "FockOperator":
        if self.basis is not other.basis and self.basis.window != other.basis.window:
            raise ValueError("operators live on different Fock spaces")
        shift = None
        if self.charge_shift is not None and other.charge_shift is not None:
            shift = self.charge_shift + other.charge_shift
        return FockOperator(self.basis, self.matrix @ other.matrix, shift)

    def __add__(self, other: "FockOperator") -> "FockOperator":
        shift = self.charge_shift if self.charge_shift == other.charge_shift else None
        return FockOperator(self.basis, self.matrix + other.matrix, shift)

    def scale(self, c: complex) -> "FockOperator":
        return FockOperator(self.basis, self.matrix * c, self.charge_shift)

    def to_dense(self) -> np.ndarray:
        return self.matrix.toarray() if sp.issparse(self.matrix) else np.asarray(self.matrix)

    def sector_scan(self, tol: float = 0.0) -> set[int]:
        """Observed charge shifts over all matrix entries above tol."""
        mat = sp.coo_matrix(self.matrix)
        keep = np.abs(mat.data) > tol
        rows = mat.row[keep]
        cols = mat.col[keep]
        shifts = self.basis.charges[rows].astype(int) - self.basis.charges[cols].astype(int)
        return set(np.unique(shifts).tolist())


def _guard_full_space(basis: FockBasis, what: str) -> None:
    if basis.window.cutoff > _FULL_SPACE_MAX_CUTOFF:
        raise ValueError(
            f"{what} on the full Fock space is limited to M <= {_FULL_SPACE_MAX_CUTOFF}; "
            "use the charge-sector engine instead"
        )


def _elementary_annihilator(basis: FockBasis, slot: int) -> sp.csr_matrix:
    masks = np.arange(basis.dim, dtype=np.int64)
    bit = np.int64(1) << slot
    below = bit - 1
    occupied = (masks & bit) != 0
    src = masks[occupied]
    dst = src ^ bit
    signs = 1.0 - 2.0 * (_popcount(src & below) & 1)
    return sp.csr_matrix(
        (signs.astype(complex), (dst, src)), shape=(basis.dim, basis.dim)
    )


def car_operators(basis: FockBasis) -> dict[tuple[str, int], FockOperator]:
    """All ladder operators keyed by ('a'|'a_dag'|'b'|'b_dag', mode)."""
    _guard_full_space(basis, "ladder operator construction")
    ops: dict[tuple[str, int], FockOperator] = {}
    for n in basis.window.modes:
        ann = _elementary_annihilator(basis, basis.slot(int(n)))
        cre = ann.conj().T.tocsr()
        if n >= 0:
            ops[("a", int(n))] = FockOperator(basis, ann, charge_shift=-1)
            ops[("a_dag", int(n))] = FockOperator(basis, cre, charge_shift=+1)
        else:
            ops[("b", int(n))] = FockOperator(basis, ann, charge_shift=+1)
            ops[("b_dag", int(n))] = FockOperator(basis, cre, charge_shift=-1)
    return ops


def charge_operator(basis: FockBasis) -> FockOperator:
    diag = basis.charges.astype(complex)
    return FockOperator(basis, sp.diags(diag).tocsr(), charge_shift=0)


def free_field(phi: np.ndarray, basis: FockBasis) -> FockOperator:
    """phi(f) = a*(f_plus) + b(conj f_minus), linear in the window vector f.

    In modes: sum_(n>=0) f_n a*_n + sum_(n<0) f_n b_n; raises charge by one.
    """
    _guard_full_space(basis, "free field construction")
    phi = np.asarray(phi, dtype=complex)
    if phi.shape != (basis.window.size,):
        raise ValueError("mode vector must have window size")
    total = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for n in basis.window.modes:
        c = phi[basis.slot(int(n))]
        if c == 0:
            continue
        op = _elementary_annihilator(basis, basis.slot(int(n)))
        if n >= 0:
            total = total + c * op.conj().T.tocsr()
        else:
            total = total + c * op
    return FockOperator(basis, total.tocsr(), charge_shift=+1)


def second_quantize_diagonal(
    u: OneParticleOperator, basis: FockBasis, tol: float = 1e-12
) -> FockOperator:
    """Multiplicative second quantization of a diagonal one-particle unitary.

    Each occupation state is multiplied by the product of eigenvalues of the
    plus block over occupied particle modes and of the conjugated minus
    block over occupied antiparticle modes; a constant phase exp(i c) on
    the window therefore acts as exp(i c Q).
    """
    mat = u.matrix
    off = mat - np.diag(np.diag(mat))
    if np.max(np.abs(off)) > tol * max(1.0, np.max(np.abs(mat))):
        raise NotDiagonal("second_quantize_diagonal requires a diagonal operator")
    eig = np.diag(mat)
    masks = np.arange(basis.dim, dtype=np.int64)
    phase = np.ones(basis.dim, dtype=complex)
    for j in range(basis.window.size):
        w = eig[j] if j >= basis.window.n_minus else np.conj(eig[j])
        occupied = ((masks >> j) & 1).astype(bool)
        phase[occupied] *= w
    return FockOperator(basis, sp.diags(phase).tocsr(), charge_shift=0)


def rotation_phases(basis: FockBasis, omega_base: float) -> np.ndarray:
    """Diagonal of the second-quantized rotation at base angle omega_base."""
    return np.exp(-1j * omega_base * basis.theta)


def psi_bilinear_coo(
    masks: np.ndarray,
    matrix: np.ndarray,
    window: ModeWindow,
    index_of: np.ndarray | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """COO triplets of the normal-ordered current sum_mn A[m,n] :c*_m c_n:.

    ``masks`` lists the basis states acted on (a charge sector or the full
    space); ``index_of`` maps a target mask to its row index (identity when
    omitted).  Column indices are positions within ``masks``.

    In the particle-hole convention a set minus bit is a hole (empty sea
    mode), so the four blocks of A act differently on bits: plus-plus terms
    hop a set bit, minus-minus terms hop with swapped roles and a sign from
    normal ordering, and the mixed blocks create or annihilate a plus-minus
    bit pair (charge is preserved throughout).  Slot order fixes the
    Jordan-Wigner signs; two-slot terms compose the elementary signs through
    the intermediate mask.
    """
    size = window.size
    n_minus = window.n_minus
    n_local = masks.size
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    data: list[np.ndarray] = []

    diag = np.zeros(n_local, dtype=complex)
    for j in range(size):
        occ = (masks >> j) & 1
        sign = -1.0 if j < n_minus else 1.0
        diag = diag + sign * matrix[j, j] * occ
    local = np.arange(n_local, dtype=np.int64)
    self_rows = masks if index_of is None else index_of[masks]
    rows.append(self_rows.astype(np.int64))
    cols.append(local)
    data.append(diag)

    cut = 1e-15 * max(1.0, float(np.max(np.abs(matrix))))
    for jm in range(size):
        minus_m = jm < n_minus
        bit_m = np.int64(1) << jm
        below_m = bit_m - 1
        for jn in range(size):
            if jm == jn:
                continue
            coef = matrix[jm, jn]
            if abs(coef) <= cut:
                continue
            minus_n = jn < n_minus
            bit_n = np.int64(1) << jn
            below_n = bit_n - 1
            if not minus_m and not minus_n:
                # a*_m a_n: clear slot n, set slot m
                sel = ((masks & bit_n) != 0) & ((masks & bit_m) == 0)
                first_bit, first_below, second_below = bit_n, below_n, below_m
                overall = coef
            elif minus_m and minus_n:
                # :c*_m c_n: = -b*_n b_m: clear slot m, set slot n
                sel = ((masks & bit_m) != 0) & ((masks & bit_n) == 0)
                first_bit, first_below, second_below = bit_m, below_m, below_n
                overall = -coef
            elif not minus_m and minus_n:
                # a*_m b*_n: set slot n, then slot m
                sel = ((masks & bit_n) == 0) & ((masks & bit_m) == 0)
                first_bit, first_below, second_below = bit_n, below_n, below_m
                overall = coef
            else:
                # b_m a_n: clear slot n, then slot m
                sel = ((masks & bit_n) != 0) & ((masks & bit_m) != 0)
                first_bit, first_below, second_below = bit_n, below_n, below_m
                overall = coef
            if not np.any(sel):
                continue
            src_local = np.nonzero(sel)[0]
            m_sel = masks[src_local]
            target = m_sel ^ bit_n ^ bit_m
            sign_bits = (m_sel & first_below) ^ ((m_sel ^ first_bit) & second_below)
            parity = _popcount(sign_bits) & 1
            amp = overall * (1.0 - 2.0 * parity)
            dst = target if index_of is None else index_of[target]
            rows.append(dst.astype(np.int64))
            cols.append(src_local)
            data.append(amp)

    return np.concatenate(rows), np.concatenate(cols), np.concatenate(data)


def dgamma(a: OneParticleOperator, basis: FockBasis) -> FockOperator:
    """Normal-ordered second-quantized bilinear of a one-particle operator.

    dG(A) = sum A[m,n] psi*_m psi_n - sum_(n<0) A[n,n], so the vacuum
    expectation vanishes and dG(identity) is the charge operator.  Commutes
    with Q for every A (the bilinear is charge-neutral mode by mode).
    """
    _guard_full_space(basis, "bilinear construction")
    masks = np.arange(basis.dim, dtype=np.int64)
    rows, cols, data = psi_bilinear_coo(masks, a.matrix, basis.window)
    mat = sp.coo_matrix(
        (data, (rows.astype(np.int64), cols.astype(np.int64))),
        shape=(basis.dim, basis.dim),
    ).tocsr()
    return FockOperator(basis, mat, charge_shift=0)


class LazyExponential:
    """exp(i t dG(A)) applied by scaled-Taylor exponential-times-vector."""

    def __init__(self, generator: FockOperator, t: float):
        self.basis = generator.basis
        self.generator = generator
        self.t = t
        self.charge_shift = 0

    def apply(self, x: np.ndarray) -> np.ndarray:
        if self.t == 0.0:
            return np.array(x, copy=True)
        return np.asarray(expm_multiply(1j * self.t * self.generator.matrix, x))

    def dagger(self) -> "LazyExponential":
        return LazyExponential(self.generator, -self.t)


def implementer_exp(
    a: OneParticleOperator, t: float, basis: FockBasis, herm_tol: float = 1e-10
) -> FockOperator | LazyExponential:
    """Unitary exp(i t dG(A)) for Hermitian A.

    Dense exponential for small spaces; an exponential-times-vector wrapper
    beyond that, exposing the same ``apply``.
    """
    dev = np.max(np.abs(a.matrix - a.matrix.conj().T))
    if dev > herm_tol * max(1.0, float(np.max(np.abs(a.matrix)))):
        raise NotHermitian(f"generator deviates from Hermitian by {dev:.3e}")
    gen = dgamma(a, basis)
    if basis.dim <= _DENSE_DIM_LIMIT:
        mat = dense_expm(1j * t * gen.to_dense())
        return FockOperator(basis, mat, charge_shift=0)
    return LazyExponential(gen, t)


def _is_canonical_shift(v: OneParticleOperator, tol: float) -> bool:
    expected = np.eye(v.window.size, k=-1, dtype=complex)
    return bool(np.max(np.abs(v.matrix - expected)) <= tol)


def implementer_shift(v: OneParticleOperator, basis: FockBasis, tol: float = 1e-12) -> FockOperator:
    """Charge-raising implementer of the truncated mode shift.

    G(V) = a*(e_0) G_+(-V++) G_-(-conj V--) + G_+(-V++) G_-(-conj V--) b(e_-),
    normalized so the vacuum maps to the one-particle state e_0.  Accepts
    exactly the canonical shift (rotated shifts are obtained by composing
    with exp(-i omega Q), which shares this phase convention).
    """
    if v.window != basis.window:
        raise WrongClass("shift operator window does not match the Fock basis")
    if not _is_canonical_shift(v, tol):
        raise WrongClass(
            "implementer_shift expects the canonical truncated shift e_n -> e_(n+1)"
        )
    n_minus = basis.window.n_minus
    size = basis.window.size
    masks = np.arange(basis.dim, dtype=np.int64)
    bit_top = np.int64(1) << (size - 1)
    bit_minus_one = np.int64(1) << (n_minus - 1)
    bit_zero = np.int64(1) << n_minus

    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    data: list[np.ndarray] = []

    # Term 1: shift every occupation up one slot, then create the mode-0
    # particle.  Blocked when mode M or the antiparticle at -1 is occupied.
    ok1 = ((masks & bit_top) == 0) & ((masks & bit_minus_one) == 0)
    src1 = masks[ok1]
    dst1 = (src1 << 1) | bit_zero
    p_plus = _popcount(src1 & basis.plus_bits)
    amp1 = (1.0 - 2.0 * (p_plus & 1)).astype(complex)
    rows.append(dst1)
    cols.append(src1)
    data.append(amp1)

    # Term 2: annihilate the antiparticle at -1, then shift everything up.
    ok2 = ((masks & bit_minus_one) != 0) & ((masks & bit_top) == 0)
    src2 = masks[ok2]
    stripped = src2 ^ bit_minus_one
    dst2 = stripped << 1
    jw = _popcount(src2 & (bit_minus_one - 1)) & 1
    total = (_popcount(src2) - 1) & 1
    amp2 = ((1.0 - 2.0 * jw) * (1.0 - 2.0 * total)).astype(complex)
    rows.append(dst2)
    cols.append(src2)
    data.append(amp2)

    mat = sp.coo_matrix(
        (np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))),
        shape=(basis.dim, basis.dim),
    ).tocsr()
    return FockOperator(basis, mat, charge_shift=+1)


@dataclass(frozen=True)
class ConjugateBlocks:
    """Block data Z of a charge-shift operator, via thresholded pseudo-inverses.

    Z++ = -pinv(V++*), Z+- = -pinv(V++*) V-+*, Z-+ = -pinv(V--) V-+,
    Z-- = -pinv(V--).
    """

    plus_plus: np.ndarray
    plus_minus: np.ndarray
    minus_plus: np.ndarray
    minus_minus: np.ndarray


def _checked_pinv(block: np.ndarray, threshold: float) -> np.ndarray:
    u, sigma, vh = np.linalg.svd(block)
    scale = sigma[0] if sigma.size and sigma[0] > 0 else 1.0
    rel = sigma / scale
    near = np.sum((rel > threshold / 10) & (rel < threshold * 10))
    if near:
        raise PseudoInverseFailure(
            f"{near} singular value(s) within a decade of threshold {threshold}"
        )
    inv = np.where(rel > threshold, 1.0 / np.where(sigma == 0, 1.0, sigma), 0.0)
    return (vh.conj().T * inv) @ u.conj().T


def conjugate_blocks(v: OneParticleOperator, threshold: float = 1e-8) -> ConjugateBlocks:
    vpp = v.plus_plus
    vmm = v.minus_minus
    vmp = v.minus_plus
    pinv_pp_star = _checked_pinv(vpp.conj().T, threshold)
    pinv_mm = _checked_pinv(vmm, threshold)
    return ConjugateBlocks(
        plus_plus=-pinv_pp_star,
        plus_minus=-pinv_pp_star @ vmp.conj().T,
        minus_plus=-pinv_mm @ vmp,
        minus_minus=-pinv_mm,
    )


def _submask_indices(mask: int, offset: int, count: int) -> tuple[int, ...]:
    return tuple(j for j in range(count) if (mask >> (offset + j)) & 1)


def gamma_multiplicative(
    plus_block: np.ndarray, minus_block: np.ndarray, basis: FockBasis
) -> FockOperator:
    """Multiplicative second quantization of a block-diagonal one-particle map.

    Acts on particle wedges by the plus block and on antiparticle wedges by
    the minus block; the matrix element between occupation states is the
    product of the two minor determinants.  Dense construction, small
    windows only.
    """
    if basis.dim > _DENSE_DIM_LIMIT:
        raise ValueError("gamma_multiplicative is a dense small-window construction")
    n_minus = basis.window.n_minus
    n_plus = basis.window.n_plus
    dim = basis.dim
    out = np.zeros((dim, dim), dtype=complex)

    plus_masks: dict[int, list[int]] = {}
    minus_masks: dict[int, list[int]] = {}
    for m in range(1 << n_plus):
        plus_masks.setdefault(int(m).bit_count(), []).append(m)
    for m in range(1 << n_minus):
        minus_masks.setdefault(int(m).bit_count(), []).append(m)

    def minor(block: np.ndarray, rows: tuple[int, ...], cols: tuple[int, ...]) -> complex:
        if not rows:
            return 1.0
        return complex(np.linalg.det(block[np.ix_(rows, cols)]))

    for k_plus, plist in plus_masks.items():
        plus_minors = {
            (t, s): minor(
                plus_block,
                _submask_indices(t, 0, n_plus),
                _submask_indices(s, 0, n_plus),
            )
            for t in plist
            for s in plist
        }
        for k_minus, mlist in minus_masks.items():
            for t_m in mlist:
                for s_m in mlist:
                    dm = minor(
                        minus_block,
                        _submask_indices(t_m, 0, n_minus),
                        _submask_indices(s_m, 0, n_minus),
                    )
                    if dm == 0:
                        continue
                    for t_p in plist:
                        for s_p in plist:
                            dp = plus_minors[(t_p, s_p)]
                            if dp == 0:
                                continue
                            row = (t_p << n_minus) | t_m
                            col = (s_p << n_minus) | s_m
                            out[row, col] += dm * dp
    return FockOperator(basis, out, charge_shift=0)


def _pair_quadratic(
    coefficient_block: np.ndarray, kind: str, basis: FockBasis
) -> FockOperator:
    """sum C[m,n] a*_m b*_n (kind='create') or sum C[n,m] b_n a_m (kind='annihilate')."""
    ops = car_operators(basis)
    total = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    n_minus = basis.window.n_minus
    for i_plus in range(basis.window.n_plus):
        mode_p = i_plus
        for i_minus in range(n_minus):
            mode_m = i_minus - n_minus
            if kind == "create":
                c = coefficient_block[i_plus, i_minus]
                if c == 0:
                    continue
                term = ops[("a_dag", mode_p)].matrix @ ops[("b_dag", mode_m)].matrix
            else:
                c = coefficient_block[i_minus, i_plus]
                if c == 0:
                    continue
                term = ops[("b", mode_m)].matrix @ ops[("a", mode_p)].matrix
            total = total + c * term
    shift = +2 if kind == "create" else -2
    return FockOperator(basis, total.tocsr(), charge_shift=shift)


def ec_normal_ordered(z: ConjugateBlocks, basis: FockBasis) -> FockOperator:
    """Normal-ordered exponential E_c(Z).

    E_c(Z) = exp(Z+- a* b*) G_+(Z++) G_-(Z--^T) exp(-Z-+ b a); used to
    cross-validate the explicit charge-shift implementer on small windows.
    """
    if basis.dim > _DENSE_DIM_LIMIT:
        raise ValueError("ec_normal_ordered is a dense small-window construction")
    create = _pair_quadratic(z.plus_minus, "create", basis)
    annihilate = _pair_quadratic(z.minus_plus, "annihilate", basis)
    middle = gamma_multiplicative(z.plus_plus, z.minus_minus.T, basis)
    left = dense_expm(create.to_dense())
    right = dense_expm(-annihilate.to_dense())
    return FockOperator(basis, left @ middle.to_dense() @ right, charge_shift=None)


def _kernel_unit_vector(block: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    """Canonical unit kernel vector of a square block with 1-dim kernel.

    Phase fixed by making the largest-magnitude component positive real.
    """
    _, sigma, vh = np.linalg.svd(block)
    if sigma[-1] > tol * max(1.0, sigma[0]):
        raise WrongClass("minus-minus block has no kernel: not a unit charge shift")
    if sigma.size > 1 and sigma[-2] <= tol * max(1.0, sigma[0]):
        raise WrongClass("minus-minus block kernel is not one-dimensional")
    vec = vh.conj().T[:, -1]
    k = int(np.argmax(np.abs(vec)))
    return vec * (np.conj(vec[k]) / abs(vec[k]))


def ec_route_implementer(v: OneParticleOperator, basis: FockBasis) -> FockOperator:
    """Charge-shift implementer via the normal-ordered route.

    N_V [a*(e_0) E_c(Z) + E_c(Z) b(conj e_-)] with e_- the canonical kernel
    vector of the minus-minus block and e_0 = V e_-.  N_V is fixed by unit
    vacuum image norm; the leftover constant phase is pinned by making the
    dominant vacuum-image amplitude positive real, which matches the
    explicit shift route and makes rotation covariance an exact operator
    identity instead of one up to phase.
    """
    z = conjugate_blocks(v)
    ec = ec_normal_ordered(z, basis)
    ops = car_operators(basis)
    window = v.window
    e_minus = _kernel_unit_vector(v.minus_minus)
    full = np.zeros(window.size, dtype=complex)
    full[: window.n_minus] = e_minus
    e_zero = v.matrix @ full
    if np.linalg.norm(e_zero[: window.n_minus]) > 1e-10:
        raise WrongClass("image of the kernel vector is not a particle vector")
    create = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for i, amp in enumerate(e_zero[window.n_minus :]):
        if amp != 0:
            create = create + amp * ops[("a_dag", i)].matrix
    annihilate = sp.csr_matrix((basis.dim, basis.dim), dtype=complex)
    for i, amp in enumerate(e_minus):
        if amp != 0:
            annihilate = annihilate + amp * ops[("b", i - window.n_minus)].matrix
    raw = create @ ec.matrix + ec.matrix @ annihilate
    vac_image = np.asarray(raw @ basis.vacuum())
    norm = np.linalg.norm(vac_image)
    if norm == 0:
        raise WrongClass("vacuum image vanished in the normal-ordered route")
    k = int(np.argmax(np.abs(vac_image)))
    phase = vac_image[k] / abs(vac_image[k])
    return FockOperator(basis, raw / (norm * phase), charge_shift=+1)


def truncation_safe_probes(
    basis: FockBasis,
    charges: Sequence[int],
    margin: int = 2,
    cap: int = 64,
) -> list[int]:
    """Deterministic basis probes supported away from the window edges.

    States whose occupied modes all lie in {-M+margin, ..., M-margin},
    filtered by charge, interleaved round-robin over the requested charges
    in mask order, capped in total.
    """
    m = basis.window.cutoff
    if margin >= m:
        raise ValueError("margin leaves no interior modes")
    allowed = 0
    for n in range(-m + margin, m - margin + 1):
        allowed |= 1 << basis.slot(n)
    masks = np.arange(basis.dim, dtype=np.int64)
    safe = (masks & ~np.int64(allowed)) == 0
    per_charge: list[list[int]] = []
    for q in charges:
        sel = safe & (basis.charges == q)
        per_charge.append([int(x) for x in masks[sel]])
    picked: list[int] = []
    idx = 0
    while len(picked) < cap:
        progressed = False
        for lst in per_charge:
            if idx < len(lst):
                picked.append(lst[idx])
                progressed = True
                if len(picked) >= cap:
                    break
        if not progressed:
            break
        idx += 1
    if not picked:
        raise NoSignificantEntries("no probes available for the requested charges")
    return picked


def pattern_probes(
    basis: FockBasis,
    charge: int,
    band: int = 2,
    margin: int = 2,
    cap: int = 64,
) -> list[int]:
    """Charge-q probes built from a window-independent mode band.

    Enumerates every occupation pattern whose particle modes lie in
    {0..band} and whose hole modes lie in {-band..-1}, ordered by total
    mode energy sum(|n|) and then by the mode tuple, so the k-th probe is
    the same physical state at every cutoff M >= band + margin.  That
    stability is what makes element tables comparable across a cutoff
    sweep; mask-ordered probes reshuffle patterns whenever M changes.
    """
    if band + margin > basis.window.cutoff:
        raise WindowTooSmall(
            f"pattern band {band} with margin {margin} needs cutoff >= {band + margin}"
        )
    plus_pool = list(range(0, band + 1))
    minus_pool = list(range(-1, -band - 1, -1))
    entries: list[tuple[int, tuple[int, ...], int]] = []
    for n_plus in range(len(plus_pool) + 1):
        n_minus = n_plus - charge
        if n_minus < 0 or n_minus > len(minus_pool):
            continue
        for plus in itertools.combinations(plus_pool, n_plus):
            for minus in itertools.combinations(minus_pool, n_minus):
                energy = sum(plus) + sum(-n for n in minus)
                key = tuple(sorted(plus) + sorted(-n for n in minus))
                entries.append((energy, key, basis.mask_of(plus, minus)))
    entries.sort(key=lambda item: (item[0], item[1]))
    picked = [mask for _, _, mask in entries[:cap]]
    if not picked:
        raise NoSignificantEntries(f"no band-{band} patterns exist at charge {charge}")
    return picked


def probe_matrix(basis: FockBasis, probe_masks: Sequence[int]) -> np.ndarray:
    mat = np.zeros((basis.dim, len(probe_masks)), dtype=complex)
    for k, mask in enumerate(probe_masks):
        mat[mask, k] = 1.0
    return mat


def phase_from_elements(
    forward: np.ndarray, reversed_: np.ndarray, floor: float = 1e-10
) -> tuple[complex, float]:
    """Median ratio of matrix elements, normalized to unit modulus.

    Pairs whose reversed-order element falls below the floor are dropped;
    the second return value is the maximal deviation of any retained ratio
    from the reported phase.
    """
    fw = np.asarray(forward).ravel()
    rv = np.asarray(reversed_).ravel()
    keep = np.abs(rv) > floor
    if not np.any(keep):
        raise NoSignificantEntries("all reversed-order elements below the floor")
    ratios = fw[keep] / rv[keep]
    med = complex(np.median(ratios.real), np.median(ratios.imag))
    if med == 0:
        raise NoSignificantEntries("median ratio vanished")
    phase = med / abs(med)
    deviation = float(np.max(np.abs(ratios - phase)))
    return phase, deviation


def measure_exchange_phase(
    x_op,
    y_op,
    v_masks: Sequence[int],
    w_masks: Sequence[int],
    basis: FockBasis,
    floor: float = 1e-10,
) -> tuple[complex, float]:
    """Exchange phase between two operator orderings on probe pairs.

    Computes <w, X Y v> and <w, Y X v> over all probe pairs and returns the
    unit-modulus median ratio with its maximal deviation.
    """
    pv = probe_matrix(basis, v_masks)
    xy = x_op.apply(y_op.apply(pv))
    yx = y_op.apply(x_op.apply(pv))
    rows = np.asarray(list(w_masks), dtype=np.int64)
    return phase_from_elements(xy[rows, :], yx[rows, :], floor=floor)
