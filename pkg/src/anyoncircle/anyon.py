"""Anyon fields on the covering of the circle and their exchange relations.

A field at covering point omega with spin s and smearing scale epsilon is

    Phi = exp(i s omega (2Q - 1)) G(V_omega) G(exp(i lambda alpha_omega))

with lambda^2 = 1 - 2s, V_omega the rotated mode shift, and alpha_omega the
smeared sawtooth recentered at omega.  The charge prefactor carries the full
covering coordinate; the two implementers depend on it only through the base
projection (exp(-i omega Q) is 2 pi periodic on integer charge spectra).

Exchange phases are measured as median matrix-element ratios between the two
operator orderings over deterministic truncation-safe probes.  For windows
past the dense limit the products are evaluated stage by stage inside charge
sectors: dressing exponentials by Chebyshev series, the shift implementer by
direct bitmask action, all scalar phases exactly.  Winding numbers enter the
measured elements only through the charge prefactor, so a single staged
computation serves every relative winding of the same base geometry.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .blip import Mollifier, blip
from .covering import TWO_PI, CoveringInterval, CoveringPoint, project, relative_winding
from .errors import SeparationViolation, WindowTooSmall
from .fock import (
    FockBasis,
    FockOperator,
    implementer_exp,
    implementer_shift,
    phase_from_elements,
    pattern_probes,
    truncation_safe_probes,
)
from .modes import ModeWindow, OneParticleOperator, multiplication_operator, shift_operator
from .schwinger import schwinger_blip_closed_form
from .sector import SectorEngine, SectorMatrixCache

import scipy.sparse as sp


@dataclass(frozen=True)
class AnyonSpec:
    """Parameters of one anyon field: spin, covering point, smearing."""

    spin: float
    omega: CoveringPoint
    mollifier: Mollifier
    coupling_sign: int = -1

    def __post_init__(self):
        if self.spin > 0.5 + 1e-14:
            raise ValueError("spin must satisfy s <= 1/2")
        if self.coupling_sign not in (-1, 1):
            raise ValueError("coupling sign must be -1 or +1")
        if 1.0 - 2.0 * self.spin > 10.0:
            warnings.warn(
                "coupling squared exceeds 10; truncation error grows with |lambda|",
                stacklevel=2,
            )

    @property
    def coupling(self) -> float:
        """lambda with lambda^2 = 1 - 2s; zero at the endpoint s = 1/2."""
        square = max(0.0, 1.0 - 2.0 * self.spin)
        return float(self.coupling_sign * math.sqrt(square))

    @property
    def localization(self) -> CoveringInterval:
        return CoveringInterval(self.omega, self.mollifier.epsilon)


@dataclass
class AnyonField:
    spec: AnyonSpec
    operator: FockOperator
    localization: CoveringInterval
    coefficient_tail: float


def _resolvability_guard(epsilon: float, window: ModeWindow, grid_size: int) -> None:
    threshold = max(TWO_PI / grid_size, 1.0 / window.size)
    if epsilon < threshold:
        raise WindowTooSmall(
            f"mollifier scale {epsilon:.4g} below the resolvable scale "
            f"{threshold:.4g} for M={window.cutoff}, grid {grid_size}"
        )


def blip_multiplier(
    mollifier: Mollifier,
    window: ModeWindow,
    center_base: float,
    grid_size: int | None = None,
    drop_mean: bool = True,
) -> np.ndarray:
    """Window matrix of multiplication by the recentered smeared sawtooth.

    With drop_mean the constant pi is removed from the symbol; the dropped
    part second-quantizes to the charge phase exp(i lambda pi Q) and is
    restored exactly by the callers.  Halving the symbol range this way
    halves the Chebyshev bandwidth of the dressing exponential.
    """
    grid = window.default_grid() if grid_size is None else grid_size
    _resolvability_guard(mollifier.epsilon, window, grid)
    alpha = blip(mollifier, window, grid)
    shifted = alpha.periodic.shifted(center_base)
    mat = multiplication_operator(shifted, window).matrix.copy()
    if drop_mean:
        mat -= math.pi * np.eye(window.size)
    # real symbol, so the matrix is Hermitian up to quadrature rounding
    return 0.5 * (mat + mat.conj().T)


def coefficient_tail(mollifier: Mollifier, window: ModeWindow, grid_size: int | None = None) -> float:
    """Relative size of the last retained Fourier coefficients; diagnostic only."""
    alpha = blip(mollifier, window, window.default_grid() if grid_size is None else grid_size)
    n_max = 2 * window.cutoff + 1
    edge = max(abs(alpha.periodic.coefficient(n_max)), abs(alpha.periodic.coefficient(-n_max)))
    scale = max(abs(alpha.periodic.coefficient(0)), 1e-300)
    return float(edge / scale)


def charge_prefactor_diagonal(basis: FockBasis, spin: float, omega: float) -> np.ndarray:
    q = basis.charges.astype(float)
    return np.exp(1j * spin * omega * (2.0 * q - 1.0))


def build_field(spec: AnyonSpec, window: ModeWindow, grid_size: int | None = None) -> AnyonField:
    """Materialized field operator; dense construction, small windows only."""
    basis = FockBasis(window)
    if basis.dim > 2048:
        raise ValueError(
            "materialized fields are limited to dense windows; use ExchangeContext "
            "for staged sector measurements at larger M"
        )
    grid = window.default_grid() if grid_size is None else grid_size
    _resolvability_guard(spec.mollifier.epsilon, window, grid)
    omega = spec.omega.omega
    base = spec.omega.base

    shift_impl = implementer_shift(shift_operator(window), basis)
    u0q = sp.diags(np.exp(-1j * omega * basis.charges.astype(float))).tocsr()
    pre = sp.diags(charge_prefactor_diagonal(basis, spec.spin, omega)).tocsr()
    coupling = spec.coupling
    if coupling == 0.0:
        dressing_mat: np.ndarray | sp.spmatrix = sp.identity(basis.dim, dtype=complex, format="csr")
    else:
        full_symbol = blip_multiplier(spec.mollifier, window, base, grid, drop_mean=False)
        dressing = implementer_exp(OneParticleOperator(window, full_symbol), coupling, basis)
        dressing_mat = dressing.matrix
    mat = pre @ (shift_impl.matrix @ (u0q @ dressing_mat))
    operator = FockOperator(basis, mat, charge_shift=+1)
    tail = coefficient_tail(spec.mollifier, window, grid)
    return AnyonField(spec, operator, spec.localization, tail)


def rotation_rep(omega: float, spin: float, basis: FockBasis) -> FockOperator:
    """U(omega) = exp(i s omega Q^2) U0(base(omega)).

    The free rotation factor uses the base projection, making U exactly
    2 pi periodic up to the quadratic charge phases: U(2 pi) is the diagonal
    exp(2 pi i s q^2) on the charge-q sector by construction.
    """
    base, _ = project(omega)
    q = basis.charges.astype(float)
    diag = np.exp(1j * spin * omega * q * q) * np.exp(-1j * base * basis.theta)
    return FockOperator(basis, sp.diags(diag).tocsr(), charge_shift=0)


def predicted_phase(
    spin: float,
    interval1: CoveringInterval,
    interval2: CoveringInterval,
    pairing: str = "product",
) -> complex:
    """Exchange phase mandated by the relative winding of the two intervals."""
    n_rel = relative_winding(interval1, interval2)
    sign = +1.0 if pairing == "product" else -1.0
    return -np.exp(sign * 2j * np.pi * spin * (2 * n_rel + 1))


def aux_predicted_phase(
    spin: float, base1: float, base2: float, eps1: float, eps2: float
) -> complex:
    """Exchange phase of the auxiliary (prefactor-free) fields.

    Depends only on the projected distance: -exp(-2is [hat(w1-w2) - pi]),
    the minus branch.  Inherits the separation precondition of the
    Schwinger closed form.
    """
    s_term = schwinger_blip_closed_form(base1, base2, eps1, eps2)
    return -np.exp(-2j * spin * s_term)


class ExchangeContext:
    """Staged exchange measurement for one base geometry on one window.

    Holds the sector engine, the two dressing symbols, and the probe sets;
    `measure` produces element tables for a list of spins, and the phase
    extractors rescale those tables by the exact charge-prefactor scalars,
    so winding sweeps and both pairings reuse one table.
    """

    def __init__(
        self,
        window: ModeWindow,
        point1: CoveringPoint,
        point2: CoveringPoint,
        mollifier1: Mollifier,
        mollifier2: Mollifier,
        probe_charges: tuple[int, ...] = (-1, 0, 1),
        v_cap: int = 64,
        w_cap: int = 64,
        band: int = 2,
        grid_size: int | None = None,
        floor: float = 1e-10,
        cache_capacity: int = 2,
    ):
        if not window.size >= 5:
            raise ValueError("exchange measurements need cutoff M >= 2")
        self.window = window
        self.base1 = point1.base
        self.base2 = point2.base
        self.eps1 = mollifier1.epsilon
        self.eps2 = mollifier2.epsilon
        self.floor = floor
        self.engine = SectorEngine(window)
        self.cache = SectorMatrixCache(self.engine, cache_capacity)
        self.beta1 = blip_multiplier(mollifier1, window, self.base1, grid_size)
        self.beta2 = blip_multiplier(mollifier2, window, self.base2, grid_size)
        basis = self.engine.basis
        self.v_groups: dict[int, np.ndarray] = {}
        self.w_product: dict[int, np.ndarray] = {}
        self.w_adjoint: dict[int, np.ndarray] = {}
        # pattern probes keep the same physical states at every cutoff, so
        # error-vs-M curves track element convergence, not probe churn
        for q in probe_charges:
            v_masks = np.asarray(
                pattern_probes(basis, q, band=band, cap=v_cap), dtype=np.int64
            )
            self.v_groups[q] = v_masks
            self.w_product[q] = np.asarray(
                pattern_probes(basis, q + 2, band=band, cap=w_cap), dtype=np.int64
            )
            self.w_adjoint[q] = np.asarray(
                pattern_probes(basis, q, band=band, cap=w_cap), dtype=np.int64
            )

    def _dress(self, label: str, matrix: np.ndarray, t: float, q: int, block: np.ndarray) -> np.ndarray:
        return self._dress_multi(label, matrix, [t], q, block)[0]

    def _dress_multi(
        self, label: str, matrix: np.ndarray, ts: list[float], q: int, block: np.ndarray
    ) -> list[np.ndarray]:
        """Mean-dropped dressings at several couplings on one shared sweep."""
        if all(t == 0.0 for t in ts):
            return [np.array(block, copy=True) for _ in ts]
        csr = self.cache.get(label, matrix, q)
        outs = self.engine.expi_dgamma_multi_apply(matrix, ts, q, block, csr=csr)
        # restore the dropped mean of the symbol: exp(i t pi Q) on sector q
        return [np.exp(1j * t * math.pi * q) * out for t, out in zip(ts, outs)]

    def _rows(self, masks: np.ndarray, charge: int) -> np.ndarray:
        return self.engine.positions(masks, charge)

    def _probe_block(self, q: int) -> np.ndarray:
        masks = self.v_groups[q]
        local = self._rows(masks, q)
        block = np.zeros((self.engine.sector_dim(q), masks.size), dtype=complex)
        block[local, np.arange(masks.size)] = 1.0
        return block

    def measure(self, spins: list[float]) -> dict:
        """Element tables for every spin and probe charge.

        Each field is split as prefactor * shift * mean-dropped dressing.
        Mean-dropped dressings commute with the shift implementer exactly
        (the crossing anomaly is the symbol mean, which is zero), so both
        pairings reduce to canonical cores with every shift moved to the
        left: fw/rv hold rows W(q+2) of G^2 D1 D2 and G^2 D2 D1, afw/arv
        hold rows W(q) of D1 D2* and D2* D1, where the adjoint's G G* pair
        has cancelled outright.  Keeping the shifts adjacent means their
        window-edge defects hit both operator orders identically instead
        of opposite edges, which is what makes the error-vs-M curves of
        the phase ratios decay cleanly.  All remaining prefactor scalars
        are applied later, in scaled_elements and aux_exchange_phase.
        """
        engine = self.engine
        lams = [0.0 if s == 0.5 else -math.sqrt(1.0 - 2.0 * s) for s in spins]
        tables: dict = {s: {} for s in spins}
        for q in self.v_groups:
            v = self._probe_block(q)
            width = v.shape[1]
            rows_fw = self._rows(self.w_product[q], q + 2)
            rows_adj = self._rows(self.w_adjoint[q], q)
            # first-stage dressings of v share one sweep per symbol across
            # every coupling; D2 needs both signs for the adjoint pairing
            d1_all = self._dress_multi("b1", self.beta1, lams, q, v)
            pm = [x for lam in lams for x in (lam, -lam)]
            d2_all = self._dress_multi("b2", self.beta2, pm, q, v)
            for i, (s, lam) in enumerate(zip(spins, lams)):
                d1v, d2v, d2m = d1_all[i], d2_all[2 * i], d2_all[2 * i + 1]
                stacked = self._dress_multi(
                    "b1", self.beta1, [lam], q, np.concatenate([d2v, d2m], axis=1)
                )[0]
                x12, a12 = stacked[:, :width], stacked[:, width:]
                x21, a21 = self._dress_multi("b2", self.beta2, [lam, -lam], q, d1v)
                fw = engine.shift_apply(engine.shift_apply(x12, q), q + 1)
                rv = engine.shift_apply(engine.shift_apply(x21, q), q + 1)
                tables[s][q] = {
                    "fw": fw[rows_fw, :],
                    "rv": rv[rows_fw, :],
                    "afw": a12[rows_adj, :],
                    "arv": a21[rows_adj, :],
                }
        return tables

    def scaled_elements(
        self,
        tables: dict,
        spin: float,
        omega1: float,
        omega2: float,
        pairing: str = "product",
    ) -> tuple[np.ndarray, np.ndarray]:
        """Forward and reversed element tables with charge prefactors applied.

        omega1, omega2 are full covering coordinates; their bases must match
        the context geometry.  Charge prefactor scalars are applied here, so
        the same tables serve every winding.
        """
        if abs(project(omega1)[0] - self.base1) > 1e-9 or abs(project(omega2)[0] - self.base2) > 1e-9:
            raise ValueError("covering points do not project onto the context geometry")
        lam = 0.0 if spin == 0.5 else -math.sqrt(1.0 - 2.0 * spin)
        forward: list[np.ndarray] = []
        reversed_: list[np.ndarray] = []
        for q, entry in tables[spin].items():
            if pairing == "product":
                # raw tables carry exp(2 i lam pi q) from the mean restores;
                # the full chain wants exp(i lam pi (2q+1)) plus the charge
                # prefactors A1(q+2) R1(q+1) A2(q+1) R2(q)
                f_scalar = np.exp(
                    1j * lam * math.pi
                    + 1j * spin * (omega1 * (2 * q + 3) + omega2 * (2 * q + 1))
                    - 1j * (omega1 * (q + 1) + omega2 * q)
                )
                r_scalar = np.exp(
                    1j * lam * math.pi
                    + 1j * spin * (omega2 * (2 * q + 3) + omega1 * (2 * q + 1))
                    - 1j * (omega2 * (q + 1) + omega1 * q)
                )
                fw, rv = entry["fw"], entry["rv"]
            elif pairing == "adjoint":
                delta = omega1 - omega2
                f_scalar = np.exp(1j * spin * (2 * q - 1) * delta - 1j * (q - 1) * delta)
                r_scalar = np.exp(1j * spin * (2 * q + 1) * delta - 1j * q * delta)
                fw, rv = entry["afw"], entry["arv"]
            else:
                raise ValueError(f"unknown pairing {pairing!r}")
            forward.append((f_scalar * fw).ravel())
            reversed_.append((r_scalar * rv).ravel())
        return np.concatenate(forward), np.concatenate(reversed_)

    def exchange_phase(
        self,
        tables: dict,
        spin: float,
        omega1: float,
        omega2: float,
        pairing: str = "product",
    ) -> tuple[complex, float]:
        """Phase of field1 field2 against field2 field1 (or the adjoint pairing)."""
        forward, reversed_ = self.scaled_elements(tables, spin, omega1, omega2, pairing)
        return phase_from_elements(forward, reversed_, floor=self.floor)

    def aux_exchange_phase(self, tables: dict, spin: float) -> tuple[complex, float]:
        """Exchange phase of the prefactor-free auxiliary fields.

        The auxiliary field at base angle w is shift * rotation * dressing
        without the charge prefactor, so the product cores only need the
        base rotation scalars exp(-i w_hat (q+1)) exp(-i w_hat' q).
        """
        forward: list[np.ndarray] = []
        reversed_: list[np.ndarray] = []
        for q, entry in tables[spin].items():
            f_scalar = np.exp(-1j * (self.base1 * (q + 1) + self.base2 * q))
            r_scalar = np.exp(-1j * (self.base2 * (q + 1) + self.base1 * q))
            forward.append((f_scalar * entry["fw"]).ravel())
            reversed_.append((r_scalar * entry["rv"]).ravel())
        return phase_from_elements(
            np.concatenate(forward), np.concatenate(reversed_), floor=self.floor
        )


@dataclass
class PairingResult:
    measured: complex
    predicted: complex
    deviation: float

    @property
    def error(self) -> float:
        return float(abs(self.measured - self.predicted))


@dataclass
class CommutationReport:
    cutoff: int
    spin: float
    winding: int
    product: PairingResult
    adjoint: PairingResult


def verify_commutation(
    spec1: AnyonSpec,
    spec2: AnyonSpec,
    window: ModeWindow,
    probe_charges: tuple[int, ...] = (-1, 0, 1),
    v_cap: int = 64,
    w_cap: int = 64,
    context: ExchangeContext | None = None,
    tables: dict | None = None,
) -> CommutationReport:
    """Measure both exchange pairings of two fields and compare to prediction."""
    if abs(spec1.spin - spec2.spin) > 1e-14:
        raise ValueError("exchange relations are stated for equal spins")
    spin = spec1.spin
    n_rel = relative_winding(spec1.localization, spec2.localization)
    if context is None:
        context = ExchangeContext(
            window,
            spec1.omega,
            spec2.omega,
            spec1.mollifier,
            spec2.mollifier,
            probe_charges=probe_charges,
            v_cap=v_cap,
            w_cap=w_cap,
        )
    if tables is None:
        tables = context.measure([spin])
    w1, w2 = spec1.omega.omega, spec2.omega.omega
    prod_phase, prod_dev = context.exchange_phase(tables, spin, w1, w2, "product")
    adj_phase, adj_dev = context.exchange_phase(tables, spin, w1, w2, "adjoint")
    product = PairingResult(
        prod_phase,
        predicted_phase(spin, spec1.localization, spec2.localization, "product"),
        prod_dev,
    )
    adjoint = PairingResult(
        adj_phase,
        predicted_phase(spin, spec1.localization, spec2.localization, "adjoint"),
        adj_dev,
    )
    return CommutationReport(window.cutoff, spin, n_rel, product, adjoint)


def verify_aux_commutation(
    spec1: AnyonSpec,
    spec2: AnyonSpec,
    window: ModeWindow,
    probe_charges: tuple[int, ...] = (-1, 0, 1),
    v_cap: int = 64,
    w_cap: int = 64,
    context: ExchangeContext | None = None,
    tables: dict | None = None,
) -> PairingResult:
    """Exchange relation of the auxiliary fields, before charge dressing."""
    spin = spec1.spin
    if context is None:
        context = ExchangeContext(
            window,
            spec1.omega,
            spec2.omega,
            spec1.mollifier,
            spec2.mollifier,
            probe_charges=probe_charges,
            v_cap=v_cap,
            w_cap=w_cap,
        )
    if tables is None:
        tables = context.measure([spin])
    measured, dev = context.aux_exchange_phase(tables, spin)
    predicted = aux_predicted_phase(
        spin, spec1.omega.base, spec2.omega.base, context.eps1, context.eps2
    )
    return PairingResult(measured, predicted, dev)


def rotation_sector_scalar(
    spin: float, engine: SectorEngine, charge: int, omega: float = TWO_PI
) -> tuple[complex, float]:
    """Scalar of U(omega) on the charge sector and its spread across states.

    At omega = 2 pi the free factor is the identity by base reduction, so
    the spread is exactly zero and the scalar is exp(2 pi i s q^2).
    """
    base, _ = project(omega)
    theta = engine.theta(charge)
    diag = np.exp(1j * spin * omega * float(charge) ** 2) * np.exp(-1j * base * theta)
    scalar = diag[0]
    spread = float(np.max(np.abs(diag - scalar)))
    return complex(scalar), spread


@dataclass
class SpinRecurrenceReport:
    spin: float
    charges: list[int]
    conjugation_phases: dict[int, complex]
    predicted_phases: dict[int, complex]
    recurrence_residual: float
    fit_residual: float
    max_sector_spread: float


def verify_spin_recurrence(
    spin: float,
    omega: CoveringPoint,
    mollifier: Mollifier,
    window: ModeWindow,
    charges: tuple[int, ...] = (-2, -1, 0, 1, 2),
    v_cap: int = 8,
    w_cap: int = 32,
) -> SpinRecurrenceReport:
    """Sector phases of the 2 pi rotation acting on the field by conjugation.

    d_q is measured as the element ratio of U(2 pi) Phi U(2 pi)* against Phi
    on charge-q probes; the second difference of the extracted exponents is
    compared to 2s on the unit circle (branch free): d_(q+1) conj(d_q)
    against exp(4 pi i s).
    """
    engine = SectorEngine(window)
    cache = SectorMatrixCache(engine, capacity=2)
    base = omega.base
    full = omega.omega
    beta = blip_multiplier(mollifier, window, base)
    lam = 0.0 if spin == 0.5 else -math.sqrt(1.0 - 2.0 * spin)
    basis = engine.basis

    conj_phases: dict[int, complex] = {}
    predicted: dict[int, complex] = {}
    max_spread = 0.0
    for q in charges:
        v_masks = np.asarray(truncation_safe_probes(basis, [q], margin=2, cap=v_cap), dtype=np.int64)
        w_masks = np.asarray(
            truncation_safe_probes(basis, [q + 1], margin=2, cap=w_cap), dtype=np.int64
        )
        local = engine.positions(v_masks, q)
        block = np.zeros((engine.sector_dim(q), v_masks.size), dtype=complex)
        block[local, np.arange(v_masks.size)] = 1.0

        if lam == 0.0:
            dressed = block
        else:
            csr = cache.get("beta", beta, q)
            dressed = np.exp(1j * lam * math.pi * q) * engine.expi_dgamma_apply(
                beta, lam, q, block, csr=csr
            )
        shifted = engine.shift_apply(np.exp(-1j * full * q) * dressed, q)
        field_elems = np.exp(1j * spin * full * (2 * q + 1)) * shifted
        rows = engine.positions(w_masks, q + 1)
        plain = field_elems[rows, :]

        u_in, spread_in = rotation_sector_scalar(spin, engine, q)
        u_out, spread_out = rotation_sector_scalar(spin, engine, q + 1)
        max_spread = max(max_spread, spread_in, spread_out)
        conjugated = u_out * plain * np.conj(u_in)
        phase, _ = phase_from_elements(conjugated, plain)
        conj_phases[q] = phase
        predicted[q] = complex(np.exp(2j * np.pi * spin * (2 * q + 1)))

    qs = sorted(conj_phases)
    recurrence = 0.0
    for q in qs[:-1]:
        second = conj_phases[q + 1] * np.conj(conj_phases[q])
        recurrence = max(recurrence, float(abs(second - np.exp(4j * np.pi * spin))))
    fit = 0.0
    for q in list(qs) + [qs[-1] + 1]:
        scalar, _ = rotation_sector_scalar(spin, engine, q)
        fit = max(fit, float(abs(scalar - np.exp(2j * np.pi * spin * q * q))))
    return SpinRecurrenceReport(
        spin=spin,
        charges=list(qs),
        conjugation_phases=conj_phases,
        predicted_phases=predicted,
        recurrence_residual=recurrence,
        fit_residual=fit,
        max_sector_spread=max_spread,
    )
