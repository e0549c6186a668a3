"""Fourier modes, mode windows and one-particle operators.

Conventions: basis functions e_n(x) = exp(i n x) / sqrt(2 pi) on [0, 2 pi),
coefficients f_n = (2 pi)^(-1/2) * integral of f(x) exp(-i n x).  A symmetric
window keeps modes -M..M; the zero mode belongs to the plus block, so the
plus block has M+1 modes and the minus block has M.  Multiplication by g has
matrix A[m, n] = g_(m-n) / sqrt(2 pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import toeplitz

from .covering import TWO_PI
from .errors import GridTooCoarse, IllConditioned, WindowMismatch

SQRT_TWO_PI = math.sqrt(TWO_PI)


@dataclass(frozen=True)
class ModeWindow:
    """Symmetric mode window {-M, ..., M}."""

    cutoff: int

    def __post_init__(self) -> None:
        if self.cutoff < 1:
            raise ValueError("window cutoff must be >= 1")

    @property
    def size(self) -> int:
        return 2 * self.cutoff + 1

    @property
    def n_minus(self) -> int:
        return self.cutoff

    @property
    def n_plus(self) -> int:
        return self.cutoff + 1

    @property
    def modes(self) -> np.ndarray:
        return np.arange(-self.cutoff, self.cutoff + 1)

    def slot(self, mode: int) -> int:
        """Row/column index of a mode; minus modes come first."""
        if not -self.cutoff <= mode <= self.cutoff:
            raise ValueError(f"mode {mode} outside window {self}")
        return mode + self.cutoff

    def default_grid(self) -> int:
        return 8 * (self.cutoff + 1)


def grid_points(grid_size: int) -> np.ndarray:
    return TWO_PI * np.arange(grid_size) / grid_size


class PeriodicFunction:
    """A 2*pi-periodic function held as grid samples plus centered coefficients.

    Coefficients are stored for |n| <= n_max, indexed so that
    ``coeff[n_max + n]`` is the coefficient of exp(i n x)/sqrt(2 pi).
    """

    def __init__(self, samples: np.ndarray, coefficients: np.ndarray, n_max: int):
        samples = np.asarray(samples, dtype=complex)
        coefficients = np.asarray(coefficients, dtype=complex)
        if coefficients.shape != (2 * n_max + 1,):
            raise ValueError("coefficient array must have length 2*n_max + 1")
        self.samples = samples
        self.coefficients = coefficients
        self.n_max = n_max

    @property
    def grid_size(self) -> int:
        return self.samples.size

    def coefficient(self, n: int) -> complex:
        if abs(n) > self.n_max:
            raise ValueError(f"coefficient {n} not retained (n_max={self.n_max})")
        return complex(self.coefficients[self.n_max + n])

    def mean(self) -> complex:
        return self.coefficient(0) / SQRT_TWO_PI

    def evaluate(self, x: np.ndarray | float) -> np.ndarray | complex:
        """Evaluate the retained-mode truncation at arbitrary points."""
        x = np.asarray(x, dtype=float)
        ns = np.arange(-self.n_max, self.n_max + 1)
        values = np.exp(1j * np.outer(x, ns)) @ self.coefficients / SQRT_TWO_PI
        return values if values.ndim else complex(values)

    def _grid_frequencies(self) -> np.ndarray:
        g = self.grid_size
        return np.fft.fftfreq(g, d=1.0 / g)

    def derivative(self) -> "PeriodicFunction":
        """Spectral derivative on the full grid spectrum (coefficient n -> i n)."""
        freqs = self._grid_frequencies()
        dspec = np.fft.fft(self.samples) * (1j * freqs)
        if self.grid_size % 2 == 0:
            dspec[self.grid_size // 2] = 0.0  # ambiguous Nyquist mode
        samples = np.fft.ifft(dspec)
        ns = np.arange(-self.n_max, self.n_max + 1)
        return PeriodicFunction(samples, self.coefficients * (1j * ns), self.n_max)

    def shifted(self, delta: float) -> "PeriodicFunction":
        """The rotated function x -> f(x - delta), shifted in the full spectrum."""
        freqs = self._grid_frequencies()
        spec = np.fft.fft(self.samples) * np.exp(-1j * freqs * delta)
        samples = np.fft.ifft(spec)
        ns = np.arange(-self.n_max, self.n_max + 1)
        coeffs = self.coefficients * np.exp(-1j * ns * delta)
        return PeriodicFunction(samples, coeffs, self.n_max)


def analyze(
    f: Callable[[np.ndarray], np.ndarray] | Sequence[complex] | np.ndarray,
    window: ModeWindow,
    grid_size: int | None = None,
) -> PeriodicFunction:
    """Sample a periodic function and extract coefficients for |n| <= 2M + 1.

    Accepts either a callable evaluated on the uniform grid or an array of
    samples already on that grid.  The grid must satisfy G >= 4M + 4 so the
    retained coefficients are alias-free for smooth inputs.
    """
    n_max = 2 * window.cutoff + 1
    if grid_size is None:
        grid_size = max(window.default_grid(), 2 * n_max + 2)
    if grid_size < 4 * window.cutoff + 4:
        raise GridTooCoarse(
            f"grid {grid_size} < 4M+4 = {4 * window.cutoff + 4} for M={window.cutoff}"
        )
    if callable(f):
        samples = np.asarray(f(grid_points(grid_size)), dtype=complex)
    else:
        samples = np.asarray(f, dtype=complex)
        if samples.ndim != 1:
            raise ValueError("sample input must be one-dimensional")
        grid_size = samples.size
        if grid_size < 4 * window.cutoff + 4:
            raise GridTooCoarse(
                f"grid {grid_size} < 4M+4 = {4 * window.cutoff + 4} for M={window.cutoff}"
            )
    spectrum = np.fft.fft(samples) * (SQRT_TWO_PI / grid_size)
    coeffs = np.empty(2 * n_max + 1, dtype=complex)
    for n in range(-n_max, n_max + 1):
        coeffs[n_max + n] = spectrum[n % grid_size]
    return PeriodicFunction(samples, coeffs, n_max)


def from_coefficients(
    coefficients: dict[int, complex] | np.ndarray,
    n_max: int,
    grid_size: int | None = None,
) -> PeriodicFunction:
    """Build a PeriodicFunction from exact coefficients.

    Used when grid sampling is not spectrally faithful (e.g. jump
    discontinuities); the sample array is the retained-mode synthesis.
    """
    coeffs = np.zeros(2 * n_max + 1, dtype=complex)
    if isinstance(coefficients, dict):
        for n, c in coefficients.items():
            if abs(n) > n_max:
                raise ValueError(f"coefficient index {n} beyond n_max={n_max}")
            coeffs[n_max + n] = c
    else:
        arr = np.asarray(coefficients, dtype=complex)
        if arr.shape != (2 * n_max + 1,):
            raise ValueError("coefficient array must have length 2*n_max+1")
        coeffs = arr
    if grid_size is None:
        grid_size = max(4 * n_max + 4, 16)
    xs = grid_points(grid_size)
    ns = np.arange(-n_max, n_max + 1)
    samples = np.exp(1j * np.outer(xs, ns)) @ coeffs / SQRT_TWO_PI
    return PeriodicFunction(samples, coeffs, n_max)


def sawtooth_coefficients(n_max: int) -> PeriodicFunction:
    """Exact coefficients of the sawtooth x -> x on [0, 2 pi).

    c_0 = sqrt(2 pi) * pi and c_n = i sqrt(2 pi) / n for n != 0.  The jump at
    0 makes grid analysis unreliable, hence the closed form.
    """
    coeffs: dict[int, complex] = {0: SQRT_TWO_PI * math.pi}
    for n in range(1, n_max + 1):
        coeffs[n] = 1j * SQRT_TWO_PI / n
        coeffs[-n] = -1j * SQRT_TWO_PI / n
    return from_coefficients(coeffs, n_max)


@dataclass
class OneParticleOperator:
    """A dense operator on the windowed mode space, indexed by slots."""

    window: ModeWindow
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self) -> None:
        self.matrix = np.asarray(self.matrix, dtype=complex)
        if self.matrix.shape != (self.window.size, self.window.size):
            raise WindowMismatch(
                f"matrix shape {self.matrix.shape} does not fit window M={self.window.cutoff}"
            )

    # Block views; the minus block occupies the leading M slots.
    @property
    def minus_minus(self) -> np.ndarray:
        m = self.window.n_minus
        return self.matrix[:m, :m]

    @property
    def minus_plus(self) -> np.ndarray:
        m = self.window.n_minus
        return self.matrix[:m, m:]

    @property
    def plus_minus(self) -> np.ndarray:
        m = self.window.n_minus
        return self.matrix[m:, :m]

    @property
    def plus_plus(self) -> np.ndarray:
        m = self.window.n_minus
        return self.matrix[m:, m:]

    def entry(self, mode_row: int, mode_col: int) -> complex:
        return complex(self.matrix[self.window.slot(mode_row), self.window.slot(mode_col)])

    def dagger(self) -> "OneParticleOperator":
        return OneParticleOperator(self.window, self.matrix.conj().T)

    def __matmul__(self, other: "OneParticleOperator") -> "OneParticleOperator":
        if self.window != other.window:
            raise WindowMismatch("cannot compose operators on different windows")
        return OneParticleOperator(self.window, self.matrix @ other.matrix)


def multiplication_operator(f: PeriodicFunction, window: ModeWindow) -> OneParticleOperator:
    """Matrix of multiplication by f: A[m, n] = f_(m - n) / sqrt(2 pi)."""
    need = 2 * window.cutoff
    if f.n_max < need:
        raise WindowMismatch(
            f"need coefficients up to |n|={need}, function retains {f.n_max}"
        )
    k0 = f.n_max
    first_col = f.coefficients[k0 : k0 + window.size] / SQRT_TWO_PI
    first_row = f.coefficients[k0 - window.size + 1 : k0 + 1][::-1] / SQRT_TWO_PI
    return OneParticleOperator(window, toeplitz(first_col, first_row))


def shift_operator(window: ModeWindow) -> OneParticleOperator:
    """Multiplication by exp(i x): e_n -> e_(n+1), the top mode truncated to 0.

    Raw truncation (no wrap-around) keeps the charge-shift structure: the
    minus-minus block annihilates e_(-1) while its adjoint only loses mass
    at the artificial window edge.
    """
    return OneParticleOperator(window, np.eye(window.size, k=-1, dtype=complex))


def rotate_one_particle(op: OneParticleOperator, omega: float) -> OneParticleOperator:
    """Conjugate by the rotation U(omega) = diag(exp(-i n omega))."""
    modes = op.window.modes
    phases = np.exp(-1j * modes * omega)
    return OneParticleOperator(op.window, op.matrix * np.outer(phases, phases.conj()))


def hs_offdiag_norm_sq(op: OneParticleOperator) -> float:
    """Sum of squared Hilbert-Schmidt norms of the off-diagonal blocks.

    Tr(A_-+ A_+-^) + Tr(A_+- A_-+^) restricted to the window; finite in the
    infinite-window limit exactly when the one-particle operator is
    implementable on the Fock space (the off-diagonal blocks must be
    Hilbert-Schmidt).
    """
    a_pm = op.plus_minus
    a_mp = op.minus_plus
    return float(np.sum(np.abs(a_pm) ** 2) + np.sum(np.abs(a_mp) ** 2))


def windowed_mode_sum(coefficients: Callable[[int], complex], cutoff: int) -> float:
    """Window-weighted analogue of sum_n n |f_n|^2 for a multiplication operator.

    For multiplication by f on the window {-M..M} the off-diagonal HS mass is
    (1/2 pi) * sum_k w(k) (|f_k|^2 + |f_-k|^2) with w(k) = min(k, 2M+1-k) for
    1 <= k <= 2M.  Serves as the independent series route for convergence and
    divergence checks.
    """
    total = 0.0
    for k in range(1, 2 * cutoff + 1):
        w = min(k, 2 * cutoff + 1 - k)
        total += w * (abs(coefficients(k)) ** 2 + abs(coefficients(-k)) ** 2)
    return total / TWO_PI


def fredholm_index(
    op: OneParticleOperator,
    threshold: float = 1e-8,
    edge_fraction: float = 0.25,
) -> int:
    """dim ker(V--) - dim ker(V--*), discarding truncation artifacts.

    Kernel vectors are found by SVD rank counting at a relative threshold.
    On a finite window every square block has equal kernel and cokernel
    dimension, so genuine kernel vectors are separated from truncation
    artifacts by localization: a kernel vector concentrated (more than half
    of its mass) on the modes nearest the artificial window edge -M is an
    artifact of cutting the window and is not counted.
    """
    v_mm = op.minus_minus
    m = v_mm.shape[0]
    u, sigma, vh = np.linalg.svd(v_mm)
    scale = sigma[0] if sigma.size and sigma[0] > 0 else 1.0
    rel = sigma / scale
    near = np.sum((rel > threshold / 10) & (rel < threshold * 10))
    if near:
        raise IllConditioned(
            f"{near} singular value(s) within a decade of threshold {threshold}"
        )
    small = rel <= threshold
    band = max(1, math.ceil(m * edge_fraction))

    def genuine(vectors: np.ndarray) -> int:
        # Edge slots are the leading ones (modes -M..); columns are kernel vectors.
        count = 0
        for vec in vectors.T:
            mass_edge = float(np.sum(np.abs(vec[:band]) ** 2))
            if mass_edge <= 0.5:
                count += 1
        return count

    ker_right = vh[small].conj().T  # kernel of V--
    ker_left = u[:, small]  # kernel of V--^*
    return genuine(ker_right) - genuine(ker_left)
