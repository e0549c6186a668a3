"""Mollified sawtooth profiles ("blips") used to dress localized fields.

The profile is the periodic sawtooth smoothed by a compactly supported
mollifier of width eps < pi/2:

    alpha_eps(x) = integral over y of saw(x - y) * chi_eps(y)

with saw(u) = u mod 2*pi.  For x in [0, 2*pi) this reduces to the closed
form

    alpha_eps(x) = x + 2*pi * (T(x) - T(2*pi - x)),   T(u) = integral_u^eps chi_eps

so only tail integrals of the mollifier are ever needed.  The profile is
smooth, takes values in (0, 2*pi), equals x on (eps, 2*pi - eps), has mean
pi, and its derivative is 1 - 2*pi * (periodized chi_eps).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .covering import TWO_PI
from .errors import EpsilonOutOfRange
from .modes import ModeWindow, PeriodicFunction, analyze, grid_points


@dataclass(frozen=True)
class Mollifier:
    """Even, nonnegative, unit-mass bump supported on (-eps, eps)."""

    epsilon: float
    profile: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x: np.ndarray | float) -> np.ndarray | float:
        return self.profile(np.asarray(x, dtype=float))

    def tail_integral(self, a: np.ndarray | float) -> np.ndarray | float:
        """T(a) = integral_a^eps chi, clamped: 1 for a <= -eps, 0 for a >= eps."""
        arr = np.atleast_1d(np.asarray(a, dtype=float))
        out = np.zeros_like(arr)
        out[arr <= -self.epsilon] = 1.0
        interior = (arr > -self.epsilon) & (arr < self.epsilon)
        for idx in np.nonzero(interior)[0]:
            val, _ = quad(
                lambda t: float(self.profile(np.asarray(t))),
                arr[idx],
                self.epsilon,
                epsabs=1e-13,
                epsrel=1e-12,
            )
            out[idx] = val
        return out if np.ndim(a) else float(out[0])


def standard_mollifier(epsilon: float) -> Mollifier:
    """The bump c * exp(-1 / (1 - (x/eps)^2)) on (-eps, eps), unit mass."""
    if not 0.0 < epsilon < math.pi / 2:
        raise EpsilonOutOfRange(f"epsilon must lie in (0, pi/2), got {epsilon!r}")
    norm, _ = quad(lambda t: math.exp(-1.0 / (1.0 - t * t)), -1.0, 1.0,
                   epsabs=1e-14, epsrel=1e-13)

    def profile(x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        t = x / epsilon
        out = np.zeros_like(t)
        inside = np.abs(t) < 1.0
        ti = t[inside]
        out[inside] = np.exp(-1.0 / (1.0 - ti * ti)) / (norm * epsilon)
        return out

    return Mollifier(epsilon, profile)


class BlipFunction:
    """The mollified sawtooth, evaluable exactly at arbitrary points.

    Also carries a PeriodicFunction representation (grid samples plus
    Fourier coefficients) suitable for building multiplication operators.
    """

    def __init__(self, mollifier: Mollifier, periodic: PeriodicFunction):
        self.mollifier = mollifier
        self.periodic = periodic

    @property
    def epsilon(self) -> float:
        return self.mollifier.epsilon

    def evaluate(self, x: np.ndarray | float) -> np.ndarray | float:
        xs = np.atleast_1d(np.asarray(x, dtype=float))
        base = np.mod(xs, TWO_PI)
        chi = self.mollifier
        vals = base + TWO_PI * (
            np.asarray(chi.tail_integral(base)) - np.asarray(chi.tail_integral(TWO_PI - base))
        )
        return vals if np.ndim(x) else float(vals[0])

    def shifted_samples(self, delta: float, grid_size: int) -> np.ndarray:
        """Samples of alpha_eps(x - delta) from the closed form (no interpolation)."""
        return np.asarray(self.evaluate(grid_points(grid_size) - delta), dtype=float)


def blip(
    mollifier: Mollifier,
    window: ModeWindow,
    grid_size: int | None = None,
) -> BlipFunction:
    """Analyze the mollified sawtooth on a grid adapted to the window."""
    periodic = analyze(
        lambda xs: _closed_form(mollifier, xs), window, grid_size=grid_size
    )
    return BlipFunction(mollifier, periodic)


def _closed_form(chi: Mollifier, xs: np.ndarray) -> np.ndarray:
    base = np.mod(xs, TWO_PI)
    return base + TWO_PI * (
        np.asarray(chi.tail_integral(base)) - np.asarray(chi.tail_integral(TWO_PI - base))
    )


def blip_derivative(b: BlipFunction, grid_size: int | None = None) -> PeriodicFunction:
    """Closed-form derivative 1 - 2*pi * sum_k chi(x - 2*pi*k), analyzed on the grid."""
    window_sized = b.periodic.grid_size if grid_size is None else grid_size

    def deriv(xs: np.ndarray) -> np.ndarray:
        base = np.mod(xs, TWO_PI)
        # chi is supported in (-eps, eps) with eps < pi/2, so on [0, 2*pi)
        # only the copies at 0 and 2*pi contribute.
        return 1.0 - TWO_PI * (
            np.asarray(b.mollifier(base)) + np.asarray(b.mollifier(base - TWO_PI))
        )

    n_max = b.periodic.n_max
    window = ModeWindow((n_max - 1) // 2)
    return analyze(deriv, window, grid_size=window_sized)
