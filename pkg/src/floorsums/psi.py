"""The first Bernoulli function psi(x) = x - floor(x) - 1/2 and its Vaaler
approximation by trigonometric polynomials.

The degree-H Vaaler polynomial damps psi's Fourier coefficients -1/(2 pi i h)
by J(h/(H+1)) with J(t) = pi t (1-t) cot(pi t) + t, and satisfies the
pointwise bound |psi(x) - psi_H(x)| <= F_H(x)/(2H+2) against the Fejer kernel
F_H(x) = sum_{|h|<=H} (1 - |h|/(H+1)) e(hx).  Correctness is gated on that
inequality (verify_pointwise_bound), not on the coefficient formulas.
Everything here is pure and stateless.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

_MAX_H = 10**6


def psi_exact(x: float) -> float:
    """psi(x) = x - floor(x) - 1/2, in [-1/2, 1/2)."""
    return x - math.floor(x) - 0.5


@dataclass(frozen=True)
class TrigPolynomial:
    """A real-valued trigonometric polynomial sum_{1<=|h|<=H} c_h e(hx).

    Coefficients satisfy c_{-h} = conj(c_h) and |c_h| <= 1/(2|h|).
    """

    H: int
    coefficients: dict[int, complex]

    def damping(self) -> np.ndarray:
        """The real damping factors J(h/(H+1)) for h = 1..H."""
        h = np.arange(1, self.H + 1)
        return np.array([(2 * math.pi * hh * self.coefficients[hh]).imag
                         for hh in h])

    def __call__(self, x):
        """Evaluate at a float or numpy array, returning real values."""
        xs = np.atleast_1d(np.asarray(x, dtype=np.float64))
        h = np.arange(1, self.H + 1)
        jhat = self.damping()
        # c_h = i J_h/(2 pi h) gives  -sum J_h sin(2 pi h x)/(pi h)
        acc = np.zeros(xs.shape, dtype=np.float64)
        # chunk the harmonics so H up to 1e6 stays in bounded memory
        step = max(1, (1 << 22) // max(xs.size, 1))
        for start in range(0, self.H, step):
            hh = h[start:start + step]
            acc -= (jhat[start:start + step] / (math.pi * hh)) @ \
                np.sin(2 * math.pi * np.outer(hh, xs))
        return acc if np.ndim(x) else float(acc[0])

    def eval_complex(self, x: float) -> complex:
        """Direct two-sided evaluation sum c_h e(hx); imag part ~ 0."""
        out = 0j
        for h, c in self.coefficients.items():
            out += c * complex(math.cos(2 * math.pi * h * x),
                               math.sin(2 * math.pi * h * x))
        return out


def _vaaler_damping(H: int) -> np.ndarray:
    t = np.arange(1, H + 1, dtype=np.float64) / (H + 1)
    return np.pi * t * (1 - t) / np.tan(np.pi * t) + t


def vaaler_polynomial(H: int) -> TrigPolynomial:
    """The degree-H Vaaler approximation of psi."""
    if not 1 <= H <= _MAX_H:
        raise ValueError(f"H must be in [1, {_MAX_H}]")
    jhat = _vaaler_damping(H)
    coeffs: dict[int, complex] = {}
    for h in range(1, H + 1):
        c = complex(0.0, jhat[h - 1] / (2 * math.pi * h))
        coeffs[h] = c
        coeffs[-h] = c.conjugate()
    return TrigPolynomial(H=H, coefficients=coeffs)


def fejer_kernel(H: int, x) -> np.ndarray | float:
    """F_H(x) = sin^2((H+1) pi x) / ((H+1) sin^2(pi x)) >= 0, F_H(0) = H+1."""
    xs = np.asarray(x, dtype=np.float64)
    s = np.sin(np.pi * xs)
    num = np.sin((H + 1) * np.pi * xs)
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.where(np.abs(s) < 1e-15, float(H + 1), num * num / ((H + 1) * s * s))
    return val if val.shape else float(val)


def fejer_envelope(H: int, x) -> np.ndarray | float:
    """Pointwise Vaaler error envelope F_H(x)/(2H+2)."""
    if H < 1:
        raise ValueError("H must be >= 1")
    v = fejer_kernel(H, x)
    return v / (2 * H + 2)


def verify_pointwise_bound(H: int, grid_size: int) -> float:
    """Max of |psi(x) - psi_H(x)| - F_H(x)/(2H+2) over a uniform grid.

    Grid points at integers are excluded (psi jumps there).  A correct
    construction keeps the returned value at rounding level, <= 1e-9.
    """
    if grid_size < 10**3:
        raise ValueError("grid_size must be >= 1000")
    poly = vaaler_polynomial(H)
    x = np.arange(1, grid_size) / grid_size
    err = np.abs((x - np.floor(x) - 0.5) - poly(x))
    return float(np.max(err - fejer_envelope(H, x)))
