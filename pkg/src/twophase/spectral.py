"""Fourier machinery on the 2*pi-periodic line.

Coefficients follow ``u(x) = sum_k c_k exp(i k x)`` with ``c = rfft(u) / n``,
so only ``k >= 0`` is stored.  Products go through a 3/2 zero-padded grid.
"""
from functools import lru_cache

import numpy as np

from .errors import RefinementNeeded


def tail_ratio(coeffs):
    """Largest coefficient in the top third of the spectrum over the largest overall.

    The mean is ignored: an offset says nothing about resolution.
    """
    c = np.abs(np.asarray(coeffs))
    c = c[1:]
    peak = c.max() if c.size else 0.0
    if peak == 0.0:
        return 0.0
    cut = (2 * len(c)) // 3
    return float(c[cut:].max() / peak)


class Grid:
    """Uniform periodic grid with ``n`` nodes on [0, 2*pi)."""

    def __init__(self, n):
        n = int(n)
        if n < 8 or n % 4:
            raise ValueError("grid size must be a multiple of 4 and at least 8")
        self.n = n
        self.m = 3 * n // 2
        self.x = 2 * np.pi * np.arange(n) / n
        self.k = np.arange(n // 2 + 1, dtype=float)
        # derivative multiplier drops the Nyquist mode so real data stays real
        self.ik = 1j * self.k
        self.ik[-1] = 0.0
        self.dx = 2 * np.pi / n

    def __repr__(self):
        return f"Grid(n={self.n})"

    # transforms
    def fwd(self, u):
        return np.fft.rfft(u) / self.n

    def inv(self, c):
        return np.fft.irfft(c, self.n) * self.n

    def pad_inv(self, c):
        """Values of coefficient array ``c`` on the padded grid."""
        cp = np.zeros(self.m // 2 + 1, dtype=complex)
        cp[: self.n // 2] = c[: self.n // 2]
        return np.fft.irfft(cp, self.m) * self.m

    def pad_fwd(self, v):
        """Truncate padded-grid values ``v`` back to resolved coefficients."""
        cp = np.fft.rfft(v) / self.m
        c = np.zeros(self.n // 2 + 1, dtype=complex)
        c[: self.n // 2] = cp[: self.n // 2]
        return c

    def mul(self, a, b):
        """Dealiased product of two coefficient arrays."""
        return self.pad_fwd(self.pad_inv(a) * self.pad_inv(b))

    # operators
    def deriv(self, c, order=1):
        return c * self.ik ** order

    def dx_phys(self, u):
        return self.inv(self.deriv(self.fwd(u)))

    def mean(self, u):
        return float(np.mean(u))

    def integrate(self, u):
        """Trapezoid rule over one period; spectrally exact for resolved data."""
        return float(np.sum(u) * self.dx)

    def evaluate(self, c, xs):
        """Evaluate the trigonometric interpolant at arbitrary points."""
        xs = np.asarray(xs, dtype=float)
        kk = self.k[1: self.n // 2]
        e = np.exp(1j * np.multiply.outer(xs, kk))
        val = c[0].real + 2.0 * (e @ c[1: self.n // 2]).real
        val = val + c[-1].real * np.cos(self.n // 2 * xs)
        return val

    def check_resolved(self, u, threshold=1e-8, what="data"):
        r = tail_ratio(self.fwd(u))
        if r > threshold:
            raise RefinementNeeded(
                f"{what} under-resolved: spectral tail ratio {r:.2e} > {threshold:.0e}",
                tail_ratio=r,
            )
        return r


@lru_cache(maxsize=32)
def grid(n):
    """Shared, immutable grid instance for ``n`` nodes."""
    return Grid(n)


def depth_factor(kabs, depth):
    """``tanh(|k| H)`` with the infinite-depth limit 1."""
    if np.isinf(depth):
        return np.ones_like(kabs)
    return np.tanh(kabs * depth)


def fourth_order_derivative(values, h):
    """First derivative of equally spaced samples, fourth order everywhere.

    Centred five-point stencil in the interior, one-sided stencils at the ends.
    """
    f = np.asarray(values, dtype=float)
    n = len(f)
    if n < 5:
        raise ValueError("need at least five samples")
    d = np.empty(n)
    d[2:-2] = (f[:-4] - 8 * f[1:-3] + 8 * f[3:-1] - f[4:]) / (12 * h)
    d[0] = (-25 * f[0] + 48 * f[1] - 36 * f[2] + 16 * f[3] - 3 * f[4]) / (12 * h)
    d[1] = (-3 * f[0] - 10 * f[1] + 18 * f[2] - 6 * f[3] + f[4]) / (12 * h)
    d[-1] = (25 * f[-1] - 48 * f[-2] + 36 * f[-3] - 16 * f[-4] + 3 * f[-5]) / (12 * h)
    d[-2] = (3 * f[-1] + 10 * f[-2] - 18 * f[-3] + 6 * f[-4] - f[-5]) / (12 * h)
    return d
