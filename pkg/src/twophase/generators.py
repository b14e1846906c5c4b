"""Random admissible test data: band-limited graphs, embedded curves, harmonic fields."""
import numpy as np

from .geometry import ArcCurve, GraphInterface
from .harmonic import LayerField

TWO_PI = 2.0 * np.pi


def _rng(seed):
    return seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)


def random_profile(rng, n, kmax=8, decay=1.0):
    """Zero-mean trigonometric polynomial with modes ``1..kmax`` on ``n`` nodes."""
    x = TWO_PI * np.arange(n) / n
    k = np.arange(1, kmax + 1)
    amp = rng.normal(size=kmax) / k ** decay
    ph = rng.uniform(0, TWO_PI, size=kmax)
    u = np.cos(np.outer(x, k) + ph) @ amp
    du = -np.sin(np.outer(x, k) + ph) @ (amp * k)
    return u, du


def random_graph(seed=None, n=256, max_slope=2.0, kmax=8, max_height=None):
    """Band-limited zero-mean graph with ``|eta'|_inf`` drawn uniformly in (0, max_slope]."""
    rng = _rng(seed)
    u, du = random_profile(rng, n, kmax)
    s = rng.uniform(0.05, 1.0) * max_slope
    u = u * s / np.max(np.abs(du))
    if max_height is not None and np.max(np.abs(u)) > max_height:
        u = u * max_height / np.max(np.abs(u))
    return GraphInterface(u)


def graph_corpus(count=50, seed=0, n=256, max_slope=2.0, kmax=8):
    rng = _rng(seed)
    return [random_graph(rng, n, max_slope, kmax) for _ in range(count)]


def random_overhang(seed=None, n=256, meanders=5, amplitude=None, max_height=0.75):
    """Embedded interface that is not a graph, already at uniform arc length.

    The tangent angle is ``theta(u) = sum_k a_k sin(k m u + phi_k)`` over odd
    ``k`` with ``m`` meanders per period.  Odd harmonics make
    ``theta(u + pi/m) = -theta(u)``, so ``sin(theta)`` integrates to zero and
    the curve closes; ``|theta| > pi/2`` somewhere gives the overhang.
    Candidates that come too close to themselves or leave the height band are
    redrawn.
    """
    from .geometry import chord_arc_constant
    rng = _rng(seed)
    u = TWO_PI * np.arange(n) / n
    for _ in range(200):
        a1 = rng.uniform(1.62, 1.8) if amplitude is None else amplitude
        theta = a1 * np.sin(meanders * u + rng.uniform(0, TWO_PI))
        theta += rng.uniform(-0.15, 0.15) * np.sin(3 * meanders * u + rng.uniform(0, TWO_PI))
        c = np.cos(theta)
        if c.mean() <= 0.05:
            continue
        length = TWO_PI / c.mean()
        alpha = _antiderivative(c, length) + rng.uniform(0, TWO_PI)
        beta = _antiderivative(np.sin(theta), length)
        beta -= beta.mean()
        if np.max(np.abs(beta)) > max_height:
            continue
        curve = ArcCurve(alpha, beta, length, winding=1, check=True, tol=1e-9)
        if chord_arc_constant(curve, refine=False) > 0.05:
            return curve
    raise RuntimeError("could not draw an admissible overhanging curve")


def _antiderivative(f, length):
    """Spectral antiderivative on ``[0, length)`` of periodic samples, zero at s = 0."""
    n = len(f)
    c = np.fft.rfft(f) / n
    k = np.arange(len(c)) * TWO_PI / length
    s = length * np.arange(n) / n
    out = c[0].real * s
    ck = np.zeros_like(c)
    ck[1:] = c[1:] / (1j * k[1:])
    ck[-1] = 0.0
    per = np.fft.irfft(ck, n) * n
    return out + per - per[0]


def random_loop(seed=None, n=256, radius=0.5, wobble=0.15, kmax=5, center=(np.pi, 0.0)):
    """Star-shaped closed loop ``r(theta) = R (1 + sum eps_k cos(k theta + phi_k))``."""
    rng = _rng(seed)
    m = n
    th = TWO_PI * np.arange(m) / m
    k = np.arange(2, kmax + 1)
    eps = rng.uniform(-1, 1, size=len(k)) / k ** 2
    eps *= wobble / max(np.sum(np.abs(eps)), 1e-300)
    ph = rng.uniform(0, TWO_PI, size=len(k))
    r = radius * (1.0 + np.cos(np.outer(th, k) + ph) @ eps)
    return ArcCurve.from_points(center[0] + r * np.cos(th), center[1] + r * np.sin(th),
                                winding=0, n=n)


def curve_corpus(count=50, seed=0, n=256):
    """Mix of overhanging interfaces, graphs traced by arc length, and loops."""
    rng = _rng(seed)
    out = []
    for i in range(count):
        kind = i % 3
        if kind == 0:
            out.append(random_overhang(rng, n))
        elif kind == 1:
            g = random_graph(rng, n, max_slope=0.8, kmax=4, max_height=0.6)
            out.append(ArcCurve.from_graph(g, n=n))
        else:
            out.append(random_loop(rng, n, radius=rng.uniform(0.2, 0.6)))
    return out


def random_field(layer, seed=None, n=256, kmax=8, decay=1.5):
    """Field with random low-mode coefficients on the line y = 0."""
    rng = _rng(seed)
    c = np.zeros(n // 2 + 1, dtype=complex)
    k = np.arange(1, kmax + 1)
    c[1:kmax + 1] = (rng.normal(size=kmax) + 1j * rng.normal(size=kmax)) / k ** decay
    c[0] = rng.normal()
    return LayerField(layer, c)
