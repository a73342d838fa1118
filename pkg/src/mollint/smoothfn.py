"""Smooth plateau windows and Beurling-Selberg interval majorants.

PlateauWindow is the canonical C-infinity bump built from exp(-1/x) ramps:
0 outside its support, 1 on its plateau.  MajorantKernel realizes the
band-limited majorant of an interval indicator,

    K(x) = B(delta (x - a))/2 + B(delta (b - x))/2,

with B the Beurling function, so that K >= indicator([a,b]), the transform
vanishes for |x| > delta, and K^(0) = b - a + 1/delta.

Note on B: the series is evaluated in the numerically stable form

    B(z) = 2 z sinc(z)^2 + sum_{n=0}^{M} sinc(z-n)^2
           - sum_{n=1}^{M} sinc(z+n)^2 + tail(M, z)

(sinc(z) = sin(pi z)/(pi z)), which is the classical partial-fraction
expansion with the (sin pi z / pi)^2 prefactor absorbed termwise; the tail
beyond the truncation order M is added via the midpoint estimate, accurate
to O(1/M^3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.integrate import quad
from scipy.special import polygamma


class WindowContractError(ValueError):
    """Plateau/support geometry violates the window contract."""


class AccuracyError(RuntimeError):
    """Quadrature failed to reach the requested accuracy."""

    def __init__(self, message: str, achieved: float):
        super().__init__(f"{message} (achieved {achieved:.3e})")
        self.achieved = achieved


# ---------------------------------------------------------------------------
# plateau windows
# ---------------------------------------------------------------------------

def _smooth_step(u):
    """Canonical C-infinity step: 0 at u<=0, 1 at u>=1, exp(-1/x) based.

    Satisfies step(u) + step(1-u) = 1, so the ramp midpoint is exactly 1/2.
    """
    u = np.asarray(u, dtype=float)
    lo = u <= 0.0
    hi = u >= 1.0
    mid = ~(lo | hi)
    out = np.where(hi, 1.0, 0.0)
    um = np.clip(u, 1e-12, 1.0 - 1e-12)
    a = np.exp(-1.0 / um)
    b = np.exp(-1.0 / (1.0 - um))
    out = np.where(mid, a / (a + b), out)
    return out


@dataclass(frozen=True)
class PlateauWindow:
    """Smooth window: 1 on [p0, p1], 0 outside [s0, s1], smooth ramps between."""

    support: tuple[float, float]
    plateau: tuple[float, float]

    def __call__(self, x):
        s0, s1 = self.support
        p0, p1 = self.plateau
        x = np.asarray(x, dtype=float)
        val = np.ones(x.shape, dtype=float)
        if p0 > s0:
            ramp = (x - s0) / (p0 - s0)
            val = np.minimum(val, _smooth_step(ramp))
        else:
            val = np.where(x < s0, 0.0, val)
        if s1 > p1:
            ramp = (s1 - x) / (s1 - p1)
            val = np.minimum(val, _smooth_step(ramp))
        else:
            val = np.where(x > s1, 0.0, val)
        val = np.where((x < s0) | (x > s1), 0.0, val)
        if val.ndim == 0:
            return float(val)
        return val


def make_plateau(support: tuple[float, float],
                 plateau: tuple[float, float]) -> PlateauWindow:
    """Window equal to 1 on ``plateau``, 0 outside ``support``.

    One ramp may degenerate (plateau touching the support edge); both
    degenerating would give a non-smooth indicator and is rejected.
    """
    s0, s1 = support
    p0, p1 = plateau
    if not (s0 <= p0 <= p1 <= s1):
        raise WindowContractError(
            f"plateau {plateau} not inside support {support}"
        )
    if p0 - s0 <= 0 and s1 - p1 <= 0:
        raise WindowContractError("both ramps degenerate: not smooth")
    return PlateauWindow(support=(float(s0), float(s1)),
                         plateau=(float(p0), float(p1)))


def window_fourier(f: PlateauWindow, x: float,
                   tol: float = 1e-10) -> complex:
    """f^(x) = integral of f(v) exp(-2 pi i v x) dv, adaptive quadrature.

    Forward transform with kernel exp(-2 pi i v x); accuracy 1e-10 absolute.
    """
    s0, s1 = f.support
    pts = [p for p in f.plateau if s0 < p < s1]
    re, re_err = quad(lambda v: f(v) * math.cos(2 * math.pi * v * x),
                      s0, s1, points=pts or None, limit=400,
                      epsabs=tol / 4, epsrel=0)
    im, im_err = quad(lambda v: -f(v) * math.sin(2 * math.pi * v * x),
                      s0, s1, points=pts or None, limit=400,
                      epsabs=tol / 4, epsrel=0)
    achieved = re_err + im_err
    if achieved > tol:
        raise AccuracyError("window_fourier quadrature did not converge", achieved)
    return complex(re, im)


# ---------------------------------------------------------------------------
# Beurling function
# ---------------------------------------------------------------------------

def _beurling_b_arr(x: np.ndarray, trunc: int) -> np.ndarray:
    shape = np.shape(x)
    x = np.asarray(x, dtype=float).reshape(-1)
    out = 2.0 * x * np.sinc(x) ** 2
    ns = np.arange(0, trunc + 1, dtype=float)
    step = max(1, int(4e6 // max(len(ns), 1)))
    for lo in range(0, x.size, step):
        chunk = x[lo:lo + step]
        diff = np.sinc(chunk[:, None] - ns[None, :]) ** 2
        s = diff.sum(axis=1)
        s -= (np.sinc(chunk[:, None] + ns[None, 1:]) ** 2).sum(axis=1)
        out[lo:lo + len(chunk)] += s
    # midpoint tail estimate for both series beyond trunc
    m = trunc + 0.5
    sin2 = (np.sin(math.pi * x) / math.pi) ** 2
    out += sin2 * (1.0 / (m - x) - 1.0 / (m + x))
    return out.reshape(shape)


def beurling_b(x, trunc: int = 10_000):
    """Beurling's majorant of sgn: entire, B(x) >= sgn(x), integral of
    B - sgn over the line equal to 1.  Truncation order ``trunc`` with an
    analytic tail correction; valid for |x| < trunc."""
    if trunc < 10:
        raise ValueError("trunc must be >= 10")
    arr = _beurling_b_arr(np.asarray(x, dtype=float), trunc)
    if arr.ndim == 0:
        return float(arr)
    return arr


# ---------------------------------------------------------------------------
# interval majorant
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MajorantKernel:
    """Band-limited majorant of the indicator of [a, b] at bandwidth delta."""

    interval: tuple[float, float]
    delta: float
    trunc: int

    def __call__(self, x):
        a, b = self.interval
        x = np.asarray(x, dtype=float)
        val = 0.5 * _beurling_b_arr(self.delta * (x - a), self.trunc) \
            + 0.5 * _beurling_b_arr(self.delta * (b - x), self.trunc)
        if val.ndim == 0:
            return float(val)
        return val


def majorant_make(interval: tuple[float, float], delta: float,
                  trunc: int = 10_000) -> MajorantKernel:
    """K(x) = B(delta(x-a))/2 + B(delta(b-x))/2 for the interval [a, b]."""
    a, b = interval
    if not a < b:
        raise ValueError(f"need a < b, got {interval}")
    if delta <= 0:
        raise ValueError("delta must be positive")
    if trunc < 10:
        raise ValueError("trunc must be >= 10")
    return MajorantKernel(interval=(float(a), float(b)), delta=float(delta),
                          trunc=int(trunc))


# Fourier transform of B - sgn, split as sinc^2 (transform: triangle
# function, handled exactly) plus an odd remainder integrated numerically.
# The remainder E(u) = B(u) - 1 - sinc(u)^2 on u > 0 has the closed form
#
#     E(u) = (sin pi u / pi)^2 (2/u - 1/u^2 - 2 psi'(u+1))
#
# (the series tail summed exactly by the trigamma function), which decays
# like u^-3, so the truncated quadrature below is accurate to ~1e-12.
_DHAT_U = 2000.0          # quadrature range for the odd remainder
_DHAT_PANEL = 0.25        # panel width (resolves the sin(2 pi u) oscillation)
_DHAT_ORDER = 8


@lru_cache(maxsize=4)
def _dhat_grid(u_range: float = _DHAT_U):
    """GL nodes/weights on [0, u_range] and E(u) = B(u) - 1 - sinc(u)^2 there."""
    gl_x, gl_w = np.polynomial.legendre.leggauss(_DHAT_ORDER)
    edges = np.arange(0.0, u_range + _DHAT_PANEL / 2, _DHAT_PANEL)
    mid = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * _DHAT_PANEL
    nodes = (mid[:, None] + half * gl_x[None, :]).ravel()
    weights = (half * gl_w)[None, :].repeat(len(mid), axis=0).ravel()
    s2 = (np.sin(math.pi * nodes) / math.pi) ** 2
    e_vals = s2 * (2.0 / nodes - 1.0 / nodes ** 2
                   - 2.0 * polygamma(1, nodes + 1.0))
    return nodes, weights, e_vals


def _dhat(xi: np.ndarray) -> np.ndarray:
    """Transform of D = B - sgn at frequencies xi: triangle + odd remainder."""
    xi = np.asarray(xi, dtype=float)
    nodes, weights, e_vals = _dhat_grid()
    tri = np.clip(1.0 - np.abs(xi), 0.0, None)
    # E is odd, so its transform is -2i * int_0^inf E(u) sin(2 pi u xi) du
    osc = np.sin(2.0 * math.pi * np.outer(xi, nodes))
    e_hat = -2j * (osc * (weights * e_vals)[None, :]).sum(axis=1)
    return tri + e_hat


def majorant_hat(K: MajorantKernel, x) -> float | np.ndarray:
    """Fourier transform of K, reported for the kernel recentered at the
    interval midpoint (a real, even function of x).

    K^(0) = b - a + 1/delta exactly; the transform vanishes (to truncation
    slack) for |x| > delta.
    """
    a, b = K.interval
    c = 0.5 * (a + b)
    x_arr = np.atleast_1d(np.asarray(x, dtype=float))
    # indicator part, recentered: int_{-L/2}^{L/2} e^{-2 pi i v x} dv
    L = b - a
    chi = L * np.sinc(L * x_arr)
    dh_plus = _dhat(x_arr / K.delta)
    dh_minus = np.conj(dh_plus)  # D real: D^(-xi) = conj(D^(xi))
    phase_a = np.exp(2j * math.pi * (c - a) * x_arr)
    phase_b = np.exp(-2j * math.pi * (b - c) * x_arr)
    val = chi + (phase_a * dh_plus + phase_b * dh_minus) / (2.0 * K.delta)
    # recentered kernel is real and even; the imaginary part is roundoff
    out = np.real(val)
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(out[0])
    return out
