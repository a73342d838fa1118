"""Dirichlet polynomials: mollifier construction, smoothed-zeta coefficients,
exact multiplicative convolution, and critical-line evaluation.

A DirichletPoly is a dense coefficient vector a(1..N) together with an
optional recorded coefficient-growth bound |a(n)| <= C n^eps (metadata only;
enforcement is the caller's business).  Evaluation uses compensated
summation so that identities asserted at 1e-12 are not at the mercy of
naive accumulation order.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .smoothfn import PlateauWindow, WindowContractError

# Convolutions larger than this are refused (dense storage blows up).
MAX_CONV_LENGTH = 20_000_000


class PolyLengthError(ValueError):
    """Requested polynomial length exceeds the configured cap."""


@dataclass(frozen=True)
class DirichletPoly:
    """Coefficients a(1..N) of sum a(n) n^{-s}, stored densely.

    ``coeffs[n]`` is a(n); index 0 is unused and kept at 0.  ``bound_C`` and
    ``bound_eps`` record the growth bound |a(n)| <= C n^eps claimed for the
    sequence (not enforced here).
    """

    coeffs: np.ndarray = field(repr=False)
    length_N: int
    label: str = ""
    bound_C: float = 1.0
    bound_eps: float = 0.0

    def __post_init__(self):
        if self.length_N < 1:
            raise ValueError("length_N must be >= 1")
        if len(self.coeffs) != self.length_N + 1:
            raise ValueError("coeffs must have length length_N + 1")

    def coeff(self, n: int) -> complex:
        if not 1 <= n <= self.length_N:
            return 0.0 + 0.0j
        return complex(self.coeffs[n])


def make_poly(coeffs_1_to_n, label: str = "", bound_C: float = 1.0,
              bound_eps: float = 0.0) -> DirichletPoly:
    """Build a polynomial from a sequence of coefficients for n = 1..N."""
    arr = np.asarray(coeffs_1_to_n, dtype=complex)
    full = np.zeros(len(arr) + 1, dtype=complex)
    full[1:] = arr
    return DirichletPoly(coeffs=full, length_N=len(arr), label=label,
                         bound_C=bound_C, bound_eps=bound_eps)


def delta_poly() -> DirichletPoly:
    """The identity element: a(1) = 1 and nothing else."""
    return make_poly([1.0], label="delta")


def build_L_theta(T: float, theta: float, sieve) -> DirichletPoly:
    """Truncated Moebius mollifier with linear taper:

        coefficient at n is mu(n) (1 - log n / log T^theta),  n <= T^theta.
    """
    if T < 10:
        raise ValueError("T must be >= 10")
    x = T ** theta
    if x < 2:
        raise ValueError("T^theta must be >= 2")
    N = int(math.floor(x))
    sieve.check(N)
    from .arith import mobius_table
    mu = mobius_table(N, sieve).astype(float)
    n = np.arange(0, N + 1, dtype=float)
    n[0] = 1.0
    taper = 1.0 - np.log(n) / (theta * math.log(T))
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[1:] = mu[1:] * taper[1:]
    return DirichletPoly(coeffs=coeffs, length_N=N,
                         label=f"L_theta(T={T:g},theta={theta:g})")


def zeta_window_coeffs(T: float, epsilon: float,
                       w: PlateauWindow) -> DirichletPoly:
    """Coefficients w(n/T1) with T1 = T^(1+epsilon): the smoothed main sum
    whose evaluation approximates zeta on the critical line for t in [T, 2T].
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    t1 = T ** (1.0 + epsilon)
    if t1 < 2:
        raise ValueError("T^(1+epsilon) must be >= 2")
    s0, s1 = w.support
    if not (s0 <= 0.0 and s1 <= 1.0 + 1e-12):
        raise WindowContractError(
            f"window support {w.support} must sit inside [0, 1]")
    if abs(w(0.0) - 1.0) > 1e-12:
        raise WindowContractError("window must have w(0) = 1")
    probe = w(np.linspace(0.0, 1.0, 257))
    if np.any(probe < -1e-12) or np.any(probe > 1.0 + 1e-12):
        raise WindowContractError("window must satisfy 0 <= w <= 1")
    N = int(math.floor(t1))
    if N > MAX_CONV_LENGTH:
        raise PolyLengthError(f"smoothed zeta length {N} exceeds cap")
    n = np.arange(0, N + 1, dtype=float)
    coeffs = np.zeros(N + 1, dtype=complex)
    coeffs[1:] = w(n[1:] / t1)
    return DirichletPoly(coeffs=coeffs, length_N=N,
                         label=f"zeta_window(T={T:g},eps={epsilon:g})")


def dirichlet_convolve(A: DirichletPoly, M: DirichletPoly,
                       length_cap: int = MAX_CONV_LENGTH) -> DirichletPoly:
    """Exact multiplicative (Dirichlet) convolution:

        b(n) = sum_{d e = n} A(d) M(e),   n <= A.length_N * M.length_N.

    No truncation: the product polynomial is represented in full.
    """
    out_len = A.length_N * M.length_N
    if out_len > length_cap:
        raise PolyLengthError(
            f"convolution length {out_len} exceeds cap {length_cap}")
    out = np.zeros(out_len + 1, dtype=complex)
    # iterate over the shorter polynomial for the O(sum N/d) inner updates
    short, long_ = (A, M) if A.length_N <= M.length_N else (M, A)
    for d in range(1, short.length_N + 1):
        c = short.coeffs[d]
        if c == 0:
            continue
        out[d::d][:long_.length_N] += c * long_.coeffs[1:]
    return DirichletPoly(coeffs=out, length_N=out_len,
                         label=f"({A.label})*({M.label})")


@lru_cache(maxsize=16)
def _log_table(N: int) -> np.ndarray:
    """log n for n = 0..N (index 0 unused); cached per length."""
    n = np.arange(0, N + 1, dtype=float)
    n[0] = 1.0
    return np.log(n)


def _csum(terms: np.ndarray) -> complex:
    """Compensated (exact-ish) complex summation via math.fsum."""
    return complex(math.fsum(terms.real), math.fsum(terms.imag))


def evaluate_poly(A: DirichletPoly, sigma: float, t: float) -> complex:
    """A(sigma + it) = sum a(n) n^{-sigma} e^{-i t log n}, compensated."""
    logn = _log_table(A.length_N)[1:]
    amp = np.exp(-sigma * logn)
    terms = A.coeffs[1:] * amp * np.exp(-1j * t * logn)
    return _csum(terms)


def evaluate_poly_many(A: DirichletPoly, sigma: float, ts) -> np.ndarray:
    """Vectorized evaluation at many t values (plain dot-product reduction;
    use evaluate_poly when 1e-12-level reproducibility is asserted)."""
    ts = np.asarray(ts, dtype=float)
    logn = _log_table(A.length_N)[1:]
    weighted = A.coeffs[1:] * np.exp(-sigma * logn)
    out = np.empty(ts.shape, dtype=complex)
    flat = ts.reshape(-1)
    res = out.reshape(-1)
    chunk = max(1, int(4e6 // max(len(logn), 1)))
    for lo in range(0, flat.size, chunk):
        phase = np.exp(-1j * np.outer(flat[lo:lo + chunk], logn))
        res[lo:lo + chunk] = phase @ weighted
    return out


def windowed_sum(A: DirichletPoly, f: PlateauWindow, u: float) -> complex:
    """sum a(n) n^{-iu} f(log n / 2 pi): the coefficient-side realization of
    smoothing A(it) against the transform of f centered at u.

    When f is identically 1 on [log 1/2pi, log N/2pi] this is the same
    floating-point sum as evaluate_poly(A, 0, u) (reproducing identity).
    """
    logn = _log_table(A.length_N)[1:]
    wvals = f(logn / (2.0 * math.pi))
    terms = A.coeffs[1:] * np.exp(-1j * u * logn) * wvals
    return _csum(terms)


def one_minus(A: DirichletPoly) -> DirichletPoly:
    """Coefficients of 1 - A(s) (used for F = 1 - zeta*M)."""
    out = -A.coeffs.copy()
    out[1] += 1.0
    return DirichletPoly(coeffs=out, length_N=A.length_N,
                         label=f"1-({A.label})")


def export_coeffs(A: DirichletPoly, path: str) -> None:
    """Write coefficients as CSV with header n,re,im."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["n", "re", "im"])
        for n in range(1, A.length_N + 1):
            c = A.coeffs[n]
            writer.writerow([n, repr(float(c.real)), repr(float(c.imag))])


def import_coeffs(path: str, label: str = "") -> DirichletPoly:
    """Read a CSV written by export_coeffs (columns n, re, im, header row)."""
    rows: dict[int, complex] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip().lower() for h in header[:3]] != ["n", "re", "im"]:
            raise ValueError(f"{path}: expected header n,re,im")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                n = int(row[0])
                c = complex(float(row[1]), float(row[2]))
            except (ValueError, IndexError) as exc:
                raise ValueError(f"{path}:{lineno}: bad coefficient row") from exc
            if n < 1:
                raise ValueError(f"{path}:{lineno}: index must be >= 1")
            rows[n] = c
    if not rows:
        raise ValueError(f"{path}: no coefficients")
    N = max(rows)
    coeffs = np.zeros(N + 1, dtype=complex)
    for n, c in rows.items():
        coeffs[n] = c
    return DirichletPoly(coeffs=coeffs, length_N=N,
                         label=label or f"file:{path}")
