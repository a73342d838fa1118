"""Critical-line zeta evaluation and zero location.

Two evaluation backends:

* Euler-Maclaurin (``em``): O(t) work per point, accurate to ~1e-10 for
  10 <= t <= 1e5.  Default for all heights used by the acceptance runs.
* Riemann-Siegel (``rs``): main sum plus first correction term, O(sqrt(t))
  work, error ~ (t/2pi)^(-5/4).  Used for fast scanning at large heights.

Hardy's Z(t) = exp(i theta(t)) zeta(1/2 + it) is the real-valued zero
detector; ordinates are located by sign-change scanning plus bisection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import bernoulli

T_FLOOR = 10.0
TWO_PI = 2.0 * math.pi

# Euler-Maclaurin truncation: N = EM_N_FACTOR * t terms, EM_K tail corrections.
EM_N_FACTOR = 0.6
EM_N_MIN = 24
EM_K = 12
_B2K = bernoulli(2 * EM_K + 2)

# Heights above which hardy_z_many switches to the Riemann-Siegel backend.
RS_CROSSOVER = 1.0e5


class DomainError(ValueError):
    """Argument below the asymptotic-series validity floor."""


class ZeroTableError(ValueError):
    """Malformed zero-table file."""


def _check_floor(t: float) -> None:
    if t < T_FLOOR:
        raise DomainError(f"t={t} below validity floor {T_FLOOR}")


# ---------------------------------------------------------------------------
# Riemann-Siegel theta
# ---------------------------------------------------------------------------

def rs_theta(t: float) -> float:
    """theta(t) = arg Gamma(1/4 + it/2) - (t/2) log pi, asymptotic form.

    Accurate to better than 1e-8 for t >= 10.
    """
    _check_floor(t)
    return _rs_theta_arr(np.asarray([t], dtype=float))[0]


def _rs_theta_arr(t: np.ndarray) -> np.ndarray:
    return (
        t / 2.0 * np.log(t / TWO_PI)
        - t / 2.0
        - math.pi / 8.0
        + 1.0 / (48.0 * t)
        + 7.0 / (5760.0 * t**3)
        + 31.0 / (80640.0 * t**5)
    )


# ---------------------------------------------------------------------------
# Euler-Maclaurin evaluation of zeta(1/2 + it)
# ---------------------------------------------------------------------------

def _zeta_em_block(t: np.ndarray, n_cap: int) -> np.ndarray:
    """zeta(1/2 + it) for an array of heights sharing one truncation N."""
    s = 0.5 + 1j * t
    ns = np.arange(1, n_cap, dtype=float)
    logn = np.log(ns)
    amp = ns**-0.5
    total = np.zeros(t.shape, dtype=complex)
    # chunk over n to bound the outer-product size
    step = max(1, int(4e6 // max(len(t), 1)))
    for lo in range(0, len(ns), step):
        hi = lo + step
        total += (amp[lo:hi][None, :] *
                  np.exp(-1j * np.outer(t, logn[lo:hi]))).sum(axis=1)
    nf = float(n_cap)
    n_ms = nf**-0.5 * np.exp(-1j * t * math.log(nf))  # N^{-s}
    total += 0.5 * n_ms
    total += nf * n_ms / (s - 1.0)
    # tail corrections: B_{2k}/(2k)! * s(s+1)...(s+2k-2) * N^{1-s-2k}
    poch = np.ones_like(total)
    fact = 1.0
    for k in range(1, EM_K + 1):
        if k == 1:
            poch = poch * s
        else:
            poch = poch * (s + (2 * k - 3)) * (s + (2 * k - 2)) / (nf * nf)
        fact *= (2 * k) * (2 * k - 1)
        total += (_B2K[2 * k] / fact) * poch * n_ms / nf
    return total


def _zeta_em(t: np.ndarray) -> np.ndarray:
    """Vectorized Euler-Maclaurin zeta(1/2+it); groups heights by truncation."""
    t = np.asarray(t, dtype=float)
    out = np.empty(t.shape, dtype=complex)
    order = np.argsort(t)
    ts = t[order]
    lo = 0
    while lo < len(ts):
        n_cap = max(EM_N_MIN, int(EM_N_FACTOR * ts[lo]) + 1)
        # all heights that this truncation still covers (N >= factor*t)
        hi = int(np.searchsorted(ts, n_cap / EM_N_FACTOR, side="right"))
        hi = max(hi, lo + 1)
        block = ts[lo:hi]
        n_blk = max(EM_N_MIN, int(EM_N_FACTOR * block[-1]) + 1)
        for clo in range(lo, hi, 256):
            chunk = ts[clo:min(clo + 256, hi)]
            out[order[clo:clo + len(chunk)]] = _zeta_em_block(chunk, n_blk)
        lo = hi
    return out


# ---------------------------------------------------------------------------
# Riemann-Siegel Z
# ---------------------------------------------------------------------------

def _rs_psi(p: np.ndarray) -> np.ndarray:
    """Psi(p) = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p), singularities guarded."""
    c = np.cos(TWO_PI * p)
    # removable singularities at p = 1/4, 3/4: nudge off the node
    bad = np.abs(c) < 1e-8
    p = np.where(bad, p + 1e-6, p)
    c = np.where(bad, np.cos(TWO_PI * p), c)
    return np.cos(TWO_PI * (p * p - p - 0.0625)) / c


def _rs_psi3(p: np.ndarray) -> np.ndarray:
    """Third derivative of Psi by central differences (h^4 stencil)."""
    h = 0.01
    return (
        -_rs_psi(p - 3 * h) + 8 * _rs_psi(p - 2 * h) - 13 * _rs_psi(p - h)
        + 13 * _rs_psi(p + h) - 8 * _rs_psi(p + 2 * h) + _rs_psi(p + 3 * h)
    ) / (8 * h**3)


def _z_rs(t: np.ndarray) -> np.ndarray:
    """Riemann-Siegel Z(t): main sum plus first correction term."""
    t = np.asarray(t, dtype=float)
    a = np.sqrt(t / TWO_PI)
    nu = np.floor(a).astype(int)
    p = a - nu
    theta = _rs_theta_arr(t)
    out = np.zeros(t.shape, dtype=float)
    nmax = int(nu.max())
    ns = np.arange(1, nmax + 1, dtype=float)
    logn = np.log(ns)
    amp = ns**-0.5
    phases = np.cos(theta[:, None] - np.outer(t, logn)) * amp[None, :]
    mask = ns[None, :] <= nu[:, None]
    out = 2.0 * (phases * mask).sum(axis=1)
    c0 = _rs_psi(p)
    c1 = -_rs_psi3(p) / (96.0 * math.pi**2)
    corr = c0 + c1 / a
    out += np.where(nu % 2 == 1, 1.0, -1.0) * a**-0.5 * corr
    return out


# ---------------------------------------------------------------------------
# public evaluators
# ---------------------------------------------------------------------------

def hardy_z_many(t: np.ndarray) -> np.ndarray:
    """Z(t) for an array of heights, choosing the backend per height."""
    t = np.asarray(t, dtype=float)
    if np.any(t < T_FLOOR):
        raise DomainError("all heights must be >= 10")
    out = np.empty(t.shape, dtype=float)
    em = t <= RS_CROSSOVER
    if em.any():
        z = _zeta_em(t[em])
        out[em] = np.real(np.exp(1j * _rs_theta_arr(t[em])) * z)
    if (~em).any():
        out[~em] = _z_rs(t[~em])
    return out


def hardy_z(t: float) -> float:
    """Hardy's Z(t); real, with |Z(t)| = |zeta(1/2+it)|."""
    _check_floor(t)
    return float(hardy_z_many(np.asarray([t]))[0])


def zeta_critical_many(t: np.ndarray) -> np.ndarray:
    """zeta(1/2 + it) for an array of real heights (any sign; negative
    heights via the reflection zeta(1/2 - it) = conj(zeta(1/2 + it)))."""
    t = np.asarray(t, dtype=float)
    at = np.abs(t)
    out = np.empty(t.shape, dtype=complex)
    em = at <= RS_CROSSOVER
    if em.any():
        out[em] = _zeta_em(at[em])
    if (~em).any():
        th = _rs_theta_arr(at[~em])
        out[~em] = np.exp(-1j * th) * _z_rs(at[~em])
    neg = t < 0
    out[neg] = np.conj(out[neg])
    return out


def zeta_critical(t: float) -> complex:
    """zeta(1/2 + it), Euler-Maclaurin below the crossover height and
    Riemann-Siegel (exp(-i theta) Z) above it."""
    return complex(zeta_critical_many(np.asarray([t]))[0])


# ---------------------------------------------------------------------------
# zero counting and location
# ---------------------------------------------------------------------------

def count_zeros_rvm(T: float) -> float:
    """Riemann-von Mangoldt smooth main term for N(T)."""
    if T < T_FLOOR:
        raise DomainError(f"T={T} below validity floor {T_FLOOR}")
    x = T / TWO_PI
    return x * math.log(x) - x + 7.0 / 8.0


@dataclass(frozen=True)
class ZeroTable:
    """Sorted zero ordinates with provenance.

    ``claimed_complete`` is set only when the count over the height range
    agrees with the Riemann-von Mangoldt estimate within its error envelope.
    """

    ordinates: np.ndarray
    source: str  # "computed" | "imported"
    height_range: tuple[float, float]
    claimed_complete: bool
    diagnostics: tuple[str, ...] = field(default=())

    def __post_init__(self):
        o = np.asarray(self.ordinates, dtype=float)
        if len(o) > 1 and not np.all(np.diff(o) > 0):
            raise ZeroTableError("ordinates must be strictly increasing")
        t0, t1 = self.height_range
        if len(o) and (o[0] < t0 or o[-1] > t1):
            raise ZeroTableError("ordinates outside declared height range")
        object.__setattr__(self, "ordinates", o)

    def __len__(self) -> int:
        return len(self.ordinates)

    def select(self, t0: float, t1: float) -> np.ndarray:
        o = self.ordinates
        return o[(o >= t0) & (o <= t1)]


# RVM fluctuation envelope used for the completeness verdict; |S(t)| stays
# well below this for all heights the library supports.
RVM_ENVELOPE = 1.5


def _bisect_zeros(lo: np.ndarray, hi: np.ndarray, zlo: np.ndarray,
                  tol: float = 1e-10) -> np.ndarray:
    """Lockstep bisection on sign-change brackets of Z."""
    lo = lo.copy()
    hi = hi.copy()
    sign_lo = np.sign(zlo)
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        zm = hardy_z_many(mid)
        left = np.sign(zm) == sign_lo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
    return 0.5 * (lo + hi)


def _scan_sign_changes(t0: float, t1: float, step: float) -> np.ndarray:
    n = max(2, int(math.ceil((t1 - t0) / step)) + 1)
    grid = np.linspace(t0, t1, n)
    z = hardy_z_many(grid)
    idx = np.nonzero(np.sign(z[:-1]) * np.sign(z[1:]) < 0)[0]
    if len(idx) == 0:
        return np.empty(0)
    return _bisect_zeros(grid[idx], grid[idx + 1], z[idx])


def find_zeros(t0: float, t1: float, scan_step: float | None = None) -> ZeroTable:
    """All critical-line ordinates in [t0, t1] by sign-change scanning.

    Scans Z on a grid of step <= 0.5/log(t1), refines by bisection to 1e-9,
    then checks the count against the Riemann-von Mangoldt estimate.  If the
    count falls short, suspect gaps are rescanned at 8x resolution; a table
    that still fails the count check carries ``claimed_complete=False`` plus
    diagnostics naming the suspect gaps.
    """
    if not (T_FLOOR <= t0 < t1):
        raise DomainError(f"need {T_FLOOR} <= t0 < t1, got ({t0}, {t1})")
    step = scan_step if scan_step is not None else 0.5 / math.log(t1)
    zeros = _scan_sign_changes(t0, t1, step)
    expected = count_zeros_rvm(t1) - count_zeros_rvm(t0)
    diagnostics: list[str] = []
    if len(zeros) < expected - 0.5 and len(zeros) > 0:
        # rescan the widest gaps at higher resolution (possible close pairs)
        edges = np.concatenate(([t0], zeros, [t1]))
        gaps = np.diff(edges)
        mean_gap = (t1 - t0) / max(len(zeros), 1)
        extra = []
        for i in np.nonzero(gaps > 1.5 * mean_gap)[0]:
            found = _scan_sign_changes(edges[i], edges[i + 1], step / 8.0)
            extra.append(found)
        if extra:
            zeros = np.sort(np.concatenate([zeros] + extra))
            zeros = zeros[np.concatenate(([True], np.diff(zeros) > 1e-8))]
    complete = abs(len(zeros) - expected) <= RVM_ENVELOPE
    if not complete:
        edges = np.concatenate(([t0], zeros, [t1]))
        gaps = np.diff(edges)
        mean_gap = (t1 - t0) / max(len(zeros), 1)
        for i in np.nonzero(gaps > 2.5 * mean_gap)[0]:
            diagnostics.append(
                f"suspect gap [{edges[i]:.6f}, {edges[i + 1]:.6f}]"
            )
        diagnostics.append(
            f"count {len(zeros)} vs RVM estimate {expected:.2f}"
        )
    return ZeroTable(
        ordinates=zeros,
        source="computed",
        height_range=(t0, t1),
        claimed_complete=complete,
        diagnostics=tuple(diagnostics),
    )


# ---------------------------------------------------------------------------
# zero-table files: UTF-8 text, one ascending decimal ordinate per line
# ---------------------------------------------------------------------------

def import_zero_table(path, t_min: float, t_max: float) -> ZeroTable:
    """Parse a one-ordinate-per-line text file, filtered to [t_min, t_max]."""
    ordinates: list[float] = []
    prev = None
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                val = float(line)
            except ValueError as exc:
                raise ZeroTableError(f"{path}:{lineno}: not a number: {line!r}") from exc
            if prev is not None and val <= prev:
                raise ZeroTableError(
                    f"{path}:{lineno}: ordinate {val} not above previous {prev}"
                )
            prev = val
            if t_min <= val <= t_max:
                ordinates.append(val)
    arr = np.asarray(ordinates, dtype=float)
    diagnostics: tuple[str, ...] = ()
    complete = False
    if len(arr):
        expected = count_zeros_rvm(max(t_max, T_FLOOR)) - count_zeros_rvm(max(t_min, T_FLOOR))
        complete = abs(len(arr) - expected) <= RVM_ENVELOPE
    else:
        diagnostics = ("empty selection",)
    return ZeroTable(
        ordinates=arr,
        source="imported",
        height_range=(t_min, t_max),
        claimed_complete=complete,
        diagnostics=diagnostics,
    )


def write_zero_table(table: ZeroTable, path) -> None:
    """Persist in the same one-ordinate-per-line format import expects."""
    with open(path, "w", encoding="utf-8") as fh:
        for g in table.ordinates:
            fh.write(f"{g:.9f}\n")
