"""Green's function of the flat torus, hitting-time bands, and the annulus Poisson kernel.

The Green's function solves ``Δg = 1`` off the origin with a ``-(1/2π) log|z|``
singularity there. It is assembled as ``g = h + F``: ``h = -(1/2π) φ(|z|) log|z|``
carries the singularity (``φ`` a smooth cutoff equal to 1 near 0), and the
periodic remainder ``F`` solves ``ΔF = 1 - Δh`` spectrally. The right-hand
side has zero mean, so the solve is well posed up to a constant, fixed by
giving ``F`` zero mean.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

DEFAULT_CUTOFF = (0.15, 0.35)
HARNACK_C = 10.0
_HEADER = struct.Struct("<Qdd")


# -- smooth cutoff ---------------------------------------------------------------

def _psi(t):
    """``exp(-1/t)`` for t > 0 and its first two derivatives (zero for tiny t)."""
    t = np.asarray(t, dtype=float)
    live = t > 1e-3
    ts = np.where(live, t, 1.0)
    p = np.where(live, np.exp(-1.0 / ts), 0.0)
    dp = np.where(live, p / ts**2, 0.0)
    ddp = np.where(live, p * (1.0 / ts**4 - 2.0 / ts**3), 0.0)
    return p, dp, ddp


def _step(u):
    """Smooth step ``s`` (0 below 0, 1 above 1) with ``s'`` and ``s''``."""
    u = np.clip(np.asarray(u, dtype=float), 0.0, 1.0)
    a, da, dda = _psi(u)
    b, db, ddb = _psi(1.0 - u)
    db, ddb = -db, ddb  # chain rule for psi(1 - u)
    tot = a + b
    num = da * b - a * db
    s = a / tot
    ds = num / tot**2
    dnum = dda * b - a * ddb
    dds = dnum / tot**2 - 2.0 * num * (da + db) / tot**3
    return s, ds, dds


def cutoff_profile(r, cutoff=DEFAULT_CUTOFF):
    """Bump ``φ(r)`` (1 on [0, r1], 0 beyond r2) with ``φ'`` and ``φ''``."""
    r1, r2 = cutoff
    w = r2 - r1
    s, ds, dds = _step((np.asarray(r, dtype=float) - r1) / w)
    return 1.0 - s, -ds / w, -dds / w**2


def singular_part(r, cutoff=DEFAULT_CUTOFF):
    """``h(r) = -(1/2π) φ(r) log r`` for r > 0."""
    phi, _, _ = cutoff_profile(r, cutoff)
    return -phi * np.log(r) / (2.0 * math.pi)


def singular_laplacian(r, cutoff=DEFAULT_CUTOFF):
    """``Δh`` off the origin, from the radial form ``f'' + f'/r``."""
    r = np.asarray(r, dtype=float)
    r1 = cutoff[0]
    safe = np.where(r > r1, r, 1.0)
    _, dphi, ddphi = cutoff_profile(safe, cutoff)
    log_r = np.log(safe)
    lap = -(ddphi * log_r + (2.0 + log_r) * dphi / safe) / (2.0 * math.pi)
    return np.where(r > r1, lap, 0.0)


# -- table -----------------------------------------------------------------------

def grid_coords(n: int) -> np.ndarray:
    """Torus coordinates of grid index ``0..n-1`` (index 0 is the origin)."""
    x = np.arange(n) / n
    return np.where(x > 0.5, x - 1.0, x)


@dataclass(frozen=True)
class GreenTable:
    grid_side: int
    g_values: np.ndarray  # g on the grid; the origin entry is +inf
    spectrum: np.ndarray  # Fourier coefficients of H = Δh - 1, normalised by grid_side**2
    cutoff: tuple[float, float]
    smooth: np.ndarray  # F = g - h on the grid, finite everywhere

    @property
    def spacing(self) -> float:
        return 1.0 / self.grid_side


def _check_cutoff(cutoff):
    r1, r2 = cutoff
    if not 0 < r1 < r2 < 0.5:
        raise ValueError("cutoff must satisfy 0 < r1 < r2 < 1/2")


def _radius_grid(n: int) -> np.ndarray:
    x = grid_coords(n)
    return np.hypot(x[:, None], x[None, :])


def _spectrum(n: int, cutoff) -> np.ndarray:
    forcing = singular_laplacian(_radius_grid(n), cutoff) - 1.0
    return np.fft.fft2(forcing) / (n * n)


def build_green(grid_side: int, cutoff=DEFAULT_CUTOFF) -> GreenTable:
    if grid_side < 256 or grid_side & (grid_side - 1):
        raise ValueError("grid_side must be a power of two >= 256")
    cutoff = (float(cutoff[0]), float(cutoff[1]))
    _check_cutoff(cutoff)
    n = grid_side
    spec = _spectrum(n, cutoff)
    k = np.fft.fftfreq(n, d=1.0 / n)
    k2 = k[:, None] ** 2 + k[None, :] ** 2
    k2[0, 0] = 1.0
    f_hat = spec / (4.0 * math.pi**2 * k2)
    f_hat[0, 0] = 0.0
    smooth = np.fft.ifft2(f_hat * (n * n)).real
    r = _radius_grid(n)
    r[0, 0] = 1.0
    g = singular_part(r, cutoff) + smooth
    g[0, 0] = np.inf
    return GreenTable(n, g, spec, cutoff, smooth)


def save_green(table: GreenTable, path) -> None:
    """Flat binary: header ``(grid_side, r1, r2)`` then row-major little-endian g."""
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(table.grid_side, *table.cutoff))
        fh.write(np.ascontiguousarray(table.g_values, dtype="<f8").tobytes())


def load_green(path) -> GreenTable:
    with open(path, "rb") as fh:
        n, r1, r2 = _HEADER.unpack(fh.read(_HEADER.size))
        g = np.frombuffer(fh.read(), dtype="<f8").reshape(n, n).astype(float)
    cutoff = (r1, r2)
    r = _radius_grid(n)
    r[0, 0] = 1.0
    smooth = g - singular_part(r, cutoff)
    # ΔF = 1 at the origin (Δh vanishes there), so F(0) = neighbour mean - spacing^2 / 4
    nb = smooth[1, 0] + smooth[-1, 0] + smooth[0, 1] + smooth[0, -1]
    smooth[0, 0] = nb / 4.0 - 0.25 / (n * n)
    return GreenTable(int(n), g, _spectrum(n, cutoff), cutoff, smooth)


def _bilinear(values: np.ndarray, x: float, y: float) -> float:
    n = values.shape[0]
    u, v = (x % 1.0) * n, (y % 1.0) * n
    i, j = int(math.floor(u)), int(math.floor(v))
    fu, fv = u - i, v - j
    i0, j0, i1, j1 = i % n, j % n, (i + 1) % n, (j + 1) % n
    return float(
        (1 - fu) * (1 - fv) * values[i0, j0] + fu * (1 - fv) * values[i1, j0]
        + (1 - fu) * fv * values[i0, j1] + fu * fv * values[i1, j1]
    )


def green_at(table: GreenTable, dx: float, dy: float) -> float:
    """``g`` at the torus displacement ``(dx, dy)``: exact singular part plus interpolated F."""
    dx = dx - math.ceil(dx - 0.5)
    dy = dy - math.ceil(dy - 0.5)
    r = math.hypot(dx, dy)
    if r == 0:
        raise ValueError("g is singular at the origin")
    return float(singular_part(r, table.cutoff)) + _bilinear(table.smooth, dx, dy)


def green_eval(table: GreenTable, x, y) -> float:
    """``G_x(y) = g((x - y) mod 1)`` for points given as objects with ``.x``, ``.y`` or pairs."""
    xa, xb = (x.x, x.y) if hasattr(x, "x") else x
    ya, yb = (y.x, y.y) if hasattr(y, "x") else y
    dx = xa - ya
    dy = xb - yb
    dx -= math.ceil(dx - 0.5)
    dy -= math.ceil(dy - 0.5)
    if math.hypot(dx, dy) < 1e-12:
        raise ValueError("x == y: logarithmic singularity")
    return green_at(table, dx, dy)


def circle_mean(table: GreenTable, radius: float, samples: int = 256) -> float:
    """Average of ``g`` over the circle of the given radius about the origin."""
    th = 2.0 * math.pi * np.arange(samples) / samples
    return float(np.mean([green_at(table, radius * math.cos(t), radius * math.sin(t)) for t in th]))


def green_hit_time(table: GreenTable, R: float, r: float) -> float:
    """Mean time for Brownian motion started on the R-circle to reach the r-disc.

    ``u = 2 (g(r) - g)`` satisfies ``Δu / 2 = -1`` off the disc and, g being
    radial to high accuracy at these radii, vanishes on it.
    """
    return 2.0 * (circle_mean(table, r) - circle_mean(table, R))


def hit_time_band(R: float, r: float, eta: float) -> tuple[float, float]:
    if not 0 < 2 * r <= R < 0.5:
        raise ValueError("need 0 < 2r <= R < 1/2")
    if not 0 <= eta < 1:
        raise ValueError("eta must lie in [0, 1)")
    mid = math.log(R / r) / math.pi
    return (1.0 - eta) * mid, (1.0 + eta) * mid


# -- annulus Poisson kernel --------------------------------------------------------

@dataclass(frozen=True)
class AnnulusSpec:
    r0: float
    terms: int = 64

    def __post_init__(self):
        if not 0 < self.r0 < 1:
            raise ValueError("r0 must lie in (0, 1)")
        if self.terms < 1:
            raise ValueError("terms must be >= 1")


def inner_exit_prob(spec: AnnulusSpec, x) -> float:
    """``c0(x) = log(1/|x|) / log(1/r0)``."""
    rho = abs(complex(*x)) if not isinstance(x, complex) else abs(x)
    return math.log(1.0 / rho) / math.log(1.0 / spec.r0)


def annulus_poisson_kernel(spec: AnnulusSpec, x, phi_u):
    """Density in the angle ``phi_u`` (w.r.t. normalised angle) of the exit point on
    the inner circle of the annulus ``r0 < |z| < 1``, for a path from ``x``.

    ``c0 + sum_m 2 (r0/|x|)^m (1 - |x|^2m) / (1 - r0^2m) cos(m (arg x - phi_u))``.
    ``phi_u`` may be an array.
    """
    z = x if isinstance(x, complex) else complex(*x)
    rho = abs(z)
    if not spec.r0 < rho < 1:
        raise ValueError("x must lie in the open annulus r0 < |x| < 1")
    m = np.arange(1, spec.terms + 1, dtype=float)
    coef = 2.0 * (spec.r0 / rho) ** m * (1.0 - rho ** (2 * m)) / (1.0 - spec.r0 ** (2 * m))
    angle = math.atan2(z.imag, z.real) - np.asarray(phi_u, dtype=float)
    series = np.tensordot(coef, np.cos(np.multiply.outer(m, angle)), axes=1)
    out = inner_exit_prob(spec, (z.real, z.imag)) + series
    return float(out) if np.ndim(out) == 0 else out


def rn_derivative_bound(r: float, R: float) -> float:
    """``1 + 40 r log(2r) / (R log(2R))``, for ``10 r <= R < 1/20``."""
    if not (HARNACK_C * r <= R < 1.0 / (2.0 * HARNACK_C) and r > 0):
        raise ValueError("need 10 r <= R < 1/20")
    return 1.0 + 40.0 * r * math.log(2 * r) / (R * math.log(2 * R))


def harnack_ratio_check(r: float, z_samples, angles: int = 720) -> tuple[bool, float]:
    """Worst ``sup_u K / inf_u K`` over the samples against ``1 + 40 r log 2r / (|z| log 2|z|)``.

    ``K(z, u) = P_A(2z, 2u)`` with inner radius ``2r``, ``u`` on the r-circle.
    """
    samples = [complex(*z) if not isinstance(z, complex) else z for z in z_samples]
    for z in samples:
        if not HARNACK_C * r <= abs(z) < 1.0 / (2.0 * HARNACK_C):
            raise ValueError(f"sample {z} outside 10 r <= |z| < 1/20")
    spec = AnnulusSpec(2.0 * r, 64)
    phi = 2.0 * math.pi * np.arange(angles) / angles
    ok = True
    worst = 1.0
    for z in samples:
        k = annulus_poisson_kernel(spec, 2.0 * z, phi)
        ratio = float(k.max() / k.min())
        worst = max(worst, ratio)
        if ratio > rn_derivative_bound(r, abs(z)):
            ok = False
    return ok, worst
