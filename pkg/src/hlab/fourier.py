"""Radial Fourier analysis on H^d.

Frequencies are pairs (ell, lam) with ell a Laguerre index and lam a nonzero
real.  The building block in the radial variable rho = |Y|^2 is
wigner_radial(ell, lam, rho) = exp(-|lam| rho) L_ell^(d-1)(2 |lam| rho).
The forward transform pairs a radial profile f(rho, s) against that block
and a vertical character; the inverse sums the same blocks against the
Plancherel weight |lam|^d.  The sublaplacian acts diagonally with symbol
4 |lam| (2 ell + d).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .group import GroupPoint, product
from .quadrature import integrate_adaptive
from .special import hermite_table, laguerre_table


@dataclass
class RadialFunction:
    """Radial (polyradial) function on H^d: depends on rho = |Y|^2 and s.

    profile     : (rho, s) -> values, numpy-broadcasting preferred
    support_rho : |profile| < 1e-12 whenever rho > support_rho
    support_s   : |profile| < 1e-12 whenever |s| > support_s
    """

    profile: Callable
    support_rho: float
    support_s: float
    d: int = 1

    def __post_init__(self):
        self.support_rho = float(self.support_rho)
        self.support_s = float(self.support_s)
        if self.support_rho <= 0.0 or self.support_s <= 0.0:
            raise ValueError("supports must be positive")
        if self.d < 1:
            raise ValueError("d must be a positive integer")

    def table(self, rho: np.ndarray, s: np.ndarray) -> np.ndarray:
        """Values on a meshgrid of rho (axis 0) and s (axis 1)."""
        R, S = np.meshgrid(rho, s, indexing="ij")
        try:
            vals = np.asarray(self.profile(R, S))
            if vals.shape != R.shape:
                raise ValueError
        except (TypeError, ValueError):
            vals = np.vectorize(self.profile)(R, S)
        return vals

    def at_point(self, w: GroupPoint):
        return self.profile(w.horizontal_sq(), w.s)


@dataclass
class FrequencyPoint:
    ell: int
    lam: float

    def __post_init__(self):
        self.ell = int(self.ell)
        self.lam = float(self.lam)
        if self.ell < 0:
            raise ValueError("ell must be nonnegative")
        if self.lam == 0.0:
            raise ValueError("lam must be nonzero")


@dataclass
class SpectralCoefficients:
    """Transform values on a product grid of Laguerre indices and lam nodes.

    values has shape (ell_max + 1, len(lambda_grid)); lambda_grid is sorted,
    never contains 0, and weights are the positive quadrature weights for
    integrals d(lam) over the grid.
    """

    d: int
    lambda_grid: np.ndarray
    weights: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.lambda_grid = np.asarray(self.lambda_grid, dtype=float)
        self.weights = np.asarray(self.weights, dtype=float)
        self.values = np.asarray(self.values, dtype=complex)
        if self.lambda_grid.ndim != 1:
            raise ValueError("lambda_grid must be one dimensional")
        if np.any(self.lambda_grid == 0.0):
            raise ValueError("lambda_grid must not contain 0")
        if np.any(np.diff(self.lambda_grid) <= 0.0):
            raise ValueError("lambda_grid must be strictly increasing")
        if self.weights.shape != self.lambda_grid.shape:
            raise ValueError("weights must match lambda_grid")
        if np.any(self.weights <= 0.0):
            raise ValueError("weights must be positive")
        if self.values.ndim != 2 or self.values.shape[1] != self.lambda_grid.size:
            raise ValueError("values must have shape (ell_max + 1, grid size)")

    @property
    def ell_max(self) -> int:
        return self.values.shape[0] - 1


def multiplicity(ell: int, d: int) -> int:
    """Number of length-d multi-indices with given total degree."""
    return math.comb(ell + d - 1, d - 1)


def symbol(ell: int, lam: float, d: int = 1) -> float:
    """Sublaplacian eigenvalue 4 |lam| (2 ell + d) on the (ell, lam) block."""
    return 4.0 * abs(lam) * (2 * ell + d)


def wigner_radial(ell: int, lam: float, rho):
    """exp(-|lam| rho) L_ell^(d-1)(2 |lam| rho) at d = 1 uses alpha = 0;
    pass alpha through wigner_radial_alpha for other d."""
    return wigner_radial_alpha(ell, lam, rho, 0.0)


def wigner_radial_alpha(ell: int, lam: float, rho, alpha: float):
    rho = np.asarray(rho, dtype=float)
    a = abs(float(lam))
    tab = laguerre_table(ell, alpha, 2.0 * a * rho)
    return np.exp(-a * rho) * tab[ell]


def wigner_general_d1(n: int, m: int, lam: float, y: float, eta: float,
                      tol: float = 1e-10) -> complex:
    """Matrix element of the lam-representation between scaled Hermite
    states, at d = 1:

    integral over z of exp(2 i lam eta z) H_{n,lam}(y + z) H_{m,lam}(-y + z).

    Always bounded by 1 in modulus.
    """
    lam = float(lam)
    if lam == 0.0:
        raise ValueError("lam must be nonzero")
    a = abs(lam)
    ra = math.sqrt(a)
    mtop = max(n, m)
    # beyond the classical turning point, Hermite functions die off fast
    half = abs(y) + (math.sqrt(2.0 * mtop + 1.0) + 9.0) / ra

    def f(z):
        z = np.atleast_1d(np.asarray(z, dtype=float))
        hn = hermite_table(mtop, ra * (y + z))
        hm = hermite_table(mtop, ra * (z - y))
        return (np.sqrt(a) * np.exp(2j * lam * eta * z)
                * hn[n] * hm[m])

    val, _ = integrate_adaptive(f, -half, half, tol)
    return complex(val)


# ---------------------------------------------------------------------------
# Grids

def default_lambda_grid(lam_min: float = 1e-3, lam_max: float = 50.0,
                        n_per_sign: int = 400):
    """Signed geometric grid with trapezoid weights in log space.

    Returns (grid, weights); the grid is symmetric, sorted, and omits 0.
    """
    if not (0.0 < lam_min < lam_max):
        raise ValueError("need 0 < lam_min < lam_max")
    if n_per_sign < 2:
        raise ValueError("need at least 2 nodes per sign")
    u = np.linspace(math.log(lam_min), math.log(lam_max), n_per_sign)
    pos = np.exp(u)
    du = (u[-1] - u[0]) / (n_per_sign - 1)
    wu = np.full(n_per_sign, du)
    wu[0] = wu[-1] = 0.5 * du
    wpos = wu * pos          # d(lam) = lam d(log lam)
    grid = np.concatenate([-pos[::-1], pos])
    weights = np.concatenate([wpos[::-1], wpos])
    return grid, weights


def single_sign_lambda_grid(lo: float, hi: float, n: int, sign: int = 1):
    """Simpson grid on one side of the frequency axis, linear spacing."""
    if not (0.0 < lo < hi):
        raise ValueError("need 0 < lo < hi")
    x = np.linspace(lo, hi, n)
    h = (hi - lo) / (n - 1)
    if n % 2 == 1 and n >= 3:
        w = np.full(n, 2.0)
        w[1::2] = 4.0
        w[0] = w[-1] = 1.0
        w *= h / 3.0
    else:
        w = np.full(n, h)
        w[0] = w[-1] = 0.5 * h
    if sign < 0:
        return -x[::-1], w[::-1]
    return x, w


def _gauss_legendre(lo: float, hi: float, n: int):
    x, w = np.polynomial.legendre.leggauss(n)
    mid = 0.5 * (lo + hi)
    half = 0.5 * (hi - lo)
    return mid + half * x, half * w


def _default_n_s(support_s: float, lam_max: float) -> int:
    return int(0.75 * support_s * lam_max) + 64


# ---------------------------------------------------------------------------
# Forward and inverse transforms

def analyze(f: RadialFunction, ell_max: int = 16, lambda_grid=None,
            lambda_weights=None, n_rho: int = 128,
            n_s: int | None = None) -> SpectralCoefficients:
    """Forward radial transform sampled on a lam grid.

    c(ell, lam) = C(ell + d - 1, ell)^(-1) (pi^d / (d-1)!)
                  integral of exp(-i s lam) wigner_radial * f
                  against rho^(d-1) drho ds over the declared support.
    """
    d = f.d
    if lambda_grid is None:
        lambda_grid, lambda_weights = default_lambda_grid()
    if lambda_weights is None:
        raise ValueError("custom lambda_grid needs explicit weights")
    lam = np.asarray(lambda_grid, dtype=float)
    if n_s is None:
        n_s = _default_n_s(f.support_s, float(np.max(np.abs(lam))))
    rho, wr = _gauss_legendre(0.0, f.support_rho, n_rho)
    s, ws = _gauss_legendre(-f.support_s, f.support_s, n_s)
    table = f.table(rho, s)

    # Streamed over lam chunks and the Laguerre recurrence: the full
    # (ell, rho, lam) table would not fit once ell_max or the grid grows.
    alpha = d - 1.0
    rad_w = wr * rho ** (d - 1)
    base = math.pi ** d / math.factorial(d - 1)
    consts = np.array([base / multiplicity(ell, d)
                       for ell in range(ell_max + 1)])
    values = np.empty((ell_max + 1, lam.size), dtype=complex)
    chunk = max(1, _FWD_CHUNK // max(1, n_rho))
    for lo in range(0, lam.size, chunk):
        hi = min(lo + chunk, lam.size)
        lc = lam[lo:hi]
        phases = np.exp(-1j * np.outer(s, lc))          # (n_s, Jc)
        a = table @ (ws[:, None] * phases)              # (n_rho, Jc)
        x = 2.0 * np.outer(rho, np.abs(lc))
        wa = (np.exp(-np.outer(rho, np.abs(lc)))
              * rad_w[:, None]) * a
        values[0, lo:hi] = wa.sum(axis=0)
        if ell_max >= 1:
            lk_prev = np.ones_like(x)
            lk = 1.0 + alpha - x
            values[1, lo:hi] = (wa * lk).sum(axis=0)
            for k in range(1, ell_max):
                lk_prev, lk = lk, ((2 * k + 1 + alpha - x) * lk
                                   - (k + alpha) * lk_prev) / (k + 1)
                values[k + 1, lo:hi] = (wa * lk).sum(axis=0)
    values *= consts[:, None]
    return SpectralCoefficients(d=d, lambda_grid=lam,
                                weights=np.asarray(lambda_weights, float),
                                values=values)


_FWD_CHUNK = 2_000_000
_INV_CHUNK = 8192


def synthesize(c: SpectralCoefficients, rho, s) -> np.ndarray:
    """Inverse transform at points (rho, s), broadcast together.

    f(rho, s) = (2^(d-1) / pi^(d+1)) sum over ell of
                integral exp(i s lam) wigner_radial(ell, lam, rho)
                c(ell, lam) |lam|^d d(lam).
    """
    d = c.d
    rho_b, s_b = np.broadcast_arrays(np.asarray(rho, dtype=float),
                                     np.asarray(s, dtype=float))
    shape = rho_b.shape
    rho_f = rho_b.reshape(-1)
    s_f = s_b.reshape(-1)
    if np.any(rho_f < 0.0):
        raise ValueError("rho must be nonnegative")
    lam = c.lambda_grid
    alam = np.abs(lam)
    wl = c.weights * alam ** d
    const = 2.0 ** (d - 1) / math.pi ** (d + 1)
    out = np.empty(rho_f.size, dtype=complex)
    alpha = d - 1.0
    for lo in range(0, rho_f.size, _INV_CHUNK):
        hi = min(lo + _INV_CHUNK, rho_f.size)
        x = 2.0 * np.outer(rho_f[lo:hi], alam)          # (n, J)
        damp = np.exp(-np.outer(rho_f[lo:hi], alam))
        acc = c.values[0][None, :] * damp
        if c.ell_max >= 1:
            lk_prev = np.ones_like(x)
            lk = 1.0 + alpha - x
            acc = acc + c.values[1][None, :] * damp * lk
            for k in range(1, c.ell_max):
                lk_prev, lk = lk, ((2 * k + 1 + alpha - x) * lk
                                   - (k + alpha) * lk_prev) / (k + 1)
                acc = acc + c.values[k + 1][None, :] * damp * lk
        phase = np.exp(1j * np.outer(s_f[lo:hi], lam))
        out[lo:hi] = const * ((acc * phase) @ wl)
    return out.reshape(shape)


def forward_coefficient(f: RadialFunction, ell: int, lam: float,
                        n_rho: int = 256, n_s: int | None = None) -> complex:
    """Single transform value at one frequency, by direct quadrature."""
    point = FrequencyPoint(ell, lam)
    d = f.d
    if n_s is None:
        n_s = _default_n_s(f.support_s, abs(point.lam)) + 64
    rho, wr = _gauss_legendre(0.0, f.support_rho, n_rho)
    s, ws = _gauss_legendre(-f.support_s, f.support_s, n_s)
    table = f.table(rho, s)
    vert = table @ (ws * np.exp(-1j * s * point.lam))
    blk = wigner_radial_alpha(point.ell, point.lam, rho, d - 1.0)
    base = math.pi ** d / math.factorial(d - 1) / multiplicity(point.ell, d)
    return complex(base * np.sum(wr * rho ** (d - 1) * blk * vert))


# ---------------------------------------------------------------------------
# Quadratic quantities

def spectral_inner(c1: SpectralCoefficients, c2: SpectralCoefficients) -> complex:
    """Inner product in the transform domain.

    sum over ell of multiplicity(ell, d) *
    integral conj(c2) c1 |lam|^d d(lam), no outside constant.
    """
    if c1.d != c2.d or c1.ell_max != c2.ell_max:
        raise ValueError("coefficient layouts differ")
    if c1.lambda_grid.shape != c2.lambda_grid.shape or np.any(
            c1.lambda_grid != c2.lambda_grid):
        raise ValueError("lambda grids differ")
    d = c1.d
    wl = c1.weights * np.abs(c1.lambda_grid) ** d
    mults = np.array([multiplicity(ell, d) for ell in range(c1.ell_max + 1)],
                     dtype=float)
    per_ell = (c1.values * np.conj(c2.values)) @ wl
    return complex(mults @ per_ell)


def spectral_norm_sq(c: SpectralCoefficients) -> float:
    return float(spectral_inner(c, c).real)


def spatial_inner(f: RadialFunction, g: RadialFunction,
                  n_rho: int = 256, n_s: int = 512) -> complex:
    """L^2(H^d) pairing of two radial functions via their profiles."""
    if f.d != g.d:
        raise ValueError("dimensions differ")
    d = f.d
    rho_max = max(f.support_rho, g.support_rho)
    s_max = max(f.support_s, g.support_s)
    rho, wr = _gauss_legendre(0.0, rho_max, n_rho)
    s, ws = _gauss_legendre(-s_max, s_max, n_s)
    tf = f.table(rho, s)
    tg = g.table(rho, s)
    base = math.pi ** d / math.factorial(d - 1)
    inner = np.einsum("i,j,ij->", wr * rho ** (d - 1), ws,
                      tf * np.conj(tg))
    return complex(base * inner)


def spatial_norm_sq(f: RadialFunction, n_rho: int = 256,
                    n_s: int = 512) -> float:
    return float(spatial_inner(f, f, n_rho, n_s).real)


# ---------------------------------------------------------------------------
# Diagonal evolutions

def evolve_schrodinger(c: SpectralCoefficients, t: float) -> SpectralCoefficients:
    """Unitary flow: multiply block (ell, lam) by exp(4 i t |lam| (2 ell + d))."""
    t = float(t)
    ells = np.arange(c.ell_max + 1)[:, None]
    phase = np.exp(4j * t * np.abs(c.lambda_grid)[None, :] * (2 * ells + c.d))
    return SpectralCoefficients(d=c.d, lambda_grid=c.lambda_grid.copy(),
                                weights=c.weights.copy(),
                                values=c.values * phase)


def evolve_heat(c: SpectralCoefficients, t: float) -> SpectralCoefficients:
    """Heat flow: multiply block (ell, lam) by exp(-4 t |lam| (2 ell + d))."""
    t = float(t)
    if t < 0.0:
        raise ValueError("heat flow needs t >= 0")
    ells = np.arange(c.ell_max + 1)[:, None]
    damp = np.exp(-4.0 * t * np.abs(c.lambda_grid)[None, :] * (2 * ells + c.d))
    return SpectralCoefficients(d=c.d, lambda_grid=c.lambda_grid.copy(),
                                weights=c.weights.copy(),
                                values=c.values * damp)


def vertical_translate(c: SpectralCoefficients, s0: float) -> SpectralCoefficients:
    """Multiply by exp(-i s0 lam); synthesis then reads off f(rho, s - s0)."""
    phase = np.exp(-1j * float(s0) * c.lambda_grid)[None, :]
    return SpectralCoefficients(d=c.d, lambda_grid=c.lambda_grid.copy(),
                                weights=c.weights.copy(),
                                values=c.values * phase)


# ---------------------------------------------------------------------------
# Finite difference sublaplacian (a test oracle for the symbol)

def sublaplacian_fd(f: Callable, w: GroupPoint, h: float = 1e-3):
    """Second order finite difference for the sum of squared horizontal
    fields.  The field flows are right translations, so the stencil points
    are w . (h e_j, 0, 0) and w . (0, h e_j, 0)."""
    d = w.d
    base = 2.0 * d * 2.0 * f(w)
    acc = -base
    for j in range(d):
        step_y = np.zeros(d)
        step_y[j] = h
        zero = np.zeros(d)
        for step, kind in ((step_y, "y"), (step_y, "eta")):
            if kind == "y":
                wp = GroupPoint(step, zero, 0.0)
            else:
                wp = GroupPoint(zero, step, 0.0)
            wm = GroupPoint(-wp.y, -wp.eta, 0.0)
            acc += f(product(w, wp)) + f(product(w, wm))
    return acc / (h * h)


# ---------------------------------------------------------------------------
# CSV round trip

_CSV_HEADER = "ell,lambda,weight,re,im"


def coefficients_to_csv(c: SpectralCoefficients, path_or_file) -> None:
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "w") if own else path_or_file
    try:
        fh.write("# schema=1\n")
        fh.write("# d=%d\n" % c.d)
        fh.write(_CSV_HEADER + "\n")
        for ell in range(c.ell_max + 1):
            for j, lam in enumerate(c.lambda_grid):
                v = c.values[ell, j]
                fh.write("%d,%.17g,%.17g,%.17g,%.17g\n"
                         % (ell, lam, c.weights[j], v.real, v.imag))
    finally:
        if own:
            fh.close()


def coefficients_from_csv(path_or_file) -> SpectralCoefficients:
    own = isinstance(path_or_file, (str, bytes))
    fh = open(path_or_file, "r") if own else path_or_file
    try:
        text = fh.read()
    finally:
        if own:
            fh.close()
    d = 1
    rows = []
    for line in io.StringIO(text):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            if line.replace(" ", "").startswith("#d="):
                d = int(line.split("=", 1)[1])
            continue
        if line == _CSV_HEADER:
            continue
        parts = line.split(",")
        rows.append((int(parts[0]), float(parts[1]), float(parts[2]),
                     float(parts[3]), float(parts[4])))
    if not rows:
        raise ValueError("no coefficient rows found")
    ell_max = max(r[0] for r in rows)
    lam_list = sorted({r[1] for r in rows})
    j_of = {lam: j for j, lam in enumerate(lam_list)}
    grid = np.array(lam_list)
    weights = np.zeros(grid.size)
    values = np.zeros((ell_max + 1, grid.size), dtype=complex)
    for ell, lam, wgt, re, im in rows:
        j = j_of[lam]
        weights[j] = wgt
        values[ell, j] = re + 1j * im
    return SpectralCoefficients(d=d, lambda_grid=grid, weights=weights,
                                values=values)


# ---------------------------------------------------------------------------
# Stock profiles

def bump_profile(r0: float, amplitude: float = 1.0) -> RadialFunction:
    """Smooth compactly supported radial bump, peak value `amplitude`.

    profile = amplitude * exp(-q / (1 - q)) with q = (rho^2 + s^2) / r0^4,
    identically zero for q >= 1.  Supports are exactly r0^2 on both axes.
    """
    r0 = float(r0)
    if r0 <= 0.0:
        raise ValueError("r0 must be positive")
    r4 = r0 ** 4

    def profile(rho, s):
        rho = np.asarray(rho, dtype=float)
        s = np.asarray(s, dtype=float)
        q = (rho * rho + s * s) / r4
        scalar = q.ndim == 0
        q = np.atleast_1d(q)
        out = np.zeros_like(q)
        inside = q < 1.0
        qi = q[inside]
        out[inside] = amplitude * np.exp(-qi / (1.0 - qi))
        return float(out[0]) if scalar else out

    return RadialFunction(profile=profile, support_rho=r0 ** 2,
                          support_s=r0 ** 2, d=1)
