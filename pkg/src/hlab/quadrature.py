"""Quadrature engines.

One dimensional integrals use adaptive Gauss-Kronrod (G7, K15) with
largest-error-first bisection.  Integrals over the whole line with a known
exponential envelope are truncated symmetrically at a point T chosen from
the envelope, never through variable transforms.  Box integrals use tensor
product Simpson rules with an optional stride-2 Richardson check.
"""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .group import GroupPoint, koranyi_norm_arrays, product_arrays


class QuadratureError(Exception):
    pass


class QuadratureNonConvergence(QuadratureError):
    """Panel budget ran out; carries the best value and error so far."""

    def __init__(self, message, value=None, err=None):
        super().__init__(message)
        self.value = value
        self.err = err


class GridTooCoarse(QuadratureError):
    """Richardson estimate exceeded the requested tolerance."""

    def __init__(self, message, value=None, err=None):
        super().__init__(message)
        self.value = value
        self.err = err


class EnvelopeError(ValueError):
    pass


@dataclass
class Integrand1D:
    """A scalar (possibly complex) integrand on R.

    evaluate      : callable, scalar or numpy-vectorized
    envelope_rate : r > 0 such that |f(tau)| <~ C exp(-r |tau|) at infinity
    """

    evaluate: Callable
    envelope_rate: float | None = None


# ---------------------------------------------------------------------------
# Gauss-Kronrod 7-15 on [-1, 1]; positive abscissae, symmetric rule.

_K15_NODES = np.array([
    0.0,
    0.207784955007898468,
    0.405845151377397167,
    0.586087235467691130,
    0.741531185599394440,
    0.864864423359769073,
    0.949107912342758525,
    0.991455371120812639,
])

_K15_WEIGHTS = np.array([
    0.209482141084727828,
    0.204432940075298892,
    0.190350578064785410,
    0.169004726639267903,
    0.140653259715525919,
    0.104790010322250184,
    0.063092092629978553,
    0.022935322010529225,
])

# G7 lives on the K15 nodes with odd index (0-based indices 0, 2, 4, 6).
_G7_WEIGHTS = np.array([
    0.417959183673469388,
    0.381830050505118945,
    0.279705391489276668,
    0.129484966168869693,
])

# full 15-point layout, ascending
_X15 = np.concatenate([-_K15_NODES[:0:-1], _K15_NODES])
_W15 = np.concatenate([_K15_WEIGHTS[:0:-1], _K15_WEIGHTS])
_W7_ON_15 = np.zeros(15)
_W7_ON_15[7] = _G7_WEIGHTS[0]
for _i in range(1, 4):
    _W7_ON_15[7 + 2 * _i] = _G7_WEIGHTS[_i]
    _W7_ON_15[7 - 2 * _i] = _G7_WEIGHTS[_i]

_EPS = np.finfo(float).eps


def _wrap_vectorized(f: Callable) -> Callable:
    """Accept either scalar or vectorized callables; always return arrays."""
    state = {"vec": True}

    def fv(x: np.ndarray) -> np.ndarray:
        if state["vec"]:
            try:
                r = np.asarray(f(x), dtype=complex)
                if r.shape == x.shape:
                    return r
            except (TypeError, ValueError):
                pass
            state["vec"] = False
        return np.array([complex(f(float(xi))) for xi in x])

    return fv


def _gk_panel(fv: Callable, a: float, b: float):
    """Return (K15 value, error estimate) on [a, b]."""
    h = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    y = fv(mid + h * _X15)
    resk = _W15 @ y
    resg = _W7_ON_15 @ y
    value = resk * h
    resabs = float(_W15 @ np.abs(y)) * abs(h)
    mean = resk * 0.5
    resasc = float(_W15 @ np.abs(y - mean)) * abs(h)
    err = abs(resk - resg) * abs(h)
    if resasc != 0.0 and err != 0.0:
        err = resasc * min(1.0, (200.0 * err / resasc) ** 1.5)
    err = max(err, 50.0 * _EPS * resabs)
    return value, err


def integrate_adaptive(f: Callable, a: float, b: float, tol: float,
                       max_panels: int = 4000,
                       max_panel_width: float | None = None,
                       breakpoints: Sequence[float] = ()):
    """Adaptive G7/K15 over [a, b].

    Returns (value, err).  Raises QuadratureNonConvergence (carrying the
    partial value and error) when the panel budget runs out first.
    """
    a = float(a)
    b = float(b)
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    if not b > a:
        raise ValueError("need b > a")
    fv = _wrap_vectorized(f)

    edges = sorted({a, b, *(float(p) for p in breakpoints if a < float(p) < b)})
    if max_panel_width is not None and max_panel_width > 0.0:
        refined = []
        for lo, hi in zip(edges[:-1], edges[1:]):
            n = max(1, math.ceil((hi - lo) / max_panel_width))
            refined.extend(np.linspace(lo, hi, n + 1)[:-1])
        refined.append(b)
        edges = refined

    heap = []
    counter = itertools.count()
    total = 0.0 + 0.0j
    total_err = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        v, e = _gk_panel(fv, lo, hi)
        total += v
        total_err += e
        heapq.heappush(heap, (-e, next(counter), lo, hi, v, e))

    span = b - a
    while total_err > max(tol, 1e-15 * abs(total)):
        if len(heap) >= max_panels:
            raise QuadratureNonConvergence(
                "panel budget %d exhausted (err %.3e, tol %.3e)"
                % (max_panels, total_err, tol), value=total, err=total_err)
        _, _, lo, hi, v, e = heapq.heappop(heap)
        if (hi - lo) < 1e-15 * span:
            raise QuadratureNonConvergence(
                "panel width underflow near %.17g" % lo,
                value=total, err=total_err)
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk_panel(fv, lo, mid)
        v2, e2 = _gk_panel(fv, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, next(counter), lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, next(counter), mid, hi, v2, e2))
    return total, total_err


_PROBE_BASE = np.array([0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0])


def integrate_exponential_tail(integrand: Integrand1D, tol: float,
                               max_panel_width: float | None = None,
                               max_panels: int = 4000):
    """Integrate over all of R an integrand with exponential decay.

    The truncation point T is chosen so the envelope bound on the discarded
    tails is below tol/2 and the envelope itself is below tol/2 at T.
    Returns (value, err, T) where err adds the tail bound to the quadrature
    error.  Raises EnvelopeError when no positive decay rate is declared.
    """
    rate = integrand.envelope_rate
    if rate is None or not rate > 0.0:
        raise EnvelopeError("integrand has no positive envelope rate")
    if not tol > 0.0:
        raise ValueError("tol must be positive")
    fv = _wrap_vectorized(integrand.evaluate)

    def amplitude(points: np.ndarray) -> float:
        mags = np.abs(fv(points)) * np.exp(rate * np.abs(points))
        return float(np.max(mags))

    probes = np.concatenate([_PROBE_BASE, -_PROBE_BASE[1:]])
    c_amp = max(amplitude(probes), 1e-300)

    def cutoff(c: float) -> float:
        t1 = math.log(max(4.0 * c / (rate * tol), 2.0)) / rate
        t2 = math.log(max(2.0 * c / tol, 2.0)) / rate
        return max(t1, t2, 0.5)

    t_cut = cutoff(c_amp)
    near = t_cut * np.array([0.55, 0.75, 0.95])
    c_amp = max(c_amp, amplitude(np.concatenate([near, -near])))
    t_cut = cutoff(c_amp)

    tail_bound = 2.0 * c_amp * math.exp(-rate * t_cut) / rate
    value, qerr = integrate_adaptive(
        integrand.evaluate, -t_cut, t_cut, 0.5 * tol,
        max_panels=max_panels, max_panel_width=max_panel_width,
        breakpoints=(0.0,))
    return value, qerr + tail_bound, t_cut


# ---------------------------------------------------------------------------
# Tensor grids

@dataclass
class GridSpec:
    """Tensor product grid: one (lower, upper, points) triple per axis."""

    axes: tuple

    def __post_init__(self):
        axes = tuple((float(lo), float(hi), int(n)) for lo, hi, n in self.axes)
        for lo, hi, n in axes:
            if not hi > lo:
                raise ValueError("axis upper bound must exceed lower bound")
            if n < 2:
                raise ValueError("each axis needs at least 2 points")
        self.axes = axes

    @classmethod
    def box(cls, bounds) -> "GridSpec":
        return cls(tuple(bounds))


def _axis_rule(lo: float, hi: float, n: int):
    """Nodes and weights on one axis: Simpson when n is odd, trapezoid else."""
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
    return x, w


def grid_nodes_weights(spec: GridSpec):
    """Per-axis (nodes, weights) lists for a GridSpec."""
    nodes, weights = [], []
    for lo, hi, n in spec.axes:
        x, w = _axis_rule(lo, hi, n)
        nodes.append(x)
        weights.append(w)
    return nodes, weights


def _flatten_grid(spec: GridSpec):
    """Stacked coordinates (N, k) and combined weights (N,)."""
    nodes, weights = grid_nodes_weights(spec)
    mesh = np.meshgrid(*nodes, indexing="ij")
    pts = np.stack([m.reshape(-1) for m in mesh], axis=-1)
    wmesh = np.meshgrid(*weights, indexing="ij")
    w = np.ones(pts.shape[0])
    for wm in wmesh:
        w = w * wm.reshape(-1)
    return pts, w


def _group_coords(pts: np.ndarray, d: int):
    return pts[:, :d], pts[:, d:2 * d], pts[:, 2 * d]


def tensor_integrate(f: Callable, spec: GridSpec, tol: float | None = None,
                     vectorized: bool = False):
    """Integrate f over the box described by spec.

    The grid axes are read as (y_1..y_d, eta_1..eta_d, s), so the axis count
    must be odd.  f maps a GroupPoint to a scalar, or, when vectorized is
    set, maps (y (N,d), eta (N,d), s (N,)) to an (N,) array.

    When tol is given and every axis has points congruent to 1 mod 4, the
    stride-2 subgrid gives a Richardson error estimate; GridTooCoarse is
    raised if it exceeds tol.  Returns (value, err) with err = nan when the
    estimate is unavailable.
    """
    k = len(spec.axes)
    if k % 2 != 1 or k < 3:
        raise ValueError("expected axes (y_1..y_d, eta_1..eta_d, s)")
    d = (k - 1) // 2
    pts, w = _flatten_grid(spec)
    y, eta, s = _group_coords(pts, d)
    if vectorized:
        vals = np.asarray(f(y, eta, s))
    else:
        vals = np.array([f(GroupPoint(y[i], eta[i], s[i]))
                         for i in range(pts.shape[0])])
    fine = complex(w @ vals)

    shape = tuple(n for _, _, n in spec.axes)
    err = float("nan")
    richardson_ok = all((n - 1) % 4 == 0 and n >= 5 for n in shape)
    if richardson_ok:
        grid_vals = vals.reshape(shape)
        sub = grid_vals[tuple(slice(None, None, 2) for _ in shape)]
        coarse_spec = GridSpec(tuple((lo, hi, (n + 1) // 2)
                                     for lo, hi, n in spec.axes))
        _, cw = grid_nodes_weights(coarse_spec)
        cmesh = np.meshgrid(*cw, indexing="ij")
        cwfull = cmesh[0].copy()
        for wm in cmesh[1:]:
            cwfull = cwfull * wm
        coarse = complex(np.sum(cwfull * sub))
        err = abs(fine - coarse) / 15.0
    if tol is not None:
        if not richardson_ok:
            raise ValueError(
                "error estimate needs every axis to have 4k+1 points")
        if err > tol:
            raise GridTooCoarse(
                "Richardson estimate %.3e exceeds tol %.3e" % (err, tol),
                value=fine, err=err)
    if abs(fine.imag) < 1e-300 and not np.iscomplexobj(vals):
        return fine.real, err
    return fine, err


# ---------------------------------------------------------------------------
# Gauge-ball norms

def ball_box(radius: float, d: int = 1, n_horizontal: int = 64,
             n_vertical: int | None = None) -> GridSpec:
    """Bounding box of the gauge ball of given radius, centered at 0."""
    r = float(radius)
    if n_vertical is None:
        n_vertical = n_horizontal
    axes = [(-r, r, n_horizontal)] * (2 * d) + [(-r * r, r * r, n_vertical)]
    return GridSpec(tuple(axes))


def lp_norm_on_ball(f: Callable, p: float, center: GroupPoint, radius: float,
                    spec: GridSpec, vectorized: bool = False) -> float:
    """L^p norm of f over the gauge ball around center.

    spec describes the box in ball-centered coordinates v; the actual
    evaluation points are center . v.  Membership is strict.  p may be any
    value >= 1 or inf (grid max of |f|).
    """
    k = len(spec.axes)
    if k % 2 != 1 or k < 3:
        raise ValueError("expected axes (y_1..y_d, eta_1..eta_d, s)")
    d = (k - 1) // 2
    if d != center.d:
        raise ValueError("grid dimension does not match the center point")
    pts, w = _flatten_grid(spec)
    vy, veta, vs = _group_coords(pts, d)
    gauge = koranyi_norm_arrays(vy, veta, vs)
    mask = gauge < float(radius)
    if not np.any(mask):
        raise QuadratureError("no grid nodes fall inside the ball")
    ay, aeta, as_ = product_arrays(center.y, center.eta, center.s, vy, veta, vs)
    if vectorized:
        vals = np.asarray(f(ay, aeta, as_))
    else:
        vals = np.array([f(GroupPoint(ay[i], aeta[i], as_[i]))
                         for i in range(pts.shape[0])])
    mags = np.abs(vals)
    if np.isinf(p):
        return float(np.max(mags[mask]))
    if p < 1.0:
        raise ValueError("p must be >= 1 or inf")
    return float((np.sum(w[mask] * mags[mask] ** p)) ** (1.0 / p))


def lp_norm_on_ball_radial(profile: Callable, p: float, radius: float,
                           d: int = 1, n_rho: int = 129,
                           n_s: int = 257) -> float:
    """L^p norm over the origin-centered gauge ball of a radial function.

    profile(rho, s) takes |Y|^2 and s (numpy arrays) and the horizontal
    integral reduces to the measure (pi^d / (d-1)!) rho^(d-1) drho ds on
    the quarter-plane slice rho >= 0, rho^2 + s^2 < radius^4.
    """
    r2 = float(radius) ** 2
    rho, wr = _axis_rule(0.0, r2, n_rho)
    s, ws = _axis_rule(-r2, r2, n_s)
    R, S = np.meshgrid(rho, s, indexing="ij")
    mask = R * R + S * S < r2 * r2
    vals = np.abs(np.asarray(profile(R, S)))
    if np.isinf(p):
        if not np.any(mask):
            raise QuadratureError("no grid nodes fall inside the ball")
        return float(np.max(vals[mask]))
    if p < 1.0:
        raise ValueError("p must be >= 1 or inf")
    const = math.pi ** d / math.factorial(d - 1)
    wgt = np.outer(wr, ws) * (R ** (d - 1) if d > 1 else 1.0)
    total = np.sum(wgt[mask] * vals[mask] ** p)
    return float((const * total) ** (1.0 / p))
