"""Flow kernels on H^d in closed oscillatory-integral form.

Every kernel here is a function of rho = |Y|^2 and s evaluated by one
integral over a real line variable tau:

    (4 pi z)^(-(d+1)) * integral of
        (2 tau / sinh 2 tau)^d  exp( i tau s / (2z) - rho tau_over_tanh2 / (2z) )

with z = t for heat, z = -i t for the unitary flow, and general z in the
closed right half plane in between.  The integrand magnitude is controlled
by exp((2d) |tau|) times the exponential factors, which yields the strip
conditions below; outside the strip the integral has no exponential
envelope and the evaluator refuses to run.

Restricted kernels (initial data with Laguerre index >= ell) subtract the
first ell terms of the Laguerre generating series from the same integrand
and gain envelope decay exp(-4 ell |tau|), hence a wider strip.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .quadrature import Integrand1D, integrate_adaptive, integrate_exponential_tail
from .special import (TruncationBudget, laguerre_table, sinh_ratio_log,
                      sinh_ratio_pow, tau_over_tanh2)


class StripViolation(Exception):
    """Query point outside the strip where the kernel integral converges."""


class ZeroTime(ValueError):
    """Flow kernels are undefined at t = 0."""


class BudgetExhausted(Exception):
    """Series budget ran out; carries partial value, error and term count."""

    def __init__(self, message, value=None, err=None, terms=None):
        super().__init__(message)
        self.value = value
        self.err = err
        self.terms = terms


@dataclass
class KernelQuery:
    """One kernel evaluation request.

    t_or_z : real time (heat and unitary flows) or complex time z
    rho    : |Y|^2 >= 0
    s      : vertical coordinate
    tol    : absolute tolerance on the returned value; None picks the
             per-operation default (1e-8, restricted kernels 1e-6)
    """

    d: int = 1
    t_or_z: complex = 1.0
    rho: float = 0.0
    s: float = 0.0
    tol: float | None = None

    def __post_init__(self):
        self.d = int(self.d)
        if self.d < 1:
            raise ValueError("d must be a positive integer")
        self.rho = float(self.rho)
        if self.rho < 0.0:
            raise ValueError("rho = |Y|^2 must be nonnegative")
        self.s = float(self.s)
        if self.tol is not None and not self.tol > 0.0:
            raise ValueError("tol must be positive")

    @property
    def t(self) -> float:
        z = complex(self.t_or_z)
        if z.imag != 0.0:
            raise ValueError("this operation needs a real time")
        return z.real

    @property
    def z(self) -> complex:
        return complex(self.t_or_z)


@dataclass
class KernelValue:
    """value plus an error bound and the tau truncation point (for series
    evaluations, the number of terms actually summed)."""

    value: complex
    quad_error: float
    truncation_point: float


_DEFAULT_TOL = 1e-8
_DEFAULT_TOL_RESTRICTED = 1e-6
_GUARD_RATIO = 1e6


def _envelope_rate(d: int, z: complex, rho: float, s: float) -> float:
    """Decay rate of the integrand envelope exp(-rate |tau|)."""
    mod2 = 2.0 * (z.real * z.real + z.imag * z.imag)
    return 2.0 * d + (rho * z.real - abs(s * z.imag)) / mod2


def _osc_panel_width(z: complex, rho: float, s: float) -> float | None:
    """Cap on quadrature panel width, from the integrand phase speed.

    The s term oscillates at |s Re(1/2z)| per unit tau; the rho term at
    rho |Im(1/2z)| times the slope of tau/tanh(2 tau), which tends to 2."""
    inv2z = 1.0 / (2.0 * z)
    freq = abs(s * inv2z.real) + 2.2 * rho * abs(inv2z.imag)
    if freq < 0.05:
        return None
    return min(3.0 * math.pi / freq, 16.0)


def _laguerre_series_tail(ell: int, alpha: float, x: np.ndarray,
                          r: np.ndarray) -> np.ndarray:
    """sum over k >= ell of r^k L_k^(alpha)(x), elementwise.

    Only called in the regime r well below 1, where the series converges
    geometrically; the direct generating-function difference loses all
    digits there.
    """
    lk_back = np.ones_like(x)        # L_{k-2} once k >= 2
    lk = 1.0 + alpha - x             # L_{k-1} once k >= 2
    acc = np.zeros_like(x, dtype=complex)
    rk = np.ones_like(r)
    calm = 0
    for k in range(0, ell + 2000):
        if k == 0:
            lcur = lk_back
        elif k == 1:
            lcur = lk
        else:
            lk_back, lk = lk, ((2 * (k - 1) + 1 + alpha - x) * lk
                               - ((k - 1) + alpha) * lk_back) / k
            lcur = lk
        if k >= ell:
            term = rk * lcur
            acc = acc + term
            if np.max(np.abs(term)) < 1e-17 * max(np.max(np.abs(acc)), 1e-300):
                calm += 1
                if calm >= 2:
                    return acc
            else:
                calm = 0
        rk = rk * r
    raise RuntimeError("Laguerre tail did not settle; r too close to 1")


def _integrand_values(d: int, z: complex, rho: np.ndarray, s: np.ndarray,
                      tau: np.ndarray, ell: int | None) -> np.ndarray:
    """Strip-kernel integrand, elementwise over equal-length flat arrays.

    For ell in (None, 0) this is the plain integrand; positive ell
    subtracts the first ell terms of the Laguerre generating series from
    it, switching to a tail resummation wherever the subtraction loses six
    digits.
    """
    inv2z = 1.0 / (2.0 * z)
    base = np.exp(sinh_ratio_log(tau, d)
                  + (1j * tau * s - rho * tau_over_tanh2(tau)) * inv2z)
    if not ell:
        return base
    alpha = d - 1.0
    at = np.abs(tau)
    with np.errstate(divide="ignore"):
        logamp = d * np.log(4.0 * at)
    x = rho * at * (2.0 * inv2z)
    r = np.exp(-4.0 * at)
    pref = np.exp(logamp - 2.0 * d * at + (1j * tau * s - rho * at) * inv2z)
    lag = laguerre_table(ell - 1, alpha, x)
    part = np.zeros_like(x, dtype=complex)
    part_abs = np.zeros_like(at)
    rk = np.ones_like(r)
    for k in range(ell):
        if k:
            rk = rk * r
        term = rk * lag[k]
        part = part + term
        part_abs = part_abs + np.abs(term)
    diff = base - pref * part
    lost = (np.abs(base) + np.abs(pref) * part_abs
            > _GUARD_RATIO * np.maximum(np.abs(diff), 1e-300))
    bad = lost & (at > 0.0)
    if np.any(bad):
        tail = _laguerre_series_tail(ell, alpha, x[bad], r[bad])
        diff[bad] = pref[bad] * tail
    return diff


def _make_strip_integrand(d: int, z: complex, rho: float, s: float,
                          ell: int | None):
    """Scalar-query closure over tau around the shared flat evaluator."""

    def g(tau):
        tau = np.atleast_1d(np.asarray(tau, dtype=float))
        rho_f = np.full_like(tau, rho)
        s_f = np.full_like(tau, s)
        return _integrand_values(d, z, rho_f, s_f, tau, ell)

    return g


def _strip_eval(d: int, z: complex, rho: float, s: float, tol: float,
                ell: int | None = None) -> KernelValue:
    rate = _envelope_rate(d, z, rho, s) + (4.0 * ell if ell else 0.0)
    if rate <= 0.0:
        band = 2.0 * (2 * (ell or 0) + d)
        raise StripViolation(
            "no envelope: need |s| < %g |z| at rho = %g (rate %.3g)"
            % (2.0 * band, rho, rate))
    pref = (4.0 * math.pi * z) ** (-(d + 1))
    integrand = Integrand1D(_make_strip_integrand(d, z, rho, s, ell), rate)
    width = _osc_panel_width(z, rho, s)
    val, err, t_cut = integrate_exponential_tail(
        integrand, tol / abs(pref), max_panel_width=width)
    return KernelValue(pref * val, abs(pref) * err, t_cut)


# ---------------------------------------------------------------------------
# Public kernels

def heat_kernel_gaveau(q: KernelQuery) -> KernelValue:
    """Heat kernel by direct quadrature of the closed form.

    Real, positive, and self-similar: the value at time t equals
    t^(-Q/2) times the value at time 1 of (rho / t, s / t)."""
    t = q.t
    if t <= 0.0:
        raise ValueError("heat kernel needs t > 0")
    tol = q.tol if q.tol is not None else _DEFAULT_TOL
    return _strip_eval(q.d, complex(t), q.rho, q.s, tol)


def schrodinger_kernel(q: KernelQuery) -> KernelValue:
    """Unitary flow kernel at real t != 0, defined for |s| < 4 d |t|."""
    t = q.t
    if t == 0.0:
        raise ZeroTime("unitary kernel undefined at t = 0")
    tol = q.tol if q.tol is not None else _DEFAULT_TOL
    return _strip_eval(q.d, complex(0.0, -t), q.rho, q.s, tol)


def kernel_complex_time(q: KernelQuery, eps: float = 0.05) -> KernelValue:
    """Kernel at complex time z, Re z >= 0, z != 0.

    Requires |s| < (4 d - eps) |z| so the integrand keeps an exponential
    envelope with a margin; StripViolation otherwise."""
    z = q.z
    if z == 0:
        raise ZeroTime("kernel undefined at z = 0")
    if z.real < 0.0:
        raise ValueError("need Re z >= 0")
    if not 0.0 < eps < 4.0 * q.d:
        raise ValueError("eps must lie in (0, 4d)")
    if abs(q.s) >= (4.0 * q.d - eps) * abs(z):
        raise StripViolation(
            "|s| = %g outside (4d - eps)|z| = %g"
            % (abs(q.s), (4.0 * q.d - eps) * abs(z)))
    tol = q.tol if q.tol is not None else _DEFAULT_TOL
    return _strip_eval(q.d, z, q.rho, q.s, tol)


def restricted_kernel(ell: int, q: KernelQuery) -> KernelValue:
    """Unitary kernel restricted to Laguerre indices >= ell.

    Strip widens to |s| < 4 (2 ell + d) |t|; at ell = 0 this runs the exact
    same evaluation as schrodinger_kernel."""
    ell = int(ell)
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    t = q.t
    if t == 0.0:
        raise ZeroTime("unitary kernel undefined at t = 0")
    tol = q.tol if q.tol is not None else _DEFAULT_TOL_RESTRICTED
    return _strip_eval(q.d, complex(0.0, -t), q.rho, q.s, tol, ell=ell)


# ---------------------------------------------------------------------------
# Heat kernel as a Laguerre-index series (the transform route)

def series_term_closed(d: int, t: float, rho: float, s: float,
                       ell) -> np.ndarray:
    """Closed form of the lam > 0 half of one series term:

    J_ell = integral over lam > 0 of
            lam^(d) exp(-p lam) L_ell^(d-1)(b lam),
    p = 4 t (2 ell + d) + rho - i s,  b = 2 rho.

    Vectorized over ell.  The term of the kernel series is 2 Re J_ell.
    """
    ells = np.atleast_1d(np.asarray(ell, dtype=int))
    alpha = d - 1
    p = 4.0 * t * (2.0 * ells + d) + rho - 1j * s
    b = 2.0 * rho
    out = np.empty(ells.size, dtype=complex)

    zero = ells == 0
    if np.any(zero):
        out[zero] = math.gamma(alpha + 2) * p[zero] ** (-(alpha + 2))
    pos = ~zero
    if np.any(pos):
        lp = ells[pos].astype(float)
        pp = p[pos]
        pb = pp - b
        coef = np.ones(lp.size)
        for j in range(1, alpha + 1):
            coef *= lp + j
        with np.errstate(divide="ignore", invalid="ignore"):
            logpb = np.where(pb == 0.0, 0.0, np.log(pb))
            expo = (lp - 1.0) * logpb - (lp + alpha + 2.0) * np.log(pp)
        head = (alpha + 1.0) * pp - (lp + alpha + 1.0) * b
        val = coef * np.exp(expo) * head
        val = np.where((pb == 0.0) & (lp >= 2.0), 0.0, val)
        out[pos] = val
    if np.isscalar(ell) or np.asarray(ell).ndim == 0:
        return complex(out[0])
    return out


def series_term_quadrature(d: int, t: float, rho: float, s: float,
                           ell: int, tol: float = 1e-12) -> complex:
    """Same J_ell by adaptive quadrature; the cross-check route."""
    alpha = d - 1.0
    p = 4.0 * t * (2.0 * ell + d) + rho - 1j * s
    b = 2.0 * rho

    def f(lam):
        lam = np.atleast_1d(np.asarray(lam, dtype=float))
        out = np.zeros(lam.shape, dtype=complex)
        posm = lam > 0.0
        lp = lam[posm]
        tab = laguerre_table(ell, alpha, b * lp)
        out[posm] = lp ** (alpha + 1.0) * np.exp(-p * lp) * tab[ell]
        return out

    integrand = Integrand1D(f, envelope_rate=0.5 * p.real)
    val, _, _ = integrate_exponential_tail(integrand, tol)
    return complex(val)


def heat_kernel_series(q: KernelQuery,
                       budget: TruncationBudget | None = None) -> KernelValue:
    """Heat kernel summed over Laguerre indices.

    Terms fall off like ell^(-2); after budget.max_terms closed-form terms
    the remainder is extrapolated by a two-point fit of ell^2 * term to
    a + b / ell.  If the estimated tail error stays above
    budget.tail_tolerance, BudgetExhausted is raised with the partial sum
    attached."""
    if budget is None:
        budget = TruncationBudget()
    d = q.d
    t = q.t
    if t <= 0.0:
        raise ValueError("heat kernel needs t > 0")
    n = budget.max_terms
    const = 2.0 ** (d - 1) / math.pi ** (d + 1)

    ells = np.arange(n)
    terms = 2.0 * np.real(series_term_closed(d, t, q.rho, q.s, ells))
    partial = float(np.sum(terms))

    if n >= 16:
        l1 = n - 1
        l2 = (3 * n) // 4
        g1 = terms[l1] * l1 * l1
        g2 = terms[l2] * l2 * l2
        bb = (g1 - g2) / (1.0 / l1 - 1.0 / l2)
        aa = g1 - bb / l1
        p2 = 1.0 / n + 1.0 / (2.0 * n * n) + 1.0 / (6.0 * n ** 3)
        p3 = 1.0 / (2.0 * n * n) + 1.0 / (2.0 * n ** 3)
        tail = aa * p2 + bb * p3
        err = abs(g1 - g2) / n + 1e-16 * abs(partial)
    else:
        tail = 0.0
        err = abs(terms[-1]) * n
    value = const * (partial + tail)
    err_final = const * err
    if err_final > budget.tail_tolerance:
        raise BudgetExhausted(
            "tail error %.3e above tolerance %.3e after %d terms"
            % (err_final, budget.tail_tolerance, n),
            value=value, err=err_final, terms=n)
    return KernelValue(complex(value), err_final, float(n))


# ---------------------------------------------------------------------------
# Dispersion constants

def dispersion_constant(kappa: float, d: int = 1, tol: float = 1e-10,
                        signed: bool = False) -> float:
    """Sup-norm constant of the unitary kernel on the region |s| <= kappa^2 |t|:

    M_kappa = (4 pi)^(-(d+1)) integral of
              (2 tau / sinh 2 tau)^d exp(kappa^2 |tau| / 2).

    Finite exactly when kappa^2 < 4 d; raises ValueError at or beyond.
    The signed variant replaces |tau| by tau, which by symmetry integrates
    cosh(kappa^2 tau / 2) and is smaller."""
    kappa = float(kappa)
    if kappa < 0.0:
        raise ValueError("kappa must be nonnegative")
    rate = 2.0 * d - 0.5 * kappa * kappa
    if rate <= 0.0:
        raise ValueError(
            "dispersion integral diverges for kappa^2 >= 4d (kappa = %g)"
            % kappa)
    k2 = 0.5 * kappa * kappa

    def log_ratio(tau):
        # log(2 tau / sinh 2 tau), safe at large tau where the plain ratio
        # underflows while exp(k2 tau) overflows; the combined exponent is
        # bounded whenever rate > 0.
        x = 2.0 * np.abs(np.asarray(tau, dtype=float))
        small = x < 1e-8
        xs = np.where(small, 1.0, x)
        out = np.log(xs) - xs - np.log1p(-np.exp(-2.0 * xs)) + math.log(2.0)
        return np.where(small, -x * x / 6.0, out)

    if signed:
        def f(tau):
            a = np.abs(np.asarray(tau, dtype=float))
            lr = d * log_ratio(a)
            return 0.5 * (np.exp(lr + k2 * a) + np.exp(lr - k2 * a))
    else:
        def f(tau):
            a = np.abs(np.asarray(tau, dtype=float))
            return np.exp(d * log_ratio(a) + k2 * a)

    # Near the endpoint the integral grows like 1/rate; an absolute tol
    # there would sit below the composite-rule round-off floor, so read
    # tol relative to that magnitude once it exceeds one.
    tol_eff = tol * max(1.0, 2.0 / rate)
    val, _, _ = integrate_exponential_tail(Integrand1D(f, rate), tol_eff)
    return float(np.real(val)) / (4.0 * math.pi) ** (d + 1)


def dispersive_onset_time(kappa: float, r0: float, d: int = 1) -> float:
    """Time after which the ball |w| < r0 sits inside the kernel strip
    {|s| <= kappa^2 t}: T = (r0 / (sqrt(4d) - kappa))^2."""
    kappa = float(kappa)
    root = math.sqrt(4.0 * d)
    if not 0.0 <= kappa < root:
        raise ValueError("need 0 <= kappa < sqrt(4d)")
    return (float(r0) / (root - kappa)) ** 2


# ---------------------------------------------------------------------------
# Batched evaluation on a fixed tau grid (used by grid convolution)

def schrodinger_batch(d: int, t: float, rho, s, tol: float = 1e-6):
    """Unitary kernel at many (rho, s) pairs on one shared tau grid.

    All points must satisfy the strip condition; StripViolation names the
    worst offender otherwise.  Returns (values, err_estimate)."""
    t = float(t)
    if t == 0.0:
        raise ZeroTime("unitary kernel undefined at t = 0")
    rho = np.ascontiguousarray(rho, dtype=float).reshape(-1)
    s = np.ascontiguousarray(s, dtype=float).reshape(-1)
    if rho.size != s.size:
        raise ValueError("rho and s must have equal length")
    if np.any(rho < 0.0):
        raise ValueError("rho must be nonnegative")
    z = complex(0.0, -t)
    smax = float(np.max(np.abs(s))) if s.size else 0.0
    rate = 2.0 * d - smax / (2.0 * abs(t))
    if rate <= 0.0:
        worst = float(np.max(np.abs(s)))
        raise StripViolation(
            "batch point |s| = %g outside the strip 4 d |t| = %g"
            % (worst, 4.0 * d * abs(t)))

    # amplitude probe against the worst-case envelope
    def log_amp(tau):
        return (sinh_ratio_log(tau, d) + np.abs(tau) * smax / (2.0 * abs(t))
                + rate * np.abs(tau))

    probe = np.array([0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
    c_amp = float(np.exp(np.max(log_amp(probe))))
    t_cut = math.log(max(4.0 * c_amp / (rate * tol), 2.0)) / rate
    near = t_cut * np.array([0.55, 0.75, 0.95])
    c_amp = max(c_amp, float(np.exp(np.max(log_amp(near)))))
    t_cut = math.log(max(4.0 * c_amp / (rate * tol), 2.0)) / rate

    rho_max = float(np.max(rho)) if rho.size else 0.0
    width = _osc_panel_width(z, rho_max, smax) or (2.0 * t_cut)

    pref = (4.0 * math.pi * z) ** (-(d + 1))
    values = pref * _fixed_grid_sum(d, z, rho, s, t_cut, width)
    # error probe: re-evaluate a subsample with doubled resolution
    take = np.linspace(0, rho.size - 1, min(8, rho.size)).astype(int)
    finer = pref * _fixed_grid_sum(d, z, rho[take], s[take], t_cut, 0.5 * width)
    err = float(np.max(np.abs(finer - values[take])))
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return values, max(err, 1e-16 * scale)


_GL16_X, _GL16_W = np.polynomial.legendre.leggauss(16)


def _fixed_tau_rule(t_cut: float, width: float):
    """Mirrored Gauss panels on [-T, T] with a panel edge at 0.

    The edge matters: the restricted integrand has an |tau| kink at the
    origin, harmless at a boundary but fatal inside a panel."""
    n_half = max(1, int(math.ceil(t_cut / width)))
    edges = np.linspace(0.0, t_cut, n_half + 1)
    mids = 0.5 * (edges[:-1] + edges[1:])
    half = 0.5 * (edges[1] - edges[0])
    pos = (mids[:, None] + half * _GL16_X[None, :]).reshape(-1)
    wpos = np.broadcast_to(half * _GL16_W[None, :],
                           (n_half, 16)).reshape(-1)
    tau = np.concatenate([-pos[::-1], pos])
    w = np.concatenate([wpos[::-1], wpos])
    return tau, w


def _fixed_grid_sum(d, z, rho, s, t_cut, width):
    tau, w = _fixed_tau_rule(t_cut, width)
    logratio = sinh_ratio_log(tau, d)
    t2t = tau_over_tanh2(tau)
    inv2z = 1.0 / (2.0 * z)
    return backend.kernel_tau_sum(rho, s, inv2z, tau, w, logratio, t2t)


def restricted_batch(ell: int, d: int, t: float, rho, s, tol: float = 1e-6):
    """Restricted kernel at many (rho, s) pairs on one shared tau grid.

    Same contract as schrodinger_batch with the wider strip
    |s| < 4 (2 ell + d) |t|.  Falls back to schrodinger_batch at ell = 0.
    """
    ell = int(ell)
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    if ell == 0:
        return schrodinger_batch(d, t, rho, s, tol)
    t = float(t)
    if t == 0.0:
        raise ZeroTime("unitary kernel undefined at t = 0")
    rho = np.ascontiguousarray(rho, dtype=float).reshape(-1)
    s = np.ascontiguousarray(s, dtype=float).reshape(-1)
    if rho.size != s.size:
        raise ValueError("rho and s must have equal length")
    if np.any(rho < 0.0):
        raise ValueError("rho must be nonnegative")
    z = complex(0.0, -t)
    smax = float(np.max(np.abs(s))) if s.size else 0.0
    rho_max = float(np.max(rho)) if rho.size else 0.0
    rate = 2.0 * d + 4.0 * ell - smax / (2.0 * abs(t))
    if rate <= 0.0:
        raise StripViolation(
            "batch point |s| = %g outside the strip 4 (2 ell + d) |t| = %g"
            % (smax, 4.0 * (2 * ell + d) * abs(t)))

    corners = [(0.0, smax), (0.0, -smax), (rho_max, smax), (rho_max, -smax)]
    probe = np.array([0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0])
    probe = np.concatenate([probe, -probe])

    def amplitude(points: np.ndarray) -> float:
        best = 1e-300
        for rc, sc in corners:
            vals = _integrand_values(d, z, np.full_like(points, rc),
                                     np.full_like(points, sc), points, ell)
            best = max(best, float(np.max(np.abs(vals)
                                          * np.exp(rate * np.abs(points)))))
        return best

    c_amp = amplitude(probe)
    t_cut = math.log(max(4.0 * c_amp / (rate * tol), 2.0)) / rate
    near = t_cut * np.array([0.55, 0.75, 0.95])
    c_amp = max(c_amp, amplitude(np.concatenate([near, -near])))
    t_cut = math.log(max(4.0 * c_amp / (rate * tol), 2.0)) / rate
    width = _osc_panel_width(z, rho_max, smax) or (2.0 * t_cut)

    pref = (4.0 * math.pi * z) ** (-(d + 1))
    values = pref * _restricted_fixed_sum(ell, d, z, rho, s, t_cut, width)
    take = np.linspace(0, rho.size - 1, min(8, rho.size)).astype(int)
    finer = pref * _restricted_fixed_sum(ell, d, z, rho[take], s[take],
                                         t_cut, 0.5 * width)
    err = float(np.max(np.abs(finer - values[take])))
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return values, max(err, 1e-16 * scale)


_BATCH_CHUNK = 2048


def _restricted_fixed_sum(ell, d, z, rho, s, t_cut, width):
    tau, w = _fixed_tau_rule(t_cut, width)
    m = tau.size
    out = np.empty(rho.size, dtype=np.complex128)
    for lo in range(0, rho.size, _BATCH_CHUNK):
        hi = min(lo + _BATCH_CHUNK, rho.size)
        b = hi - lo
        rho_f = np.repeat(rho[lo:hi], m)
        s_f = np.repeat(s[lo:hi], m)
        tau_f = np.tile(tau, b)
        vals = _integrand_values(d, z, rho_f, s_f, tau_f, ell)
        out[lo:hi] = vals.reshape(b, m) @ w
    return out


# ---------------------------------------------------------------------------
# Batch CSV interface

def queries_from_csv(fh) -> list:
    """Read KernelQuery rows.

    Expects columns d, rho, s and either t or the pair re_z, im_z.
    Lines starting with # are skipped."""
    import csv

    rows = [r for r in csv.reader(line for line in fh
                                  if not line.lstrip().startswith("#"))
            if r]
    header = [h.strip() for h in rows[0]]
    idx = {name: i for i, name in enumerate(header)}
    for need in ("d", "rho", "s"):
        if need not in idx:
            raise ValueError("missing column %r" % need)
    complex_time = "re_z" in idx
    if not complex_time and "t" not in idx:
        raise ValueError("need a t column or re_z, im_z columns")
    out = []
    for r in rows[1:]:
        if complex_time:
            t_or_z = complex(float(r[idx["re_z"]]), float(r[idx["im_z"]]))
        else:
            t_or_z = float(r[idx["t"]])
        out.append(KernelQuery(d=int(r[idx["d"]]), t_or_z=t_or_z,
                               rho=float(r[idx["rho"]]),
                               s=float(r[idx["s"]])))
    return out


def results_to_csv(fh, queries, results):
    """Write query/result pairs with the schema header line."""
    if len(queries) != len(results):
        raise ValueError("queries and results differ in length")
    complex_time = any(isinstance(q.t_or_z, complex)
                       and q.t_or_z.imag != 0.0 for q in queries)
    fh.write("# schema=1\n")
    time_cols = "re_z,im_z" if complex_time else "t"
    fh.write("d,%s,rho,s,re,im,quad_error,truncation_point\n" % time_cols)
    for q, r in zip(queries, results):
        z = complex(q.t_or_z)
        tc = ("%.17g,%.17g" % (z.real, z.imag) if complex_time
              else "%.17g" % z.real)
        fh.write("%d,%s,%.17g,%.17g,%.17g,%.17g,%.3g,%.6g\n"
                 % (q.d, tc, q.rho, q.s, r.value.real, r.value.imag,
                    r.quad_error, r.truncation_point))
