"""Formula-independent scattering engine.

Piecewise-constant and delta potentials get an exact transfer-matrix
amplitude; smooth (Eckart-family) potentials are integrated as an ODE with
exponential-tail-corrected boundary data.  Poles of the transmission
amplitude in the complex k plane (the quasi-normal wavenumbers) are located
by a grid scan plus Newton refinement of g(k) = 1/t(k).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import solve_ivp

from .errors import AtPoleError, DomainError, NotAScatteringPotential, OverflowGuardError
from .potentials import (
    AsymDoubleDelta,
    AsymRectBarrier,
    Delta,
    DoubleDelta,
    PhysicalConstants,
    DEFAULT_CONSTANTS,
    RectBarrier,
    ScatteringAmplitudes,
    Step,
    delta_k0,
    eckart_reduction,
    evaluate,
    scattering_limits,
)

__all__ = [
    "SearchRegion",
    "PoleReport",
    "numeric_amplitude",
    "find_poles",
    "refine_pole",
    "transfer_matrix_det_error",
]

_PIECEWISE = (Delta, DoubleDelta, AsymDoubleDelta, Step, RectBarrier, AsymRectBarrier)

# exp-argument cap: beyond this the transfer/ODE products are not representable
_EXP_GUARD = 600.0


@dataclass(frozen=True)
class SearchRegion:
    """Rectangle in the complex k plane scanned for amplitude poles."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float
    grid_density: float = 8.0

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise DomainError("empty search region")
        if self.grid_density <= 0:
            raise DomainError("grid_density must be positive")


@dataclass
class PoleReport:
    """Poles found in a region: (k, residual |1/t|, multiplicity hint) triples."""

    poles: list
    region: SearchRegion
    count_check: int | None = None
    warnings: list = field(default_factory=list)


# ---------------------------------------------------------------------------
# Transfer matrices (piecewise-constant + delta potentials)
# ---------------------------------------------------------------------------

def _interfaces(spec, c):
    """(position, V_left, V_right, delta strength 2*k0) per interface, left to right."""
    if isinstance(spec, Delta):
        return [(0.0, 0.0, 0.0, 2.0 * delta_k0(spec.alpha, c))]
    if isinstance(spec, DoubleDelta):
        g = 2.0 * delta_k0(spec.alpha, c)
        return [(-spec.a, 0.0, 0.0, g), (spec.a, 0.0, 0.0, g)]
    if isinstance(spec, AsymDoubleDelta):
        gp = 2.0 * delta_k0(spec.alpha_plus, c)
        gm = 2.0 * delta_k0(spec.alpha_minus, c)
        return [(-spec.a, 0.0, 0.0, gp), (spec.a, 0.0, 0.0, gm)]
    if isinstance(spec, Step):
        return [(0.0, 0.0, spec.V0, 0.0)]
    if isinstance(spec, RectBarrier):
        return [(-spec.a, 0.0, spec.V0, 0.0), (spec.a, spec.V0, 0.0, 0.0)]
    if isinstance(spec, AsymRectBarrier):
        return [(-spec.a, spec.V1, spec.V2, 0.0), (spec.a, spec.V2, spec.V3, 0.0)]
    raise NotAScatteringPotential(f"{type(spec).__name__} is not piecewise-constant")


def _wave_matrix(x, kappa):
    """Columns are (psi, psi') of the basis exp(-i kappa x), exp(+i kappa x)."""
    if abs(kappa.imag * x) > _EXP_GUARD:
        raise OverflowGuardError(
            f"exp(|Im k| |x|) not representable at k={kappa}, x={x}"
        )
    em = cmath.exp(-1j * kappa * x)
    ep = cmath.exp(1j * kappa * x)
    return np.array([[em, ep], [-1j * kappa * em, 1j * kappa * ep]], dtype=complex)


def _transfer_matrix(spec, k, c):
    """M with (A_left, B_left) = M (A_right, B_right); also returns (k-, k+)."""
    p2 = c.p2
    faces = _interfaces(spec, c)
    v_in = faces[0][1]
    e = k * k / p2 + v_in  # energy from the incidence side

    def region_k(v):
        # reuse the caller's k wherever the potential matches the incidence
        # side, so the matrix is the analytic continuation in k
        return k if v == v_in else cmath.sqrt(p2 * (e - v))

    m = np.eye(2, dtype=complex)
    for x0, v_l, v_r, g in faces:
        w_l = _wave_matrix(x0, region_k(v_l))
        w_r = _wave_matrix(x0, region_k(v_r))
        jump = np.array([[1.0, 0.0], [-g, 1.0]], dtype=complex)
        m = m @ np.linalg.solve(w_l, jump @ w_r)
    return m, k, region_k(faces[-1][2])


def _transfer_amplitude(spec, k, c) -> ScatteringAmplitudes:
    m, k_m, k_p = _transfer_matrix(spec, k, c)
    if m[0, 0] == 0:
        return ScatteringAmplitudes(complex("inf"), None, k_m, k_p)
    t_coeff = 1.0 / m[0, 0]
    r = m[1, 0] / m[0, 0]
    t = t_coeff * cmath.sqrt(k_p) / cmath.sqrt(k_m)
    return ScatteringAmplitudes(t, r, k_m, k_p)


def transfer_matrix_det_error(spec, k, c: PhysicalConstants = DEFAULT_CONSTANTS) -> float:
    """|det M - k_+/k_-|: the flux-conservation surrogate (0 for exact matrices)."""
    m, k_m, k_p = _transfer_matrix(spec, complex(k), c)
    return abs(np.linalg.det(m) - k_p / k_m)


# ---------------------------------------------------------------------------
# ODE integration for smooth potentials
# ---------------------------------------------------------------------------

def _tail_coefficients(red, c, side, order=4):
    """W_j of V - V_inf = sum_j W_j exp(-2 j |x| / a) in units of 1/length^2.

    Uses tanh(u) -/+ 1 = -/+ 2 sum (-1)^(j-1) exp(-/+ 2ju) and
    sech^2(u) = 4 sum (-1)^(j-1) j exp(-/+ 2ju).
    """
    p2 = c.p2
    dv = red.v_plus - red.v_minus
    out = []
    for j in range(1, order + 1):
        sgn = (-1.0) ** (j - 1)
        if side > 0:
            out.append(p2 * sgn * (4.0 * j * red.v0 - dv))
        else:
            out.append(p2 * sgn * (4.0 * j * red.v0 + dv))
    return out


def _tail_eta(ws, k, a):
    """Correction coefficients of psi = e^{-i k u} (1 + sum eta_j e^{-2 j u / a}).

    Here u is the outward coordinate (+x on the right, -x on the left) and ws
    are the tail coefficients of W = p2 (V - V_inf) = sum_j ws_j e^{-2 j u/a}.
    Plugging the ansatz into psi'' + k^2 psi = W psi gives the recursion
    eta_l X_l = ws_l + sum_{j<l} ws_j eta_{l-j} with X_l = 4ikl/a + 4l^2/a^2.
    """
    etas = []
    for ell in range(1, len(ws) + 1):
        x_ell = 4.0j * k * ell / a + 4.0 * ell * ell / (a * a)
        s = ws[ell - 1]
        for j in range(1, ell):
            s += ws[j - 1] * etas[ell - j - 1]
        etas.append(s / x_ell)
    return etas


def _tail_state(etas, k, a, x, side):
    """(psi, psi') of the outgoing tail-corrected solution at coordinate x."""
    # side > 0: psi = e^{-ikx} (1 + sum eta_j e^{-2jx/a}); side < 0 mirrored
    u = -x if side < 0 else x
    phase = cmath.exp(-1j * k * u)
    f = 1.0 + 0j
    fp = 0.0 + 0j  # derivative of the bracket w.r.t. u
    for j, eta in enumerate(etas, start=1):
        e = cmath.exp(-2.0 * j * u / a)
        f += eta * e
        fp += eta * e * (-2.0 * j / a)
    psi = phase * f
    dpsi_du = phase * (-1j * k * f + fp)
    return psi, (dpsi_du if side > 0 else -dpsi_du)


def _ode_amplitude(spec, k, c, L=None, rtol=1e-12, atol=None, tail_order=4) -> ScatteringAmplitudes:
    red = eckart_reduction(spec)
    a, shift = red.a, red.shift
    p2 = c.p2
    k_m = complex(k)
    e = red.v_minus + k_m * k_m / p2
    k_p = k_m if red.v_plus == red.v_minus else cmath.sqrt(p2 * (e - red.v_plus))

    if L is None:
        im = max(abs(k_m.imag), abs(k_p.imag))
        if im * a <= 0.05:
            L = 14.0 * a
        else:
            # balance: extracting the subdominant coefficient loses a factor
            # exp(2 |Im k| L) of precision while the tail-series boundary
            # error falls like exp(-2(order+1) L / a)
            L = a * min(14.0, max(2.0, 8.0 / (im * a)))
    im_scale = max(abs(k_m.imag), abs(k_p.imag)) * 2.0 * L
    if im_scale > _EXP_GUARD:
        raise OverflowGuardError(
            f"|Im k| L = {im_scale / 2:.1f} too large for the ODE oracle"
        )

    ws_p = _tail_coefficients(red, c, +1, tail_order)
    ws_m = _tail_coefficients(red, c, -1, tail_order)
    eta_p = _tail_eta(ws_p, k_p, a)

    # integrate the reduced standard potential; the shift becomes a phase below
    from .potentials import Eckart as _Eck

    red_spec = _Eck(red.v_minus, red.v_plus, red.v0, a)

    def rhs(x, y):
        # y = (Re psi, Im psi, Re psi', Im psi')
        v = evaluate(red_spec, x)
        psi = complex(y[0], y[1])
        dd = p2 * (v - e) * psi
        return [y[2], y[3], dd.real, dd.imag]

    psi0, dpsi0 = _tail_state(eta_p, k_p, a, L, +1)
    y0 = [psi0.real, psi0.imag, dpsi0.real, dpsi0.imag]
    if atol is None:
        atol = 1e-14 * max(1.0, abs(psi0))
    sol = solve_ivp(
        rhs, (L, -L), y0, method="DOP853", rtol=rtol, atol=atol, dense_output=False
    )
    if not sol.success:
        raise OverflowGuardError(f"ODE integration failed: {sol.message}")
    psi = complex(sol.y[0, -1], sol.y[1, -1])
    dpsi = complex(sol.y[2, -1], sol.y[3, -1])

    # tail-corrected left basis: reflected e^{+ikx} = e^{-ik|x|} is the
    # outward state, incident e^{-ikx} is its k -> -k partner
    p_ref, dp_ref = _tail_state(_tail_eta(ws_m, k_m, a), k_m, a, -L, -1)
    p_inc, dp_inc = _tail_state(_tail_eta(ws_m, -k_m, a), -k_m, a, -L, -1)
    det = p_inc * dp_ref - p_ref * dp_inc
    if det == 0:
        raise OverflowGuardError("degenerate left-boundary basis")
    a_coef = (psi * dp_ref - p_ref * dpsi) / det
    b_coef = (p_inc * dpsi - psi * dp_inc) / det
    if a_coef == 0:
        return ScatteringAmplitudes(complex("inf"), None, k_m, k_p)
    t = (1.0 / a_coef) * cmath.sqrt(k_p) / cmath.sqrt(k_m)
    r = b_coef / a_coef
    if shift != 0.0:
        t *= cmath.exp(1j * (k_p - k_m) * shift)
        r *= cmath.exp(-2j * k_m * shift)
    return ScatteringAmplitudes(t, r, k_m, k_p)


def numeric_amplitude(spec, k, c: PhysicalConstants = DEFAULT_CONSTANTS, **ode_kwargs) -> ScatteringAmplitudes:
    """Analytic-formula-independent t (and r) at incidence-side wavenumber k.

    Piecewise-constant and delta potentials use exact transfer matrices;
    smooth potentials integrate the stationary equation with tail-corrected
    outgoing boundary data (keyword args L, rtol, atol, tail_order tune it).
    """
    k = complex(k)
    if k == 0:
        raise DomainError("numeric amplitude requires k != 0")
    if isinstance(spec, _PIECEWISE):
        return _transfer_amplitude(spec, k, c)
    scattering_limits(spec, c)  # raises NotAScatteringPotential when invalid
    return _ode_amplitude(spec, k, c, **ode_kwargs)


# ---------------------------------------------------------------------------
# Pole search
# ---------------------------------------------------------------------------

def _inv_t(spec, k, c, amplitude, variable):
    if variable == "transmitted":
        # parametrize by the transmitted-side wavenumber instead
        v_minus, v_plus = scattering_limits(spec, c)
        e = v_plus + k * k / c.p2
        km2 = c.p2 * (e - v_minus)
        k_in = cmath.sqrt(km2)
        if k_in == 0:
            return complex("inf")
    else:
        k_in = k
    if k_in == 0:
        return complex("inf")
    try:
        amp = amplitude(spec, k_in, c)
    except AtPoleError:
        return 0j
    except (OverflowGuardError, DomainError, OverflowError):
        return complex("nan")
    t = amp.t
    if t == 0:
        return complex("inf")
    if cmath.isinf(abs(t)):
        return 0j
    return 1.0 / t


def _newton_polish(f, k0, tol=1e-12, max_iter=60):
    """Damped Newton on complex f; returns the best iterate seen.

    Multiple roots (the tanh amplitude has double poles) stall at the
    evaluation noise floor, so iterates that stop improving end the search
    rather than being allowed to run off."""
    k = complex(k0)
    best_k, best_f = k, abs(f(k))
    if best_f != best_f:
        return None
    stale = 0
    for _ in range(max_iter):
        fk = f(k)
        if fk != fk:
            break
        h = 1e-7 * max(1.0, abs(k))
        df = (f(k + h) - f(k - h)) / (2.0 * h)
        if df == 0 or df != df:
            break
        step = fk / df
        if abs(step) > 0.5 * (1.0 + abs(k)):
            step *= 0.5 * (1.0 + abs(k)) / abs(step)
        k = k - step
        fa = abs(f(k))
        if fa < best_f:
            best_k, best_f = k, fa
            stale = 0
        else:
            stale += 1
            if stale >= 3:
                break
        if abs(step) < tol * max(1.0, abs(k)):
            break
    return best_k


def _newton_polish_imag_axis(f, y0, tol=1e-13, max_iter=60):
    """Newton along k = i y.  The wavenumber square roots put their branch
    cuts exactly on the imaginary axis, so on-axis poles are polished with a
    one-real-parameter iteration that never crosses the cut."""
    y = float(y0)
    best_y, best_f = y, abs(f(1j * y))
    if best_f != best_f:
        return None
    stale = 0
    for _ in range(max_iter):
        fy = f(1j * y)
        if fy != fy:
            break
        h = 1e-7 * max(1.0, abs(y))
        df = (f(1j * (y + h)) - f(1j * (y - h))) / (2.0 * h)
        if df == 0 or df != df:
            break
        step = (fy / df).real
        if abs(step) > 0.5 * (1.0 + abs(y)):
            step = math.copysign(0.5 * (1.0 + abs(y)), step)
        y = y - step
        fa = abs(f(1j * y))
        if fa < best_f:
            best_y, best_f = y, fa
            stale = 0
        else:
            stale += 1
            if stale >= 3:
                break
        if abs(step) < tol * max(1.0, abs(y)):
            break
    return 1j * best_y


def _is_isolated_zero(f, k, tol):
    """Accept k as a simple zero of f only if f is not flat around it
    (guards against regions where 1/t merely underflows)."""
    probe = 1e-4 * (1.0 + abs(k))
    vals = [abs(f(k + probe)), abs(f(k + 1j * probe))]
    return max(vals) > 10.0 * max(abs(f(k)), tol * 1e-4)


def refine_pole(spec, guess, c: PhysicalConstants = DEFAULT_CONSTANTS,
                amplitude=None, variable="incident", residual_tol=1e-8):
    """Newton-polish a pole of t from ``guess``; returns (k, residual |1/t|).

    Raises DomainError when the iteration escapes the basin or converges to
    the trivial zero at k = 0.
    """
    if amplitude is None:
        amplitude = numeric_amplitude
    guess = complex(guess)
    f = lambda k: _inv_t(spec, k, c, amplitude, variable)

    def escaped(k):
        return k is None or abs(k - guess) > 0.5 * (1.0 + abs(guess))

    k = _newton_polish(f, guess)
    bad = escaped(k) or not abs(f(k)) < residual_tol or not _is_isolated_zero(f, k, residual_tol)
    if bad and abs(guess.real) < 1e-6 * max(1.0, abs(guess)):
        # poles on the imaginary axis sit on the channel-sqrt branch cuts
        k = _newton_polish_imag_axis(f, guess.imag)
    if escaped(k):
        raise DomainError(f"pole refinement escaped the basin of guess {guess}")
    res = abs(f(k))
    if not res < residual_tol:
        raise DomainError(
            f"refined point k={k} has |1/t|={res:.2e} > {residual_tol:.0e}"
        )
    if abs(k) < 1e-8:
        raise DomainError("refinement converged to the trivial zero k = 0")
    if not _is_isolated_zero(f, k, residual_tol):
        raise DomainError(f"1/t is numerically flat around k={k}; not a certified pole")
    return k, res


def _winding_count(f, region, samples_per_unit=40):
    """Winding number of f around the region boundary (zeros minus poles of f)."""
    corners = [
        complex(region.re_min, region.im_min),
        complex(region.re_max, region.im_min),
        complex(region.re_max, region.im_max),
        complex(region.re_min, region.im_max),
    ]
    pts = []
    for i in range(4):
        z0, z1 = corners[i], corners[(i + 1) % 4]
        n = max(8, int(abs(z1 - z0) * samples_per_unit))
        for j in range(n):
            pts.append(z0 + (z1 - z0) * j / n)
    vals = [f(z) for z in pts]
    total = 0.0
    for i in range(len(vals)):
        v0, v1 = vals[i], vals[(i + 1) % len(vals)]
        if v0 == 0 or v1 == 0 or v0 != v0 or v1 != v1:
            return None
        dphi = cmath.phase(v1 / v0)
        if abs(dphi) > 2.5:  # too coarse to trust
            return None
        total += dphi
    return round(total / (2.0 * math.pi))


def find_poles(spec, region: SearchRegion, c: PhysicalConstants = DEFAULT_CONSTANTS,
               amplitude=None, variable="incident", count_zeros=False,
               dedup_radius=None) -> PoleReport:
    """Grid-scan g(k) = 1/t over the region, refine local minima of |g|.

    ``amplitude`` defaults to the numeric engine; pass
    ``qnf1d.potentials.transmission_amplitude`` to hunt poles of the closed
    forms instead (useful for towers beyond the ODE engine's reach).
    ``variable`` chooses the k-plane: incidence side (default) or the
    transmitted side for asymmetric-asymptote potentials.
    """
    if amplitude is None:
        amplitude = numeric_amplitude
    a_scale = getattr(spec, "a", None) or getattr(spec, "L", None) or 1.0
    if dedup_radius is None:
        dedup_radius = 1e-6 / a_scale

    f = lambda k: _inv_t(spec, k, c, amplitude, variable)
    nre = max(4, int(round((region.re_max - region.re_min) * region.grid_density)))
    nim = max(4, int(round((region.im_max - region.im_min) * region.grid_density)))
    res = np.linspace(region.re_min, region.re_max, nre)
    ims = np.linspace(region.im_min, region.im_max, nim)
    mag = np.full((nim, nre), np.inf)
    for i, y in enumerate(ims):
        for j, x in enumerate(res):
            z = complex(x, y)
            if abs(z) < 1e-6:
                continue
            v = f(z)
            if v == v:  # not nan
                mag[i, j] = abs(v)

    warnings = []
    seeds = []
    for i in range(nim):
        for j in range(nre):
            m = mag[i, j]
            if not np.isfinite(m):
                continue
            neigh = mag[max(0, i - 1): i + 2, max(0, j - 1): j + 2]
            if m <= neigh.min() + 0.0 and m < 1e6:
                seeds.append(complex(res[j], ims[i]))

    poles = []
    cell0 = max((res[1] - res[0]) if nre > 1 else 0.0,
                (ims[1] - ims[0]) if nim > 1 else 0.0)
    for seed in seeds:
        k = _newton_polish(f, seed)
        if (k is None or not abs(f(k)) < 1e-8) and abs(seed.real) < 1.5 * cell0:
            # branch cuts of the channel wavenumbers lie on the imaginary
            # axis; retry with the on-axis iteration
            k = _newton_polish_imag_axis(f, seed.imag)
        if k is None:
            continue
        r = abs(f(k))
        if not r < 1e-8:
            continue
        if abs(k) < 1e-6:
            continue
        if not _is_isolated_zero(f, k, 1e-8):
            continue  # 1/t underflowed flat; not a certified pole
        if not (region.re_min - 1e-9 <= k.real <= region.re_max + 1e-9
                and region.im_min - 1e-9 <= k.imag <= region.im_max + 1e-9):
            continue
        merged = False
        for idx, (kp, rp, mult) in enumerate(poles):
            if abs(kp - k) < dedup_radius:
                poles[idx] = (kp if rp <= r else k, min(rp, r), mult + 1)
                merged = True
                break
        if merged:
            continue
        poles.append((k, r, 1))

    # coarseness heuristic: two refined poles closer than two grid cells apart
    cell = max((res[1] - res[0]) if nre > 1 else 0.0, (ims[1] - ims[0]) if nim > 1 else 0.0)
    ks = sorted((p[0] for p in poles), key=lambda z: (z.imag, z.real))
    for k1, k2 in zip(ks, ks[1:]):
        if abs(k1 - k2) < 2.0 * cell:
            warnings.append(
                f"poles {k1:.6g} and {k2:.6g} are closer than two grid cells; "
                "increase grid_density"
            )
    poles.sort(key=lambda p: (p[0].imag, p[0].real))
    count = _winding_count(f, region) if count_zeros else None
    return PoleReport(poles=poles, region=region, count_check=count, warnings=warnings)
