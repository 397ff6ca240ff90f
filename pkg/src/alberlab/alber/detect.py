"""Deciding whether ``h_tilde_L(xi, omega) = 1`` has solutions with ``Re(omega) > 0``.

The primary method counts zeros of ``h - 1`` inside a D-shaped region (the
right half disk of radius ``1/eps`` minus the strip ``Re < eps``) through the
winding number of the image of its boundary around 1. A grid scan of
``|h - 1|`` provides advisory candidates, and both refine witnesses with a
damped complex Newton iteration.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Optional

import numpy as np
from scipy import ndimage

from .kernel import (KernelParams, active_modes, h_tilde_L, h_tilde_L_derivative,
                     pole_frequencies)
from .verdict import StabilityVerdict, Witness

MACHINE_EPS = np.finfo(float).eps


class IndeterminateVerdict(RuntimeError):
    """The contour image could not be resolved well enough to count windings."""


@dataclass(frozen=True)
class ContourSpec:
    epsilon: float = 1e-4
    n_line: int = 256
    n_arc: int = 128
    max_refine: int = 14
    max_shrink: int = 6

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must lie in (0, 1)")
        if self.n_line < 16 or self.n_arc < 16:
            raise ValueError("n_line and n_arc must be at least 16")


def default_xi_range(kp: KernelParams, factor: float = 2.0) -> list[int]:
    """Symmetric wavenumber range ``0 < |xi| <= xi_max``.

    ``xi_max`` is ``factor`` times the instability band edge of a delta spectrum
    with the same variance, ``|X| < sqrt(q V / p) / pi``, expressed in integers.
    """
    D = kp.discrete
    V = D.variance
    if V <= 0 or kp.q == 0:
        return []
    xi_max = int(math.ceil(factor * D.L * math.sqrt(kp.q * V / kp.p) / math.pi)) + 1
    return [x for x in range(-xi_max, xi_max + 1) if x != 0]


def _poles(xi, kp):
    """Imaginary parts of the kernel poles ``omega = -i 2 pi^2 p xi (2k - xi) / L^2``."""
    k, _ = active_modes(kp.discrete, xi)
    return -pole_frequencies(xi, k, kp.p, kp.discrete.L)


class _Contour:
    """Closed CCW D-contour: the arc (bottom to top), then the line ``Re = eps`` downwards.

    Samples are kept per piece as ``(piece, param)`` with the angle as the arc
    parameter and ``Im(omega)`` as the line parameter, so bisection keeps full
    precision near the poles. Line samples cluster geometrically around every
    pole of the kernel, where the image curve varies on the scale ``eps``.
    """

    def __init__(self, eps, poles, spec: ContourSpec):
        self.eps = eps
        self.R = 1.0 / eps
        self.Y = math.sqrt(self.R**2 - eps**2)
        self.theta0 = math.acos(eps**2)
        Y = self.Y
        poles = np.unique(poles)
        gap = np.min(np.diff(poles)) if poles.size > 1 else 1.0
        reach = max(gap, 4.0 * eps)
        n_geo = max(4, int(math.ceil(4 * math.log2(max(reach / (2 * eps), 2.0)))))
        offs = eps * np.concatenate([np.linspace(0.0, 2.0, 9),
                                     np.geomspace(2.0, max(reach / eps, 2.0), n_geo)])
        offs = np.concatenate([-offs[::-1], offs])
        local = (poles[:, None] + offs[None, :]).ravel()
        lo, hi = poles.min() - reach, poles.max() + reach
        base = np.linspace(lo, hi, spec.n_line)
        n_out = spec.n_line // 2
        grow = np.expm1(np.linspace(0, 12, n_out)) / np.expm1(12)
        upper = hi + (Y - hi) * grow if hi < Y else []
        lower = lo - (lo + Y) * grow if lo > -Y else []
        s = np.unique(np.concatenate([local, base, upper, lower, [-Y, Y]]))
        s = s[(s >= -Y) & (s <= Y)][::-1]
        theta = np.linspace(-self.theta0, self.theta0, spec.n_arc)
        self.piece = np.concatenate([np.zeros(theta.size, int), np.ones(s.size, int)])
        self.param = np.concatenate([theta, s])

    def omega(self, piece, param):
        return np.where(piece == 0, self.R * np.exp(1j * param), self.eps + 1j * param)

    def bisect(self, idx):
        """Insert midpoints after positions ``idx`` (never across the two pieces)."""
        nxt = idx + 1
        same = self.piece[idx] == self.piece[nxt]
        idx, nxt = idx[same], nxt[same]
        mid = 0.5 * (self.param[idx] + self.param[nxt])
        pieces = self.piece[idx]
        self.param = np.insert(self.param, nxt, mid)
        self.piece = np.insert(self.piece, nxt, pieces)
        return nxt + np.arange(nxt.size), self.omega(pieces, mid)


def _phase_steps(g):
    closed = np.append(g, g[0])
    return np.angle(closed[1:] / closed[:-1])


def winding_number(xi: int, kp: KernelParams, spec: ContourSpec, eps: Optional[float] = None):
    """Winding number of ``h(xi, contour) - 1`` around 0 with adaptive resolution.

    Returns ``(winding, info)`` where ``info`` holds the contour samples, the
    minimum of ``|h - 1|`` on the contour and the maximum of ``|h|`` on the arc.
    Raises :class:`IndeterminateVerdict` when some phase step stays above
    ``pi/2`` after ``spec.max_refine`` bisection rounds.
    """
    eps = spec.epsilon if eps is None else eps
    c = _Contour(eps, _poles(xi, kp), spec)
    g = h_tilde_L(xi, c.omega(c.piece, c.param), kp) - 1.0
    for _ in range(spec.max_refine):
        steps = _phase_steps(g)
        bad = np.flatnonzero(np.abs(steps[:-1]) > math.pi / 4)
        if bad.size == 0:
            break
        pos, w_new = c.bisect(bad)
        if pos.size == 0:
            break
        g_new = h_tilde_L(xi, w_new, kp) - 1.0
        # positions returned by bisect are final indices in the enlarged arrays
        g_full = np.empty(c.param.size, dtype=complex)
        mask = np.zeros(c.param.size, bool)
        mask[pos] = True
        g_full[mask] = g_new
        g_full[~mask] = g
        g = g_full
    steps = _phase_steps(g)
    if np.max(np.abs(steps)) > math.pi / 2:
        raise IndeterminateVerdict(f"xi={xi}: phase steps unresolved after refinement")
    total = steps.sum() / (2.0 * math.pi)
    n = int(round(total))
    if abs(total - n) > 1e-6:
        raise IndeterminateVerdict(f"xi={xi}: non-integer winding {total}")
    arc = c.piece == 0
    info = {
        "epsilon": eps, "n_samples": int(g.size),
        "min_distance_to_one": float(np.min(np.abs(g))),
        "max_abs_h_on_arc": float(np.max(np.abs(g[arc] + 1.0))),
        "h": g + 1.0, "omega": c.omega(c.piece, c.param),
    }
    return n, info


def refine_root(xi: int, omega0: complex, kp: KernelParams, tol: float = 1e-10,
                max_iter: int = 100) -> tuple[complex, float, bool]:
    """Damped Newton for ``h(xi, omega) = 1`` keeping ``Re(omega) > 0``.

    The complex step is the Newton step of the equivalent 2x2 real system
    (Re, Im of ``h - 1``) since ``h`` is analytic in ``omega``.
    """
    w = complex(omega0)
    g = complex(h_tilde_L(xi, w, kp)) - 1.0
    for _ in range(max_iter):
        if abs(g) < tol:
            return w, abs(g), True
        dg = complex(h_tilde_L_derivative(xi, w, kp))
        if dg == 0:
            break
        step = -g / dg
        lam = 1.0
        while lam > 1e-8:
            trial = w + lam * step
            if trial.real > 0:
                g_trial = complex(h_tilde_L(xi, trial, kp)) - 1.0
                if abs(g_trial) < abs(g):
                    w, g = trial, g_trial
                    break
            lam *= 0.5
        else:
            break
    return w, abs(g), abs(g) < tol


def _search_box(xi, kp, eps, n_re=14, n_im=400):
    # any root obeys Re(w) <= 2 q V and lies within 2 q V of a pole frequency
    V = kp.discrete.variance
    bound = 2.0 * kp.q * V
    poles = _poles(xi, kp)
    s_lo, s_hi = poles.min(), poles.max()
    re = np.geomspace(eps, max(bound, 2 * eps), n_re)
    im = np.linspace(s_lo - bound, s_hi + bound, n_im)
    return re, im


def _grid_minima(xi, kp, re, im, threshold=np.inf):
    W = re[:, None] + 1j * im[None, :]
    dist = np.abs(h_tilde_L(xi, W, kp) - 1.0)
    is_min = ndimage.minimum_filter(dist, size=3, mode="nearest") == dist
    idx = np.argwhere(is_min & (dist < threshold))
    vals = dist[is_min & (dist < threshold)]
    order = np.argsort(vals)
    return [(complex(W[tuple(idx[i])]), float(vals[i])) for i in order]


def _dedupe(roots, scale):
    out = []
    for w, r in roots:
        if all(abs(w - v) > 1e-7 * scale for v, _ in out):
            out.append((w, r))
    return out


def locate_roots(xi: int, kp: KernelParams, count: int, eps: float, R: float,
                 refine_tol: float) -> list[tuple[complex, float]]:
    """Find up to ``count`` roots of ``h = 1`` inside the D region, from grid minima."""
    re, im = _search_box(xi, kp, eps)
    found = []
    for w0, _ in _grid_minima(xi, kp, re, im)[: 4 * count + 8]:
        w, res, ok = refine_root(xi, w0, kp, tol=refine_tol)
        if ok and w.real > eps and abs(w) < R:
            found = _dedupe(found + [(w, res)], max(abs(w), 1.0))
            if len(found) >= count:
                break
    return found


def detect_instability_contour(kp: KernelParams, L: Optional[float] = None,
                               xi_range: Optional[Iterable[int]] = None,
                               c: ContourSpec = ContourSpec(), refine_tol: float = 1e-10,
                               marginal_tol: float = 1e-6) -> StabilityVerdict:
    """Argument-principle stability verdict over ``xi_range``.

    For each ``xi`` the winding of ``h(xi, contour)`` around 1 counts solutions
    of ``h = 1`` inside the D region; any positive count means unstable.
    Witnesses are refined roots. ``epsilon`` is halved (up to
    ``c.max_shrink`` times) when ``|h|`` on the arc is not below 0.5.
    """
    D = kp.discrete
    if L is not None and not math.isclose(L, D.L, rel_tol=1e-12):
        raise ValueError("L does not match the discretization")
    xis = default_xi_range(kp) if xi_range is None else [int(x) for x in xi_range]
    windings, witnesses, diag = {}, [], {"per_xi": {}}
    indeterminate, marginal = [], []
    min_dist = np.inf
    for xi in xis:
        if xi == 0 or kp.q == 0 or active_modes(D, xi)[0].size == 0:
            windings[xi] = 0
            continue
        eps = c.epsilon
        try:
            for _ in range(c.max_shrink + 1):
                n, info = winding_number(xi, kp, c, eps)
                if info["max_abs_h_on_arc"] < 0.5:
                    break
                eps *= 0.5
            else:
                raise IndeterminateVerdict(f"xi={xi}: |h| >= 0.5 on the arc after shrinking")
        except IndeterminateVerdict as exc:
            indeterminate.append(xi)
            diag["per_xi"][xi] = {"error": str(exc)}
            continue
        windings[xi] = n
        dist = info["min_distance_to_one"]
        min_dist = min(min_dist, dist)
        diag["per_xi"][xi] = {"epsilon": eps, "n_samples": info["n_samples"],
                              "min_distance_to_one": dist}
        if dist < 10 * MACHINE_EPS:
            indeterminate.append(xi)
            continue
        if dist < marginal_tol:
            marginal.append(xi)
        if n >= 1:
            roots = locate_roots(xi, kp, n, eps, 1.0 / eps, refine_tol)
            witnesses.extend(Witness(xi, w, r) for w, r in roots)
            if len(roots) < n:
                diag["per_xi"][xi]["unrefined_roots"] = n - len(roots)

    unstable = any(v >= 1 for v in windings.values())
    if unstable:
        status = "unstable"
    elif indeterminate:
        status = "indeterminate"
    elif marginal:
        status = "marginal"
    else:
        status = "stable"
    diag.update({"indeterminate_xi": indeterminate, "marginal_xi": marginal,
                 "min_distance_to_one": float(min_dist) if np.isfinite(min_dist) else None})
    return StabilityVerdict(
        unstable=unstable, method="argument_principle", status=status,
        witnesses=witnesses, winding_numbers=windings,
        parameters=_params(kp, xis), diagnostics=diag,
        tolerances={"refine_tol": refine_tol, "marginal_tol": marginal_tol,
                    "contour": asdict(c)},
    )


def detect_instability_gridscan(kp: KernelParams, L: Optional[float] = None,
                                xi_range: Optional[Iterable[int]] = None,
                                omega_grid: Optional[tuple] = None, threshold: float = 0.1,
                                refine_tol: float = 1e-10) -> StabilityVerdict:
    """Advisory scan of ``|h - 1|`` on a rectangle of the right half plane.

    ``omega_grid`` is ``(re_values, im_values)``; by default a box that must
    contain every root is used. Grid local minima below ``threshold`` are
    refined by Newton and kept when they converge with ``Re(omega) > 0``.
    """
    D = kp.discrete
    if L is not None and not math.isclose(L, D.L, rel_tol=1e-12):
        raise ValueError("L does not match the discretization")
    xis = default_xi_range(kp) if xi_range is None else [int(x) for x in xi_range]
    witnesses, n_candidates = [], 0
    for xi in xis:
        if xi == 0 or kp.q == 0 or active_modes(D, xi)[0].size == 0:
            continue
        if omega_grid is None:
            re, im = _search_box(xi, kp, 1e-3, n_re=40, n_im=600)
        else:
            re, im = (np.asarray(a, dtype=float) for a in omega_grid)
        if np.any(re <= 0):
            raise ValueError("grid must lie in the open right half plane")
        cands = _grid_minima(xi, kp, re, im, threshold)
        n_candidates += len(cands)
        roots = []
        for w0, _ in cands:
            w, res, ok = refine_root(xi, w0, kp, tol=refine_tol)
            if ok:
                roots = _dedupe(roots + [(w, res)], max(abs(w), 1.0))
        witnesses.extend(Witness(xi, w, r) for w, r in roots)
    unstable = bool(witnesses)
    return StabilityVerdict(
        unstable=unstable, method="grid_scan", status="unstable" if unstable else "stable",
        witnesses=witnesses, parameters=_params(kp, xis),
        tolerances={"threshold": threshold, "refine_tol": refine_tol},
        diagnostics={"n_candidates": n_candidates},
    )


def _params(kp, xis):
    D = kp.discrete
    return {"p": kp.p, "q": kp.q, "L": D.L, "m": D.spacing_multiplier, "M": D.mode_count,
            "variance": D.variance, "xi_min": min(xis) if xis else None,
            "xi_max": max(xis) if xis else None, "n_xi": len(xis)}


def image_curve(xi: int, kp: KernelParams, spec: ContourSpec = ContourSpec()) -> np.ndarray:
    """Contour samples as rows ``(Re omega, Im omega, Re h, Im h)`` for Nyquist-style plots."""
    _, info = winding_number(xi, kp, spec)
    w, h = info["omega"], info["h"]
    return np.column_stack([w.real, w.imag, h.real, h.imag])
