"""Vectorized orbit iteration shared by scalar classification and rendering.

Everything here operates on flat complex128 arrays with one entry per seed.
A single-seed classification calls the same ufunc code paths as a full image
render, so a classified point and the matching pixel of a rendered tile are
bit-identical by construction, regardless of how the work is banded.
"""

from __future__ import annotations

import numpy as np

from .maps import POLE_RADIUS

# outcome codes (match dynamics.Outcome order)
UNRESOLVED = 0
ESCAPED = 1
ATTRACTED = 2
FIXED_V_MINUS = 3

#: default radius of the attraction disk around v_+ before validation
DELTA_DEFAULT = 1e-3
DELTA_HALVINGS = 10

_STATIONARY_RTOL = 1e-14
_NEAR_V_MINUS_RTOL = 1e-6


def step(z, n, a, b):
    """One application of z -> z^n + a/z^n + b (array-safe)."""
    zn = z ** n
    return zn + a / zn + b


def validate_delta(n, a, b, v_plus, delta0: float = DELTA_DEFAULT):
    """Per-parameter attraction radius around the super-attracting v_+.

    Starting from delta0, verify that the image of 16 sampled points of the
    delta-circle around v_+ stays within delta/2 of v_+; halve delta (up to
    DELTA_HALVINGS times) until the check passes.  A valid delta exists
    because the local degree-2 contraction at v_+ is quadratic.
    """
    a = np.asarray(a, dtype=np.complex128)
    v_plus = np.asarray(v_plus, dtype=np.complex128)
    delta = np.full(a.shape, delta0, dtype=np.float64)
    thetas = np.exp(2j * np.pi * np.arange(16) / 16.0)
    pending = np.ones(a.shape, dtype=bool)
    for _ in range(DELTA_HALVINGS + 1):
        idx = np.nonzero(pending)[0]
        if idx.size == 0:
            break
        probe = v_plus[idx][:, None] + delta[idx][:, None] * thetas[None, :]
        img = step(probe, n, a[idx][:, None],
                   np.asarray(b, dtype=np.complex128)[idx][:, None])
        worst = np.max(np.abs(img - v_plus[idx][:, None]), axis=1)
        ok = worst < delta[idx] / 2.0
        pending[idx[ok]] = False
        delta[idx[~ok]] /= 2.0
    return delta


def orbit_batch(
    n: int,
    a: np.ndarray,
    b: np.ndarray,
    z0: np.ndarray,
    max_iter: int,
    inner: np.ndarray,
    outer: np.ndarray,
    v_plus=None,
    v_minus=None,
    delta=None,
):
    """Iterate every seed until escape / attraction / stationarity / budget.

    Escape means leaving the annulus inner < |z| < outer (both exits certify
    an unbounded orbit since the filled Julia set lies inside the annulus);
    hitting the pole at 0 or a non-finite value counts as escape with the
    pole flag.  Attraction to v_+ (subfamily only: pass v_plus and delta)
    fires the first time an iterate enters the validated delta-disk.
    A stationary iterate sitting at v_- is reported as FIXED_V_MINUS.

    Returns dict of arrays: outcome, iterations, entry_iter, final, shade.
    `shade` is a smoothed escape count for escaped seeds and the entry
    iteration for attracted seeds (-1 otherwise).
    """
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    z = np.ascontiguousarray(z0, dtype=np.complex128).copy()
    inner = np.ascontiguousarray(inner, dtype=np.float64)
    outer = np.ascontiguousarray(outer, dtype=np.float64)
    size = z.size
    check_attract = v_plus is not None
    if check_attract:
        v_plus = np.ascontiguousarray(v_plus, dtype=np.complex128)
        delta = np.ascontiguousarray(delta, dtype=np.float64)
    if v_minus is not None:
        v_minus = np.ascontiguousarray(v_minus, dtype=np.complex128)

    outcome = np.full(size, UNRESOLVED, dtype=np.int8)
    iterations = np.zeros(size, dtype=np.int32)
    entry_iter = np.full(size, -1, dtype=np.int32)
    final = z.copy()
    shade = np.full(size, -1.0, dtype=np.float64)
    pole = np.zeros(size, dtype=bool)

    active = np.arange(size)

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for it in range(max_iter + 1):
            za = z[active]
            mag = np.abs(za)
            bad = ~np.isfinite(mag) | (mag < POLE_RADIUS)
            out_far = mag > outer[active]
            out_near = (mag < inner[active]) & ~bad
            esc = bad | out_far | out_near
            if np.any(esc):
                # smoothed count for outward escapes; plain count otherwise
                sm = np.full(za.shape, float(it))
                far = out_far & np.isfinite(mag)
                if np.any(far):
                    s_loc = outer[active][far]
                    with np.errstate(all="ignore"):
                        nu = np.log2(np.log(mag[far]) / np.log(s_loc))
                    nu = np.where(np.isfinite(nu), nu, 0.0)
                    sm[far] = np.maximum(it - nu, 0.0)
                idx = active[esc]
                outcome[idx] = ESCAPED
                iterations[idx] = it
                final[idx] = z[idx]
                shade[idx] = sm[esc]
                pole[idx] = bad[esc]
            resolved = esc
            if check_attract:
                near = np.abs(za - v_plus[active]) < delta[active]
                near &= ~resolved
                if np.any(near):
                    idx = active[near]
                    outcome[idx] = ATTRACTED
                    iterations[idx] = it
                    entry_iter[idx] = it
                    final[idx] = z[idx]
                    shade[idx] = float(it)
                resolved = resolved | near
            if np.any(resolved):
                active = active[~resolved]
            if active.size == 0 or it == max_iter:
                break

            za = z[active]
            z_new = step(za, n, a[active], b[active])
            if v_minus is not None:
                vm = v_minus[active]
                stat = (np.abs(z_new - za) <= _STATIONARY_RTOL * (1.0 + np.abs(za))) & (
                    np.abs(za - vm) <= _NEAR_V_MINUS_RTOL * (1.0 + np.abs(vm))
                )
                if np.any(stat):
                    idx = active[stat]
                    outcome[idx] = FIXED_V_MINUS
                    iterations[idx] = it
                    final[idx] = z[idx]
                    z_new = z_new[~stat]
                    active = active[~stat]
                    if active.size == 0:
                        break
            z[active] = z_new

    # unresolved seeds keep their last iterate
    if active.size:
        iterations[active] = max_iter
        final[active] = z[active]

    return {
        "outcome": outcome,
        "iterations": iterations,
        "entry_iter": entry_iter,
        "final": final,
        "shade": shade,
        "pole": pole,
    }
