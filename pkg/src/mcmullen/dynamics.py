"""Orbit classification, Boettcher coordinates, the component map Phi_j,
and internal-ray computation for the fixed-critical-point subfamily."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import kernel
from .geometry import k_annulus
from .maps import (
    DomainError,
    FamilyTag,
    MapParams,
    eval_map,
    second_derivative_half,
)


class Outcome(Enum):
    UNRESOLVED = kernel.UNRESOLVED
    ESCAPED = kernel.ESCAPED
    ATTRACTED_TO_V_PLUS = kernel.ATTRACTED
    FIXED_V_MINUS = kernel.FIXED_V_MINUS


@dataclass(frozen=True)
class OrbitResult:
    outcome: Outcome
    iterations: int
    entry_iter: int  # first index inside the attraction disk; -1 if n/a
    final_value: complex
    pole: bool = False
    shade: float = -1.0  # smoothed escape count / entry iteration, for display

    @property
    def bounded(self) -> bool:
        return self.outcome is not Outcome.ESCAPED


class SliceKind(Enum):
    FIXED_CRIT = "fixed-crit"
    A_SLICE = "a-slice"  # point is a, b held fixed
    B_SLICE = "b-slice"  # point is b, a held fixed
    LINEAR = "linear"  # point is a, b = t * a


@dataclass(frozen=True)
class SliceSpec:
    """How a parameter-plane point maps to a member of the family."""

    kind: SliceKind
    n: int
    b: complex = 0j  # for A_SLICE
    a: complex = 0j  # for B_SLICE
    t: complex = 0j  # for LINEAR

    def params_at(self, point: complex):
        """MapParams for the plane point, or None when degenerate (a = 0)."""
        point = complex(point)
        if self.kind is SliceKind.FIXED_CRIT:
            if point == 0:
                return None
            return MapParams.subfamily(self.n, point)
        if self.kind is SliceKind.A_SLICE:
            if point == 0:
                return None
            return MapParams.general(self.n, point, self.b)
        if self.kind is SliceKind.B_SLICE:
            return MapParams.general(self.n, self.a, point)
        if point == 0:
            return None
        return MapParams.general(self.n, point, self.t * point)


@dataclass(frozen=True)
class ParamClassification:
    plus: OrbitResult
    minus: OrbitResult
    color: tuple  # RGB8


def _result_from_batch(batch, i: int) -> OrbitResult:
    return OrbitResult(
        outcome=Outcome(int(batch["outcome"][i])),
        iterations=int(batch["iterations"][i]),
        entry_iter=int(batch["entry_iter"][i]),
        final_value=complex(batch["final"][i]),
        pole=bool(batch["pole"][i]),
        shade=float(batch["shade"][i]),
    )


def iterate_orbit(p: MapParams, z0: complex, max_iter: int) -> OrbitResult:
    """Classify the orbit of a single seed.

    Runs the shared array kernel on a one-element batch, so the result is
    identical to the corresponding entry of any batched computation.
    """
    if max_iter < 1:
        raise DomainError("max_iter must be >= 1")
    ann = k_annulus(p)
    one = lambda v: np.array([v], dtype=np.complex128)  # noqa: E731
    subfam = p.family_tag is FamilyTag.FIXED_CRIT
    a = one(p.a)
    b = one(p.b)
    vp = one(p.v_plus) if subfam else None
    delta = kernel.validate_delta(p.n, a, b, vp) if subfam else None
    batch = kernel.orbit_batch(
        p.n,
        a,
        b,
        one(z0),
        max_iter,
        np.array([ann.inner]),
        np.array([ann.outer]),
        v_plus=vp,
        v_minus=one(p.v_minus) if subfam else None,
        delta=delta,
    )
    return _result_from_batch(batch, 0)


def classify_parameter(
    slice_spec: SliceSpec, point: complex, max_iter: int, palette=None
) -> ParamClassification:
    """Joint classification of both critical orbits at one parameter.

    For the fixed-critical-point slice the plus orbit is a fixed point by
    construction and is short-circuited; only v_- is iterated.
    """
    from .render import Palette, degenerate_color

    palette = palette or Palette()
    p = slice_spec.params_at(point)
    if p is None:
        dead = OrbitResult(Outcome.UNRESOLVED, 0, -1, complex("nan"))
        return ParamClassification(dead, dead, degenerate_color(palette))
    if p.family_tag is FamilyTag.FIXED_CRIT:
        plus = OrbitResult(
            Outcome.ATTRACTED_TO_V_PLUS, 0, 0, p.v_plus, shade=0.0
        )
    else:
        plus = iterate_orbit(p, p.v_plus, max_iter)
    minus = iterate_orbit(p, p.v_minus, max_iter)
    color = palette.classification_color(plus, minus, max_iter)
    return ParamClassification(plus=plus, minus=minus, color=color)


# ---------------------------------------------------------------------------
# Boettcher coordinate at the super-attracting fixed point v_+


class NotInBasinError(DomainError):
    """The seed's orbit does not converge to v_+ within the budget."""


class RayBranchError(RuntimeError):
    """Two preimage candidates were equidistant (within 1%) from the
    first-order prediction; carries both candidates."""

    def __init__(self, message, candidates):
        super().__init__(message)
        self.candidates = candidates


@dataclass(frozen=True)
class BoettcherValue:
    value: complex  # phi_a(z)
    modulus: float
    depth: int  # iterations used to reach the eps0-disk
    argument_reliable: bool


_BOETTCHER_MAX_DEPTH = 64


def boettcher_value(p: MapParams, z: complex, eps0: float = 1e-8) -> BoettcherValue:
    """Value of the conjugacy phi with phi(r(z)) = phi(z)^2, phi(v_+) = 0.

    Iterates z to within eps0 of v_+, seeds with the linearization
    u_m = c2 (r^m(z) - v_+) where c2 = n^2 v_+^(n-2), and recovers phi(z) by
    m successive square roots, at each level choosing the root closer to the
    first-order estimate c2 (r^j(z) - v_+).  The modulus |u_m|^(2^-m) needs
    no branch choice and is reported separately.
    """
    if p.family_tag is not FamilyTag.FIXED_CRIT:
        raise DomainError("Boettcher coordinates assume the subfamily")
    vp = p.v_plus
    c2 = second_derivative_half(p)
    if z == vp:
        return BoettcherValue(0j, 0.0, 0, True)

    trail = [complex(z)]
    w = complex(z)
    for _ in range(_BOETTCHER_MAX_DEPTH):
        if abs(w - vp) < eps0:
            break
        w = eval_map(p, w)
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise NotInBasinError("orbit left the basin (non-finite iterate)")
        trail.append(w)
    else:
        raise NotInBasinError(
            f"orbit did not enter the {eps0:g}-disk around v_+ within "
            f"{_BOETTCHER_MAX_DEPTH} iterations"
        )

    m = len(trail) - 1
    u = c2 * (trail[m] - vp)
    modulus = abs(u) ** (2.0 ** -m) if u != 0 else 0.0
    reliable = True
    for j in range(m - 1, -1, -1):
        root = cmath.sqrt(u)
        estimate = c2 * (trail[j] - vp)
        d_pos = abs(root - estimate)
        d_neg = abs(-root - estimate)
        if d_neg < d_pos:
            root = -root
            d_pos, d_neg = d_neg, d_pos
        if d_neg > 0 and d_pos / d_neg > 0.9:
            reliable = False
        u = root
    return BoettcherValue(
        value=complex(u), modulus=float(modulus), depth=m, argument_reliable=reliable
    )


class OutsideComponentError(DomainError):
    """v_- is not attracted to v_+, so Phi_j is undefined at this a."""


def phi_j(n: int, j: int, a: complex, max_iter: int = 2000) -> complex:
    """Component map Phi_j(a) = phi_a(r(v_-(a))) on the disk component H_2j.

    Zero exactly at the dynamical center a_2j (where r(v_-) = v_+); modulus
    below 1 whenever v_- is attracted.
    """
    if not 1 <= j <= n - 1:
        raise DomainError(f"j must be in [1, n-1], got {j}")
    p = MapParams.subfamily(n, a)
    orbit = iterate_orbit(p, p.v_minus, max_iter)
    if orbit.outcome is not Outcome.ATTRACTED_TO_V_PLUS:
        raise OutsideComponentError(
            f"v_- orbit is {orbit.outcome.name}, not attracted to v_+"
        )
    return boettcher_value(p, eval_map(p, p.v_minus)).value


# ---------------------------------------------------------------------------
# Internal rays in D_+ (the basin of v_+)


def _preimages(p: MapParams, w: complex) -> list:
    """All 2n solutions of r(z) = w: roots of y^2 - (w-b) y + a = 0 in y = z^n."""
    c = w - p.b
    disc = cmath.sqrt(c * c - 4.0 * p.a)
    out = []
    for y in ((c + disc) / 2.0, (c - disc) / 2.0):
        if y == 0:
            continue
        base = abs(y) ** (1.0 / p.n)
        arg = cmath.phase(y) / p.n
        for k in range(p.n):
            out.append(base * cmath.exp(1j * (arg + 2.0 * math.pi * k / p.n)))
    return out


def internal_ray_point(p: MapParams, t: float, rho: float, m: int) -> complex:
    """Point Gamma_rho(t) with Boettcher value rho * e^{2 pi i t}.

    Starts from the linearized inverse near v_+ at Boettcher radius
    rho^(2^m) and pulls back m times through r, choosing at each level the
    preimage closest to the first-order prediction v_+ + u_j / c2 where
    u_j = (rho e^{2 pi i t})^(2^j).  Raises RayBranchError when two
    candidates are equidistant within 1%.
    """
    if p.family_tag is not FamilyTag.FIXED_CRIT:
        raise DomainError("internal rays assume the subfamily")
    if not 0.0 <= t < 1.0:
        raise DomainError("t must be in [0, 1)")
    if not 0.0 < rho < 1.0:
        raise DomainError("rho must be in (0, 1)")
    if m < 1:
        raise DomainError("m must be >= 1")
    if rho ** (2.0 ** m) < 1e-12:
        # preimages of a point u-close to v_+ separate only like sqrt(u);
        # below this floor the quadratic discriminant is cancellation noise
        raise DomainError(
            f"rho^(2^{m}) = {rho ** (2.0 ** m):.3g} is below the double "
            "precision floor 1e-12; reduce m"
        )

    vp = p.v_plus
    c2 = second_derivative_half(p)

    def u_level(j: int) -> complex:
        # (rho e^{2 pi i t})^(2^j) with the angle reduced mod 1 turn
        r = rho ** (2.0 ** j)
        ang = (t * 2.0 ** j) % 1.0
        return r * cmath.exp(2j * math.pi * ang)

    z = vp + u_level(m) / c2
    for j in range(m - 1, -1, -1):
        prediction = vp + u_level(j) / c2
        cands = _preimages(p, z)
        dists = sorted(((abs(c - prediction), c) for c in cands),
                       key=lambda t: t[0])
        (d0, best), (d1, second) = dists[0], dists[1]
        if d1 > 0 and (d1 - d0) < 0.01 * d1:
            raise RayBranchError(
                f"ambiguous preimage branch at level {j}", (best, second)
            )
        z = best
    return z
