"""Loci and regions in parameter and dynamical space for the subfamily.

Centers a_k, the spine (parameters with |v_-| = 1), annulus bounds for the
filled Julia set, the regime thresholds q_n / rho_n, the image ellipse of the
polar rectangles U'_k, and the implicit boundary curves of the W_k regions.

Several curves here are defined implicitly (the unknown a appears on both
sides through a^(1/2n)); they are solved by plain fixed-point iteration,
which contracts strongly because a enters only through its 2n-th root.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .maps import (
    DomainError,
    FamilyTag,
    MapParams,
    principal_power,
    principal_root,
    subfamily_v_minus,
)

FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 200


class ConvergenceError(RuntimeError):
    """Fixed-point iteration did not converge; carries the last iterate."""

    def __init__(self, message: str, last_iterate: complex):
        super().__init__(message)
        self.last_iterate = last_iterate


class BranchError(ConvergenceError):
    """The iteration converged, but to a point on the wrong branch of the
    implicit curve (the squared equation admits solutions whose principal
    square root has the opposite sign; they do not satisfy the defining
    property).  Happens for spine angles near the cusp at theta = pi."""


@dataclass(frozen=True)
class AnnulusBounds:
    """Annulus A(t, s) + center known to contain a set of interest."""

    inner: float
    outer: float
    center: complex = 0j

    def __post_init__(self):
        if not self.inner < self.outer:
            raise DomainError(f"need inner < outer, got {self.inner} >= {self.outer}")

    def contains(self, z) -> bool:
        d = abs(z - self.center)
        return bool(self.inner < d < self.outer)


@dataclass(frozen=True)
class RegimeThresholds:
    """Roots of h_n(x) = sqrt(4x + x^(1/n)): q_n where h_n = 4, rho_n where h_n(x) = x."""

    n: int
    q_n: float
    rho_n: float


@dataclass(frozen=True)
class EllipseSpec:
    """Image ellipse of the polar rectangles: center b, rotated by psi/2.

    The semi-axes are 2^n +- |a|/2^n, which is the focally consistent choice:
    sqrt(semi_major^2 - semi_minor^2) = 2 sqrt|a|, matching foci at v_+-.
    """

    center: complex
    rotation: float
    semi_major: float
    semi_minor: float
    foci: tuple

    def contains(self, z) -> bool:
        f1, f2 = self.foci
        return bool(abs(z - f1) + abs(z - f2) < 2.0 * self.semi_major)


@dataclass(frozen=True)
class PolarRegion:
    """Polar rectangle U'_k around the critical point w_k."""

    k: int
    modulus_lo: float
    modulus_hi: float
    arg_center: float
    arg_half_width: float

    def contains(self, z) -> bool:
        m = abs(z)
        if not (self.modulus_lo < m < self.modulus_hi):
            return False
        d = (np.angle(z) - self.arg_center) % (2.0 * np.pi)
        if d > np.pi:
            d -= 2.0 * np.pi
        return bool(abs(d) < self.arg_half_width)


class WCurve(Enum):
    BETA = "beta"  # |v_-| = |a|^(1/n)/2
    TAU = "tau"  # |v_-| = 2
    RHO_PLUS = "rho_plus"  # Arg(v_-) = Arg(w_k) + pi/2n
    RHO_MINUS = "rho_minus"  # Arg(v_-) = Arg(w_k) - pi/2n


@dataclass(frozen=True)
class WBoundarySpec:
    """One of the four implicit curves bounding the region W_k."""

    k: int
    curve: WCurve

    def param_domain(self) -> tuple:
        if self.curve in (WCurve.BETA, WCurve.TAU):
            return (0.0, 2.0 * math.pi)
        return (0.0, 2.0)  # radial curves: x in (0, 2]


def center_a_k(n: int, k: int) -> complex:
    """Parameter a_k = ((1 - e^{ik pi/n})/4)^(2n/(n-1)), principal power.

    At a_k (with the subfamily b) the free critical value v_- equals the
    non-principal critical point w_k; the map then fixes v_- for k odd and
    sends v_- to v_+ for k even.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    if not 1 <= k <= 2 * n - 1:
        raise DomainError(f"k must be in [1, 2n-1]; k={k} is degenerate (a=0)")
    base = (1.0 - np.exp(1j * k * np.pi / n)) / 4.0
    return complex(principal_power(base, 2.0 * n / (n - 1.0)))


def centers(n: int):
    """All 2n-1 centers a_k, k = 1 .. 2n-1."""
    return [center_a_k(n, k) for k in range(1, 2 * n)]


def _root2n(a, n: int):
    # principal 2n-th root, tolerating a = 0 mid-iteration
    if a == 0:
        return 0j
    return principal_root(a, 2 * n)


def _fixed_point(update, seed: complex, what: str) -> complex:
    a = complex(seed)
    for _ in range(FIXED_POINT_MAX_ITER):
        a_next = complex(update(a))
        if abs(a_next - a) <= FIXED_POINT_TOL * (1.0 + abs(a_next)):
            return a_next
        a = a_next
    raise ConvergenceError(
        f"{what}: no convergence in {FIXED_POINT_MAX_ITER} iterations", a
    )


def spine_point(n, theta: float) -> complex:
    """Point of the spine (|v_-(a)| = 1) at angle parameter theta.

    n = None or math.inf gives the limiting cardioid (1/16)(1 + e^{i theta})^2,
    which has a cusp at 0 (theta = pi) and real max 1/4 (theta = 0).  For
    finite n the defining equation is implicit in a and is solved by
    fixed-point iteration seeded at the cardioid value.

    For theta in a window around pi the implicit equation has no solution on
    the principal square-root branch (the curve's cusp); the iteration then
    converges to a spurious squared-equation solution and BranchError is
    raised.
    """
    e = np.exp(1j * theta)
    cardioid = complex((1.0 + e) ** 2 / 16.0)
    if n is None or n == math.inf:
        return cardioid

    def update(a):
        return (_root2n(a, n) + e) ** 2 / 16.0

    a = _fixed_point(update, cardioid, f"spine_point(n={n}, theta={theta})")
    if a == 0:
        raise BranchError("spine iteration collapsed to a = 0", a)
    resid = abs(abs(subfamily_v_minus(n, a)) - 1.0)
    if resid > 1e-9:
        raise BranchError(
            f"spine point at theta={theta} lies on the wrong sqrt branch "
            f"(| |v_-| - 1 | = {resid:.3e})",
            a,
        )
    return a


def spine_polyline(n, samples: int):
    """Sampled spine points over theta in [0, 2pi]; branch-invalid angles are
    skipped for finite n (the cusp window around theta = pi)."""
    pts = []
    for i in range(samples):
        theta = 2.0 * math.pi * i / samples
        try:
            a = spine_point(n, theta)
        except ConvergenceError:
            continue
        pts.append((theta, a))
    return pts


def k_annulus(p: MapParams) -> AnnulusBounds:
    """Annulus A(t, s) containing the filled Julia set of p.

    General bound: s = max{4, |b|, |a|}, t = |a|^(1/n)/s.  For the subfamily
    with |a| < 1 the tighter bound t = |a|^(1/n)/2, s = 2 applies.
    """
    if p.family_tag is FamilyTag.FIXED_CRIT and abs(p.a) < 1.0:
        return AnnulusBounds(inner=abs(p.a) ** (1.0 / p.n) / 2.0, outer=2.0)
    s = max(4.0, abs(p.b), abs(p.a))
    return AnnulusBounds(inner=abs(p.a) ** (1.0 / p.n) / s, outer=s)


def _h(x: float, n: int) -> float:
    return math.sqrt(4.0 * x + x ** (1.0 / n))


def _bisect(f, lo: float, hi: float, tol: float = 1e-10) -> float:
    flo = f(lo)
    if flo * f(hi) > 0:
        raise DomainError(f"root not bracketed in [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if flo * f(mid) <= 0:
            hi = mid
        else:
            lo = mid
            flo = f(lo)
    return 0.5 * (lo + hi)


def regime_thresholds(n: int) -> RegimeThresholds:
    """q_n solving h_n(q) = 4 and rho_n solving h_n(rho) = rho, by bisection.

    h_n(x) = sqrt(4x + x^(1/n)); q_n is bracketed in (3.6, 4) and rho_n in
    (4, 4.4) for all n >= 3.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    q = _bisect(lambda x: _h(x, n) - 4.0, 3.5, 4.0)
    rho = _bisect(lambda x: _h(x, n) - x, 4.0, 4.5)
    return RegimeThresholds(n=n, q_n=q, rho_n=rho)


def ellipse_spec(p: MapParams) -> EllipseSpec:
    """Ellipse with foci v_+-, center b, semi-axes 2^n +- |a|/2^n."""
    two_n = 2.0 ** p.n
    return EllipseSpec(
        center=p.b,
        rotation=float(np.angle(p.a)) / 2.0,
        semi_major=two_n + abs(p.a) / two_n,
        semi_minor=two_n - abs(p.a) / two_n,
        foci=(p.v_plus, p.v_minus),
    )


def ellipse_contains(p: MapParams, z) -> bool:
    return ellipse_spec(p).contains(z)


def u_prime_region(n: int, a: complex, k: int) -> PolarRegion:
    if a == 0:
        raise DomainError("a = 0 is excluded")
    if not 0 <= k < 2 * n:
        raise DomainError(f"k must be in [0, 2n), got {k}")
    psi = float(np.angle(a))
    return PolarRegion(
        k=k,
        modulus_lo=abs(a) ** (1.0 / n) / 2.0,
        modulus_hi=2.0,
        arg_center=(psi + 2.0 * np.pi * k) / (2 * n),
        arg_half_width=np.pi / (2 * n),
    )


def u_prime_contains(n: int, a: complex, k: int, z) -> bool:
    return u_prime_region(n, a, k).contains(z)


def w_boundary_point(spec: WBoundarySpec, n: int, param: float) -> complex:
    """Solve the implicit equation of one W_k boundary curve at `param`.

    beta / tau take an angle theta in [0, 2pi]; rho_+- take a modulus
    x in (0, 2].  The returned a satisfies the curve's defining property of
    v_-(a) (see WCurve) within 1e-8, otherwise BranchError is raised.
    """
    lo, hi = spec.param_domain()
    if spec.curve in (WCurve.RHO_PLUS, WCurve.RHO_MINUS) and param <= 0:
        raise DomainError("radial curves need param > 0")
    if not lo <= param <= hi:
        raise DomainError(f"param {param} outside domain [{lo}, {hi}]")

    sign = 1.0 if spec.curve is WCurve.RHO_PLUS else -1.0

    def boundary_z(a):
        # point of the U'_k boundary that v_- must hit
        if spec.curve is WCurve.BETA:
            r = abs(a) ** (1.0 / n) / 2.0 if a != 0 else 0.0
            return r * np.exp(1j * param)
        if spec.curve is WCurve.TAU:
            return 2.0 * np.exp(1j * param)
        psi = float(np.angle(a)) if a != 0 else 0.0
        arg_wk = (psi + 2.0 * np.pi * spec.k) / (2 * n)
        return param * np.exp(1j * (arg_wk + sign * np.pi / (2 * n)))

    def update(a):
        return (boundary_z(a) - _root2n(a, n)) ** 2 / 16.0

    # seed: the n -> infinity analogue, where a^(1/2n) -> 1
    if spec.curve is WCurve.BETA:
        z_inf = 0.5 * np.exp(1j * param)
    elif spec.curve is WCurve.TAU:
        z_inf = 2.0 * np.exp(1j * param)
    else:
        z_inf = param * np.exp(1j * sign * np.pi / (2 * n))
    seed = complex((z_inf - 1.0) ** 2 / 16.0)

    a = _fixed_point(update, seed, f"w_boundary_point({spec.curve.value}, {param})")
    if a == 0:
        raise BranchError("curve iteration collapsed to a = 0", a)

    vm = subfamily_v_minus(n, a)
    if spec.curve is WCurve.BETA:
        resid = abs(abs(vm) - abs(a) ** (1.0 / n) / 2.0)
    elif spec.curve is WCurve.TAU:
        resid = abs(abs(vm) - 2.0)
    else:
        arg_wk = (np.angle(a) + 2.0 * np.pi * spec.k) / (2 * n)
        d = (np.angle(vm) - arg_wk - sign * np.pi / (2 * n)) % (2.0 * np.pi)
        if d > np.pi:
            d -= 2.0 * np.pi
        resid = abs(d)
    if resid > 1e-8:
        raise BranchError(
            f"{spec.curve.value} solution at param={param} violates its "
            f"defining property (residual {resid:.3e})",
            a,
        )
    return a


def outer_boundary_margin(x: float, n: int) -> float:
    """g_n(x) = x^(2n) - 2^(n-1) x + 2^n (2^n - 3).

    Positivity of g_n on (0, 4] is what puts the disk D(0,2) inside the
    ellipse whenever |v_-| <= 2.
    """
    return x ** (2 * n) - 2.0 ** (n - 1) * x + 2.0 ** n * (2.0 ** n - 3.0)


def outer_boundary_margin_argmin(n: int) -> float:
    """Location of the unique minimum of g_n: (2^(n-2)/n)^(1/(2n-1))."""
    return (2.0 ** (n - 2) / n) ** (1.0 / (2 * n - 1))


def v_minus_bound(n) -> float:
    """Upper bound L(n) for |v_-| when |a - 1/8| < 1/32.

    L(n) = | sqrt(5/2) e^{i 19 pi/20} + (3/32)^(1/2n) e^{i pi/20n} |,
    decreasing in n; n = None or inf gives the limit (root factor -> 1,
    angle -> 0).
    """
    big = math.sqrt(2.5) * np.exp(1j * 19.0 * math.pi / 20.0)
    if n is None or n == math.inf:
        small = 1.0 + 0.0j
    else:
        small = (3.0 / 32.0) ** (1.0 / (2 * n)) * np.exp(1j * math.pi / (20.0 * n))
    return float(abs(big + small))


def m_annulus(inner: float = 0.028, outer: float = 0.40) -> AnnulusBounds:
    """Annulus centered at 1/8 that empirically contains the boundedness
    locus of the subfamily for large n (checked at desk scale, not proven
    for any specific n)."""
    return AnnulusBounds(inner=inner, outer=outer, center=0.125 + 0j)
