"""Closed-form objects for the generalized McMullen family R(z) = z^n + a/z^n + b.

Branch convention, fixed once for the whole package: Arg has range (-pi, pi],
with Arg = pi on the negative real axis.  Every root and fractional power in
this module derives from that single convention.

All functions accept scalars or numpy arrays of complex128; scalars go through
the same numpy kernels as arrays, so a one-point computation is bit-identical
to the corresponding entry of a batched computation.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

#: |z| below this is treated as the pole at 0 (the orbit maps to infinity).
POLE_RADIUS = 1e-300


class DomainError(ValueError):
    """Raised when an input is outside a function's mathematical domain."""


class PoleError(DomainError):
    """Raised when a map is evaluated at (or numerically at) the pole z = 0."""


class FamilyTag(Enum):
    GENERAL = "general"
    FIXED_CRIT = "fixed-crit"


def principal_root(a, d: int):
    """d-th principal root: |a|^(1/d) * exp(i*Arg(a)/d), Arg in (-pi, pi]."""
    if d < 1:
        raise DomainError(f"root order must be >= 1, got {d}")
    if np.any(a == 0):
        raise DomainError("principal root of 0 is excluded (a != 0 required)")
    return np.abs(a) ** (1.0 / d) * np.exp(1j * np.angle(a) / d)


def principal_power(w, p: float):
    """w^p on the principal branch: exp(p*(ln|w| + i*Arg(w)))."""
    if np.any(w == 0):
        raise DomainError("principal power of 0 is excluded")
    return np.exp(p * (np.log(np.abs(w)) + 1j * np.angle(w)))


def subfamily_b(n: int, a):
    """b making v_+ = b + 2*sqrt(a) equal the principal 2n-th root of a.

    With this b the principal critical point is a super-attracting fixed
    point, so only the orbit of v_- is free.
    """
    if n < 3:
        raise DomainError(f"n must be >= 3, got {n}")
    return principal_root(a, 2 * n) - 2.0 * principal_root(a, 2)


@dataclass(frozen=True)
class MapParams:
    """One map z -> z^n + a/z^n + b, possibly constrained to the subfamily."""

    n: int
    a: complex
    b: complex
    family_tag: FamilyTag = FamilyTag.GENERAL

    def __post_init__(self):
        if self.n < 3:
            raise DomainError(f"n must be >= 3, got {self.n}")
        if self.a == 0:
            raise DomainError("a = 0 is excluded")
        if self.family_tag is FamilyTag.FIXED_CRIT:
            b0 = subfamily_b(self.n, self.a)
            if abs(self.b - b0) > 1e-12 * (1.0 + abs(b0)):
                raise DomainError(
                    "fixed-critical-point subfamily requires b = b_n(a); "
                    f"got b={self.b!r}, expected {complex(b0)!r}"
                )

    @classmethod
    def general(cls, n: int, a: complex, b: complex) -> "MapParams":
        return cls(n, complex(a), complex(b), FamilyTag.GENERAL)

    @classmethod
    def subfamily(cls, n: int, a: complex) -> "MapParams":
        a = complex(a)
        if a == 0:
            raise DomainError("a = 0 is excluded")
        return cls(n, a, complex(subfamily_b(n, a)), FamilyTag.FIXED_CRIT)

    @property
    def v_plus(self) -> complex:
        return complex(self.b + 2.0 * principal_root(self.a, 2))

    @property
    def v_minus(self) -> complex:
        return complex(self.b - 2.0 * principal_root(self.a, 2))


@dataclass(frozen=True)
class CriticalSet:
    """The 2n critical points w_k and the two critical values of one map."""

    points: np.ndarray  # shape (2n,), w_0 .. w_{2n-1}
    v_plus: complex
    v_minus: complex
    psi: float  # Arg(a), radians in (-pi, pi]

    def value_for(self, k: int) -> complex:
        """Critical value reached from w_k: v_+ for k even, v_- for k odd."""
        return self.v_plus if k % 2 == 0 else self.v_minus


def eval_map(p: MapParams, z):
    """R(z) = z^n + a/z^n + b.  Scalars within POLE_RADIUS of 0 raise."""
    if np.isscalar(z) or np.ndim(z) == 0:
        if abs(z) < POLE_RADIUS:
            raise PoleError("z = 0 is the pole; the orbit maps to infinity")
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        zn = np.asarray(z, dtype=np.complex128) ** p.n
        out = zn + p.a / zn + p.b
    if np.ndim(z) == 0:
        return complex(out)
    return out


def critical_set(p: MapParams) -> CriticalSet:
    """All 2n critical points w_k = |a|^(1/2n) e^{i(psi+2k pi)/2n}."""
    psi = float(np.angle(p.a))
    k = np.arange(2 * p.n)
    pts = np.abs(p.a) ** (1.0 / (2 * p.n)) * np.exp(
        1j * (psi + 2.0 * np.pi * k) / (2 * p.n)
    )
    return CriticalSet(points=pts, v_plus=p.v_plus, v_minus=p.v_minus, psi=psi)


def involution(p: MapParams, z):
    """h_a(z) = a^(1/n) / z; satisfies R(h_a(z)) = R(z)."""
    if np.isscalar(z) or np.ndim(z) == 0:
        if abs(z) < POLE_RADIUS:
            raise DomainError("involution is undefined at z = 0")
    return principal_root(p.a, p.n) / z


def subfamily_v_minus(n: int, a):
    """Free critical value of the subfamily: a^(1/2n) - 4*sqrt(a)."""
    return principal_root(a, 2 * n) - 4.0 * principal_root(a, 2)


def second_derivative_half(p: MapParams) -> complex:
    """R''(v_+)/2 for the subfamily, in closed form: n^2 * v_+^(n-2).

    Follows from R''(z) = n(n-1) z^(n-2) + n(n+1) a z^(-n-2) together with
    v_+^(2n) = a, which holds exactly when v_+ is the principal critical
    point (the subfamily constraint).
    """
    if p.family_tag is not FamilyTag.FIXED_CRIT:
        raise DomainError("closed-form R''(v_+)/2 assumes the subfamily")
    vp = np.complex128(p.v_plus)
    return complex(p.n * p.n * vp ** (p.n - 2))
