"""Workbench for the singularly perturbed power maps z^n + a/z^n + b.

Submodules:
  maps      exact map evaluation, critical sets, the symmetry involution
  geometry  centers, spine, annuli, regime thresholds, implicit boundary curves
  kernel    vectorized orbit iteration shared by all classification paths
  dynamics  orbit classification, Boettcher coordinates, internal rays
  render    deterministic parallel plane rendering and image encoding
  verify    numerical certification suites
  cli       command-line entry point
  service   HTTP tile / classification / loci facade
"""

from .dynamics import (
    Outcome,
    OrbitResult,
    SliceKind,
    SliceSpec,
    boettcher_value,
    classify_parameter,
    internal_ray_point,
    iterate_orbit,
    phi_j,
)
from .geometry import (
    AnnulusBounds,
    center_a_k,
    centers,
    k_annulus,
    m_annulus,
    regime_thresholds,
    spine_point,
    spine_polyline,
    v_minus_bound,
)
from .maps import (
    CriticalSet,
    DomainError,
    FamilyTag,
    MapParams,
    PoleError,
    critical_set,
    eval_map,
    involution,
    principal_power,
    principal_root,
    subfamily_b,
    subfamily_v_minus,
)
from .render import (
    ImageBuffer,
    ImageFormat,
    Overlay,
    Palette,
    PlaneKind,
    PlaneSpec,
    Viewport,
    encode_image,
    render_plane,
)
from .verify import SuiteConfig, VerificationReport, run_suite, suite_ids

__version__ = "0.1.0"

__all__ = [
    "AnnulusBounds",
    "CriticalSet",
    "DomainError",
    "FamilyTag",
    "ImageBuffer",
    "ImageFormat",
    "MapParams",
    "OrbitResult",
    "Outcome",
    "Overlay",
    "Palette",
    "PlaneKind",
    "PlaneSpec",
    "PoleError",
    "SliceKind",
    "SliceSpec",
    "SuiteConfig",
    "VerificationReport",
    "Viewport",
    "boettcher_value",
    "center_a_k",
    "centers",
    "classify_parameter",
    "critical_set",
    "encode_image",
    "eval_map",
    "internal_ray_point",
    "involution",
    "iterate_orbit",
    "k_annulus",
    "m_annulus",
    "phi_j",
    "principal_power",
    "principal_root",
    "regime_thresholds",
    "render_plane",
    "run_suite",
    "spine_point",
    "spine_polyline",
    "subfamily_b",
    "subfamily_v_minus",
    "suite_ids",
    "v_minus_bound",
]
