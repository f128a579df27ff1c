"""Parallel escape-time rendering of parameter slices and dynamical planes.

Work is decomposed into horizontal pixel bands; every band is a pure
function of (spec, viewport, band rows) and is written into a disjoint
region of the output buffer, so the assembled image is byte-identical for
any worker count.
"""

from __future__ import annotations

import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import kernel
from .dynamics import SliceKind, SliceSpec
from .geometry import centers, k_annulus, spine_polyline
from .maps import DomainError, FamilyTag, MapParams, principal_root, subfamily_b

BAND_ROWS = 32


@dataclass(frozen=True)
class Viewport:
    """Axis-aligned window of the complex plane mapped onto a pixel grid.

    Pixel (i, j) = (column, row) maps to the plane with the screen
    convention: row 0 is the top of the window (largest imaginary part).
    """

    center: complex
    width: float
    height: float
    px_w: int
    px_h: int

    def __post_init__(self):
        if self.px_w < 1 or self.px_h < 1:
            raise DomainError("pixel dimensions must be >= 1")
        if self.width <= 0 or self.height <= 0:
            raise DomainError("viewport extent must be positive")

    @classmethod
    def square(cls, center: complex, width: float, px: int) -> "Viewport":
        return cls(center=complex(center), width=width, height=width, px_w=px, px_h=px)

    def pixel_to_point(self, i, j):
        """Plane point at the center of pixel column i, row j (arrays ok)."""
        x = self.center.real + (np.asarray(i, dtype=np.float64) + 0.5) / self.px_w * self.width - self.width / 2.0
        y = self.center.imag + self.height / 2.0 - (np.asarray(j, dtype=np.float64) + 0.5) / self.px_h * self.height
        return x + 1j * y

    def point_to_pixel(self, z: complex):
        """(column, row) of the pixel containing z (may be out of range)."""
        i = int(np.floor((z.real - self.center.real + self.width / 2.0) / self.width * self.px_w))
        j = int(np.floor((self.center.imag + self.height / 2.0 - z.imag) / self.height * self.px_h))
        return i, j


@dataclass
class ImageBuffer:
    """Row-major RGB8 pixel buffer."""

    px_w: int
    px_h: int
    pixels: np.ndarray  # shape (px_h, px_w, 3), uint8

    @classmethod
    def blank(cls, px_w: int, px_h: int) -> "ImageBuffer":
        return cls(px_w, px_h, np.zeros((px_h, px_w, 3), dtype=np.uint8))

    def tobytes(self) -> bytes:
        return self.pixels.tobytes()


@dataclass(frozen=True)
class Palette:
    """Hue scheme: black for doubly bounded parameters, red when v_- escapes,
    blue when v_+ escapes, and the average (purple) when both escape."""

    bounded_base: int = 24
    bounded_range: int = 140
    escape_floor: float = 0.25
    degenerate: tuple = (200, 200, 200)
    marker: tuple = (255, 255, 255)
    center_marker: tuple = (255, 60, 60)

    def _bounded_level(self, entry, max_iter):
        e = np.maximum(np.asarray(entry, dtype=np.float64), 0.0)
        v = np.log1p(e) / np.log1p(max(max_iter, 1))
        return (self.bounded_base + self.bounded_range * np.clip(v, 0.0, 1.0)).astype(
            np.uint8
        )

    def _escape_level(self, shade, max_iter):
        v = np.asarray(shade, dtype=np.float64) / max(max_iter, 1)
        lum = self.escape_floor + (1.0 - self.escape_floor) * (1.0 - np.clip(v, 0.0, 1.0))
        return (255.0 * lum).astype(np.uint8)

    def param_colors(self, minus, plus, max_iter):
        """Vectorized coloring from the two orbit batches (dict of arrays)."""
        n = minus["outcome"].size
        rgb = np.zeros((n, 3), dtype=np.uint8)
        m_esc = minus["outcome"] == kernel.ESCAPED
        p_esc = plus["outcome"] == kernel.ESCAPED

        both_bounded = ~m_esc & ~p_esc
        if np.any(both_bounded):
            lvl = self._bounded_level(minus["entry_iter"][both_bounded], max_iter)
            rgb[both_bounded, 0] = lvl
            rgb[both_bounded, 1] = lvl
            rgb[both_bounded, 2] = lvl

        red_only = m_esc & ~p_esc
        if np.any(red_only):
            rgb[red_only, 0] = self._escape_level(minus["shade"][red_only], max_iter)

        blue_only = p_esc & ~m_esc
        if np.any(blue_only):
            rgb[blue_only, 2] = self._escape_level(plus["shade"][blue_only], max_iter)

        both = m_esc & p_esc
        if np.any(both):
            r = self._escape_level(minus["shade"][both], max_iter)
            b = self._escape_level(plus["shade"][both], max_iter)
            rgb[both, 0] = r // 2
            rgb[both, 2] = b // 2
        return rgb

    def julia_colors(self, batch, max_iter):
        n = batch["outcome"].size
        rgb = np.zeros((n, 3), dtype=np.uint8)
        esc = batch["outcome"] == kernel.ESCAPED
        if np.any(esc):
            lvl = self._escape_level(batch["shade"][esc], max_iter)
            rgb[esc, 0] = lvl
            rgb[esc, 1] = lvl
            rgb[esc, 2] = lvl
        bnd = ~esc
        if np.any(bnd):
            lvl = self._bounded_level(batch["entry_iter"][bnd], max_iter)
            rgb[bnd, 2] = lvl  # bounded dynamical points: dark blue ramp
        return rgb

    def classification_color(self, plus, minus, max_iter):
        """Color of one classified parameter (scalar OrbitResults)."""
        def as_batch(r):
            return {
                "outcome": np.array([r.outcome.value], dtype=np.int8),
                "entry_iter": np.array([r.entry_iter], dtype=np.int32),
                "shade": np.array([r.shade], dtype=np.float64),
            }

        rgb = self.param_colors(as_batch(minus), as_batch(plus), max_iter)
        return tuple(int(v) for v in rgb[0])


def degenerate_color(palette: Palette) -> tuple:
    return tuple(palette.degenerate)


class PlaneKind(Enum):
    PARAMETER = "parameter"
    DYNAMICAL = "dynamical"


class Overlay(Enum):
    CENTERS = "centers"
    SPINE = "spine"
    CRITICAL_VALUES = "critical-values"
    ZERO = "zero"


@dataclass(frozen=True)
class PlaneSpec:
    kind: PlaneKind
    slice_spec: SliceSpec = None  # for PARAMETER
    map_params: MapParams = None  # for DYNAMICAL
    max_iter: int = 512
    palette: Palette = field(default_factory=Palette)
    overlays: tuple = ()

    @classmethod
    def parameter(cls, slice_spec, max_iter=512, palette=None, overlays=()):
        return cls(PlaneKind.PARAMETER, slice_spec=slice_spec, max_iter=max_iter,
                   palette=palette or Palette(), overlays=tuple(overlays))

    @classmethod
    def dynamical(cls, map_params, max_iter=512, palette=None, overlays=()):
        return cls(PlaneKind.DYNAMICAL, map_params=map_params, max_iter=max_iter,
                   palette=palette or Palette(), overlays=tuple(overlays))


def _slice_arrays(slc: SliceSpec, pts: np.ndarray):
    """Per-point (a, b, degenerate mask) for a parameter slice."""
    if slc.kind is SliceKind.FIXED_CRIT:
        a = pts
        degenerate = a == 0
        a_safe = np.where(degenerate, 1.0 + 0j, a)
        b = subfamily_b(slc.n, a_safe)
        return a_safe, b, degenerate
    if slc.kind is SliceKind.A_SLICE:
        a = pts
        degenerate = a == 0
        a_safe = np.where(degenerate, 1.0 + 0j, a)
        return a_safe, np.full_like(pts, slc.b), degenerate
    if slc.kind is SliceKind.B_SLICE:
        return np.full_like(pts, slc.a), pts, np.zeros(pts.shape, dtype=bool)
    a = pts
    degenerate = a == 0
    a_safe = np.where(degenerate, 1.0 + 0j, a)
    return a_safe, slc.t * a_safe, degenerate


def _classify_param_band(slc: SliceSpec, pts: np.ndarray, max_iter: int):
    """Both-orbit classification of a flat array of slice points."""
    n = slc.n
    a, b, degenerate = _slice_arrays(slc, pts)
    sqrt_a = principal_root(a, 2)
    v_plus = b + 2.0 * sqrt_a
    v_minus = b - 2.0 * sqrt_a

    subfam = slc.kind is SliceKind.FIXED_CRIT
    if subfam:
        inner = np.where(np.abs(a) < 1.0,
                         np.abs(a) ** (1.0 / n) / 2.0,
                         np.abs(a) ** (1.0 / n) / np.maximum.reduce(
                             [np.full(a.shape, 4.0), np.abs(b), np.abs(a)]))
        outer = np.where(np.abs(a) < 1.0, 2.0,
                         np.maximum.reduce(
                             [np.full(a.shape, 4.0), np.abs(b), np.abs(a)]))
        delta = kernel.validate_delta(n, a, b, v_plus)
        minus = kernel.orbit_batch(n, a, b, v_minus, max_iter, inner, outer,
                                   v_plus=v_plus, v_minus=v_minus, delta=delta)
        # v_+ is a fixed point by construction: entry at step 0
        plus = {
            "outcome": np.full(pts.size, kernel.ATTRACTED, dtype=np.int8),
            "iterations": np.zeros(pts.size, dtype=np.int32),
            "entry_iter": np.zeros(pts.size, dtype=np.int32),
            "final": v_plus.astype(np.complex128),
            "shade": np.zeros(pts.size, dtype=np.float64),
            "pole": np.zeros(pts.size, dtype=bool),
        }
    else:
        s = np.maximum.reduce([np.full(a.shape, 4.0), np.abs(b), np.abs(a)])
        inner = np.abs(a) ** (1.0 / n) / s
        outer = s
        minus = kernel.orbit_batch(n, a, b, v_minus, max_iter, inner, outer,
                                   v_minus=v_minus)
        plus = kernel.orbit_batch(n, a, b, v_plus, max_iter, inner, outer)
    return minus, plus, degenerate


def classification_grid(slc: SliceSpec, vp: Viewport, max_iter: int, workers: int = 1):
    """Outcome grids for a parameter slice (used by rendering and flood fill).

    Returns (minus, plus, degenerate) where minus/plus are dicts of arrays
    shaped (px_h, px_w).
    """
    cols = np.arange(vp.px_w)

    def run_band(j0, j1):
        jj, ii = np.meshgrid(np.arange(j0, j1), cols, indexing="ij")
        pts = vp.pixel_to_point(ii, jj).ravel()
        return _classify_param_band(slc, pts, max_iter)

    bands = [(j0, min(j0 + BAND_ROWS, vp.px_h)) for j0 in range(0, vp.px_h, BAND_ROWS)]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda b: run_band(*b), bands))
    else:
        results = [run_band(*b) for b in bands]

    def stack(key, which):
        return np.concatenate([r[which][key] for r in results]).reshape(
            vp.px_h, vp.px_w
        )

    minus = {k: stack(k, 0) for k in results[0][0]}
    plus = {k: stack(k, 1) for k in results[0][1]}
    degenerate = np.concatenate([r[2] for r in results]).reshape(vp.px_h, vp.px_w)
    return minus, plus, degenerate


def render_plane(spec: PlaneSpec, vp: Viewport, workers: int = 1) -> ImageBuffer:
    """Render a parameter slice or dynamical plane into an RGB8 buffer."""
    buf = ImageBuffer.blank(vp.px_w, vp.px_h)
    pal = spec.palette
    if spec.kind is PlaneKind.PARAMETER:
        minus, plus, degenerate = classification_grid(
            spec.slice_spec, vp, spec.max_iter, workers
        )
        flat = pal.param_colors(
            {k: v.ravel() for k, v in minus.items()},
            {k: v.ravel() for k, v in plus.items()},
            spec.max_iter,
        )
        img = flat.reshape(vp.px_h, vp.px_w, 3)
        img[degenerate] = pal.degenerate
        buf.pixels[:] = img
    else:
        p = spec.map_params
        cols = np.arange(vp.px_w)

        def run_band(j0, j1):
            jj, ii = np.meshgrid(np.arange(j0, j1), cols, indexing="ij")
            pts = vp.pixel_to_point(ii, jj).ravel()
            size = pts.size
            a = np.full(size, p.a, dtype=np.complex128)
            b = np.full(size, p.b, dtype=np.complex128)
            subfam = p.family_tag is FamilyTag.FIXED_CRIT
            ann = k_annulus(p)
            vp_arr = np.full(size, p.v_plus, dtype=np.complex128) if subfam else None
            delta = (
                kernel.validate_delta(p.n, a, b, vp_arr) if subfam else None
            )
            return kernel.orbit_batch(
                p.n, a, b, pts, spec.max_iter,
                np.full(size, ann.inner), np.full(size, ann.outer),
                v_plus=vp_arr,
                v_minus=np.full(size, p.v_minus, dtype=np.complex128) if subfam else None,
                delta=delta,
            )

        bands = [(j0, min(j0 + BAND_ROWS, vp.px_h)) for j0 in range(0, vp.px_h, BAND_ROWS)]
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(lambda bd: run_band(*bd), bands))
        else:
            results = [run_band(*bd) for bd in bands]
        batch = {
            k: np.concatenate([r[k] for r in results]) for k in results[0]
        }
        buf.pixels[:] = pal.julia_colors(batch, spec.max_iter).reshape(
            vp.px_h, vp.px_w, 3
        )

    _draw_overlays(spec, vp, buf)
    return buf


def _stamp(buf: ImageBuffer, i: int, j: int, color) -> None:
    """3x3 marker centered at pixel (i, j), clipped to the buffer."""
    j0, j1 = max(j - 1, 0), min(j + 2, buf.px_h)
    i0, i1 = max(i - 1, 0), min(i + 2, buf.px_w)
    if j0 < j1 and i0 < i1:
        buf.pixels[j0:j1, i0:i1] = color


def _draw_overlays(spec: PlaneSpec, vp: Viewport, buf: ImageBuffer) -> None:
    pal = spec.palette
    for overlay in spec.overlays:
        if overlay is Overlay.CENTERS and spec.kind is PlaneKind.PARAMETER:
            for a in centers(spec.slice_spec.n):
                _stamp(buf, *vp.point_to_pixel(a), pal.center_marker)
        elif overlay is Overlay.SPINE and spec.kind is PlaneKind.PARAMETER:
            for _theta, a in spine_polyline(spec.slice_spec.n, 512):
                i, j = vp.point_to_pixel(a)
                if 0 <= i < buf.px_w and 0 <= j < buf.px_h:
                    buf.pixels[j, i] = pal.marker
        elif overlay is Overlay.CRITICAL_VALUES and spec.kind is PlaneKind.DYNAMICAL:
            p = spec.map_params
            _stamp(buf, *vp.point_to_pixel(p.v_plus), pal.marker)
            _stamp(buf, *vp.point_to_pixel(p.v_minus), pal.marker)
        elif overlay is Overlay.ZERO and spec.kind is PlaneKind.DYNAMICAL:
            _stamp(buf, *vp.point_to_pixel(0j), pal.marker)


# ---------------------------------------------------------------------------
# Encoding


class ImageFormat(Enum):
    PNG = "png"
    PPM = "ppm"


def encode_image(buf: ImageBuffer, fmt: ImageFormat) -> bytes:
    """Lossless encoding; PPM (P6, maxval 255) is the bit-exact golden format."""
    if fmt is ImageFormat.PPM:
        header = f"P6\n{buf.px_w} {buf.px_h}\n255\n".encode("ascii")
        return header + buf.tobytes()
    from PIL import Image

    img = Image.fromarray(buf.pixels, mode="RGB")
    out = io.BytesIO()
    img.save(out, format="PNG")
    return out.getvalue()


def decode_ppm(data: bytes) -> ImageBuffer:
    """Parse a P6 PPM produced by encode_image (round-trip partner)."""
    parts = data.split(b"\n", 3)
    if parts[0] != b"P6" or parts[2] != b"255":
        raise DomainError("not a P6 maxval-255 PPM")
    w, h = (int(v) for v in parts[1].split())
    pixels = np.frombuffer(parts[3], dtype=np.uint8, count=3 * w * h).reshape(h, w, 3)
    return ImageBuffer(w, h, pixels.copy())
