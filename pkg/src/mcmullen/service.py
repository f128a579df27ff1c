"""HTTP facade for the explorer UI: image tiles, point classification, loci.

Stateless by construction: every response is a pure function of the request,
so identical requests yield identical bytes and responses are cacheable by
their full query string.  Simultaneous tile renders are bounded by a
semaphore (default twice the hardware parallelism) to cap memory use.

Error convention: 400 for malformed input (wrong type, unknown enum value,
missing field), 422 for well-formed values outside the supported range.
"""

from __future__ import annotations

import asyncio
import math
import os

from fastapi import FastAPI, HTTPException, Query, Response
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .dynamics import (
    NotInBasinError,
    Outcome,
    OutsideComponentError,
    SliceKind,
    SliceSpec,
    classify_parameter,
    phi_j,
)
from .geometry import BranchError, center_a_k, spine_polyline
from .maps import DomainError
from .render import (
    ImageFormat,
    Overlay,
    PlaneSpec,
    Viewport,
    encode_image,
    render_plane,
)

MAX_PX = 2048
MIN_WIDTH = 1e-13  # double precision floor for pixel spacing
MAX_BUDGET = 100_000


def _range_error(detail: str):
    return HTTPException(status_code=422, detail=detail)


def _slice_spec(slice_kind: str, n: int, ax, ay, bx, by, tx, ty) -> SliceSpec:
    try:
        kind = SliceKind(slice_kind)
    except ValueError:
        raise HTTPException(400, f"unknown slice kind {slice_kind!r}")
    if n < 3:
        raise _range_error("n must be >= 3")
    if kind is SliceKind.A_SLICE and bx is None:
        raise HTTPException(400, "a-slice requires bx (and optionally by)")
    if kind is SliceKind.B_SLICE and ax is None:
        raise HTTPException(400, "b-slice requires ax (and optionally ay)")
    if kind is SliceKind.LINEAR and tx is None:
        raise HTTPException(400, "linear slice requires tx (and optionally ty)")
    mk = lambda x, y: complex(x or 0.0, y or 0.0)  # noqa: E731
    return SliceSpec(kind=kind, n=n, a=mk(ax, ay), b=mk(bx, by), t=mk(tx, ty))


def _check_viewport(w: float, px: int) -> None:
    if not math.isfinite(w) or w <= MIN_WIDTH:
        raise _range_error(f"width must exceed {MIN_WIDTH:g}")
    if not 1 <= px <= MAX_PX:
        raise _range_error(f"px must be in [1, {MAX_PX}]")


def _check_budget(budget: int) -> None:
    if not 1 <= budget <= MAX_BUDGET:
        raise _range_error(f"budget must be in [1, {MAX_BUDGET}]")


def _orbit_record(r) -> dict:
    final = [r.final_value.real, r.final_value.imag]
    if not all(math.isfinite(v) for v in final):
        final = None
    return {
        "outcome": r.outcome.name,
        "iterations": r.iterations,
        "entry_iter": r.entry_iter,
        "final": final,
        "pole": r.pole,
        "shade": r.shade,
    }


def create_app(max_renders: int = None) -> FastAPI:
    if max_renders is None:
        max_renders = 2 * (os.cpu_count() or 2)
    app = FastAPI(title="mcmullen tile service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )
    render_gate = asyncio.Semaphore(max_renders)

    @app.exception_handler(RequestValidationError)
    async def malformed(request, exc):
        # type errors are malformed requests, not out-of-range values
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    @app.get("/tile")
    async def tile(
        slice: str = Query("fixed-crit"),
        n: int = Query(...),
        cx: float = 0.0,
        cy: float = 0.0,
        w: float = Query(...),
        px: int = Query(256),
        budget: int = Query(512),
        overlays: str = Query(""),
        ax: float = None, ay: float = None,
        bx: float = None, by: float = None,
        tx: float = None, ty: float = None,
    ):
        _check_viewport(w, px)
        _check_budget(budget)
        slc = _slice_spec(slice, n, ax, ay, bx, by, tx, ty)
        ovs = []
        for name in filter(None, (s.strip() for s in overlays.split(","))):
            try:
                ovs.append(Overlay(name))
            except ValueError:
                raise HTTPException(400, f"unknown overlay {name!r}")
        spec = PlaneSpec.parameter(slc, max_iter=budget, overlays=tuple(ovs))
        vp = Viewport.square(complex(cx, cy), w, px)

        async with render_gate:
            buf = await asyncio.to_thread(
                render_plane, spec, vp, os.cpu_count() or 1
            )
        return Response(encode_image(buf, ImageFormat.PNG), media_type="image/png")

    @app.get("/julia")
    async def julia(
        n: int = Query(...),
        ax: float = Query(...),
        ay: float = 0.0,
        bx: float = None,
        by: float = None,
        cx: float = 0.0,
        cy: float = 0.0,
        w: float = Query(...),
        px: int = Query(256),
        budget: int = Query(512),
        overlays: str = Query("critical-values,zero"),
    ):
        from .maps import MapParams

        _check_viewport(w, px)
        _check_budget(budget)
        a = complex(ax, ay)
        if a == 0:
            raise _range_error("a = 0 is degenerate")
        if n < 3:
            raise _range_error("n must be >= 3")
        try:
            p = (MapParams.subfamily(n, a) if bx is None
                 else MapParams.general(n, a, complex(bx, by or 0.0)))
        except DomainError as exc:
            raise _range_error(str(exc))
        ovs = []
        for name in filter(None, (s.strip() for s in overlays.split(","))):
            try:
                ovs.append(Overlay(name))
            except ValueError:
                raise HTTPException(400, f"unknown overlay {name!r}")
        spec = PlaneSpec.dynamical(p, max_iter=budget, overlays=tuple(ovs))
        vp = Viewport.square(complex(cx, cy), w, px)
        async with render_gate:
            buf = await asyncio.to_thread(
                render_plane, spec, vp, os.cpu_count() or 1
            )
        return Response(encode_image(buf, ImageFormat.PNG), media_type="image/png")

    @app.get("/classify")
    async def classify(
        slice: str = Query("fixed-crit"),
        n: int = Query(...),
        x: float = Query(...),
        y: float = Query(...),
        budget: int = Query(512),
        ax: float = None, ay: float = None,
        bx: float = None, by: float = None,
        tx: float = None, ty: float = None,
    ):
        _check_budget(budget)
        slc = _slice_spec(slice, n, ax, ay, bx, by, tx, ty)
        point = complex(x, y)
        cls = await asyncio.to_thread(classify_parameter, slc, point, budget)
        record = {
            "point": [x, y],
            "degenerate": slc.params_at(point) is None,
            "minus": _orbit_record(cls.minus),
            "plus": _orbit_record(cls.plus),
            "color": list(cls.color),
        }
        phi_modulus = None
        if (
            slc.kind is SliceKind.FIXED_CRIT
            and cls.minus.outcome is Outcome.ATTRACTED_TO_V_PLUS
        ):
            try:
                phi_modulus = abs(phi_j(n, 1, point, max_iter=budget))
            except (NotInBasinError, OutsideComponentError, DomainError):
                phi_modulus = None
        record["phi_modulus"] = phi_modulus
        return record

    @app.get("/loci")
    async def loci(
        n: str = Query(...),
        kind: str = Query(...),
        samples: int = Query(256),
    ):
        if kind not in ("centers", "spine"):
            raise HTTPException(400, f"unknown loci kind {kind!r}")
        if n.lower() == "inf":
            n_val = math.inf
        else:
            try:
                n_val = int(n)
            except ValueError:
                raise HTTPException(400, f"n must be an integer or 'inf', got {n!r}")
        if kind == "centers":
            if n_val == math.inf or n_val < 3:
                raise _range_error("centers need a finite n >= 3")
            records = [
                {"k": k, "a": _cpair(center_a_k(int(n_val), k))}
                for k in range(1, 2 * int(n_val))
            ]
            return {"kind": "centers", "n": int(n_val), "records": records}
        if n_val != math.inf and n_val < 3:
            raise _range_error("n must be >= 3 or 'inf'")
        if not 2 <= samples <= 8192:
            raise _range_error("samples must be in [2, 8192]")
        try:
            pts = await asyncio.to_thread(spine_polyline, n_val, samples)
        except BranchError as exc:
            raise _range_error(str(exc))
        records = [{"theta": theta, "a": _cpair(a)} for theta, a in pts]
        return {"kind": "spine", "n": n, "records": records}

    return app


def _cpair(z: complex) -> list:
    return [z.real, z.imag]


app = create_app()
