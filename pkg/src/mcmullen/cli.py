"""Command-line front end: render planes, list loci, run verification suites.

Exit codes: 0 success, 1 verification failure, 2 usage error.  All numeric
output uses 17 significant digits so values round-trip through text.
Identical argv always produces identical bytes on stdout and in files.
"""

from __future__ import annotations

import argparse
import math
import sys

from . import verify as verify_mod
from .dynamics import SliceKind, SliceSpec
from .geometry import center_a_k, spine_polyline
from .maps import MapParams, eval_map
from .render import (
    ImageFormat,
    Overlay,
    PlaneSpec,
    Viewport,
    encode_image,
    render_plane,
)


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _fmt_c(z: complex) -> str:
    return f"{z.real:.17g},{z.imag:.17g}"


def _complex_flag(text: str) -> complex:
    """Parse a complex number given as 'X,Y' (or a bare real 'X')."""
    parts = text.split(",")
    try:
        if len(parts) == 1:
            return complex(float(parts[0]), 0.0)
        if len(parts) == 2:
            return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        pass
    raise argparse.ArgumentTypeError(f"expected 'X,Y' or 'X', got {text!r}")


def _n_flag(text: str):
    if text.lower() == "inf":
        return math.inf
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or 'inf', got {text!r}")
    if n < 3:
        raise argparse.ArgumentTypeError("n must be >= 3")
    return n


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(
        prog="mcmullen",
        description="Workbench for the singularly perturbed power maps "
        "z^n + a/z^n + b.",
    )
    sub = top.add_subparsers(dest="command", required=True)

    def add_viewport(p):
        p.add_argument("--center", type=_complex_flag, default=0j, metavar="X,Y")
        p.add_argument("--width", type=float, required=True)
        p.add_argument("--px", type=int, required=True)
        p.add_argument("--max-iter", type=int, default=512)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", required=True, metavar="FILE",
                       help="output image; .ppm selects PPM, anything else PNG")

    rp = sub.add_parser("render-param", help="render a parameter-plane slice")
    rp.add_argument("--slice", dest="slice_kind", required=True,
                    choices=[k.value for k in SliceKind])
    rp.add_argument("--n", type=int, required=True)
    rp.add_argument("--a", type=_complex_flag, metavar="X,Y")
    rp.add_argument("--b", type=_complex_flag, metavar="X,Y")
    rp.add_argument("--t", type=_complex_flag, metavar="X,Y")
    rp.add_argument("--overlay", default="",
                    help="comma list from: centers, spine")
    add_viewport(rp)

    rj = sub.add_parser("render-julia", help="render a dynamical plane")
    rj.add_argument("--n", type=int, required=True)
    rj.add_argument("--a", type=_complex_flag, required=True, metavar="X,Y")
    rj.add_argument("--b", type=_complex_flag, metavar="X,Y",
                    help="omit to use the fixed-critical-point subfamily")
    rj.add_argument("--overlay", default="",
                    help="comma list from: critical-values, zero")
    add_viewport(rj)

    ce = sub.add_parser("centers", help="list the component centers a_k")
    ce.add_argument("--n", type=int, required=True)
    ce.add_argument("--verify", action="store_true",
                    help="also report the defining residual for each center")

    sp = sub.add_parser("spine", help="sample the |v_-| = 1 curve")
    sp.add_argument("--n", type=_n_flag, required=True, metavar="N|inf")
    sp.add_argument("--samples", type=int, default=256)

    ve = sub.add_parser("verify", help="run verification suites")
    ve.add_argument("--suite", required=True,
                    help="comma list of suite ids, or 'all'")
    ve.add_argument("--n-range", default="3:8", metavar="LO:HI")
    ve.add_argument("--seed", type=int, default=verify_mod.DEFAULT_SEED)

    se = sub.add_parser("serve", help="start the HTTP tile service")
    se.add_argument("--port", type=int, default=8000)
    se.add_argument("--host", default="127.0.0.1")
    return top


def _slice_from_args(args) -> SliceSpec:
    kind = SliceKind(args.slice_kind)
    if kind is SliceKind.A_SLICE and args.b is None:
        raise SystemExit2("--slice a-slice requires --b")
    if kind is SliceKind.B_SLICE and args.a is None:
        raise SystemExit2("--slice b-slice requires --a")
    if kind is SliceKind.LINEAR and args.t is None:
        raise SystemExit2("--slice linear requires --t")
    return SliceSpec(kind=kind, n=args.n, a=args.a or 0j, b=args.b or 0j,
                     t=args.t or 0j)


class SystemExit2(Exception):
    """Usage error detected after argparse (exit code 2)."""


def _overlays(text: str, allowed) -> tuple:
    out = []
    for name in filter(None, (s.strip() for s in text.split(","))):
        try:
            ov = Overlay(name)
        except ValueError:
            raise SystemExit2(f"unknown overlay {name!r}")
        if ov not in allowed:
            raise SystemExit2(f"overlay {name!r} not valid for this plane")
        out.append(ov)
    return tuple(out)


def _write_image(buf, path: str) -> None:
    fmt = ImageFormat.PPM if path.lower().endswith(".ppm") else ImageFormat.PNG
    with open(path, "wb") as fh:
        fh.write(encode_image(buf, fmt))


def _cmd_render_param(args) -> int:
    slc = _slice_from_args(args)
    overlays = _overlays(args.overlay, {Overlay.CENTERS, Overlay.SPINE})
    spec = PlaneSpec.parameter(slc, max_iter=args.max_iter, overlays=overlays)
    vp = Viewport.square(args.center, args.width, args.px)
    _write_image(render_plane(spec, vp, workers=args.workers), args.out)
    print(f"wrote {args.out} {args.px}x{args.px}")
    return 0


def _cmd_render_julia(args) -> int:
    if args.b is None:
        p = MapParams.subfamily(args.n, args.a)
    else:
        p = MapParams.general(args.n, args.a, args.b)
    overlays = _overlays(args.overlay, {Overlay.CRITICAL_VALUES, Overlay.ZERO})
    spec = PlaneSpec.dynamical(p, max_iter=args.max_iter, overlays=overlays)
    vp = Viewport.square(args.center, args.width, args.px)
    _write_image(render_plane(spec, vp, workers=args.workers), args.out)
    print(f"wrote {args.out} {args.px}x{args.px}")
    return 0


def _cmd_centers(args) -> int:
    if args.n < 3:
        raise SystemExit2("n must be >= 3")
    if args.verify:
        print("# k a relation residual")
    else:
        print("# k a")
    for k in range(1, 2 * args.n):
        a = center_a_k(args.n, k)
        if not args.verify:
            print(f"{k} {_fmt_c(a)}")
            continue
        p = MapParams.subfamily(args.n, a)
        img = eval_map(p, p.v_minus)
        if k % 2 == 1:
            relation = "v-_fixed"
            resid = abs(img - p.v_minus) / (1.0 + abs(p.v_minus))
        else:
            relation = "v-_to_v+"
            resid = abs(img - p.v_plus) / (1.0 + abs(p.v_plus))
        print(f"{k} {_fmt_c(a)} {relation} {_fmt(resid)}")
    return 0


def _cmd_spine(args) -> int:
    print("# theta a")
    for theta, a in spine_polyline(args.n, args.samples):
        print(f"{_fmt(theta)} {_fmt_c(a)}")
    return 0


def _cmd_verify(args) -> int:
    try:
        lo, hi = (int(v) for v in args.n_range.split(":"))
    except ValueError:
        raise SystemExit2(f"--n-range must be LO:HI, got {args.n_range!r}")
    if not 3 <= lo <= hi:
        raise SystemExit2("--n-range needs 3 <= LO <= HI")
    ids = (verify_mod.suite_ids() if args.suite == "all"
           else [s.strip() for s in args.suite.split(",") if s.strip()])
    cfg = verify_mod.SuiteConfig(n_lo=lo, n_hi=hi, seed=args.seed)
    ok = True
    for sid in ids:
        try:
            rep = verify_mod.run_suite(sid, cfg)
        except KeyError as exc:
            raise SystemExit2(str(exc))
        print(rep.to_text())
        ok &= rep.passed
    return 0 if ok else 1


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port, log_level="info")
    return 0


_COMMANDS = {
    "render-param": _cmd_render_param,
    "render-julia": _cmd_render_julia,
    "centers": _cmd_centers,
    "spine": _cmd_spine,
    "verify": _cmd_verify,
    "serve": _cmd_serve,
}


def dispatch(argv) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on usage errors and 0 on --help; pass both through
        return int(exc.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except SystemExit2 as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()
