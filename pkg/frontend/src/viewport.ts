// Affine viewport math shared by both panes.  Pure functions so the
// navigation laws (zoom anchoring, pan translation) are unit-testable
// without a canvas.

export interface Viewport {
    cx: number;       // plane coordinates of the window center
    cy: number;
    width: number;    // plane width; height follows from the pixel aspect
    pxW: number;
    pxH: number;
}

// Below this plane width per window, double precision runs out and the
// service rejects tile requests; navigation blocks instead of requesting.
export const MIN_WIDTH = 1e-13;

export function planeHeight(v: Viewport): number {
    return v.width * (v.pxH / v.pxW);
}

export function pixelToPoint(v: Viewport, px: number, py: number): [number, number] {
    const h = planeHeight(v);
    const x = v.cx - v.width / 2 + ((px + 0.5) / v.pxW) * v.width;
    const y = v.cy + h / 2 - ((py + 0.5) / v.pxH) * h;
    return [x, y];
}

export function pointToPixel(v: Viewport, x: number, y: number): [number, number] {
    const h = planeHeight(v);
    const px = Math.floor(((x - v.cx + v.width / 2) / v.width) * v.pxW);
    const py = Math.floor(((v.cy + h / 2 - y) / h) * v.pxH);
    return [px, py];
}

// Zoom by `factor` (< 1 zooms in) keeping the plane point under the cursor
// fixed.  Returns the input unchanged when the result would cross the
// precision floor, so the caller can show a notice.
export function zoomAt(v: Viewport, px: number, py: number, factor: number): Viewport {
    const newWidth = v.width * factor;
    if (newWidth < MIN_WIDTH) return v;
    const [ax, ay] = pixelToPoint(v, px, py);
    // the anchor keeps its fractional window position, so the new center is
    // the anchor shifted by the scaled offset from the old center
    const cx = ax + (v.cx - ax) * factor;
    const cy = ay + (v.cy - ay) * factor;
    return { ...v, cx, cy, width: newWidth };
}

// Pan by a pixel delta: dragging content right by dpx moves the center left.
export function panBy(v: Viewport, dpx: number, dpy: number): Viewport {
    const scaleX = v.width / v.pxW;
    const scaleY = planeHeight(v) / v.pxH;
    return { ...v, cx: v.cx - dpx * scaleX, cy: v.cy + dpy * scaleY };
}

export function resize(v: Viewport, pxW: number, pxH: number): Viewport {
    return { ...v, pxW, pxH };
}
