// Dual-pane explorer: left pane is a parameter slice, right pane the
// dynamical plane of the selected parameter.  All math goes through the
// HTTP service; this file only wires gestures to viewport updates and
// viewport updates to whole-viewport image fetches.

import {
    fetchCenters, fetchClassify, juliaUrl, tileUrl,
    SliceSelection, CenterRecord,
} from './api';
import { TileLoader } from './loader';
import { panelLines, colorSwatch } from './panel';
import {
    MIN_WIDTH, Viewport, panBy, pixelToPoint, pointToPixel, zoomAt,
} from './viewport';

const SERVICE = (window as unknown as { SERVICE_URL?: string }).SERVICE_URL
    ?? 'http://localhost:8000';

interface AppState {
    slice: SliceSelection;
    paramView: Viewport;
    juliaView: Viewport;
    selected: [number, number] | null;
    budget: number;
    showCenters: boolean;
    centers: CenterRecord[];
}

const state: AppState = {
    slice: { kind: 'fixed-crit', n: 6 },
    paramView: { cx: 0, cy: 0, width: 0.7, pxW: 512, pxH: 512 },
    juliaView: { cx: 0, cy: 0, width: 4, pxW: 512, pxH: 512 },
    selected: null,
    budget: 512,
    showCenters: true,
    centers: [],
};

function el<T extends HTMLElement>(id: string): T {
    const node = document.getElementById(id);
    if (!node) throw new Error(`missing element #${id}`);
    return node as T;
}

const paramCanvas = el<HTMLCanvasElement>('param-canvas');
const juliaCanvas = el<HTMLCanvasElement>('julia-canvas');
const panel = el<HTMLDivElement>('panel');
const errorBadge = el<HTMLDivElement>('error-badge');
const notice = el<HTMLDivElement>('notice');
const budgetSlider = el<HTMLInputElement>('budget');
const budgetLabel = el<HTMLSpanElement>('budget-label');
const nSelect = el<HTMLSelectElement>('n-select');
const centersToggle = el<HTMLInputElement>('centers-toggle');

const paramLoader = new TileLoader<HTMLImageElement>();
const juliaLoader = new TileLoader<HTMLImageElement>();

function loadImage(url: string): Promise<HTMLImageElement> {
    return new Promise((resolve, reject) => {
        const img = new Image();
        img.crossOrigin = 'anonymous';
        img.onload = () => resolve(img);
        img.onerror = () => reject(new Error(`failed to load ${url}`));
        img.src = url;
    });
}

function drawPane(
    canvas: HTMLCanvasElement, loader: TileLoader<HTMLImageElement>,
): void {
    const ctx = canvas.getContext('2d');
    if (!ctx || !loader.current) return;
    ctx.drawImage(loader.current, 0, 0, canvas.width, canvas.height);
}

function drawParamOverlays(): void {
    const ctx = paramCanvas.getContext('2d');
    if (!ctx) return;
    if (state.showCenters) {
        ctx.fillStyle = '#ff3c3c';
        for (const rec of state.centers) {
            const [px, py] = pointToPixel(state.paramView, rec.a[0], rec.a[1]);
            ctx.fillRect(px - 2, py - 2, 5, 5);
        }
    }
    if (state.selected) {
        const [px, py] = pointToPixel(state.paramView, state.selected[0], state.selected[1]);
        ctx.strokeStyle = '#ffffff';
        ctx.strokeRect(px - 4, py - 4, 9, 9);
    }
}

function setErrorBadge(): void {
    const msg = paramLoader.lastError ?? juliaLoader.lastError;
    errorBadge.textContent = msg ? `service error: ${msg}` : '';
    errorBadge.style.display = msg ? 'block' : 'none';
}

async function refreshParam(): Promise<void> {
    const gen = paramLoader.begin();
    const url = tileUrl(SERVICE, state.slice, state.paramView, state.budget);
    const outcome = await paramLoader.load(gen, () => loadImage(url));
    if (outcome.applied) {
        drawPane(paramCanvas, paramLoader);
        drawParamOverlays();
    }
    setErrorBadge();
}

async function refreshJulia(): Promise<void> {
    if (!state.selected) return;
    const gen = juliaLoader.begin();
    const url = juliaUrl(
        SERVICE, state.slice.n, state.selected, state.juliaView, state.budget,
    );
    const outcome = await juliaLoader.load(gen, () => loadImage(url));
    if (outcome.applied) drawPane(juliaCanvas, juliaLoader);
    setErrorBadge();
}

async function refreshCenters(): Promise<void> {
    try {
        state.centers = await fetchCenters(SERVICE, state.slice.n);
    } catch {
        state.centers = [];
    }
}

async function selectParameter(px: number, py: number): Promise<void> {
    const [x, y] = pixelToPoint(state.paramView, px, py);
    state.selected = [x, y];
    drawPane(paramCanvas, paramLoader);
    drawParamOverlays();
    try {
        const rec = await fetchClassify(SERVICE, state.slice, x, y, state.budget);
        if (rec.degenerate) {
            panel.innerHTML = '<p>a = 0 is degenerate: the perturbation vanishes</p>';
            return;
        }
        panel.innerHTML = panelLines(rec)
            .map((line) => `<p>${line}</p>`)
            .join('')
            + `<div class="swatch" style="background:${colorSwatch(rec)}"></div>`;
        void refreshJulia();
    } catch (err) {
        panel.textContent = `classification failed: ${String(err)}`;
    }
}

function wireNavigation(
    canvas: HTMLCanvasElement,
    get: () => Viewport,
    set: (v: Viewport) => void,
    refresh: () => Promise<void>,
): void {
    let dragging = false;
    let moved = false;
    let lastX = 0;
    let lastY = 0;

    canvas.addEventListener('wheel', (ev) => {
        ev.preventDefault();
        const factor = ev.deltaY > 0 ? 2 : 0.5;
        const before = get();
        const after = zoomAt(before, ev.offsetX, ev.offsetY, factor);
        if (after === before && factor < 1) {
            notice.textContent = `zoom limit: width ${MIN_WIDTH} is the precision floor`;
            return;
        }
        notice.textContent = '';
        set(after);
        void refresh();
    }, { passive: false });

    canvas.addEventListener('pointerdown', (ev) => {
        dragging = true;
        moved = false;
        lastX = ev.offsetX;
        lastY = ev.offsetY;
        canvas.setPointerCapture(ev.pointerId);
    });
    canvas.addEventListener('pointermove', (ev) => {
        if (!dragging) return;
        const dx = ev.offsetX - lastX;
        const dy = ev.offsetY - lastY;
        if (Math.abs(dx) + Math.abs(dy) > 2) moved = true;
        if (!moved) return;
        lastX = ev.offsetX;
        lastY = ev.offsetY;
        set(panBy(get(), dx, dy));
        void refresh();
    });
    canvas.addEventListener('pointerup', (ev) => {
        dragging = false;
        if (!moved && canvas === paramCanvas) {
            void selectParameter(ev.offsetX, ev.offsetY);
        }
    });
}

wireNavigation(
    paramCanvas,
    () => state.paramView,
    (v) => { state.paramView = v; },
    refreshParam,
);
wireNavigation(
    juliaCanvas,
    () => state.juliaView,
    (v) => { state.juliaView = v; },
    refreshJulia,
);

budgetSlider.addEventListener('input', () => {
    state.budget = Number(budgetSlider.value);
    budgetLabel.textContent = String(state.budget);
});
budgetSlider.addEventListener('change', () => {
    void refreshParam();
    void refreshJulia();
});

nSelect.addEventListener('change', () => {
    state.slice = { kind: 'fixed-crit', n: Number(nSelect.value) };
    state.selected = null;
    void refreshCenters().then(refreshParam);
});

centersToggle.addEventListener('change', () => {
    state.showCenters = centersToggle.checked;
    drawPane(paramCanvas, paramLoader);
    drawParamOverlays();
});

void refreshCenters().then(refreshParam);
