// Typed client for the tile service.  URL construction is kept separate
// from fetching so tests can assert the exact query strings.

import type { Viewport } from './viewport';

export type SliceKind = 'fixed-crit' | 'a-slice' | 'b-slice' | 'linear';

export interface SliceSelection {
    kind: SliceKind;
    n: number;
    // fixed constants for the non-subfamily slices, as [re, im]
    a?: [number, number];
    b?: [number, number];
    t?: [number, number];
}

export interface OrbitRecord {
    outcome: 'UNRESOLVED' | 'ESCAPED' | 'ATTRACTED_TO_V_PLUS' | 'FIXED_V_MINUS';
    iterations: number;
    entry_iter: number;
    final: [number, number] | null;
    pole: boolean;
    shade: number;
}

export interface ClassifyRecord {
    point: [number, number];
    degenerate: boolean;
    minus: OrbitRecord;
    plus: OrbitRecord;
    color: [number, number, number];
    phi_modulus: number | null;
}

export interface CenterRecord { k: number; a: [number, number]; }
export interface SpineRecord { theta: number; a: [number, number]; }

function sliceParams(sel: SliceSelection, q: URLSearchParams): void {
    q.set('slice', sel.kind);
    q.set('n', String(sel.n));
    if (sel.a) { q.set('ax', String(sel.a[0])); q.set('ay', String(sel.a[1])); }
    if (sel.b) { q.set('bx', String(sel.b[0])); q.set('by', String(sel.b[1])); }
    if (sel.t) { q.set('tx', String(sel.t[0])); q.set('ty', String(sel.t[1])); }
}

export function tileUrl(
    base: string, sel: SliceSelection, view: Viewport, budget: number,
    overlays: string[] = [],
): string {
    const q = new URLSearchParams();
    sliceParams(sel, q);
    q.set('cx', String(view.cx));
    q.set('cy', String(view.cy));
    q.set('w', String(view.width));
    q.set('px', String(view.pxW));
    q.set('budget', String(budget));
    if (overlays.length) q.set('overlays', overlays.join(','));
    return `${base}/tile?${q}`;
}

export function juliaUrl(
    base: string, n: number, a: [number, number], view: Viewport, budget: number,
): string {
    const q = new URLSearchParams();
    q.set('n', String(n));
    q.set('ax', String(a[0]));
    q.set('ay', String(a[1]));
    q.set('cx', String(view.cx));
    q.set('cy', String(view.cy));
    q.set('w', String(view.width));
    q.set('px', String(view.pxW));
    q.set('budget', String(budget));
    q.set('overlays', 'critical-values,zero');
    return `${base}/julia?${q}`;
}

export function classifyUrl(
    base: string, sel: SliceSelection, x: number, y: number, budget: number,
): string {
    const q = new URLSearchParams();
    sliceParams(sel, q);
    q.set('x', String(x));
    q.set('y', String(y));
    q.set('budget', String(budget));
    return `${base}/classify?${q}`;
}

export function lociUrl(
    base: string, n: number | 'inf', kind: 'centers' | 'spine', samples = 256,
): string {
    const q = new URLSearchParams();
    q.set('n', String(n));
    q.set('kind', kind);
    if (kind === 'spine') q.set('samples', String(samples));
    return `${base}/loci?${q}`;
}

export async function fetchClassify(
    base: string, sel: SliceSelection, x: number, y: number, budget: number,
    fetchFn: typeof fetch = fetch,
): Promise<ClassifyRecord> {
    const res = await fetchFn(classifyUrl(base, sel, x, y, budget));
    if (!res.ok) throw new Error(`classify failed: ${res.status}`);
    return res.json();
}

export async function fetchCenters(
    base: string, n: number, fetchFn: typeof fetch = fetch,
): Promise<CenterRecord[]> {
    const res = await fetchFn(lociUrl(base, n, 'centers'));
    if (!res.ok) throw new Error(`loci failed: ${res.status}`);
    return (await res.json()).records;
}

export async function fetchSpine(
    base: string, n: number | 'inf', samples: number,
    fetchFn: typeof fetch = fetch,
): Promise<SpineRecord[]> {
    const res = await fetchFn(lociUrl(base, n, 'spine', samples));
    if (!res.ok) throw new Error(`loci failed: ${res.status}`);
    return (await res.json()).records;
}
