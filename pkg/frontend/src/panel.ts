// Human-readable summaries of classification records for the side panel.

import type { ClassifyRecord, OrbitRecord } from './api';

export function minusSummary(rec: ClassifyRecord): string {
    if (rec.degenerate) {
        return 'a = 0 is degenerate: the perturbation vanishes';
    }
    const m: OrbitRecord = rec.minus;
    switch (m.outcome) {
        case 'ESCAPED':
            return m.pole
                ? 'v− hits the pole and escapes'
                : `v− escapes after ${m.iterations} steps`;
        case 'ATTRACTED_TO_V_PLUS':
            return m.entry_iter === 1
                ? 'v− → v+ in 1 step'
                : `v− enters basin at step ${m.entry_iter}`;
        case 'FIXED_V_MINUS':
            return 'v− is a fixed point';
        default:
            return `v− unresolved after ${m.iterations} steps`;
    }
}

export function phiSummary(rec: ClassifyRecord): string | null {
    if (rec.phi_modulus === null || rec.phi_modulus === undefined) return null;
    return `|Φ| = ${rec.phi_modulus.toExponential(3)}`;
}

export function colorSwatch(rec: ClassifyRecord): string {
    const [r, g, b] = rec.color;
    return `rgb(${r}, ${g}, ${b})`;
}

export function panelLines(rec: ClassifyRecord): string[] {
    const lines = [
        `a = ${rec.point[0].toPrecision(8)} ${rec.point[1] < 0 ? '−' : '+'} ` +
        `${Math.abs(rec.point[1]).toPrecision(8)}i`,
        minusSummary(rec),
    ];
    const phi = phiSummary(rec);
    if (phi) lines.push(phi);
    return lines;
}
