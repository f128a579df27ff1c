// Last-gesture-wins image loading with a generation counter per pane.
//
// Every navigation bumps the generation; a response is applied only if its
// generation is still the latest when it arrives, so a slow early tile can
// never overwrite a newer one.  On failure the previous image is retained
// and an error flag is surfaced instead.

export interface LoadOutcome {
    applied: boolean;
    error: boolean;
}

export class TileLoader<T> {
    private generation = 0;
    private inflight = 0;
    current: T | null = null;
    lastError: string | null = null;

    get activeGeneration(): number {
        return this.generation;
    }

    get busy(): boolean {
        return this.inflight > 0;
    }

    // Begin a new request; returns the generation token to resolve with.
    begin(): number {
        this.generation += 1;
        this.inflight += 1;
        return this.generation;
    }

    // Apply a successful response if it is still the newest one.
    resolve(gen: number, value: T): LoadOutcome {
        this.inflight = Math.max(0, this.inflight - 1);
        if (gen !== this.generation) {
            return { applied: false, error: false };
        }
        this.current = value;
        this.lastError = null;
        return { applied: true, error: false };
    }

    // Record a failure; the previous value stays visible.
    reject(gen: number, message: string): LoadOutcome {
        this.inflight = Math.max(0, this.inflight - 1);
        if (gen !== this.generation) {
            return { applied: false, error: false };
        }
        this.lastError = message;
        return { applied: false, error: true };
    }

    async load(gen: number, task: () => Promise<T>): Promise<LoadOutcome> {
        try {
            const value = await task();
            return this.resolve(gen, value);
        } catch (err) {
            return this.reject(gen, err instanceof Error ? err.message : String(err));
        }
    }
}
