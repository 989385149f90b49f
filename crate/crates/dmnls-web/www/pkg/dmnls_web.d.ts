/* tslint:disable */
/* eslint-disable */

/**
 * Ground-state descent at fixed mass, advanced in chunks so the page stays responsive.
 */
export class GroundState {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Run up to `steps` descent iterations from the current field.
     */
    advance(steps: number): void;
    density(): Float64Array;
    /**
     * No further progress is expected.
     */
    done(): boolean;
    energy(): number;
    history(): Float64Array;
    iterations(): number;
    n(): number;
    constructor(p: number, lambda: number, dav: number, n: number, length: number);
    omega(): number;
    residual(): number;
    status(): string;
}

/**
 * `|e^{irΔ}g|²` of the unit-amplitude Gaussian on an `n × n` grid.
 */
export class Propagation {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Row-major density, length `n²`.
     */
    readonly density: Float64Array;
    /**
     * Largest pointwise deviation of the spectral solution from the closed form.
     */
    readonly maxError: number;
    readonly peak: number;
}

/**
 * Closed-form `H` of the mass-`λ` Gaussian at each width, focusing at `r = focus`.
 */
export function gaussianEnergyCurve(lambda: number, p: number, dav: number, focus: number, sigmas: Float64Array): Float64Array;

export function propagateGaussian(sigma0: number, r: number, n: number, length: number): Propagation;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_groundstate_free: (a: number, b: number) => void;
    readonly __wbg_propagation_free: (a: number, b: number) => void;
    readonly gaussianEnergyCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly groundstate_advance: (a: number, b: number) => [number, number];
    readonly groundstate_density: (a: number) => [number, number];
    readonly groundstate_done: (a: number) => number;
    readonly groundstate_energy: (a: number) => number;
    readonly groundstate_history: (a: number) => [number, number];
    readonly groundstate_iterations: (a: number) => number;
    readonly groundstate_n: (a: number) => number;
    readonly groundstate_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly groundstate_omega: (a: number) => number;
    readonly groundstate_residual: (a: number) => number;
    readonly groundstate_status: (a: number) => [number, number];
    readonly propagateGaussian: (a: number, b: number, c: number, d: number) => [number, number, number];
    readonly propagation_density: (a: number) => [number, number];
    readonly propagation_maxError: (a: number) => number;
    readonly propagation_peak: (a: number) => number;
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
