/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_groundstate_free: (a: number, b: number) => void;
export const __wbg_propagation_free: (a: number, b: number) => void;
export const gaussianEnergyCurve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const groundstate_advance: (a: number, b: number) => [number, number];
export const groundstate_density: (a: number) => [number, number];
export const groundstate_done: (a: number) => number;
export const groundstate_energy: (a: number) => number;
export const groundstate_history: (a: number) => [number, number];
export const groundstate_iterations: (a: number) => number;
export const groundstate_n: (a: number) => number;
export const groundstate_new: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const groundstate_omega: (a: number) => number;
export const groundstate_residual: (a: number) => number;
export const groundstate_status: (a: number) => [number, number];
export const propagateGaussian: (a: number, b: number, c: number, d: number) => [number, number, number];
export const propagation_density: (a: number) => [number, number];
export const propagation_maxError: (a: number) => number;
export const propagation_peak: (a: number) => number;
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
