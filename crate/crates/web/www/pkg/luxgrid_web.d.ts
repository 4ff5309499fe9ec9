/* tslint:disable */
/* eslint-disable */

/**
 * JSON text of a bundled scenario, or `undefined`.
 */
export function bundledScenario(name: string): string | undefined;

/**
 * Floor illuminance profile below a single source: `{offsets_m, isotropic_lux, lambertian_lux}`.
 */
export function emissionProfile(height_m: number, peak_cd: number, max_offset_m: number, samples: number): string;

/**
 * Global-illuminance heatmap: `{svg, average_lux, min_lux, max_lux, rho_moy, warnings, note}`.
 */
export function heatmap(json: string, emission: string, rho_policy: string, diffuse: string): string;

/**
 * Radiosity cross-check: `{svg, oracle_mean_lux, estimate_mean_lux, patches, iterations, energy_imbalance, points}`.
 */
export function oracleComparison(json: string, emission: string, rho_policy: string, diffuse: string, subdivision: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly bundledScenario: (a: number, b: number) => [number, number];
    readonly emissionProfile: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly heatmap: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number) => [number, number, number, number];
    readonly oracleComparison: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
