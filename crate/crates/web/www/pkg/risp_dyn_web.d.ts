/* tslint:disable */
/* eslint-disable */

export class Explorer {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Belt report as JSON.
     */
    belts(): string;
    /**
     * Fiber map at `z2 = e^{i t2}` as JSON.
     */
    classifyFiber(t2: number): string;
    /**
     * The fixed-point curves on the torus as `[t2, t1, ...]`.
     */
    fixedCurves(samples: number): Float64Array;
    static fromExample(id: string): Explorer;
    static fromJson(json: string): Explorer;
    isSimple(): boolean;
    /**
     * Frame `n` of the seed grid as `[t1, t2, flag, ...]`.
     */
    orbitFrame(lines: Float64Array, points_per_line: number, n: number): Float64Array;
    /**
     * `[t2, |psi1|, |psi2|, ...]` over `samples` fibers.
     */
    psiProfile(samples: number): Float64Array;
    readonly id: string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_explorer_free: (a: number, b: number) => void;
    readonly explorer_belts: (a: number) => [number, number, number, number];
    readonly explorer_classifyFiber: (a: number, b: number) => [number, number, number, number];
    readonly explorer_fixedCurves: (a: number, b: number) => [number, number, number, number];
    readonly explorer_fromExample: (a: number, b: number) => [number, number, number];
    readonly explorer_fromJson: (a: number, b: number) => [number, number, number];
    readonly explorer_id: (a: number) => [number, number];
    readonly explorer_isSimple: (a: number) => number;
    readonly explorer_orbitFrame: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly explorer_psiProfile: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
