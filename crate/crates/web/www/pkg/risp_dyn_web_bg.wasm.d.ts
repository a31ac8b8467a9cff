/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_explorer_free: (a: number, b: number) => void;
export const explorer_belts: (a: number) => [number, number, number, number];
export const explorer_classifyFiber: (a: number, b: number) => [number, number, number, number];
export const explorer_fixedCurves: (a: number, b: number) => [number, number, number, number];
export const explorer_fromExample: (a: number, b: number) => [number, number, number];
export const explorer_fromJson: (a: number, b: number) => [number, number, number];
export const explorer_id: (a: number) => [number, number];
export const explorer_isSimple: (a: number) => number;
export const explorer_orbitFrame: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
export const explorer_psiProfile: (a: number, b: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
