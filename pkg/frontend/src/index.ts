/**
 * Public surface of the frontier-explorer UI, for tests and embedding:
 * the typed HTTP client, the pure view-model layer, and the controller.
 * Browser-only code (DOM mounting) lives in `dom.ts` / `main.ts` and is
 * not re-exported here, so this entry stays importable outside a browser.
 */

export * from './types.js';
export { ApiError, SessionApi } from './api.js';
export type { Fetcher, Snapshot } from './api.js';
export * from './viewModel.js';
export { SessionController } from './controller.js';
export type { AttachOutcome, ViewState } from './controller.js';
