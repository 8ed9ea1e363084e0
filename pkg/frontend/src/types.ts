/**
 * Wire contracts for the tile-assembly session service.
 *
 * Every interface here mirrors a JSON body produced or consumed by the HTTP
 * API, field for field. The UI deliberately has no richer model of its own:
 * whatever the server sends is what gets stored, compared, and displayed, so
 * the browser can never drift from the engine.
 */

// ---------------------------------------------------------------------------
// Geometry
// ---------------------------------------------------------------------------

/** Integer lattice position: `[x, y]` in 2D, `[x, y, z]` in 3D. */
export type Point = number[];

/** A glue as serialized on tile faces and movie entries: label + strength. */
export type GlueObj = [string, number];

/** One placed (or placeable) tile: a position and a tile-type id. */
export interface PlacementObj {
  pos: Point;
  tile: string;
}

/**
 * A lattice window given either as the edge cut around an axis-aligned box
 * (both corners inclusive) or as an explicit list of cut edges.
 */
export type WindowObj =
  | { box: { lo: Point; hi: Point } }
  | { edges: [Point, Point][] };

// ---------------------------------------------------------------------------
// Documents
// ---------------------------------------------------------------------------

/** A tile type inside a `tilesystem/1` document. */
export interface TileTypeObj {
  id: string;
  label?: string;
  glues: Record<string, GlueObj>;
}

/** A full `tilesystem/1` document, the body of `POST /sessions`. */
export interface SystemDocumentObj {
  format: string;
  name: string;
  dimension: number;
  temperature: number;
  diffusionRestricted: boolean;
  tileTypes: TileTypeObj[];
  seed: PlacementObj[];
}

/**
 * A `trace/1` document: an ordered placement list plus its system, inlined
 * or referenced by path. Used as the `traceB` input to splice previews and
 * returned verbatim by `GET /sessions/{id}/trace`.
 */
export interface TraceDocumentObj {
  format: string;
  system: SystemDocumentObj | { path: string };
  placements: PlacementObj[];
  rng?: { seed: number; maxSteps: number };
}

// ---------------------------------------------------------------------------
// Session responses
// ---------------------------------------------------------------------------

/** `POST /sessions` response. */
export interface SessionInfo {
  sessionId: string;
  name: string;
  revision: number;
}

/** `GET /sessions/{id}/assembly` response. */
export interface AssemblyResponse {
  revision: number;
  dimension: number;
  placements: PlacementObj[];
}

/** `GET /sessions/{id}/frontier` response. */
export interface FrontierResponse {
  revision: number;
  frontier: PlacementObj[];
}

/** `GET /sessions/{id}/constrained` response. */
export interface ConstrainedResponse {
  revision: number;
  cells: Point[];
}

/** `POST /sessions/{id}/attach` response. */
export interface AttachResponse {
  revision: number;
  placement: PlacementObj;
}

/** `POST /sessions/{id}/undo` response. */
export interface UndoResponse {
  revision: number;
  undone: PlacementObj;
}

/** One step of a window movie: the crossing edge and the glue presented. */
export interface MovieEntryObj {
  from: Point;
  to: Point;
  glue: GlueObj;
}

/** `POST /sessions/{id}/movie` response. */
export interface MovieResponse {
  revision: number;
  anchor: Point;
  entries: MovieEntryObj[];
}

/** `POST /sessions/{id}/splice-preview` request body. */
export interface SplicePreviewRequest {
  traceB: TraceDocumentObj;
  window: WindowObj;
  c: Point;
  mode?: 'full' | 'bond_forming';
  strict?: boolean;
  revision?: number;
}

/** `POST /sessions/{id}/splice-preview` response. */
export interface SplicePreviewResponse {
  revision: number;
  steps: PlacementObj[];
  placements: PlacementObj[];
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/**
 * The machine-readable error object carried under `detail` in every non-2xx
 * response. `kind` distinguishes failures: `unknown-session`, `stale-revision`
 * (with `current`), `parse-error` (with `line`), `schema-version` (with
 * `format`), `invalid-request`, `invalid-placement`, `invalid-window`,
 * `movie-mismatch`, `splice-step-invalid`, `nothing-to-undo`, and the attach
 * rejections `occupied`, `unknown-tile`, `insufficient-strength`,
 * `constrained`.
 */
export interface ApiErrorDetail {
  kind: string;
  message: string;
  current?: number;
  line?: number;
  format?: string;
}

/** Error envelope as serialized by the service. */
export interface ApiErrorBody {
  detail: ApiErrorDetail;
}
