/**
 * Pure view-model construction: server snapshots in, renderable grid out.
 *
 * Nothing in this module talks to the network or the DOM, and nothing here
 * simulates attachments. A grid view is a reshaping of three server
 * responses (assembly, frontier, constrained cells) taken at one revision;
 * the raw response text rides along so callers can verify that what is on
 * screen is exactly what the server said.
 */

import type { Snapshot } from './api.js';
import type {
  ApiErrorDetail,
  AssemblyResponse,
  ConstrainedResponse,
  FrontierResponse,
  MovieResponse,
  PlacementObj,
  Point,
  SplicePreviewResponse,
  WindowObj,
} from './types.js';

// ---------------------------------------------------------------------------
// Keys and geometry
// ---------------------------------------------------------------------------

/** Canonical string key for a lattice position: `"x,y"` or `"x,y,z"`. */
export function cellKey(pos: Point): string {
  return pos.join(',');
}

/** Component-wise sum of two positions of equal dimension. */
export function addPoints(a: Point, b: Point): Point {
  return a.map((v, i) => v + (b[i] ?? 0));
}

/** Component-wise difference `a - b`. */
export function subPoints(a: Point, b: Point): Point {
  return a.map((v, i) => v - (b[i] ?? 0));
}

/** The same window shifted by an offset (box corners or edge endpoints). */
export function translateWindow(window: WindowObj, c: Point): WindowObj {
  if ('box' in window) {
    return {
      box: { lo: addPoints(window.box.lo, c), hi: addPoints(window.box.hi, c) },
    };
  }
  return {
    edges: window.edges.map(
      ([a, b]) => [addPoints(a, c), addPoints(b, c)] as [Point, Point],
    ),
  };
}

// ---------------------------------------------------------------------------
// Camera
// ---------------------------------------------------------------------------

/** Pan/zoom state plus the active z slice when viewing a 3D session. */
export interface Camera {
  panX: number;
  panY: number;
  zoom: number;
  /** Active z slice for 3D sessions; ignored (null) in 2D. */
  sliceZ: number | null;
}

export function defaultCamera(): Camera {
  return { panX: 0, panY: 0, zoom: 1, sliceZ: null };
}

// ---------------------------------------------------------------------------
// Grid view
// ---------------------------------------------------------------------------

/** How a cell renders and behaves. */
export type CellState = 'tile' | 'frontier' | 'constrained';

/** One renderable cell of the grid. */
export interface CellView {
  key: string;
  pos: Point;
  state: CellState;
  /** Tile id occupying the cell, or null when empty. */
  tile: string | null;
  /** Attachment choices the server offers at this cell (frontier cells). */
  choices: PlacementObj[];
  /** True when the cell lies in a constrained region — drawn hatched. */
  hatched: boolean;
}

/** Inclusive coordinate bounds of everything worth drawing. */
export interface GridBounds {
  min: Point;
  max: Point;
}

/**
 * A complete renderable snapshot of one session revision.
 *
 * `clickableKeys` is exactly the set of cells the server's frontier names —
 * never more (no speculative cells) and never less (every offered
 * attachment is reachable by click).
 */
export interface GridView {
  revision: number;
  dimension: number;
  cells: CellView[];
  cellsByKey: Map<string, CellView>;
  clickableKeys: Set<string>;
  /** Keys of cells on the active z slice (all keys for 2D sessions). */
  visibleKeys: Set<string>;
  terminal: boolean;
  bounds: GridBounds | null;
  /** Inclusive z extent of the session content; null for 2D. */
  zRange: { min: number; max: number } | null;
  /** The exact server bytes this view was built from. */
  raw: { assembly: string; frontier: string; constrained: string };
}

/** Thrown when the three reads straddle a mutation; callers re-poll. */
export class RevisionSkew extends Error {
  constructor(revisions: number[]) {
    super(`snapshot revisions disagree: ${revisions.join(', ')}`);
    this.name = 'RevisionSkew';
  }
}

/**
 * Reshape one revision's assembly, frontier, and constrained-cell responses
 * into a renderable grid.
 *
 * Cell precedence is tile > frontier > constrained: an occupied cell renders
 * its tile even if an edge case also lists it elsewhere, and a cell the
 * frontier offers stays clickable even when it lies inside a constrained
 * region (diffusion-unrestricted sessions report enclosed cells too; the
 * hatching then marks the region without stealing the click).
 */
export function buildGridView(
  assembly: Snapshot<AssemblyResponse>,
  frontier: Snapshot<FrontierResponse>,
  constrained: Snapshot<ConstrainedResponse>,
  camera?: Camera,
): GridView {
  const revisions = [
    assembly.body.revision,
    frontier.body.revision,
    constrained.body.revision,
  ];
  if (revisions[0] !== revisions[1] || revisions[1] !== revisions[2]) {
    throw new RevisionSkew(revisions);
  }

  const constrainedKeys = new Set(constrained.body.cells.map(cellKey));
  const cellsByKey = new Map<string, CellView>();

  for (const placement of assembly.body.placements) {
    const key = cellKey(placement.pos);
    cellsByKey.set(key, {
      key,
      pos: placement.pos,
      state: 'tile',
      tile: placement.tile,
      choices: [],
      hatched: constrainedKeys.has(key),
    });
  }

  const clickableKeys = new Set<string>();
  for (const option of frontier.body.frontier) {
    const key = cellKey(option.pos);
    clickableKeys.add(key);
    const existing = cellsByKey.get(key);
    if (existing && existing.state === 'frontier') {
      existing.choices.push(option);
    } else {
      cellsByKey.set(key, {
        key,
        pos: option.pos,
        state: 'frontier',
        tile: null,
        choices: [option],
        hatched: constrainedKeys.has(key),
      });
    }
  }

  for (const cell of constrained.body.cells) {
    const key = cellKey(cell);
    if (!cellsByKey.has(key)) {
      cellsByKey.set(key, {
        key,
        pos: cell,
        state: 'constrained',
        tile: null,
        choices: [],
        hatched: true,
      });
    }
  }

  const cells = [...cellsByKey.values()];
  const dimension = assembly.body.dimension;
  const sliceZ = dimension >= 3 ? (camera?.sliceZ ?? 0) : null;
  const visibleKeys = new Set<string>();
  for (const cell of cells) {
    if (sliceZ === null || cell.pos[2] === sliceZ) {
      visibleKeys.add(cell.key);
    }
  }

  return {
    revision: revisions[0] ?? 0,
    dimension,
    cells,
    cellsByKey,
    clickableKeys,
    visibleKeys,
    terminal: frontier.body.frontier.length === 0,
    bounds: computeBounds(cells),
    zRange: dimension >= 3 ? computeZRange(cells) : null,
    raw: {
      assembly: assembly.text,
      frontier: frontier.text,
      constrained: constrained.text,
    },
  };
}

/** True when a click on this cell may fire an attachment right now. */
export function isClickable(view: GridView, key: string): boolean {
  return view.clickableKeys.has(key);
}

/** The attachment choices the server offers at a cell (empty if none). */
export function choicesAt(view: GridView, key: string): PlacementObj[] {
  return view.cellsByKey.get(key)?.choices ?? [];
}

function computeBounds(cells: CellView[]): GridBounds | null {
  if (cells.length === 0) return null;
  const first = cells[0]!;
  const min = [...first.pos];
  const max = [...first.pos];
  for (const cell of cells) {
    cell.pos.forEach((v, i) => {
      if (v < (min[i] ?? v)) min[i] = v;
      if (v > (max[i] ?? v)) max[i] = v;
    });
  }
  return { min, max };
}

function computeZRange(
  cells: CellView[],
): { min: number; max: number } | null {
  let lo: number | null = null;
  let hi: number | null = null;
  for (const cell of cells) {
    const z = cell.pos[2];
    if (z === undefined) continue;
    if (lo === null || z < lo) lo = z;
    if (hi === null || z > hi) hi = z;
  }
  return lo === null || hi === null ? null : { min: lo, max: hi };
}

// ---------------------------------------------------------------------------
// Window movies
// ---------------------------------------------------------------------------

/**
 * True iff shifting every entry of `shifted` back by `c` reproduces `base`
 * exactly — same length, same edge order, same glues. This is the client
 * side of the matching-pair scan: the server extracts both movies, the
 * comparison is plain JSON arithmetic, and no assembly state is involved.
 */
export function moviesMatch(
  base: MovieResponse,
  shifted: MovieResponse,
  c: Point,
): boolean {
  if (base.entries.length !== shifted.entries.length) return false;
  for (let i = 0; i < base.entries.length; i += 1) {
    const a = base.entries[i]!;
    const b = shifted.entries[i]!;
    if (
      cellKey(subPoints(b.from, c)) !== cellKey(a.from) ||
      cellKey(subPoints(b.to, c)) !== cellKey(a.to) ||
      b.glue[0] !== a.glue[0] ||
      b.glue[1] !== a.glue[1]
    ) {
      return false;
    }
  }
  return true;
}

/** A translation under which the window's movie recurs. */
export interface MatchCandidate {
  c: Point;
  window: WindowObj;
}

/** The window-inspector panel: one movie plus any scan results. */
export interface MoviePanel {
  window: WindowObj;
  movie: MovieResponse;
  matches: MatchCandidate[];
}

// ---------------------------------------------------------------------------
// Splice preview
// ---------------------------------------------------------------------------

/**
 * The ghost overlay for a splice preview: the full previewed placement list
 * plus the keys that differ from the live assembly (cells the splice would
 * add or repaint). The preview never touches the session.
 */
export interface GhostOverlay {
  steps: PlacementObj[];
  placements: PlacementObj[];
  changedKeys: Set<string>;
}

export function buildGhostOverlay(
  preview: SplicePreviewResponse,
  current: AssemblyResponse,
): GhostOverlay {
  const occupied = new Map<string, string>();
  for (const placement of current.placements) {
    occupied.set(cellKey(placement.pos), placement.tile);
  }
  const changedKeys = new Set<string>();
  for (const placement of preview.placements) {
    const key = cellKey(placement.pos);
    if (occupied.get(key) !== placement.tile) {
      changedKeys.add(key);
    }
  }
  return { steps: preview.steps, placements: preview.placements, changedKeys };
}

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/** One-line inline rendering of a service error detail. */
export function describeError(detail: ApiErrorDetail): string {
  let text = `${detail.kind}: ${detail.message}`;
  if (detail.line !== undefined) text += ` (line ${detail.line})`;
  if (detail.current !== undefined) {
    text += ` (server at revision ${detail.current})`;
  }
  return text;
}
