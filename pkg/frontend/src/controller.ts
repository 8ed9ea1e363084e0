/**
 * Session controller: the single writer of UI state.
 *
 * Every mutation round-trips through the service and is followed by a full
 * re-read before anything repaints — there is no optimistic update and no
 * client-side simulation, so the grid can never show an assembly the engine
 * did not produce. Mutations carry the revision they were computed against;
 * when the server answers 409 the controller refreshes and retries once
 * against the fresh revision.
 */

import { ApiError, SessionApi, Snapshot } from './api.js';
import type {
  AssemblyResponse,
  ConstrainedResponse,
  FrontierResponse,
  PlacementObj,
  Point,
  SystemDocumentObj,
  TraceDocumentObj,
  WindowObj,
} from './types.js';
import {
  buildGhostOverlay,
  buildGridView,
  Camera,
  cellKey,
  defaultCamera,
  describeError,
  GhostOverlay,
  GridView,
  MatchCandidate,
  MoviePanel,
  moviesMatch,
  RevisionSkew,
  translateWindow,
} from './viewModel.js';

// ---------------------------------------------------------------------------
// State shapes
// ---------------------------------------------------------------------------

/** What the UI is looking at and how. */
export interface ViewState {
  sessionId: string | null;
  /** Revision of the last server response the view was built from. */
  revision: number;
  camera: Camera;
  selectedWindow: WindowObj | null;
  highlightedPlacement: PlacementObj | null;
}

/** Result of a click on the grid. */
export interface AttachOutcome {
  applied: boolean;
  /** Refusal or failure kind when `applied` is false. */
  reason?: string;
}

const REFRESH_ATTEMPTS = 5;

// ---------------------------------------------------------------------------
// Controller
// ---------------------------------------------------------------------------

export class SessionController {
  readonly api: SessionApi;

  state: ViewState = {
    sessionId: null,
    revision: 0,
    camera: defaultCamera(),
    selectedWindow: null,
    highlightedPlacement: null,
  };

  /** The current renderable grid, or null before a system is loaded. */
  view: GridView | null = null;

  /** The exact server responses the current view was built from. */
  snapshots: {
    assembly: Snapshot<AssemblyResponse>;
    frontier: Snapshot<FrontierResponse>;
    constrained: Snapshot<ConstrainedResponse>;
  } | null = null;

  /** Window-inspector panel, when a window has been inspected. */
  moviePanel: MoviePanel | null = null;

  /** Splice-preview ghost overlay, when a preview is active. */
  ghost: GhostOverlay | null = null;

  /** Inline error line (parse failures, rejected mutations), or null. */
  lastError: string | null = null;

  /** Name reported by the loaded system document. */
  systemName: string | null = null;

  /** Local mirror of how many steps the undo button can remove. */
  undoDepth = 0;

  constructor(api: SessionApi) {
    this.api = api;
  }

  // -- session lifecycle ----------------------------------------------------

  /**
   * Parse a system document and open a session for it. Malformed text and
   * documents the server rejects both land in `lastError` for inline
   * display; on success the seed and its frontier are fetched and rendered.
   */
  async loadSystem(documentText: string): Promise<boolean> {
    this.lastError = null;
    let system: SystemDocumentObj;
    try {
      system = JSON.parse(documentText) as SystemDocumentObj;
    } catch (err) {
      this.lastError = `parse-error: ${(err as Error).message}`;
      return false;
    }
    try {
      const info = await this.api.createSession(system);
      this.state.sessionId = info.sessionId;
      this.state.revision = info.revision;
      this.systemName = info.name;
    } catch (err) {
      this.lastError = errorLine(err);
      return false;
    }
    this.moviePanel = null;
    this.ghost = null;
    this.undoDepth = 0;
    await this.refresh();
    return true;
  }

  async closeSession(): Promise<void> {
    if (this.state.sessionId !== null) {
      await this.api.deleteSession(this.state.sessionId);
      this.state.sessionId = null;
      this.view = null;
      this.snapshots = null;
    }
  }

  // -- reads ----------------------------------------------------------------

  /**
   * Re-read assembly, frontier, and constrained cells and rebuild the view.
   * The three reads must agree on a revision; if a mutation lands between
   * them the build throws and the reads repeat.
   */
  async refresh(): Promise<GridView> {
    const sessionId = this.requireSession();
    let lastSkew: RevisionSkew | null = null;
    for (let attempt = 0; attempt < REFRESH_ATTEMPTS; attempt += 1) {
      const assembly = await this.api.assembly(sessionId);
      const frontier = await this.api.frontier(sessionId);
      const constrained = await this.api.constrained(sessionId);
      try {
        const view = buildGridView(
          assembly,
          frontier,
          constrained,
          this.state.camera,
        );
        this.snapshots = { assembly, frontier, constrained };
        this.view = view;
        this.state.revision = view.revision;
        return view;
      } catch (err) {
        if (err instanceof RevisionSkew) {
          lastSkew = err;
          continue;
        }
        throw err;
      }
    }
    throw lastSkew ?? new Error('refresh failed');
  }

  // -- mutations ------------------------------------------------------------

  /**
   * Attach one of the server's offered placements. Clicks on anything the
   * current frontier does not offer are refused locally without a network
   * call — occupied and constrained cells are simply not clickable. The
   * request carries the view's revision; a stale-revision answer triggers
   * one refresh-and-retry, after which the click must still be offered.
   */
  async clickAttach(placement: PlacementObj): Promise<AttachOutcome> {
    this.lastError = null;
    const refused = this.refuseLocally(placement);
    if (refused) return refused;

    const sessionId = this.requireSession();
    try {
      await this.api.attach(sessionId, placement, this.state.revision);
    } catch (err) {
      if (err instanceof ApiError && err.detail.kind === 'stale-revision') {
        await this.refresh();
        return this.retryAttach(sessionId, placement);
      }
      return this.failMutation(err);
    }
    this.undoDepth += 1;
    await this.refresh();
    return { applied: true };
  }

  /** Remove the most recent attachment and re-read the session. */
  async undo(): Promise<AttachOutcome> {
    this.lastError = null;
    const sessionId = this.requireSession();
    try {
      await this.api.undo(sessionId, this.state.revision);
    } catch (err) {
      if (err instanceof ApiError && err.detail.kind === 'stale-revision') {
        await this.refresh();
        try {
          await this.api.undo(sessionId, this.state.revision);
        } catch (retryErr) {
          return this.failMutation(retryErr);
        }
      } else {
        return this.failMutation(err);
      }
    }
    this.undoDepth = Math.max(0, this.undoDepth - 1);
    await this.refresh();
    return { applied: true };
  }

  private refuseLocally(placement: PlacementObj): AttachOutcome | null {
    const view = this.view;
    if (view === null) {
      return { applied: false, reason: 'no-session' };
    }
    const key = cellKey(placement.pos);
    if (!view.clickableKeys.has(key)) {
      return { applied: false, reason: 'not-clickable' };
    }
    const offered = view.cellsByKey
      .get(key)!
      .choices.some((p) => p.tile === placement.tile);
    if (!offered) {
      return { applied: false, reason: 'not-offered' };
    }
    return null;
  }

  private async retryAttach(
    sessionId: string,
    placement: PlacementObj,
  ): Promise<AttachOutcome> {
    const refused = this.refuseLocally(placement);
    if (refused) return refused;
    try {
      await this.api.attach(sessionId, placement, this.state.revision);
    } catch (err) {
      return this.failMutation(err);
    }
    this.undoDepth += 1;
    await this.refresh();
    return { applied: true };
  }

  private failMutation(err: unknown): AttachOutcome {
    this.lastError = errorLine(err);
    const reason = err instanceof ApiError ? err.detail.kind : 'error';
    return { applied: false, reason };
  }

  // -- window inspection ----------------------------------------------------

  /** Extract the session trace's movie at a window and open the panel. */
  async inspectWindow(window: WindowObj): Promise<MoviePanel> {
    const sessionId = this.requireSession();
    this.lastError = null;
    try {
      const movie = await this.api.movie(sessionId, window);
      this.state.selectedWindow = window;
      this.moviePanel = { window, movie, matches: [] };
      return this.moviePanel;
    } catch (err) {
      this.lastError = errorLine(err);
      throw err;
    }
  }

  /**
   * Scan candidate translations for ones under which the selected window's
   * movie recurs: each candidate's translated window is sent to the movie
   * endpoint and the two entry lists are compared client-side, glue for
   * glue. Matches land in the panel for highlighting.
   */
  async scanMatches(candidates: Point[]): Promise<MatchCandidate[]> {
    const panel = this.moviePanel;
    if (panel === null) throw new Error('no window inspected');
    const sessionId = this.requireSession();
    const matches: MatchCandidate[] = [];
    for (const c of candidates) {
      const shiftedWindow = translateWindow(panel.window, c);
      const shifted = await this.api.movie(sessionId, shiftedWindow);
      if (moviesMatch(panel.movie, shifted, c)) {
        matches.push({ c, window: shiftedWindow });
      }
    }
    panel.matches = matches;
    return matches;
  }

  /**
   * Preview splicing another trace into this session at the selected
   * window. The result arrives as a placement list and is shown as a ghost
   * overlay; the session itself is untouched.
   */
  async previewSplice(
    traceB: TraceDocumentObj | string,
    c: Point,
    mode: 'full' | 'bond_forming' = 'full',
    strict = false,
  ): Promise<GhostOverlay> {
    const sessionId = this.requireSession();
    const window = this.state.selectedWindow;
    if (window === null) throw new Error('no window selected');
    const snapshots = this.snapshots;
    if (snapshots === null) throw new Error('no assembly loaded');
    this.lastError = null;

    let traceObj: TraceDocumentObj;
    if (typeof traceB === 'string') {
      try {
        traceObj = JSON.parse(traceB) as TraceDocumentObj;
      } catch (err) {
        this.lastError = `parse-error: ${(err as Error).message}`;
        throw err;
      }
    } else {
      traceObj = traceB;
    }

    try {
      const preview = await this.api.splicePreview(sessionId, {
        traceB: traceObj,
        window,
        c,
        mode,
        strict,
      });
      this.ghost = buildGhostOverlay(preview, snapshots.assembly.body);
      return this.ghost;
    } catch (err) {
      this.lastError = errorLine(err);
      throw err;
    }
  }

  clearGhost(): void {
    this.ghost = null;
  }

  // -- camera and highlight -------------------------------------------------

  pan(dx: number, dy: number): void {
    this.state.camera.panX += dx;
    this.state.camera.panY += dy;
  }

  zoomBy(factor: number): void {
    const zoom = this.state.camera.zoom * factor;
    this.state.camera.zoom = Math.min(16, Math.max(1 / 16, zoom));
  }

  /** Switch the active z slice and re-filter the view — no refetch needed. */
  setSlice(z: number | null): void {
    this.state.camera.sliceZ = z;
    if (this.snapshots !== null) {
      this.view = buildGridView(
        this.snapshots.assembly,
        this.snapshots.frontier,
        this.snapshots.constrained,
        this.state.camera,
      );
    }
  }

  highlight(placement: PlacementObj | null): void {
    this.state.highlightedPlacement = placement;
  }

  // -- helpers --------------------------------------------------------------

  private requireSession(): string {
    const sessionId = this.state.sessionId;
    if (sessionId === null) throw new Error('no session open');
    return sessionId;
  }
}

function errorLine(err: unknown): string {
  if (err instanceof ApiError) return describeError(err.detail);
  return (err as Error).message;
}
