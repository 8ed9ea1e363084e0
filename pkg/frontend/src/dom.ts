/**
 * Browser wiring: render the controller's state into the page and translate
 * pointer events back into controller calls.
 *
 * This layer is deliberately dumb. It owns layout, colors, and event
 * plumbing; every fact it draws (which cells hold tiles, which are
 * clickable, which are hatched) comes from the controller's view, which in
 * turn is a reshaping of raw server responses.
 */

import type { SessionController } from './controller.js';
import type { PlacementObj, Point, WindowObj } from './types.js';
import { choicesAt } from './viewModel.js';

const CELL = 28;
const SVG_NS = 'http://www.w3.org/2000/svg';

// ---------------------------------------------------------------------------
// Mounting
// ---------------------------------------------------------------------------

/** Build the app skeleton under `root` and start rendering `controller`. */
export function mountApp(root: HTMLElement, controller: SessionController): void {
  root.innerHTML = `
    <div class="tb-layout">
      <aside class="tb-side">
        <h1>tilebench</h1>
        <section>
          <textarea id="tb-doc" rows="8" spellcheck="false"
            placeholder="paste a tilesystem/1 document"></textarea>
          <button id="tb-load">Load system</button>
          <div id="tb-error" class="tb-error" hidden></div>
        </section>
        <section id="tb-session" hidden>
          <div><b id="tb-name"></b> · revision <span id="tb-revision">0</span>
            <span id="tb-terminal" class="tb-badge" hidden>terminal</span></div>
          <button id="tb-undo">Undo</button>
          <label id="tb-slice-row" hidden>z slice
            <input id="tb-slice" type="range" step="1">
            <span id="tb-slice-value"></span>
          </label>
        </section>
        <section id="tb-inspector" hidden>
          <h2>Window inspector</h2>
          <label>lo <input id="tb-win-lo" placeholder="0,0"></label>
          <label>hi <input id="tb-win-hi" placeholder="0,0"></label>
          <button id="tb-inspect">Extract movie</button>
          <button id="tb-scan">Scan matches</button>
          <ol id="tb-movie"></ol>
          <ul id="tb-matches"></ul>
          <h2>Splice preview</h2>
          <textarea id="tb-traceb" rows="5" spellcheck="false"
            placeholder="paste a trace/1 document"></textarea>
          <label>c <input id="tb-splice-c" placeholder="1,0"></label>
          <button id="tb-preview">Preview</button>
          <button id="tb-ghost-clear">Clear ghost</button>
        </section>
      </aside>
      <svg id="tb-grid" class="tb-grid"></svg>
    </div>`;

  const ui = new AppDom(root, controller);
  ui.wire();
  ui.sync();
}

// ---------------------------------------------------------------------------
// App shell
// ---------------------------------------------------------------------------

class AppDom {
  private readonly controller: SessionController;
  private readonly el: Record<string, HTMLElement>;
  private readonly svg: SVGSVGElement;
  private chooser: HTMLElement | null = null;

  constructor(root: HTMLElement, controller: SessionController) {
    this.controller = controller;
    this.el = {};
    for (const id of [
      'tb-doc', 'tb-load', 'tb-error', 'tb-session', 'tb-name', 'tb-revision',
      'tb-terminal', 'tb-undo', 'tb-slice-row', 'tb-slice', 'tb-slice-value',
      'tb-inspector', 'tb-win-lo', 'tb-win-hi', 'tb-inspect', 'tb-scan',
      'tb-movie', 'tb-matches', 'tb-traceb', 'tb-splice-c', 'tb-preview',
      'tb-ghost-clear',
    ]) {
      this.el[id] = root.querySelector<HTMLElement>(`#${id}`)!;
    }
    this.svg = root.querySelector<SVGSVGElement>('#tb-grid')!;
  }

  wire(): void {
    this.el['tb-load']!.addEventListener('click', () => {
      void this.run(async () => {
        const text = (this.el['tb-doc'] as HTMLTextAreaElement).value;
        await this.controller.loadSystem(text);
      });
    });
    this.el['tb-undo']!.addEventListener('click', () => {
      void this.run(() => this.controller.undo());
    });
    this.el['tb-slice']!.addEventListener('input', () => {
      const z = Number((this.el['tb-slice'] as HTMLInputElement).value);
      this.controller.setSlice(z);
      this.sync();
    });
    this.el['tb-inspect']!.addEventListener('click', () => {
      void this.run(async () => {
        const window = this.readWindow();
        if (window) await this.controller.inspectWindow(window);
      });
    });
    this.el['tb-scan']!.addEventListener('click', () => {
      void this.run(async () => {
        const dimension = this.controller.view?.dimension ?? 2;
        await this.controller.scanMatches(axisCandidates(dimension));
      });
    });
    this.el['tb-preview']!.addEventListener('click', () => {
      void this.run(async () => {
        const text = (this.el['tb-traceb'] as HTMLTextAreaElement).value;
        const c = parsePoint(
          (this.el['tb-splice-c'] as HTMLInputElement).value,
        );
        if (c) await this.controller.previewSplice(text, c);
      });
    });
    this.el['tb-ghost-clear']!.addEventListener('click', () => {
      this.controller.clearGhost();
      this.sync();
    });

    // Pan by dragging, zoom with the wheel.
    let drag: { x: number; y: number } | null = null;
    this.svg.addEventListener('pointerdown', (event) => {
      drag = { x: event.clientX, y: event.clientY };
    });
    this.svg.addEventListener('pointermove', (event) => {
      if (drag === null) return;
      this.controller.pan(event.clientX - drag.x, event.clientY - drag.y);
      drag = { x: event.clientX, y: event.clientY };
      this.sync();
    });
    this.svg.addEventListener('pointerup', () => {
      drag = null;
    });
    this.svg.addEventListener('wheel', (event) => {
      event.preventDefault();
      this.controller.zoomBy(event.deltaY < 0 ? 1.2 : 1 / 1.2);
      this.sync();
    });
  }

  /** Run a controller action, then repaint everything from its state. */
  private async run(action: () => Promise<unknown>): Promise<void> {
    try {
      await action();
    } catch {
      // the controller recorded the error line; sync() shows it
    }
    this.sync();
  }

  // -- rendering ------------------------------------------------------------

  sync(): void {
    const { controller } = this;
    const error = this.el['tb-error']!;
    error.hidden = controller.lastError === null;
    error.textContent = controller.lastError ?? '';

    const hasSession = controller.state.sessionId !== null;
    this.el['tb-session']!.hidden = !hasSession;
    this.el['tb-inspector']!.hidden = !hasSession;
    if (!hasSession || controller.view === null) {
      this.svg.replaceChildren();
      return;
    }

    const view = controller.view;
    this.el['tb-name']!.textContent = controller.systemName ?? '';
    this.el['tb-revision']!.textContent = String(view.revision);
    this.el['tb-terminal']!.hidden = !view.terminal;
    (this.el['tb-undo'] as HTMLButtonElement).disabled =
      controller.undoDepth === 0;
    this.syncSlice(view.zRange);
    this.renderMoviePanel();
    this.renderGrid();
  }

  private syncSlice(zRange: { min: number; max: number } | null): void {
    const row = this.el['tb-slice-row']!;
    row.hidden = zRange === null;
    if (zRange === null) return;
    const slider = this.el['tb-slice'] as HTMLInputElement;
    slider.min = String(zRange.min);
    slider.max = String(zRange.max);
    const z = this.controller.state.camera.sliceZ ?? 0;
    slider.value = String(z);
    this.el['tb-slice-value']!.textContent = String(z);
  }

  private renderMoviePanel(): void {
    const movieList = this.el['tb-movie']!;
    const matchList = this.el['tb-matches']!;
    movieList.replaceChildren();
    matchList.replaceChildren();
    const panel = this.controller.moviePanel;
    if (panel === null) return;
    for (const entry of panel.movie.entries) {
      const item = document.createElement('li');
      item.textContent =
        `(${entry.from.join(',')}) → (${entry.to.join(',')}) ` +
        `${entry.glue[0]} (${entry.glue[1]})`;
      movieList.appendChild(item);
    }
    for (const match of panel.matches) {
      const item = document.createElement('li');
      item.textContent = `movie recurs at c = (${match.c.join(',')})`;
      matchList.appendChild(item);
    }
  }

  private renderGrid(): void {
    const view = this.controller.view!;
    const { camera } = this.controller.state;
    this.svg.replaceChildren(hatchDefs());
    this.closeChooser();

    const group = document.createElementNS(SVG_NS, 'g');
    group.setAttribute(
      'transform',
      `translate(${camera.panX + 300},${camera.panY + 300}) scale(${camera.zoom})`,
    );
    this.svg.appendChild(group);

    const highlighted = this.controller.state.highlightedPlacement;
    for (const cell of view.cells) {
      if (!view.visibleKeys.has(cell.key)) continue;
      const x = cell.pos[0]! * CELL;
      const y = -(cell.pos[1] ?? 0) * CELL; // screen y grows downward
      const rect = document.createElementNS(SVG_NS, 'rect');
      rect.setAttribute('x', String(x));
      rect.setAttribute('y', String(y));
      rect.setAttribute('width', String(CELL - 2));
      rect.setAttribute('height', String(CELL - 2));
      rect.setAttribute('class', `tb-cell tb-${cell.state}`);
      if (cell.state === 'tile') {
        rect.setAttribute('fill', tileColor(cell.tile!));
      } else if (cell.hatched) {
        // Constrained region: hatched and deliberately without a click
        // handler — the pointer cannot fire an attachment here.
        rect.setAttribute('fill', 'url(#tb-hatch)');
      } else {
        rect.setAttribute('fill', 'none');
      }
      if (
        highlighted !== null &&
        cell.key === highlighted.pos.join(',') &&
        cell.state === 'frontier'
      ) {
        rect.setAttribute('stroke-width', '3');
      }
      if (cell.state === 'frontier') {
        rect.addEventListener('click', (event) => {
          event.stopPropagation();
          this.onFrontierClick(cell.key, event);
        });
      }
      group.appendChild(rect);

      if (cell.tile !== null) {
        const label = document.createElementNS(SVG_NS, 'text');
        label.setAttribute('x', String(x + CELL / 2 - 1));
        label.setAttribute('y', String(y + CELL / 2 + 3));
        label.setAttribute('class', 'tb-label');
        label.textContent = cell.tile;
        group.appendChild(label);
      }
    }

    for (const placement of this.controller.ghost?.placements ?? []) {
      const key = placement.pos.join(',');
      if (!this.controller.ghost!.changedKeys.has(key)) continue;
      const x = placement.pos[0]! * CELL;
      const y = -(placement.pos[1] ?? 0) * CELL;
      const rect = document.createElementNS(SVG_NS, 'rect');
      rect.setAttribute('x', String(x));
      rect.setAttribute('y', String(y));
      rect.setAttribute('width', String(CELL - 2));
      rect.setAttribute('height', String(CELL - 2));
      rect.setAttribute('class', 'tb-ghost');
      rect.setAttribute('fill', tileColor(placement.tile));
      rect.setAttribute('fill-opacity', '0.35');
      group.appendChild(rect);
    }
  }

  /** Single choice attaches immediately; several open a chooser. */
  private onFrontierClick(key: string, event: MouseEvent): void {
    const view = this.controller.view;
    if (view === null) return;
    const choices = choicesAt(view, key);
    if (choices.length === 1) {
      void this.run(() => this.controller.clickAttach(choices[0]!));
      return;
    }
    this.openChooser(choices, event.clientX, event.clientY);
  }

  private openChooser(
    choices: PlacementObj[],
    x: number,
    y: number,
  ): void {
    this.closeChooser();
    const menu = document.createElement('div');
    menu.className = 'tb-chooser';
    menu.style.left = `${x}px`;
    menu.style.top = `${y}px`;
    for (const choice of choices) {
      const button = document.createElement('button');
      button.textContent = choice.tile;
      button.addEventListener('click', () => {
        this.closeChooser();
        void this.run(() => this.controller.clickAttach(choice));
      });
      menu.appendChild(button);
    }
    document.body.appendChild(menu);
    this.chooser = menu;
  }

  private closeChooser(): void {
    this.chooser?.remove();
    this.chooser = null;
  }

  private readWindow(): WindowObj | null {
    const lo = parsePoint((this.el['tb-win-lo'] as HTMLInputElement).value);
    const hi = parsePoint((this.el['tb-win-hi'] as HTMLInputElement).value);
    if (lo === null || hi === null) {
      this.controller.lastError = 'parse-error: window corners must be integer lists';
      return null;
    }
    return { box: { lo, hi } };
  }
}

// ---------------------------------------------------------------------------
// Helpers
// ---------------------------------------------------------------------------

/** Unit translations along every axis, both ways — the default scan set. */
function axisCandidates(dimension: number): Point[] {
  const candidates: Point[] = [];
  for (let axis = 0; axis < dimension; axis += 1) {
    for (const sign of [1, -1]) {
      const c = new Array(dimension).fill(0);
      c[axis] = sign;
      candidates.push(c);
    }
  }
  return candidates;
}

function parsePoint(text: string): Point | null {
  const parts = text.split(',').map((p) => p.trim());
  if (parts.length < 2 || parts.some((p) => !/^-?\d+$/.test(p))) return null;
  return parts.map(Number);
}

/** Stable, readable fill color derived from the tile id. */
function tileColor(tileId: string): string {
  let hash = 0;
  for (const ch of tileId) {
    hash = (hash * 31 + ch.charCodeAt(0)) >>> 0;
  }
  return `hsl(${hash % 360} 55% 72%)`;
}

function hatchDefs(): SVGDefsElement {
  const defs = document.createElementNS(SVG_NS, 'defs');
  const pattern = document.createElementNS(SVG_NS, 'pattern');
  pattern.setAttribute('id', 'tb-hatch');
  pattern.setAttribute('patternUnits', 'userSpaceOnUse');
  pattern.setAttribute('width', '6');
  pattern.setAttribute('height', '6');
  const stroke = document.createElementNS(SVG_NS, 'path');
  stroke.setAttribute('d', 'M0,6 L6,0');
  stroke.setAttribute('stroke', '#b33');
  stroke.setAttribute('stroke-width', '1');
  pattern.appendChild(stroke);
  defs.appendChild(pattern);
  return defs;
}
