/** Single-page teaching workbench.
 *
 * One UI thread, one state object, and one rule for mutations: send the
 * request, then render whatever the server says now.  Iteration and
 * revision counters on screen are never advanced locally; a mutation that
 * is still in flight leaves the screen in its pre-mutation state with the
 * controls disabled (no optimistic updates).
 */

import { ApiClient, ApiError } from "./api.js";
import { diffView, type DiffViewModel } from "./diffview.js";
import {
  adoptSample,
  retrainAndRecord,
  submitCropSelection,
} from "./flow.js";
import { historyStrip, type IterationEntry } from "./history.js";
import { failureBadge, portfolioGrid } from "./portfolio.js";
import {
  chooseZoom,
  isFullSample,
  rectToPixels,
  sizeIssue,
  snapDragToTiles,
  type PixelPoint,
} from "./rect.js";
import { paintTextGrid, parseTextGrid, type TextGrid } from "./render.js";
import type { SessionState, TileRect } from "./types.js";

interface UiState {
  sessions: string[];
  sid: string | null;
  session: SessionState | null;
  history: IterationEntry[];
  activeSample: string | null;
  sampleGrid: TextGrid | null;
  zoom: number;
  drag: { start: PixelPoint; current: PixelPoint } | null;
  selection: TileRect | null;
  diff: DiffViewModel | null;
  diffPick: number[];
  busy: boolean;
  notice: string | null;
}

const CROP_VIEW_PX = 480;

export function mountApp(root: HTMLElement, client = new ApiClient("")): void {
  const state: UiState = {
    sessions: [],
    sid: null,
    session: null,
    history: [],
    activeSample: null,
    sampleGrid: null,
    zoom: 8,
    drag: null,
    selection: null,
    diff: null,
    diffPick: [],
    busy: false,
    notice: null,
  };

  root.innerHTML = `
    <header>
      <h1>gridloom teach</h1>
      <span id="notice" class="notice" hidden></span>
    </header>
    <section id="session-bar" class="bar">
      <select id="session-select"><option value="">choose session…</option></select>
      <form id="new-session" class="inline">
        <input id="new-id" placeholder="new session id" size="12">
        <label>n <input id="new-n" type="number" value="3" min="2" max="5" size="2"></label>
        <label><input id="new-wrap" type="checkbox" checked> wrap input</label>
        <button>create</button>
      </form>
    </section>
    <main hidden id="workbench">
      <section id="status" class="bar"></section>
      <section class="columns">
        <div class="col">
          <h2>examples</h2>
          <ul id="examples"></ul>
          <h2>actions</h2>
          <div class="bar">
            <button id="retrain">retrain</button>
            <form id="portfolio-form" class="inline">
              <label>count <input id="pf-count" type="number" value="6" min="1" size="2"></label>
              <label>seed <input id="pf-seed" type="number" value="0" size="6"></label>
              <label>size <input id="pf-size" type="number" value="32" min="4" size="3"></label>
              <button>generate</button>
            </form>
          </div>
          <h2>iterations</h2>
          <div id="history" class="strip"></div>
          <div id="diff-panel"></div>
        </div>
        <div class="col">
          <h2>portfolio <small id="pf-summary"></small></h2>
          <div id="portfolio" class="grid"></div>
          <h2>teach from sample <small id="crop-title"></small></h2>
          <div id="crop-wrap">
            <div id="crop-stage"></div>
            <div id="crop-controls" class="bar" hidden>
              <span id="sel-info"></span>
              <button id="crop-negative">mark as counter-example</button>
              <button id="adopt-positive" hidden>adopt whole sample</button>
              <span id="sel-error" class="error"></span>
            </div>
          </div>
        </div>
      </section>
    </main>
  `;

  const $ = <T extends HTMLElement>(sel: string): T => {
    const el = root.querySelector(sel);
    if (!el) throw new Error(`missing element ${sel}`);
    return el as T;
  };

  function notice(text: string | null): void {
    state.notice = text;
    const el = $("#notice");
    el.hidden = text === null;
    el.textContent = text ?? "";
  }

  /** Run one mutation at a time; surface conflicts; re-render only from
   * the server state the mutation returned or refetched. */
  async function mutate(work: () => Promise<void>): Promise<void> {
    if (state.busy) return;
    state.busy = true;
    notice(null);
    renderControls();
    try {
      await work();
    } catch (err) {
      if (err instanceof ApiError) {
        notice(err.conflict ? `busy or stale: ${err.message}` : err.message);
      } else {
        notice(String(err));
      }
    } finally {
      state.busy = false;
      renderControls();
    }
  }

  async function refreshSessions(): Promise<void> {
    state.sessions = (await client.listSessions()).sessions;
    const select = $<HTMLSelectElement>("#session-select");
    const current = state.sid ?? "";
    select.innerHTML =
      `<option value="">choose session…</option>` +
      state.sessions
        .map((s) => `<option value="${s}"${s === current ? " selected" : ""}>${s}</option>`)
        .join("");
  }

  async function openSession(sid: string): Promise<void> {
    state.sid = sid;
    state.session = await client.sessionState(sid);
    state.history = [];
    if (state.session.validity_digest !== null) {
      state.history = [
        {
          iteration: state.session.iteration,
          validity_digest: state.session.validity_digest,
        },
      ];
    }
    state.activeSample = null;
    state.sampleGrid = null;
    state.selection = null;
    state.diff = null;
    state.diffPick = [];
    renderAll();
  }

  async function refetchState(): Promise<void> {
    if (!state.sid) return;
    state.session = await client.sessionState(state.sid);
    renderAll();
  }

  function renderStatus(): void {
    const s = state.session;
    if (!s) return;
    const digest = s.validity_digest ? s.validity_digest.slice(0, 12) : "—";
    $("#status").innerHTML = `
      <b>${s.id}</b>
      <span>n=${s.pattern.n}</span>
      <span>strategy=${s.strategy}</span>
      <span class="chip chip-${s.training_status}">${s.training_status}</span>
      <span>iteration ${s.iteration}</span>
      <span>revision ${s.revision}</span>
      <span title="validity digest">rules ${digest}</span>
    `;
  }

  function renderExamples(): void {
    const s = state.session;
    if (!s) return;
    $("#examples").innerHTML = s.examples
      .map(
        (e) => `
        <li>
          <span class="chip chip-${e.label}">${e.label}</span>
          <b>${e.id}</b> ${e.width}×${e.height}
          <small>${e.origin.kind}${e.origin.sample ? ` of ${e.origin.sample}` : ""}</small>
          <button data-delete="${e.id}" ${state.busy ? "disabled" : ""}>remove</button>
        </li>`,
      )
      .join("");
    for (const btn of root.querySelectorAll<HTMLButtonElement>("[data-delete]")) {
      btn.onclick = () =>
        mutate(async () => {
          state.session = await client.deleteExample(state.sid!, btn.dataset.delete!);
          renderAll();
        });
    }
  }

  function renderHistory(): void {
    const strip = historyStrip(state.history);
    $("#history").innerHTML =
      strip
        .map(
          (e) => `
          <button class="iter${e.digestChanged ? " changed" : ""}${
            state.diffPick.includes(e.iteration) ? " picked" : ""
          }" data-iter="${e.iteration}"
            title="digest ${e.validity_digest.slice(0, 12)}${
              e.digestChanged ? " (rules changed)" : ""
            }">
            ${e.iteration}${e.digestChanged ? "●" : ""}
          </button>`,
        )
        .join("") +
      (strip.length ? `<small>pick two iterations to diff</small>` : "");
    for (const btn of root.querySelectorAll<HTMLButtonElement>("[data-iter]")) {
      btn.onclick = () => pickDiff(Number(btn.dataset.iter));
    }
  }

  function pickDiff(iteration: number): void {
    state.diffPick = [...state.diffPick, iteration].slice(-2);
    renderHistory();
    if (state.diffPick.length === 2) {
      const [a, b] = state.diffPick as [number, number];
      void client
        .diff(state.sid!, a, b)
        .then((payload) => {
          state.diff = diffView(payload);
          renderDiff();
        })
        .catch((err) => notice(String(err)));
    }
  }

  function thumbHtml(colors: string[][]): string {
    const n = colors.length;
    const cells = colors
      .flat()
      .map((c) => `<i style="background:${c}"></i>`)
      .join("");
    return `<span class="thumb" style="grid-template-columns:repeat(${n},10px)">${cells}</span>`;
  }

  function renderDiff(): void {
    const d = state.diff;
    const panel = $("#diff-panel");
    if (!d) {
      panel.innerHTML = "";
      return;
    }
    const rows = d.rows
      .map(
        (r) => `
        <div class="diff-row diff-${r.kind}">
          <b>${r.sign}</b>
          ${thumbHtml(r.a.colors)}
          <span class="arrow" title="${r.direction}">${r.arrow}</span>
          ${thumbHtml(r.b.colors)}
        </div>`,
      )
      .join("");
    panel.innerHTML = `
      <h3>rules ${d.a} → ${d.b}: +${d.addedCount} −${d.removedCount}</h3>
      ${d.empty ? "<p>no rule changes</p>" : rows}
    `;
  }

  function renderPortfolio(): void {
    const s = state.session;
    const grid = $("#portfolio");
    if (!s || !s.latest_portfolio) {
      grid.innerHTML = "<p>no portfolio yet — retrain, then generate</p>";
      $("#pf-summary").textContent = "";
      return;
    }
    const model = portfolioGrid(s.latest_portfolio);
    $("#pf-summary").textContent = model.summary;
    grid.innerHTML = model.tiles
      .map((t) =>
        t.kind === "sample"
          ? `<figure class="tile" data-sample="${t.sid}">
               <canvas data-thumb="${t.sid}"></canvas>
               <figcaption>${t.sid} <small>seed ${t.seed}</small></figcaption>
             </figure>`
          : `<figure class="tile failure">
               <div class="badge">${failureBadge(t)}</div>
               <figcaption>${t.sid} <small>seed ${t.seed}</small></figcaption>
             </figure>`,
      )
      .join("");
    for (const fig of grid.querySelectorAll<HTMLElement>("[data-sample]")) {
      fig.onclick = () => void openSample(fig.dataset.sample!);
    }
    for (const canvas of grid.querySelectorAll<HTMLCanvasElement>("[data-thumb]")) {
      void client
        .sampleText(s.id, canvas.dataset.thumb!)
        .then((text) => paintTextGrid(canvas, parseTextGrid(text)))
        .catch(() => canvas.replaceWith("(preview unavailable)"));
    }
  }

  async function openSample(sampleId: string): Promise<void> {
    if (!state.sid) return;
    const text = await client.sampleText(state.sid, sampleId);
    state.activeSample = sampleId;
    state.sampleGrid = parseTextGrid(text);
    state.zoom = chooseZoom(CROP_VIEW_PX, state.sampleGrid.width);
    state.selection = null;
    renderCrop();
  }

  function renderCrop(): void {
    const stage = $("#crop-stage");
    const controls = $("#crop-controls");
    $("#crop-title").textContent = state.activeSample ?? "";
    if (!state.activeSample || !state.sampleGrid) {
      stage.innerHTML = "<p>click a portfolio sample to teach from it</p>";
      controls.hidden = true;
      return;
    }
    const grid = state.sampleGrid;
    const z = state.zoom;
    stage.innerHTML = `
      <div id="crop-surface" style="width:${grid.width * z}px;height:${grid.height * z}px">
        <canvas id="crop-canvas"></canvas>
        <div id="crop-rect" hidden></div>
      </div>
    `;
    const canvas = $<HTMLCanvasElement>("#crop-canvas");
    paintTextGrid(canvas, grid);
    canvas.style.width = `${grid.width * z}px`;
    canvas.style.height = `${grid.height * z}px`;
    wireDrag($("#crop-surface"));
    controls.hidden = false;
    renderSelection();
  }

  function wireDrag(surface: HTMLElement): void {
    const point = (ev: PointerEvent): PixelPoint => {
      const box = surface.getBoundingClientRect();
      return { x: ev.clientX - box.left, y: ev.clientY - box.top };
    };
    surface.onpointerdown = (ev) => {
      surface.setPointerCapture(ev.pointerId);
      state.drag = { start: point(ev), current: point(ev) };
    };
    surface.onpointermove = (ev) => {
      if (!state.drag || !state.sampleGrid) return;
      state.drag.current = point(ev);
      state.selection = snapDragToTiles(
        state.drag.start,
        state.drag.current,
        state.zoom,
        state.sampleGrid.width,
        state.sampleGrid.height,
      );
      renderSelection();
    };
    surface.onpointerup = () => {
      state.drag = null;
      renderSelection();
    };
  }

  function renderSelection(): void {
    const overlay = root.querySelector<HTMLElement>("#crop-rect");
    const info = $("#sel-info");
    const error = $("#sel-error");
    const cropBtn = $<HTMLButtonElement>("#crop-negative");
    const adoptBtn = $<HTMLButtonElement>("#adopt-positive");
    const grid = state.sampleGrid;
    const rect = state.selection;
    if (!overlay || !grid) return;
    if (!rect) {
      overlay.hidden = true;
      info.textContent = "drag to select tiles";
      error.textContent = "";
      cropBtn.disabled = true;
      adoptBtn.hidden = true;
      return;
    }
    const px = rectToPixels(rect, state.zoom);
    overlay.hidden = false;
    overlay.style.left = `${px.left}px`;
    overlay.style.top = `${px.top}px`;
    overlay.style.width = `${px.width}px`;
    overlay.style.height = `${px.height}px`;
    const n = state.session?.pattern.n ?? 2;
    const issue = sizeIssue(rect, n, "negative");
    overlay.classList.toggle("invalid", issue !== null);
    info.textContent = `${rect.w}×${rect.h} tiles at (${rect.x}, ${rect.y})`;
    error.textContent = issue ?? "";
    cropBtn.disabled = state.busy || issue !== null;
    adoptBtn.hidden = !isFullSample(rect, grid.width, grid.height);
    adoptBtn.disabled = state.busy;
  }

  function renderControls(): void {
    $<HTMLButtonElement>("#retrain").disabled = state.busy || !state.sid;
    for (const btn of root.querySelectorAll<HTMLButtonElement>("form button")) {
      btn.disabled = state.busy;
    }
    renderSelection();
  }

  function renderAll(): void {
    $("#workbench").hidden = state.session === null;
    renderStatus();
    renderExamples();
    renderHistory();
    renderDiff();
    renderPortfolio();
    renderCrop();
    renderControls();
  }

  // -- event wiring -----------------------------------------------------------

  $<HTMLSelectElement>("#session-select").onchange = (ev) => {
    const sid = (ev.target as HTMLSelectElement).value;
    if (sid) void openSession(sid).catch((err) => notice(String(err)));
  };

  $<HTMLFormElement>("#new-session").onsubmit = (ev) => {
    ev.preventDefault();
    const id = $<HTMLInputElement>("#new-id").value.trim();
    void mutate(async () => {
      const created = await client.createSession({
        id: id || undefined,
        n: Number($<HTMLInputElement>("#new-n").value),
        wrap_input: $<HTMLInputElement>("#new-wrap").checked,
      });
      await refreshSessions();
      await openSession(created.id);
    });
  };

  $<HTMLButtonElement>("#retrain").onclick = () =>
    mutate(async () => {
      const { summary, history } = await retrainAndRecord(
        client,
        state.sid!,
        state.history,
      );
      state.history = history;
      notice(
        `iteration ${summary.iteration}: ${summary.patterns} patterns, ` +
          `${summary.valid_triples} rules`,
      );
      await refetchState();
    });

  $<HTMLFormElement>("#portfolio-form").onsubmit = (ev) => {
    ev.preventDefault();
    void mutate(async () => {
      const size = Number($<HTMLInputElement>("#pf-size").value);
      await client.generatePortfolio(state.sid!, {
        count: Number($<HTMLInputElement>("#pf-count").value),
        seed: Number($<HTMLInputElement>("#pf-seed").value),
        width: size,
        height: size,
      });
      await refetchState();
    });
  };

  $<HTMLButtonElement>("#crop-negative").onclick = () =>
    mutate(async () => {
      const rect = state.selection;
      const s = state.session;
      if (!rect || !s || !state.activeSample) return;
      const outcome = await submitCropSelection(
        client,
        s.id,
        state.activeSample,
        rect,
        s.pattern.n,
        "negative",
      );
      if (!outcome.sent) {
        $("#sel-error").textContent = outcome.error ?? "";
        return;
      }
      state.session = outcome.state ?? s;
      state.selection = null;
      notice(`added ${outcome.example?.id} (counter-example)`);
      renderAll();
    });

  $<HTMLButtonElement>("#adopt-positive").onclick = () =>
    mutate(async () => {
      const rect = state.selection;
      const s = state.session;
      const grid = state.sampleGrid;
      if (!rect || !s || !grid || !state.activeSample) return;
      const outcome = await adoptSample(
        client,
        s.id,
        state.activeSample,
        rect,
        grid.width,
        grid.height,
      );
      if (!outcome.sent) {
        $("#sel-error").textContent = outcome.error ?? "";
        return;
      }
      state.session = outcome.state ?? s;
      state.selection = null;
      notice(`added ${outcome.example?.id} (positive)`);
      renderAll();
    });

  void refreshSessions().catch((err) => notice(String(err)));
}
