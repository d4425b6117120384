import { ApiClient, ApiError } from "./api";
import { TileRenderer } from "./gl";
import { box, capsule, sphere } from "./meshes";
import { parseObj, type MeshData } from "./obj";
import {
  applyBreedDelta,
  applyListing,
  BUILTIN_MESHES,
  emptyGrid,
  pageCount,
  PER_PAGE_CHOICES,
  SCENES,
  selectedPair,
  setPage,
  setPerPage,
  setSaved,
  setScore,
  setTileMesh,
  setTileScene,
  tiles,
  toggleSelection,
  type GridState,
  type MeshChoice,
  type SceneId,
} from "./state";
import type { ConfigDoc, Score } from "./types";

const api = new ApiClient();
let grid: GridState = emptyGrid(4);
let config: ConfigDoc | null = null;
let busy = false; // network actions are sequential: buttons disable while in flight

interface TileGpu {
  canvas: HTMLCanvasElement;
  overlay: HTMLPreElement;
  renderer: TileRenderer;
  bundleLoaded: boolean;
}

// canvases (and their WebGL contexts) are reused across re-renders;
// browsers cap the number of live contexts per page
const tileGpus = new Map<number, TileGpu>();
const customMeshes = new Map<number, MeshData>();
const BUILTINS: Record<string, MeshData> = {
  sphere: sphere(),
  box: box(),
  capsule: capsule(),
};

const root = document.getElementById("app")!;

function toast(message: string, isError = true): void {
  const el = document.createElement("div");
  el.className = `toast${isError ? " error" : ""}`;
  el.textContent = message;
  document.body.appendChild(el);
  setTimeout(() => el.remove(), 4000);
}

async function guard<T>(work: Promise<T>): Promise<T | null> {
  busy = true;
  try {
    return await work;
  } catch (err) {
    toast(err instanceof ApiError ? `${err.status}: ${err.message}` : String(err));
    await refresh(); // roll UI state back to the service's truth
    return null;
  } finally {
    busy = false;
  }
}

async function refresh(): Promise<void> {
  try {
    const listing = await api.population(grid.page, grid.perPage);
    grid = applyListing(grid, listing);
  } catch (err) {
    if (err instanceof ApiError && err.status === 409) {
      grid = emptyGrid(grid.perPage);
    } else {
      toast(String(err));
    }
  }
  render();
}

function meshFor(id: number, choice: MeshChoice): MeshData {
  if (choice === "custom") {
    return customMeshes.get(id) ?? BUILTINS.sphere;
  }
  return BUILTINS[choice];
}

function tileGpu(id: number): TileGpu {
  let gpu = tileGpus.get(id);
  if (!gpu) {
    const canvas = document.createElement("canvas");
    canvas.width = 280;
    canvas.height = 220;
    const overlay = document.createElement("pre");
    overlay.className = "overlay";
    const renderer = new TileRenderer(canvas);
    renderer.onError = (log) => {
      overlay.textContent = log ?? "";
      overlay.style.display = log ? "block" : "none";
    };
    gpu = { canvas, overlay, renderer, bundleLoaded: false };
    tileGpus.set(id, gpu);
  }
  return gpu;
}

function syncTile(id: number, scene: SceneId, mesh: MeshChoice): TileGpu {
  const gpu = tileGpu(id);
  if (!gpu.bundleLoaded) {
    gpu.bundleLoaded = true;
    void guard(api.shader(id)).then((bundle) => {
      if (bundle) gpu.renderer.setBundle(bundle);
    });
  }
  gpu.renderer.setScene(scene);
  gpu.renderer.setMesh(meshFor(id, mesh));
  return gpu;
}

function scoreLabel(score: number): string {
  return score > 0 ? "+1" : score < 0 ? "-1" : "0";
}

function render(): void {
  root.textContent = "";
  root.appendChild(renderToolbar());
  if (grid.total === 0) {
    const hint = document.createElement("p");
    hint.className = "hint";
    hint.textContent = "No active run. Configure the settings and press Start run.";
    root.appendChild(hint);
    tileGpus.clear();
    return;
  }
  const gridEl = document.createElement("div");
  gridEl.className = `grid per${grid.perPage}`;
  for (const tile of tiles(grid)) {
    gridEl.appendChild(renderTile(tile.entry.id, tile));
  }
  root.appendChild(gridEl);
  root.appendChild(renderPager());
  const live = new Set(grid.entries.map((e) => e.id));
  for (const id of [...tileGpus.keys()]) {
    if (!live.has(id)) tileGpus.delete(id); // culled or paged out: free the context
  }
}

function renderTile(
  id: number,
  tile: ReturnType<typeof tiles>[number],
): HTMLElement {
  const el = document.createElement("div");
  el.className = `tile${tile.selected ? " selected" : ""}`;

  const head = document.createElement("div");
  head.className = "tile-head";
  head.textContent = `#${id} gen ${tile.entry.born_generation} ${tile.entry.lit ? "lit" : "unlit"}`;
  if (tile.newborn) {
    const badge = document.createElement("span");
    badge.className = "badge";
    badge.textContent = "new";
    head.appendChild(badge);
  }
  if (tile.entry.saved) {
    const badge = document.createElement("span");
    badge.className = "badge saved";
    badge.textContent = "saved";
    head.appendChild(badge);
  }
  el.appendChild(head);

  const view = document.createElement("div");
  view.className = "view";
  const gpu = syncTile(id, tile.scene, tile.mesh);
  view.appendChild(gpu.canvas);
  view.appendChild(gpu.overlay);
  el.appendChild(view);

  const controls = document.createElement("div");
  controls.className = "controls";

  const sceneSel = document.createElement("select");
  sceneSel.title = "Preview scene";
  for (const scene of SCENES) {
    const opt = document.createElement("option");
    opt.value = scene;
    opt.textContent = scene;
    opt.selected = scene === tile.scene;
    sceneSel.appendChild(opt);
  }
  sceneSel.onchange = () => {
    grid = setTileScene(grid, id, sceneSel.value as SceneId);
    render();
  };
  controls.appendChild(sceneSel);

  const meshSel = document.createElement("select");
  meshSel.title = "Custom Mesh";
  for (const mesh of [...BUILTIN_MESHES, "custom"]) {
    const opt = document.createElement("option");
    opt.value = mesh;
    opt.textContent = mesh === "custom" ? "custom (OBJ)" : mesh;
    opt.selected = mesh === tile.mesh;
    meshSel.appendChild(opt);
  }
  const fileInput = document.createElement("input");
  fileInput.type = "file";
  fileInput.accept = ".obj";
  fileInput.style.display = "none";
  fileInput.onchange = async () => {
    const file = fileInput.files?.[0];
    if (!file) return;
    try {
      customMeshes.set(id, parseObj(await file.text()));
      grid = setTileMesh(grid, id, "custom");
    } catch (err) {
      toast(`mesh rejected: ${err}`);
      grid = setTileMesh(grid, id, "sphere"); // revert
    }
    render();
  };
  meshSel.onchange = () => {
    if (meshSel.value === "custom") {
      fileInput.click();
      return;
    }
    grid = setTileMesh(grid, id, meshSel.value as MeshChoice);
    render();
  };
  controls.appendChild(meshSel);
  controls.appendChild(fileInput);

  const mkButton = (label: string, title: string, onclick: () => void, cls = "") => {
    const b = document.createElement("button");
    b.textContent = label;
    b.title = title;
    b.className = cls;
    b.onclick = onclick;
    return b;
  };
  const score = tile.entry.score;
  controls.appendChild(
    mkButton("👍", "thumbs up", () => void doScore(id, score === 1 ? 0 : 1),
             score === 1 ? "active" : ""),
  );
  controls.appendChild(
    mkButton("👎", "thumbs down", () => void doScore(id, score === -1 ? 0 : -1),
             score === -1 ? "active" : ""),
  );
  controls.appendChild(
    mkButton(tile.selected ? "deselect" : "select", "pick as a manual parent", () => {
      grid = toggleSelection(grid, id);
      render();
    }),
  );
  controls.appendChild(
    mkButton("save", "save to disk (elitism)", () => void doSave(id)),
  );
  const scoreEl = document.createElement("span");
  scoreEl.className = "score";
  scoreEl.textContent = scoreLabel(score);
  controls.appendChild(scoreEl);
  el.appendChild(controls);
  return el;
}

function renderPager(): HTMLElement {
  const el = document.createElement("div");
  el.className = "pager";
  const pages = pageCount(grid.total, grid.perPage);
  const prev = document.createElement("button");
  prev.textContent = "<";
  prev.disabled = grid.page === 0;
  prev.onclick = () => {
    grid = setPage(grid, grid.page - 1);
    void refresh();
  };
  const next = document.createElement("button");
  next.textContent = ">";
  next.disabled = grid.page >= pages - 1;
  next.onclick = () => {
    grid = setPage(grid, grid.page + 1);
    void refresh();
  };
  const label = document.createElement("span");
  label.textContent = `page ${grid.page + 1}/${pages} - ${grid.total} shaders, generation ${grid.generation}`;
  const perPageSel = document.createElement("select");
  for (const n of PER_PAGE_CHOICES) {
    const opt = document.createElement("option");
    opt.value = String(n);
    opt.textContent = `${n}/page`;
    opt.selected = n === grid.perPage;
    perPageSel.appendChild(opt);
  }
  perPageSel.onchange = () => {
    grid = setPerPage(grid, Number(perPageSel.value));
    void refresh();
  };
  el.append(prev, label, next, perPageSel);
  return el;
}

function renderToolbar(): HTMLElement {
  const bar = document.createElement("div");
  bar.className = "toolbar";

  const start = document.createElement("button");
  start.textContent = grid.total > 0 ? "Restart run" : "Start run";
  start.onclick = async () => {
    const listing = await guard(api.startRun({ mode: "random", restart: true }));
    if (listing) {
      grid = applyListing({ ...grid, page: 0 }, listing);
      tileGpus.clear();
      await refresh();
    }
  };
  bar.appendChild(start);

  const breedAuto = document.createElement("button");
  breedAuto.textContent = "Breed (tournament)";
  breedAuto.disabled = grid.total === 0 || busy;
  breedAuto.onclick = () => void doBreed(null);
  bar.appendChild(breedAuto);

  const pair = selectedPair(grid);
  const breedManual = document.createElement("button");
  breedManual.textContent = pair
    ? `Breed #${pair[0]} x #${pair[1]}`
    : "Breed selected (pick 2)";
  breedManual.disabled = pair === null || busy;
  breedManual.onclick = () => pair && void doBreed(pair);
  bar.appendChild(breedManual);

  const settings = document.createElement("button");
  settings.textContent = "Settings";
  settings.onclick = () => void openSettings();
  bar.appendChild(settings);
  return bar;
}

async function doScore(id: number, score: Score): Promise<void> {
  grid = setScore(grid, id, score);
  render();
  const ok = await guard(api.score(id, score));
  if (ok) await refresh();
}

async function doSave(id: number): Promise<void> {
  const result = await guard(api.save(id));
  if (result) {
    grid = setSaved(grid, id);
    toast(`saved to ${result.file}`, false);
    render();
  }
}

async function doBreed(pair: [number, number] | null): Promise<void> {
  const delta = await guard(pair ? api.breedManual(pair[0], pair[1]) : api.breedAuto());
  if (!delta) return;
  grid = applyBreedDelta(grid, delta.new_ids);
  await refresh();
}

async function openSettings(): Promise<void> {
  config = await guard(api.getConfig());
  if (!config) return;
  const dialog = document.createElement("dialog");
  dialog.className = "settings";
  dialog.innerHTML = `
    <form method="dialog">
      <h3>Evolution settings</h3>
      <label>offspring per generation
        <input name="offspring_count" type="number" min="2" step="2" value="${config.offspring_count}">
      </label>
      <label>mutations per offspring
        <input name="mutation_count" type="number" min="1" value="${config.mutation.mutation_count}">
      </label>
      <label>mutation strength
        <select name="strength">
          ${["low", "medium", "high"]
            .map((s) => `<option ${s === config!.mutation.strength ? "selected" : ""}>${s}</option>`)
            .join("")}
        </select>
      </label>
      <label>graph expansion
        <input name="expansion_enabled" type="checkbox" ${config.mutation.expansion_enabled ? "checked" : ""}>
      </label>
      <label>expansion probability
        <input name="expansion_probability" type="number" min="0" max="1" step="0.05"
               value="${config.mutation.expansion_probability}">
      </label>
      <label>tournament size
        <input name="tournament_size" type="number" min="2" value="${config.tournament_size}">
      </label>
      <label>lit probability
        <input name="lit_probability" type="number" min="0" max="1" step="0.05"
               value="${config.lit_probability}">
      </label>
      <menu>
        <button value="cancel">Cancel</button>
        <button value="apply" class="primary">Apply</button>
      </menu>
    </form>`;
  document.body.appendChild(dialog);
  dialog.addEventListener("close", async () => {
    if (dialog.returnValue === "apply") {
      const form = dialog.querySelector("form")!;
      const data = new FormData(form);
      const updated = await guard(
        api.putConfig({
          offspring_count: Number(data.get("offspring_count")),
          tournament_size: Number(data.get("tournament_size")),
          lit_probability: Number(data.get("lit_probability")),
          mutation: {
            strength: String(data.get("strength")) as "low" | "medium" | "high",
            mutation_count: Number(data.get("mutation_count")),
            expansion_enabled: data.get("expansion_enabled") === "on",
            expansion_probability: Number(data.get("expansion_probability")),
          },
        }),
      );
      if (updated) toast("settings applied", false);
    }
    dialog.remove();
  });
  dialog.showModal();
}

function animate(): void {
  const t = performance.now() / 1000;
  for (const gpu of tileGpus.values()) {
    gpu.renderer.frame(t);
  }
  requestAnimationFrame(animate);
}

void refresh().then(() => requestAnimationFrame(animate));
