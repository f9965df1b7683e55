import { ApiClient } from "./api.js";
import { API_BASE } from "./config.js";
import { MapView } from "./map.js";
import { renderModel } from "./render.js";
import { SessionStore } from "./state.js";

const api = new ApiClient(API_BASE);
const store = new SessionStore(api);

const mapRoot = document.getElementById("map") as HTMLElement;
const sessionSelect = document.getElementById("session-select") as HTMLSelectElement;
const scrubber = document.getElementById("scrubber") as HTMLInputElement;
const overlayButton = document.getElementById("toggle-overlay") as HTMLButtonElement;
const commitButton = document.getElementById("commit") as HTMLButtonElement;
const addMarkerButton = document.getElementById("add-marker") as HTMLButtonElement;
const conflictBanner = document.getElementById("conflict") as HTMLDivElement;
const retryButton = document.getElementById("retry") as HTMLButtonElement;
const statusLine = document.getElementById("status") as HTMLDivElement;

const map = new MapView(mapRoot);

let lastDrag: { markerIndex: number; lat: number; lon: number } | null = null;

function redraw(): void {
  map.render(renderModel(store));
  conflictBanner.hidden = store.state.conflict === null;
  if (store.state.conflict !== null) {
    conflictBanner.querySelector("span")!.textContent = store.state.conflict;
  }
  const points = store.activePoints();
  if (points.length > 0) {
    scrubber.min = String(points[0].timestampMs);
    scrubber.max = String(points[points.length - 1].timestampMs);
  }
  overlayButton.textContent = store.state.showPciOverlay
    ? "Hide complexity overlay"
    : "Show complexity overlay";
}

function report(message: string): void {
  statusLine.textContent = message;
}

async function loadSelected(): Promise<void> {
  const id = sessionSelect.value;
  if (!id) return;
  await store.load(id);
  map.fitTo(store.state.rawPoints);
  redraw();
  report(`loaded ${id} (${store.state.rawPoints.length} raw points)`);
}

map.onMarkerDragEnd = async (ev) => {
  lastDrag = ev;
  const result = await store.dragMarker(ev.markerIndex, ev);
  redraw();
  report(result.ok ? "marker moved" : `edit rejected (${result.status}): ${result.detail}`);
};

retryButton.addEventListener("click", async () => {
  store.dismissConflict();
  if (lastDrag) {
    const result = await store.dragMarker(lastDrag.markerIndex, lastDrag);
    report(result.ok ? "retry succeeded" : `retry failed (${result.status})`);
  }
  redraw();
});

scrubber.addEventListener("input", () => {
  store.scrub(Number(scrubber.value));
  redraw();
});

addMarkerButton.addEventListener("click", async () => {
  const result = await store.insertMarkerAtScrub();
  redraw();
  report(result.ok ? "marker added" : `insert rejected (${result.status}): ${result.detail}`);
});

overlayButton.addEventListener("click", async () => {
  await store.togglePciOverlay();
  redraw();
});

commitButton.addEventListener("click", async () => {
  const result = await store.commit();
  redraw();
  report(result.ok ? "corrected track committed" : `commit failed (${result.status}): ${result.detail}`);
});

sessionSelect.addEventListener("change", () => {
  void loadSelected();
});

async function boot(): Promise<void> {
  const sessions = await api.listSessions();
  sessionSelect.replaceChildren(
    ...sessions.map((s) => {
      const opt = document.createElement("option");
      opt.value = s.session_id;
      opt.textContent = `${s.session_id} (${s.manifest_split}, ${s.n_points} pts)`;
      return opt;
    }),
  );
  if (sessions.length > 0) {
    sessionSelect.value = sessions[0].session_id;
    await loadSelected();
  } else {
    report("no sessions in the data directory");
  }
}

void boot();
