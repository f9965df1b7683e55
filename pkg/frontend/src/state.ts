import { ApiClient, ApiError } from "./api.js";
import { latToY, lonToX, xToLon, yToLat } from "./proj.js";
import { MarkerIn, PreviewResponse, SessionDoc, isPreview } from "./types.js";

export interface RawPointView {
  timestampMs: number;
  lat: number;
  lon: number;
  x: number;
  y: number;
}

export interface MarkerView {
  timestampMs: number;
  x: number;
  y: number;
  lat: number;
  lon: number;
}

export interface UiSessionState {
  sessionId: string | null;
  split: string | null;
  rawPoints: RawPointView[];
  markers: MarkerView[];
  preview: PreviewResponse | null;
  committedTrack: { timestamps: number[]; points: [number, number][] } | null;
  showPciOverlay: boolean;
  scrubTimeMs: number | null;
  /** Human-readable retry prompt after a 409; null when no conflict. */
  conflict: string | null;
}

export type EditResult =
  | { ok: true }
  | { ok: false; status: number; detail: string };

function emptyState(): UiSessionState {
  return {
    sessionId: null,
    split: null,
    rawPoints: [],
    markers: [],
    preview: null,
    committedTrack: null,
    showPciOverlay: false,
    scrubTimeMs: null,
    conflict: null,
  };
}

/** Client-side session state. Mirrors the last server responses: every
 * curve, speed and complexity value displayed comes from a payload;
 * the store itself only selects, sorts and forwards. */
export class SessionStore {
  state: UiSessionState = emptyState();

  constructor(private readonly api: ApiClient) {}

  async load(sessionId: string): Promise<void> {
    const doc: SessionDoc = await this.api.getSession(sessionId);
    const next = emptyState();
    next.sessionId = doc.session_id;
    next.split = doc.manifest_split;
    next.showPciOverlay = this.state.showPciOverlay;
    next.rawPoints = doc.raw_track.map(([t, lat, lon]) => ({
      timestampMs: t,
      lat,
      lon,
      x: lonToX(lon),
      y: latToY(lat),
    }));
    next.markers = doc.markers.map(([t, x, y]) => ({
      timestampMs: t,
      x,
      y,
      lat: yToLat(y),
      lon: xToLon(x),
    }));
    next.committedTrack = doc.corrected_track;
    this.state = next;
    if (next.markers.length >= 2) {
      await this.refreshPreview();
    }
  }

  async refreshPreview(): Promise<void> {
    if (!this.state.sessionId) return;
    const preview = await this.api.getPreview(this.state.sessionId, this.state.showPciOverlay);
    this.applyPreview(preview);
  }

  private applyPreview(preview: PreviewResponse): void {
    this.state.preview = preview;
    this.state.markers = preview.markers.map((m) => ({
      timestampMs: m.timestamp_ms,
      x: m.x,
      y: m.y,
      lat: m.lat,
      lon: m.lon,
    }));
  }

  private markerPayload(markers: MarkerView[]): MarkerIn[] {
    return markers.map((m) => ({ timestamp_ms: m.timestampMs, lat: m.lat, lon: m.lon }));
  }

  /** Replace the whole marker set on the server; local state changes only
   * when the server accepts. A 409 becomes a retry prompt, a 422 leaves
   * the dragged marker where it was (snap-back is implicit: nothing was
   * mutated optimistically). */
  private async sendMarkers(candidate: MarkerView[]): Promise<EditResult> {
    if (!this.state.sessionId) return { ok: false, status: 0, detail: "no session loaded" };
    try {
      const resp = await this.api.putMarkers(
        this.state.sessionId,
        this.markerPayload(candidate),
      );
      this.state.conflict = null;
      if (isPreview(resp)) {
        this.applyPreview(resp);
        if (this.state.showPciOverlay) {
          await this.refreshPreview(); // marker-edit previews omit the overlay values
        }
      } else {
        this.state.markers = resp.markers.map((m) => ({
          timestampMs: m.timestamp_ms,
          x: m.x,
          y: m.y,
          lat: m.lat,
          lon: m.lon,
        }));
        this.state.preview = null;
      }
      return { ok: true };
    } catch (err) {
      if (err instanceof ApiError) {
        if (err.status === 409) {
          this.state.conflict = `Another edit is in progress: ${err.detail}. Retry?`;
        }
        return { ok: false, status: err.status, detail: err.detail };
      }
      throw err;
    }
  }

  dragMarker(index: number, position: { lat: number; lon: number }): Promise<EditResult> {
    const markers = this.state.markers;
    if (index < 0 || index >= markers.length) {
      return Promise.resolve({ ok: false, status: 0, detail: `no marker ${index}` });
    }
    const candidate = markers.map((m, i) =>
      i === index ? { ...m, lat: position.lat, lon: position.lon } : m,
    );
    return this.sendMarkers(candidate);
  }

  /** Timeline shortcut: a marker at the scrubbed instant, initialized at
   * the highlighted point's position. The server snaps the timestamp to
   * the raw grid; the UI sends the raw time untouched. */
  insertMarkerAtScrub(): Promise<EditResult> {
    const timeMs = this.state.scrubTimeMs;
    const point = this.highlightedPoint();
    if (timeMs === null || point === null) {
      return Promise.resolve({ ok: false, status: 0, detail: "nothing scrubbed" });
    }
    const added: MarkerView = {
      timestampMs: timeMs,
      lat: point.lat,
      lon: point.lon,
      x: point.x,
      y: point.y,
    };
    const candidate = [...this.state.markers, added].sort(
      (a, b) => a.timestampMs - b.timestampMs,
    );
    return this.sendMarkers(candidate);
  }

  dismissConflict(): void {
    this.state.conflict = null;
  }

  async togglePciOverlay(): Promise<void> {
    this.state.showPciOverlay = !this.state.showPciOverlay;
    const preview = this.state.preview;
    if (this.state.showPciOverlay && preview && !preview.pci_profile) {
      await this.refreshPreview();
    }
  }

  async commit(): Promise<EditResult> {
    if (!this.state.sessionId) return { ok: false, status: 0, detail: "no session loaded" };
    try {
      await this.api.commit(this.state.sessionId);
      const doc = await this.api.getSession(this.state.sessionId);
      this.state.committedTrack = doc.corrected_track;
      return { ok: true };
    } catch (err) {
      if (err instanceof ApiError) {
        return { ok: false, status: err.status, detail: err.detail };
      }
      throw err;
    }
  }

  /** The track the scrubber walks: the live preview when one exists,
   * otherwise the raw GPS points. */
  activePoints(): { timestampMs: number; lat: number; lon: number; x: number; y: number }[] {
    if (this.state.preview) {
      return this.state.preview.corrected_points.map((p) => ({
        timestampMs: p.timestamp_ms,
        lat: p.lat,
        lon: p.lon,
        x: p.x,
        y: p.y,
      }));
    }
    return this.state.rawPoints;
  }

  /** Clamp into the track span and remember the scrub position. */
  scrub(timeMs: number): void {
    const points = this.activePoints();
    if (points.length === 0) {
      this.state.scrubTimeMs = null;
      return;
    }
    const first = points[0].timestampMs;
    const last = points[points.length - 1].timestampMs;
    this.state.scrubTimeMs = Math.min(Math.max(timeMs, first), last);
  }

  highlightedIndex(): number | null {
    const t = this.state.scrubTimeMs;
    if (t === null) return null;
    const points = this.activePoints();
    if (points.length === 0) return null;
    let best = 0;
    let bestGap = Math.abs(points[0].timestampMs - t);
    for (let i = 1; i < points.length; i++) {
      const gap = Math.abs(points[i].timestampMs - t);
      if (gap < bestGap) {
        best = i;
        bestGap = gap;
      }
    }
    return best;
  }

  highlightedPoint() {
    const idx = this.highlightedIndex();
    return idx === null ? null : this.activePoints()[idx];
  }
}
