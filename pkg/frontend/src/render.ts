import { pciColor, speedColor } from "./colors.js";
import { MarkerView, SessionStore } from "./state.js";
import { PreviewResponse } from "./types.js";

/** Pure render models: plain data consumed by the SVG layer, kept
 * separate so tests can compare them against server payloads directly. */

export interface SegmentView {
  x1: number;
  y1: number;
  x2: number;
  y2: number;
  color: string;
}

export interface OverlayPointView {
  x: number;
  y: number;
  /** null where the profile is undefined (point never covered by a window). */
  color: string | null;
}

export interface RenderModel {
  raw: { x: number; y: number }[];
  segments: SegmentView[];
  overlay: OverlayPointView[] | null;
  markers: MarkerView[];
  highlightIndex: number | null;
  conflict: string | null;
}

export function previewSegments(preview: PreviewResponse): SegmentView[] {
  const pts = preview.corrected_points;
  return preview.speeds_mps.map((speed, i) => ({
    x1: pts[i].x,
    y1: pts[i].y,
    x2: pts[i + 1].x,
    y2: pts[i + 1].y,
    color: speedColor(speed),
  }));
}

export function overlayPoints(preview: PreviewResponse): OverlayPointView[] | null {
  const profile = preview.pci_profile;
  if (!profile) return null;
  return preview.corrected_points.map((p, i) => ({
    x: p.x,
    y: p.y,
    color: profile[i] === null ? null : pciColor(profile[i] as number),
  }));
}

/** Index of the brightest overlay point: the profile's largest defined value. */
export function brightestOverlayIndex(profile: (number | null)[]): number | null {
  let best: number | null = null;
  let bestValue = -Infinity;
  profile.forEach((v, i) => {
    if (v !== null && v > bestValue) {
      best = i;
      bestValue = v;
    }
  });
  return best;
}

export function renderModel(store: SessionStore): RenderModel {
  const state = store.state;
  const preview = state.preview;
  return {
    raw: state.rawPoints.map((p) => ({ x: p.x, y: p.y })),
    segments: preview ? previewSegments(preview) : [],
    overlay:
      preview && state.showPciOverlay && preview.pci_profile ? overlayPoints(preview) : null,
    markers: state.markers,
    highlightIndex: store.highlightedIndex(),
    conflict: state.conflict,
  };
}
