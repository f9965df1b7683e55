/** Wire types mirroring the session service JSON API. */

export interface SessionSummary {
  session_id: string;
  manifest_split: string;
  n_points: number;
  n_markers: number;
  has_corrected: boolean;
}

/** Stored session document: raw track rows are [timestamp_ms, lat, lon],
 * marker rows are [timestamp_ms, x, y] in mercator meters. */
export interface SessionDoc {
  version: number;
  session_id: string;
  manifest_split: string;
  raw_track: [number, number, number][];
  markers: [number, number, number][];
  corrected_track: { timestamps: number[]; points: [number, number][] } | null;
  gaze: [number, number, number][] | null;
}

export interface MarkerOut {
  timestamp_ms: number;
  x: number;
  y: number;
  lat: number;
  lon: number;
}

export interface CorrectedPoint {
  timestamp_ms: number;
  x: number;
  y: number;
  lat: number;
  lon: number;
}

export interface PreviewResponse {
  session_id: string;
  markers: MarkerOut[];
  corrected_points: CorrectedPoint[];
  speeds_mps: number[];
  pci_profile?: (number | null)[];
}

export interface MarkerIn {
  timestamp_ms: number;
  lat: number;
  lon: number;
}

export interface MarkersAck {
  session_id: string;
  markers: MarkerOut[];
}

export type PutMarkersResponse = PreviewResponse | MarkersAck;

export interface CommitResponse {
  session_id: string;
  committed: boolean;
  n_points: number;
}

export function isPreview(resp: PutMarkersResponse): resp is PreviewResponse {
  return "corrected_points" in resp;
}
