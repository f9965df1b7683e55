/** Build-time configuration. Adjust before deploying. */

/** Base URL of the trajkit session service. */
export const API_BASE = "http://127.0.0.1:8000";

/** Slippy-tile URL template for the basemap. */
export const TILE_URL = "https://tile.openstreetmap.org/{z}/{x}/{y}.png";

export const TILE_SIZE = 256;
