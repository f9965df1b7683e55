/** Web-mercator transform used purely for map display.
 *
 * Every slippy map needs this to place tiles and lat/lon payloads on the
 * same plane; track geometry itself (splines, complexity profiles,
 * snapping) always comes from the server and is never recomputed here.
 */

export const EARTH_RADIUS_M = 6378137;

export function lonToX(lon: number): number {
  return EARTH_RADIUS_M * (lon * Math.PI) / 180;
}

export function latToY(lat: number): number {
  return EARTH_RADIUS_M * Math.atanh(Math.sin((lat * Math.PI) / 180));
}

export function xToLon(x: number): number {
  return ((x / EARTH_RADIUS_M) * 180) / Math.PI;
}

export function yToLat(y: number): number {
  return (Math.asin(Math.tanh(y / EARTH_RADIUS_M)) * 180) / Math.PI;
}
