/** Fixed color scales for track decoration.
 *
 * Speed: red (stopped) through green (fast), saturating at 15 m/s, an
 * urban driving ceiling. Complexity: dark blue at 0 m ramping to bright
 * yellow at 80 m; values beyond the scale clamp to the brightest color.
 */

export const SPEED_MAX_MPS = 15;
export const PCI_MAX_M = 80;

const PCI_DARK: [number, number, number] = [13, 22, 77]; // dark blue
const PCI_BRIGHT: [number, number, number] = [255, 233, 77]; // yellow

function clamp01(v: number): number {
  return v < 0 ? 0 : v > 1 ? 1 : v;
}

export function speedColor(speedMps: number): string {
  const t = clamp01(speedMps / SPEED_MAX_MPS);
  return `hsl(${Math.round(120 * t)}, 85%, 45%)`;
}

export function pciColor(valueM: number): string {
  const t = clamp01(valueM / PCI_MAX_M);
  const rgb = PCI_DARK.map((dark, i) => Math.round(dark + t * (PCI_BRIGHT[i] - dark)));
  return `rgb(${rgb[0]}, ${rgb[1]}, ${rgb[2]})`;
}
