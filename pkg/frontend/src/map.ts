import { TILE_SIZE, TILE_URL } from "./config.js";
import { EARTH_RADIUS_M, xToLon, yToLat } from "./proj.js";
import { RenderModel } from "./render.js";

const WORLD_M = 2 * Math.PI * EARTH_RADIUS_M;

export interface Viewport {
  centerX: number; // mercator meters
  centerY: number;
  zoom: number; // slippy zoom level
}

export interface DragEndEvent {
  markerIndex: number;
  lat: number;
  lon: number;
}

/** Slippy-tile basemap with an SVG track layer.
 *
 * Converts between mercator meters and screen pixels (the only client-side
 * math a tile map needs); all track geometry arrives pre-computed in the
 * render model.
 */
export class MapView {
  viewport: Viewport = { centerX: 0, centerY: 0, zoom: 16 };
  onMarkerDragEnd: ((ev: DragEndEvent) => void) | null = null;

  private readonly tileLayer: HTMLDivElement;
  private readonly svg: SVGSVGElement;
  private dragging: { markerIndex: number } | null = null;
  private lastModel: RenderModel | null = null;

  constructor(private readonly root: HTMLElement) {
    root.classList.add("map-root");
    this.tileLayer = document.createElement("div");
    this.tileLayer.className = "tile-layer";
    this.svg = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    this.svg.classList.add("track-layer");
    root.append(this.tileLayer, this.svg);

    this.svg.addEventListener("pointermove", (ev) => this.handlePointerMove(ev));
    this.svg.addEventListener("pointerup", (ev) => this.handlePointerUp(ev));
    this.svg.addEventListener("pointerleave", () => (this.dragging = null));
  }

  private metersPerPixel(): number {
    return WORLD_M / (TILE_SIZE * 2 ** this.viewport.zoom);
  }

  worldToScreen(x: number, y: number): [number, number] {
    const mpp = this.metersPerPixel();
    const w = this.root.clientWidth || 800;
    const h = this.root.clientHeight || 600;
    return [
      w / 2 + (x - this.viewport.centerX) / mpp,
      h / 2 - (y - this.viewport.centerY) / mpp,
    ];
  }

  screenToWorld(px: number, py: number): [number, number] {
    const mpp = this.metersPerPixel();
    const w = this.root.clientWidth || 800;
    const h = this.root.clientHeight || 600;
    return [
      this.viewport.centerX + (px - w / 2) * mpp,
      this.viewport.centerY - (py - h / 2) * mpp,
    ];
  }

  fitTo(points: { x: number; y: number }[]): void {
    if (points.length === 0) return;
    const xs = points.map((p) => p.x);
    const ys = points.map((p) => p.y);
    const minX = Math.min(...xs);
    const maxX = Math.max(...xs);
    const minY = Math.min(...ys);
    const maxY = Math.max(...ys);
    this.viewport.centerX = (minX + maxX) / 2;
    this.viewport.centerY = (minY + maxY) / 2;
    const w = this.root.clientWidth || 800;
    const h = this.root.clientHeight || 600;
    const span = Math.max(maxX - minX, maxY - minY, 50);
    let zoom = 18;
    while (zoom > 2 && span / (WORLD_M / (TILE_SIZE * 2 ** zoom)) > Math.min(w, h) * 0.8) {
      zoom -= 1;
    }
    this.viewport.zoom = zoom;
  }

  private renderTiles(): void {
    const mpp = this.metersPerPixel();
    const w = this.root.clientWidth || 800;
    const h = this.root.clientHeight || 600;
    const z = this.viewport.zoom;
    const scale = TILE_SIZE * 2 ** z;
    const worldPx = (x: number, y: number): [number, number] => [
      ((x + WORLD_M / 2) / WORLD_M) * scale,
      ((WORLD_M / 2 - y) / WORLD_M) * scale,
    ];
    const [cx, cy] = worldPx(this.viewport.centerX, this.viewport.centerY);
    const x0 = Math.floor((cx - w / 2) / TILE_SIZE);
    const x1 = Math.floor((cx + w / 2) / TILE_SIZE);
    const y0 = Math.floor((cy - h / 2) / TILE_SIZE);
    const y1 = Math.floor((cy + h / 2) / TILE_SIZE);
    this.tileLayer.replaceChildren();
    const maxIndex = 2 ** z - 1;
    for (let tx = x0; tx <= x1; tx++) {
      for (let ty = Math.max(y0, 0); ty <= Math.min(y1, maxIndex); ty++) {
        const img = document.createElement("img");
        img.src = TILE_URL.replace("{z}", String(z))
          .replace("{x}", String(((tx % 2 ** z) + 2 ** z) % 2 ** z))
          .replace("{y}", String(ty));
        img.className = "tile";
        img.style.left = `${tx * TILE_SIZE - (cx - w / 2)}px`;
        img.style.top = `${ty * TILE_SIZE - (cy - h / 2)}px`;
        this.tileLayer.append(img);
      }
    }
  }

  render(model: RenderModel): void {
    this.lastModel = model;
    this.renderTiles();
    const svgNs = "http://www.w3.org/2000/svg";
    this.svg.replaceChildren();

    for (const p of model.raw) {
      const [sx, sy] = this.worldToScreen(p.x, p.y);
      const dot = document.createElementNS(svgNs, "circle");
      dot.setAttribute("cx", String(sx));
      dot.setAttribute("cy", String(sy));
      dot.setAttribute("r", "2");
      dot.setAttribute("class", "raw-point");
      this.svg.append(dot);
    }

    for (const seg of model.segments) {
      const [x1, y1] = this.worldToScreen(seg.x1, seg.y1);
      const [x2, y2] = this.worldToScreen(seg.x2, seg.y2);
      const line = document.createElementNS(svgNs, "line");
      line.setAttribute("x1", String(x1));
      line.setAttribute("y1", String(y1));
      line.setAttribute("x2", String(x2));
      line.setAttribute("y2", String(y2));
      line.setAttribute("stroke", seg.color);
      line.setAttribute("stroke-width", "3");
      this.svg.append(line);
    }

    if (model.overlay) {
      for (const p of model.overlay) {
        if (p.color === null) continue;
        const [sx, sy] = this.worldToScreen(p.x, p.y);
        const dot = document.createElementNS(svgNs, "circle");
        dot.setAttribute("cx", String(sx));
        dot.setAttribute("cy", String(sy));
        dot.setAttribute("r", "4");
        dot.setAttribute("fill", p.color);
        dot.setAttribute("class", "overlay-point");
        this.svg.append(dot);
      }
    }

    if (model.highlightIndex !== null && model.segments.length + model.raw.length > 0) {
      const track = model.segments.length
        ? model.segments.map((s) => ({ x: s.x1, y: s.y1 })).concat([
            { x: model.segments[model.segments.length - 1].x2,
              y: model.segments[model.segments.length - 1].y2 },
          ])
        : model.raw;
      const p = track[Math.min(model.highlightIndex, track.length - 1)];
      const [sx, sy] = this.worldToScreen(p.x, p.y);
      const halo = document.createElementNS(svgNs, "circle");
      halo.setAttribute("cx", String(sx));
      halo.setAttribute("cy", String(sy));
      halo.setAttribute("r", "8");
      halo.setAttribute("class", "highlight");
      this.svg.append(halo);
    }

    model.markers.forEach((marker, index) => {
      const [sx, sy] = this.worldToScreen(marker.x, marker.y);
      const pin = document.createElementNS(svgNs, "circle");
      pin.setAttribute("cx", String(sx));
      pin.setAttribute("cy", String(sy));
      pin.setAttribute("r", "6");
      pin.setAttribute("class", "marker");
      pin.addEventListener("pointerdown", (ev) => {
        ev.preventDefault();
        this.dragging = { markerIndex: index };
      });
      this.svg.append(pin);
    });
  }

  private handlePointerMove(ev: PointerEvent): void {
    if (!this.dragging || !this.lastModel) return;
    const rect = this.svg.getBoundingClientRect();
    const marker = this.svg.querySelectorAll(".marker")[this.dragging.markerIndex];
    if (marker) {
      marker.setAttribute("cx", String(ev.clientX - rect.left));
      marker.setAttribute("cy", String(ev.clientY - rect.top));
    }
  }

  private handlePointerUp(ev: PointerEvent): void {
    if (!this.dragging) return;
    const { markerIndex } = this.dragging;
    this.dragging = null;
    const rect = this.svg.getBoundingClientRect();
    const [wx, wy] = this.screenToWorld(ev.clientX - rect.left, ev.clientY - rect.top);
    this.onMarkerDragEnd?.({ markerIndex, lat: yToLat(wy), lon: xToLon(wx) });
  }
}
