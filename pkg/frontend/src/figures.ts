/** The three figure kinds: population heatmaps, stacked differential
 * transmission panels across delays, and velocity/renormalization trends. */

import { COLORMAPS, normalize, type Rgb, type Scaling } from "./colormaps.js";
import {
  Axes,
  BLACK,
  BLUE,
  CYAN,
  GRAY,
  RED,
  Raster,
  drawFrame,
  formatTick,
  toPixelX,
  toPixelY,
} from "./canvas.js";
import {
  FieldData,
  Matrix,
  Table,
  matrixValue,
  sitePositions,
} from "./data.js";

export interface Annotations {
  groupVelocity?: boolean;
  peakMarker?: boolean;
  rmsMarker?: boolean;
}

export interface Styling {
  colormap?: string;
  scaling?: Scaling;
  annotations?: Annotations;
}

const MARGIN = { left: 64, right: 76, top: 34, bottom: 34 };

function colormapFor(styling: Styling, fallback: string) {
  const name = styling.colormap ?? fallback;
  const fn = COLORMAPS[name];
  if (!fn) {
    throw new Error(`unknown colormap '${name}'`);
  }
  return fn;
}

function drawCells(
  img: Raster,
  ax: Axes,
  matrix: Matrix,
  xs: Float64Array,
  ys: Float64Array,
  lo: number,
  hi: number,
  scaling: Scaling,
  cmap: (t: number) => Rgb,
  signed: boolean,
): void {
  for (let px = 0; px < ax.w; px++) {
    const xv = ax.xMin + ((px + 0.5) / ax.w) * (ax.xMax - ax.xMin);
    const c = nearestIndex(xs, xv);
    for (let py = 0; py < ax.h; py++) {
      const yv = ax.yMax - ((py + 0.5) / ax.h) * (ax.yMax - ax.yMin);
      const r = nearestIndex(ys, yv);
      const v = signed ? matrix.re[r * matrix.cols + c] : matrixValue(matrix, r, c);
      img.set(ax.x0 + px, ax.y0 + py, cmap(normalize(v, lo, hi, scaling)));
    }
  }
}

function nearestIndex(arr: Float64Array, v: number): number {
  // uniform ascending axis
  if (arr.length < 2) return 0;
  const step = arr[1] - arr[0];
  const i = Math.round((v - arr[0]) / step);
  return Math.max(0, Math.min(arr.length - 1, i));
}

function drawColorbar(
  img: Raster,
  x: number,
  y0: number,
  h: number,
  lo: number,
  hi: number,
  scaling: Scaling,
  cmap: (t: number) => Rgb,
): void {
  const w = 12;
  for (let py = 0; py < h; py++) {
    const v = hi - (py / (h - 1)) * (hi - lo);
    const rgb = cmap(normalize(v, lo, hi, scaling));
    for (let px = 0; px < w; px++) img.set(x + px, y0 + py, rgb);
  }
  img.text(x + w + 3, y0 - 3, formatTick(hi), BLACK);
  img.text(x + w + 3, y0 + h - 4, formatTick(lo), BLACK);
}

/** Position vs time (or frequency) map of one exported field. */
export function renderHeatmap(
  data: FieldData,
  fieldName: string | undefined,
  styling: Styling,
  width: number,
  height: number,
  title: string,
): Raster {
  const name = fieldName ?? data.fields.keys().next().value;
  const matrix = data.fields.get(name as string);
  if (!matrix) {
    throw new Error(
      `field '${name}' not in inputs; available: ${[...data.fields.keys()].join(", ")}`,
    );
  }
  const img = new Raster(width, height);
  const xs = sitePositions(data);
  const ys = data.axis;
  const scaling = styling.scaling ?? { type: "linear" };
  const signed = scaling.type === "signed-power";
  let lo = Infinity;
  let hi = -Infinity;
  for (let i = 0; i < matrix.rows * matrix.cols; i++) {
    const v = signed
      ? matrix.re[i]
      : matrix.im
        ? Math.hypot(matrix.re[i], matrix.im[i])
        : matrix.re[i];
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  const ax: Axes = {
    x0: MARGIN.left,
    y0: MARGIN.top,
    w: width - MARGIN.left - MARGIN.right,
    h: height - MARGIN.top - MARGIN.bottom,
    xMin: xs[0],
    xMax: xs[xs.length - 1],
    yMin: ys[0],
    yMax: ys[ys.length - 1],
  };
  const cmap = colormapFor(styling, signed ? "diverging" : "viridis");
  drawCells(img, ax, matrix, xs, ys, lo, hi, scaling, cmap, signed);
  const yLabel = data.axisName === "omega_eV" ? "OMEGA (EV)" : "TIME (FS)";
  drawFrame(img, ax, "POSITION (UM)", yLabel, title);
  drawColorbar(img, ax.x0 + ax.w + 8, ax.y0, ax.h, lo, hi, scaling, cmap);
  if (styling.annotations?.groupVelocity && data.axisName === "time_fs") {
    drawGroupVelocityLine(img, ax, data);
  }
  return img;
}

function drawGroupVelocityLine(img: Raster, ax: Axes, data: FieldData): void {
  // ballistic reference through the pump spot at the pump arrival time
  const v = Number(data.meta.get("v_grp") ?? NaN);
  const x0 = Number(data.meta.get("pulse0.center") ?? data.meta.get("pump.center"));
  const t0 = Number(data.meta.get("pulse0.arrival") ?? data.meta.get("pump.arrival"));
  if (!Number.isFinite(v) || !Number.isFinite(x0) || !Number.isFinite(t0)) return;
  const tEnd = ax.yMax;
  img.line(
    toPixelX(ax, x0),
    toPixelY(ax, t0),
    toPixelX(ax, x0 + v * (tEnd - t0)),
    toPixelY(ax, tEnd),
    BLACK,
    4,
  );
}

/** Stacked dT_n(omega) panels, one per probe delay, shared color scale. */
export function renderSpectrumPanels(
  inputs: FieldData[],
  fieldName: string | undefined,
  styling: Styling,
  width: number,
  height: number,
  title: string,
): Raster {
  if (inputs.length === 0) throw new Error("spectrum-panels needs inputs");
  const img = new Raster(width, height);
  const scaling = styling.scaling ?? { type: "signed-power", exponent: 0.5 };
  const cmap = colormapFor(styling, "diverging");
  let vmax = 0;
  for (const data of inputs) {
    const m = pickField(data, fieldName);
    for (let i = 0; i < m.rows * m.cols; i++) {
      vmax = Math.max(vmax, Math.abs(m.re[i]));
    }
  }
  if (vmax === 0) vmax = 1;
  const panelGap = 8;
  const innerH = height - MARGIN.top - MARGIN.bottom;
  const panelH = Math.floor((innerH - panelGap * (inputs.length - 1)) / inputs.length);
  inputs.forEach((data, i) => {
    const m = pickField(data, fieldName);
    const xs = sitePositions(data);
    const ys = data.axis;
    const ax: Axes = {
      x0: MARGIN.left,
      y0: MARGIN.top + i * (panelH + panelGap),
      w: width - MARGIN.left - MARGIN.right,
      h: panelH,
      xMin: xs[0],
      xMax: xs[xs.length - 1],
      yMin: ys[0],
      yMax: ys[ys.length - 1],
    };
    drawCells(img, ax, m, xs, ys, -vmax, vmax, scaling, cmap, true);
    img.line(ax.x0, ax.y0, ax.x0 + ax.w, ax.y0, BLACK);
    img.line(ax.x0, ax.y0 + ax.h, ax.x0 + ax.w, ax.y0 + ax.h, BLACK);
    img.line(ax.x0, ax.y0, ax.x0, ax.y0 + ax.h, BLACK);
    img.line(ax.x0 + ax.w, ax.y0, ax.x0 + ax.w, ax.y0 + ax.h, BLACK);
    const delay = data.meta.get("delay_fs");
    if (delay !== undefined) {
      img.text(ax.x0 + 4, ax.y0 + 3, `DT = ${formatTick(Number(delay))} FS`, BLACK);
    }
    if (styling.annotations?.peakMarker ?? true) {
      const stats = profileStats(m, xs);
      const px = toPixelX(ax, stats.peak);
      img.line(px, ax.y0, px, ax.y0 + ax.h, CYAN);
      if (styling.annotations?.rmsMarker ?? true) {
        const origin = Number(data.meta.get("pump.center") ?? NaN);
        if (Number.isFinite(origin)) {
          const rx = toPixelX(ax, origin + stats.rms);
          img.line(rx, ax.y0, rx, ax.y0 + ax.h, BLACK, 3);
        }
      }
    }
    if (i === inputs.length - 1) {
      for (let t = 0; t <= 4; t++) {
        const fx = ax.xMin + (t / 4) * (ax.xMax - ax.xMin);
        const px = toPixelX(ax, fx);
        img.line(px, ax.y0 + ax.h, px, ax.y0 + ax.h + 4, BLACK);
        img.textCentered(px, ax.y0 + ax.h + 7, formatTick(fx), BLACK);
      }
      img.textCentered(ax.x0 + ax.w / 2, ax.y0 + ax.h + 18, "POSITION (UM)", BLACK);
    }
  });
  img.textCentered(width / 2, MARGIN.top - 22, title, BLACK);
  drawColorbar(
    img,
    width - MARGIN.right + 8,
    MARGIN.top,
    innerH,
    -vmax,
    vmax,
    scaling,
    cmap,
  );
  return img;
}

function pickField(data: FieldData, fieldName: string | undefined): Matrix {
  const name = fieldName ?? data.fields.keys().next().value;
  const m = data.fields.get(name as string);
  if (!m) throw new Error(`field '${name}' missing from input`);
  return m;
}

function profileStats(m: Matrix, xs: Float64Array) {
  // frequency-integrated |values| per site, then peak and rms about the peak
  const prof = new Float64Array(m.cols);
  for (let c = 0; c < m.cols; c++) {
    let acc = 0;
    for (let r = 0; r < m.rows; r++) acc += Math.abs(m.re[r * m.cols + c]);
    prof[c] = acc;
  }
  let best = 0;
  for (let c = 1; c < m.cols; c++) if (prof[c] > prof[best]) best = c;
  let w = 0;
  let m2 = 0;
  for (let c = 0; c < m.cols; c++) {
    w += prof[c];
    m2 += prof[c] * (xs[c] - xs[best]) ** 2;
  }
  return { peak: xs[best], rms: w > 0 ? Math.sqrt(m2 / w) : 0 };
}

export interface SeriesSpec {
  column: string;
  marker?: "cross" | "circle" | "line" | "dashed";
  scale?: number;
}

/** Velocity / renormalization trends from sweep (and dispersion) tables. */
export function renderTrend(
  tables: Table[],
  xColumn: string,
  series: SeriesSpec[],
  styling: Styling,
  width: number,
  height: number,
  title: string,
  xLabel: string,
  yLabel: string,
): Raster {
  const img = new Raster(width, height);
  const main = tables[0];
  const xs = main.columns.get(xColumn);
  if (!xs) throw new Error(`x column '${xColumn}' not in first input`);
  let yMin = Infinity;
  let yMax = -Infinity;
  const resolved = series.map((s) => {
    const table = tables.find((t) => t.columns.has(s.column));
    if (!table) throw new Error(`series column '${s.column}' not found`);
    const x = table === main ? xs : table.columns.get(xColumn);
    if (!x) throw new Error(`x column '${xColumn}' not in input with '${s.column}'`);
    const y = table.columns.get(s.column)!.map((v) => v * (s.scale ?? 1));
    for (const v of y) {
      if (v < yMin) yMin = v;
      if (v > yMax) yMax = v;
    }
    return { spec: s, x, y };
  });
  const pad = 0.1 * (yMax - yMin || 1);
  const ax: Axes = {
    x0: MARGIN.left,
    y0: MARGIN.top,
    w: width - MARGIN.left - MARGIN.right,
    h: height - MARGIN.top - MARGIN.bottom,
    xMin: Math.min(...xs),
    xMax: Math.max(...xs),
    yMin: yMin - pad,
    yMax: yMax + pad,
  };
  drawFrame(img, ax, xLabel, yLabel, title);
  const palette: Rgb[] = [BLUE, RED, GRAY, CYAN];
  resolved.forEach(({ spec, x, y }, i) => {
    const rgb = palette[i % palette.length];
    const marker = spec.marker ?? "line";
    if (marker === "line" || marker === "dashed") {
      for (let j = 1; j < x.length; j++) {
        img.line(
          toPixelX(ax, x[j - 1]),
          toPixelY(ax, y[j - 1]),
          toPixelX(ax, x[j]),
          toPixelY(ax, y[j]),
          rgb,
          marker === "dashed" ? 4 : 0,
        );
      }
    } else {
      for (let j = 0; j < x.length; j++) {
        const px = toPixelX(ax, x[j]);
        const py = toPixelY(ax, y[j]);
        if (marker === "cross") img.cross(px, py, 4, rgb);
        else img.circle(px, py, 4, rgb);
      }
    }
    img.text(ax.x0 + ax.w - 150, ax.y0 + 6 + 12 * i, spec.column, rgb);
  });
  return img;
}
