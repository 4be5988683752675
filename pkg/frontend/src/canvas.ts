/** Deterministic software raster: pixels, lines, markers and bitmap text. */

import { GLYPH_HEIGHT, GLYPH_WIDTH, glyph, textWidth } from "./font.js";
import type { Rgb } from "./colormaps.js";

export class Raster {
  readonly width: number;
  readonly height: number;
  readonly data: Uint8ClampedArray;

  constructor(width: number, height: number, background: Rgb = [1, 1, 1]) {
    this.width = width;
    this.height = height;
    this.data = new Uint8ClampedArray(4 * width * height);
    for (let i = 0; i < width * height; i++) {
      this.data[4 * i] = 255 * background[0];
      this.data[4 * i + 1] = 255 * background[1];
      this.data[4 * i + 2] = 255 * background[2];
      this.data[4 * i + 3] = 255;
    }
  }

  set(x: number, y: number, rgb: Rgb): void {
    if (x < 0 || y < 0 || x >= this.width || y >= this.height) return;
    const i = 4 * (Math.floor(y) * this.width + Math.floor(x));
    this.data[i] = 255 * rgb[0];
    this.data[i + 1] = 255 * rgb[1];
    this.data[i + 2] = 255 * rgb[2];
    this.data[i + 3] = 255;
  }

  fillRect(x0: number, y0: number, w: number, h: number, rgb: Rgb): void {
    for (let y = y0; y < y0 + h; y++) {
      for (let x = x0; x < x0 + w; x++) this.set(x, y, rgb);
    }
  }

  line(x0: number, y0: number, x1: number, y1: number, rgb: Rgb, dash = 0): void {
    // Bresenham with an optional on/off dash period
    let x = Math.round(x0);
    let y = Math.round(y0);
    const xe = Math.round(x1);
    const ye = Math.round(y1);
    const dx = Math.abs(xe - x);
    const dy = -Math.abs(ye - y);
    const sx = x < xe ? 1 : -1;
    const sy = y < ye ? 1 : -1;
    let err = dx + dy;
    let step = 0;
    for (;;) {
      if (dash === 0 || step % (2 * dash) < dash) this.set(x, y, rgb);
      if (x === xe && y === ye) break;
      const e2 = 2 * err;
      if (e2 >= dy) {
        err += dy;
        x += sx;
      }
      if (e2 <= dx) {
        err += dx;
        y += sy;
      }
      step++;
    }
  }

  cross(x: number, y: number, size: number, rgb: Rgb): void {
    this.line(x - size, y - size, x + size, y + size, rgb);
    this.line(x - size, y + size, x + size, y - size, rgb);
  }

  circle(x: number, y: number, radius: number, rgb: Rgb): void {
    for (let a = 0; a < 64; a++) {
      const t = (2 * Math.PI * a) / 64;
      this.set(x + radius * Math.cos(t), y + radius * Math.sin(t), rgb);
    }
  }

  text(x: number, y: number, s: string, rgb: Rgb, scale = 1): void {
    let cx = Math.round(x);
    const cy = Math.round(y);
    for (const ch of s) {
      const rows = glyph(ch);
      for (let r = 0; r < GLYPH_HEIGHT; r++) {
        for (let c = 0; c < GLYPH_WIDTH; c++) {
          if (rows[r] & (1 << (GLYPH_WIDTH - 1 - c))) {
            this.fillRect(cx + c * scale, cy + r * scale, scale, scale, rgb);
          }
        }
      }
      cx += (GLYPH_WIDTH + 1) * scale;
    }
  }

  textCentered(xc: number, y: number, s: string, rgb: Rgb, scale = 1): void {
    this.text(xc - textWidth(s, scale) / 2, y, s, rgb, scale);
  }
}

export const BLACK: Rgb = [0, 0, 0];
export const GRAY: Rgb = [0.45, 0.45, 0.45];
export const CYAN: Rgb = [0.0, 0.75, 0.75];
export const BLUE: Rgb = [0.12, 0.33, 0.66];
export const RED: Rgb = [0.8, 0.15, 0.1];

export interface Axes {
  x0: number;
  y0: number;
  w: number;
  h: number;
  xMin: number;
  xMax: number;
  yMin: number;
  yMax: number;
}

export function toPixelX(ax: Axes, v: number): number {
  return ax.x0 + ((v - ax.xMin) / (ax.xMax - ax.xMin || 1)) * ax.w;
}

export function toPixelY(ax: Axes, v: number): number {
  return ax.y0 + ax.h - ((v - ax.yMin) / (ax.yMax - ax.yMin || 1)) * ax.h;
}

export function formatTick(v: number): string {
  if (v === 0) return "0";
  const a = Math.abs(v);
  if (a >= 0.01 && a < 10000) {
    const s = v.toPrecision(3);
    return s.includes(".") ? s.replace(/\.?0+$/, "") : s;
  }
  return v.toExponential(1).toUpperCase();
}

export function drawFrame(
  img: Raster,
  ax: Axes,
  xLabel: string,
  yLabel: string,
  title: string,
): void {
  img.line(ax.x0, ax.y0, ax.x0 + ax.w, ax.y0, BLACK);
  img.line(ax.x0, ax.y0 + ax.h, ax.x0 + ax.w, ax.y0 + ax.h, BLACK);
  img.line(ax.x0, ax.y0, ax.x0, ax.y0 + ax.h, BLACK);
  img.line(ax.x0 + ax.w, ax.y0, ax.x0 + ax.w, ax.y0 + ax.h, BLACK);
  for (let i = 0; i <= 4; i++) {
    const fx = ax.xMin + (i / 4) * (ax.xMax - ax.xMin);
    const px = toPixelX(ax, fx);
    img.line(px, ax.y0 + ax.h, px, ax.y0 + ax.h + 4, BLACK);
    img.textCentered(px, ax.y0 + ax.h + 7, formatTick(fx), BLACK);
    const fy = ax.yMin + (i / 4) * (ax.yMax - ax.yMin);
    const py = toPixelY(ax, fy);
    img.line(ax.x0 - 4, py, ax.x0, py, BLACK);
    const label = formatTick(fy);
    img.text(ax.x0 - 6 - textWidth(label), py - 3, label, BLACK);
  }
  img.textCentered(ax.x0 + ax.w / 2, ax.y0 + ax.h + 18, xLabel, BLACK);
  img.textCentered(ax.x0 + ax.w / 2, ax.y0 - 22, title, BLACK);
  // vertical-ish y label along the top-left
  img.text(2, ax.y0 - 10, yLabel, BLACK);
}
