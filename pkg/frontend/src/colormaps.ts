// Polynomial viridis approximation, from https://www.shadertoy.com/view/WlfXRN
// (CC0).  The diverging map interpolates blue -> white -> red anchors.

export type Rgb = [number, number, number];

function clamp01(t: number): number {
  return t < 0 ? 0 : t > 1 ? 1 : t;
}

function poly(t: number, c: number[]): number {
  let acc = 0;
  for (let i = c.length - 1; i >= 0; i--) acc = c[i] + t * acc;
  return acc;
}

const VIRIDIS_R = [0.2777273272234177, 0.1050930431085774, -0.3308618287255563,
  -4.634230498983486, 6.228269936347081, 4.776384997670288, -5.435455855934631];
const VIRIDIS_G = [0.005407344544966578, 1.404613529898575, 0.214847559468213,
  -5.799100973351585, 14.17993336680509, -13.74514537774601, 4.645852612178535];
const VIRIDIS_B = [0.3340998053353061, 1.384590162594685, 0.09509516302823659,
  -19.33244095627987, 56.69055260068105, -65.35303263337234, 26.3124352495832];

export function viridis(t: number): Rgb {
  const u = clamp01(t);
  return [
    clamp01(poly(u, VIRIDIS_R)),
    clamp01(poly(u, VIRIDIS_G)),
    clamp01(poly(u, VIRIDIS_B)),
  ];
}

// anchors of a red-blue diverging map (blue for negative, red for positive)
const DIVERGING_ANCHORS: Rgb[] = [
  [0.02, 0.19, 0.38],
  [0.13, 0.40, 0.67],
  [0.57, 0.77, 0.87],
  [1.0, 1.0, 1.0],
  [0.96, 0.65, 0.51],
  [0.84, 0.19, 0.15],
  [0.40, 0.0, 0.12],
];

export function diverging(t: number): Rgb {
  const u = clamp01(t) * (DIVERGING_ANCHORS.length - 1);
  const i = Math.min(Math.floor(u), DIVERGING_ANCHORS.length - 2);
  const f = u - i;
  const a = DIVERGING_ANCHORS[i];
  const b = DIVERGING_ANCHORS[i + 1];
  return [
    a[0] + f * (b[0] - a[0]),
    a[1] + f * (b[1] - a[1]),
    a[2] + f * (b[2] - a[2]),
  ];
}

export const COLORMAPS: Record<string, (t: number) => Rgb> = {
  viridis,
  diverging,
};

export interface Scaling {
  type: "linear" | "signed-power";
  exponent?: number;
}

/**
 * Normalize a value to [0, 1] for colormap lookup.  Linear maps
 * [lo, hi] -> [0, 1]; signed-power maps sign(v)*|v/vmax|^exponent over a
 * symmetric range (the nonlinear scaling that keeps weak trailing
 * features visible).  exponent = 1 reproduces linear scaling on a
 * symmetric range exactly.
 */
export function normalize(
  value: number,
  lo: number,
  hi: number,
  scaling: Scaling,
): number {
  if (scaling.type === "signed-power") {
    const exponent = scaling.exponent ?? 0.5;
    if (!(exponent > 0 && exponent <= 1)) {
      throw new Error(`signed-power exponent must be in (0, 1]; got ${exponent}`);
    }
    const vmax = Math.max(Math.abs(lo), Math.abs(hi));
    if (vmax === 0) return 0.5;
    const s = Math.sign(value) * Math.pow(Math.abs(value) / vmax, exponent);
    return 0.5 * (s + 1);
  }
  if (hi === lo) return 0.5;
  return clamp01((value - lo) / (hi - lo));
}
