/** Figure recipes: a JSON description of inputs, kind and styling. */

import { existsSync, readFileSync, writeFileSync } from "node:fs";
import { basename } from "node:path";

import { encodePng } from "./png.js";
import type { Scaling } from "./colormaps.js";
import { readField, readTable } from "./data.js";
import {
  Annotations,
  SeriesSpec,
  Styling,
  renderHeatmap,
  renderSpectrumPanels,
  renderTrend,
} from "./figures.js";
import { Raster } from "./canvas.js";

export interface FigureRecipe {
  kind: "heatmap" | "spectrum-panels" | "trend";
  inputs: string[];
  field?: string;
  title?: string;
  width?: number;
  height?: number;
  styling?: {
    colormap?: string;
    scaling?: Scaling;
    annotations?: Annotations;
  };
  /** trend only */
  x?: string;
  series?: SeriesSpec[];
  xLabel?: string;
  yLabel?: string;
}

export function validateRecipe(recipe: FigureRecipe): void {
  const kinds = ["heatmap", "spectrum-panels", "trend"];
  if (!kinds.includes(recipe.kind)) {
    throw new Error(`kind must be one of ${kinds.join(", ")}; got '${recipe.kind}'`);
  }
  if (!Array.isArray(recipe.inputs) || recipe.inputs.length === 0) {
    throw new Error("recipe needs at least one input file");
  }
  for (const input of recipe.inputs) {
    if (!existsSync(input)) throw new Error(`input file not found: ${input}`);
  }
  const scaling = recipe.styling?.scaling;
  if (scaling?.type === "signed-power") {
    const e = scaling.exponent ?? 0.5;
    if (!(e > 0 && e <= 1)) {
      throw new Error(`signed-power exponent must be in (0, 1]; got ${e}`);
    }
  }
  if (recipe.kind === "trend" && !(recipe.series && recipe.series.length)) {
    throw new Error("trend recipes need a non-empty 'series' list");
  }
}

export function renderRecipe(recipe: FigureRecipe): Raster {
  validateRecipe(recipe);
  const styling: Styling = recipe.styling ?? {};
  const width = recipe.width ?? 640;
  const height = recipe.height ?? 480;
  const title = recipe.title ?? "";
  switch (recipe.kind) {
    case "heatmap":
      return renderHeatmap(
        readField(recipe.inputs[0]), recipe.field, styling, width, height, title,
      );
    case "spectrum-panels":
      return renderSpectrumPanels(
        recipe.inputs.map(readField), recipe.field, styling, width, height, title,
      );
    case "trend":
      return renderTrend(
        recipe.inputs.map(readTable),
        recipe.x ?? "axis_value",
        recipe.series!,
        styling,
        width,
        height,
        title,
        recipe.xLabel ?? recipe.x ?? "axis_value",
        recipe.yLabel ?? "",
      );
  }
}

export function loadRecipe(path: string): FigureRecipe {
  let parsed: FigureRecipe;
  try {
    parsed = JSON.parse(readFileSync(path, "utf8")) as FigureRecipe;
  } catch (err) {
    throw new Error(`cannot parse recipe ${path}: ${(err as Error).message}`);
  }
  return parsed;
}

export function renderRecipeFile(recipePath: string, outPath: string): string {
  const recipe = loadRecipe(recipePath);
  const img = renderRecipe(recipe);
  writeFileSync(outPath, encodePng(img.width, img.height, img.data));
  return outPath;
}

export function defaultOutputName(recipePath: string): string {
  return basename(recipePath).replace(/\.json$/i, "") + ".png";
}
