#!/usr/bin/env node
/** plotkit <recipe.json> [...] -o <dir>: render figure recipes to PNG. */

import { mkdirSync } from "node:fs";
import { join } from "node:path";

import { defaultOutputName, renderRecipeFile } from "./recipe.js";

export function main(argv: string[]): number {
  const recipes: string[] = [];
  let outDir = ".";
  for (let i = 0; i < argv.length; i++) {
    const arg = argv[i];
    if (arg === "-o" || arg === "--out") {
      outDir = argv[++i];
      if (outDir === undefined) {
        console.error("missing directory after -o");
        return 2;
      }
    } else if (arg === "-h" || arg === "--help") {
      console.log("usage: plotkit <recipe.json> [...] -o <dir>");
      return 0;
    } else {
      recipes.push(arg);
    }
  }
  if (recipes.length === 0) {
    console.error("usage: plotkit <recipe.json> [...] -o <dir>");
    return 2;
  }
  try {
    mkdirSync(outDir, { recursive: true });
    for (const recipe of recipes) {
      const out = join(outDir, defaultOutputName(recipe));
      renderRecipeFile(recipe, out);
      console.log(out);
    }
  } catch (err) {
    console.error(String((err as Error).message ?? err));
    return 1;
  }
  return 0;
}

process.exitCode = main(process.argv.slice(2));
