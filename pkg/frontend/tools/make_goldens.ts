/** Regenerate the golden images from the checked-in recipes. */

import { mkdirSync, readdirSync } from "node:fs";
import { join } from "node:path";

import { defaultOutputName, renderRecipeFile } from "../src/recipe.js";

const recipesDir = "recipes";
const goldenDir = "golden";
mkdirSync(goldenDir, { recursive: true });
for (const file of readdirSync(recipesDir).sort()) {
  if (!file.endsWith(".json")) continue;
  const out = join(goldenDir, defaultOutputName(file));
  renderRecipeFile(join(recipesDir, file), out);
  console.log("wrote", out);
}
