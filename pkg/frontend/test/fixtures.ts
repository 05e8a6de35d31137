/** Loads the dialogue recorded against the real server (see test/README note
 *  in the repo root README): every step carries the verbatim JSON response. */

import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

export interface RecordedStep {
  name: string;
  method: string;
  url: string;
  request: unknown;
  response: unknown;
}

const here = dirname(fileURLToPath(import.meta.url));

export function recordedSession(): RecordedStep[] {
  return JSON.parse(
    readFileSync(join(here, "recorded-session.json"), "utf-8"),
  ) as RecordedStep[];
}

export function stepByName(name: string): RecordedStep {
  const step = recordedSession().find((s) => s.name === name);
  if (!step) throw new Error(`no recorded step ${name}`);
  return step;
}
