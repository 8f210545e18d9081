/**
 * Real-model invocation. The heavy models (pose estimator, motion recovery,
 * VLM) live in their own GPU stacks; this adapter shells out to a command
 * you configure and treats its stdout as the feature payload:
 *
 *   HUMEVAL_POSE_CMD    prints *.kps.ndjson content for $1 = video path
 *   HUMEVAL_MOTION_CMD  prints *.mot.ndjson content
 *   HUMEVAL_VLM_CMD     prints *.vlm.json content (first generated token's
 *                       yes/no logits; multi-token answers use token one)
 *
 * The command receives DEVICE, FPS_CAP and PROMPT_FILE in its environment.
 * No command configured means the model is unavailable, which is an error
 * in non-mock mode.
 */

import { spawnSync } from "node:child_process";
import { accessSync, constants } from "node:fs";

export const BACKEND_ENV = {
  keypoints: "HUMEVAL_POSE_CMD",
  motion: "HUMEVAL_MOTION_CMD",
  prior: "HUMEVAL_VLM_CMD",
} as const;

export type Kind = keyof typeof BACKEND_ENV;

export interface BackendContext {
  device: string;
  fpsCap: number;
  promptFile?: string;
}

export function checkReadable(path: string): void {
  try {
    accessSync(path, constants.R_OK);
  } catch {
    throw new Error(`video not readable: ${path}`);
  }
}

export function runBackend(kind: Kind, videoPath: string, ctx: BackendContext): string {
  const envName = BACKEND_ENV[kind];
  const command = process.env[envName];
  if (!command) {
    throw new Error(`${kind} model unavailable: set ${envName} or use --mock`);
  }
  checkReadable(videoPath);
  const result = spawnSync(command, [videoPath], {
    shell: true,
    encoding: "utf-8",
    maxBuffer: 256 * 1024 * 1024,
    env: {
      ...process.env,
      DEVICE: ctx.device,
      FPS_CAP: String(ctx.fpsCap),
      ...(ctx.promptFile ? { PROMPT_FILE: ctx.promptFile } : {}),
    },
  });
  if (result.error) throw result.error;
  if (result.status !== 0) {
    throw new Error(`${envName} exited with ${result.status}: ${result.stderr.slice(0, 500)}`);
  }
  if (!result.stdout.trim()) {
    throw new Error(`${envName} produced no output for ${videoPath}`);
  }
  return result.stdout;
}
