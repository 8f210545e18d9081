/**
 * Batch driver: one child process per (video, kind), fanned out over a
 * bounded pool. Child processes keep model state isolated and crashes
 * contained; a single bad video fails its own extraction only.
 */

import { spawn } from "node:child_process";
import { readdirSync, statSync } from "node:fs";
import { cpus } from "node:os";
import { extname, join } from "node:path";
import { fileURLToPath } from "node:url";

const VIDEO_EXTENSIONS = new Set([".mp4", ".mov", ".webm", ".avi", ".mkv"]);

export interface BatchOptions {
  videosDir: string;
  outDir: string;
  kinds: string[]; // subset of keypoints | motion | prior
  mock: boolean;
  device: string;
  fpsCap: number;
  prompt?: string;
  jobs: number;
  anyExtension?: boolean;
}

export interface BatchFailure {
  video: string;
  kind: string;
  message: string;
}

export function listVideos(videosDir: string, anyExtension = false): string[] {
  const entries = readdirSync(videosDir)
    .map((name) => join(videosDir, name))
    .filter((path) => statSync(path).isFile())
    .filter((path) => anyExtension || VIDEO_EXTENSIONS.has(extname(path).toLowerCase()));
  entries.sort();
  if (entries.length === 0) throw new Error(`no videos found in ${videosDir}`);
  return entries;
}

function runChild(argv: string[]): Promise<{ code: number; stderr: string }> {
  const cliPath = fileURLToPath(new URL("./cli.js", import.meta.url));
  return new Promise((resolve) => {
    const child = spawn(process.execPath, [cliPath, ...argv], { stdio: ["ignore", "ignore", "pipe"] });
    let stderr = "";
    child.stderr.on("data", (chunk) => (stderr += chunk));
    child.on("close", (code) => resolve({ code: code ?? 1, stderr }));
  });
}

export async function runBatch(opts: BatchOptions): Promise<BatchFailure[]> {
  const videos = listVideos(opts.videosDir, opts.anyExtension);
  const work: Array<{ video: string; kind: string; argv: string[] }> = [];
  for (const video of videos) {
    for (const kind of opts.kinds) {
      const argv = [kind, video, "--out", opts.outDir, "--device", opts.device,
                    "--fps-cap", String(opts.fpsCap)];
      if (opts.mock) argv.push("--mock");
      if (kind === "prior" && opts.prompt) argv.push("--prompt", opts.prompt);
      work.push({ video, kind, argv });
    }
  }

  const jobs = Math.max(1, Math.min(opts.jobs || cpus().length, work.length));
  const failures: BatchFailure[] = [];
  let cursor = 0;
  async function worker(): Promise<void> {
    while (cursor < work.length) {
      const item = work[cursor++];
      const { code, stderr } = await runChild(item.argv);
      if (code !== 0) {
        failures.push({ video: item.video, kind: item.kind, message: stderr.trim().slice(0, 300) });
      }
    }
  }
  await Promise.all(Array.from({ length: jobs }, worker));
  return failures;
}
