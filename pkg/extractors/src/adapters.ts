/**
 * The three feature extractors. Each writes exactly one feature file per
 * video and never computes scores; the scoring engine is the single source
 * of truth for all metric math.
 */

import { mkdirSync, readFileSync, writeFileSync } from "node:fs";
import { basename, join } from "node:path";

import { BackendContext, checkReadable, runBackend } from "./backend.js";
import { keypointStreamLines, motionTrackLines, vlmRecordJson } from "./formats.js";
import { mockKeypointFrames, mockLogits, mockMotionFrames } from "./mock.js";

export interface ExtractOptions extends BackendContext {
  mock: boolean;
  outDir: string;
}

const MOCK_FRAMES = 48;

export function videoIdFor(videoPath: string): string {
  const name = basename(videoPath);
  const dot = name.indexOf(".");
  const id = dot === -1 ? name : name.slice(0, dot);
  if (!id) throw new Error(`cannot derive a video id from ${videoPath}`);
  return id;
}

function mockFps(opts: ExtractOptions): number {
  return opts.fpsCap > 0 ? Math.min(30, opts.fpsCap) : 30;
}

function writeOut(opts: ExtractOptions, fileName: string, content: string): string {
  mkdirSync(opts.outDir, { recursive: true });
  const path = join(opts.outDir, fileName);
  writeFileSync(path, content, "utf-8");
  return path;
}

export function extractKeypoints(videoPath: string, opts: ExtractOptions): string {
  const videoId = videoIdFor(videoPath);
  let content: string;
  if (opts.mock) {
    const fps = mockFps(opts);
    content = keypointStreamLines(videoId, fps, mockKeypointFrames(videoId, MOCK_FRAMES));
  } else {
    content = runBackend("keypoints", videoPath, opts);
  }
  return writeOut(opts, `${videoId}.kps.ndjson`, content);
}

export function extractMotion(videoPath: string, opts: ExtractOptions): string {
  const videoId = videoIdFor(videoPath);
  let content: string;
  if (opts.mock) {
    const fps = mockFps(opts);
    content = motionTrackLines(videoId, "p0", fps, mockMotionFrames(videoId, MOCK_FRAMES, fps));
  } else {
    content = runBackend("motion", videoPath, opts);
  }
  return writeOut(opts, `${videoId}.p0.mot.ndjson`, content);
}

export function extractPrior(videoPath: string, promptFile: string, opts: ExtractOptions): string {
  const videoId = videoIdFor(videoPath);
  // the prompt is a versioned asset and a required input in both modes
  let promptText: string;
  try {
    promptText = readFileSync(promptFile, "utf-8");
  } catch {
    throw new Error(`prompt file not readable: ${promptFile}`);
  }
  if (!promptText.trim()) throw new Error(`prompt file is empty: ${promptFile}`);

  let content: string;
  if (opts.mock) {
    const { positive, negative } = mockLogits();
    content = vlmRecordJson(videoId, positive, negative);
  } else {
    checkReadable(videoPath);
    content = runBackend("prior", videoPath, { ...opts, promptFile });
  }
  return writeOut(opts, `${videoId}.vlm.json`, content);
}
