#!/usr/bin/env node
/**
 * humeval-extract: run the external models (or their mocks) and emit
 * feature files the scoring engine parses as-is.
 */

import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import yargs from "yargs";
import type { Argv } from "yargs";
import { hideBin } from "yargs/helpers";

import { extractKeypoints, extractMotion, extractPrior } from "./adapters.js";
import { runBatch } from "./batch.js";

const DEFAULT_PROMPT = join(
  dirname(fileURLToPath(import.meta.url)), "..", "prompts", "quality_prompt_v1.txt",
);

interface CommonArgs {
  video: string;
  out: string;
  mock: boolean;
  device: string;
  "fps-cap": number;
  prompt?: string;
}

function commonOptions(argv: Argv) {
  return argv
    .option("out", { type: "string", demandOption: true, describe: "output directory" })
    .option("mock", { type: "boolean", default: false, describe: "emit synthetic features, no model" })
    .option("device", { type: "string", default: "cpu", describe: "forwarded to the model backend" })
    .option("fps-cap", { type: "number", default: 30, describe: "maximum frames per second to decode" });
}

function extractOptions(args: CommonArgs) {
  return { mock: args.mock, outDir: args.out, device: args.device, fpsCap: args["fps-cap"] };
}

function fail(error: unknown): never {
  const message = error instanceof Error ? error.message : String(error);
  console.error(JSON.stringify({ error: "ExtractionError", message }));
  process.exit(1);
}

async function main(): Promise<void> {
  await yargs(hideBin(process.argv))
    .scriptName("humeval-extract")
    .command(
      "keypoints <video>",
      "2D pose keypoints with confidences (*.kps.ndjson)",
      (y) => commonOptions(y.positional("video", { type: "string", demandOption: true })),
      (argv) => {
        const args = argv as unknown as CommonArgs;
        try {
          console.log(extractKeypoints(args.video, extractOptions(args)));
        } catch (error) {
          fail(error);
        }
      },
    )
    .command(
      "motion <video>",
      "3D joint angles and root orientation (*.mot.ndjson)",
      (y) => commonOptions(y.positional("video", { type: "string", demandOption: true })),
      (argv) => {
        const args = argv as unknown as CommonArgs;
        try {
          console.log(extractMotion(args.video, extractOptions(args)));
        } catch (error) {
          fail(error);
        }
      },
    )
    .command(
      "prior <video>",
      "yes/no logit pair from the visual-quality prompt (*.vlm.json)",
      (y) =>
        commonOptions(y.positional("video", { type: "string", demandOption: true })).option(
          "prompt",
          { type: "string", default: DEFAULT_PROMPT, describe: "prompt text asset" },
        ),
      (argv) => {
        const args = argv as unknown as CommonArgs;
        try {
          console.log(extractPrior(args.video, args.prompt ?? DEFAULT_PROMPT, extractOptions(args)));
        } catch (error) {
          fail(error);
        }
      },
    )
    .command(
      "batch <videos>",
      "extract several kinds for every video in a directory",
      (y) =>
        commonOptions(y.positional("videos", { type: "string", demandOption: true }))
          .option("kinds", { type: "string", default: "keypoints,motion,prior" })
          .option("prompt", { type: "string", default: DEFAULT_PROMPT })
          .option("jobs", { type: "number", default: 0, describe: "process pool size (0 = CPU count)" })
          .option("any-extension", { type: "boolean", default: false, describe: "treat every file as a video" }),
      async (argv) => {
        const args = argv as unknown as CommonArgs & {
          videos: string;
          kinds: string;
          jobs: number;
          "any-extension": boolean;
        };
        try {
          const failures = await runBatch({
            videosDir: args.videos,
            outDir: args.out,
            kinds: args.kinds.split(",").map((k) => k.trim()).filter(Boolean),
            mock: args.mock,
            device: args.device,
            fpsCap: args["fps-cap"],
            prompt: args.prompt,
            jobs: args.jobs,
            anyExtension: args["any-extension"],
          });
          if (failures.length > 0) {
            console.error(JSON.stringify({ error: "BatchFailures", failures }));
            process.exit(1);
          }
        } catch (error) {
          fail(error);
        }
      },
    )
    .demandCommand(1)
    .strict()
    .help()
    .parseAsync();
}

main().catch(fail);
