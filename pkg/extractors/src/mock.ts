/**
 * Mock backends: schema-valid synthetic features without any model download.
 * Deterministic per video id (seeded by hashing the id), so repeated runs
 * and parallel batch workers produce identical bytes.
 */

import { JOINT_COUNT, KEYPOINT_COUNT, KeypointFrame, MotionFrame } from "./formats.js";
import { Rng } from "./prng.js";

export function mockKeypointFrames(videoId: string, frameCount: number): KeypointFrame[] {
  const rng = new Rng(`kps:${videoId}`);
  const baseConf = rng.uniform(0.55, 0.95);
  let cx = rng.uniform(400, 1500);
  let cy = rng.uniform(300, 800);
  const frames: KeypointFrame[] = [];
  for (let t = 0; t < frameCount; t++) {
    cx += rng.normal(0, 3);
    cy += rng.normal(0, 3);
    const person: [number, number, number][] = [];
    for (let k = 0; k < KEYPOINT_COUNT; k++) {
      const conf = Math.min(1, Math.max(0, baseConf + rng.normal(0, 0.03)));
      person.push([cx + rng.normal(0, 40), cy + rng.normal(0, 60), conf]);
    }
    frames.push({ frameIndex: t, persons: [person] });
  }
  return frames;
}

export function mockMotionFrames(videoId: string, frameCount: number, fps: number): MotionFrame[] {
  const rng = new Rng(`mot:${videoId}`);
  const yaw0 = rng.uniform(0, 2 * Math.PI);
  const yawRate = (rng.uniform(-20, 20) * Math.PI) / 180; // rad/s, slow turn
  const joint = Array.from({ length: JOINT_COUNT }, () => ({
    offset: [rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)],
    amp: [rng.uniform(0.02, 0.12), rng.uniform(0.02, 0.12), rng.uniform(0.02, 0.12)],
    period: [rng.uniform(1.0, 4.0), rng.uniform(1.0, 4.0), rng.uniform(1.0, 4.0)],
    phase: [rng.uniform(0, 2 * Math.PI), rng.uniform(0, 2 * Math.PI), rng.uniform(0, 2 * Math.PI)],
  }));

  const frames: MotionFrame[] = [];
  for (let t = 0; t < frameCount; t++) {
    const time = t / fps;
    const yaw = yaw0 + yawRate * time;
    const half = yaw / 2;
    // yaw about world up, y-up right-handed frame, (w, x, y, z)
    const rootRotation: [number, number, number, number] = [
      Math.cos(half),
      0,
      Math.sin(half),
      0,
    ];
    const jointAngles = joint.map((j) =>
      [0, 1, 2].map(
        (c) => j.offset[c] + j.amp[c] * Math.sin((2 * Math.PI * time) / j.period[c] + j.phase[c]),
      ),
    );
    frames.push({ rootRotation, jointAngles });
  }
  return frames;
}

/**
 * Fixed mock logits: positive 1.0, negative 0.0. Downstream softmax gives
 * 1 / (1 + e^-1) ~ 0.7311, handy as a known reference value in tests.
 */
export function mockLogits(): { positive: number; negative: number } {
  return { positive: 1.0, negative: 0.0 };
}
