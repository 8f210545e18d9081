import { describe, expect, it } from "vitest";

import { keypointStreamLines, motionTrackLines, vlmRecordJson } from "../src/formats.js";
import { mockKeypointFrames, mockLogits, mockMotionFrames } from "../src/mock.js";
import { Rng } from "../src/prng.js";

describe("keypoint stream writer", () => {
  it("emits a header and one line per frame", () => {
    const lines = keypointStreamLines("v1", 30, mockKeypointFrames("v1", 5)).trim().split("\n");
    expect(lines).toHaveLength(6);
    expect(JSON.parse(lines[0])).toEqual({ fps: 30, video_id: "v1" });
    const frame = JSON.parse(lines[1]);
    expect(frame.frame_index).toBe(0);
    expect(frame.persons[0]).toHaveLength(133);
  });

  it("rejects confidence outside [0, 1]", () => {
    const frames = mockKeypointFrames("v1", 1);
    frames[0].persons[0][7][2] = 1.5;
    expect(() => keypointStreamLines("v1", 30, frames)).toThrow(/confidence/);
  });

  it("rejects short keypoint lists", () => {
    const frames = mockKeypointFrames("v1", 1);
    frames[0].persons[0].pop();
    expect(() => keypointStreamLines("v1", 30, frames)).toThrow(/133/);
  });
});

describe("motion track writer", () => {
  it("emits unit quaternions and 22 joints per frame", () => {
    const frames = mockMotionFrames("v2", 8, 30);
    const lines = motionTrackLines("v2", "p0", 30, frames).trim().split("\n");
    expect(JSON.parse(lines[0])).toEqual({
      fps: 30, joint_count: 22, person_id: "p0", video_id: "v2",
    });
    const frame = JSON.parse(lines[3]);
    const [w, x, y, z] = frame.root_rotation;
    expect(Math.hypot(w, x, y, z)).toBeCloseTo(1, 9);
    expect(frame.joint_angles).toHaveLength(22);
  });

  it("rejects off-unit quaternions", () => {
    const frames = mockMotionFrames("v2", 2, 30);
    frames[1].rootRotation = [0.9, 0, 0, 0];
    expect(() => motionTrackLines("v2", "p0", 30, frames)).toThrow(/quaternion/);
  });
});

describe("prior record writer", () => {
  it("mock logits map to the known softmax reference", () => {
    const { positive, negative } = mockLogits();
    const record = JSON.parse(vlmRecordJson("v3", positive, negative));
    expect(record).toEqual({ negative_logit: 0, positive_logit: 1, video_id: "v3" });
    const softmax = 1 / (1 + Math.exp(-(record.positive_logit - record.negative_logit)));
    expect(softmax).toBeCloseTo(0.7310585786300049, 12);
  });

  it("rejects non-finite logits", () => {
    expect(() => vlmRecordJson("v3", Number.NaN, 0)).toThrow(/finite/);
  });
});

describe("seeded prng", () => {
  it("is deterministic per seed string", () => {
    const a = new Rng("kps:demo");
    const b = new Rng("kps:demo");
    for (let i = 0; i < 100; i++) expect(a.next()).toBe(b.next());
  });

  it("differs across seeds", () => {
    expect(new Rng("a").next()).not.toBe(new Rng("b").next());
  });
});
