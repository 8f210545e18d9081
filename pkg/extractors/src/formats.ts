/**
 * Writers for the humeval feature-file formats. The engine owns the schema
 * contract; these helpers only guarantee adapters emit files it parses with
 * zero errors. Adapters never compute scores.
 */

export const KEYPOINT_COUNT = 133;
export const JOINT_COUNT = 22;

export type Keypoint = [number, number, number]; // x, y, confidence
export type KeypointFrame = { frameIndex: number; persons: Keypoint[][] };
export type MotionFrame = { rootRotation: [number, number, number, number]; jointAngles: number[][] };

function assertFinite(value: number, what: string): void {
  if (!Number.isFinite(value)) throw new Error(`${what} is not finite`);
}

export function keypointStreamLines(videoId: string, fps: number, frames: KeypointFrame[]): string {
  assertFinite(fps, "fps");
  const lines = [JSON.stringify({ fps, video_id: videoId })];
  for (const frame of frames) {
    for (const person of frame.persons) {
      if (person.length !== KEYPOINT_COUNT) {
        throw new Error(`person must have ${KEYPOINT_COUNT} keypoints, got ${person.length}`);
      }
      for (const [x, y, conf] of person) {
        assertFinite(x, "x");
        assertFinite(y, "y");
        if (!(conf >= 0 && conf <= 1)) throw new Error(`confidence ${conf} outside [0, 1]`);
      }
    }
    lines.push(JSON.stringify({ frame_index: frame.frameIndex, persons: frame.persons }));
  }
  return lines.join("\n") + "\n";
}

export function motionTrackLines(
  videoId: string,
  personId: string,
  fps: number,
  frames: MotionFrame[],
): string {
  assertFinite(fps, "fps");
  const lines = [
    JSON.stringify({ fps, joint_count: JOINT_COUNT, person_id: personId, video_id: videoId }),
  ];
  for (const frame of frames) {
    const [w, x, y, z] = frame.rootRotation;
    const norm = Math.hypot(w, x, y, z);
    if (Math.abs(norm - 1) > 1e-6) throw new Error(`quaternion norm ${norm} off unit`);
    if (frame.jointAngles.length !== JOINT_COUNT) {
      throw new Error(`expected ${JOINT_COUNT} joints, got ${frame.jointAngles.length}`);
    }
    lines.push(
      JSON.stringify({ joint_angles: frame.jointAngles, root_rotation: frame.rootRotation }),
    );
  }
  return lines.join("\n") + "\n";
}

export function vlmRecordJson(videoId: string, positiveLogit: number, negativeLogit: number): string {
  assertFinite(positiveLogit, "positive logit");
  assertFinite(negativeLogit, "negative logit");
  return (
    JSON.stringify({
      negative_logit: negativeLogit,
      positive_logit: positiveLogit,
      video_id: videoId,
    }) + "\n"
  );
}
