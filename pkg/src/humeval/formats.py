"""Feature-file schemas: the only doorway through which model outputs enter.

Formats (all consumed and produced here, nowhere else):

``*.kps.ndjson``
    line 1 header ``{"fps": <num>, "video_id": <str>}``, then one frame per
    line: ``{"frame_index": <int>, "persons": [[[x, y, conf] * 133], ...]}``.

``*.mot.ndjson``
    line 1 header ``{"fps": <num>, "joint_count": <int>, "person_id": <str>,
    "video_id": <str>}``, then one frame per line:
    ``{"joint_angles": [[rx, ry, rz] * J], "root_rotation": [w, x, y, z]}``.

``*.vlm.json``
    single object ``{"negative_logit": <num>, "positive_logit": <num>,
    "video_id": <str>}``.

``ratings.csv``
    header ``video_id,model_id,category,acs,mss``.

Canonical serialization is deterministic and parse-stable: keys sorted,
floats printed to 9 significant digits, negative zero collapsed, NaN and
infinities rejected on both paths.  NDJSON keeps long videos line-addressable
so parse errors carry a line number and memory stays bounded.
"""

from __future__ import annotations

import csv
import io
import json

import numpy as np

from .errors import ParseError, RangeError, SchemaError
from .types import (
    KEYPOINT_COUNT,
    QUAT_UNIT_TOL,
    HumanRatingRecord,
    KeypointFrame,
    KeypointStream,
    MotionTrack,
    ScoreReport,
    VlmPriorRecord,
    readonly_array,
)

RATINGS_HEADER = ["video_id", "model_id", "category", "acs", "mss"]

KEYPOINT_SUFFIX = ".kps.ndjson"
MOTION_SUFFIX = ".mot.ndjson"
PRIOR_SUFFIX = ".vlm.json"


# --------------------------------------------------------------------------
# canonical JSON


def _fmt_float(x: float) -> str:
    if x == 0.0:
        x = 0.0  # collapse -0.0 so reserialization is byte-stable
    return format(x, ".9g")


def canonical_json(obj) -> str:
    """Serialize dicts/lists/numbers/strings deterministically."""
    if isinstance(obj, dict):
        items = (f"{json.dumps(k)}:{canonical_json(obj[k])}" for k in sorted(obj))
        return "{" + ",".join(items) + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        return "[" + ",".join(canonical_json(v) for v in obj) + "]"
    if isinstance(obj, bool):
        raise TypeError("booleans are not part of any feature schema")
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt_float(float(obj))
    if isinstance(obj, str):
        return json.dumps(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _reject_constant(token):
    raise ParseError(f"non-finite constant {token!r} not allowed")


def _loads(text: str, line: int | None = None):
    try:
        return json.loads(text, parse_constant=_reject_constant)
    except ParseError:
        raise ParseError(f"non-finite constant in JSON", line=line) from None
    except json.JSONDecodeError as exc:
        raise ParseError(str(exc), line=line) from None


def _as_text(data) -> str:
    if isinstance(data, (bytes, bytearray)):
        try:
            return data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"not valid UTF-8: {exc}") from None
    return data


def _require(obj, key, kinds, line, context):
    if not isinstance(obj, dict):
        raise SchemaError(f"line {line}: {context} must be a JSON object")
    if key not in obj:
        raise SchemaError(f"line {line}: {context} missing field {key!r}")
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, kinds):
        raise SchemaError(f"line {line}: {context} field {key!r} has wrong type")
    return value


def _check_keys(obj, allowed, line, context):
    extra = set(obj) - set(allowed)
    if extra:
        raise SchemaError(f"line {line}: {context} has unknown fields {sorted(extra)}")


def _nonempty_lines(data) -> list[str]:
    lines = _as_text(data).splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty file")
    return lines


# --------------------------------------------------------------------------
# keypoint streams


def parse_keypoint_stream(data) -> KeypointStream:
    """Parse ``*.kps.ndjson`` bytes or text into a validated stream."""
    lines = _nonempty_lines(data)
    header = _loads(lines[0], line=1)
    _check_keys(header, ("fps", "video_id"), 1, "header")
    video_id = _require(header, "video_id", str, 1, "header")
    fps = _require(header, "fps", (int, float), 1, "header")
    if len(lines) < 2:
        raise SchemaError("stream has a header but no frames")

    frames = []
    for lineno, raw in enumerate(lines[1:], start=2):
        obj = _loads(raw, line=lineno)
        _check_keys(obj, ("frame_index", "persons"), lineno, "frame")
        index = _require(obj, "frame_index", int, lineno, "frame")
        persons_raw = _require(obj, "persons", list, lineno, "frame")
        persons = []
        for p, person in enumerate(persons_raw):
            if not isinstance(person, list) or len(person) != KEYPOINT_COUNT:
                raise SchemaError(
                    f"line {lineno}: person {p} must list exactly {KEYPOINT_COUNT} keypoints"
                )
            for kp in person:
                if not isinstance(kp, list) or len(kp) != 3:
                    raise SchemaError(f"line {lineno}: keypoint must be [x, y, confidence]")
            try:
                arr = readonly_array(person, shape=(KEYPOINT_COUNT, 3), name=f"line {lineno}: person {p}")
            except (TypeError, ValueError) as exc:
                if isinstance(exc, SchemaError):
                    raise
                raise SchemaError(f"line {lineno}: person {p}: {exc}") from None
            persons.append(arr)
        try:
            frames.append(KeypointFrame(frame_index=index, persons=tuple(persons)))
        except RangeError as exc:
            raise RangeError(f"line {lineno}: {exc}") from None
    return KeypointStream(video_id=video_id, fps=float(fps), frames=tuple(frames))


def serialize_keypoint_stream(stream: KeypointStream) -> bytes:
    lines = [canonical_json({"fps": stream.fps, "video_id": stream.video_id})]
    for frame in stream.frames:
        lines.append(
            canonical_json(
                {"frame_index": frame.frame_index, "persons": [p.tolist() for p in frame.persons]}
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# motion tracks


def parse_motion_track(data) -> MotionTrack:
    """Parse ``*.mot.ndjson``; quaternions within 1e-6 of unit are renormalized."""
    lines = _nonempty_lines(data)
    header = _loads(lines[0], line=1)
    _check_keys(header, ("fps", "joint_count", "person_id", "video_id"), 1, "header")
    video_id = _require(header, "video_id", str, 1, "header")
    person_id = _require(header, "person_id", str, 1, "header")
    fps = _require(header, "fps", (int, float), 1, "header")
    joint_count = _require(header, "joint_count", int, 1, "header")
    if joint_count < 1:
        raise SchemaError("line 1: joint_count must be positive")
    if len(lines) < 2:
        raise SchemaError("track has a header but no frames")

    rotations = []
    angles = []
    for lineno, raw in enumerate(lines[1:], start=2):
        obj = _loads(raw, line=lineno)
        _check_keys(obj, ("joint_angles", "root_rotation"), lineno, "frame")
        quat = _require(obj, "root_rotation", list, lineno, "frame")
        if len(quat) != 4:
            raise SchemaError(f"line {lineno}: root_rotation must be [w, x, y, z]")
        joints = _require(obj, "joint_angles", list, lineno, "frame")
        if len(joints) != joint_count or not all(
            isinstance(j, list) and len(j) == 3 for j in joints
        ):
            raise SchemaError(f"line {lineno}: joint_angles must be {joint_count} [x, y, z] triples")
        try:
            q = np.asarray(quat, dtype=np.float64)
        except (TypeError, ValueError):
            raise SchemaError(f"line {lineno}: root_rotation must be numeric") from None
        if not np.isfinite(q).all():
            raise RangeError(f"line {lineno}: non-finite quaternion")
        norm = float(np.linalg.norm(q))
        if abs(norm - 1.0) > QUAT_UNIT_TOL:
            raise RangeError(f"line {lineno}: quaternion norm {norm:.9g} beyond unit tolerance")
        # renormalize genuinely off-unit rotations, but leave values inside the
        # canonical 9-digit rounding noise untouched so reserialization is
        # byte-stable
        if abs(norm - 1.0) > 1e-8:
            q = q / norm
        rotations.append(q)
        angles.append(joints)

    try:
        joint_arr = readonly_array(angles, name="joint_angles")
    except (TypeError, ValueError) as exc:
        if isinstance(exc, SchemaError):
            raise
        raise SchemaError(f"joint_angles must be numeric: {exc}") from None
    return MotionTrack(
        video_id=video_id,
        person_id=person_id,
        fps=float(fps),
        root_rotations=readonly_array(rotations, name="root_rotations"),
        joint_angles=joint_arr,
    )


def serialize_motion_track(track: MotionTrack) -> bytes:
    header = {
        "fps": track.fps,
        "joint_count": track.joint_count,
        "person_id": track.person_id,
        "video_id": track.video_id,
    }
    lines = [canonical_json(header)]
    for t in range(track.frame_count):
        lines.append(
            canonical_json(
                {
                    "joint_angles": track.joint_angles[t].tolist(),
                    "root_rotation": track.root_rotations[t].tolist(),
                }
            )
        )
    return ("\n".join(lines) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# prior records


def parse_vlm_record(data) -> VlmPriorRecord:
    obj = _loads(_as_text(data), line=1)
    _check_keys(obj, ("negative_logit", "positive_logit", "video_id"), 1, "record")
    video_id = _require(obj, "video_id", str, 1, "record")
    pos = _require(obj, "positive_logit", (int, float), 1, "record")
    neg = _require(obj, "negative_logit", (int, float), 1, "record")
    return VlmPriorRecord(video_id=video_id, positive_logit=float(pos), negative_logit=float(neg))


def serialize_vlm_record(record: VlmPriorRecord) -> bytes:
    obj = {
        "negative_logit": record.negative_logit,
        "positive_logit": record.positive_logit,
        "video_id": record.video_id,
    }
    return (canonical_json(obj) + "\n").encode("utf-8")


# --------------------------------------------------------------------------
# score reports

REPORT_FLOAT_FIELDS = (
    "s_prior",
    "s_anat_raw",
    "s_anat_norm",
    "q_anat",
    "s_local_raw",
    "s_local_norm",
    "s_global_raw",
    "s_global_norm",
    "s_mot",
    "q_mot",
)


def serialize_reports(reports) -> bytes:
    """One canonical JSON line per report, ordered as given."""
    lines = []
    for rep in reports:
        obj = {"video_id": rep.video_id, "flags": list(rep.flags)}
        for name in REPORT_FLOAT_FIELDS:
            obj[name] = getattr(rep, name)
        lines.append(canonical_json(obj))
    return ("\n".join(lines) + "\n").encode("utf-8")


def parse_reports(data) -> list[ScoreReport]:
    lines = _nonempty_lines(data)
    reports = []
    for lineno, raw in enumerate(lines, start=1):
        obj = _loads(raw, line=lineno)
        _check_keys(obj, ("video_id", "flags") + REPORT_FLOAT_FIELDS, lineno, "report")
        video_id = _require(obj, "video_id", str, lineno, "report")
        flags = _require(obj, "flags", list, lineno, "report")
        if not all(isinstance(f, str) for f in flags):
            raise SchemaError(f"line {lineno}: flags must be strings")
        values = {}
        for name in REPORT_FLOAT_FIELDS:
            values[name] = float(_require(obj, name, (int, float), lineno, "report"))
        try:
            reports.append(ScoreReport(video_id=video_id, flags=tuple(flags), **values))
        except (SchemaError, RangeError) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
    return reports


# --------------------------------------------------------------------------
# human ratings


def parse_ratings(data) -> list[HumanRatingRecord]:
    text = _as_text(data)
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise ParseError("empty file") from None
    if header != RATINGS_HEADER:
        raise SchemaError(f"ratings header must be {','.join(RATINGS_HEADER)}")
    records = []
    for lineno, row in enumerate(reader, start=2):
        if not row:
            continue
        if len(row) != len(RATINGS_HEADER):
            raise SchemaError(f"line {lineno}: expected {len(RATINGS_HEADER)} columns")
        video_id, model_id, category, acs, mss = row
        try:
            acs_v, mss_v = float(acs), float(mss)
        except ValueError:
            raise ParseError(f"ratings must be numeric, got {acs!r}/{mss!r}", line=lineno) from None
        try:
            records.append(
                HumanRatingRecord(
                    video_id=video_id, model_id=model_id, category=category, acs=acs_v, mss=mss_v
                )
            )
        except (SchemaError, RangeError) as exc:
            raise type(exc)(f"line {lineno}: {exc}") from None
    return records


def serialize_ratings(records) -> bytes:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(RATINGS_HEADER)
    for r in records:
        writer.writerow([r.video_id, r.model_id, r.category, f"{r.acs:.3f}", f"{r.mss:.3f}"])
    return out.getvalue().encode("utf-8")
