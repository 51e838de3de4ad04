"""JSON documents for state sets and certification reports (format version "1").

A state set document looks like::

    {"format_version": "1", "shape": [2, 2],
     "states": [{"label": "|00>", "amplitudes": [[1.0, 0.0], [0.0, 0.0], ...]}, ...]}
"""

from __future__ import annotations

import json
import logging
import math
from pathlib import Path

import numpy as np

from .certifiers import CertificateReport, MemberOutcome, SeesawOptions
from .errors import UBKitError
from .linalg import PureState, StateSet, SystemShape

log = logging.getLogger(__name__)

FORMAT_VERSION = "1"
LOAD_NORM_TOL = 1e-9
RENORMALIZE_TOL = 1e-6


class DocumentError(UBKitError):
    pass


def state_to_dict(state: PureState) -> dict:
    return {
        "label": state.label,
        "amplitudes": [[float(z.real), float(z.imag)] for z in state.amplitudes],
    }


def stateset_to_dict(S: StateSet) -> dict:
    return {
        "format_version": FORMAT_VERSION,
        "shape": list(S.shape.dims),
        "states": [state_to_dict(s) for s in S],
    }


def state_from_dict(entry: dict, shape: SystemShape, position: int = 0) -> PureState:
    label = entry.get("label") or f"#{position + 1}"
    try:
        amps = np.array([complex(float(re), float(im)) for re, im in entry["amplitudes"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise DocumentError(f"state {label!r}: amplitudes must be a list of [re, im] pairs") from exc
    if amps.size != shape.total:
        raise DocumentError(f"state {label!r} has {amps.size} amplitudes, shape {shape} needs {shape.total}")
    norm = float(np.linalg.norm(amps))
    if not math.isfinite(norm) or abs(norm - 1) > RENORMALIZE_TOL:
        raise DocumentError(f"state {label!r} has norm {norm!r}; expected 1")
    if abs(norm - 1) > LOAD_NORM_TOL:
        log.warning("state %r has norm %r; renormalizing", label, norm)
    if abs(norm - 1) > 1e-12:
        amps = amps / norm
    return PureState(shape, amps, label)


def stateset_from_dict(doc: dict) -> StateSet:
    if not isinstance(doc, dict):
        raise DocumentError("state set document must be a JSON object")
    version = str(doc.get("format_version", ""))
    if version != FORMAT_VERSION:
        raise DocumentError(f"unsupported format_version {version!r}")
    try:
        shape = SystemShape(doc["shape"])
        entries = doc["states"]
    except KeyError as exc:
        raise DocumentError(f"missing field {exc}") from exc
    states = [state_from_dict(e, shape, i) for i, e in enumerate(entries)]
    return StateSet(shape, tuple(states))


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2) + "\n"


def save_stateset(S: StateSet, path) -> None:
    Path(path).write_text(dumps(stateset_to_dict(S)))


def read_json(path) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise DocumentError(f"{path}: malformed JSON ({exc})") from exc
    except OSError as exc:
        raise DocumentError(f"{path}: {exc.strerror}") from exc


def load_stateset(path) -> StateSet:
    doc = read_json(path)
    # a report carries its input set under "input"
    if "states" not in doc and "input" in doc:
        doc = doc["input"]
    return stateset_from_dict(doc)


def outcome_to_dict(o: MemberOutcome) -> dict:
    entry = {
        "member": o.index + 1,
        "label": o.label,
        "status": "certified" if o.certified else "none_found",
        "best_value": o.best_value,
        "best_membership": o.best_membership,
        "best_verified_overlap": o.best_verified_overlap,
        "restarts_used": o.restarts_used,
    }
    if o.certificate is not None:
        entry["residual"] = o.certificate.residual
        entry["overlap"] = o.certificate.overlap
        entry["certificate"] = state_to_dict(o.certificate.state)
    return entry


def certificate_report_to_dict(report: CertificateReport) -> dict:
    return {
        "verdict": report.verdict,
        "failing_members": [i + 1 for i in report.failing],
        "members": [outcome_to_dict(o) for o in report.outcomes],
    }


def report_document(command, opts: SeesawOptions | None, input_set: StateSet | None, **body) -> dict:
    doc = {"format_version": FORMAT_VERSION, "command": list(command)}
    if opts is not None:
        doc["options"] = opts.to_dict()
    if input_set is not None:
        doc["input"] = stateset_to_dict(input_set)
    doc.update(body)
    return doc


def certificates_from_report(doc: dict, shape: SystemShape) -> list[tuple[int, PureState]]:
    """``(member index, state)`` pairs for every certificate in a report document."""
    members = doc.get("members")
    if members is None:
        members = doc.get("certification", {}).get("members", [])
    out = []
    for entry in members:
        if "certificate" in entry:
            out.append((int(entry["member"]) - 1, state_from_dict(entry["certificate"], shape)))
    return out
