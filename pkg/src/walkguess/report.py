"""Run manifests, terms files and report documents.

The structured (JSON) report is the contract; the text report is rendered
from it.  Everything that varies between identical runs (timestamp, wall
time) lives in ``header``; ``manifest`` and ``body`` are deterministic.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from datetime import datetime, timezone
from fractions import Fraction
from pathlib import Path

from . import __version__
from .guess.fitting import verification_details
from .guess.grammar import format_relation, parse_relation
from .guess.relations import GuessReport, PolynomialFormula, Recurrence
from .walks import StepSet, stepset_to_text

TOOL = "walkguess"


def run_manifest(kind: str, **inputs) -> dict:
    """Semantic inputs plus a run id that is a pure function of them."""
    semantic = {"tool": TOOL, "version": __version__, "command": kind, **inputs}
    blob = json.dumps(semantic, sort_keys=True, separators=(",", ":"))
    semantic["run_id"] = hashlib.sha256(blob.encode()).hexdigest()[:16]
    return semantic


def header(elapsed: float | None = None) -> dict:
    h = {"timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}
    if elapsed is not None:
        h["elapsed_seconds"] = round(elapsed, 3)
    return h


def stepset_doc(s: StepSet) -> dict:
    return json.loads(stepset_to_text(s))


def atomic_write(path: str | os.PathLike, text: str) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# -- terms files ---------------------------------------------------------------

def format_terms(terms, manifest: dict | None = None) -> str:
    lines = []
    for key, value in (manifest or {}).items():
        lines.append(f"# {key}: {json.dumps(value, sort_keys=True)}")
    lines.extend(str(Fraction(t)) for t in terms)
    return "\n".join(lines) + "\n"


class TermsFileError(ValueError):
    pass


def parse_terms(text: str) -> tuple[list[Fraction], dict]:
    terms = []
    meta = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                k, _, v = body.partition(":")
                try:
                    meta[k.strip()] = json.loads(v)
                except json.JSONDecodeError:
                    meta[k.strip()] = v.strip()
            continue
        try:
            terms.append(Fraction(line))
        except ValueError:
            raise TermsFileError(f"line {lineno}: {line!r} is not an exact rational") from None
        if "." in line or "e" in line.lower():
            raise TermsFileError(f"line {lineno}: {line!r} is a decimal, not an exact rational")
    return terms, meta


# -- guess reports -------------------------------------------------------------

def relation_text(rel) -> str | None:
    if rel is None:
        return None
    if isinstance(rel, PolynomialFormula):
        return str(rel)
    return format_relation(rel)


def guess_entry(rep: GuessReport) -> dict:
    entry = {
        "ansatz": rep.kind,
        "status": rep.status,
        "relation": relation_text(rep.relation),
        "shape": list(rep.shape) if rep.shape else None,
        "fit_terms": rep.fit_terms,
        "verify_terms": rep.verify_terms,
        "verification_depth": rep.verification_depth,
        "shapes_tried": rep.shapes_tried,
        "bounds_reached": list(rep.bounds_reached) if rep.bounds_reached else None,
        "kernel_dim": rep.kernel_dim,
        "notes": list(rep.notes),
        "degenerate": rep.degenerate,
    }
    if isinstance(rep.relation, Recurrence):
        entry["initial_values"] = [str(v) for v in rep.relation.initial]
        entry["exceptional_indices"] = list(rep.relation.exceptional)
        entry["skipped_indices"] = list(rep.skipped)
    return entry


def check_roundtrip(doc: dict) -> bool:
    """Every relation string in a report parses back to itself."""
    for g in doc.get("body", {}).get("guesses", []):
        text = g.get("relation")
        if text and g["ansatz"] != "poly":
            if format_relation(parse_relation(text)) != text:
                return False
    return True


def check_entry(rel, terms, from_index: int = 0) -> dict:
    v = verification_details(rel, terms, from_index)
    if v.first_failure is not None:
        status = "failed"
    elif v.skipped:
        status = "partial"
    else:
        status = "full"
    return {
        "relation": relation_text(rel),
        "status": status,
        "verification_depth": v.depth,
        "first_bad_index": v.first_failure,
        "skipped_indices": list(v.skipped),
        "last_index": v.last_index,
    }


def dumps(doc: dict) -> str:
    return json.dumps(doc, indent=2, sort_keys=False) + "\n"


def body_bytes(doc: dict) -> bytes:
    """The deterministic part of a report (manifest + body)."""
    return json.dumps({"manifest": doc["manifest"], "body": doc["body"]}, sort_keys=True).encode()


def render_text(doc: dict) -> str:
    m = doc["manifest"]
    b = doc["body"]
    out = [f"{TOOL} {m['version']} -- {m['command']}  (run {m['run_id']})"]
    if "steps" in m:
        out.append(f"steps: {json.dumps(m['steps'])}   mode: {m.get('mode')}")
    if "terms" in b:
        shown = b["terms"][:20]
        more = "" if len(b["terms"]) <= 20 else f", ... ({len(b['terms'])} terms)"
        out.append("terms: " + ", ".join(shown) + more)
    comp = b.get("compression")
    if comp and comp["period"] > 1:
        out.append(f"compressed: period {comp['period']}, residue {comp['residue']}")
    for g in b.get("guesses", []):
        out.append("")
        label = g["ansatz"] + (f" {g['mode']}" if "mode" in g else "")
        out.append(f"[{label}] {g['status']}")
        if g["relation"]:
            out.append(f"  {g['relation']}")
            out.append(
                f"  shape {g['shape']}, fitted on {g['fit_terms']} terms, "
                f"verified to depth {g['verification_depth']} on {g['verify_terms']} held-out terms"
            )
        for note in g["notes"]:
            out.append(f"  note: {note}")
    for c in b.get("checks", []):
        out.append(f"{'PASS' if c['ok'] else 'FAIL'}  {c['name']}: {c.get('detail', '')}".rstrip())
    for c in b.get("verifications", []):
        out.append(
            f"{c['status']}: depth {c['verification_depth']}"
            + (f", first bad index {c['first_bad_index']}" if c["first_bad_index"] is not None else "")
            + (f", skipped {c['skipped_indices']}" if c["skipped_indices"] else "")
        )
    out.append("")
    out.append(f"status: {b['status']}")
    return "\n".join(out) + "\n"
