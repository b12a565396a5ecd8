"""Content-checked JSON cache and canonical serialization.

Entries live one per file as ``kind_param1_param2....json`` holding a
versioned envelope around a canonical-JSON payload with a 64-bit blake2b
checksum.  Writers take an advisory lock and land the file atomically;
readers never lock.  ``docs/schemas.md`` documents the payload schemas.
"""

from __future__ import annotations

import fcntl
import hashlib
import json
import os
from pathlib import Path

from .arith import DomainError
from .planner import (
    GoodDihedral,
    LocalType,
    Plan,
    PlanStep,
    PrincipalSeries,
    Steinberg,
    Supercuspidal,
    SystemDescriptor,
)
from .mlt import MltVerdict

FORMAT_VERSION = 1


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def checksum_of(payload) -> str:
    digest = hashlib.blake2b(canonical_json(payload).encode("utf-8"), digest_size=8)
    return digest.hexdigest()


def resolve_cache_dir(flag: str | None) -> str | None:
    """Cache directory with flag precedence over HECKECHAIN_CACHE_DIR; None
    disables caching."""
    if flag:
        return flag
    return os.environ.get("HECKECHAIN_CACHE_DIR") or None


class Store:
    """One-file-per-entry JSON cache; a None root disables it."""

    KINDS = ("space", "orbits", "edges", "report", "plan")

    def __init__(self, root: str | os.PathLike | None):
        self.root = Path(root) if root is not None else None
        if self.root is not None:
            self.root.mkdir(parents=True, exist_ok=True)

    @property
    def enabled(self) -> bool:
        return self.root is not None

    def _path(self, kind: str, params) -> Path:
        if kind not in self.KINDS:
            raise DomainError(f"unknown cache kind {kind!r}")
        name = "_".join([kind, *[str(p) for p in params]])
        return self.root / f"{name}.json"

    def get(self, kind: str, *params):
        """Payload for the key, or None when absent or caching is off."""
        if not self.enabled:
            return None
        path = self._path(kind, params)
        try:
            raw = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        entry = json.loads(raw)
        if entry.get("format") != FORMAT_VERSION:
            return None
        if checksum_of(entry["payload"]) != entry.get("checksum"):
            raise DomainError(f"cache entry {path} failed its checksum")
        return entry["payload"]

    def put(self, kind: str, payload, *params):
        if not self.enabled:
            return None
        path = self._path(kind, params)
        entry = {
            "format": FORMAT_VERSION,
            "kind": kind,
            "params": list(params),
            "checksum": checksum_of(payload),
            "payload": payload,
        }
        text = json.dumps(entry, sort_keys=True, indent=1, ensure_ascii=False)
        tmp = path.with_name(path.name + f".tmp{os.getpid()}")
        lock_path = path.with_name(path.name + ".lock")
        with open(lock_path, "w") as lock:
            fcntl.flock(lock, fcntl.LOCK_EX)
            try:
                tmp.write_text(text, encoding="utf-8")
                os.replace(tmp, path)
            finally:
                fcntl.flock(lock, fcntl.LOCK_UN)
        return path


# -- descriptor and plan serialization ---------------------------------------

_KIND_NAMES = {
    Steinberg: "steinberg",
    PrincipalSeries: "principal-series",
    Supercuspidal: "supercuspidal",
    GoodDihedral: "good-dihedral",
}


def local_type_to_dict(t: LocalType) -> dict:
    out = {"kind": _KIND_NAMES[type(t)]}
    if isinstance(t, (PrincipalSeries, Supercuspidal)):
        out["char_order"] = t.char_order
        out["wild"] = t.wild
    elif isinstance(t, GoodDihedral):
        out["p"] = t.p
        out["bound"] = t.bound
    return out


def local_type_from_dict(d: dict) -> LocalType:
    kind = d.get("kind")
    if kind == "steinberg":
        return Steinberg()
    if kind == "principal-series":
        return PrincipalSeries(char_order=d.get("char_order", 1), wild=d.get("wild", False))
    if kind == "supercuspidal":
        return Supercuspidal(char_order=d.get("char_order", 1), wild=d.get("wild", False))
    if kind == "good-dihedral":
        return GoodDihedral(p=d["p"], bound=d["bound"])
    raise DomainError(f"unknown local type kind {kind!r}")


def descriptor_to_dict(desc: SystemDescriptor) -> dict:
    return {
        "weight": desc.weight,
        "conductor": {
            str(q): local_type_to_dict(t) for q, t in sorted(desc.conductor.items())
        },
        "dihedral": desc.dihedral,
        "field_degree": desc.field_degree,
        "coeff_degree": desc.coeff_degree,
        "twist_conductor": list(desc.twist_conductor),
    }


def descriptor_from_dict(d: dict) -> SystemDescriptor:
    try:
        weight = d["weight"]
        if isinstance(weight, bool) or not isinstance(weight, int):
            raise TypeError(f"weight must be an integer, got {weight!r}")
        conductor = {
            int(q): local_type_from_dict(t) for q, t in d.get("conductor", {}).items()
        }
        return SystemDescriptor(
            weight=weight,
            conductor=conductor,
            dihedral=d.get("dihedral", False),
            field_degree=d.get("field_degree", 1),
            coeff_degree=d.get("coeff_degree", 1),
            twist_conductor=tuple(d.get("twist_conductor", ())),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DomainError(f"malformed descriptor document: {exc}") from exc


def verdict_to_dict(v: MltVerdict | None) -> dict | None:
    if v is None:
        return None
    return {
        "theorem": v.theorem,
        "conditions": [[name, status] for name, status in v.conditions],
        "applicable": v.applicable,
        "assumption_used": v.assumption_used,
    }


def plan_to_dict(plan: Plan) -> dict:
    return {
        "start": descriptor_to_dict(plan.start),
        "bound": plan.bound,
        "pair": {"p": plan.pair.p, "q": plan.pair.q},
        "aux": plan.aux,
        "steps": [
            {
                "name": s.name,
                "ell": s.ell,
                "audit": s.audit,
                "verdict": verdict_to_dict(s.verdict),
                "after": descriptor_to_dict(s.after),
            }
            for s in plan.steps
        ],
        "final": descriptor_to_dict(plan.final),
    }
