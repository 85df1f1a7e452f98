"""JSON encoding for every library object the command line reads or writes.

Integers outside the signed 64-bit range are written as decimal strings and
read back from either form.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .genus import GenusModel, ManifoldModel
from .lattice import HClass, Lattice
from .nicety import Decomposition, NicetyCertificate
from .swfamilies import FamilyDescriptor

SCHEMA_VERSION = "1"
_I64 = 2**63


class SchemaError(ValueError):
    pass


def enc_int(x: int):
    return str(x) if not -_I64 <= x < _I64 else x


def dec_int(x) -> int:
    if isinstance(x, bool):
        raise SchemaError(f"expected integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x.strip())
        except ValueError:
            pass
    raise SchemaError(f"expected integer, got {x!r}")


def _ints(xs) -> list:
    return [enc_int(x) for x in xs]


def _dints(xs) -> tuple[int, ...]:
    if not isinstance(xs, list):
        raise SchemaError(f"expected a list of integers, got {xs!r}")
    return tuple(dec_int(x) for x in xs)


def _get(d: dict, key: str):
    try:
        return d[key]
    except (KeyError, TypeError):
        raise SchemaError(f"missing field {key!r}") from None


def lattice_to_json(L: Lattice) -> dict:
    return {"rank": L.rank, "torsion": _ints(L.torsion), "form": [_ints(r) for r in L.form]}


def lattice_from_json(d: dict) -> Lattice:
    form = d.get("form")
    return Lattice(
        dec_int(_get(d, "rank")),
        _dints(d.get("torsion", [])),
        None if form is None else tuple(_dints(r) for r in form),
    )


def class_to_json(c: HClass) -> dict:
    return {"coords": _ints(c.coords), "torsion": _ints(c.torsion_part)}


def class_from_json(d, L: Lattice) -> HClass:
    if isinstance(d, list):
        return HClass(L, _dints(d))
    return HClass(L, _dints(_get(d, "coords")), _dints(d.get("torsion", [])) or None)


def genus_model_to_json(G: GenusModel) -> dict:
    return {
        "lattice": lattice_to_json(G.lattice),
        "table": [[class_to_json(HClass(G.lattice, k)), enc_int(g)] for k, g in sorted(G.table.items())],
        "default_rule": {"kind": "divisibility_linear", "slope": enc_int(G.slope), "offset": enc_int(G.offset)},
    }


def genus_model_from_json(d: dict) -> GenusModel:
    L = lattice_from_json(_get(d, "lattice"))
    table = {}
    for entry in d.get("table", []):
        if not (isinstance(entry, list) and len(entry) == 2):
            raise SchemaError(f"table entries are [class, genus] pairs, got {entry!r}")
        table[class_from_json(entry[0], L).coords] = dec_int(entry[1])
    rule = d.get("default_rule", {"kind": "divisibility_linear", "slope": 1, "offset": 0})
    if rule.get("kind") != "divisibility_linear":
        raise SchemaError(f"unknown default rule kind {rule.get('kind')!r}")
    return GenusModel(L, table, dec_int(rule.get("slope", 1)), dec_int(rule.get("offset", 0)))


def manifold_to_json(M: ManifoldModel) -> dict:
    return {
        "label": M.label,
        "lattice": lattice_to_json(M.lattice),
        "b2_plus_gt_1": M.b2_plus_gt_1,
        "simple_type": M.simple_type,
        "closed": M.closed,
        "b1_boundary": M.b1_boundary,
        "class_set_kind": M.class_set_kind,
        "class_set": [class_to_json(c) for c in M.class_set],
        "nice_subset": [class_to_json(c) for c in M.nice_subset],
        "degenerate": M.degenerate,
    }


def manifold_from_json(d: dict) -> ManifoldModel:
    L = lattice_from_json(_get(d, "lattice"))
    nice = d.get("nice_subset")
    return ManifoldModel(
        lattice=L,
        b2_plus_gt_1=bool(_get(d, "b2_plus_gt_1")),
        simple_type=bool(_get(d, "simple_type")),
        closed=bool(_get(d, "closed")),
        b1_boundary=dec_int(d.get("b1_boundary", 0)),
        class_set_kind=_get(d, "class_set_kind"),
        class_set=tuple(class_from_json(c, L) for c in _get(d, "class_set")),
        label=d.get("label", ""),
        degenerate=bool(d.get("degenerate", False)),
        nice_subset=None if nice is None else tuple(class_from_json(c, L) for c in nice),
    )


def descriptor_to_json(desc: FamilyDescriptor) -> dict:
    return {"kind": desc.kind, "parameters": dict(desc.parameters), "index_range": list(desc.index_range)}


def family_to_json(desc: FamilyDescriptor, members) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "descriptor": descriptor_to_json(desc),
        "members": [manifold_to_json(M) for M in members],
    }


def family_from_json(d) -> tuple[dict | None, list[ManifoldModel]]:
    """Accepts ``{"descriptor": ..., "members": [...]}`` or a bare member list."""
    if isinstance(d, list):
        return None, [manifold_from_json(m) for m in d]
    return d.get("descriptor"), [manifold_from_json(m) for m in _get(d, "members")]


def certificate_to_json(cert: NicetyCertificate) -> dict:
    return {
        "n": cert.n,
        "verified": cert.verified,
        "failure_reason": cert.failure_reason,
        "per_member": [
            {"m": dec.m, "K": [class_to_json(k) for k in dec.K], "a": _ints(dec.a)}
            for dec in cert.per_member
        ],
    }


def certificate_from_json(d: dict, lattices) -> NicetyCertificate:
    per = []
    for dec, L in zip(_get(d, "per_member"), lattices):
        per.append(Decomposition(tuple(class_from_json(k, L) for k in _get(dec, "K")), _dints(_get(dec, "a"))))
    return NicetyCertificate(dec_int(_get(d, "n")), tuple(per), bool(d.get("verified", False)), d.get("failure_reason"))


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, ensure_ascii=False)


def load(path) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON ({exc})") from exc
