"""JSON document formats and validation.

One structure, module, complex, or chain map per file; cross-references are
relative paths resolved against the referencing file's directory.  All
indices are 0-based integers; ternary tables are flattened row-major in
(a, b, c) and action tables in (a, b, x, gamma).
"""

from __future__ import annotations

import hashlib
import json
from pathlib import Path

from .errors import InputError
from .homology import ChainComplex, ChainMap
from .modules import GammaModule, ModuleMorphism
from .structures import FormulaFamily, GammaSemiring


def canonical_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def sha256_of(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def _read_json(path) -> dict:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError("cannot read %s: %s" % (path, exc)) from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError("%s: malformed JSON: %s" % (path, exc)) from None
    if not isinstance(doc, dict):
        raise InputError("%s: top-level value must be an object" % path)
    return doc


def _int_list(doc, key, path, length=None):
    v = doc.get(key)
    if not isinstance(v, list) or any(not isinstance(x, int) for x in v):
        raise InputError("%s: %r must be a list of integers" % (path, key))
    if length is not None and len(v) != length:
        raise InputError("%s: %r must have length %d, got %d" % (path, key, length, len(v)))
    return v


def _square(doc, key, n, path):
    v = doc.get(key)
    if (not isinstance(v, list) or len(v) != n
            or any(not isinstance(r, list) or len(r) != n for r in v)
            or any(not isinstance(x, int) for r in v for x in r)):
        raise InputError("%s: %r must be an %d x %d integer array" % (path, key, n, n))
    return v


def is_structure_doc(doc: dict) -> bool:
    return "carrier" in doc and "tern" in doc


def is_family_doc(doc: dict) -> bool:
    return "family" in doc


def load_structure(path) -> GammaSemiring:
    doc = _read_json(path)
    if not is_structure_doc(doc):
        raise InputError("%s: not a structure document (carrier/tern missing)" % path)
    n = doc.get("carrier")
    if not isinstance(n, int) or n < 1:
        raise InputError("%s: carrier must be a positive integer" % path)
    if doc.get("zero", 0) != 0:
        raise InputError("%s: zero must be element 0" % path)
    add = _square(doc, "add", n, path)
    gammas = doc.get("gammas")
    if (not isinstance(gammas, list) or not gammas
            or any(not isinstance(g, str) for g in gammas)):
        raise InputError("%s: gammas must be a nonempty list of labels" % path)
    tern_doc = doc.get("tern")
    if not isinstance(tern_doc, dict) or set(tern_doc) != set(gammas):
        raise InputError("%s: tern must map every gamma label to a table" % path)
    tern = []
    for g in gammas:
        flat = tern_doc[g]
        if (not isinstance(flat, list) or len(flat) != n ** 3
                or any(not isinstance(x, int) for x in flat)):
            raise InputError(
                "%s: tern[%r] must be a flat list of %d integers" % (path, g, n ** 3))
        tern.append(tuple(
            tuple(tuple(flat[(a * n + b) * n + c] for c in range(n)) for b in range(n))
            for a in range(n)
        ))
    try:
        return GammaSemiring(
            carrier_size=n,
            gamma_labels=tuple(gammas),
            add=tuple(tuple(r) for r in add),
            tern=tuple(tern),
        )
    except InputError as exc:
        raise InputError("%s: %s" % (path, exc)) from None


def structure_to_doc(T: GammaSemiring) -> dict:
    n = T.carrier_size
    return {
        "carrier": n,
        "zero": 0,
        "add": [list(r) for r in T.add],
        "gammas": list(T.gamma_labels),
        "tern": {
            T.gamma_labels[g]: [
                T.tern[g][a][b][c]
                for a in range(n) for b in range(n) for c in range(n)
            ]
            for g in T.modes()
        },
    }


def load_family(path) -> tuple[FormulaFamily, int, list[int] | None]:
    doc = _read_json(path)
    if not is_family_doc(doc):
        raise InputError("%s: not a formula-family document" % path)
    fam = FormulaFamily.by_name(doc["family"])
    window = doc.get("window")
    if not isinstance(window, int) or window < 1:
        raise InputError("%s: window must be an integer >= 1" % path)
    gammas = doc.get("gammas")
    if gammas is not None:
        if not isinstance(gammas, list) or any(
            not isinstance(g, int) or g < 0 for g in gammas
        ):
            raise InputError("%s: gammas must be a list of naturals" % path)
    return fam, window, gammas


def family_to_doc(name: str, window: int, gammas=None) -> dict:
    doc = {"family": name, "window": window}
    if gammas is not None:
        doc["gammas"] = list(gammas)
    return doc


def load_module(path, expected_structure: GammaSemiring | None = None) -> tuple[GammaModule, Path]:
    path = Path(path)
    doc = _read_json(path)
    over_ref = doc.get("over")
    if not isinstance(over_ref, str):
        raise InputError("%s: 'over' must be a relative structure path" % path)
    over_path = (path.parent / over_ref).resolve()
    T = load_structure(over_path)
    if expected_structure is not None and T != expected_structure:
        raise InputError(
            "%s: module is over %s, which differs from the given structure"
            % (path, over_path))
    m = doc.get("carrier")
    if not isinstance(m, int) or m < 1:
        raise InputError("%s: carrier must be a positive integer" % path)
    add = _square(doc, "add", m, path)
    n = T.carrier_size
    k = T.gamma_count
    flat = _int_list(doc, "action", path, length=n * n * m * k)
    action = tuple(
        tuple(
            tuple(
                tuple(flat[((a * n + b) * m + x) * k + g] for g in range(k))
                for x in range(m)
            )
            for b in range(n)
        )
        for a in range(n)
    )
    try:
        M = GammaModule(
            over=T, carrier_size=m,
            add=tuple(tuple(r) for r in add),
            action=action,
        )
    except InputError as exc:
        raise InputError("%s: %s" % (path, exc)) from None
    return M, over_path


def module_to_doc(M: GammaModule, over_ref: str) -> dict:
    n = M.over.carrier_size
    k = M.over.gamma_count
    m = M.carrier_size
    return {
        "over": over_ref,
        "carrier": m,
        "add": [list(r) for r in M.add],
        "action": [
            M.action[a][b][x][g]
            for a in range(n) for b in range(n) for x in range(m) for g in range(k)
        ],
    }


def load_complex(path, expected_structure: GammaSemiring | None = None) -> ChainComplex:
    path = Path(path)
    doc = _read_json(path)
    over_ref = doc.get("over")
    if not isinstance(over_ref, str):
        raise InputError("%s: 'over' must be a relative structure path" % path)
    T = load_structure((path.parent / over_ref).resolve())
    if expected_structure is not None and T != expected_structure:
        raise InputError("%s: complex is over a different structure" % path)
    entries = doc.get("degrees")
    if not isinstance(entries, list) or not all(isinstance(e, dict) for e in entries):
        raise InputError("%s: degrees must be a list of objects" % path)
    modules = {}
    raw_diffs = {}
    for e in entries:
        nn = e.get("n")
        if not isinstance(nn, int):
            raise InputError("%s: every degree entry needs an integer 'n'" % path)
        if nn in modules:
            raise InputError("%s: duplicate degree %d" % (path, nn))
        ref = e.get("module")
        if not isinstance(ref, str):
            raise InputError("%s: degree %d needs a module reference" % (path, nn))
        M, _ = load_module((path.parent / ref).resolve())
        if M.over != T:
            raise InputError("%s: degree %d module is over a different structure"
                             % (path, nn))
        modules[nn] = M
        if "d" in e:
            raw_diffs[nn] = _int_list(e, "d", path, length=M.carrier_size)
    diffs = {}
    K = ChainComplex(T, modules, {})
    for nn, values in raw_diffs.items():
        tgt = K.module_at(nn - 1)
        if any(not (0 <= v < tgt.carrier_size) for v in values):
            raise InputError("%s: differential at degree %d out of range" % (path, nn))
        diffs[nn] = ModuleMorphism(modules[nn], tgt, tuple(values))
    return ChainComplex(T, modules, diffs)


def complex_to_doc(K: ChainComplex, over_ref: str, module_refs: dict[int, str]) -> dict:
    entries = []
    for n in sorted(K.modules, reverse=True):
        e = {"n": n, "module": module_refs[n]}
        if n in K.diffs:
            e["d"] = list(K.diffs[n].values)
        entries.append(e)
    return {"over": over_ref, "degrees": entries}


def load_chain_map(path, source: ChainComplex | None = None,
                   target: ChainComplex | None = None) -> ChainMap:
    path = Path(path)
    doc = _read_json(path)
    src_ref = doc.get("source")
    tgt_ref = doc.get("target")
    if not isinstance(src_ref, str) or not isinstance(tgt_ref, str):
        raise InputError("%s: chain map needs source/target complex paths" % path)
    src = load_complex((path.parent / src_ref).resolve())
    tgt = load_complex((path.parent / tgt_ref).resolve())
    if source is not None and src.modules != source.modules:
        raise InputError("%s: source complex mismatch" % path)
    if target is not None and tgt.modules != target.modules:
        raise InputError("%s: target complex mismatch" % path)
    raw = doc.get("degrees")
    if not isinstance(raw, dict):
        raise InputError("%s: 'degrees' must map degree strings to tables" % path)
    maps = {}
    for key, values in raw.items():
        try:
            n = int(key)
        except ValueError:
            raise InputError("%s: degree key %r is not an integer" % (path, key)) from None
        sm = src.module_at(n)
        tm = tgt.module_at(n)
        if (not isinstance(values, list) or len(values) != sm.carrier_size
                or any(not isinstance(v, int) or not (0 <= v < tm.carrier_size)
                       for v in values)):
            raise InputError("%s: map at degree %d malformed" % (path, n))
        maps[n] = ModuleMorphism(sm, tm, tuple(values))
    return ChainMap(src, tgt, maps)
