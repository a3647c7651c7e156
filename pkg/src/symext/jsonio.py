"""JSON schemas for every artifact the command line reads or writes.

Rationals travel as "p/q" strings (or bare integers); permutations as
1-based image arrays; groups as degree plus generators (element lists are
never serialized); actions as a named construction kind with parameters,
or explicit generator maps.  Serialization is canonical: sorted keys,
minimal separators, one trailing newline.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import InvalidInput
from .perms import (
    AffineAction,
    AffineMap,
    PermGroup,
    Permutation,
    column_action,
    conjugation_action,
    coordinate_action,
    edge_action,
    generator_map_action,
    natural_action,
    trivial_action,
)
from .polytope import Face, HRep, Polytope, VRep
from .rational import Mat, Vec, format_rat, mat, parse_rat, vec


def rat_to_json(q: Fraction):
    if q.denominator == 1:
        return int(q.numerator)
    return format_rat(q)


def rat_from_json(value) -> Fraction:
    if isinstance(value, bool):
        raise InvalidInput("booleans are not rationals")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rat(value)
    raise InvalidInput(f"cannot read rational from {value!r}")


def vec_to_json(v: Vec) -> list:
    return [rat_to_json(x) for x in v]


def vec_from_json(data) -> Vec:
    return vec([rat_from_json(x) for x in data])


def mat_to_json(m: Mat) -> list:
    return [vec_to_json(row) for row in m]


def mat_from_json(data) -> Mat:
    return mat([[rat_from_json(x) for x in row] for row in data])


def vertex_key(v: Vec) -> str:
    return ",".join(format_rat(x) for x in v)


def vertex_from_key(key: str) -> Vec:
    if not key:
        return ()
    return vec([parse_rat(part) for part in key.split(",")])


# ---------------------------------------------------------------------------
# Polytopes


def polytope_to_json(p: Polytope) -> dict:
    out: dict[str, Any] = {"dim": p.dim}
    if p.h is not None:
        out["ineqs"] = [vec_to_json(a) + [rat_to_json(b)] for a, b in p.h.ineqs]
        out["eqs"] = [vec_to_json(a) + [rat_to_json(b)] for a, b in p.h.eqs]
    if p.v is not None:
        out["vertices"] = [vec_to_json(v) for v in p.v.vertices]
    return out


def polytope_from_json(data: dict) -> Polytope:
    dim = data["dim"]
    h = None
    if "ineqs" in data or "eqs" in data:
        ineqs = [(vec_from_json(row[:-1]), rat_from_json(row[-1]))
                 for row in data.get("ineqs", [])]
        eqs = [(vec_from_json(row[:-1]), rat_from_json(row[-1]))
               for row in data.get("eqs", [])]
        h = HRep(dim, tuple(ineqs), tuple(eqs))
    v = None
    if "vertices" in data:
        v = VRep(dim, tuple(vec_from_json(row) for row in data["vertices"]))
    return Polytope(h=h, v=v)


# ---------------------------------------------------------------------------
# Groups and actions


def perm_to_json(g: Permutation) -> list[int]:
    return list(g.images)


def perm_from_json(data) -> Permutation:
    return Permutation(tuple(int(x) for x in data))


def group_to_json(g: PermGroup) -> dict:
    out = {"degree": g.degree,
           "generators": [perm_to_json(x) for x in g.generators]}
    if g._known_order is not None:
        out["order"] = g._known_order
    if g.name:
        out["name"] = g.name
    return out


def group_from_json(data: dict) -> PermGroup:
    return PermGroup(data["degree"],
                     [perm_from_json(x) for x in data["generators"]],
                     known_order=data.get("order"),
                     name=data.get("name", ""))


_ACTION_BUILDERS = {
    "points": lambda g, p: natural_action(g),
    "edges": lambda g, p: edge_action(g, p["n"]),
    "matrix-columns": lambda g, p: column_action(g, p["n"]),
    "matrix-conjugation": lambda g, p: conjugation_action(g, p["n"]),
    "trivial": lambda g, p: trivial_action(g, p["dim"]),
    "pairs": None,        # resolved lazily to avoid an import cycle
    "cardinality": None,
}


def _pairs_action(group: PermGroup, params: dict) -> AffineAction:
    from .extension import pair_action
    return pair_action(group, params["n"])


def _cardinality_action(group: PermGroup, params: dict) -> AffineAction:
    n = params["n"]
    labels = [("x", i) for i in range(1, n + 1)] + \
             [("z", j) for j in range(n + 1)]
    return coordinate_action(
        group, labels,
        lambda g, lab: ("x", g(lab[1])) if lab[0] == "x" else lab,
        kind="cardinality", params={"n": n})


def action_to_json(a: AffineAction) -> dict:
    out = {"group": group_to_json(a.group), "dim": a.dim, "kind": a.kind}
    if a.kind == "generator-maps":
        maps = []
        for g in a.group.generators:
            m = a.map(g)
            maps.append({"linear": mat_to_json(m.matrix()),
                         "offset": vec_to_json(m.translation())})
        out["maps"] = maps
    else:
        if a.kind not in _ACTION_BUILDERS:
            raise InvalidInput(
                f"action kind {a.kind!r} has no serialization; "
                "use generator maps")
        out["params"] = {k: v for k, v in a.params.items()}
    return out


def action_from_json(data: dict) -> AffineAction:
    group = group_from_json(data["group"])
    kind = data["kind"]
    if kind == "generator-maps":
        maps = [AffineMap(data["dim"], linear=mat_from_json(m["linear"]),
                          offset=vec_from_json(m["offset"]))
                for m in data["maps"]]
        return generator_map_action(group, maps, data["dim"])
    if kind == "pairs":
        return _pairs_action(group, data["params"])
    if kind == "cardinality":
        return _cardinality_action(group, data["params"])
    builder = _ACTION_BUILDERS.get(kind)
    if builder is None:
        raise InvalidInput(f"unknown action kind {kind!r}")
    return builder(group, data.get("params", {}))


# ---------------------------------------------------------------------------
# Extension specifications


def extension_to_json(spec) -> dict:
    from .extension import ExtensionSpec
    assert isinstance(spec, ExtensionSpec)
    out = {
        "P": polytope_to_json(spec.p),
        "Q": polytope_to_json(spec.q),
        "proj": {"M": mat_to_json(spec.proj_linear),
                 "t": vec_to_json(spec.proj_offset)},
        "actionQ": action_to_json(spec.action_q),
        "actionP": action_to_json(spec.action_p),
    }
    if spec.section is not None:
        out["section"] = {vertex_key(x): vec_to_json(s)
                          for x, s in sorted(spec.section.items())}
    if spec.alpha is not None:
        out["alpha"] = {",".join(map(str, g.images)): perm_to_json(h)
                        for g, h in sorted(spec.alpha.items())}
    return out


def extension_from_json(data: dict):
    from .extension import ExtensionSpec
    section = None
    if "section" in data:
        section = {vertex_from_key(k): vec_from_json(v)
                   for k, v in data["section"].items()}
    alpha = None
    if "alpha" in data:
        alpha = {Permutation(tuple(int(t) for t in k.split(","))):
                 perm_from_json(v) for k, v in data["alpha"].items()}
    return ExtensionSpec(
        q=polytope_from_json(data["Q"]), p=polytope_from_json(data["P"]),
        proj_linear=mat_from_json(data["proj"]["M"]),
        proj_offset=vec_from_json(data["proj"]["t"]),
        action_q=action_from_json(data["actionQ"]),
        action_p=action_from_json(data["actionP"]),
        section=section, alpha=alpha)


# ---------------------------------------------------------------------------
# Certificates


def theorem1_to_json(cert) -> dict:
    from .certificates import Theorem1Certificate
    assert isinstance(cert, Theorem1Certificate)
    verts = cert.polytope.vertices
    index = {v: i for i, v in enumerate(verts)}
    out = {
        "polytope": polytope_to_json(cert.polytope),
        "group": group_to_json(cert.group),
        "action": action_to_json(cert.action),
        "classes": [
            {"subgroup": group_to_json(c.subgroup),
             "blocks": [sorted(index[x] for x in block) for block in c.blocks],
             "label": c.label}
            for c in cert.classes],
        "coefficients": {str(index[x]): rat_to_json(v)
                         for x, v in sorted(cert.coefficients.items())},
    }
    if cert.target is not None:
        a, b = cert.target
        out["target"] = {"a": vec_to_json(a), "b": rat_to_json(b)}
    if cert.face_tights:
        out["face"] = [vec_to_json(a) + [rat_to_json(b)]
                       for a, b in cert.face_tights]
    return out


def theorem1_from_json(data: dict):
    from .certificates import FacetClass, Theorem1Certificate
    poly = polytope_from_json(data["polytope"])
    verts = poly.vertices
    classes = []
    for c in data["classes"]:
        blocks = tuple(frozenset(verts[i] for i in block)
                       for block in c["blocks"])
        classes.append(FacetClass(group_from_json(c["subgroup"]), blocks,
                                  c.get("label", "")))
    coeffs = {verts[int(i)]: rat_from_json(v)
              for i, v in data["coefficients"].items()}
    target = None
    if "target" in data:
        target = (vec_from_json(data["target"]["a"]),
                  rat_from_json(data["target"]["b"]))
    face = tuple((vec_from_json(row[:-1]), rat_from_json(row[-1]))
                 for row in data.get("face", []))
    return Theorem1Certificate(
        polytope=poly, group=group_from_json(data["group"]),
        action=action_from_json(data["action"]), classes=tuple(classes),
        coefficients=coeffs, target=target, face_tights=face)


def sdp_to_json(cert) -> dict:
    from .certificates import SdpCertificate
    assert isinstance(cert, SdpCertificate)
    verts = cert.polytope.vertices
    index = {v: i for i, v in enumerate(verts)}
    out = {
        "polytope": polytope_to_json(cert.polytope),
        "section": {str(index[x]): mat_to_json(s)
                    for x, s in sorted(cert.section.items())},
        "equalities": [{"A": mat_to_json(a), "b": rat_to_json(b)}
                       for a, b in cert.equalities],
        "classes": [{"blocks": [sorted(index[x] for x in block)
                                for block in c.blocks],
                     "label": c.label} for c in cert.classes],
        "coefficients": {str(index[x]): rat_to_json(v)
                         for x, v in sorted(cert.coefficients.items())},
    }
    if cert.proj is not None:
        lin, off = cert.proj
        out["proj"] = {"M": mat_to_json(lin), "t": vec_to_json(off)}
    return out


def sdp_from_json(data: dict):
    from .certificates import SdpCertificate, SdpClass
    poly = polytope_from_json(data["polytope"])
    verts = poly.vertices
    section = {verts[int(i)]: mat_from_json(m)
               for i, m in data["section"].items()}
    eqs = tuple((mat_from_json(e["A"]), rat_from_json(e["b"]))
                for e in data["equalities"])
    classes = tuple(
        SdpClass(tuple(frozenset(verts[i] for i in block)
                       for block in c["blocks"]), c.get("label", ""))
        for c in data["classes"])
    coeffs = {verts[int(i)]: rat_from_json(v)
              for i, v in data["coefficients"].items()}
    proj = None
    if "proj" in data:
        proj = (mat_from_json(data["proj"]["M"]),
                vec_from_json(data["proj"]["t"]))
    return SdpCertificate(polytope=poly, section=section, equalities=eqs,
                          classes=classes, coefficients=coeffs, proj=proj)


def superlinear_to_json(cert) -> dict:
    from .superlinear import SuperlinearCertificate
    assert isinstance(cert, SuperlinearCertificate)
    return {
        "polytope": polytope_to_json(cert.polytope),
        "action": action_to_json(cert.action),
        "n": cert.n,
        "indices": list(cert.indices),
        "faces": {str(j): [vec_to_json(a) + [rat_to_json(b)]
                           for a, b in f.tight]
                  for j, f in sorted(cert.faces.items())},
        "subgroups": {str(j): group_to_json(g)
                      for j, g in sorted(cert.subgroups.items())},
        "zetas": {str(j): perm_to_json(z) for j, z in sorted(cert.zetas.items())},
        "witnesses": {str(j): vec_to_json(w)
                      for j, w in sorted(cert.witnesses.items())},
        "parity": {str(j): p for j, p in sorted(cert.parity.items())},
    }


def superlinear_from_json(data: dict):
    from .polytope import face_of
    from .superlinear import SuperlinearCertificate
    poly = polytope_from_json(data["polytope"])
    faces = {}
    for j, rows in data["faces"].items():
        tights = [(vec_from_json(row[:-1]), rat_from_json(row[-1]))
                  for row in rows]
        faces[int(j)] = face_of(poly, tights)
    return SuperlinearCertificate(
        polytope=poly, action=action_from_json(data["action"]), n=data["n"],
        indices=tuple(data["indices"]), faces=faces,
        subgroups={int(j): group_from_json(g)
                   for j, g in data["subgroups"].items()},
        zetas={int(j): perm_from_json(z) for j, z in data["zetas"].items()},
        witnesses={int(j): vec_from_json(w)
                   for j, w in data["witnesses"].items()},
        parity={int(j): p for j, p in data["parity"].items()})


# ---------------------------------------------------------------------------
# Canonical bytes


def dumps_canonical(obj: dict) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"
