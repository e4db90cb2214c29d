"""JSON formats for presentations and freeness certificates.

Two tagged formats: ordlat/presentation/1 and ordlat/certificate/1.
Ordinals travel as their text syntax, rationals as Fraction strings
("3", "1/2"), and dumps() is canonical (sorted keys, no whitespace) so
equal objects serialize to identical bytes.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any, Dict

from ordlat.element import Domain, Element, Ladder, parse_weight
from ordlat.freeness import (
    ChainStep,
    FreenessCertificate,
    PoolEntry,
    TargetEntry,
    TorsionWitness,
)
from ordlat.group import Presentation
from ordlat.ordinal import format_ordinal, parse_ordinal
from ordlat.space import ScatteredSpace

PRESENTATION_FORMAT = "ordlat/presentation/1"
CERTIFICATE_FORMAT = "ordlat/certificate/1"


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def element_to_json(el: Element) -> Dict[str, Any]:
    return {
        "prefix": [[format_ordinal(x), v] for x, v in el.prefix],
        "tails": [
            {
                "ladder": t.ladder_id,
                "weight": t.weight.label(),
                "r": str(t.coeff),
                "start": t.start,
            }
            for t in el.tails
        ],
    }


def element_from_json(domain: Domain, data: Dict[str, Any]) -> Element:
    el = domain.zero()
    for x, v in data.get("prefix", ()):
        el = el + int(v) * domain.e(parse_ordinal(x))
    for t in data.get("tails", ()):
        el = el + domain.tail(
            t["ladder"], Fraction(t["r"]), int(t["start"]), weight=t["weight"]
        )
    return el


def _ladder_to_json(L: Ladder) -> Dict[str, Any]:
    out = {
        "id": L.id,
        "kind": L.kind,
        "target": format_ordinal(L.target),
        "weights": [w.label() for w in L.weights],
    }
    if L.kind == "arith":
        out["first"] = format_ordinal(L.first)
        out["step"] = format_ordinal(L.step)
    else:
        out["offset"] = L.offset
    return out


def _ladder_from_json(data: Dict[str, Any]) -> Ladder:
    kw: Dict[str, Any] = {
        "id": data["id"],
        "kind": data["kind"],
        "target": parse_ordinal(data["target"]),
        "weights": tuple(parse_weight(w) for w in data["weights"]),
    }
    if data["kind"] == "arith":
        kw["first"] = parse_ordinal(data["first"])
        kw["step"] = parse_ordinal(data["step"])
    else:
        kw["offset"] = int(data["offset"])
    return Ladder(**kw)


def presentation_to_json(pres: Presentation) -> Dict[str, Any]:
    return {
        "format": PRESENTATION_FORMAT,
        "name": pres.name,
        "space": {"top": format_ordinal(pres.domain.space.top)},
        "ladders": [_ladder_to_json(L) for L in pres.domain.ladders],
        "generators": [
            {"name": name, "element": element_to_json(g)}
            for name, g in pres.generators
        ],
    }


def presentation_from_json(data: Dict[str, Any]) -> Presentation:
    if data.get("format") != PRESENTATION_FORMAT:
        raise ValueError(f"not a {PRESENTATION_FORMAT} document")
    space = ScatteredSpace(parse_ordinal(data["space"]["top"]))
    domain = Domain(
        space, tuple(_ladder_from_json(L) for L in data["ladders"])
    )
    gens = tuple(
        (g["name"], element_from_json(domain, g["element"]))
        for g in data["generators"]
    )
    return Presentation(data["name"], domain, gens)


def certificate_to_json(cert: FreenessCertificate) -> Dict[str, Any]:
    return {
        "format": CERTIFICATE_FORMAT,
        "presentation": cert.presentation,
        "kind": cert.kind,
        "pool": [
            {
                "name": p.name,
                "element": element_to_json(p.element),
                "provenance": list(p.provenance)
                if p.provenance is not None
                else None,
            }
            for p in cert.pool
        ],
        "steps": [
            {
                "label": s.label,
                "aExtension": list(s.a_extension),
                "bExtras": list(s.b_extras),
                "torsionBound": s.torsion_bound,
                "torsionWitnesses": [
                    {
                        "extra": w.extra,
                        "bound": w.bound,
                        "over": w.over,
                        "coeffs": list(w.coeffs),
                    }
                    for w in s.torsion_witnesses
                ],
                "quotientOver": s.quotient_over,
                "quotientBasis": [list(row) for row in s.quotient_basis],
            }
            for s in cert.steps
        ],
        "finalBasis": [list(row) for row in cert.final_basis],
        "certifiedTargets": [
            {
                "name": t.name,
                "element": element_to_json(t.element),
                "coeffs": list(t.coeffs),
            }
            for t in cert.targets
        ],
        "rank": cert.rank,
    }


def certificate_from_json(
    domain: Domain, data: Dict[str, Any]
) -> FreenessCertificate:
    if data.get("format") != CERTIFICATE_FORMAT:
        raise ValueError(f"not a {CERTIFICATE_FORMAT} document")
    pool = tuple(
        PoolEntry(
            name=p["name"],
            element=element_from_json(domain, p["element"]),
            provenance=tuple(p["provenance"])
            if p.get("provenance") is not None
            else None,
        )
        for p in data["pool"]
    )
    steps = tuple(
        ChainStep(
            label=s["label"],
            a_extension=tuple(s["aExtension"]),
            b_extras=tuple(s["bExtras"]),
            torsion_bound=int(s["torsionBound"]),
            torsion_witnesses=tuple(
                TorsionWitness(
                    extra=w["extra"],
                    bound=int(w["bound"]),
                    over=int(w["over"]),
                    coeffs=tuple(int(c) for c in w["coeffs"]),
                )
                for w in s["torsionWitnesses"]
            ),
            quotient_over=int(s["quotientOver"]),
            quotient_basis=tuple(
                tuple(int(c) for c in row) for row in s["quotientBasis"]
            ),
        )
        for s in data["steps"]
    )
    targets = tuple(
        TargetEntry(
            name=t["name"],
            element=element_from_json(domain, t["element"]),
            coeffs=tuple(int(c) for c in t["coeffs"]),
        )
        for t in data["certifiedTargets"]
    )
    return FreenessCertificate(
        presentation=data["presentation"],
        kind=data["kind"],
        pool=pool,
        steps=steps,
        final_basis=tuple(
            tuple(int(c) for c in row) for row in data["finalBasis"]
        ),
        targets=targets,
        rank=int(data["rank"]),
    )
