"""JSON document shapes for specs and scenarios.

Rationals travel as "p/q" strings, multiplicative groups as generator
lists, and exponent maps as {prime: exponent} objects with string keys.
Parsing is strict: unknown kinds and malformed fields are input errors,
never guesses.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .algebra import (
    INFINITE,
    AbstractII1,
    AlgebraSpec,
    FreeGroupFactor,
    FullIIIWithCore,
    GeometricMatrixTail,
    HyperfiniteDiffuse,
    MatrixBlock,
    Summand,
)
from .amalg import CompressionScenario, choose_gamma
from .errors import SpecInvalid
from .scalars import MultGroup, format_rational, parse_rational

SCHEMA_VERSION = 1


def _rat(doc, key, default=None) -> Fraction:
    if key not in doc:
        if default is not None:
            return default
        raise SpecInvalid(f"missing field {key!r}")
    return parse_rational(doc[key])


def _group(values) -> MultGroup:
    return MultGroup.from_ratios([parse_rational(v) for v in values])


def _parse_summand(doc: dict) -> Summand:
    if not isinstance(doc, dict) or "kind" not in doc:
        raise SpecInvalid("each summand needs a 'kind' field")
    kind = doc["kind"]
    if kind == "matrix":
        eigen = doc.get("eigenvalues")
        if not eigen:
            raise SpecInvalid("matrix summands need an 'eigenvalues' list")
        return MatrixBlock(
            int(doc.get("size", len(eigen))),
            tuple(parse_rational(e) for e in eigen),
        )
    if kind == "diffuse":
        return HyperfiniteDiffuse(_rat(doc, "weight"))
    if kind == "free_group":
        param = doc.get("param", "inf")
        return FreeGroupFactor(
            _rat(doc, "weight"),
            INFINITE if param == "inf" else parse_rational(param),
            _rat(doc, "amplification", Fraction(1)),
        )
    if kind == "abstract_ii1":
        return AbstractII1(_rat(doc, "weight"), str(doc.get("label", "N")))
    if kind == "full_iii":
        gens = doc.get("generators")
        if not gens:
            raise SpecInvalid("full_iii summands need a 'generators' list")
        return FullIIIWithCore(
            _rat(doc, "weight"), _group(gens), str(doc.get("label", "M"))
        )
    raise SpecInvalid(f"unknown summand kind {kind!r}")


def parse_spec(doc: dict) -> AlgebraSpec:
    if not isinstance(doc, dict):
        raise SpecInvalid("a spec document must be an object")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise SpecInvalid(f"unsupported schema version {version!r}")
    tail = None
    if doc.get("tail") is not None:
        tdoc = doc["tail"]
        gens = tdoc.get("generators")
        if not gens:
            raise SpecInvalid("a tail needs a 'generators' list")
        tail = GeometricMatrixTail(
            _group(gens), _rat(tdoc, "weight_base", Fraction(1, 2))
        )
    return AlgebraSpec(
        str(doc.get("name", "input")),
        tuple(_parse_summand(s) for s in doc.get("summands", [])),
        tail,
    )


def _summand_doc(s: Summand) -> dict:
    if isinstance(s, MatrixBlock):
        return {
            "kind": "matrix",
            "size": s.size,
            "eigenvalues": [format_rational(e) for e in s.eigenvalues],
        }
    if isinstance(s, HyperfiniteDiffuse):
        return {"kind": "diffuse", "weight": format_rational(s.weight)}
    if isinstance(s, FreeGroupFactor):
        doc = {
            "kind": "free_group",
            "weight": format_rational(s.weight),
            "param": "inf" if not isinstance(s.param, Fraction) else format_rational(s.param),
        }
        if s.amplification != 1:
            doc["amplification"] = format_rational(s.amplification)
        return doc
    if isinstance(s, AbstractII1):
        return {
            "kind": "abstract_ii1",
            "weight": format_rational(s.weight),
            "label": s.label,
        }
    assert isinstance(s, FullIIIWithCore)
    return {
        "kind": "full_iii",
        "weight": format_rational(s.weight),
        "generators": [format_rational(v) for v in s.sd_group.generator_values()],
        "label": s.label,
    }


def spec_to_doc(spec: AlgebraSpec) -> dict:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "name": spec.name,
        "summands": [_summand_doc(s) for s in spec.summands],
    }
    if spec.tail is not None:
        doc["tail"] = {
            "generators": [
                format_rational(v) for v in spec.tail.ratio_group.generator_values()
            ],
            "weight_base": format_rational(spec.tail.weight_base),
        }
    return doc


def parse_scenario(doc: dict, gamma_choice: str = "smallest") -> CompressionScenario:
    if not isinstance(doc, dict) or "indices" not in doc:
        raise SpecInvalid("a scenario document needs an 'indices' list")
    indices = tuple(str(i) for i in doc["indices"])
    beta_doc = doc.get("beta", {})
    missing = [i for i in indices if i not in beta_doc]
    if missing:
        raise SpecInvalid(f"missing corner masses for indices {missing!r}")
    beta = {i: parse_rational(beta_doc[i]) for i in indices}
    atoms = {
        i: tuple(parse_rational(a) for a in doc.get("atoms", {}).get(i, ()))
        for i in indices
    }
    given = doc.get("gamma", {})
    gamma = {}
    for pos, i in enumerate(indices[1:], start=1):
        if i in given:
            gamma[i] = parse_rational(given[i])
        else:
            earlier = list(indices[:pos])
            gamma[i] = choose_gamma(
                beta[i],
                atoms[i],
                [beta[j] for j in earlier],
                [a for j in earlier for a in atoms[j]],
                gamma_choice,
            )
    q = {str(k): str(v) for k, v in doc.get("q", {}).items()}
    return CompressionScenario(indices, beta, gamma, atoms, q)


def scenario_to_doc(scenario: CompressionScenario) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "indices": list(scenario.indices),
        "beta": {i: format_rational(scenario.beta[i]) for i in scenario.indices},
        "gamma": {i: format_rational(g) for i, g in scenario.gamma.items()},
        "atoms": {
            i: [format_rational(a) for a in scenario.atoms[i]]
            for i in scenario.indices
        },
        "q": dict(scenario.q),
    }


def load_document(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            return json.load(fh)
        except json.JSONDecodeError as exc:
            raise SpecInvalid(f"{path}: not valid JSON ({exc})") from exc


def machine_json(payload) -> str:
    """Deterministic serialization: sorted keys, no locale dependence."""
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2)
