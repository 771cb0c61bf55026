"""Request handlers shared by the HTTP service and the CLI.

Each handler takes parsed JSON documents, runs the engine, and returns
(machine payload, text report).  All domain errors propagate as
EngineError subclasses; callers map them to transport specific codes.
"""

from __future__ import annotations

from .. import reporting
from ..amalg import centralizer_structure, compression_formula
from ..core import build_core
from ..errors import SpecInvalid
from ..freeprod import free_product
from ..oracle import run_oracle_checks, simulate_pair_atoms
from ..schema import parse_scenario, parse_spec


def is_scenario(doc: dict) -> bool:
    return isinstance(doc, dict) and "indices" in doc


def handle_compute(
    doc1: dict,
    doc2: dict | None = None,
    gamma_choice: str = "smallest",
    oracle: bool = False,
) -> tuple[dict, str]:
    if doc2 is None:
        if not is_scenario(doc1):
            raise SpecInvalid("compute needs two spec documents or one scenario")
        result = compression_formula(parse_scenario(doc1, gamma_choice))
        return reporting.compression_payload(result), reporting.compression_text(result)
    spec1, spec2 = parse_spec(doc1), parse_spec(doc2)
    fp = free_product(spec1, spec2)
    payload = reporting.compute_payload(fp)
    text = reporting.compute_text(fp)
    scalars1 = [w for _, w in spec1.scalar_summands()]
    scalars2 = [w for _, w in spec2.scalar_summands()]
    if oracle and scalars1 and scalars2 and not spec1.tail and not spec2.tail:
        sim = simulate_pair_atoms(scalars1, scalars2)
        payload["oracle"] = {
            "atoms": {k: sim[k] for k in ("dimension", "expected", "agrees")},
            "anchor": "atom-rule",
        }
        text += (
            f"\noracle: matrix model at dimension {sim['dimension']} "
            f"agrees: {sim['agrees']} [atom-rule]"
        )
    return payload, text


def handle_core(doc1: dict, doc2: dict, height: int = 3) -> tuple[dict, str]:
    core = build_core(parse_spec(doc1), parse_spec(doc2), height)
    return reporting.core_payload(core, height), reporting.core_text(core, height)


def handle_centralizer(doc1: dict, doc2: dict, height: int = 3) -> tuple[dict, str]:
    res = centralizer_structure(parse_spec(doc1), parse_spec(doc2), height)
    return reporting.centralizer_payload(res), reporting.centralizer_text(res)


def handle_sd(doc1: dict, doc2: dict, height: int = 3) -> tuple[dict, str]:
    spec1, spec2 = parse_spec(doc1), parse_spec(doc2)
    return (
        reporting.sd_payload(spec1, spec2, height),
        reporting.sd_text(spec1, spec2, height),
    )


def handle_fdim(docs: list[dict]) -> tuple[dict, str]:
    specs = [parse_spec(d) for d in docs]
    return reporting.fdim_payload(specs), reporting.fdim_text(specs)


def handle_oracle_check(
    steps: int = 5, samples: int = 100, simulate: bool = False
) -> tuple[dict, str]:
    report = run_oracle_checks(steps=steps, samples=samples, simulate=simulate)
    return report, reporting.oracle_text(report)
