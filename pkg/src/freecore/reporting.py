"""Report builders shared by the service and the command line client.

Every report exists in two shapes: a text rendering with one fact per
line, each tagged with the rule anchor that produced it, and a machine
payload of plain JSON types (rationals as "p/q" strings) whose key
order is irrelevant because serialization sorts keys.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import AlgebraSpec
from .amalg import CentralizerResult, CompressionResult
from .core import CoreDecomposition, TransportResult
from .fdim import fdim
from .freeprod import FreeProductResult
from .modular import classify_diffuse_type, sd_invariant, t_set
from .scalars import format_rational
from .structure import Amplify, FreeGroup, StructureExpr


def _expr_payload(expr: StructureExpr) -> dict:
    return {"render": expr.render(), "term": expr.machine_form()}


def _fr(value) -> str:
    return format_rational(value) if isinstance(value, Fraction) else str(value)


# ---------------------------------------------------------------------------
# compute


def compute_payload(fp: FreeProductResult) -> dict:
    payload = {
        "inputs": [fp.spec1.describe(), fp.spec2.describe()],
        "atoms": {
            "masses": [format_rational(c) for c in fp.m_d],
            "anchor": "atom-rule",
        },
        "diffuse": {
            "weight": format_rational(fp.m_c_weight),
            "type": fp.m_c_type.describe(),
            "anchor": "ratio-group-rank",
        },
        "ratio_group": fp.sd.describe(),
        "t_set": {"value": fp.t.describe(), "anchor": "t-set"},
        "expression": _expr_payload(fp.expr),
        "flags": dict(fp.flags),
    }
    if fp.m_c_param is not None:
        payload["diffuse"]["param"] = _fr(fp.m_c_param)
        payload["diffuse"]["param_anchor"] = "free-dimension-balance"
    if fp.reduction is not None:
        payload["reduction"] = {
            "steps": list(fp.reduction_trace),
            "anchor": "strip-reduction",
        }
    return payload


def compute_text(fp: FreeProductResult) -> str:
    lines = [
        f"inputs: {fp.spec1.describe()}",
        f"        {fp.spec2.describe()}",
        f"atoms: [{', '.join(format_rational(c) for c in fp.m_d) or 'none'}] [atom-rule]",
        f"diffuse part: weight {format_rational(fp.m_c_weight)}, "
        f"type {fp.m_c_type.describe()} [ratio-group-rank]",
        f"ratio group: {fp.sd}",
        f"T set: {fp.t.describe()} [t-set]",
        f"structure: {fp.expr.render()}",
    ]
    if fp.m_c_param is not None:
        lines.append(
            f"diffuse parameter: {_fr(fp.m_c_param)} [free-dimension-balance]"
        )
    for step in fp.reduction_trace:
        lines.append(f"reduction: {step} [strip-reduction]")
    for name, value in sorted(fp.flags.items()):
        lines.append(f"flag {name}: {value}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# core


def core_payload(core: CoreDecomposition, height: int = 3) -> dict:
    labels = [
        {
            "value": format_rational(g.value),
            "exponents": g.exponent_map(),
            "trace": format_rational(core.labels.trace_of(g)),
        }
        for g in core.labels.labels(height)
    ]
    payload = {
        "ratio_group": core.group.describe(),
        "labels": {"entries": labels, "anchor": "trace-law"},
        "expression": _expr_payload(core.expr),
        "components": [
            {
                "side": c.side,
                "index": c.index,
                "source": c.source,
                "shape": c.shape,
                "expression": _expr_payload(c.expr),
                "transportable": c.transportable,
            }
            for c in core.components
        ],
        "central": {
            "atom_copies": _expr_payload(core.central_atoms)
            if core.central_atoms
            else None,
            "diffuse_core": _expr_payload(core.diffuse_core)
            if core.diffuse_core
            else None,
            "anchor": "amplification-dichotomy",
        },
        "notes": list(core.notes),
        "flags": dict(core.flags),
    }
    return payload


def core_text(core: CoreDecomposition, height: int = 3) -> str:
    lines = [
        f"ratio group: {core.group}",
        f"label algebra: {core.labels.render()}",
        f"core: {core.expr.render()}",
    ]
    for g in core.labels.labels(min(height, 2)):
        lines.append(
            f"label {format_rational(g.value)}: trace "
            f"{format_rational(core.labels.trace_of(g))} [trace-law]"
        )
    for c in core.components:
        lines.append(
            f"component side {c.side} #{c.index} ({c.source}): {c.shape}, "
            f"{c.expr.render()}"
        )
    if core.central_atoms is not None:
        lines.append(f"central atoms: {core.central_atoms.render()}")
    if core.diffuse_core is not None:
        node = core.diffuse_core
        if isinstance(node, Amplify):
            base, realized = node.inner.render(), node.render()
        elif isinstance(node, FreeGroup) and node.semifinite:
            base, realized = FreeGroup(node.param).render(), node.render()
        else:
            base, realized = node.render(), node.render()
        suffix = f", realized as {realized}" if realized != base else ""
        lines.append(
            f"diffuse core: amplification of {base}{suffix} "
            "[amplification-dichotomy]"
        )
    for note in core.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


def transport_payload(result: TransportResult) -> dict:
    return {
        "gamma": format_rational(result.gamma.value),
        "constituents": [
            {
                "block": p.block,
                "slot": p.slot,
                "label": format_rational(p.label.value),
                "trace": format_rational(p.trace),
            }
            for p in result.constituents
        ],
        "total": format_rational(result.total),
        "expected": format_rational(result.expected),
        "remainder": format_rational(result.remainder),
        "anchor": "transport",
    }


# ---------------------------------------------------------------------------
# centralizer


def centralizer_payload(res: CentralizerResult) -> dict:
    return {
        "display": _expr_payload(res.display),
        "canonical": _expr_payload(res.canonical),
        "rule": res.rule,
        "ratio_group": res.group.describe(),
        "flags": dict(res.flags),
        "notes": list(res.notes),
    }


def centralizer_text(res: CentralizerResult) -> str:
    lines = [
        f"centralizer: {res.display.render()} [{res.rule}]",
        f"canonical: {res.canonical.render()}",
        f"ratio group: {res.group}",
    ]
    for name, value in sorted(res.flags.items()):
        lines.append(f"flag {name}: {value}")
    for note in res.notes:
        lines.append(f"note: {note}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# modular data and free dimension


def sd_payload(spec1: AlgebraSpec, spec2: AlgebraSpec, height: int = 3) -> dict:
    group = sd_invariant(spec1, spec2)
    kind = classify_diffuse_type(spec1, spec2)
    return {
        "ratio_group": group.describe(),
        "elements": [
            format_rational(g.value) for g in group.enumerate_elements(height)
        ],
        "t_set": t_set(group).describe(),
        "type": kind.describe(),
        "anchor": "ratio-group-rank",
    }


def sd_text(spec1: AlgebraSpec, spec2: AlgebraSpec, height: int = 3) -> str:
    p = sd_payload(spec1, spec2, height)
    return "\n".join(
        [
            f"ratio group: {p['ratio_group']['generators'] or ['trivial']}"
            f" (rank {p['ratio_group']['rank']})",
            f"elements (height {height}): {', '.join(p['elements'])}",
            f"T set: {p['t_set']} [t-set]",
            f"diffuse type: {p['type']} [ratio-group-rank]",
        ]
    )


def fdim_payload(specs: list[AlgebraSpec]) -> dict:
    values = [fdim(s) for s in specs]
    payload = {
        "values": [
            {"input": s.describe(), "fdim": _fr(v)} for s, v in zip(specs, values)
        ],
        "anchor": "free-dimension-balance",
    }
    if len(specs) == 2:
        payload["sum"] = _fr(values[0] + values[1])
    return payload


def fdim_text(specs: list[AlgebraSpec]) -> str:
    p = fdim_payload(specs)
    lines = [
        f"fdim({v['input']}) = {v['fdim']} [free-dimension-balance]"
        for v in p["values"]
    ]
    if "sum" in p:
        lines.append(f"sum: {p['sum']}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# compression


def compression_payload(result: CompressionResult) -> dict:
    sc = result.scenario
    return {
        "indices": list(sc.indices),
        "param": format_rational(result.param),
        "terms": {i: format_rational(t) for i, t in result.terms.items()},
        "expression": _expr_payload(result.expr),
        "anchor": "compression-formula",
    }


def compression_text(result: CompressionResult) -> str:
    sc = result.scenario
    lines = [
        f"indices: {', '.join(sc.indices)} (origin {sc.origin})",
        f"parameter: {format_rational(result.param)} [compression-formula]",
    ]
    for i in sc.indices:
        lines.append(f"  term {i}: {format_rational(result.terms[i])}")
    lines.append(f"structure: {result.expr.render()}")
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# oracle


def oracle_text(report: dict) -> str:
    lines = []
    grid = report.get("grid")
    if grid:
        lines.append(
            f"compression grid: {grid['checked']} scenarios, "
            f"{grid['mismatches']} mismatches [corner-composition]"
        )
    fd = report.get("fdim")
    if fd:
        lines.append(
            f"free dimension recomposition: {fd['accepted']} accepted / "
            f"{fd['samples']} sampled, {len(fd['failures'])} failures "
            "[free-dimension-balance]"
        )
    atoms = report.get("atoms")
    if atoms:
        lines.append(
            f"matrix model (dim {atoms['dimension']}): expected "
            f"{atoms['expected']}, agrees: {atoms['agrees']} [atom-rule]"
        )
    lines.append(f"ok: {report.get('ok', False)}")
    return "\n".join(lines)
