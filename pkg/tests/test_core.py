"""Discrete core decomposition: labels, transport, dual action."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freecore.algebra import (
    AbstractII1,
    AlgebraSpec,
    FullIIIWithCore,
    HyperfiniteDiffuse,
    MatrixBlock,
)
from freecore.core import (
    CLOSED_KINDS,
    CoreLabels,
    build_core,
    dual_action,
    fixed_point_corner,
    transport_atomic,
)
from freecore.errors import (
    RatioOutsideGroup,
    SpecInvalid,
    SubgroupNotContained,
    TrivialGamma,
)
from freecore.scalars import MultGroup
from freecore.structure import (
    AmalgamatedFreeProduct,
    GammaDirectSum,
)

from conftest import block_spec, scalar_spec, tail_spec


def test_trace_law_exact():
    group = MultGroup.from_ratios([Fraction(2), Fraction(3)])
    labels = CoreLabels(group)
    for e in labels.labels(3):
        assert labels.trace_of(e) * e.value == 1


def test_dual_action_translates_and_scales():
    group = MultGroup.from_ratios([Fraction(2)])
    act = dual_action(group, Fraction(2))
    labels = CoreLabels(group)
    for e in labels.labels(4):
        moved = act.apply(e)
        assert moved.value == 2 * e.value
        assert labels.trace_of(moved) == act.trace_scale * labels.trace_of(e)


def test_dual_action_is_group_action():
    group = MultGroup.from_ratios([Fraction(2), Fraction(3)])
    a = dual_action(group, Fraction(2, 3))
    b = dual_action(group, Fraction(9, 2))
    composed = dual_action(group, Fraction(2, 3) * Fraction(9, 2))
    for e in group.enumerate_elements(2):
        assert a.apply(b.apply(e)) == composed.apply(e)
    ident = dual_action(group, Fraction(1))
    sample = group.element_of(Fraction(6))
    assert ident.apply(sample) == sample


def test_transport_finite_block_conservation():
    spec = block_spec("e", ("2/3", "1/3"))
    out = transport_atomic(spec, Fraction(2))
    assert out.expected == Fraction(1, 2)
    assert out.total == Fraction(1, 2)
    assert out.remainder == 0
    assert out.conservation_defect() == 0
    # constituent labels: slot eigenvalue 2/3 -> gamma, slot 1/3 -> 2 gamma
    labels = [c.label.value for c in out.constituents]
    assert labels == [Fraction(2), Fraction(4)]
    assert [c.trace for c in out.constituents] == [Fraction(1, 3), Fraction(1, 6)]


def test_transport_multi_block_and_inverse_gamma():
    spec = block_spec("e", ("1/3", "1/6"), ("3/8", "1/8"))
    group = MultGroup.from_ratios([Fraction(2), Fraction(3)])
    for gamma in (Fraction(1), Fraction(2), Fraction(1, 3), Fraction(6)):
        out = transport_atomic(spec, gamma, group=group)
        assert out.total == 1 / gamma
        assert out.conservation_defect() == 0


def test_transport_tail_remainder_exact():
    spec = tail_spec("t", "1/2")
    for height in (1, 3, 6):
        out = transport_atomic(spec, Fraction(2), height=height)
        assert out.remainder > 0
        assert out.total + out.remainder == Fraction(1, 2)
        assert out.conservation_defect() == 0


def test_transport_rejects_bad_inputs():
    with pytest.raises(SpecInvalid):
        transport_atomic(
            AlgebraSpec("d", (HyperfiniteDiffuse(Fraction(1)),)), Fraction(2)
        )
    # gamma outside the spectrum group
    with pytest.raises(RatioOutsideGroup):
        transport_atomic(block_spec("e", ("2/3", "1/3")), Fraction(3))
    # eigenvalues must come sorted
    bad = AlgebraSpec("b", (MatrixBlock(2, (Fraction(1, 3), Fraction(2, 3))),))
    with pytest.raises(SpecInvalid):
        transport_atomic(bad, Fraction(2))


@given(st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=40, deadline=None)
def test_transport_conservation_over_group(e2, e3):
    spec = block_spec("e", ("1/3", "1/6"), ("3/8", "1/8"))
    group = MultGroup.from_ratios([Fraction(2), Fraction(3)])
    gamma = Fraction(2) ** e2 * Fraction(3) ** e3
    out = transport_atomic(spec, gamma, group=group)
    assert out.total == 1 / gamma
    assert out.conservation_defect() == 0


def test_fixed_point_corner_entries():
    group = MultGroup.from_ratios([Fraction(1, 2)])
    summand = FullIIIWithCore(Fraction(1), group, label="M")
    ambient = MultGroup.from_ratios([Fraction(2), Fraction(3)])
    corner = fixed_point_corner(summand, ambient, height=2)
    assert corner.subgroup == group
    assert len(corner.entries) == 5
    assert isinstance(corner.expr, GammaDirectSum)
    small = MultGroup.from_ratios([Fraction(3)])
    with pytest.raises(SubgroupNotContained):
        fixed_point_corner(summand, small)


def test_build_core_shape(two_to_one, trace_block):
    core = build_core(two_to_one, trace_block)
    assert core.group == MultGroup.from_ratios([Fraction(2)])
    assert isinstance(core.expr, AmalgamatedFreeProduct)
    assert len(core.components) == 2
    assert core.central_atoms is None
    assert core.diffuse_core is not None
    assert core.flags["label_trace_sum_diverges"]
    assert core.flags["dual_action_scales_trace"]
    assert not core.flags["central_atom_copies_countable"]


def test_build_core_with_atoms():
    # scalar atoms survive into a Gamma-indexed central family
    spec1 = AlgebraSpec(
        "s",
        (
            MatrixBlock(2, (Fraction(1, 6), Fraction(1, 12))),
            MatrixBlock(1, (Fraction(3, 4),)),
        ),
    )
    spec2 = scalar_spec("b", "2/3", "1/3")
    core = build_core(spec1, spec2)
    assert core.central_atoms is not None
    assert core.flags["central_atom_copies_countable"]


def test_build_core_requires_nontrivial_group():
    with pytest.raises(TrivialGamma):
        build_core(
            scalar_spec("a", "1/2", "1/2"), scalar_spec("b", "1/3", "1/3", "1/3")
        )


def test_closed_kinds_resolve_diffuse_core(two_to_one):
    other = AlgebraSpec("d", (HyperfiniteDiffuse(Fraction(1)),))
    core = build_core(two_to_one, other)
    assert core.diffuse_core is not None
    assert core.diffuse_core.machine_form()["param"] == "inf"
    # an opaque factor defers the diffuse core to the centralizer pipeline
    openended = AlgebraSpec("n", (AbstractII1(Fraction(1)),))
    core2 = build_core(two_to_one, openended)
    assert core2.diffuse_core is None
    assert any("centralizer" in n for n in core2.notes)


def test_closed_kinds_membership():
    assert {"matrix", "diffuse", "free_group", "full_iii"} == set(CLOSED_KINDS)
    assert "abstract_ii1" not in CLOSED_KINDS


def test_tail_component_and_transportability():
    core = build_core(tail_spec("t", "1/2"), block_spec("b", ("1/2", "1/2")))
    tail_components = [c for c in core.components if c.index == -1]
    assert len(tail_components) == 1
    assert tail_components[0].transportable
    assert tail_components[0].shape == "hyperfinite_semifinite"
