"""Layer partitions, corner compression, canonical terms, centralizers."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from freecore.algebra import (
    INFINITE,
    AbstractII1,
    AlgebraSpec,
    FreeGroupFactor,
    FullIIIWithCore,
    HyperfiniteDiffuse,
    MatrixBlock,
)
from freecore.amalg import (
    CompressionScenario,
    centralizer_structure,
    choose_gamma,
    choose_increasing_sequence,
    compression_formula,
    dichotomy_promote,
    layer_partition,
    sequential_composition_param,
    to_canonical,
)
from freecore.errors import (
    Dim22Rejected,
    DisconnectedIndex,
    HypothesesNotRecognized,
    InvalidScenario,
    UnsupportedStructure,
)
from freecore.scalars import MultGroup
from freecore.structure import (
    AmalgamatedFreeProduct,
    Amplify,
    Atom,
    CompressedPiece,
    CrossedProduct,
    Diffuse,
    DirectSum,
    FreeGroup,
    FreeProduct,
    GammaFreeProduct,
    LabelAlgebra,
    Opaque,
)

from conftest import block_spec, scalar_spec

F = Fraction


# ---------------------------------------------------------------------------
# layer partition


def test_layer_partition_bfs():
    part = layer_partition([0, 1, 2, 3, 4], [(0, 1), (0, 2), (1, 3), (2, 4)], 0)
    assert part.layers == ((0,), (1, 2), (3, 4))
    assert part.layer_of(4) == 2
    assert part.position(2) == (1, 1)
    assert part.ordered() == [0, 1, 2, 3, 4]
    assert part.precedes(1, 4)
    assert not part.precedes(3, 3)


def test_layer_partition_tie_order_follows_input():
    part = layer_partition([0, 2, 1], [(0, 1), (0, 2)], 0)
    assert part.layers == ((0,), (2, 1))


def test_layer_partition_rejects_disconnection():
    with pytest.raises(DisconnectedIndex):
        layer_partition([0, 1], [(0, 1)], 9)
    with pytest.raises(DisconnectedIndex):
        layer_partition([0, 1], [(0, 7)], 0)
    with pytest.raises(DisconnectedIndex):
        layer_partition([0, 1, 2], [(0, 1)], 0)


@given(st.integers(2, 12), st.randoms(use_true_random=False))
@settings(max_examples=60, deadline=None)
def test_layer_partition_disjoint_cover(n, rng):
    indices = list(range(n))
    edges = [(rng.randrange(i), i) for i in range(1, n)]  # random spanning tree
    edges += [
        (rng.randrange(n), rng.randrange(n)) for _ in range(rng.randrange(n))
    ]
    part = layer_partition(indices, edges, 0)
    flat = part.ordered()
    assert sorted(flat) == indices
    assert len(flat) == len(set(flat))
    assert part.layers[0] == (0,)
    adj = {i: set() for i in indices}
    for a, b in edges:
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    for depth, layer in enumerate(part.layers[1:], start=1):
        for i in layer:
            assert any(part.layer_of(j) == depth - 1 for j in adj[i])


# ---------------------------------------------------------------------------
# increasing position sequences


def test_increasing_sequence_frozen():
    assert choose_increasing_sequence([0, 1, 1, 2, 1, 3]) == [1, 2, 3, 5]
    assert choose_increasing_sequence([0, 1, 1, 2, 1, 3], count=2) == [1, 2]


def test_increasing_sequence_rejects_bad_layers():
    with pytest.raises(InvalidScenario):
        choose_increasing_sequence([])
    with pytest.raises(InvalidScenario):
        choose_increasing_sequence([1, 2])
    with pytest.raises(InvalidScenario):
        choose_increasing_sequence([0, 1, 0, 2])


@given(st.lists(st.integers(1, 5), min_size=1, max_size=30))
@settings(max_examples=100, deadline=None)
def test_increasing_sequence_properties(tail):
    layers = [0] + tail
    picks = choose_increasing_sequence(layers)
    assert picks[0] == 1
    assert all(a < b for a, b in zip(picks, picks[1:]))
    assert all(layers[m] >= layers[m - 1] for m in picks)


# ---------------------------------------------------------------------------
# linking mass choice


def test_choose_gamma_smallest_fitting():
    got = choose_gamma(F(1, 2), (F(1, 8),), [F(1, 2)], [F(1, 4), F(1, 8)])
    assert got == F(1, 8)
    # atoms below the cap win even when a larger one also fits
    got = choose_gamma(F(1, 2), (), [F(1, 2)], [F(3, 8), F(1, 16)])
    assert got == F(1, 16)


def test_choose_gamma_explicit():
    got = choose_gamma(F(1, 2), (), [F(1, 2)], [], policy="explicit:1/4")
    assert got == F(1, 4)
    with pytest.raises(InvalidScenario):
        choose_gamma(F(1, 2), (F(3, 8),), [F(1, 2)], [], policy="explicit:1/4")
    with pytest.raises(InvalidScenario):
        choose_gamma(F(1, 2), (), [F(1, 2)], [], policy="explicit:0")


def test_choose_gamma_failure_modes():
    with pytest.raises(InvalidScenario):
        choose_gamma(F(1, 2), (), [F(1, 2)], [F(3, 4)])  # nothing fits
    with pytest.raises(InvalidScenario):
        choose_gamma(F(1, 2), (), [F(1, 2)], [F(1, 8)], policy="largest")


# ---------------------------------------------------------------------------
# compression scenarios


def two_corner(gamma="1/8"):
    return CompressionScenario(
        indices=("0", "1"),
        beta={"0": "1/2", "1": "1/2"},
        gamma={"1": gamma},
        atoms={"0": ("1/8",), "1": ("1/8",)},
    )


def test_scenario_coerces_and_validates():
    sc = two_corner()
    assert sc.origin == "0"
    assert sc.beta["0"] == F(1, 2)
    assert sc.atoms["1"] == (F(1, 8),)
    assert sc.gamma["1"] == F(1, 8)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(indices=(), beta={}, gamma={}, atoms={}),
        dict(indices=("0", "0"), beta={"0": 1}, gamma={"0": "1/2"}, atoms={}),
        dict(indices=("0",), beta={"0": 0}, gamma={}, atoms={}),
        dict(indices=("0",), beta={"0": 1}, gamma={}, atoms={"0": ("0",)}),
        dict(indices=("0",), beta={"0": "1/4"}, gamma={}, atoms={"0": ("1/2",)}),
        dict(
            indices=("0", "1"),
            beta={"0": "1/2", "1": "1/2"},
            gamma={"1": "-1/8"},
            atoms={},
        ),
        dict(
            indices=("0", "1"),
            beta={"0": "1/2", "1": "1/2"},
            gamma={"1": "1/4"},
            atoms={"1": ("3/8",)},
        ),
        dict(
            indices=("0", "1"),
            beta={"0": "1/4", "1": "1/2"},
            gamma={"1": "3/8"},
            atoms={},
        ),
    ],
)
def test_scenario_rejections(kwargs):
    with pytest.raises(InvalidScenario):
        CompressionScenario(**kwargs)


def test_scenario_gamma_must_fit_origin_corner():
    # fits a larger intermediate corner but not the origin
    with pytest.raises(InvalidScenario):
        CompressionScenario(
            indices=("0", "1", "2"),
            beta={"0": "1/8", "1": "1/2", "2": "1/2"},
            gamma={"1": "1/16", "2": "1/4"},
            atoms={},
        )


def test_corner_spec_shapes():
    sc = two_corner()
    origin = sc.corner_spec("0")
    assert [s.weight for s in origin.summands] == [F(1, 4), F(3, 4)]
    assert origin.summands[1].kind == "diffuse"
    linked = sc.corner_spec("1")
    assert [s.weight for s in linked.summands] == [F(1, 4), F(1, 4), F(1, 2)]
    degenerate = CompressionScenario(
        indices=("0", "1"),
        beta={"0": "1/2", "1": "1/8"},
        gamma={"1": "1/8"},
        atoms={},
    )
    assert degenerate.corner_spec("1") is None


def test_compression_formula_frozen():
    sc = CompressionScenario(
        indices=("o", "i"),
        beta={"o": "1/2", "i": "1/2"},
        gamma={"i": "1/4"},
        atoms={},
    )
    res = compression_formula(sc)
    assert res.param == F(7, 4)
    assert res.terms == {"o": F(1), "i": F(3, 4)}
    q, free, piece = res.expr.factors
    assert q == Opaque("Q(o)")
    assert free == FreeGroup(param=F(7, 4))
    assert piece == CompressedPiece(F(1, 2), Amplify(F(1, 2), Opaque("Q(i)")))


def test_compression_formula_with_atoms():
    assert compression_formula(two_corner("1/8")).param == F(29, 16)
    assert compression_formula(two_corner("1/4")).param == F(13, 8)


def test_formula_matches_sequential_composition():
    for sc in (two_corner("1/8"), two_corner("1/4"), two_corner("1/3")):
        assert compression_formula(sc).param == sequential_composition_param(sc)


def test_formula_invariances():
    base = CompressionScenario(
        indices=("o", "a", "b"),
        beta={"o": "1/2", "a": "1/3", "b": "1/4"},
        gamma={"a": "1/8", "b": "1/8"},
        atoms={"a": ("1/16",)},
    )
    swapped = CompressionScenario(
        indices=("o", "b", "a"),
        beta=base.beta,
        gamma=base.gamma,
        atoms={"a": ("1/16",)},
    )
    assert compression_formula(base).param == compression_formula(swapped).param
    # an index carried entirely by its linking projection contributes nothing
    extended = CompressionScenario(
        indices=("o", "a", "b", "z"),
        beta={**base.beta, "z": "1/20"},
        gamma={**base.gamma, "z": "1/20"},
        atoms={"a": ("1/16",)},
    )
    assert compression_formula(extended).param == compression_formula(base).param
    assert sequential_composition_param(extended) == compression_formula(base).param


_mass = st.sampled_from([F(1, 2), F(1, 3), F(1, 4), F(1, 5), F(1, 8), F(1, 16)])


@given(
    st.lists(_mass, min_size=1, max_size=4),
    st.lists(st.lists(_mass, max_size=2), min_size=1, max_size=4),
    st.lists(_mass, min_size=1, max_size=4),
)
@settings(max_examples=80, deadline=None)
def test_formula_matches_sequential_random(betas, atom_lists, gammas):
    names = [str(k) for k in range(len(betas))]
    try:
        sc = CompressionScenario(
            indices=tuple(names),
            beta=dict(zip(names, betas)),
            gamma={n: g for n, g in zip(names[1:], gammas)},
            atoms={n: tuple(a) for n, a in zip(names, atom_lists)},
        )
    except (InvalidScenario, KeyError):
        return
    assert compression_formula(sc).param == sequential_composition_param(sc)


# ---------------------------------------------------------------------------
# canonical rewriting


def test_canonical_amplify_folds():
    assert to_canonical(Amplify(F(1, 2), FreeGroup(param=F(2)))) == FreeGroup(
        param=F(5)
    )
    assert to_canonical(Amplify(F(2), FreeGroup(param=F(2)))) == FreeGroup(
        param=F(5, 4)
    )
    assert to_canonical(Amplify(INFINITE, FreeGroup(param=F(2)))) == FreeGroup(
        param=F(2), semifinite=True
    )
    assert to_canonical(
        Amplify(F(3), Amplify(F(1, 3), FreeGroup(param=F(7, 4))))
    ) == FreeGroup(param=F(7, 4))
    assert to_canonical(Amplify(F(2), Diffuse())) == Diffuse()
    assert to_canonical(Amplify(INFINITE, Diffuse())) == Diffuse(finite=False)
    assert to_canonical(Amplify(F(1), Opaque("N"))) == Opaque("N")
    assert to_canonical(Amplify(F(2), Opaque("N", F(3)))) == Opaque("N", F(6))
    assert to_canonical(Amplify(F(1, 2), Atom(F(1, 4)))) == Atom(F(1, 4))
    # finite rescaling cannot sharpen a semifinite leaf
    semi = FreeGroup(param=F(2), semifinite=True)
    assert to_canonical(Amplify(F(1, 2), semi)) == semi


def test_canonical_compressed_piece():
    got = to_canonical(CompressedPiece(F(1, 2), FreeGroup(param=F(2))))
    assert got == DirectSum(
        (Atom(F(1, 2)), FreeGroup(param=F(2), weight=F(1, 2)))
    )
    assert to_canonical(CompressedPiece(F(1), Opaque("Q"))) == Opaque("Q")


def test_canonical_free_product_merges_tracial_diffuse():
    got = to_canonical(
        FreeProduct((FreeGroup(param=F(3, 2)), Diffuse(), Atom(F(1))))
    )
    assert got == FreeGroup(param=F(5, 2))
    got = to_canonical(
        FreeProduct(
            (FreeGroup(param=F(2)), FreeGroup(param=F(3, 2)), Diffuse())
        )
    )
    assert got == FreeGroup(param=F(9, 2))
    # semifinite factors stay apart
    got = to_canonical(
        FreeProduct((FreeGroup(param=F(2), semifinite=True), Diffuse()))
    )
    assert isinstance(got, FreeProduct) and len(got.factors) == 2


def test_canonical_free_product_trivial_cases():
    assert to_canonical(FreeProduct((Atom(F(1)), Opaque("N")))) == Opaque("N")
    assert to_canonical(FreeProduct((Atom(F(1)), Atom(F(1))))) == Atom(F(1))


def test_canonical_gamma_free_product_promotion():
    group = MultGroup.from_ratios([F(2)])
    assert to_canonical(GammaFreeProduct(group, FreeGroup(param=F(2)))) == FreeGroup(
        param=INFINITE
    )
    assert to_canonical(GammaFreeProduct(group, Diffuse())) == FreeGroup(
        param=INFINITE
    )
    assert to_canonical(GammaFreeProduct(group, Atom(F(1, 2)))) == Atom(F(1, 2))
    kept = to_canonical(GammaFreeProduct(group, Opaque("N")))
    assert kept == GammaFreeProduct(group, Opaque("N"))


def test_canonical_rejects_unrewritable_nodes():
    group = MultGroup.from_ratios([F(2)])
    for expr in (
        LabelAlgebra(group),
        CrossedProduct("A", group),
        AmalgamatedFreeProduct(LabelAlgebra(group), (Opaque("A"), Opaque("B"))),
    ):
        with pytest.raises(UnsupportedStructure):
            to_canonical(expr)


_leaves = st.one_of(
    st.builds(Atom, st.sampled_from([F(1, 4), F(1, 2), F(1)])),
    st.builds(Diffuse, st.just(F(1)), st.booleans()),
    st.builds(
        FreeGroup,
        st.sampled_from([F(3, 2), F(2), F(5)]),
        st.just(F(1)),
        st.booleans(),
    ),
    st.builds(Opaque, st.sampled_from(["N", "Q"])),
)
_terms = st.recursive(
    _leaves,
    lambda inner: st.one_of(
        st.builds(lambda es: DirectSum(tuple(es)), st.lists(inner, min_size=1, max_size=3)),
        st.builds(lambda fs: FreeProduct(tuple(fs)), st.lists(inner, min_size=1, max_size=3)),
        st.builds(Amplify, st.sampled_from([F(1, 2), F(2), INFINITE]), inner),
        st.builds(CompressedPiece, st.sampled_from([F(1, 2), F(1)]), inner),
    ),
    max_leaves=6,
)


@given(_terms)
@settings(max_examples=200, deadline=None)
def test_canonical_idempotent(expr):
    once = to_canonical(expr)
    assert to_canonical(once) == once


def test_dichotomy_promote():
    trivial = MultGroup.trivial()
    group = MultGroup.from_ratios([F(2)])
    leaf = FreeGroup(param=F(2))
    assert dichotomy_promote(leaf, trivial) == leaf
    assert dichotomy_promote(leaf, group) == FreeGroup(param=INFINITE)
    semi = FreeGroup(param=F(2), semifinite=True)
    assert dichotomy_promote(semi, group) == FreeGroup(
        param=INFINITE, semifinite=True
    )
    assert dichotomy_promote(Opaque("N"), group) == Opaque("N")


# ---------------------------------------------------------------------------
# centralizer dispatch


def full_iii_spec(label="M", ratios=("1/2",)):
    group = MultGroup.from_ratios([F(r) for r in ratios])
    return AlgebraSpec(label, (FullIIIWithCore(F(1), group, label=label),))


def single(summand, name="x"):
    return AlgebraSpec(name, (summand,))


def test_centralizer_tracial_pair():
    res = centralizer_structure(
        scalar_spec("a", "1/2", "1/2"), scalar_spec("b", "1/3", "1/3", "1/3")
    )
    assert res.rule == "tracial-free-product"
    assert res.flags == {"tracial": True, "factor": True}
    assert res.canonical == FreeGroup(param=F(7, 6))
    assert res.group.is_trivial


def test_centralizer_full_against_amenable():
    res = centralizer_structure(
        full_iii_spec(), single(HyperfiniteDiffuse(F(1)), "r")
    )
    assert res.rule == "full-factor-against-amenable"
    assert res.canonical == FreeGroup(param=INFINITE)
    assert res.canonical.render() == "L(F_∞)"
    assert "(M)_φ" in res.display.render()
    assert res.flags["full"] and res.flags["no_cartan"] and res.flags["prime"]


def test_centralizer_full_against_finite():
    res = centralizer_structure(
        full_iii_spec(), single(FreeGroupFactor(F(1), F(2)), "f")
    )
    assert res.rule == "full-factor-against-finite"
    assert "⋆_{γ∈Γ}(L(F_2))^γ" in res.display.render()
    res2 = centralizer_structure(
        full_iii_spec(), single(AbstractII1(F(1), label="N"), "n")
    )
    assert res2.rule == "full-factor-against-finite"
    assert "⋆_{γ∈Γ}(N)^γ" in res2.display.render()


def test_centralizer_atomic_against_tracial_factor():
    res = centralizer_structure(
        block_spec("e", ("2/3", "1/3")), single(AbstractII1(F(1), label="M₂"), "m")
    )
    assert res.rule == "atomic-against-tracial-factor"
    assert res.display.render() == "⋆_{γ∈Γ}(M₂)^γ"
    assert res.group == MultGroup.from_ratios([F(2)])
    assert res.flags["t_set"]


def test_centralizer_closed_class():
    res = centralizer_structure(
        block_spec("e", ("2/3", "1/3")), single(HyperfiniteDiffuse(F(1)), "r")
    )
    assert res.rule == "closed-class-free-product"
    assert res.canonical == FreeGroup(param=INFINITE)


def test_centralizer_rejections():
    with pytest.raises(Dim22Rejected):
        centralizer_structure(
            scalar_spec("a", "2/3", "1/3"), scalar_spec("b", "1/2", "1/2")
        )
    with pytest.raises(HypothesesNotRecognized):
        centralizer_structure(
            single(AbstractII1(F(1)), "n1"), single(AbstractII1(F(1)), "n2")
        )
    mixed = AlgebraSpec(
        "m", (AbstractII1(F(1, 2)), MatrixBlock(1, (F(1, 2),)))
    )
    with pytest.raises(HypothesesNotRecognized):
        centralizer_structure(full_iii_spec(), mixed)
