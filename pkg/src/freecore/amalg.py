"""Index layering, corner compression and centralizer structure.

Three layers of machinery that work together: a breadth first layer
partition of an index set with a distinguished origin, a compression
calculus that computes the free group parameter left in an origin
corner after linking the other indices through chosen projections, and
a canonical term rewriter plus dispatch deciding the centralizer
structure of a free product pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    INFINITE,
    AbstractII1,
    AlgebraSpec,
    FullIIIWithCore,
    FreeGroupFactor,
    HyperfiniteDiffuse,
    Infinity,
    MatrixBlock,
)
from .core import CLOSED_KINDS
from .errors import (
    Dim22Rejected,
    DisconnectedIndex,
    HypothesesNotRecognized,
    InvalidScenario,
    UnsupportedStructure,
)
from .fdim import compress_param, fdim, finite_free_product
from .modular import classify_diffuse_type, sd_invariant, t_set
from .scalars import MultGroup, format_rational
from .structure import (
    Amplify,
    Atom,
    CentralizerSymbol,
    CompressedPiece,
    Diffuse,
    DirectSum,
    FreeGroup,
    FreeProduct,
    GammaDirectSum,
    GammaFreeProduct,
    Opaque,
    StructureExpr,
)

# ---------------------------------------------------------------------------
# layer partition


@dataclass(frozen=True)
class LayerPartition:
    """Breadth first layers of an index set seen from the origin."""

    origin: object
    layers: tuple[tuple, ...]

    def layer_of(self, index) -> int:
        for depth, layer in enumerate(self.layers):
            if index in layer:
                return depth
        raise KeyError(index)

    def position(self, index) -> tuple[int, int]:
        for depth, layer in enumerate(self.layers):
            if index in layer:
                return (depth, layer.index(index))
        raise KeyError(index)

    def ordered(self) -> list:
        return [i for layer in self.layers for i in layer]

    def precedes(self, a, b) -> bool:
        return self.position(a) < self.position(b)


def layer_partition(indices, edges, origin) -> LayerPartition:
    """Partition indices into breadth first layers from the origin.

    Ties within a layer follow the order of the indices argument, so
    the partition is deterministic.  Indices the edge relation never
    reaches are an error.
    """
    order = {idx: n for n, idx in enumerate(indices)}
    if origin not in order:
        raise DisconnectedIndex(f"origin {origin!r} is not an index")
    adj: dict = {idx: set() for idx in order}
    for a, b in edges:
        if a not in order or b not in order:
            raise DisconnectedIndex(f"edge ({a!r}, {b!r}) leaves the index set")
        if a != b:
            adj[a].add(b)
            adj[b].add(a)
    seen = {origin}
    layers = [(origin,)]
    frontier = [origin]
    while frontier:
        reached = {n for f in frontier for n in adj[f]} - seen
        if not reached:
            break
        frontier = sorted(reached, key=order.__getitem__)
        seen |= reached
        layers.append(tuple(frontier))
    missing = [idx for idx in indices if idx not in seen]
    if missing:
        raise DisconnectedIndex(
            f"indices {missing!r} are not connected to the origin {origin!r}"
        )
    return LayerPartition(origin, tuple(layers))


def choose_increasing_sequence(layers: list[int], count: int | None = None) -> list[int]:
    """Positions m_1 < m_2 < ... with layer(m) >= layer(m - 1).

    layers[m] is the layer of the m-th power of the chosen generator;
    layers[0] must be 0 and every later entry positive.  The first pick
    is always 1, and each later pick is the least position after the
    previous one that does not drop below its predecessor's layer.
    """
    if not layers or layers[0] != 0:
        raise InvalidScenario("layers must start at the origin (layer 0)")
    if any(v < 1 for v in layers[1:]):
        raise InvalidScenario("only the origin may sit in layer 0")
    picks = []
    prev = 0
    for j in range(1, len(layers)):
        if j > prev and layers[j] >= layers[j - 1]:
            picks.append(j)
            prev = j
            if count is not None and len(picks) == count:
                break
    return picks


# ---------------------------------------------------------------------------
# compression scenarios


def choose_gamma(
    beta_i: Fraction,
    atoms_i: tuple[Fraction, ...],
    earlier_betas: list[Fraction],
    earlier_atoms: list[Fraction],
    policy: str = "smallest",
) -> Fraction:
    """Pick the linking projection mass for one non origin index.

    The mass must fit under the index corner together with its atoms
    and inside some earlier corner.  "smallest" takes the least earlier
    atom mass that fits; "explicit:<value>" validates the given value.
    """
    cap = min(beta_i - sum(atoms_i, Fraction(0)), max(earlier_betas))
    if policy.startswith("explicit:"):
        value = Fraction(policy.split(":", 1)[1])
        if not 0 < value <= cap:
            raise InvalidScenario(
                f"explicit linking mass {format_rational(value)} does not fit "
                f"(cap {format_rational(cap)})"
            )
        return value
    if policy != "smallest":
        raise InvalidScenario(f"unknown gamma choice policy {policy!r}")
    fits = sorted(a for a in earlier_atoms if 0 < a <= cap)
    if not fits:
        raise InvalidScenario(
            "no earlier atom fits as a linking projection; give one explicitly"
        )
    return fits[0]


@dataclass(frozen=True)
class CompressionScenario:
    """Corner data for a family of indices linked to an origin.

    indices come in precedence order with the origin first.  Every
    index i carries the mass beta[i] of its corner and the masses
    atoms[i] of the scalar atoms inside it; every non origin index also
    carries the mass gamma[i] of the projection linking it to some
    earlier corner.  q, when given, names the corner algebras.
    """

    indices: tuple[str, ...]
    beta: dict
    gamma: dict
    atoms: dict
    q: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.indices:
            raise InvalidScenario("a scenario needs at least the origin index")
        if len(set(self.indices)) != len(self.indices):
            raise InvalidScenario("scenario indices must be distinct")
        object.__setattr__(
            self, "beta", {i: Fraction(self.beta[i]) for i in self.indices}
        )
        object.__setattr__(
            self,
            "atoms",
            {
                i: tuple(Fraction(a) for a in self.atoms.get(i, ()))
                for i in self.indices
            },
        )
        object.__setattr__(
            self,
            "gamma",
            {i: Fraction(self.gamma[i]) for i in self.indices[1:]},
        )
        for i in self.indices:
            if self.beta[i] <= 0:
                raise InvalidScenario(f"corner mass at {i!r} must be positive")
            if any(a <= 0 for a in self.atoms[i]):
                raise InvalidScenario(f"atom masses at {i!r} must be positive")
        o = self.origin
        if sum(self.atoms[o], Fraction(0)) > self.beta[o]:
            raise InvalidScenario("origin atoms exceed the origin corner")
        for pos, i in enumerate(self.indices[1:], start=1):
            g = self.gamma[i]
            if g <= 0:
                raise InvalidScenario(f"linking mass at {i!r} must be positive")
            if g + sum(self.atoms[i], Fraction(0)) > self.beta[i]:
                raise InvalidScenario(
                    f"linking mass and atoms at {i!r} exceed its corner"
                )
            if g > max(self.beta[j] for j in self.indices[:pos]):
                raise InvalidScenario(
                    f"linking mass at {i!r} fits in no earlier corner"
                )
            # the closed formula renormalizes everything into the origin
            # corner, so each linking projection must also fit there
            if g > self.beta[o]:
                raise InvalidScenario(
                    f"linking mass at {i!r} exceeds the origin corner"
                )

    @property
    def origin(self) -> str:
        return self.indices[0]

    def corner_spec(self, i: str) -> AlgebraSpec | None:
        """The index corner, renormalized to a unit state.

        Atoms (plus the linking projection away from the origin) become
        scalar summands; whatever mass is left is diffuse.  Returns
        None for the degenerate corner that is a single atom and
        nothing else.
        """
        b = self.beta[i]
        masses = list(self.atoms[i])
        if i != self.origin:
            masses.append(self.gamma[i])
        rest = b - sum(masses, Fraction(0))
        if rest == 0 and len(masses) == 1:
            return None
        summands = [MatrixBlock(1, (a / b,)) for a in masses]
        if rest > 0:
            summands.append(HyperfiniteDiffuse(rest / b))
        return AlgebraSpec(f"corner at {i}", tuple(summands))

    def q_expr(self, i: str) -> StructureExpr:
        given = self.q.get(i)
        if given is not None:
            return given if isinstance(given, StructureExpr) else Opaque(str(given))
        return Opaque(f"Q({i})")


@dataclass(frozen=True)
class CompressionResult:
    scenario: CompressionScenario
    param: Fraction
    terms: dict
    expr: StructureExpr


def compression_formula(scenario: CompressionScenario) -> CompressionResult:
    """Free group parameter and shape of the compressed origin corner.

    The parameter collects one term per index: the origin corner minus
    its atoms, and for every other index its corner minus the linking
    projection and atoms, all normalized by the squared origin mass.
    Linked corners reappear as bracket factors carrying the compressed
    algebra together with a scalar complement.
    """
    o = scenario.origin
    bo = scenario.beta[o]
    terms = {}
    terms[o] = (bo**2 - _sq(scenario.atoms[o])) / bo**2
    for i in scenario.indices[1:]:
        bi, gi = scenario.beta[i], scenario.gamma[i]
        terms[i] = (bi**2 - gi**2 - _sq(scenario.atoms[i])) / bo**2
    r = sum(terms.values(), Fraction(0))
    factors: list[StructureExpr] = [scenario.q_expr(o)]
    if r > 0:
        factors.append(FreeGroup(param=r))
    for i in scenario.indices[1:]:
        bi, gi = scenario.beta[i], scenario.gamma[i]
        factors.append(
            CompressedPiece(gi / bo, Amplify(gi / bi, scenario.q_expr(i)))
        )
    expr = factors[0] if len(factors) == 1 else FreeProduct(tuple(factors))
    return CompressionResult(scenario, r, terms, expr)


def _sq(masses) -> Fraction:
    return sum((a * a for a in masses), Fraction(0))


def sequential_composition_param(scenario: CompressionScenario) -> Fraction:
    """The compression parameter computed by corner composition.

    Independent route: realize every corner as an actual weighted
    algebra, take its free dimension, and recombine with the squared
    mass ratios.  Must agree with compression_formula exactly.
    """
    o = scenario.origin
    bo = scenario.beta[o]
    total = Fraction(0)
    for i in scenario.indices:
        spec = scenario.corner_spec(i)
        contribution = Fraction(0) if spec is None else fdim(spec)
        if not isinstance(contribution, Fraction):
            raise InvalidScenario("corner free dimension must be finite")
        total += (scenario.beta[i] / bo) ** 2 * contribution
    return total


# ---------------------------------------------------------------------------
# canonical rewriting


_RANK = {
    Atom: 0,
    Diffuse: 1,
    FreeGroup: 2,
    Opaque: 3,
    CentralizerSymbol: 4,
    Amplify: 5,
    CompressedPiece: 6,
    DirectSum: 7,
    FreeProduct: 8,
    GammaFreeProduct: 9,
    GammaDirectSum: 10,
}


def _sort_key(expr: StructureExpr):
    rank = _RANK.get(type(expr), 99)
    if isinstance(expr, Atom):
        return (rank, -expr.weight, "")
    if isinstance(expr, FreeGroup):
        p = Fraction(-1) if isinstance(expr.param, Infinity) else expr.param
        return (rank, p, json.dumps(expr.machine_form(), sort_keys=True, default=str))
    return (rank, Fraction(0), json.dumps(expr.machine_form(), sort_keys=True, default=str))


def _scaled(expr: StructureExpr, t: Fraction) -> StructureExpr:
    """Rescale the nominal masses of a term by t."""
    if isinstance(expr, Atom):
        return Atom(expr.weight * t)
    if isinstance(expr, Diffuse):
        return Diffuse(_scale_weight(expr.weight, t), expr.finite)
    if isinstance(expr, FreeGroup):
        return FreeGroup(expr.param, _scale_weight(expr.weight, t), expr.semifinite)
    if isinstance(expr, Opaque):
        return Opaque(expr.label, expr.amplification, _scale_weight(expr.weight, t))
    if isinstance(expr, CentralizerSymbol):
        return CentralizerSymbol(expr.label, _scale_weight(expr.weight, t))
    if isinstance(expr, DirectSum):
        return DirectSum(tuple(_scaled(e, t) for e in expr.entries))
    if isinstance(expr, FreeProduct):
        return FreeProduct(tuple(_scaled(f, t) for f in expr.factors))
    if isinstance(expr, Amplify):
        return Amplify(expr.factor, _scaled(expr.inner, t))
    if isinstance(expr, CompressedPiece):
        return CompressedPiece(expr.trace * t, expr.inner)
    return expr


def _scale_weight(weight, t):
    if weight is None or isinstance(weight, Infinity):
        return weight
    return weight * t


def _canon_amplify(factor, inner: StructureExpr) -> StructureExpr:
    if factor == 1:
        return inner
    if isinstance(inner, Atom):
        return inner
    if isinstance(inner, Amplify):
        f2 = inner.factor
        if isinstance(factor, Infinity) or isinstance(f2, Infinity):
            return _canon_amplify(INFINITE, inner.inner)
        if not isinstance(factor, str) and not isinstance(f2, str):
            return _canon_amplify(factor * f2, inner.inner)
        return Amplify(factor, inner)
    if isinstance(inner, FreeGroup):
        if isinstance(factor, Infinity):
            return FreeGroup(inner.param, inner.weight, semifinite=True)
        if isinstance(factor, str):
            return Amplify(factor, inner)
        if inner.semifinite:
            return inner  # finite rescaling of a semifinite algebra
        return FreeGroup(compress_param(inner.param, factor), inner.weight)
    if isinstance(inner, Diffuse):
        if isinstance(factor, Infinity):
            return Diffuse(inner.weight, finite=False)
        return inner  # the hyperfinite II_1 factor absorbs finite amplification
    if isinstance(inner, Opaque) and not isinstance(factor, (str, Infinity)):
        if not isinstance(inner.amplification, str):
            return Opaque(inner.label, inner.amplification * factor, inner.weight)
    return Amplify(factor, inner)


def to_canonical(expr: StructureExpr) -> StructureExpr:
    """Rewrite a structure term into its canonical form.

    Flattens nested sums and products, expands compressed pieces into a
    summand plus scalar complement, folds amplifications through free
    group and hyperfinite leaves, merges freely joined tracial diffuse
    leaves by adding free dimensions, and sorts deterministically.
    Idempotent by construction.
    """
    if isinstance(
        expr, (Atom, Diffuse, FreeGroup, Opaque, CentralizerSymbol)
    ):
        return expr
    if isinstance(expr, Amplify):
        return _canon_amplify(expr.factor, to_canonical(expr.inner))
    if isinstance(expr, CompressedPiece):
        inner = to_canonical(expr.inner)
        if expr.trace == 1:
            return inner
        return to_canonical(
            DirectSum((_scaled(inner, expr.trace), Atom(1 - expr.trace)))
        )
    if isinstance(expr, DirectSum):
        entries = []
        for e in expr.entries:
            e = to_canonical(e)
            if isinstance(e, DirectSum):
                entries.extend(e.entries)
            else:
                entries.append(e)
        if len(entries) == 1:
            return entries[0]
        return DirectSum(tuple(sorted(entries, key=_sort_key)))
    if isinstance(expr, FreeProduct):
        factors = []
        for f in expr.factors:
            f = to_canonical(f)
            if isinstance(f, FreeProduct):
                factors.extend(f.factors)
            elif isinstance(f, Atom) and f.weight == 1:
                continue  # the scalars are a trivial free factor
            else:
                factors.append(f)
        merged = _merge_free_diffuse(factors)
        if not merged:
            return Atom(Fraction(1))
        if len(merged) == 1:
            return merged[0]
        return FreeProduct(tuple(sorted(merged, key=_sort_key)))
    if isinstance(expr, GammaFreeProduct):
        inner = to_canonical(expr.inner)
        if isinstance(inner, Atom):
            return inner
        if (isinstance(inner, FreeGroup) and not inner.semifinite) or (
            isinstance(inner, Diffuse) and inner.finite
        ):
            # infinitely many diffuse tracial free factors
            return FreeGroup(param=INFINITE)
        return GammaFreeProduct(expr.group, inner)
    if isinstance(expr, GammaDirectSum):
        return GammaDirectSum(expr.group, to_canonical(expr.inner), expr.per_label)
    raise UnsupportedStructure(
        f"{type(expr).__name__} terms have no canonical rewriting"
    )


def _merge_free_diffuse(factors: list[StructureExpr]) -> list[StructureExpr]:
    """Merge tracial free group and diffuse hyperfinite free factors."""
    mergeable = [
        f
        for f in factors
        if (isinstance(f, FreeGroup) and not f.semifinite)
        or (isinstance(f, Diffuse) and f.finite)
    ]
    if len(mergeable) < 2:
        return factors
    rest = [f for f in factors if f not in mergeable]
    params = [
        f.param if isinstance(f, FreeGroup) else Fraction(1) for f in mergeable
    ]
    if any(isinstance(p, Infinity) for p in params):
        total = INFINITE
    else:
        total = sum(params, Fraction(0))
    weight = next((f.weight for f in mergeable if f.weight is not None), None)
    return rest + [FreeGroup(param=total, weight=weight)]


def dichotomy_promote(expr: StructureExpr, group: MultGroup) -> StructureExpr:
    """Promote a lone free group leaf to the infinite parameter.

    With a nontrivial ratio group the compression constant cannot be
    pinned down, so a single (possibly semifinite) free group factor is
    only determined up to amplification; the stable class is the
    infinitely generated one.
    """
    if group.is_trivial:
        return expr
    if isinstance(expr, FreeGroup):
        return FreeGroup(param=INFINITE, weight=expr.weight, semifinite=expr.semifinite)
    return expr


# ---------------------------------------------------------------------------
# centralizer structure


@dataclass(frozen=True)
class CentralizerResult:
    display: StructureExpr
    canonical: StructureExpr
    rule: str
    group: MultGroup
    flags: dict
    notes: tuple[str, ...]


def _single_full_weight(spec: AlgebraSpec, kinds: tuple[type, ...]):
    if spec.tail is None and len(spec.summands) == 1:
        s = spec.summands[0]
        if isinstance(s, kinds) and s.weight == 1:
            return s
    return None


def _nontracial_flags(spec1: AlgebraSpec, spec2: AlgebraSpec, group) -> dict:
    return {
        "no_cartan": True,
        "prime": True,
        "full": True,
        "factor_type": classify_diffuse_type(spec1, spec2).describe(),
        "t_set": t_set(group).describe(),
    }


def centralizer_structure(
    spec1: AlgebraSpec, spec2: AlgebraSpec, height: int = 3
) -> CentralizerResult:
    """Structure of the centralizer of the free product state.

    Dispatches over the recognized hypothesis classes; anything else is
    rejected rather than guessed.
    """
    if spec1.dimension() == 2 and spec2.dimension() == 2:
        raise Dim22Rejected(
            "both algebras are two dimensional; this pairing is excluded"
        )
    group = sd_invariant(spec1, spec2)

    if spec1.tracial and spec2.tracial:
        try:
            ffp = finite_free_product(spec1, spec2)
        except UnsupportedStructure as exc:
            raise HypothesesNotRecognized(
                f"tracial pair outside the finite calculus: {exc.message}"
            ) from exc
        canonical = to_canonical(ffp.expr)
        return CentralizerResult(
            display=ffp.expr,
            canonical=canonical,
            rule="tracial-free-product",
            group=group,
            flags={"tracial": True, "factor": not ffp.atoms},
            notes=("the state is a trace, so the centralizer is everything",),
        )

    # a full factor against a single amenable or tracial factor
    for a, b in ((spec1, spec2), (spec2, spec1)):
        left = _single_full_weight(a, (FullIIIWithCore,))
        if left is None:
            continue
        centralizer = CentralizerSymbol(left.label)
        if _single_full_weight(b, (HyperfiniteDiffuse,)) is not None:
            display = FreeProduct((centralizer, FreeGroup(param=INFINITE)))
            canonical = to_canonical(
                FreeProduct((FreeGroup(param=INFINITE), FreeGroup(param=INFINITE)))
            )
            return CentralizerResult(
                display,
                canonical,
                rule="full-factor-against-amenable",
                group=group,
                flags=_nontracial_flags(spec1, spec2, group),
                notes=(
                    f"({left.label})_φ stands for the centralizer of the full "
                    "factor input, itself infinitely generated free",
                ),
            )
        other = _single_full_weight(b, (AbstractII1, FreeGroupFactor))
        if other is not None:
            leaf: StructureExpr
            if isinstance(other, AbstractII1):
                leaf = Opaque(other.label)
            elif other.amplification != 1:
                leaf = Amplify(other.amplification, FreeGroup(param=other.param))
            else:
                leaf = FreeGroup(param=other.param)
            display = FreeProduct((centralizer, GammaFreeProduct(group, leaf)))
            canonical = to_canonical(
                FreeProduct(
                    (FreeGroup(param=INFINITE), GammaFreeProduct(group, leaf))
                )
            )
            return CentralizerResult(
                display,
                canonical,
                rule="full-factor-against-finite",
                group=group,
                flags=_nontracial_flags(spec1, spec2, group),
                notes=(
                    "each group element contributes one amplified free copy "
                    "of the finite factor",
                ),
            )

    # an atomic non tracial input against one opaque tracial factor
    for a, b in ((spec1, spec2), (spec2, spec1)):
        if not (a.atomic_type_i() and not a.tracial):
            continue
        other = _single_full_weight(b, (AbstractII1,))
        if other is None:
            continue
        expr = GammaFreeProduct(group, Opaque(other.label))
        return CentralizerResult(
            display=expr,
            canonical=to_canonical(expr),
            rule="atomic-against-tracial-factor",
            group=group,
            flags=_nontracial_flags(spec1, spec2, group),
            notes=(
                "the centralizer is generated by amplified copies of the "
                "tracial factor indexed by the ratio group",
            ),
        )

    kinds = {s.kind for s in spec1.summands} | {s.kind for s in spec2.summands}
    if kinds <= CLOSED_KINDS:
        expr = FreeGroup(param=INFINITE)
        return CentralizerResult(
            display=expr,
            canonical=expr,
            rule="closed-class-free-product",
            group=group,
            flags=_nontracial_flags(spec1, spec2, group),
            notes=(
                "every summand lies in the closed class, so the centralizer "
                "is the infinitely generated free group factor",
            ),
        )
    raise HypothesesNotRecognized(
        "no recognized hypothesis class covers this pair "
        f"(summand kinds {sorted(kinds)})"
    )
