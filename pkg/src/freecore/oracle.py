"""Independent checks for the exact calculus.

Three kinds of cross validation: a random matrix model for the scalar
atom rule (generic subspace intersections realize the predicted atom
masses exactly), a grid comparison of the closed compression formula
against step by step corner composition, and free dimension
recomposition for finite tracial products.  None of these share code
paths with the formulas they check.
"""

from __future__ import annotations

import random
from fractions import Fraction
from math import lcm

from .algebra import AlgebraSpec, HyperfiniteDiffuse, MatrixBlock
from .amalg import (
    CompressionScenario,
    compression_formula,
    sequential_composition_param,
)
from .fdim import fdim, fdim_of_expression, finite_free_product, scalar_atom_rule
from .errors import Dim22Rejected, UnsupportedStructure


# ---------------------------------------------------------------------------
# random matrix model for the atom rule


def _haar_unitary(n: int, rng):
    import numpy as np

    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def simulate_pair_atoms(
    weights1,
    weights2,
    min_dim: int = 48,
    trials: int = 3,
    seed: int = 7,
    tol: float = 1e-6,
):
    """Estimate the atoms of two freely rotated diagonal families.

    Each weight list becomes a partition of a common basis into exact
    integer blocks; the second family is conjugated by a Haar unitary.
    For blocks of fractional sizes a and b the intersection of their
    ranges has dimension max(a + b - n, 0) in generic position, so
    counting eigenvalues of PQP near 1 recovers the predicted atom
    masses without touching the symbolic rule.  tol bounds the mass
    comparison only; rank detection uses a fixed tight threshold since
    forced intersections give eigenvalues exactly 1, while the
    continuous bulk can edge close to 1 (0.9866 for masses 4/5, 3/10).
    """
    import numpy as np

    w1 = [Fraction(w) for w in weights1]
    w2 = [Fraction(w) for w in weights2]
    denom = lcm(*(w.denominator for w in w1 + w2))
    n = denom * max(1, (min_dim + denom - 1) // denom)
    sizes1 = [int(w * n) for w in w1]
    sizes2 = [int(w * n) for w in w2]
    rng = np.random.default_rng(seed)
    expected = [float(a) for a in scalar_atom_rule(w1, w2)]
    estimates = []
    for _ in range(trials):
        u = _haar_unitary(n, rng)
        found = []
        start1 = 0
        for a in sizes1:
            block1 = slice(start1, start1 + a)
            start1 += a
            start2 = 0
            for b in sizes2:
                rows = u[start2 : start2 + b, :]
                start2 += b
                if a + b <= n:
                    continue
                # eigenvalues of P Q P restricted to the P block
                m = rows[:, block1]
                gram = m.conj().T @ m
                eig = np.linalg.eigvalsh(gram)
                rank = int((eig > 1 - 1e-8).sum())
                if rank:
                    found.append(rank / n)
        estimates.append(sorted(found, reverse=True))
    agree = all(
        len(e) == len(expected)
        and all(abs(x - y) <= tol for x, y in zip(e, expected))
        for e in estimates
    )
    return {
        "dimension": n,
        "trials": trials,
        "expected": expected,
        "estimated": estimates,
        "agrees": agree,
    }


# ---------------------------------------------------------------------------
# compression grid


def two_index_scenarios(steps: int = 7):
    """All admissible two index scenarios over a uniform mass grid.

    Corner masses run over steps values in (0, 1); linking masses and
    single atoms run over the same grid where admissible.
    """
    grid = [Fraction(k, steps + 1) for k in range(1, steps + 1)]
    scenarios = []
    for bo in grid:
        for b2 in grid:
            for g in grid:
                if g > min(b2, bo):
                    continue
                for j_o in [(), *((a,) for a in grid if a <= bo)]:
                    for j_2 in [(), *((a,) for a in grid if g + a <= b2)]:
                        scenarios.append(
                            CompressionScenario(
                                indices=("o", "2"),
                                beta={"o": bo, "2": b2},
                                gamma={"2": g},
                                atoms={"o": j_o, "2": j_2},
                            )
                        )
    return scenarios


def grid_agreement(steps: int = 7):
    """Compare the closed formula with corner composition over the grid."""
    mismatches = []
    scenarios = two_index_scenarios(steps)
    for sc in scenarios:
        closed = compression_formula(sc).param
        composed = sequential_composition_param(sc)
        if closed != composed:
            mismatches.append(
                {
                    "beta": {i: str(sc.beta[i]) for i in sc.indices},
                    "gamma": {i: str(g) for i, g in sc.gamma.items()},
                    "atoms": {
                        i: [str(a) for a in sc.atoms[i]] for i in sc.indices
                    },
                    "closed": str(closed),
                    "composed": str(composed),
                }
            )
    return {
        "checked": len(scenarios),
        "mismatches": len(mismatches),
        "details": mismatches[:5],
    }


# ---------------------------------------------------------------------------
# free dimension recomposition


def _random_tracial_spec(rng: random.Random, name: str) -> AlgebraSpec:
    denom = rng.choice([6, 8, 12, 16, 24])
    parts = rng.randint(2, min(5, denom))
    cuts = sorted(rng.sample(range(1, denom), parts - 1))
    masses = [
        Fraction(b - a, denom) for a, b in zip([0, *cuts], [*cuts, denom])
    ]
    summands = []
    for m in masses:
        roll = rng.random()
        if roll < 0.6:
            summands.append(MatrixBlock(1, (m,)))
        elif roll < 0.8:
            size = rng.choice([2, 3])
            summands.append(MatrixBlock(size, (m / size,) * size))
        else:
            summands.append(HyperfiniteDiffuse(m))
    return AlgebraSpec(name, tuple(summands))


def fdim_recomposition(samples: int = 200, seed: int = 11):
    """Check additivity of the free dimension over random products.

    For accepted pairs the output expression's free dimension must equal
    the sum of the inputs' free dimensions, exactly.
    """
    rng = random.Random(seed)
    accepted = 0
    rejected = 0
    failures = []
    for k in range(samples):
        a = _random_tracial_spec(rng, f"A{k}")
        b = _random_tracial_spec(rng, f"B{k}")
        try:
            result = finite_free_product(a, b)
        except (UnsupportedStructure, Dim22Rejected):
            rejected += 1
            continue
        accepted += 1
        got = fdim_of_expression(result.expr)
        want = fdim(a) + fdim(b)
        if got != want:
            failures.append((a.describe(), b.describe(), str(got), str(want)))
    return {
        "samples": samples,
        "accepted": accepted,
        "rejected": rejected,
        "failures": failures,
    }


def run_oracle_checks(steps: int = 5, samples: int = 100, simulate: bool = False):
    """Bundle of deterministic cross checks, optionally with the matrix model."""
    report = {
        "grid": grid_agreement(steps),
        "fdim": fdim_recomposition(samples),
    }
    if simulate:
        report["atoms"] = simulate_pair_atoms(
            (Fraction(4, 5), Fraction(1, 10), Fraction(1, 10)),
            (Fraction(7, 10), Fraction(3, 10)),
        )
    ok = (
        report["grid"]["mismatches"] == 0
        and not report["fdim"]["failures"]
        and (not simulate or report["atoms"]["agrees"])
    )
    report["ok"] = ok
    return report
