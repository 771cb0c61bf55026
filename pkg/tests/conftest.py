"""Shared builders for the test suite."""

from fractions import Fraction

import pytest

from freecore.algebra import AlgebraSpec, GeometricMatrixTail, MatrixBlock
from freecore.scalars import MultGroup


def scalar_spec(name, *masses) -> AlgebraSpec:
    """Commutative atomic algebra with the given state masses."""
    return AlgebraSpec(
        name,
        tuple(MatrixBlock(1, (Fraction(m),)) for m in masses),
    )


def block_spec(name, *eigenvalue_lists) -> AlgebraSpec:
    """Direct sum of matrix blocks from eigenvalue tuples."""
    return AlgebraSpec(
        name,
        tuple(
            MatrixBlock(len(eigs), tuple(Fraction(e) for e in eigs))
            for eigs in eigenvalue_lists
        ),
    )


def tail_spec(name, *generators, base="1/2") -> AlgebraSpec:
    group = MultGroup.from_ratios([Fraction(g) for g in generators])
    return AlgebraSpec(name, (), GeometricMatrixTail(group, Fraction(base)))


@pytest.fixture
def two_to_one():
    """Single block, eigenvalue ratio 2: ratio group <2>."""
    return block_spec("two-to-one", ("2/3", "1/3"))


@pytest.fixture
def trace_block():
    """Tracial two by two block: trivial ratio group."""
    return block_spec("trace-block", ("1/2", "1/2"))
