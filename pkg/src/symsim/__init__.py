"""symsim: polynomial-time simulation of permutation-invariant qubit systems.

The invariant operator algebra on n qubits has dimension C(n+3,3), so
ground-state energies, ground states over the irrep sectors, and
expectation values under equivariant evolution are all computable in
time polynomial in n. A dense brute-force oracle cross-validates every
formula at small n.
"""

__version__ = "0.1.0"

from ._backend import active_backend, set_backend
from .equivariant_dynamics import (
    BlockState,
    LabeledSample,
    empirical_loss,
    evolution_from_hamiltonian,
    expectation,
    unitary_from_coeffs,
)
from .errors import ToleranceError, ValidationError
from .monomial_algebra import (
    MonomialIndex,
    StructureTensor,
    SymmetricOperator,
    class_size,
    enumerate_monomials,
    gse_regular,
    heisenberg_operator,
    monomial_count,
    multiply_monomials,
    regular_rep,
    structure_constant,
)
from .schur_blocks import (
    BlockOperator,
    GroundStateResult,
    IrrepLabel,
    block_operator,
    enumerate_irreps,
    f_block,
    f_element,
    ground_state,
)

__all__ = [
    "BlockOperator",
    "BlockState",
    "GroundStateResult",
    "IrrepLabel",
    "LabeledSample",
    "MonomialIndex",
    "StructureTensor",
    "SymmetricOperator",
    "ToleranceError",
    "ValidationError",
    "active_backend",
    "block_operator",
    "class_size",
    "empirical_loss",
    "enumerate_irreps",
    "enumerate_monomials",
    "evolution_from_hamiltonian",
    "expectation",
    "f_block",
    "f_element",
    "ground_state",
    "gse_regular",
    "heisenberg_operator",
    "monomial_count",
    "multiply_monomials",
    "regular_rep",
    "set_backend",
    "structure_constant",
    "unitary_from_coeffs",
]
