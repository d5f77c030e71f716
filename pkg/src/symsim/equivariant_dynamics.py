"""Evolution and expectation values entirely inside the sector blocks.

States enter in block-diagonal Schur form (one PSD matrix per sector with
unit total trace); unitaries enter as exp(-iHt) of an invariant
Hamiltonian, as monomial coefficients validated for unitarity, or as raw
per-sector blocks from a file. Everything then reduces to products of
matrices whose sizes are at most n+1, so a single expectation value costs
polynomially many operations instead of 2^n.

How to obtain a BlockState for a general physical density matrix without a
quantum device is deliberately left open; at small n the dense oracle can
embed block states into the full Hilbert space for cross-checking.
"""

import json
from dataclasses import dataclass, field
from typing import Dict, List

import numpy as np

from .errors import ToleranceError, ValidationError
from .monomial_algebra import SymmetricOperator
from .schur_blocks import (
    BlockOperator,
    IrrepLabel,
    block_operator,
    blocks_map_from_json_obj,
    blocks_map_to_json_obj,
    enumerate_irreps,
)

UNITARITY_TOL = 1e-8
EVOLUTION_UNITARITY_TOL = 1e-10
IMAG_RESIDUE_TOL = 1e-9
PSD_TOL = 1e-9
TRACE_TOL = 1e-9


@dataclass
class BlockState:
    """Block-diagonal density operator over the irrep sectors.

    Missing sectors are implicitly zero. Each present block must be
    Hermitian PSD (eigenvalues >= -1e-9) and the traces must sum to 1.
    """

    n: int
    blocks: Dict[IrrepLabel, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        known = set(enumerate_irreps(self.n))
        total = 0.0
        clean = {}
        for lam, mat in self.blocks.items():
            lam = IrrepLabel(*lam)
            if lam not in known:
                raise ValidationError(f"{tuple(lam)} is not a sector of n={self.n}")
            mat = np.asarray(mat, dtype=np.complex128)
            if mat.shape != (lam.q_dim, lam.q_dim):
                raise ValidationError(
                    f"sector {tuple(lam)} expects shape {(lam.q_dim, lam.q_dim)}, got {mat.shape}"
                )
            herm_gap = float(np.max(np.abs(mat - mat.conj().T)))
            if herm_gap > PSD_TOL:
                raise ValidationError(
                    f"state block {tuple(lam)} is not Hermitian (gap {herm_gap:.3e})"
                )
            low = float(np.linalg.eigvalsh(0.5 * (mat + mat.conj().T))[0])
            if low < -PSD_TOL:
                raise ValidationError(
                    f"state block {tuple(lam)} has negative eigenvalue {low:.3e}"
                )
            total += float(np.trace(mat).real)
            clean[lam] = mat
        if abs(total - 1.0) > TRACE_TOL:
            raise ValidationError(f"state blocks have total trace {total!r}, expected 1")
        self.blocks = clean

    def items(self):
        return [(lam, self.blocks[lam]) for lam in sorted(self.blocks, key=lambda l: l.lambda1)]

    def to_json(self):
        return json.dumps(blocks_map_to_json_obj(self.n, self.blocks))

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"malformed state file: {exc}") from exc
        n, blocks = blocks_map_from_json_obj(doc)
        return cls(n, blocks)


@dataclass(frozen=True)
class LabeledSample:
    state: BlockState
    label: int

    def __post_init__(self):
        if self.label not in (-1, 1):
            raise ValidationError(f"label must be -1 or +1, got {self.label!r}")


# ---------------------------------------------------------------------------
# unitaries

def evolution_from_hamiltonian(h: SymmetricOperator, t, threads=1) -> BlockOperator:
    """exp(-i h t) per sector via Hermitian eigendecomposition."""
    h.require_real("Hamiltonian")
    blocks = block_operator(h, threads=threads)
    out = {}
    for lam, mat in blocks.items():
        w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
        u = (v * np.exp(-1j * w * float(t))) @ v.conj().T
        gap = float(np.max(np.abs(u @ u.conj().T - np.eye(lam.q_dim))))
        if gap > EVOLUTION_UNITARITY_TOL:
            raise ToleranceError(
                f"evolution block {tuple(lam)} lost unitarity (gap {gap:.3e})"
            )
        out[lam] = u
    return BlockOperator(h.n, out)


def unitary_from_coeffs(u: SymmetricOperator, threads=1) -> BlockOperator:
    """Assemble sum_i u_i A_i per sector and insist the result is unitary.

    Coefficients may be complex; the input is rejected when any sector
    block fails || U U^dag - 1 ||_max <= 1e-8.
    """
    blocks = block_operator(u, threads=threads)
    for lam, mat in blocks.items():
        gap = float(np.max(np.abs(mat @ mat.conj().T - np.eye(lam.q_dim))))
        if gap > UNITARITY_TOL:
            raise ValidationError(
                f"coefficients do not describe a unitary: sector {tuple(lam)} "
                f"deviates by {gap:.3e}"
            )
    return blocks


def block_operator_from_json(text) -> BlockOperator:
    """Raw per-sector blocks from a file (same schema as state files)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"malformed block-operator file: {exc}") from exc
    n, blocks = blocks_map_from_json_obj(doc)
    return BlockOperator(n, blocks)


# ---------------------------------------------------------------------------
# expectation values

def expectation(o: SymmetricOperator, unitary: BlockOperator, state: BlockState) -> float:
    """tr(O U rho U^dag) summed over sectors in ascending lambda1 order."""
    if not (o.n == unitary.n == state.n):
        raise ValidationError(
            f"size mismatch: observable n={o.n}, unitary n={unitary.n}, state n={state.n}"
        )
    o.require_real("observable")
    obs_blocks = block_operator(o)
    val = 0j
    for lam, rho in state.items():
        u = unitary[lam]
        val += np.trace(u.conj().T @ obs_blocks[lam] @ u @ rho)
    val = complex(val)
    if abs(val.imag) > IMAG_RESIDUE_TOL * max(1.0, abs(val.real)):
        raise ToleranceError(
            f"expectation value has imaginary residue {val.imag:.3e}"
        )
    return val.real


def evolve_state(state: BlockState, unitary: BlockOperator) -> BlockState:
    """U rho U^dag per sector (sectors absent from the state stay zero)."""
    if state.n != unitary.n:
        raise ValidationError(f"state n={state.n} does not match unitary n={unitary.n}")
    blocks = {}
    for lam, rho in state.items():
        u = unitary[lam]
        blocks[lam] = u @ rho @ u.conj().T
    return BlockState(state.n, blocks)


def empirical_loss(samples: List[LabeledSample], o: SymmetricOperator,
                   unitary: BlockOperator) -> float:
    """Negative label-weighted mean of per-sample expectation values."""
    if not samples:
        raise ValidationError("empirical loss needs at least one sample")
    total = 0.0
    for sample in samples:
        total += sample.label * expectation(o, unitary, sample.state)
    return -total / len(samples)


def shadow_sample_complexity(n, epsilon=1e-2, delta=1e-2, o_inf=1.0):
    """Reference count of quantum measurements the classical path replaces.

    Estimating tr(O U rho U^dag) for an unknown physical state through
    randomized Pauli measurements needs on the order of
    |O|_inf^2 * eps^-2 * n_lambda^2 * n_q^2 * log(1/delta) shots. Reported
    for context only; nothing here executes it.
    """
    n_lambda = n // 2 + 1
    n_q = n + 1
    return {
        "formula": "O(|O|_inf^2 * epsilon^-2 * n_lambda^2 * n_q^2 * log(1/delta))",
        "n_lambda": n_lambda,
        "n_q": n_q,
        "epsilon": epsilon,
        "delta": delta,
        "o_inf": o_inf,
        "value": (o_inf ** 2) * epsilon ** -2 * n_lambda ** 2 * n_q ** 2
        * float(np.log(1.0 / delta)),
    }
