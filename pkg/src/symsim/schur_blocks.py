"""Block diagonalization over the two-row irrep sectors of n qubits.

A permutation-invariant operator acts identically on every multiplicity
copy of an irrep sector, so it is fully described by one dense block per
two-row partition (n - lam1, lam1), of size n - 2*lam1 + 1. This module
enumerates the sectors, computes the per-monomial block matrix elements
through a constrained combinatorial sum, assembles block operators, and
finds ground states sector by sector in polynomial time.
"""

import json
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, NamedTuple

import numpy as np

from ._backend import f_block as _f_block_kernel
from .errors import ValidationError
from .monomial_algebra import (
    MonomialIndex,
    SymmetricOperator,
    as_monomial,
    enumerate_monomials,
)

DEGENERACY_RTOL = 1e-10


class IrrepLabel(NamedTuple):
    """Two-row partition (lambda0, lambda1) labeling an irrep sector."""

    lambda0: int
    lambda1: int

    @property
    def n(self):
        return self.lambda0 + self.lambda1

    @property
    def q_dim(self):
        """Size of the sector: n - 2*lambda1 + 1."""
        return self.lambda0 - self.lambda1 + 1


def as_irrep(value, n=None):
    try:
        lam = IrrepLabel(int(value[0]), int(value[1]))
    except (TypeError, ValueError, IndexError) as exc:
        raise ValidationError(f"not an irrep label: {value!r}") from exc
    if not lam.lambda0 >= lam.lambda1 >= 0:
        raise ValidationError(f"invalid two-row partition {tuple(lam)}")
    if n is not None and lam.n != n:
        raise ValidationError(f"partition {tuple(lam)} is not a partition of {n}")
    return lam


def enumerate_irreps(n) -> List[IrrepLabel]:
    """All two-row partitions of n, ascending in the second row length."""
    if n < 1:
        raise ValidationError(f"system size must be >= 1, got {n}")
    return [IrrepLabel(n - lam1, lam1) for lam1 in range(n // 2 + 1)]


def irrep_of_lambda1(n, lam1):
    return as_irrep((n - lam1, lam1), n)


def sector_dimension_check(n):
    """sum over sectors of q_dim^2; equals the algebra dimension C(n+3,3)."""
    return sum(lam.q_dim ** 2 for lam in enumerate_irreps(n))


@lru_cache(maxsize=None)
def _f_block_cached(i: MonomialIndex, lam: IrrepLabel):
    block = _f_block_kernel(i.n, lam.lambda1, tuple(i))
    block.setflags(write=False)
    return block


def f_block(i, lam) -> np.ndarray:
    """Matrix of the symmetrized monomial A_i restricted to one sector.

    Entry (q, q') is the overlap of the weight-q and weight-q' canonical
    Schur states through A_i, evaluated as a constrained sum over pairing
    counts (read-only, cached per (i, lam)).
    """
    i = as_monomial(i)
    lam = as_irrep(lam, i.n)
    return _f_block_cached(i, lam)


def f_element(i, lam, q, qp) -> complex:
    """Single sector matrix element; zero when no pairing satisfies the
    letter-count and weight constraints."""
    i = as_monomial(i)
    lam = as_irrep(lam, i.n)
    m = i.n - 2 * lam.lambda1
    if not (0 <= q <= m and 0 <= qp <= m):
        raise ValidationError(
            f"q indices ({q}, {qp}) outside 0..{m} for partition {tuple(lam)}"
        )
    return complex(f_block(i, lam)[q, qp])


@dataclass
class BlockOperator:
    """One dense matrix per irrep sector, keyed by IrrepLabel."""

    n: int
    blocks: Dict[IrrepLabel, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        expected = enumerate_irreps(self.n)
        if sorted(self.blocks, key=lambda l: l.lambda1) != expected:
            raise ValidationError(
                f"block operator must carry every sector of n={self.n} exactly once"
            )
        for lam, mat in self.blocks.items():
            mat = np.asarray(mat, dtype=np.complex128)
            if mat.shape != (lam.q_dim, lam.q_dim):
                raise ValidationError(
                    f"sector {tuple(lam)} expects shape {(lam.q_dim, lam.q_dim)}, got {mat.shape}"
                )
            self.blocks[lam] = mat

    def items(self):
        """(label, block) pairs in ascending lambda1 order."""
        return [(lam, self.blocks[lam]) for lam in sorted(self.blocks, key=lambda l: l.lambda1)]

    def __getitem__(self, lam):
        return self.blocks[as_irrep(lam, self.n)]


def block_operator(coeffs: SymmetricOperator, threads=1) -> BlockOperator:
    """Assemble sum_i c_i F^{i,lam} for every sector.

    Sectors are independent; with threads > 1 they are built in a thread
    pool (the compiled kernels release the GIL) and always reduced in
    ascending lambda1 order.
    """
    support = coeffs.support()
    irreps = enumerate_irreps(coeffs.n)

    def build(lam):
        out = np.zeros((lam.q_dim, lam.q_dim), dtype=np.complex128)
        for i in support:
            out += coeffs.terms[i] * f_block(i, lam)
        return out

    if threads > 1 and len(irreps) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            built = list(pool.map(build, irreps))
    else:
        built = [build(lam) for lam in irreps]
    return BlockOperator(coeffs.n, dict(zip(irreps, built)))


@dataclass
class GroundStateResult:
    """Minimum-energy sector, eigenvector over its q register, degeneracies."""

    energy: float
    lambda_min: IrrepLabel
    amplitudes: np.ndarray
    degenerate_irreps: List[IrrepLabel]

    def to_json(self):
        return json.dumps(
            {
                "energy": self.energy,
                "lambda1": self.lambda_min.lambda1,
                "amplitudes": [{"re": a.real, "im": a.imag} for a in self.amplitudes],
                "degenerate_lambda1": [lam.lambda1 for lam in self.degenerate_irreps],
            }
        )

    @classmethod
    def from_json(cls, text, n):
        try:
            doc = json.loads(text)
            lam = irrep_of_lambda1(n, int(doc["lambda1"]))
            amps = np.array(
                [complex(a["re"], a["im"]) for a in doc["amplitudes"]],
                dtype=np.complex128,
            )
            degenerate = [irrep_of_lambda1(n, int(l)) for l in doc["degenerate_lambda1"]]
            return cls(float(doc["energy"]), lam, amps, degenerate)
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ValidationError(f"malformed ground-state document: {exc}") from exc


def _fix_phase(vec):
    for a in vec:
        if abs(a) > 1e-12:
            vec = vec * (a.conjugate() / abs(a))
            break
    return vec


def ground_state(h: SymmetricOperator, threads=1) -> GroundStateResult:
    """Ground state of a Hermitian invariant operator, sector by sector.

    The energy is the minimum over sectors of each block's lowest
    eigenvalue. Ties within a relative gap of 1e-10 are reported in
    ``degenerate_irreps``; the winner is deterministically the smallest
    lambda1 among them. The eigenvector is normalized with its first
    nonzero amplitude made real positive.
    """
    h.require_real("Hamiltonian")
    blocks = block_operator(h, threads=threads)
    minima = []
    for lam, mat in blocks.items():
        w, v = np.linalg.eigh(0.5 * (mat + mat.conj().T))
        minima.append((lam, float(w[0]), v[:, 0]))
    energy = min(e for _, e, _ in minima)
    tol = DEGENERACY_RTOL * max(1.0, abs(energy))
    degenerate = [lam for lam, e, _ in minima if e - energy <= tol]
    lam_min, _, vec = next(t for t in minima if t[0] == degenerate[0])
    vec = _fix_phase(vec.astype(np.complex128))
    vec /= np.linalg.norm(vec)
    return GroundStateResult(energy, lam_min, vec, degenerate)


def gse_blocks(h: SymmetricOperator, threads=1) -> float:
    return ground_state(h, threads=threads).energy


# ---------------------------------------------------------------------------
# file formats

def f_blocks_to_json(n, monomials=None):
    """Dump of every (monomial, sector) block for a system size."""
    monomials = enumerate_monomials(n) if monomials is None else [
        as_monomial(i, n) for i in monomials
    ]
    records = []
    for i in sorted(monomials):
        for lam in enumerate_irreps(n):
            block = f_block(i, lam)
            records.append(
                {
                    "i": list(i),
                    "lambda1": lam.lambda1,
                    "matrix_re": block.real.tolist(),
                    "matrix_im": block.imag.tolist(),
                }
            )
    return json.dumps({"n": n, "blocks": records})


def blocks_map_to_json_obj(n, blocks):
    """Shared {"n", "blocks": [...]} encoding for per-sector matrices."""
    records = []
    for lam in sorted(blocks, key=lambda l: l[1]):
        mat = np.asarray(blocks[lam], dtype=np.complex128)
        records.append(
            {
                "lambda1": int(lam[1]),
                "matrix_re": mat.real.tolist(),
                "matrix_im": mat.imag.tolist(),
            }
        )
    return {"n": n, "blocks": records}


def blocks_map_from_json_obj(doc):
    try:
        n = int(doc["n"])
        blocks = {}
        for rec in doc["blocks"]:
            lam = irrep_of_lambda1(n, int(rec["lambda1"]))
            mat = np.array(rec["matrix_re"], dtype=np.float64) + 1j * np.array(
                rec["matrix_im"], dtype=np.float64
            )
            if mat.shape != (lam.q_dim, lam.q_dim):
                raise ValidationError(
                    f"sector {tuple(lam)} expects shape {(lam.q_dim, lam.q_dim)}, got {mat.shape}"
                )
            if lam in blocks:
                raise ValidationError(f"sector lambda1={lam.lambda1} appears twice")
            blocks[lam] = mat.astype(np.complex128)
        return n, blocks
    except ValidationError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed block file: {exc}") from exc
