"""Symmetrized Pauli monomials and their multiplication algebra.

Operators on n qubits that are invariant under every qubit permutation are
spanned by symmetrized Pauli monomials: for counts (i1, ix, iy, iz) summing
to n, the basis element ``A_i`` is the sum of all distinct n-letter Pauli
words with that many identity, X, Y and Z factors. This module enumerates
the basis, multiplies basis elements (producing sparse expansion
coefficients), and computes ground-state energies through the faithful
left-multiplication representation of the invariant algebra, whose
dimension C(n+3,3) is polynomial in n.
"""

import json
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Mapping, NamedTuple, Tuple

import numpy as np

from ._backend import pair_product
from .errors import ToleranceError, ValidationError

HERMITICITY_TOL = 1e-8


class MonomialIndex(NamedTuple):
    """Letter counts (identity, X, Y, Z) of a symmetrized Pauli monomial."""

    i1: int
    ix: int
    iy: int
    iz: int

    @property
    def n(self):
        return self.i1 + self.ix + self.iy + self.iz


def as_monomial(value, n=None):
    """Coerce a 4-sequence to a MonomialIndex, validating counts."""
    try:
        mono = MonomialIndex(*(int(v) for v in value))
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"not a monomial index: {value!r}") from exc
    if any(v < 0 for v in mono):
        raise ValidationError(f"negative letter count in monomial {mono}")
    if n is not None and mono.n != n:
        raise ValidationError(
            f"monomial components {tuple(mono)} sum to {mono.n} != {n}"
        )
    return mono


def identity_monomial(n):
    return MonomialIndex(n, 0, 0, 0)


def enumerate_monomials(n) -> List[MonomialIndex]:
    """All monomial indices for n qubits in ascending lexicographic order.

    The list has C(n+3,3) entries; this ordering is the canonical row and
    column order used by every matrix and file dump in the package.
    """
    if n < 1:
        raise ValidationError(f"system size must be >= 1, got {n}")
    out = []
    for i1 in range(n + 1):
        for ix in range(n - i1 + 1):
            for iy in range(n - i1 - ix + 1):
                out.append(MonomialIndex(i1, ix, iy, n - i1 - ix - iy))
    return out


def monomial_count(n):
    """dim of the invariant algebra: C(n+3,3)."""
    return math.comb(n + 3, 3)


def class_size(i) -> int:
    """Number of distinct Pauli words in the symmetrization class of i."""
    i = as_monomial(i)
    return math.factorial(i.n) // (
        math.factorial(i.i1) * math.factorial(i.ix)
        * math.factorial(i.iy) * math.factorial(i.iz)
    )


@dataclass(frozen=True)
class SymmetricOperator:
    """A permutation-invariant operator as sparse monomial coefficients.

    ``terms`` maps MonomialIndex -> coefficient. Real coefficients give a
    Hermitian operator (each basis monomial is Hermitian); complex
    coefficients are allowed so the same container can hold the expansion
    of a unitary.
    """

    n: int
    terms: Mapping[MonomialIndex, complex] = field(default_factory=dict)

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"system size must be >= 1, got {self.n}")
        clean = {}
        for key, coeff in self.terms.items():
            mono = as_monomial(key, self.n)
            coeff = complex(coeff)
            if coeff != 0:
                clean[mono] = clean.get(mono, 0j) + coeff
        object.__setattr__(self, "terms", clean)

    @property
    def is_real(self):
        return all(c.imag == 0.0 for c in self.terms.values())

    def require_real(self, what="operator"):
        if not self.is_real:
            raise ValidationError(f"{what} must have real coefficients")
        return self

    def support(self):
        return sorted(self.terms)

    def real_terms(self):
        return {k: v.real for k, v in self.terms.items()}

    @classmethod
    def from_pairs(cls, n, pairs):
        return cls(n, {as_monomial(i, n): c for i, c in pairs})


def heisenberg_operator(n):
    """All-to-all Heisenberg coupling: sum over pairs of XX + YY + ZZ."""
    if n < 2:
        raise ValidationError("Heisenberg coupling needs n >= 2")
    return SymmetricOperator.from_pairs(
        n,
        [((n - 2, 2, 0, 0), 1.0), ((n - 2, 0, 2, 0), 1.0), ((n - 2, 0, 0, 2), 1.0)],
    )


# ---------------------------------------------------------------------------
# products and structure constants

def multiply_monomials(i, j) -> Dict[MonomialIndex, complex]:
    """Expansion of A_i · A_j in the monomial basis (nonzero entries only)."""
    i = as_monomial(i)
    j = as_monomial(j, i.n)
    return {
        MonomialIndex(*k): v for k, v in pair_product(tuple(i), tuple(j)).items()
    }


@lru_cache(maxsize=4096)
def _multiply_cached(i, j):
    return multiply_monomials(i, j)


def structure_constant(i, j, k) -> complex:
    """Coefficient of A_k in the product A_i · A_j.

    The value is a constrained sum over pairing counts between the letters
    of i and j; an empty feasible set gives 0.
    """
    i = as_monomial(i)
    j = as_monomial(j, i.n)
    k = as_monomial(k, i.n)
    return _multiply_cached(i, j).get(k, 0j)


@dataclass
class StructureTensor:
    """Sparse product coefficients X^{i,j}_k for a set of (i, j) pairs."""

    n: int
    entries: Dict[Tuple[MonomialIndex, MonomialIndex], List[Tuple[MonomialIndex, complex]]]

    @classmethod
    def build(cls, n, left=None, right=None):
        """Compute coefficients for left x right (defaults: full basis).

        Only the requested pairs are evaluated; a ground-state-energy run
        needs just the support of the Hamiltonian on the left.
        """
        mons = enumerate_monomials(n)
        left = mons if left is None else [as_monomial(i, n) for i in left]
        right = mons if right is None else [as_monomial(j, n) for j in right]
        entries = {}
        for i in left:
            for j in right:
                prod = multiply_monomials(i, j)
                entries[(i, j)] = sorted(prod.items())
        return cls(n, entries)

    def pair(self, i, j):
        key = (as_monomial(i, self.n), as_monomial(j, self.n))
        try:
            return self.entries[key]
        except KeyError:
            raise ValidationError(
                f"structure tensor has no entries for pair {key}"
            ) from None

    def covers(self, left, right):
        return all((i, j) in self.entries for i in left for j in right)

    def to_json(self):
        records = []
        for (i, j) in sorted(self.entries):
            for k, val in self.entries[(i, j)]:
                records.append(
                    {"i": list(i), "j": list(j), "k": list(k),
                     "re": val.real, "im": val.imag}
                )
        return json.dumps({"n": self.n, "entries": records})

    @classmethod
    def from_json(cls, text):
        try:
            doc = json.loads(text)
            n = int(doc["n"])
            entries = {}
            for rec in doc["entries"]:
                i = as_monomial(rec["i"], n)
                j = as_monomial(rec["j"], n)
                k = as_monomial(rec["k"], n)
                val = complex(float(rec["re"]), float(rec["im"]))
                entries.setdefault((i, j), []).append((k, val))
        except (KeyError, TypeError, ValueError, json.JSONDecodeError) as exc:
            raise ValidationError(f"malformed structure tensor dump: {exc}") from exc
        return cls(n, {key: sorted(v) for key, v in entries.items()})


# ---------------------------------------------------------------------------
# regular representation

def regular_rep(h: SymmetricOperator, tensor: StructureTensor) -> np.ndarray:
    """Matrix of left-multiplication by h on the invariant algebra.

    Row index k and column index j follow the canonical monomial order;
    entry (k, j) is sum_i h_i X^{i,j}_k. The matrix is similar to a
    Hermitian one via the class-size diagonal scaling (see
    :func:`hermitized_regular_rep`).
    """
    if tensor.n != h.n:
        raise ValidationError(f"tensor is for n={tensor.n}, operator has n={h.n}")
    mons = enumerate_monomials(h.n)
    index = {m: a for a, m in enumerate(mons)}
    mat = np.zeros((len(mons), len(mons)), dtype=np.complex128)
    for i, coeff in sorted(h.terms.items()):
        for j in mons:
            for k, val in tensor.pair(i, j):
                mat[index[k], index[j]] += coeff * val
    return mat


def hermitized_regular_rep(mat, n):
    """Apply the sqrt(class-size) similarity and report the Hermiticity gap.

    The monomials are orthogonal but not normalized (norm^2 = class size
    times 2^n), so conjugating by D^{1/2} with D_kk = class_size(k) turns
    the regular representation of a Hermitian element into an explicitly
    Hermitian matrix without changing its spectrum.
    """
    weights = np.sqrt([float(class_size(m)) for m in enumerate_monomials(n)])
    sym = mat * weights[:, None] / weights[None, :]
    deviation = float(np.max(np.abs(sym - sym.conj().T)))
    return sym, deviation


def gse_regular(h: SymmetricOperator) -> float:
    """Ground-state energy of h via the regular representation.

    Exact-diagonalization-free: the minimum eigenvalue of the C(n+3,3)
    dimensional left-multiplication matrix equals the ground-state energy
    of the 2^n-dimensional operator because the representation is faithful.
    """
    h.require_real("Hamiltonian")
    tensor = StructureTensor.build(h.n, left=h.support())
    mat = regular_rep(h, tensor)
    sym, deviation = hermitized_regular_rep(mat, h.n)
    if deviation > HERMITICITY_TOL:
        raise ToleranceError(
            f"regular representation failed Hermitization ({deviation:.3e} > "
            f"{HERMITICITY_TOL:.0e}); structure constants are inconsistent"
        )
    sym = 0.5 * (sym + sym.conj().T)
    return float(np.linalg.eigvalsh(sym)[0])
