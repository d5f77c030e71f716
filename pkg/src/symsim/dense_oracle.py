"""Dense small-n ground truth for everything the fast path computes.

All functions here work with explicit 2^n x 2^n matrices (or 2^n vectors)
and scale exponentially; they exist to cross-validate the polynomial-time
algebra, not to be fast. Qubit p corresponds to bit n-1-p of the basis
index, i.e. qubit 0 is the leftmost tensor factor.
"""

import itertools
import math
from functools import lru_cache

import numpy as np

from .errors import ValidationError
from .monomial_algebra import (
    SymmetricOperator,
    as_monomial,
    class_size,
    enumerate_monomials,
)

DENSE_CAP = 12   # 2^n matrices
GROUP_CAP = 7    # explicit sums over n! permutations


def _check_cap(n, cap, default, what):
    cap = default if cap is None else cap
    if n > cap:
        raise ValidationError(f"{what} limited to n <= {cap}, got n = {n}")
    return n


@lru_cache(maxsize=16)
def _bit_table(n):
    # (2^n, n) matrix of bits; column p is the bit of qubit p
    states = np.arange(1 << n, dtype=np.int64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.int64)
    return (states[:, None] >> shifts[None, :]) & 1


def permutation_state_map(perm, n):
    """Index map of the qubit-permutation unitary: R|x> = |map[x]>.

    ``perm[p]`` is the new position of the qubit currently at position p.
    """
    weights = np.array([1 << (n - 1 - perm[p]) for p in range(n)], dtype=np.int64)
    return _bit_table(n) @ weights


def apply_permutation(matrix, perm):
    """Conjugate a dense operator by a qubit permutation: R M R^dagger."""
    n = int(np.log2(matrix.shape[0]))
    fwd = permutation_state_map(perm, n)
    inv = np.empty_like(fwd)
    inv[fwd] = np.arange(fwd.size)
    return matrix[np.ix_(inv, inv)]


def _distinct_words(counts):
    # all distinct arrangements of letters 0..3 with the given multiplicities
    n = sum(counts)
    word = [0] * n
    remaining = list(counts)

    def rec(pos):
        if pos == n:
            yield tuple(word)
            return
        for letter in range(4):
            if remaining[letter]:
                remaining[letter] -= 1
                word[pos] = letter
                yield from rec(pos + 1)
                remaining[letter] += 1

    yield from rec(0)


@lru_cache(maxsize=64)
def _dense_monomial_cached(i, n):
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=np.complex128)
    cols = np.arange(dim)
    iy = i.iy
    for word in _distinct_words(tuple(i)):
        xor_mask = 0
        sign_mask = 0
        for p, letter in enumerate(word):
            bit = 1 << (n - 1 - p)
            if letter in (1, 2):      # X or Y flips
                xor_mask |= bit
            if letter in (2, 3):      # Y or Z picks up a sign on |1>
                sign_mask |= bit
        phases = (1j) ** iy * np.where(np.bitwise_count(cols & sign_mask) & 1, -1.0, 1.0)
        out[cols ^ xor_mask, cols] += phases
    return out


def dense_monomial(i, cap=None):
    """Dense matrix of the symmetrized monomial A_i (sum of Pauli words)."""
    i = as_monomial(i)
    _check_cap(i.n, cap, DENSE_CAP, "dense monomials")
    return _dense_monomial_cached(i, i.n)


def dense_operator(op: SymmetricOperator, cap=None):
    """Assemble sum_i c_i A_i as a dense matrix."""
    _check_cap(op.n, cap, DENSE_CAP, "dense assembly")
    dim = 1 << op.n
    out = np.zeros((dim, dim), dtype=np.complex128)
    for i, coeff in sorted(op.terms.items()):
        out += coeff * dense_monomial(i, cap=cap)
    return out


def reynolds_twirl(matrix, cap=None):
    """Group-average a dense operator over all qubit permutations.

    The result is the orthogonal projection of the input onto the algebra
    of permutation-invariant operators; invariant inputs are fixed points.
    """
    dim = matrix.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim or matrix.shape != (dim, dim):
        raise ValidationError(f"operator shape {matrix.shape} is not a qubit register")
    _check_cap(n, cap, GROUP_CAP, "permutation group sums")
    acc = np.zeros_like(matrix, dtype=np.complex128)
    idx = np.arange(dim)
    for perm in itertools.permutations(range(n)):
        fwd = permutation_state_map(perm, n)
        inv = np.empty_like(fwd)
        inv[fwd] = idx
        acc += matrix[np.ix_(inv, inv)]
    return acc / math.factorial(n)


def decompose_invariant(matrix, cap=None):
    """Expand a dense operator in the monomial basis.

    Returns (coefficients, residual): coefficients c_i = tr(A_i^dag M)
    normalized by the squared monomial norm class_size * 2^n, and the
    Frobenius norm of M - sum_i c_i A_i. The residual vanishes exactly
    when M is permutation invariant.
    """
    dim = matrix.shape[0]
    n = dim.bit_length() - 1
    if 1 << n != dim:
        raise ValidationError(f"operator shape {matrix.shape} is not a qubit register")
    _check_cap(n, cap, DENSE_CAP, "dense decomposition")
    coeffs = {}
    recon = np.zeros_like(matrix, dtype=np.complex128)
    for i in enumerate_monomials(n):
        mono = dense_monomial(i, cap=cap)
        c = complex(np.vdot(mono, matrix)) / (class_size(i) * dim)
        coeffs[i] = c
        recon += c * mono
    residual = float(np.linalg.norm(matrix - recon))
    return coeffs, residual


# ---------------------------------------------------------------------------
# explicit Schur-basis states

def dicke_vector(m, q):
    """Normalized equal superposition of all m-bit states of weight q."""
    if not 0 <= q <= m:
        raise ValidationError(f"excitation count {q} outside 0..{m}")
    if m == 0:
        return np.ones(1, dtype=np.complex128)
    states = np.arange(1 << m)
    vec = (np.bitwise_count(states) == q).astype(np.complex128)
    return vec / math.sqrt(math.comb(m, q))


_SINGLET = np.array([0.0, 1.0, -1.0, 0.0], dtype=np.complex128) / math.sqrt(2.0)


def dense_schur_state(lam, q, cap=None):
    """The canonical-tableau Schur state: singlets then a Dicke register.

    Qubits (0,1), (2,3), ... up to 2*lambda1 form singlet pairs; the
    remaining n - 2*lambda1 qubits carry the weight-q Dicke state.
    """
    lam0, lam1 = int(lam[0]), int(lam[1])
    n = lam0 + lam1
    if not lam0 >= lam1 >= 0:
        raise ValidationError(f"invalid two-row partition {(lam0, lam1)}")
    _check_cap(n, cap, DENSE_CAP, "dense states")
    m = n - 2 * lam1
    if not 0 <= q <= m:
        raise ValidationError(f"q = {q} outside 0..{m} for partition {(lam0, lam1)}")
    state = np.ones(1, dtype=np.complex128)
    for _ in range(lam1):
        state = np.kron(state, _SINGLET)
    return np.kron(state, dicke_vector(m, q))


def embed_schur_vector(lam, amplitudes, cap=None):
    """Lift amplitudes over the q register to a dense n-qubit vector."""
    amplitudes = np.asarray(amplitudes, dtype=np.complex128)
    m = int(lam[0]) - int(lam[1])
    if amplitudes.shape != (m + 1,):
        raise ValidationError(
            f"expected {m + 1} amplitudes for partition {tuple(lam)}, got {amplitudes.shape}"
        )
    out = None
    for q, amp in enumerate(amplitudes):
        term = amp * dense_schur_state(lam, q, cap=cap)
        out = term if out is None else out + term
    return out


def embed_block_state(blocks, n, cap=None):
    """Dense density matrix of a block-diagonal state at the canonical slot.

    ``blocks`` maps two-row partitions to (m+1)x(m+1) matrices over the q
    register; the multiplicity register is pinned to the canonical tableau.
    """
    _check_cap(n, cap, DENSE_CAP, "dense embedding")
    dim = 1 << n
    out = np.zeros((dim, dim), dtype=np.complex128)
    for lam in sorted(blocks, key=lambda l: l[1]):
        block = np.asarray(blocks[lam], dtype=np.complex128)
        m = int(lam[0]) - int(lam[1])
        basis = np.column_stack(
            [dense_schur_state(lam, q, cap=cap) for q in range(m + 1)]
        )
        out += basis @ block @ basis.conj().T
    return out


# ---------------------------------------------------------------------------
# Young symmetrizer

def two_row_irrep_dim(n, lam1):
    """Number of standard two-row tableaux: C(n, lam1) - C(n, lam1 - 1)."""
    return math.comb(n, lam1) - (math.comb(n, lam1 - 1) if lam1 >= 1 else 0)


def young_symmetrizer(lam, cap=None):
    """Projector attached to the canonical column-then-row filled tableau.

    Row-symmetrizes, then column-antisymmetrizes, scaled by dim / n!. For
    the canonical filling the columns are the qubit pairs (0,1), (2,3), ...
    Applying the projector to |01>^lam1 (x) |0...01...1> reproduces the
    singlet (x) Dicke states up to normalization.
    """
    lam0, lam1 = int(lam[0]), int(lam[1])
    n = lam0 + lam1
    if not lam0 >= lam1 >= 0:
        raise ValidationError(f"invalid two-row partition {(lam0, lam1)}")
    _check_cap(n, cap, GROUP_CAP, "Young symmetrizer")
    dim = 1 << n
    idx = np.arange(dim)

    row1 = [2 * l for l in range(lam1)] + list(range(2 * lam1, n))
    row2 = [2 * l + 1 for l in range(lam1)]

    row_sum = np.zeros((dim, dim), dtype=np.complex128)
    base = list(range(n))
    for p1 in itertools.permutations(row1):
        for p2 in itertools.permutations(row2):
            perm = list(base)
            for src, dst in zip(row1, p1):
                perm[src] = dst
            for src, dst in zip(row2, p2):
                perm[src] = dst
            row_sum[permutation_state_map(perm, n), idx] += 1.0

    col_sum = np.zeros((dim, dim), dtype=np.complex128)
    for swaps in itertools.product((0, 1), repeat=lam1):
        perm = list(base)
        for l, s in enumerate(swaps):
            if s:
                perm[2 * l], perm[2 * l + 1] = perm[2 * l + 1], perm[2 * l]
        sign = (-1.0) ** sum(swaps)
        col_sum[permutation_state_map(perm, n), idx] += sign

    prefactor = two_row_irrep_dim(n, lam1) / math.factorial(n)
    return prefactor * (col_sum @ row_sum)


def schur_input_string(lam, q):
    """Computational basis state |01>^lam1 |0>^(m-q) |1>^q as a vector."""
    lam0, lam1 = int(lam[0]), int(lam[1])
    n = lam0 + lam1
    m = n - 2 * lam1
    bits = "01" * lam1 + "0" * (m - q) + "1" * q
    vec = np.zeros(1 << n, dtype=np.complex128)
    vec[int(bits, 2) if bits else 0] = 1.0
    return vec


# ---------------------------------------------------------------------------
# exact references

def exact_gse(h: SymmetricOperator, cap=None) -> float:
    """Minimum eigenvalue of the densely assembled operator."""
    h.require_real("Hamiltonian")
    dense = dense_operator(h, cap=cap)
    return float(np.linalg.eigvalsh(dense)[0])


def exact_expectation(o: SymmetricOperator, h: SymmetricOperator, t, rho_dense, cap=None) -> float:
    """Dense tr(O e^{-iHt} rho e^{iHt}) via Hermitian eigendecomposition."""
    if o.n != h.n:
        raise ValidationError(f"observable n={o.n} does not match Hamiltonian n={h.n}")
    h.require_real("Hamiltonian")
    o.require_real("observable")
    ham = dense_operator(h, cap=cap)
    w, v = np.linalg.eigh(0.5 * (ham + ham.conj().T))
    u = (v * np.exp(-1j * w * t)) @ v.conj().T
    evolved = u @ rho_dense @ u.conj().T
    val = complex(np.trace(dense_operator(o, cap=cap) @ evolved))
    if abs(val.imag) > 1e-9 * max(1.0, abs(val.real)):
        raise ValidationError(
            f"expectation has imaginary residue {val.imag:.3e}; state or observable invalid"
        )
    return val.real
