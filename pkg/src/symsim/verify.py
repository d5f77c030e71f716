"""Cross-validation ladder: every fast-path formula against the dense oracle.

Each check returns a CheckResult with the worst deviation it saw; the CLI
``verify`` command prints one line per check and the acceptance tests run
the same functions at the full sizes. All randomness is seeded.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import monomial_algebra
from .dense_oracle import (
    decompose_invariant,
    dense_monomial,
    dense_operator,
    dense_schur_state,
    embed_block_state,
    embed_schur_vector,
    exact_expectation,
    exact_gse,
    reynolds_twirl,
    schur_input_string,
    young_symmetrizer,
)
from .equivariant_dynamics import BlockState, evolution_from_hamiltonian, expectation
from .monomial_algebra import (
    SymmetricOperator,
    class_size,
    enumerate_monomials,
    gse_regular,
    monomial_count,
    multiply_monomials,
)
from .schur_blocks import enumerate_irreps, f_block, ground_state, sector_dimension_check


@dataclass
class CheckResult:
    name: str
    passed: bool
    worst: float
    detail: str

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: worst deviation {self.worst:.3e} ({self.detail})"


def random_operator(n, rng, max_terms=5, complex_coeffs=False):
    """Random invariant operator with up to max_terms monomials."""
    mons = enumerate_monomials(n)
    count = int(rng.integers(1, max_terms + 1))
    picks = rng.choice(len(mons), size=min(count, len(mons)), replace=False)
    terms = {}
    for p in picks:
        c = rng.uniform(-1.0, 1.0)
        if complex_coeffs:
            c = c + 1j * rng.uniform(-1.0, 1.0)
        terms[mons[int(p)]] = c
    return SymmetricOperator(n, terms)


def random_block_state(n, rng):
    """Random full-rank block-diagonal density operator."""
    blocks = {}
    total = 0.0
    for lam in enumerate_irreps(n):
        d = lam.q_dim
        g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
        b = g @ g.conj().T
        blocks[lam] = b
        total += float(np.trace(b).real)
    return BlockState(n, {lam: b / total for lam, b in blocks.items()})


def _dict_gap(a, b, n):
    keys = set(a) | set(b)
    if not keys:
        return 0.0
    return max(abs(a.get(k, 0j) - b.get(k, 0j)) for k in keys)


# ---------------------------------------------------------------------------
# individual checks

def check_dimension_law(max_n=30):
    worst = 0
    for n in range(1, max_n + 1):
        expected = math.comb(n + 3, 3)
        worst = max(
            worst,
            abs(len(enumerate_monomials(n)) - expected),
            abs(monomial_count(n) - expected),
            abs(sector_dimension_check(n) - expected),
        )
    return CheckResult(
        "dimension-law", worst == 0, float(worst),
        f"monomial count and sum of squared sector sizes vs C(n+3,3), n <= {max_n}",
    )


def check_structure_constants(full_max_n=4, random_ns=(5, 6), samples=200,
                              tol=1e-10, seed=7):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(1, full_max_n + 1):
        mons = enumerate_monomials(n)
        dim = 1 << n
        for i in mons:
            a_i = dense_monomial(i)
            for j in mons:
                product = a_i @ dense_monomial(j)
                coeffs, residual = decompose_invariant(product)
                worst = max(worst, residual)
                fast = multiply_monomials(i, j)
                dense = {k: v for k, v in coeffs.items() if abs(v) > 0}
                worst = max(worst, _dict_gap(fast, dense, n))
                # conjugation symmetry of the pair coefficients
                swapped = multiply_monomials(j, i)
                worst = max(
                    worst,
                    _dict_gap({k: v.conjugate() for k, v in fast.items()}, swapped, n),
                )
    for n in random_ns:
        mons = enumerate_monomials(n)
        dim = 1 << n
        for _ in range(samples):
            i, j, k = (mons[int(p)] for p in rng.integers(0, len(mons), size=3))
            product = dense_monomial(i) @ dense_monomial(j)
            reference = complex(np.vdot(dense_monomial(k), product)) / (class_size(k) * dim)
            worst = max(worst, abs(monomial_algebra.structure_constant(i, j, k) - reference))
    return CheckResult(
        "structure-constants", worst <= tol, worst,
        f"all pairs n <= {full_max_n}, {samples} random triples at n in {tuple(random_ns)}",
    )


def check_f_elements(max_n=6, tol=1e-10):
    worst = 0.0
    for n in range(1, max_n + 1):
        state_stacks = {
            lam: np.column_stack(
                [dense_schur_state(lam, q) for q in range(lam.q_dim)]
            )
            for lam in enumerate_irreps(n)
        }
        for i in enumerate_monomials(n):
            a_i = dense_monomial(i)
            for lam, stack in state_stacks.items():
                reference = stack.conj().T @ a_i @ stack
                fast = f_block(i, lam)
                worst = max(worst, float(np.max(np.abs(fast - reference))))
                worst = max(worst, float(np.max(np.abs(fast - fast.conj().T))))
    return CheckResult(
        "f-elements", worst <= tol, worst,
        f"every (monomial, sector, q, q') vs dense singlet/Dicke overlaps, n <= {max_n}",
    )


def check_gse_agreement(max_n=8, per_n=10, max_terms=5, tol=1e-8, seed=11):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(2, max_n + 1):
        for _ in range(per_n):
            h = random_operator(n, rng, max_terms=max_terms)
            e_regular = gse_regular(h)
            e_blocks = ground_state(h).energy
            e_dense = exact_gse(h)
            worst = max(
                worst,
                abs(e_regular - e_blocks),
                abs(e_regular - e_dense),
                abs(e_blocks - e_dense),
            )
    return CheckResult(
        "gse-agreement", worst <= tol, worst,
        f"{per_n} random Hamiltonians per n in 2..{max_n}, three methods pairwise",
    )


def check_ground_state_residual(max_n=8, per_n=5, max_terms=5, tol=1e-8, seed=13):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for n in range(2, max_n + 1):
        for _ in range(per_n):
            h = random_operator(n, rng, max_terms=max_terms)
            result = ground_state(h)
            psi = embed_schur_vector(result.lambda_min, result.amplitudes)
            ham = dense_operator(h)
            worst = max(worst, float(np.linalg.norm(ham @ psi - result.energy * psi)))
    return CheckResult(
        "ground-state-residual", worst <= tol, worst,
        f"|H psi - E psi| after dense embedding, {per_n} systems per n in 2..{max_n}",
    )


def check_twirl_membership(max_n=6, ops_per_n=20, membership_tol=1e-9,
                           idempotence_tol=1e-10, seed=17):
    rng = np.random.default_rng(seed)
    worst_membership = 0.0
    worst_idem = 0.0
    for n in range(2, max_n + 1):
        dim = 1 << n
        for _ in range(ops_per_n):
            m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
            twirled = reynolds_twirl(m)
            _, residual = decompose_invariant(twirled)
            worst_membership = max(worst_membership, residual)
            again = reynolds_twirl(twirled)
            worst_idem = max(worst_idem, float(np.max(np.abs(again - twirled))))
    passed = worst_membership <= membership_tol and worst_idem <= idempotence_tol
    return CheckResult(
        "twirl-membership", passed, max(worst_membership, worst_idem),
        f"{ops_per_n} random operators per n in 2..{max_n}: basis membership "
        f"{worst_membership:.2e}, idempotence {worst_idem:.2e}",
    )


def check_dynamics(max_n=8, points=10, tol=1e-8, drift_tol=1e-9, seed=19):
    rng = np.random.default_rng(seed)
    worst = 0.0
    worst_drift = 0.0
    grid = np.linspace(0.0, 2.0, points)
    for n in range(2, max_n + 1):
        h = random_operator(n, rng)
        o = random_operator(n, rng)
        state = random_block_state(n, rng)
        rho_dense = embed_block_state(state.blocks, n)
        energies = []
        for t in grid:
            u = evolution_from_hamiltonian(h, t)
            fast = expectation(o, u, state)
            reference = exact_expectation(o, h, t, rho_dense)
            worst = max(worst, abs(fast - reference))
            energies.append(expectation(h, u, state))
        worst_drift = max(worst_drift, max(energies) - min(energies))
    passed = worst <= tol and worst_drift <= drift_tol
    return CheckResult(
        "dynamics-agreement", passed, max(worst, worst_drift),
        f"{points}-point time grid per n in 2..{max_n}: vs dense {worst:.2e}, "
        f"energy drift {worst_drift:.2e}",
    )


def check_young_symmetrizer(max_n=6, tol=1e-10, projector_tol=1e-9):
    worst_dir = 0.0
    worst_proj = 0.0
    for n in range(1, max_n + 1):
        for lam in enumerate_irreps(n):
            projector = young_symmetrizer(lam)
            worst_proj = max(
                worst_proj,
                float(np.max(np.abs(projector @ projector - projector))),
            )
            for q in range(lam.q_dim):
                image = projector @ schur_input_string(lam, q)
                target = dense_schur_state(lam, q)
                cosine = abs(np.vdot(target, image)) / np.linalg.norm(image)
                worst_dir = max(worst_dir, 1.0 - float(cosine))
    passed = worst_dir <= tol and worst_proj <= projector_tol
    return CheckResult(
        "young-symmetrizer", passed, max(worst_dir, worst_proj),
        f"direction vs singlet/Dicke states and idempotence, n <= {max_n}",
    )


# ---------------------------------------------------------------------------
# ladder driver

def run_checks(max_n=6, per_n=10, samples=200, tolerance=None, seed=7):
    """Run the whole ladder with caps derived from max_n.

    ``tolerance`` overrides every check's comparison tolerance when given.
    """
    def tol(default):
        return default if tolerance is None else tolerance

    results = [
        check_dimension_law(max_n=max(max_n, 30)),
        check_structure_constants(
            full_max_n=min(max_n, 4),
            random_ns=tuple(n for n in (5, 6) if n <= max_n),
            samples=samples, tol=tol(1e-10), seed=seed,
        ),
        check_f_elements(max_n=min(max_n, 6), tol=tol(1e-10)),
        check_gse_agreement(max_n=min(max_n, 8), per_n=per_n, tol=tol(1e-8), seed=seed + 1),
        check_ground_state_residual(max_n=min(max_n, 8), per_n=max(2, per_n // 2),
                                    tol=tol(1e-8), seed=seed + 2),
        check_twirl_membership(max_n=min(max_n, 6), ops_per_n=min(20, 5 * max_n),
                               membership_tol=tol(1e-9), idempotence_tol=tol(1e-10),
                               seed=seed + 3),
        check_dynamics(max_n=min(max_n, 8), tol=tol(1e-8),
                       drift_tol=tol(1e-9), seed=seed + 4),
        check_young_symmetrizer(max_n=min(max_n, 6), tol=tol(1e-10)),
    ]
    return results
