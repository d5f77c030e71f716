"""Checks for the dense small-n reference implementations."""

import itertools
import math

import numpy as np
import pytest

from symsim import SymmetricOperator, ValidationError, class_size, enumerate_monomials
from symsim.dense_oracle import (
    apply_permutation,
    decompose_invariant,
    dense_monomial,
    dense_schur_state,
    dicke_vector,
    embed_block_state,
    exact_expectation,
    exact_gse,
    reynolds_twirl,
    schur_input_string,
    two_row_irrep_dim,
    young_symmetrizer,
)

PAULI = {
    "1": np.eye(2, dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def kron_word(letters):
    out = np.ones((1, 1), dtype=complex)
    for a in letters:
        out = np.kron(out, PAULI[a])
    return out


def test_identity_monomial_is_identity():
    for n in (1, 2, 4):
        assert np.array_equal(dense_monomial((n, 0, 0, 0)), np.eye(1 << n))


def test_symmetrized_x_n2():
    expected = kron_word("x1") + kron_word("1x")
    assert np.allclose(dense_monomial((1, 1, 0, 0)), expected)


def test_two_x_words_n3():
    expected = kron_word("xx1") + kron_word("x1x") + kron_word("1xx")
    assert np.allclose(dense_monomial((1, 2, 0, 0)), expected)


def test_single_y_and_z_words():
    assert np.allclose(dense_monomial((0, 0, 1, 0)), PAULI["y"])
    assert np.allclose(dense_monomial((1, 0, 0, 1)), kron_word("z1") + kron_word("1z"))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6])
def test_monomial_norms_and_orthogonality(n):
    # every quantity is an exact integer in float64, so equality is exact
    mons = enumerate_monomials(n)
    dim = 1 << n
    mats = [dense_monomial(i) for i in mons]
    for a, i in enumerate(mons):
        assert np.array_equal(mats[a], mats[a].conj().T)
        for b, j in enumerate(mons):
            inner = complex(np.vdot(mats[a], mats[b]))
            expected = class_size(i) * dim if a == b else 0.0
            assert inner == expected


def test_dense_cap_enforced():
    with pytest.raises(ValidationError):
        dense_monomial((13, 0, 0, 0))
    with pytest.raises(ValidationError):
        dense_monomial((4, 0, 0, 0), cap=3)


def test_twirl_fixes_invariant_operators():
    mono = dense_monomial((1, 2, 0, 1))
    assert np.allclose(reynolds_twirl(mono), mono, atol=1e-12)


def test_twirl_of_single_site_x():
    m = kron_word("x1")
    expected = 0.5 * dense_monomial((1, 1, 0, 0))
    assert np.allclose(reynolds_twirl(m), expected)


def test_twirl_idempotent_and_invariant():
    rng = np.random.default_rng(1)
    n = 4
    m = rng.normal(size=(16, 16)) + 1j * rng.normal(size=(16, 16))
    t = reynolds_twirl(m)
    assert np.max(np.abs(reynolds_twirl(t) - t)) < 1e-10
    for perm in itertools.permutations(range(n)):
        assert np.linalg.norm(apply_permutation(t, perm) - t) < 1e-9


def test_twirl_cap():
    with pytest.raises(ValidationError):
        reynolds_twirl(np.eye(1 << 8))


def test_decompose_monomial_indicator():
    coeffs, residual = decompose_invariant(dense_monomial((1, 1, 1, 0)))
    assert residual < 1e-12
    for i, c in coeffs.items():
        assert c == pytest.approx(1.0 if i == (1, 1, 1, 0) else 0.0, abs=1e-12)


def test_decompose_detects_non_invariant():
    m = kron_word("x1")
    _, residual = decompose_invariant(m)
    assert residual == pytest.approx(math.sqrt(2.0), abs=1e-12)
    _, residual = decompose_invariant(reynolds_twirl(m))
    assert residual < 1e-12


def test_dicke_vector_weights():
    v = dicke_vector(3, 1)
    expected = np.zeros(8)
    expected[[1, 2, 4]] = 1 / math.sqrt(3)
    assert np.allclose(v, expected)
    with pytest.raises(ValidationError):
        dicke_vector(3, 4)


def test_schur_state_examples():
    assert np.allclose(dense_schur_state((4, 0), 0), np.eye(16)[0])
    singlet = dense_schur_state((1, 1), 0)
    assert np.allclose(singlet, np.array([0, 1, -1, 0]) / math.sqrt(2))
    with pytest.raises(ValidationError):
        dense_schur_state((2, 1), 2)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_schur_states_orthonormal(n):
    from symsim import enumerate_irreps

    vectors = []
    for lam in enumerate_irreps(n):
        for q in range(lam.q_dim):
            vectors.append(dense_schur_state(lam, q))
    gram = np.array([[np.vdot(a, b) for b in vectors] for a in vectors])
    assert np.max(np.abs(gram - np.eye(len(vectors)))) < 1e-12


def test_two_row_irrep_dim():
    # n=4: standard tableaux counts 1, 3, 2
    assert [two_row_irrep_dim(4, l) for l in (0, 1, 2)] == [1, 3, 2]


def test_young_symmetrizer_row_only():
    p = young_symmetrizer((3, 0))
    e0 = np.zeros(8)
    e0[0] = 1.0
    assert np.allclose(p @ e0, e0)


def test_young_symmetrizer_singlet():
    p = young_symmetrizer((1, 1))
    image = p @ schur_input_string((1, 1), 0)
    target = dense_schur_state((1, 1), 0)
    cosine = abs(np.vdot(target, image)) / np.linalg.norm(image)
    assert cosine == pytest.approx(1.0, abs=1e-12)


def test_young_symmetrizer_two_singlets():
    p = young_symmetrizer((2, 2))
    image = p @ schur_input_string((2, 2), 0)
    target = dense_schur_state((2, 2), 0)
    cosine = abs(np.vdot(target, image)) / np.linalg.norm(image)
    assert cosine == pytest.approx(1.0, abs=1e-10)


def test_young_symmetrizer_is_projector():
    from symsim import enumerate_irreps

    for n in (2, 3, 4):
        for lam in enumerate_irreps(n):
            p = young_symmetrizer(lam)
            assert np.max(np.abs(p @ p - p)) < 1e-9


def test_young_cap():
    with pytest.raises(ValidationError):
        young_symmetrizer((8, 0))


def test_exact_gse_examples():
    c = -0.7
    ident = SymmetricOperator.from_pairs(3, [((3, 0, 0, 0), c)])
    assert exact_gse(ident) == pytest.approx(c, abs=1e-12)
    h2 = SymmetricOperator.from_pairs(
        2, [((0, 2, 0, 0), 1.0), ((0, 0, 2, 0), 1.0), ((0, 0, 0, 2), 1.0)]
    )
    assert exact_gse(h2) == pytest.approx(-3.0, abs=1e-10)
    h4 = SymmetricOperator.from_pairs(
        4, [((2, 2, 0, 0), 1.0), ((2, 0, 2, 0), 1.0), ((2, 0, 0, 2), 1.0)]
    )
    assert exact_gse(h4) == pytest.approx(-6.0, abs=1e-10)


def test_exact_expectation_matches_static_trace():
    h2 = SymmetricOperator.from_pairs(
        2, [((0, 2, 0, 0), 1.0), ((0, 0, 2, 0), 1.0), ((0, 0, 0, 2), 1.0)]
    )
    singlet = dense_schur_state((1, 1), 0)
    rho = np.outer(singlet, singlet.conj())
    xx = SymmetricOperator.from_pairs(2, [((0, 2, 0, 0), 1.0)])
    # [H, XX] != 0 in general but the singlet is an H eigenstate
    for t in (0.0, 0.3, 1.7):
        assert exact_expectation(xx, h2, t, rho) == pytest.approx(-1.0, abs=1e-10)


def test_embed_block_state_density_matrix():
    from symsim.verify import random_block_state

    rng = np.random.default_rng(2)
    state = random_block_state(3, rng)
    rho = embed_block_state(state.blocks, 3)
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-10)
    assert np.min(np.linalg.eigvalsh(rho)) > -1e-10
