import math

import numpy as np
import pytest
import scipy.linalg

from conftest import W01, W03, W12
from starsim.coloring import log_star, rounds
from starsim.core_model import random_state
from starsim.galaxy import (
    DIAGONAL,
    GalaxyDecomposition,
    GalaxyIndex,
    StarInfo,
    cost_u,
    exponential_charge,
    galaxy_terms,
    star_expm_apply,
    star_info,
)
from starsim.instances import random_sparse_hermitian, star_hamiltonian
from starsim.oracle import BlackBox
from starsim.verification import check_galaxies, check_partition, check_star_info


def test_star_info_cycle4(cycle4_oracle):
    g = GalaxyIndex(1, 1)
    s0 = star_info(cycle4_oracle, 0, g)
    assert s0 == StarInfo.build(0, [(1, W01.conjugate()), (3, W03.conjugate())])
    assert star_info(cycle4_oracle, 1, g) == s0
    assert star_info(cycle4_oracle, 3, g) == s0
    s2 = star_info(cycle4_oracle, 2, GalaxyIndex(1, 0))
    assert (s2.center, s2.leaves) == (1, (2,))
    assert s2.weights == (W12.conjugate(),)
    assert s2.s == pytest.approx(abs(W12))


def test_star_info_weight_convention(cycle4):
    st = star_info(BlackBox(cycle4), 0, GalaxyIndex(1, 1))
    for leaf, w in zip(st.leaves, st.weights):
        assert w == cycle4.entry(leaf, st.center)


def test_star_info_rejects_diagonal(cycle4_oracle):
    with pytest.raises(ValueError):
        star_info(cycle4_oracle, 0, DIAGONAL)


def test_galaxy_terms_layout():
    terms = galaxy_terms(3)
    assert len(terms) == 19 and terms[-1] == DIAGONAL
    assert terms[:6] == [GalaxyIndex(1, t) for t in range(6)]


def test_cost_u_formula():
    assert rounds(4) == 2
    assert cost_u(4, 2) == 7
    assert exponential_charge(GalaxyIndex(1, 0), 4, 2) == 14
    assert exponential_charge(DIAGONAL, 4, 2) == 2


@pytest.mark.parametrize("n", [4, 16, 64, 256, 512, 4096, 2**20])
@pytest.mark.parametrize("d", [1, 2, 4, 16])
def test_charge_within_query_budget(n, d):
    assert exponential_charge(GalaxyIndex(1, 0), n, d) <= 2 * (2 * d + log_star(n) + 3)


@pytest.mark.parametrize("seed", range(3))
def test_star_info_query_budget(seed):
    h = random_sparse_hermitian(100, 5, seed=seed)
    oracle = BlackBox(h)
    budget = cost_u(h.n, h.d)
    for g in galaxy_terms(h.d)[:-1]:
        for x in range(0, h.n, 7):
            before = oracle.counter.classical_calls
            star_info(oracle, x, g)
            assert oracle.counter.classical_calls - before <= budget


def test_star_expm_rabi_flop():
    st = StarInfo.build(0, [(1, 1.0)])
    out = star_expm_apply(st, math.pi / 2, np.array([1, 0], dtype=complex))
    assert np.allclose(out, [0, -1j], atol=1e-15)


def test_star_expm_kernel_untouched():
    st = StarInfo.build(0, [(1, 1.0), (2, 1.0)])
    psi = np.array([0, 1, -1], dtype=complex) / math.sqrt(2)
    assert np.allclose(star_expm_apply(st, 0.7, psi), psi, atol=1e-15)


def test_star_expm_matches_expm_122():
    st = StarInfo.build(0, [(1, 1), (2, 2), (3, 2)])
    a = st.matrix(4)
    psi = random_state(4, np.random.default_rng(0))
    want = scipy.linalg.expm(-1j * 0.3 * a) @ psi
    assert np.linalg.norm(star_expm_apply(st, 0.3, psi) - want) <= 1e-10


def test_star_expm_empty_is_identity_and_untouched_elsewhere():
    psi = random_state(6, np.random.default_rng(1))
    assert np.array_equal(star_expm_apply(StarInfo(2), 1.3, psi), psi)
    st = StarInfo.build(4, [(1, 0.5j), (5, -0.2)])
    out = star_expm_apply(st, -0.8, psi)
    assert np.array_equal(out[[0, 2, 3]], psi[[0, 2, 3]])
    assert abs(np.linalg.norm(out) - 1) < 1e-12


def test_cycle4_decomposition(cycle4):
    dec = GalaxyDecomposition(BlackBox(cycle4))
    assert dec.parents[1] == [None, 0, 1, 0]
    assert dec.parents[2] == [None, None, None, 2]
    assert dec.colors[1] == [0, 1, 0, 1]
    assert [(s.center, s.leaves) for s in dec.stars(GalaxyIndex(1, 1))] == [(0, (1, 3))]
    assert [(s.center, s.leaves) for s in dec.stars(GalaxyIndex(1, 0))] == [(1, (2,))]
    assert check_partition(cycle4, dec) == []
    assert check_star_info(dec) == []


@pytest.mark.parametrize("n, d, seed", [(30, 3, 0), (90, 6, 1), (64, 4, 2), (128, 9, 3)])
def test_decomposition_invariants(n, d, seed):
    h = random_sparse_hermitian(n, d, seed=seed, diagonal=seed % 2 == 1).permuted(np.random.default_rng(seed))
    dec = GalaxyDecomposition(BlackBox(h))
    assert check_partition(h, dec) == []
    assert check_galaxies(dec) == []
    assert check_star_info(dec, range(0, n, 3)) == []


@pytest.mark.parametrize("seed", range(3))
def test_galaxy_exponential_matches_dense(seed):
    h = random_sparse_hermitian(48, 5, seed=seed, diagonal=True)
    dec = GalaxyDecomposition(BlackBox(h))
    rng = np.random.default_rng(seed)
    psi = random_state(48, rng)
    for g in dec.terms:
        tau = rng.uniform(-1.5, 1.5)
        want = scipy.linalg.expm(-1j * tau * dec.galaxy_matrix(g)) @ psi
        got = dec.apply_galaxy_exponential(g, tau, psi)
        assert np.linalg.norm(got - want) <= 1e-10
        assert abs(np.linalg.norm(got) - 1) <= 1e-12


def test_galaxy_exponential_on_batches_matches_columns():
    h = random_sparse_hermitian(20, 3, seed=7)
    dec = GalaxyDecomposition(BlackBox(h))
    g = max(dec.terms[:-1], key=lambda t: len(dec.stars(t)))
    batch = np.eye(20, dtype=complex)
    u = dec.apply_uncharged(g, 0.4, batch)
    for j in range(20):
        assert np.allclose(u[:, j], dec.apply_uncharged(g, 0.4, batch[:, j]), atol=1e-15)
    assert np.allclose(u, scipy.linalg.expm(-0.4j * dec.galaxy_matrix(g)), atol=1e-12)


def test_cycle4_galaxy_exponential(cycle4):
    dec = GalaxyDecomposition(BlackBox(cycle4))
    g = GalaxyIndex(1, 1)
    u = dec.apply_uncharged(g, 0.1, np.eye(4, dtype=complex))
    assert np.linalg.norm(u - scipy.linalg.expm(-0.1j * dec.galaxy_matrix(g)), 2) <= 1e-10


def test_empty_galaxy_is_identity_but_charged(cycle4):
    oracle = BlackBox(cycle4)
    dec = GalaxyDecomposition(oracle)
    g = GalaxyIndex(2, 5)
    assert dec.stars(g) == []
    psi = random_state(4, np.random.default_rng(3))
    before = oracle.counter.circuit_cost
    assert np.array_equal(dec.apply_galaxy_exponential(g, 2.0, psi), psi)
    assert oracle.counter.circuit_cost - before == 2 * cost_u(4, 2)
    before = oracle.counter.circuit_cost
    dec.apply_galaxy_exponential(DIAGONAL, 2.0, psi)
    assert oracle.counter.circuit_cost - before == 2


def test_star_center_zero_is_one_galaxy():
    h = star_hamiltonian(8, 0, [1, 2, 3, 5, 7], [0.3, -1j, 0.5 + 0.5j, 2, 0.1])
    dec = GalaxyDecomposition(BlackBox(h))
    nonempty = [g for g in dec.terms[:-1] if dec.stars(g)]
    assert len(nonempty) == 1
    (st,) = dec.stars(nonempty[0])
    assert st.center == 0 and st.leaves == (1, 2, 3, 5, 7)
