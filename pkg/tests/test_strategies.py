import numpy as np
import pytest

from syncgames import classical as C
from syncgames import games as G
from syncgames import strategies as S
from syncgames import xor as X

P0 = np.array([[1.0, 0.0], [0.0, 0.0]])
PLUS = np.full((2, 2), 0.5)


def _coloring_instance(graph, c=2):
    return G.GameInstance(G.coloring_game(graph, c), G.uniform_edge_prior(graph))


def test_pvm_invariants_rejected():
    with pytest.raises(S.InvariantError):
        S.PvmFamily(np.array([[[[0.5]], [[0.5]]]]))  # PSD and resolves I but not projective
    with pytest.raises(S.InvariantError):
        S.PvmFamily(np.array([[[[1.0]], [[1.0]]]]))  # sums to 2I
    with pytest.raises(S.InvariantError):
        S.PovmFamily(np.array([[[[2.0]], [[-1.0]]]]))  # not PSD
    S.PovmFamily(np.array([[[[0.5]], [[0.5]]]]))


def test_density_invariants_rejected():
    with pytest.raises(S.InvariantError):
        S.Density(np.full((1, 1, 2, 2), 0.3))
    p = np.zeros((2, 2, 2, 2))
    p[0, 0, 0, 0] = p[0, 1, 1, 1] = p[1, 0, 0, 0] = p[1, 1, 0, 0] = 1.0  # Alice's marginal depends on y
    with pytest.raises(S.InvariantError):
        S.Density(p)


def test_constant_strategy_density():
    fam = S.PvmFamily(np.array([[np.eye(3), np.zeros((3, 3))]] * 2))
    p = S.density_from_pvm(fam).p
    assert np.allclose(p[:, :, 0, 0], 1.0)


def test_maximally_mixed_povm_is_not_synchronous():
    fam = S.PovmFamily(np.array([[np.eye(2) / 2, np.eye(2) / 2]] * 2))
    d = S.density_from_pvm(fam)
    assert np.allclose(d.p, 0.25)
    assert not d.is_synchronous()


def test_uniform_sync_density_entries():
    p = S.uniform_sync_density(2, 2).p
    assert p[0, 0, 0, 1] == 0.0
    assert p[0, 0, 0, 0] == 0.5
    assert p[0, 1, 0, 1] == 0.25
    assert S.uniform_sync_density(3, 3).is_synchronous()


@pytest.mark.parametrize("n,c", [(2, 2), (3, 2), (3, 3), (4, 2)])
def test_uniform_sync_density_realisations(n, c):
    target = S.uniform_sync_density(n, c).p
    assert np.allclose(S.shared_randomness_mixture(n, c).p, target)
    assert np.allclose(S.density_from_pvm(S.abelian_uniform_family(n, c)).p, target)


def test_chsh_value_of_uniform_sync_density():
    # direct sum: (x,y)=(0,0): 1, (1,1): 0, off-diagonal: 1/2 each -> 1/2 overall
    inst = G.chsh_game().to_instance()
    assert S.game_value(inst, S.uniform_sync_density(2, 2)) == pytest.approx(0.5)


@pytest.mark.parametrize("c", [2, 3, 4])
def test_coloring_value_of_uniform_sync_density(c):
    inst = _coloring_instance(G.cycle_graph(5), c)
    assert S.game_value(inst, S.uniform_sync_density(5, c)) == pytest.approx(1 - 1 / c)


def test_game_value_shape_mismatch():
    with pytest.raises(ValueError):
        S.game_value(G.chsh_game().to_instance(), S.uniform_sync_density(3, 2))


def test_deterministic_density_reproduces_local_value():
    inst = _coloring_instance(G.cycle_graph(5))
    v, strat = C.local_value(inst)
    d = S.deterministic_density(strat.f_a, strat.f_b, 2, 2)
    assert S.game_value(inst, d) == pytest.approx(v)


def test_q_operators_chsh():
    inst = G.chsh_game().to_instance()
    fam = S.family_from_projections(P0, PLUS)
    q = S.q_operators(inst, fam)
    assert np.allclose(q[0, 0], 0.5 * fam.e[1, 1])


def test_q_operators_coloring_prior_scaling():
    g = G.cycle_graph(5)
    inst = _coloring_instance(g)
    fam = S.random_pvm(np.random.default_rng(0), 5, 2, 3)
    q = S.q_operators(inst, fam)
    for x in range(5):
        expected = sum(fam.e[y, 1] for y in g.neighbours(x)) / g.edge_count
        assert np.allclose(q[x, 1], expected)


def test_q_vanishes_on_all_win_game():
    inst = G.GameInstance(G.Game(np.ones((3, 3, 2, 2), dtype=np.uint8)), G.PriorDistribution.uniform(3, 3))
    fam = S.random_pvm(np.random.default_rng(1), 3, 2, 2)
    assert not np.any(S.q_operators(inst, fam))
    assert S.check_exchange_inequality(inst, fam).passed


def test_first_order_checks_on_chsh():
    inst = G.chsh_game().to_instance()
    const = S.PvmFamily.from_assignment([0, 0], 2)
    assert S.check_first_order(inst, const) == S.CheckResult(True, 0.0)
    tilted = S.family_from_projections(P0, PLUS)
    res = S.check_first_order(inst, tilted)
    assert not res.passed and res.value > 0.1
    assert S.chsh_commutation_audit(tilted) == pytest.approx(0.5)


def test_single_question_game_passes_first_order():
    inst = G.GameInstance(G.Game(np.eye(2, dtype=np.uint8)[None, None]), G.PriorDistribution(np.ones((1, 1))))
    fam = S.random_pvm(np.random.default_rng(2), 1, 2, 3)
    assert S.check_first_order(inst, fam).passed


def test_exchange_inequality_detects_swapped_answer():
    inst = G.chsh_game().to_instance()
    assert S.check_exchange_inequality(inst, S.PvmFamily.from_assignment([0, 0], 2)).passed
    res = S.check_exchange_inequality(inst, S.PvmFamily.from_assignment([0, 1], 2))
    assert not res.passed and res.value == pytest.approx(-0.5)


def test_perfect_coloring_passes_all_conditions():
    g = G.cycle_graph(6)
    inst = _coloring_instance(g)
    fam = S.PvmFamily.from_assignment([0, 1, 0, 1, 0, 1], 2)
    assert S.check_first_order(inst, fam).passed
    assert S.check_exchange_inequality(inst, fam).passed
    rep = S.check_povm_conditions(inst, fam)
    assert rep.passed and rep.worst_annihilation == 0.0


def test_coloring_exchange_summed_form():
    # k E_a (sum_{y~x} E_{y,a}) E_a <= d_x E_a for a perfect colouring (both sides 0 / d_x E_a)
    g = G.path_graph(4)
    fam = S.PvmFamily.from_assignment([0, 1, 0, 1], 2)
    for x in range(4):
        for a in range(2):
            ea = fam.e[x, a]
            lhs = 2 * ea @ sum(fam.e[y, a] for y in g.neighbours(x)) @ ea
            assert np.linalg.eigvalsh(g.degree(x) * ea - lhs)[0] >= -1e-12


@pytest.mark.parametrize("seed", range(10))
def test_random_pvm_on_c5_fails_some_condition(seed):
    inst = _coloring_instance(G.cycle_graph(5))
    fam = S.random_pvm(np.random.default_rng(seed), 5, 2, 3)
    rep = S.check_povm_conditions(inst, fam)
    fo = S.check_first_order(inst, fam)
    assert not (rep.passed and fo.passed)


def test_povm_conditions_need_diagonal_wins():
    inst = G.chsh_game().to_instance()
    with pytest.raises(ValueError):
        S.check_povm_conditions(inst, S.PvmFamily.from_assignment([0, 0], 2))


def test_commutation_audit_shape():
    with pytest.raises(ValueError):
        S.chsh_commutation_audit(S.PvmFamily.from_assignment([0, 0, 0], 2))


@pytest.mark.parametrize("seed", range(20))
def test_random_pvm_densities(seed):
    rng = np.random.default_rng(seed)
    n, k, m = 2 + seed % 3, 2 + seed % 2, 1 + seed % 8
    d = S.density_from_pvm(S.random_pvm(rng, n, k, m))
    assert d.is_synchronous() and d.is_symmetric()


@pytest.mark.parametrize("seed", range(10))
def test_random_povm_densities_are_not_synchronous(seed):
    rng = np.random.default_rng(seed)
    fam = S.random_povm(rng, 3, 2, 3)
    assert not fam.is_projective()
    assert not S.density_from_pvm(fam).is_synchronous()


@pytest.mark.parametrize("seed", range(6))
def test_pvm_value_below_sync_sdp(seed):
    rng = np.random.default_rng(seed)
    g = G.cycle_xor_game(5, 0.7)
    inst = g.to_instance()
    bound = X.xor_sync_value(g)
    fam = S.random_pvm(rng, 5, 2, 4)
    assert S.game_value(inst, S.density_from_pvm(fam)) <= bound + 1e-6


@pytest.mark.parametrize("seed", range(8))
def test_finite_difference_derivative(seed):
    rng = np.random.default_rng(seed)
    inst = _coloring_instance(G.cycle_graph(5))
    fam = S.random_pvm(rng, 5, 2, 3)
    h = S.random_hermitian(rng, 3)
    x = seed % 5
    assert S.loss_derivative_fd(inst, fam, x, h) == pytest.approx(S.loss_derivative(inst, fam, x, h), abs=1e-5)


def test_losing_probability_complements_value():
    rng = np.random.default_rng(5)
    inst = G.chsh_game().to_instance()
    fam = S.random_pvm(rng, 2, 2, 4)
    total = S.losing_probability(inst, fam) + S.game_value(inst, S.density_from_pvm(fam))
    assert total == pytest.approx(1.0)
