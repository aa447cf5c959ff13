import math

import numpy as np
import pytest

from edgeldpc import (
    CodeTables,
    ParityCheckMatrix,
    decode_awgn,
    estimate,
    initialize,
    syndrome,
    values_to_check,
    values_to_variable,
)

from conftest import dense_syndrome, random_parity_matrix


@pytest.fixture(scope="module")
def chain3():
    # three variables, two degree-2 checks: 1 1 0 / 0 1 1
    H = ParityCheckMatrix(3, 2, ((0, 0), (0, 1), (1, 1), (1, 2)))
    return H, CodeTables.from_matrix(H)


class TestInitialize:
    def test_zero_observation_is_agnostic(self, tables14):
        state = initialize(np.zeros(14), 2.7, tables14)
        assert (state.p == 0.5).all()
        assert (state.q == 0.5).all()
        assert (state.r == 0.5).all()

    def test_unit_observation(self, tables14):
        state = initialize(np.ones(14), 1.0, tables14)
        expected = 1.0 / (1.0 + math.exp(-2.0))
        assert state.p == pytest.approx(0.8807970779778823, abs=1e-15)
        assert (state.p == expected).all()

    def test_antisymmetry(self, tables14):
        plus = initialize(np.ones(14), 1.0, tables14).p
        minus = initialize(-np.ones(14), 1.0, tables14).p
        assert minus == pytest.approx(1.0 - plus, abs=1e-15)
        assert minus[0] == pytest.approx(0.11920292202211755, abs=1e-15)

    def test_q_copies_variable_prior(self, tables14):
        y = np.linspace(-1.5, 1.5, 14)
        state = initialize(y, 0.7, tables14)
        assert np.array_equal(state.q, state.p[tables14.variable.v])

    def test_extreme_observations_saturate(self, tables14):
        state = initialize(np.full(14, -1e6), 0.5, tables14)
        assert (state.p == 0.0).all()

    def test_sigma2_must_be_positive(self, tables14):
        with pytest.raises(ValueError):
            initialize(np.zeros(14), 0.0, tables14)
        with pytest.raises(ValueError):
            initialize(np.zeros(14), -1.0, tables14)

    def test_length_mismatch(self, tables14):
        with pytest.raises(ValueError):
            initialize(np.zeros(13), 1.0, tables14)


class TestValuesToCheck:
    def test_degree_one_variable_passes_prior(self, chain3):
        _, tables = chain3
        p = np.array([0.3, 0.6, 0.9])
        r = np.array([0.1, 0.2, 0.3, 0.4])
        q = values_to_check(p, r, tables)
        # variables 0 and 2 have a single edge: empty product, q = prior
        e_v0 = int(np.flatnonzero(tables.variable.v == 0)[0])
        e_v2 = int(np.flatnonzero(tables.variable.v == 2)[0])
        assert q[e_v0] == 0.3
        assert q[e_v2] == 0.9

    def test_uniform_messages_return_prior(self, tables14):
        p = np.linspace(0.05, 0.95, 14)
        r = np.full(31, 0.5)
        q = values_to_check(p, r, tables14)
        assert q == pytest.approx(p[tables14.variable.v], abs=1e-15)

    def test_two_term_product(self, chain3):
        _, tables = chain3
        # variable 1 has edges to both checks; give the incoming r = 0.8
        p = np.array([0.5, 0.5, 0.5])
        r = np.full(4, 0.8)
        q = values_to_check(p, r, tables)
        # q0 = 0.5*0.2 = 0.1, q1 = 0.5*0.8 = 0.4 -> 0.8
        for k in np.flatnonzero(tables.variable.v == 1):
            assert q[k] == pytest.approx(0.8, abs=1e-15)

    def test_double_underflow_saturates(self, chain3):
        _, tables = chain3
        p = np.array([0.5, 1.0, 0.5])  # prior certain of 1
        r = np.array([0.0, 0.0, 0.0, 0.0])  # messages certain of 0
        q = values_to_check(p, r, tables)
        k = int(np.flatnonzero(tables.variable.v == 1)[0])
        # q0 = 0*1 = 0 and q1 = 1*0 = 0: contradiction maps to 1/2
        assert q[k] == 0.5

    def test_messages_stay_in_unit_interval(self, tables14):
        rng = np.random.default_rng(3)
        for _ in range(50):
            p = rng.uniform(size=14)
            r = rng.uniform(size=31)
            q = values_to_check(p, r, tables14)
            assert ((0.0 <= q) & (q <= 1.0)).all()


class TestValuesToVariable:
    def test_degree_two_check_copies_other_message(self, chain3):
        _, tables = chain3
        q = np.array([0.2, 0.7, 0.6, 0.9])
        r = values_to_variable(q, tables)
        # both checks have degree 2: outgoing message equals the other q, exactly
        chk = tables.check
        for pos in range(4):
            target = int(chk.e[pos])
            group = [int(chk.e[i]) for i in range(int(chk.s[pos]), int(chk.s[pos]) + 2)]
            other = next(g for g in group if g != target)
            assert r[target] == q[other]

    def test_erasure_annihilates(self, tables14):
        q = np.full(31, 0.5)
        r = values_to_variable(q, tables14)
        assert (r == 0.5).all()

    def test_certain_zero_neighbors(self, tables14):
        q = np.zeros(31)
        r = values_to_variable(q, tables14)
        assert (r == 0.0).all()

    def test_range_property(self, tables14):
        rng = np.random.default_rng(4)
        for _ in range(50):
            q = rng.uniform(size=31)
            r = values_to_variable(q, tables14)
            assert ((0.0 <= r) & (r <= 1.0)).all()


class TestEstimate:
    def test_single_edge_decision(self, chain3):
        _, tables = chain3
        p = np.array([0.5, 0.5, 0.5])
        r = np.zeros(4)
        e_v0 = int(np.flatnonzero(tables.variable.v == 0)[0])
        r[:] = 0.5
        r[e_v0] = 0.8
        c_hat = estimate(p, r, tables)
        # Q0 = 0.5*0.2 = 0.1 < Q1 = 0.5*0.8 = 0.4
        assert c_hat[0] == 1

    def test_uniform_messages_decide_by_prior(self, tables14):
        p = np.full(14, 0.3)
        r = np.full(31, 0.5)
        assert (estimate(p, r, tables14) == 0).all()

    def test_exact_tie_decides_one(self, tables14):
        p = np.full(14, 0.5)
        r = np.full(31, 0.5)
        assert (estimate(p, r, tables14) == 1).all()


class TestSyndrome:
    def test_all_zero(self, h14):
        assert not syndrome(np.zeros(14, dtype=np.uint8), h14).any()

    def test_unit_vector_lights_adjacent_checks(self, h14):
        c_hat = np.zeros(14, dtype=np.uint8)
        c_hat[0] = 1
        z = syndrome(c_hat, h14)
        assert sorted(np.flatnonzero(z).tolist()) == [0, 2, 3, 5]

    def test_against_dense_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(50):
            H = random_parity_matrix(rng)
            c_hat = rng.integers(0, 2, size=H.n).astype(np.uint8)
            assert np.array_equal(syndrome(c_hat, H), dense_syndrome(H, c_hat))

    def test_length_mismatch(self, h14):
        with pytest.raises(ValueError):
            syndrome(np.zeros(13, dtype=np.uint8), h14)


class TestDecode:
    def test_clean_codeword_zero_iterations(self, h14, tables14):
        for gain in (1.0, 0.25, 3.7):
            y = np.full(14, -gain)  # all-zero codeword, noiseless
            res = decode_awgn(y, 0.4, 50, tables14, h14)
            assert res.success
            assert res.iterations_used == 0
            assert not res.estimate.any()
            assert not res.syndrome.any()

    def test_single_flip_positions(self, h14, tables14):
        # frozen from a reference run: flipping v0 takes one round, the rest none
        expected_iterations = [1, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0]
        for flip in range(14):
            y = np.full(14, -1.0)
            y[flip] = 1.0
            res = decode_awgn(y, 0.5, 10, tables14, h14)
            assert res.success, f"flip at {flip} failed"
            assert not res.estimate.any()
            assert res.iterations_used == expected_iterations[flip]

    def test_zero_iteration_budget(self, h14, tables14):
        y = np.full(14, -1.0)
        y[0] = 1.0  # needs one round, budget gives none
        res = decode_awgn(y, 0.5, 0, tables14, h14)
        assert not res.success
        assert res.iterations_used == 0
        assert res.syndrome.any()

    def test_negative_budget_rejected(self, h14, tables14):
        with pytest.raises(ValueError):
            decode_awgn(np.zeros(14), 1.0, -1, tables14, h14)

    def test_deterministic(self, h14, tables14):
        rng = np.random.default_rng(8)
        y = -1.0 + 0.9 * rng.standard_normal(14)
        a = decode_awgn(y, 0.8, 20, tables14, h14)
        b = decode_awgn(y.copy(), 0.8, 20, tables14, h14)
        assert np.array_equal(a.estimate, b.estimate)
        assert a.success == b.success
        assert a.iterations_used == b.iterations_used
        assert np.array_equal(a.syndrome, b.syndrome)

    def test_success_iff_syndrome_clear(self, h14, tables14):
        rng = np.random.default_rng(9)
        for _ in range(25):
            y = -1.0 + 1.1 * rng.standard_normal(14)
            res = decode_awgn(y, 1.0, 5, tables14, h14)
            assert res.success == (not res.syndrome.any())
            assert np.array_equal(res.syndrome, syndrome(res.estimate, h14))
