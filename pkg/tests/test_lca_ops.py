import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lcasched import (
    BoxDomain,
    LcaParams,
    Team,
    change_count,
    play_week,
    select_change_mask,
    swot_formation,
    swot_update,
    truncated_geometric,
    win_probability,
)

# Gaps and shifts are kept well clear of the last few ulps so the 1e-12
# tolerances below are meaningful rather than vacuous.
gap = st.one_of(st.just(0.0), st.floats(0.5, 100.0))
base = st.floats(-100.0, 100.0)
shift = st.floats(-100.0, 100.0)


class TestWinProbability:
    def test_degenerate_denominator_is_even_money(self):
        assert win_probability(5.0, 5.0, 5.0) == 0.5

    def test_side_at_ideal_always_wins(self):
        assert win_probability(3.0, 7.0, 3.0) == 1.0
        assert win_probability(7.0, 3.0, 3.0) == 0.0

    def test_linear_odds_example(self):
        assert win_probability(2.0, 4.0, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-15)

    def test_ideal_above_fitness_rejected(self):
        with pytest.raises(ValueError):
            win_probability(2.0, 4.0, 3.0)

    @given(base, gap, gap)
    def test_normalization_and_bounds(self, ideal, gap_a, gap_b):
        p = win_probability(ideal + gap_a, ideal + gap_b, ideal)
        q = win_probability(ideal + gap_b, ideal + gap_a, ideal)
        assert 0.0 <= p <= 1.0
        assert abs(p + q - 1.0) < 1e-12

    @given(base, gap, gap)
    def test_better_side_is_favored(self, ideal, gap_a, gap_b):
        f_a, f_b = ideal + min(gap_a, gap_b), ideal + max(gap_a, gap_b)
        assert win_probability(f_a, f_b, ideal) >= 0.5

    @given(base, gap, gap, shift)
    def test_translation_invariance(self, ideal, gap_a, gap_b, c):
        p = win_probability(ideal + gap_a, ideal + gap_b, ideal)
        p_shifted = win_probability(ideal + gap_a + c, ideal + gap_b + c, ideal + c)
        assert abs(p - p_shifted) < 1e-12


class TestPlayWeek:
    def test_side_at_ideal_always_wins(self):
        rng = np.random.default_rng(0)
        for _ in range(1000):
            outcome = play_week([(0, 1)], np.array([1.0, 4.0]), 1.0, rng)
            assert outcome.won[0] and not outcome.won[1]

    def test_equal_fitnesses_are_even_money(self):
        rng = np.random.default_rng(7)
        wins = np.zeros(2)
        trials = 100_000
        for _ in range(trials):
            outcome = play_week([(0, 1), (2, 3)], np.ones(4), 1.0, rng)
            wins[0] += outcome.won[0]
            wins[1] += outcome.won[2]
        assert abs(wins[0] / trials - 0.5) < 0.02
        assert abs(wins[1] / trials - 0.5) < 0.02

    def test_two_thirds_odds(self):
        rng = np.random.default_rng(11)
        trials = 100_000
        wins = sum(
            play_week([(0, 1)], np.array([2.0, 4.0]), 0.0, rng).won[0] for _ in range(trials)
        )
        assert abs(wins / trials - 2.0 / 3.0) < 0.01

    def test_records_opponents_and_single_winner(self):
        rng = np.random.default_rng(3)
        outcome = play_week([(0, 2), (1, 3)], np.array([1.0, 2.0, 3.0, 4.0]), 0.5, rng, week_index=9)
        assert outcome.week_index == 9
        assert outcome.opponent[0] == 2 and outcome.opponent[2] == 0
        assert outcome.opponent[1] == 3 and outcome.opponent[3] == 1
        assert outcome.won[0] != outcome.won[2]
        assert outcome.won[1] != outcome.won[3]

    def test_team_in_two_matches_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            play_week([(0, 1), (1, 2)], np.ones(4), 1.0, rng)

    def test_missing_team_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            play_week([(0, 1)], np.ones(4), 1.0, rng)

    def test_self_match_rejected(self):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            play_week([(0, 0), (1, 2)], np.ones(4), 1.0, rng)


class TestChangeCount:
    def test_quantile_half(self):
        # ceil(ln(1 - 0.5 * 0.9375) / ln(0.5)) = ceil(0.9125...) = 1
        assert truncated_geometric(0.5, 4, 0.5) == 1

    def test_quantile_point_nine(self):
        # ceil(ln(1 - 0.9 * 0.9375) / ln(0.5)) = ceil(2.678...) = 3
        assert truncated_geometric(0.9, 4, 0.5) == 3

    def test_zero_quantile_floor(self):
        assert truncated_geometric(0.0, 10, 0.3) == 1

    def test_near_one_quantile_hits_dimension(self):
        assert truncated_geometric(np.nextafter(1.0, 0.0), 6, 0.3) == 6

    @pytest.mark.parametrize("dimension,change_prob", [(0, 0.5), (3, 0.0), (3, 1.0), (-1, 0.5)])
    def test_invalid_parameters(self, dimension, change_prob):
        with pytest.raises(ValueError):
            truncated_geometric(0.5, dimension, change_prob)

    def test_invalid_quantile(self):
        with pytest.raises(ValueError):
            truncated_geometric(1.0, 3, 0.5)
        with pytest.raises(ValueError):
            truncated_geometric(-0.1, 3, 0.5)

    def test_range_and_monotonicity_fuzz(self):
        rng = np.random.default_rng(123)
        for dimension, change_prob in [(1, 0.5), (3, 0.1), (10, 0.3), (500, 0.9)]:
            r = np.sort(rng.random(250_000))
            q = truncated_geometric(r, dimension, change_prob)
            assert q.min() >= 1 and q.max() <= dimension
            assert np.all(np.diff(q) >= 0)

    def test_drawn_counts_stay_in_range(self):
        rng = np.random.default_rng(5)
        counts = {change_count(rng, 4, 0.4) for _ in range(2000)}
        assert counts <= {1, 2, 3, 4}
        assert 1 in counts


class TestSelectChangeMask:
    def test_full_mask(self):
        rng = np.random.default_rng(0)
        assert select_change_mask(rng, 5, 5).all()

    def test_popcount(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            assert select_change_mask(rng, 10, 3).sum() == 3

    def test_uniform_selection(self):
        rng = np.random.default_rng(2)
        trials = 100_000
        hits = np.zeros(5)
        for _ in range(trials):
            hits += select_change_mask(rng, 5, 2)
        assert np.all(np.abs(hits / trials - 0.4) < 0.01)

    @pytest.mark.parametrize("count", [0, 6, -1])
    def test_invalid_count(self, count):
        rng = np.random.default_rng(0)
        with pytest.raises(ValueError):
            select_change_mask(rng, 5, count)


class TestSwotUpdate:
    def test_hand_case_won_against_loser_side(self):
        new = swot_formation(
            best=np.array([1.0, 1.0]),
            current=np.array([2.0, 2.0]),
            opponent_formation=np.array([0.0, 0.0]),
            rival_opponent_formation=np.array([4.0, 4.0]),
            won=True,
            rival_opponent_won=False,
            retreat_coeff=1.0,
            approach_coeff=1.0,
            mask=np.array([True, False]),
            gain_rival=np.array([1.0, 1.0]),
            gain_opponent=np.array([0.5, 0.5]),
        )
        assert new.tolist() == [0.0, 1.0]

    def test_hand_case_lost_against_winner_side(self):
        new = swot_formation(
            best=np.array([1.0, 1.0]),
            current=np.array([2.0, 2.0]),
            opponent_formation=np.array([0.0, 0.0]),
            rival_opponent_formation=np.array([4.0, 4.0]),
            won=False,
            rival_opponent_won=True,
            retreat_coeff=1.0,
            approach_coeff=1.0,
            mask=np.array([True, False]),
            gain_rival=np.array([0.5, 0.5]),
            gain_opponent=np.array([0.5, 0.5]),
        )
        assert new.tolist() == [1.0, 1.0]

    def test_zero_gains_collapse_to_best(self):
        best = np.array([0.25, -1.5, 3.0])
        new = swot_formation(
            best=best,
            current=np.array([1.0, 1.0, 1.0]),
            opponent_formation=np.array([2.0, 0.0, 5.0]),
            rival_opponent_formation=np.array([-1.0, 2.0, 0.5]),
            won=True,
            rival_opponent_won=True,
            retreat_coeff=1.0,
            approach_coeff=1.0,
            mask=np.array([True, False, True]),
            gain_rival=np.zeros(3),
            gain_opponent=np.zeros(3),
        )
        assert np.array_equal(new, best)

    def test_unmasked_slots_carry_best_exactly_and_masked_stay_in_domain(self):
        setup_rng = np.random.default_rng(99)
        domain = BoxDomain.cube(12, -2.0, 2.0)
        params = LcaParams(league_size=4, seasons=1, change_prob=0.4, retreat_coeff=2.0, approach_coeff=3.0, seed=0)
        for trial in range(500):
            vectors = setup_rng.uniform(-2.0, 2.0, size=(4, 12))
            team = Team(
                formation=vectors[0],
                fitness=1.0,
                best_formation=vectors[1],
                best_fitness=0.5,
            )
            # Mirror the documented draw order (count, mask, gains) to
            # recover the mask the update will use.
            rng = np.random.default_rng(1000 + trial)
            mirror = np.random.default_rng(1000 + trial)
            mask = select_change_mask(mirror, 12, change_count(mirror, 12, params.change_prob))
            new = swot_update(
                team,
                vectors[2],
                vectors[3],
                won=bool(trial % 2),
                rival_opponent_won=bool(trial % 3),
                params=params,
                domain=domain,
                rng=rng,
            )
            # bit-exact carryover outside the mask
            assert np.array_equal(new[~mask], team.best_formation[~mask])
            assert domain.contains(new)

    def test_dimension_mismatch_rejected(self):
        rng = np.random.default_rng(0)
        domain = BoxDomain.cube(3, 0.0, 1.0)
        params = LcaParams(league_size=4, seasons=1, change_prob=0.5, seed=0)
        team = Team(np.zeros(3), 0.0, np.zeros(3), 0.0)
        with pytest.raises(ValueError):
            swot_update(team, np.zeros(2), np.zeros(3), True, True, params, domain, rng)

    def test_update_agrees_with_full_vector_formula(self):
        # swot_update rebuilds only the changed slots; scattering the same
        # draws into full-length vectors and applying the formula everywhere
        # must give the identical result.
        setup_rng = np.random.default_rng(55)
        domain = BoxDomain.cube(9, -3.0, 3.0)
        params = LcaParams(league_size=4, seasons=1, change_prob=0.3, seed=0)
        for trial in range(200):
            vectors = setup_rng.uniform(-3.0, 3.0, size=(4, 9))
            team = Team(vectors[0], 1.0, vectors[1], 0.5)
            won, rival_won = bool(trial & 1), bool(trial & 2)
            rng = np.random.default_rng(5000 + trial)
            mirror = np.random.default_rng(5000 + trial)
            count = change_count(mirror, 9, params.change_prob)
            mask = select_change_mask(mirror, 9, count)
            gains = mirror.random((2, count))
            # scatter the block gains onto the drawn slots, in draw order
            mirror2 = np.random.default_rng(5000 + trial)
            change_count(mirror2, 9, params.change_prob)
            changed = mirror2.permutation(9)[:count]
            gain_rival = np.zeros(9)
            gain_opponent = np.zeros(9)
            gain_rival[changed] = gains[0]
            gain_opponent[changed] = gains[1]
            expected = np.where(
                mask,
                domain.clip(
                    swot_formation(
                        team.best_formation,
                        team.formation,
                        vectors[2],
                        vectors[3],
                        won,
                        rival_won,
                        params.retreat_coeff,
                        params.approach_coeff,
                        mask,
                        gain_rival,
                        gain_opponent,
                    )
                ),
                team.best_formation,
            )
            actual = swot_update(team, vectors[2], vectors[3], won, rival_won, params, domain, rng)
            assert np.array_equal(actual, expected)

    def test_draws_are_reproducible(self):
        domain = BoxDomain.cube(6, 0.0, 1.0)
        params = LcaParams(league_size=4, seasons=1, change_prob=0.3, seed=0)
        team = Team(np.full(6, 0.5), 1.0, np.full(6, 0.25), 0.5)
        out = []
        for _ in range(2):
            rng = np.random.default_rng(2024)
            out.append(
                swot_update(team, np.zeros(6), np.ones(6), True, False, params, domain, rng)
            )
        assert np.array_equal(out[0], out[1])


class TestLcaParams:
    @pytest.mark.parametrize(
        "kwargs",
        [
            dict(league_size=3),
            dict(league_size=2),
            dict(league_size=5),
            dict(seasons=0),
            dict(change_prob=0.0),
            dict(change_prob=1.0),
            dict(retreat_coeff=-1.0),
            dict(retreat_coeff=0.0, approach_coeff=0.0),
            dict(seed=-1),
            dict(max_evaluations=0),
        ],
    )
    def test_invalid(self, kwargs):
        with pytest.raises(ValueError):
            LcaParams(**kwargs)

    def test_defaults_are_valid(self):
        params = LcaParams()
        assert params.league_size == 20
        assert params.seasons == 50
        assert params.change_prob == 0.3


class TestBoxDomain:
    def test_cube(self):
        domain = BoxDomain.cube(3, -1.0, 2.0)
        assert domain.dimension == 3
        assert domain.contains(np.array([0.0, -1.0, 2.0]))
        assert not domain.contains(np.array([0.0, -1.1, 0.0]))

    def test_clip(self):
        domain = BoxDomain.cube(2, 0.0, 1.0)
        assert domain.clip(np.array([-5.0, 0.5])).tolist() == [0.0, 0.5]

    @pytest.mark.parametrize(
        "lower,upper",
        [([0.0, 0.0], [1.0, 0.0]), ([0.0], [0.0]), ([1.0], [0.0]), ([np.nan], [1.0])],
    )
    def test_invalid_bounds(self, lower, upper):
        with pytest.raises(ValueError):
            BoxDomain(np.array(lower), np.array(upper))
