"""Profile algebra: tallies, welfare, validation and their invariants."""

import itertools

import pytest
from hypothesis import given, settings

from conftest import ALL_TO_P_21, BAIT_ATTACK_51, attacked_elections, small_elections
from recountgame import (
    District,
    Election,
    Manipulation,
    ValidationError,
    defender_prefers,
    social_welfare,
    social_welfare_vector,
    tally,
    validate_manipulation,
)


class TestTally:
    def test_example21_pv_true(self, example21_pv):
        result = tally(example21_pv)
        assert result.scores == (14, 9, 0)
        assert example21_pv.candidates[result.winner] == "a"

    def test_example21_pd_true(self, example21_pd):
        result = tally(example21_pd)
        assert result.scores == (98, 27, 0)
        assert example21_pd.candidates[result.winner] == "a"
        assert result.district_winners == (0, 0, 1, 1, 1)

    def test_example21_pv_distorted(self, example21_pv):
        result = tally(example21_pv, ALL_TO_P_21)
        assert result.scores == (0, 9, 14)
        assert example21_pv.candidates[result.winner] == "p"

    def test_full_recount_restores(self, example21_pv, example21_pd):
        for election in (example21_pv, example21_pd):
            full = tally(election, ALL_TO_P_21, ALL_TO_P_21.districts)
            assert full == tally(election)

    def test_recount_outside_attack_rejected(self, example21_pv):
        with pytest.raises(ValidationError):
            tally(example21_pv, ALL_TO_P_21, recount=(3,))

    def test_invalid_manipulation_rejected(self, example21_pv):
        with pytest.raises(ValidationError):
            tally(example21_pv, Manipulation({0: (0, 0, 6)}))  # size mismatch


class TestSocialWelfare:
    def test_example21_pv(self, example21_pv):
        assert social_welfare(example21_pv, example21_pv.candidate_index("b")) == 9

    def test_example51(self, example51):
        assert social_welfare(example51, example51.candidate_index("p")) == 6
        assert social_welfare(example51, example51.candidate_index("b")) == 4

    def test_single_district(self):
        election = Election(
            rule="PV",
            candidates=("a", "b"),
            districts=(District(votes=(5, 0)),),
            tiebreak=(0, 1),
            budget_attacker=1,
            budget_defender=0,
        )
        assert social_welfare_vector(election) == (5, 0)


class TestDefenderPrefers:
    def test_example21_welfare_gap(self, example21_pv):
        b, p = example21_pv.candidate_index("b"), example21_pv.candidate_index("p")
        assert defender_prefers(example21_pv, b, p) == 1
        assert defender_prefers(example21_pv, p, b) == -1

    def test_tie_falls_to_priority(self):
        election = Election(
            rule="PV",
            candidates=("a", "p"),
            districts=(District(votes=(2, 2)),),
            tiebreak=(1, 0),  # p > a
            budget_attacker=1,
            budget_defender=0,
            preferred=1,
        )
        assert defender_prefers(election, 1, 0) == 1

    def test_same_candidate(self, example21_pv):
        assert defender_prefers(example21_pv, 0, 0) == 0

    def test_unknown_candidate(self, example21_pv):
        with pytest.raises(ValidationError):
            defender_prefers(example21_pv, 0, 9)


class TestValidate:
    def test_regular_pd_attack_ok(self, example21_pd):
        assert validate_manipulation(example21_pd, ALL_TO_P_21, require_regular=True) == []

    def test_bait_attack_not_regular(self, example51):
        violations = validate_manipulation(example51, BAIT_ATTACK_51, require_regular=True)
        assert [(v.district, v.constraint) for v in violations] == [(0, "regular_pv")]

    def test_gamma_cap(self):
        election = Election(
            rule="PV",
            candidates=("a", "b"),
            districts=(District(votes=(2, 0), gamma=1),),
            tiebreak=(0, 1),
            budget_attacker=1,
            budget_defender=0,
        )
        violations = validate_manipulation(election, Manipulation({0: (0, 2)}))
        assert [v.constraint for v in violations] == ["gamma_exceeded"]

    def test_budget_and_size(self, example21_pv):
        over = Manipulation({0: (0, 0, 7), 1: (0, 0, 7), 2: (0, 0, 3)})
        constraints = {v.constraint for v in validate_manipulation(example21_pv, over)}
        assert "budget_attacker" in constraints
        bad_sum = Manipulation({0: (0, 0, 6)})
        constraints = {v.constraint for v in validate_manipulation(example21_pv, bad_sum)}
        assert "size_mismatch" in constraints

    def test_unchanged_attacked_district_allowed(self, example21_pv):
        assert validate_manipulation(example21_pv, Manipulation({0: (7, 0, 0)})) == []


class TestElectionInvariants:
    def test_rejects_bad_inputs(self):
        district = District(votes=(1, 1))
        ok = dict(
            rule="PV",
            candidates=("a", "b"),
            districts=(district,),
            tiebreak=(0, 1),
            budget_attacker=1,
            budget_defender=0,
        )
        for field, value in [
            ("tiebreak", (0, 0)),
            ("budget_attacker", 0),
            ("budget_attacker", 2),
            ("budget_defender", -1),
            ("rule", "IRV"),
            ("candidates", ("a", "a")),
            ("districts", (District(votes=(1,)),)),
            ("districts", (District(votes=(1, -1)),)),
            ("districts", (District(votes=(1, 1), weight=0),)),
            ("districts", (District(votes=(1, 1), gamma=3),)),
        ]:
            with pytest.raises(ValidationError):
                Election(**{**ok, field: value})

    def test_overflow_guard(self):
        with pytest.raises(ValidationError):
            Election(
                rule="PD",
                candidates=("a",),
                districts=(District(votes=(1,), weight=2**62 + 1),),
                tiebreak=(0,),
                budget_attacker=1,
                budget_defender=0,
            )


# -- property tests ----------------------------------------------------------


@settings(max_examples=120, deadline=None)
@given(attacked_elections())
def test_conservation(pair):
    election, manipulation = pair
    total = (
        sum(d.size for d in election.districts)
        if election.rule == "PV"
        else sum(d.weight for d in election.districts)
    )
    attacked = manipulation.districts
    for r in range(min(len(attacked), 2) + 1):
        for recount in itertools.islice(itertools.combinations(attacked, r), 8):
            assert sum(tally(election, manipulation, recount).scores) == total


@settings(max_examples=100, deadline=None)
@given(attacked_elections())
def test_recount_composition(pair):
    """Recounting R then R' is the same as recounting their union."""
    election, manipulation = pair
    attacked = manipulation.districts
    first = attacked[: len(attacked) // 2]
    second = attacked[len(attacked) // 3 :]
    after_first = Manipulation({i: v for i, v in manipulation.items() if i not in first})
    lhs = tally(election, manipulation, set(first) | set(second))
    rhs = tally(election, after_first, set(second) - set(first))
    assert lhs == rhs
    assert tally(election, manipulation, attacked) == tally(election)


@settings(max_examples=100, deadline=None)
@given(attacked_elections())
def test_welfare_is_manipulation_invariant(pair):
    election, manipulation = pair
    assert social_welfare_vector(election) == tally(election).scores
    assert tally(election, manipulation, manipulation.districts).scores == tally(election).scores


@settings(max_examples=120, deadline=None)
@given(attacked_elections(regular=True))
def test_regular_monotone_scores(pair):
    """Regular attacks never lower the preferred candidate, never raise others."""
    election, manipulation = pair
    p = election.preferred
    welfare = social_welfare_vector(election)
    attacked = manipulation.districts
    for r in range(min(len(attacked), 2) + 1):
        for recount in itertools.islice(itertools.combinations(attacked, r), 8):
            scores = tally(election, manipulation, recount).scores
            assert scores[p] >= welfare[p]
            assert all(scores[c] <= welfare[c] for c in range(len(scores)) if c != p)


@settings(max_examples=80, deadline=None)
@given(small_elections())
def test_winner_unique_and_beats_all(election):
    result = tally(election)
    pos = election.position
    w = result.winner
    for c in range(election.num_candidates):
        if c != w:
            assert (result.scores[w], -pos[w]) > (result.scores[c], -pos[c])
