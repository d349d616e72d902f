"""Every solver's witness must replay through the tally to its reported winner."""

from conftest import random_instance
from recountgame import (
    greedy_recount,
    man_decide_brute,
    man_pd_regular,
    rec_decide_brute,
    rec_decide_dp,
    rec_optimize,
    rec_pd_unweighted,
    tally,
)


def _check(election, report):
    if report.recount is None or report.winner is None:
        return
    replayed = tally(election, report.manipulation, report.recount.indices)
    assert replayed.winner == report.winner, report.algorithm
    assert len(report.recount) <= election.budget_defender, report.algorithm


def test_recount_reports_replay():
    for seed in range(60):
        election, manipulation = random_instance(seed + 80_000)
        reports = [rec_optimize(election, manipulation), greedy_recount(election, manipulation)]
        for target in range(election.num_candidates):
            reports.append(rec_decide_brute(election, manipulation, target))
            reports.append(rec_decide_dp(election, manipulation, target))
        for report in reports:
            _check(election, report)


def test_unweighted_pd_reports_replay():
    for seed in range(40):
        election, manipulation = random_instance(seed + 81_000, rule="PD", w_max=1)
        for target in range(election.num_candidates):
            _check(election, rec_pd_unweighted(election, manipulation, target))


def test_attacker_reports_replay():
    for seed in range(40):
        election, _ = random_instance(seed + 82_000, max_k=4, n_max=4)
        for report in (
            man_decide_brute(election),
            man_decide_brute(election, regular=True),
            man_pd_regular(election) if election.rule == "PD" else None,
        ):
            if report is None or not report.decision:
                continue
            _check(election, report)
            # a winning attack still wins after the true optimal response
            assert rec_optimize(election, report.manipulation).winner == election.preferred
