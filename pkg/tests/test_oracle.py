import json
import random

import pytest

from conftest import brute_force_domination_number, small_cubic_corpus
from cubicdom.graph import Graph, complete_bipartite, complete_graph, petersen_graph
from cubicdom.labeling import verify_dominating
from cubicdom.oracle import (
    TrialConfig,
    TrialFailure,
    exact_domination_number,
    greedy_domination,
    run_trials,
)


def test_known_domination_numbers():
    assert exact_domination_number(complete_graph(4)).gamma == 1
    assert exact_domination_number(petersen_graph()).gamma == 3
    assert exact_domination_number(complete_bipartite(3, 3)).gamma == 2


def test_witness_dominates():
    for name, g in small_cubic_corpus().items():
        res = exact_domination_number(g)
        assert len(res.witness) == res.gamma
        assert verify_dominating(g, res.witness)[0], name


@pytest.mark.parametrize("seed", range(30))
def test_exact_against_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 14)
    g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.25])
    assert exact_domination_number(g).gamma == brute_force_domination_number(g)


def test_exact_cap():
    with pytest.raises(ValueError):
        exact_domination_number(Graph(33, []))


def test_greedy():
    assert len(greedy_domination(Graph(5, []))) == 5
    for g in small_cubic_corpus().values():
        d = greedy_domination(g)
        assert verify_dominating(g, d.members)[0]
        assert len(d) >= exact_domination_number(g).gamma


def test_run_trials_deterministic():
    cfg = TrialConfig("example10", 5, 200, 6, [1, 2, 3], path_girth=2000)
    a, b = run_trials(cfg), run_trials(cfg)
    assert a.ratios == b.ratios and len(a.trials) == 3
    d = json.loads(a.to_json())
    assert d["mean_ratio"] == pytest.approx(a.mean_ratio)
    assert a.table().splitlines()[0] == "seed,n,girth,K,size,ratio"


def test_run_trials_parallel_matches_serial():
    base = dict(rules="main79", K=10, n=200, g_target=6, seeds=[4, 5], path_girth=4000)
    assert run_trials(TrialConfig(**base)).ratios == run_trials(TrialConfig(**base, jobs=2)).ratios


def test_run_trials_reports_stalled_boost():
    with pytest.raises(TrialFailure):
        run_trials(TrialConfig("example10", 5, 10, 6, [0], max_iters=100))


def test_ratio_falls_with_path_length():
    """Longer paths mean fewer endpoints and a smaller dominating set."""
    means = []
    for gp in (40, 400, 4000):
        rep = run_trials(TrialConfig("example10", 5, 2000, 6, [1, 2], path_girth=gp, graph_seed=7))
        means.append(rep.mean_ratio)
    assert means[0] > means[1] > means[2]
