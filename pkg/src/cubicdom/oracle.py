"""Exact and greedy domination baselines, and the seeded Monte Carlo harness."""
from __future__ import annotations

import json
import math
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Optional

from .graph import Graph, boost_girth, decompose_paths, generate_random_cubic, maximum_matching
from .labeling import DominatingSet, RunStats, run, verify_dominating
from .rules import RuleSet, bundled, load_rule_set

MAX_EXACT_N = 32


@dataclass(frozen=True)
class OracleResult:
    gamma: int
    witness: frozenset
    nodes_explored: int


def exact_domination_number(g: Graph) -> OracleResult:
    """Branch and bound over closed neighbourhoods of the first undominated vertex.

    Some vertex of ``N[v]`` must be chosen for every undominated ``v``; we
    branch on the undominated vertex with fewest candidates. The lower bound
    is ``ceil(undominated / (Delta + 1))``.
    """
    n = g.n
    if n > MAX_EXACT_N:
        raise ValueError(f"exact search is capped at n <= {MAX_EXACT_N}, got {n}")
    if n == 0:
        return OracleResult(0, frozenset(), 1)
    closed = [(1 << v) | sum(1 << w for w in g.adj[v]) for v in range(n)]
    full = (1 << n) - 1
    cover_size = max(bin(c).count("1") for c in closed)
    best = [n, full]
    nodes = 0

    def search(chosen: int, dominated: int, size: int):
        nonlocal nodes
        nodes += 1
        if dominated == full:
            if size < best[0]:
                best[0], best[1] = size, chosen
            return
        rest = full & ~dominated
        if size + -(-bin(rest).count("1") // cover_size) >= best[0]:
            return
        pick, pick_cands = -1, None
        r = rest
        while r:
            low = r & -r
            v = low.bit_length() - 1
            r ^= low
            k = bin(closed[v]).count("1")
            if pick_cands is None or k < pick_cands:
                pick, pick_cands = v, k
        cands = [u for u in range(n) if closed[pick] >> u & 1]
        # most new coverage first finds good incumbents early
        cands.sort(key=lambda u: -bin(closed[u] & rest).count("1"))
        for u in cands:
            search(chosen | (1 << u), dominated | closed[u], size + 1)

    search(0, 0, 0)
    witness = frozenset(v for v in range(n) if best[1] >> v & 1)
    return OracleResult(best[0], witness, nodes)


def greedy_domination(g: Graph) -> DominatingSet:
    """Repeatedly add the vertex dominating most new vertices (lowest id on ties)."""
    undominated = set(range(g.n))
    chosen = []
    while undominated:
        best_v, best_gain = -1, -1
        for v in range(g.n):
            gain = (v in undominated) + sum(1 for w in g.adj[v] if w in undominated)
            if gain > best_gain:
                best_v, best_gain = v, gain
        chosen.append(best_v)
        undominated.discard(best_v)
        undominated.difference_update(g.adj[best_v])
    members = frozenset(chosen)
    ok, _ = verify_dominating(g, members)
    assert ok
    return DominatingSet(members, {v: frozenset({"greedy"}) for v in members})


@dataclass
class TrialConfig:
    rules: str  # bundled name or path to a rule file
    K: int
    n: int
    g_target: int
    seeds: list
    path_girth: Optional[int] = None  # girth parameter for path lengths; None = measured
    graph_seed: Optional[int] = None  # None: a fresh graph per trial seed
    max_iters: int = 200_000
    jobs: int = 1

    def rule_set(self) -> RuleSet:
        if self.rules in ("example10", "main79"):
            return bundled(self.rules)
        return load_rule_set(self.rules)


@dataclass
class TrialReport:
    config: TrialConfig
    trials: list = field(default_factory=list)

    @property
    def ratios(self):
        return [t.ratio for t in self.trials]

    @property
    def mean_ratio(self) -> float:
        return statistics.fmean(self.ratios)

    @property
    def stderr(self) -> float:
        if len(self.trials) < 2:
            return math.nan
        return statistics.stdev(self.ratios) / math.sqrt(len(self.trials))

    def to_dict(self) -> dict:
        return {
            "config": asdict(self.config),
            "mean_ratio": self.mean_ratio,
            "stderr": None if math.isnan(self.stderr) else self.stderr,
            "trials": [t.to_dict() for t in self.trials],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def table(self) -> str:
        lines = [RunStats.CSV_HEADER]
        lines += [t.csv_row() for t in self.trials]
        lines.append(f"# mean ratio {self.mean_ratio:.6f} +- {self.stderr:.6f} (SE) over {len(self.trials)} trials")
        return "\n".join(lines)


class TrialFailure(RuntimeError):
    pass


_graph_cache: dict = {}


def girth_boosted_graph(n: int, g_target: int, seed, max_iters: int = 200_000):
    key = (n, g_target, seed, max_iters)
    if key not in _graph_cache:
        base = generate_random_cubic(n, seed)
        res = boost_girth(base, g_target, seed, max_iters)
        if not res.converged:
            raise TrialFailure(
                f"girth boosting stalled at {res.girth} < {g_target} (n={n}, seed={seed})"
            )
        _graph_cache[key] = res
    return _graph_cache[key]


def _one_trial(cfg: TrialConfig, seed) -> RunStats:
    gseed = seed if cfg.graph_seed is None else cfg.graph_seed
    res = girth_boosted_graph(cfg.n, cfg.g_target, gseed, cfg.max_iters)
    g = res.graph
    g_param = cfg.path_girth if cfg.path_girth is not None else int(min(res.girth, g.n))
    ps = _paths_for(g, g_param, cfg.K)
    try:
        result = run(g, cfg.rule_set(), cfg.K, seed, paths=ps, g_measured=res.girth)
    except Exception as exc:
        raise TrialFailure(f"trial seed={seed}: {exc}") from exc
    return result.stats


_paths_cache: dict = {}


def _paths_for(g: Graph, g_param: int, K: int):
    key = (id(g), g_param, K)
    hit = _paths_cache.get(key)
    if hit is None or hit[0] is not g:
        hit = (g, decompose_paths(g, maximum_matching(g), g_param, K))
        _paths_cache[key] = hit
    return hit[1]


def run_trials(cfg: TrialConfig) -> TrialReport:
    """One labeling run per seed on girth-boosted random cubic graphs."""
    if cfg.jobs > 1 and len(cfg.seeds) > 1:
        with ProcessPoolExecutor(max_workers=cfg.jobs) as pool:
            trials = list(pool.map(_one_trial, [cfg] * len(cfg.seeds), cfg.seeds))
    else:
        trials = [_one_trial(cfg, s) for s in cfg.seeds]
    return TrialReport(cfg, trials)
