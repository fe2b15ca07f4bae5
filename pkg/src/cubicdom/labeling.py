"""The randomized leveling/labeling procedure and dominating-set assembly."""
from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .analysis import AnalysisTable, analyze, start_offset_distribution
from .graph import Graph, PathSystem, decompose_paths, girth, maximum_matching
from .rules import (
    ExpandedRuleSet,
    InputSymbol,
    OutputSymbol,
    RuleSet,
    check_complete,
    check_correct,
    expand,
    match_prefix,
)

PLUS, TIMES, DOT, CIRC = InputSymbol
OPLUS, OTIMES, ODOT = OutputSymbol


class SchedulingError(RuntimeError):
    """A vertex needed a lower-level mate's output label that was not yet assigned."""


@dataclass(frozen=True)
class LevelAssignment:
    level: tuple  # level[k] in 1..K for path k


@dataclass
class Labeling:
    input_label: dict = field(default_factory=dict)
    output_label: dict = field(default_factory=dict)
    level: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DominatingSet:
    members: frozenset
    provenance: dict  # vertex -> frozenset of tags

    def __len__(self) -> int:
        return len(self.members)

    def __contains__(self, v) -> bool:
        return v in self.members


TAGS = ("uncovered", "input-plus", "output-otimes", "path-endpoint")


@dataclass
class RunStats:
    n: int
    g_measured: float
    g_param: int
    K: int
    size: int
    ratio: float
    paths: int
    uncovered: int
    short_paths: int  # paths with fewer vertices than the longest rule
    seed: Optional[int]
    provenance_counts: dict = field(default_factory=dict)
    input_freq: dict = field(default_factory=dict)  # level -> {symbol char: count}
    output_freq: dict = field(default_factory=dict)
    rule_set: str = ""

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        if math.isinf(d["g_measured"]):
            d["g_measured"] = None
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    CSV_HEADER = "seed,n,girth,K,size,ratio"

    def csv_row(self) -> str:
        return f"{self.seed},{self.n},{self.g_measured},{self.K},{self.size},{self.ratio:.6f}"


def assign_levels(ps: PathSystem, K: int, rng: np.random.Generator) -> LevelAssignment:
    if K < 2:
        raise ValueError("K must be at least 2")
    return LevelAssignment(tuple(int(x) for x in rng.integers(1, K + 1, size=len(ps.paths))))


def compute_input_label(v, level_of: dict, mate: dict, output_label: dict) -> InputSymbol:
    """Input label of ``v`` from its mate's level and, for a lower mate, its output."""
    w = mate[v]
    lv, lw = level_of[v], level_of[w]
    if lw > lv:
        return CIRC
    if lw == lv:
        return DOT
    out = output_label.get(w)
    if out is None:
        raise SchedulingError(f"mate {w} of vertex {v} (level {lw} < {lv}) has no output label")
    return (PLUS, TIMES, DOT)[out]


def label_path(inputs, ers: ExpandedRuleSet, p: dict, offset_pmf, rng: np.random.Generator) -> list:
    """Assign output labels to one path with the given input labels.

    ``R - ell0`` random auxiliary symbols go in front and ``R`` behind, all
    drawn from ``p``; rules are matched from the first auxiliary on and the
    auxiliary outputs are dropped.
    """
    R = ers.max_length
    probs = np.array([p[s] for s in InputSymbol])
    probs = probs / probs.sum()
    ell0 = int(rng.choice(len(offset_pmf), p=np.asarray(offset_pmf) / sum(offset_pmf))) + 1
    front = R - ell0
    pad = rng.choice(4, size=front + R, p=probs).tolist()
    stream = pad[:front] + [int(s) for s in inputs] + pad[front:]
    end = front + len(inputs)
    out = []
    pos = 0
    while pos < end:
        rule = match_prefix(ers, stream, pos)
        out.extend(rule.rhs)
        pos += len(rule)
    return out[front:end]


def build_dominating_set(ps: PathSystem, labeling: Labeling) -> DominatingSet:
    prov: dict = {}

    def tag(v, t):
        prov.setdefault(v, set()).add(t)

    for v in ps.uncovered:
        tag(v, "uncovered")
    for v, s in labeling.input_label.items():
        if s == PLUS:
            tag(v, "input-plus")
    for v, s in labeling.output_label.items():
        if s == OTIMES:
            tag(v, "output-otimes")
    for path in ps.paths:
        tag(path[0], "path-endpoint")
        tag(path[-1], "path-endpoint")
    return DominatingSet(frozenset(prov), {v: frozenset(t) for v, t in prov.items()})


def verify_dominating(g: Graph, members):
    """Return ``(ok, undominated)`` for the candidate set ``members``."""
    members = set(members)
    undominated = [
        v for v in range(g.n) if v not in members and not any(w in members for w in g.adj[v])
    ]
    return not undominated, undominated


@dataclass(frozen=True)
class _LevelData:
    p: dict
    offset_pmf: tuple


@lru_cache(maxsize=32)
def _prepared(rs: RuleSet, K: int):
    ers = expand(rs)
    table = analyze(ers, K)
    levels = {}
    for row in table.rows:
        dist = start_offset_distribution(ers, row.p, row.Q, row.level)
        levels[row.level] = _LevelData(row.p, dist.ell0_pmf)
    return ers, table, levels


def label_graph(ps: PathSystem, rs: RuleSet, K: int, rng: np.random.Generator):
    """Levels and labels for every covered vertex, lowest level first."""
    ers, _table, levels = _prepared(rs, K)
    la = assign_levels(ps, K, rng)
    lab = Labeling()
    by_level = [[] for _ in range(K + 1)]
    for k, path in enumerate(ps.paths):
        by_level[la.level[k]].append(k)
        for v in path:
            lab.level[v] = la.level[k]
    for i in range(1, K + 1):
        data = levels[i]
        for k in by_level[i]:
            path = ps.paths[k]
            inputs = [compute_input_label(v, lab.level, ps.mate, lab.output_label) for v in path]
            outputs = label_path(inputs, ers, data.p, data.offset_pmf, rng)
            for v, s, t in zip(path, inputs, outputs):
                lab.input_label[v] = s
                if t == OPLUS and s != CIRC:
                    raise AssertionError(f"output P on vertex {v} with input {s.char}")
                lab.output_label[v] = t
    return la, lab


@dataclass(frozen=True)
class RunResult:
    labeling: Labeling
    dominating: DominatingSet
    stats: RunStats
    paths: PathSystem


class NotDominating(RuntimeError):
    pass


def run(
    g: Graph,
    rs: RuleSet,
    K: int,
    seed=None,
    g_override: Optional[int] = None,
    paths: Optional[PathSystem] = None,
    g_measured: Optional[float] = None,
) -> RunResult:
    """Matching, path decomposition, levels, labels, dominating set, verification.

    ``g_override`` sets the girth parameter used for path lengths (default:
    the measured girth). A precomputed ``paths`` skips the matching and
    decomposition, which depend on the graph only.
    """
    if not g.is_cubic():
        raise ValueError("graph is not cubic")
    bad = check_correct(rs) + check_complete(rs)
    if bad:
        raise ValueError(f"rule set {rs.name!r} failed validation: {bad[0]}")
    if g_measured is None:
        g_measured = girth(g).girth
    if paths is None:
        g_param = g_override if g_override is not None else int(min(g_measured, g.n))
        paths = decompose_paths(g, maximum_matching(g), g_param, K)
    rng = np.random.default_rng(seed)
    _la, lab = label_graph(paths, rs, K, rng)
    dom = build_dominating_set(paths, lab)
    ok, missing = verify_dominating(g, dom.members)
    if not ok:
        raise NotDominating(f"{len(missing)} undominated vertices, e.g. {missing[:5]}")

    inp = {i: Counter() for i in range(1, K + 1)}
    out = {i: Counter() for i in range(1, K + 1)}
    for v, s in lab.input_label.items():
        inp[lab.level[v]][s.char] += 1
        out[lab.level[v]][lab.output_label[v].char] += 1
    prov = Counter(t for tags in dom.provenance.values() for t in tags)
    R = expand(rs).max_length
    stats = RunStats(
        n=g.n,
        g_measured=g_measured,
        g_param=paths.g,
        K=K,
        size=len(dom),
        ratio=len(dom) / g.n,
        paths=len(paths.paths),
        uncovered=len(paths.uncovered),
        short_paths=sum(1 for p in paths.paths if len(p) < R),
        seed=seed,
        provenance_counts={t: prov.get(t, 0) for t in TAGS},
        input_freq={i: dict(c) for i, c in inp.items()},
        output_freq={i: dict(c) for i, c in out.items()},
        rule_set=rs.name,
    )
    return RunResult(lab, dom, stats, paths)
