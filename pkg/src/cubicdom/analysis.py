"""Level-by-level label probabilities and the expected dominating-set density.

For a level ``i`` out of ``K`` the input-label law ``p_i`` depends on the
conditional output laws of the lower levels; the output laws then follow by
summing over the expanded rules weighted by the probability that each rule's
left-hand side appears. Everything runs in float64.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .rules import ExpandedRuleSet, InputSymbol, OutputSymbol, expand

_P = InputSymbol
_O = OutputSymbol


@dataclass(frozen=True)
class LevelProbabilities:
    level: int
    p: dict  # InputSymbol -> float
    q: dict  # OutputSymbol -> float
    q_circ: Optional[dict]  # None when p(circ) == 0
    Q: float
    Q_circ: float

    def as_row(self) -> list:
        row = [self.p[s] for s in InputSymbol] + [self.q[s] for s in OutputSymbol]
        if self.q_circ is None:
            row += [None, None, None]
        else:
            row += [self.q_circ[s] for s in OutputSymbol]
        return row


@dataclass(frozen=True)
class StartOffsetDistribution:
    level: Optional[int]
    r: tuple  # r[j-1] is the start probability given j-1 non-starts before it
    ell0_pmf: tuple  # ell0_pmf[l-1] = P(ell0 = l)


@dataclass(frozen=True)
class BoundResult:
    bound: float
    K: int
    rule_set_name: str


TSV_COLUMNS = ("i", "p+", "px", "p.", "po", "qP", "qT", "qD", "qoP", "qoT", "qoD")


@dataclass(frozen=True)
class AnalysisTable:
    K: int
    rows: tuple
    rule_set_name: str = "rules"

    def row(self, level: int) -> LevelProbabilities:
        return self.rows[level - 1]

    def to_tsv(self, levels=None) -> str:
        lines = ["\t".join(TSV_COLUMNS)]
        for row in self.rows if levels is None else (self.row(i) for i in levels):
            cells = [str(row.level)] + ["-" if v is None else f"{v:.4f}" for v in row.as_row()]
            lines.append("\t".join(cells))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "rule_set": self.rule_set_name,
            "K": self.K,
            "bound": bound(self).bound,
            "rows": [
                {
                    "i": r.level,
                    "p": {s.char: r.p[s] for s in InputSymbol},
                    "q": {s.char: r.q[s] for s in OutputSymbol},
                    "q_circ": None if r.q_circ is None else {s.char: r.q_circ[s] for s in OutputSymbol},
                    "Q": r.Q,
                    "Q_circ": r.Q_circ,
                }
                for r in self.rows
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


class _Compiled:
    """Per-rule count matrices for the vectorized sums."""

    def __init__(self, ers: ExpandedRuleSet):
        m = len(ers.rules)
        self.sym_counts = np.zeros((m, 4), dtype=np.int64)
        self.lengths = np.zeros(m)
        self.out_counts = np.zeros((m, 3))
        self.circ_out = np.zeros((m, 3))
        for k, rule in enumerate(ers.rules):
            self.lengths[k] = len(rule)
            for s, t in zip(rule.lhs, rule.rhs):
                self.sym_counts[k, s] += 1
                self.out_counts[k, t] += 1
                if s == _P.CIRC:
                    self.circ_out[k, t] += 1
        self.circ_counts = self.circ_out.sum(axis=1)

    def pattern_probs(self, p_vec: np.ndarray) -> np.ndarray:
        # 0.0 ** 0 == 1.0, so absent symbols do not zero out a rule
        return np.prod(p_vec[None, :] ** self.sym_counts, axis=1)


_cache: dict = {}


def _compiled(ers: ExpandedRuleSet) -> _Compiled:
    c = _cache.get(id(ers))
    if c is None or c[0] is not ers:
        c = (ers, _Compiled(ers))
        _cache[id(ers)] = c
    return c[1]


def _vec(p: dict) -> np.ndarray:
    return np.array([p[s] for s in InputSymbol], dtype=float)


def input_probs(i: int, K: int, prior=()) -> dict:
    """Input-label law at level ``i`` given the rows for levels ``1..i-1``."""
    if not 1 <= i <= K:
        raise ValueError(f"level {i} outside 1..{K}")
    sums = np.zeros(3)
    for row in prior[: i - 1]:
        if row.q_circ is None:
            raise ValueError(f"level {row.level} has no conditional output law")
        sums += [row.q_circ[s] for s in OutputSymbol]
    if len(prior) < i - 1:
        raise ValueError(f"need {i - 1} prior rows, got {len(prior)}")
    return _input_probs_from_sums(i, K, sums)


def _input_probs_from_sums(i: int, K: int, sums) -> dict:
    return {
        _P.PLUS: sums[_O.OPLUS] / K,
        _P.TIMES: sums[_O.OTIMES] / K,
        _P.DOT: 1.0 / K + sums[_O.ODOT] / K,
        _P.CIRC: 1.0 - i / K,
    }


def pattern_prob(p: dict, sigma) -> float:
    prob = 1.0
    for s in sigma:
        prob *= p[s]
    return prob


def output_probs(ers, p: dict):
    """Return ``(q, Q)``: output-label law and expected symbols per rule."""
    c = _compiled(expand(ers))
    w = c.pattern_probs(_vec(p))
    Q = float(w @ c.lengths)
    qv = (w @ c.out_counts) / Q
    return {s: float(qv[s]) for s in OutputSymbol}, Q


def output_probs_conditional(ers, p: dict):
    """Return ``(q_circ, Q_circ)``, or ``None`` when circ inputs cannot occur."""
    c = _compiled(expand(ers))
    w = c.pattern_probs(_vec(p))
    Q_circ = float(w @ c.circ_counts)
    if Q_circ == 0.0:
        return None
    qv = (w @ c.circ_out) / Q_circ
    return {s: float(qv[s]) for s in OutputSymbol}, Q_circ


def analyze(rs, K: int) -> AnalysisTable:
    if K < 2:
        raise ValueError("K must be at least 2")
    ers = expand(rs)
    c = _compiled(ers)
    rows = []
    circ_sums = np.zeros(3)
    for i in range(1, K + 1):
        p = _input_probs_from_sums(i, K, circ_sums)
        w = c.pattern_probs(_vec(p))
        Q = float(w @ c.lengths)
        qv = (w @ c.out_counts) / Q
        Q_circ = float(w @ c.circ_counts)
        # at level K p(circ) is exactly 0, so this branch is what yields "-"
        if Q_circ > 0.0:
            qcv = (w @ c.circ_out) / Q_circ
            q_circ = {s: float(qcv[s]) for s in OutputSymbol}
            circ_sums += qcv
        else:
            q_circ = None
        rows.append(
            LevelProbabilities(
                level=i,
                p={s: float(v) for s, v in p.items()},
                q={s: float(qv[s]) for s in OutputSymbol},
                q_circ=q_circ,
                Q=Q,
                Q_circ=Q_circ,
            )
        )
    return AnalysisTable(K, tuple(rows), ers.name)


def bound(table: AnalysisTable) -> BoundResult:
    """Mean over levels of q(P) + q(T): the leading constant of the expected size."""
    total = sum(r.q[_O.OPLUS] + r.q[_O.OTIMES] for r in table.rows)
    return BoundResult(total / table.K, table.K, table.rule_set_name)


def length_weights(ers, p: dict) -> np.ndarray:
    """``G[l-1]``: probability that the rule applied at a rule start has length ``l``."""
    c = _compiled(expand(ers))
    w = c.pattern_probs(_vec(p))
    maxlen = int(c.lengths.max())
    return np.bincount(c.lengths.astype(int) - 1, weights=w, minlength=maxlen)


def start_offset_distribution(ers, p: dict, Q: Optional[float] = None, level: Optional[int] = None):
    """Rule-start hazards ``r_j`` and the law of the padding offset ``ell0``.

    With ``W_l`` the probability that a rule has length at least ``l``, a
    stationary vertex sits at in-rule position ``l`` with probability
    ``W_l / Q``; the hazard after ``j-1`` non-starts is
    ``W_j / sum_{l>=j} W_l``.
    """
    G = length_weights(ers, p)
    W = np.cumsum(G[::-1])[::-1]
    tails = np.cumsum(W[::-1])[::-1]  # tails[j-1] = sum_{l>=j} W_l
    if Q is None:
        Q = float(tails[0])
    r = []
    for j in range(len(W)):
        # unreachable offsets (no rule this long) get hazard 1
        r.append(1.0 if tails[j] <= 0.0 else float(W[j] / tails[j]))
    r[0] = 1.0 / Q
    pmf = []
    survive = 1.0
    for rj in r:
        pmf.append(rj * survive)
        survive *= 1.0 - rj
    return StartOffsetDistribution(level, tuple(r), tuple(pmf))
