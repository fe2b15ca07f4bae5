"""Rule sets: parsing, wildcard expansion, validity checks and prefix matching.

A rule rewrites a block of input labels along a path into the same number of
output labels. Rule files are line oriented ASCII::

    # comment
    +? -> DD
    ox -> PD

Input alphabet ``+ x . o`` plus the wildcard ``?``; output alphabet ``P T D``
for the three output symbols (include-mate, include-self, dominated).
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional, Sequence


class InputSymbol(enum.IntEnum):
    PLUS = 0
    TIMES = 1
    DOT = 2
    CIRC = 3

    @property
    def char(self) -> str:
        return _INPUT_CHARS[self]

    @property
    def glyph(self) -> str:
        return "+×·∘"[self]


class OutputSymbol(enum.IntEnum):
    OPLUS = 0
    OTIMES = 1
    ODOT = 2

    @property
    def char(self) -> str:
        return _OUTPUT_CHARS[self]

    @property
    def glyph(self) -> str:
        return "⊕⊗⊙"[self]


_INPUT_CHARS = "+x.o"
_OUTPUT_CHARS = "PTD"
WILDCARD_CHAR = "?"

#: Pattern positions hold an ``InputSymbol`` or ``WILDCARD``.
WILDCARD = None

INPUT_BY_CHAR = {c: InputSymbol(i) for i, c in enumerate(_INPUT_CHARS)}
OUTPUT_BY_CHAR = {c: OutputSymbol(i) for i, c in enumerate(_OUTPUT_CHARS)}
# the glyphs are accepted too so rules can be pasted from typeset text
INPUT_BY_CHAR.update({s.glyph: s for s in InputSymbol})
OUTPUT_BY_CHAR.update({s.glyph: s for s in OutputSymbol})


class RuleSyntaxError(ValueError):
    def __init__(self, message: str, lineno: Optional[int] = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


def _pattern_str(lhs) -> str:
    return "".join(WILDCARD_CHAR if s is WILDCARD else s.char for s in lhs)


@dataclass(frozen=True)
class Rule:
    lhs: tuple  # of InputSymbol or WILDCARD
    rhs: tuple  # of OutputSymbol

    def __post_init__(self):
        if not self.lhs or not self.rhs:
            raise ValueError("empty rule")
        if len(self.lhs) != len(self.rhs):
            raise ValueError(
                f"length mismatch: lhs has {len(self.lhs)} symbols, rhs has {len(self.rhs)}"
            )

    def __len__(self) -> int:
        return len(self.lhs)

    def __str__(self) -> str:
        return f"{_pattern_str(self.lhs)} -> {''.join(s.char for s in self.rhs)}"

    @property
    def wildcards(self) -> int:
        return sum(1 for s in self.lhs if s is WILDCARD)

    @classmethod
    def parse(cls, line: str, lineno: Optional[int] = None) -> "Rule":
        if "->" not in line:
            raise RuleSyntaxError(f"missing '->' in {line!r}", lineno)
        left, _, right = line.partition("->")
        left = "".join(left.split())
        right = "".join(right.split())
        if not left or not right:
            raise RuleSyntaxError("empty rule side", lineno)
        if len(left) != len(right):
            raise RuleSyntaxError(
                f"length mismatch: {len(left)} input vs {len(right)} output symbols", lineno
            )
        lhs = []
        for ch in left:
            if ch == WILDCARD_CHAR:
                lhs.append(WILDCARD)
            elif ch in INPUT_BY_CHAR:
                lhs.append(INPUT_BY_CHAR[ch])
            else:
                raise RuleSyntaxError(f"unknown input symbol {ch!r}", lineno)
        rhs = []
        for ch in right:
            if ch == WILDCARD_CHAR:
                raise RuleSyntaxError("wildcard on the right-hand side", lineno)
            if ch not in OUTPUT_BY_CHAR:
                raise RuleSyntaxError(f"unknown output symbol {ch!r}", lineno)
            rhs.append(OUTPUT_BY_CHAR[ch])
        return cls(tuple(lhs), tuple(rhs))


@dataclass(frozen=True)
class RuleSet:
    rules: tuple
    name: str = "rules"

    def __post_init__(self):
        if not self.rules:
            raise ValueError("rule set is empty")

    def __len__(self) -> int:
        return len(self.rules)

    def __iter__(self):
        return iter(self.rules)

    @property
    def max_length(self) -> int:
        """Length of the longest rule."""
        return max(len(r) for r in self.rules)

    def dumps(self) -> str:
        return "".join(f"{r}\n" for r in self.rules)


@dataclass(frozen=True)
class ExpandedRuleSet:
    """Wildcard-free rules; ``origin[k]`` is the source index of ``rules[k]``."""

    rules: tuple
    origin: tuple
    name: str = "rules"
    _trie: dict = field(default=None, init=False, repr=False, compare=False, hash=False)

    def __len__(self) -> int:
        return len(self.rules)

    @property
    def max_length(self) -> int:
        return max(len(r) for r in self.rules)

    def trie(self) -> dict:
        # nested dicts keyed by InputSymbol; a leaf holds the Rule under key None
        if self._trie is None:
            root: dict = {}
            for rule in self.rules:
                node = root
                for s in rule.lhs:
                    node = node.setdefault(s, {})
                node[None] = rule
            object.__setattr__(self, "_trie", root)
        return self._trie


def parse_rule_set(text: str, name: str = "rules") -> RuleSet:
    rules = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        rules.append(Rule.parse(line, lineno))
    if not rules:
        raise RuleSyntaxError("no rules found")
    return RuleSet(tuple(rules), name)


def load_rule_set(path) -> RuleSet:
    from pathlib import Path

    path = Path(path)
    return parse_rule_set(path.read_text(encoding="utf-8"), name=path.stem)


def bundled(name: str) -> RuleSet:
    """Load one of the packaged rule sets (``example10`` or ``main79``)."""
    text = resources.files("cubicdom.data").joinpath(f"{name}.rules").read_text(encoding="utf-8")
    return parse_rule_set(text, name=name)


def expand_rule(rule: Rule) -> list:
    slots = [list(InputSymbol) if s is WILDCARD else [s] for s in rule.lhs]
    return [Rule(tuple(lhs), rule.rhs) for lhs in itertools.product(*slots)]


def expand(rs) -> ExpandedRuleSet:
    """Replace each wildcard by all four input symbols, in symbol order."""
    if isinstance(rs, ExpandedRuleSet):
        return rs
    rules, origin = [], []
    for idx, rule in enumerate(rs.rules):
        for concrete in expand_rule(rule):
            rules.append(concrete)
            origin.append(idx)
    return ExpandedRuleSet(tuple(rules), tuple(origin), getattr(rs, "name", "rules"))


@dataclass(frozen=True)
class Violation:
    kind: str  # "a", "b", "prefix", "kraft"
    message: str
    rule_index: Optional[int] = None
    expanded: Optional[Rule] = None
    position: Optional[int] = None  # 1-based

    def __str__(self) -> str:
        where = []
        if self.rule_index is not None:
            where.append(f"rule {self.rule_index + 1}")
        if self.expanded is not None:
            where.append(f"[{self.expanded}]")
        if self.position is not None:
            where.append(f"position {self.position}")
        prefix = " ".join(where)
        return f"{self.kind}: {prefix}: {self.message}" if prefix else f"{self.kind}: {self.message}"


def rule_violations(rule: Rule) -> list:
    """Return ``(position, condition)`` pairs failing the two correctness conditions.

    Condition ``a``: a dot or circ input with no ``+`` beside it must be
    output ``P`` or have a ``T`` somewhere in the window i-1..i+1.
    Condition ``b``: ``P`` only on circ inputs.
    """
    lhs, rhs = rule.lhs, rule.rhs
    n = len(lhs)
    bad = []
    for i in range(n):
        window = range(max(0, i - 1), min(n, i + 2))
        if lhs[i] in (InputSymbol.DOT, InputSymbol.CIRC):
            plus_near = any(lhs[j] == InputSymbol.PLUS for j in window if j != i)
            if not plus_near:
                covered = rhs[i] == OutputSymbol.OPLUS or any(
                    rhs[j] == OutputSymbol.OTIMES for j in window
                )
                if not covered:
                    bad.append((i + 1, "a"))
        if rhs[i] == OutputSymbol.OPLUS and lhs[i] != InputSymbol.CIRC:
            bad.append((i + 1, "b"))
    return bad


def check_correct(rs) -> list:
    ers = expand(rs)
    out = []
    for rule, idx in zip(ers.rules, ers.origin):
        for pos, cond in rule_violations(rule):
            if cond == "a":
                msg = "dot/circ input without adjacent + is neither P nor next to T"
            else:
                msg = "output P on a non-circ input"
            out.append(Violation(cond, msg, idx, rule, pos))
    return out


def check_complete(rs) -> list:
    """Check the expanded left-hand sides form a complete prefix-free code."""
    ers = expand(rs)
    out = []
    seen = {}
    for rule, idx in zip(ers.rules, ers.origin):
        if rule.lhs in seen:
            out.append(
                Violation("prefix", f"duplicate left-hand side (also rule {seen[rule.lhs][1] + 1})", idx, rule)
            )
        else:
            seen[rule.lhs] = (rule, idx)
    for rule, idx in zip(ers.rules, ers.origin):
        for k in range(1, len(rule.lhs)):
            hit = seen.get(rule.lhs[:k])
            if hit is not None:
                out.append(
                    Violation(
                        "prefix",
                        f"has rule {hit[1] + 1} [{hit[0]}] as a proper prefix",
                        idx,
                        rule,
                    )
                )
                break
    maxlen = ers.max_length
    # exact Kraft sum, scaled by 4**maxlen
    total = sum(4 ** (maxlen - len(r)) for r in ers.rules)
    if total != 4**maxlen:
        if total < 4**maxlen:
            msg = f"Kraft sum {total}/{4 ** maxlen} < 1: some inputs match no rule"
        else:
            msg = f"Kraft sum {total}/{4 ** maxlen} > 1"
        out.append(Violation("kraft", msg))
    return out


class NoMatchingRule(LookupError):
    pass


def match_prefix(ers: ExpandedRuleSet, stream: Sequence, start: int = 0) -> Rule:
    """Return the unique rule whose left-hand side is a prefix of ``stream[start:]``."""
    node = ers.trie()
    i = start
    while True:
        if None in node:
            return node[None]
        if i >= len(stream):
            raise NoMatchingRule(f"input exhausted at offset {i}")
        try:
            node = node[stream[i]]
        except KeyError:
            raise NoMatchingRule(
                f"no rule matches {''.join(InputSymbol(s).char for s in stream[start:i + 1])}"
            ) from None
        i += 1


def _matches(pattern, symbol) -> bool:
    return pattern is None or pattern == symbol


def sigma_tau_count(rule: Rule, x=WILDCARD, y=None) -> int:
    """Number of positions with input ``x`` and output ``y``; ``None`` matches anything."""
    return sum(1 for s, t in zip(rule.lhs, rule.rhs) if _matches(x, s) and _matches(y, t))


def format_rule(rule: Rule, glyphs: bool = False) -> str:
    if not glyphs:
        return str(rule)
    left = "".join("?" if s is WILDCARD else s.glyph for s in rule.lhs)
    return f"{left} → {''.join(s.glyph for s in rule.rhs)}"

