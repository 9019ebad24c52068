"""Rule constructions, the tops-table census engine, and the verification suites.

The census enumerates the tops-table rule space at fixed (n, m) as base-m
digit strings over the m**n tops cells, counts the cascade
total -> unanimous -> efficient -> strategy-proof -> dictatorial, and in
exhaustive mode compares the strategy-proof survivors element-wise against
the dictatorships.  Quantified claims about "all rules" are checked over this
tops-table space plus the closed-form library; full-table rule spaces are
never enumerated (3**36 rules already at n=2, m=3), and every report records
that restriction.

Rule-space exhaustion is guarded by a budget (``GSVERIFY_MAX_RULE_SPACE``);
larger spaces run in sampled mode with an explicit seed, and sampled runs
with the same seed reproduce byte for byte.
"""

from __future__ import annotations

import multiprocessing
import os
import random
from dataclasses import dataclass, field
from time import perf_counter
from typing import Iterator, Sequence

from . import _engine
from .errors import BudgetExceededError, UnknownLemmaError
from .prefs import (
    Preference,
    Profile,
    check_agent_count,
    check_alternative_count,
    profile_from_code,
)
from .rules import (
    BordaLexRule,
    ConstantRule,
    DictatorRule,
    MajorityLexRule,
    Rule,
    TopsTableRule,
    as_full_table,
    as_tops_table,
    find_dictator,
    find_manipulation,
    is_efficient,
    is_strategy_proof,
    is_tops_only,
    is_unanimous,
    parse_rule,
)

DEFAULT_RULE_SPACE_BUDGET = 200_000
RULE_SPACE_BUDGET_ENV = "GSVERIFY_MAX_RULE_SPACE"

RULE_SPACE_NOTE = (
    "quantification over rules covers the tops-table space plus the "
    "closed-form library; full-table rule spaces are not enumerated"
)

FILTER_NAMES = ("unanimous", "efficient", "strategy-proof", "dictatorial")
# cheapest checks first; strategy-proofness runs the definitional scanner
_FILTER_ORDER = ("unanimous", "efficient", "dictatorial", "strategy-proof")

LEMMA_DESCRIPTIONS = {
    "L1": "strategy-proof unanimous rules are efficient",
    "L3": "tops-only efficient rules always select some agent's top",
    "L4": "all profiles dictatorial iff dictatorial, within tops-only efficient rules",
    "L5": "every profile is exactly one of dictatorial or manipulable",
    "C1": "strategy-proof unanimous rules are tops-only and efficient",
    "C2": "at-least-as-dictatorial and at-least-as-manipulable are dual orders",
    "R1": "strategy-proof iff no rule is less manipulable",
    "R2": "dictatorial iff no tops-only efficient rule is more dictatorial",
    "THM": "strategy-proof unanimous rules are exactly the dictatorships",
}

_DEFAULT_SAMPLES = {
    "L1": 1000,
    "L3": 1000,
    "L4": 1000,
    "L5": 1000,
    "C1": 1000,
    "C2": 10_000,
    "R1": 1000,
    "R2": 1000,
    "THM": 100_000,
}
DEFAULT_CENSUS_SAMPLES = 100_000


def rule_space_budget() -> int:
    return int(os.environ.get(RULE_SPACE_BUDGET_ENV, DEFAULT_RULE_SPACE_BUDGET))


def rule_space_size(n: int, m: int) -> int:
    """Number of tops-table rules at (n, m): m ** (m ** n)."""
    return m ** (m**n)


# ---------------------------------------------------------------------------
# Coalescing and restriction.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CoalescedRule(Rule):
    """An (n-1)-agent rule feeding its first preference into two slots of the base."""

    base: Rule

    def __post_init__(self) -> None:
        if self.base.n < 3:
            raise ValueError("coalescing needs a base rule with at least 3 agents")

    @property
    def n(self) -> int:
        return self.base.n - 1

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def tops_only_by_construction(self) -> bool:
        return self.base.tops_only_by_construction

    def evaluate(self, profile: Profile):
        self._check_profile(profile)
        prefs = profile.prefs
        return self.base.evaluate(Profile((prefs[0], prefs[0]) + prefs[1:]))

    def evaluate_tops(self, tops):
        self._check_tops(tops)
        return self.base.evaluate_tops((tops[0], tops[0]) + tuple(tops[1:]))

    def to_string(self) -> str:
        if is_tops_only(self):
            return as_tops_table(self).to_string()
        return as_full_table(self).to_string()


@dataclass(frozen=True)
class RestrictedRule(Rule):
    """A 2-agent rule obtained by pinning the base rule's agents 3..n."""

    base: Rule
    fixed: tuple[Preference, ...]

    def __post_init__(self) -> None:
        fixed = tuple(self.fixed)
        object.__setattr__(self, "fixed", fixed)
        if self.base.n < 3:
            raise ValueError("restriction needs a base rule with at least 3 agents")
        if len(fixed) != self.base.n - 2:
            raise ValueError(
                f"need {self.base.n - 2} fixed preferences, got {len(fixed)}"
            )
        if any(p.m != self.base.m for p in fixed):
            raise ValueError("fixed preferences disagree with the base alternative count")

    @property
    def n(self) -> int:
        return 2

    @property
    def m(self) -> int:
        return self.base.m

    @property
    def tops_only_by_construction(self) -> bool:
        return self.base.tops_only_by_construction

    def evaluate(self, profile: Profile):
        self._check_profile(profile)
        return self.base.evaluate(Profile(profile.prefs + self.fixed))

    def evaluate_tops(self, tops):
        self._check_tops(tops)
        return self.base.evaluate_tops(tuple(tops) + tuple(p.top for p in self.fixed))

    def to_string(self) -> str:
        if is_tops_only(self):
            return as_tops_table(self).to_string()
        return as_full_table(self).to_string()


def coalesce(rule: Rule) -> Rule:
    """Merge the first two agent slots: g(P1, P3, ..) = f(P1, P1, P3, ..)."""
    return CoalescedRule(rule)


def restrict(rule: Rule, fixed: Sequence[Preference]) -> Rule:
    """Pin agents 3..n to ``fixed``: h(P1, P2) = f(P1, P2, fixed...)."""
    return RestrictedRule(rule, tuple(fixed))


# ---------------------------------------------------------------------------
# Rule-space iteration.
# ---------------------------------------------------------------------------


def _check_rule_space(n: int, m: int, budget: int | None = None) -> int:
    size = rule_space_size(n, m)
    limit = rule_space_budget() if budget is None else budget
    if size > limit:
        raise BudgetExceededError(
            f"tops-table space at (n={n}, m={m}) holds {size} rules "
            f"({m}**{m**n}), over the budget of {limit}; "
            f"use sampled mode or raise {RULE_SPACE_BUDGET_ENV}"
        )
    return size


def _resolve_mode(
    required: int,
    mode: str,
    samples: int | None,
    seed: int | None,
    default_samples: int,
    what: str,
    budget: int | None = None,
) -> tuple[str, int | None, int | None]:
    """Resolve auto/exhaustive/sampled against the work budget."""
    limit = rule_space_budget() if budget is None else budget
    if mode not in ("auto", "exhaustive", "sampled"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "exhaustive" or (mode == "auto" and required <= limit):
        if required > limit:
            raise BudgetExceededError(
                f"exhaustive {what} needs {required} rule checks, over the "
                f"budget of {limit}; use sampled mode or raise {RULE_SPACE_BUDGET_ENV}"
            )
        return "exhaustive", None, None
    if seed is None:
        raise ValueError("sampled mode needs a seed")
    return "sampled", samples or default_samples, seed


def _iter_rule_digits(
    n: int, m: int, mode: str, samples: int | None, seed: int | None
) -> Iterator[tuple[int, list[int]]]:
    """Yield (code-or-index, digit list) per candidate rule.

    The digit list is reused between iterations; callers materialize with
    tuple() before keeping a reference.
    """
    sp = _engine.space(n, m)
    cells = sp.tops_count
    if mode == "exhaustive":
        digits = [0] * cells
        for code in range(rule_space_size(n, m)):
            yield code, digits
            _engine.increment_digits(digits, m)
    else:
        rng = random.Random(seed)
        for idx in range(samples or 0):
            yield idx, [rng.randrange(m) for _ in range(cells)]


def _sample_efficient_digits(rng: random.Random, sp: _engine.Space) -> list[int]:
    """One uniform sample from the cell-wise efficient tops tables."""
    return [rng.choice(sp.cell_tops_sets[tc]) for tc in range(sp.tops_count)]


def sample_efficient_tops_tables(
    n: int, m: int, count: int, seed: int
) -> list[TopsTableRule]:
    """Seeded uniform sample of tops-table rules whose every cell selects a top.

    Such rules are unanimous and efficient by construction of the sample.
    """
    check_agent_count(n)
    check_alternative_count(m)
    sp = _engine.space(n, m)
    rng = random.Random(seed)
    return [
        TopsTableRule(n, m, tuple(_sample_efficient_digits(rng, sp)))
        for _ in range(count)
    ]


def enumerate_tops_only_rules(
    n: int,
    m: int,
    filters: Sequence[str] = (),
    *,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int | None = None,
    budget: int | None = None,
) -> Iterator[TopsTableRule]:
    """Stream tops-table rules in ascending rule-code order, optionally filtered.

    Filters (any of "unanimous", "efficient", "strategy-proof", "dictatorial")
    short-circuit cheapest first.  Exhaustive mode requires the rule space to
    fit the budget; sampled mode draws uniform tables from a seeded generator.
    """
    check_agent_count(n)
    check_alternative_count(m)
    ordered = _ordered_filters(filters)
    resolved, eff_samples, eff_seed = _resolve_mode(
        rule_space_size(n, m), mode, samples, seed, DEFAULT_CENSUS_SAMPLES,
        f"enumeration at (n={n}, m={m})", budget,
    )
    sp = _engine.space(n, m)

    def gen() -> Iterator[TopsTableRule]:
        for _, digits in _iter_rule_digits(n, m, resolved, eff_samples, eff_seed):
            if all(_digit_filter(name, digits, sp, n, m) for name in ordered):
                yield TopsTableRule(n, m, tuple(digits))

    return gen()


def _ordered_filters(filters: Sequence[str]) -> tuple[str, ...]:
    for name in filters:
        if name not in FILTER_NAMES:
            raise ValueError(
                f"unknown filter {name!r}; expected one of {', '.join(FILTER_NAMES)}"
            )
    return tuple(name for name in _FILTER_ORDER if name in filters)


def _digit_filter(
    name: str, digits: Sequence[int], sp: _engine.Space, n: int, m: int
) -> bool:
    if name == "unanimous":
        return _engine.table_unanimous(digits, sp)
    if name == "efficient":
        return _engine.table_efficient_cells(digits, sp)
    if name == "dictatorial":
        return _engine.table_dictator(digits, sp) is not None
    return find_manipulation(TopsTableRule(n, m, tuple(digits))) is None


# ---------------------------------------------------------------------------
# Census.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CensusReport:
    """Cascade counts over the tops-table rule space at fixed (n, m).

    Counts are nested: unanimous within total, efficient within unanimous,
    strategy-proof within efficient, dictatorial within strategy-proof.
    ``elapsed_seconds`` never enters serialized output so reports stay
    byte-deterministic.
    """

    n: int
    m: int
    mode: str
    samples: int | None
    seed: int | None
    filters: tuple[str, ...]
    total: int
    unanimous: int
    efficient: int
    strategy_proof: int
    dictatorial: int
    strategy_proof_rules: tuple[str, ...]
    dictator_rules: tuple[str, ...]
    sp_equals_dictators: bool
    rule_space: str = "tops-table"
    note: str = RULE_SPACE_NOTE
    elapsed_seconds: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "agents": self.n,
            "alternatives": self.m,
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "filters": list(self.filters),
            "rule_space": self.rule_space,
            "note": self.note,
            "counts": {
                "total": self.total,
                "unanimous": self.unanimous,
                "efficient": self.efficient,
                "strategy_proof": self.strategy_proof,
                "dictatorial": self.dictatorial,
            },
            "strategy_proof_rules": list(self.strategy_proof_rules),
            "dictator_rules": list(self.dictator_rules),
            "sp_equals_dictators": self.sp_equals_dictators,
        }


def _census_pass(
    n: int,
    m: int,
    digit_stream: Iterator[tuple[int, list[int]]],
    filters: tuple[str, ...],
) -> tuple[dict, list[str], list[str], int]:
    sp = _engine.space(n, m)
    counts = {
        "total": 0,
        "unanimous": 0,
        "efficient": 0,
        "strategy_proof": 0,
        "dictatorial": 0,
    }
    sp_rules: list[str] = []
    dict_rules: list[str] = []
    seen = 0
    for _, digits in digit_stream:
        seen += 1
        if not all(_digit_filter(name, digits, sp, n, m) for name in filters):
            continue
        counts["total"] += 1
        if not _engine.table_unanimous(digits, sp):
            continue
        counts["unanimous"] += 1
        if not _engine.table_efficient_cells(digits, sp):
            continue
        counts["efficient"] += 1
        rule = TopsTableRule(n, m, tuple(digits))
        if find_manipulation(rule) is not None:
            continue
        counts["strategy_proof"] += 1
        sp_rules.append(rule.to_string())
        if _engine.table_dictator(digits, sp) is not None:
            counts["dictatorial"] += 1
            dict_rules.append(rule.to_string())
    return counts, sp_rules, dict_rules, seen


def _census_chunk(args: tuple) -> tuple[dict, list[str], list[str], int]:
    n, m, lo, hi, filters = args
    sp = _engine.space(n, m)
    digits = _engine.digits_from_code(lo, sp.tops_count, m)

    def stream() -> Iterator[tuple[int, list[int]]]:
        for code in range(lo, hi):
            yield code, digits
            _engine.increment_digits(digits, m)

    return _census_pass(n, m, stream(), filters)


def _chunk_ranges(size: int, workers: int) -> list[tuple[int, int]]:
    workers = max(1, min(workers, size))
    step = size // workers
    bounds = [i * step for i in range(workers)] + [size]
    return [(bounds[i], bounds[i + 1]) for i in range(workers)]


def census(
    n: int,
    m: int,
    *,
    mode: str = "auto",
    samples: int | None = None,
    seed: int | None = None,
    workers: int = 1,
    filters: Sequence[str] = (),
    budget: int | None = None,
) -> CensusReport:
    """Count the axiom cascade over the tops-table rule space.

    In exhaustive mode the strategy-proof survivors are compared element-wise
    (in ascending rule-code order) with the dictatorships.  Pre-filters
    restrict the enumerated space before counting.  Sampled mode draws
    uniform rules from a seeded generator and is always single-process so
    identical seeds reproduce identical reports.
    """
    check_agent_count(n)
    check_alternative_count(m)
    ordered_filters = _ordered_filters(filters)
    resolved, eff_samples, eff_seed = _resolve_mode(
        rule_space_size(n, m), mode, samples, seed, DEFAULT_CENSUS_SAMPLES,
        f"census at (n={n}, m={m})", budget,
    )
    t0 = perf_counter()
    if resolved == "exhaustive":
        size = rule_space_size(n, m)
        chunks = [
            (n, m, lo, hi, ordered_filters) for lo, hi in _chunk_ranges(size, workers)
        ]
        parts = _map_chunks(_census_chunk, chunks, workers)
    else:
        parts = [
            _census_pass(
                n,
                m,
                _iter_rule_digits(n, m, "sampled", eff_samples, eff_seed),
                ordered_filters,
            )
        ]
    counts = {k: 0 for k in ("total", "unanimous", "efficient", "strategy_proof", "dictatorial")}
    sp_rules: list[str] = []
    dict_rules: list[str] = []
    for part_counts, part_sp, part_dict, _ in parts:
        for k in counts:
            counts[k] += part_counts[k]
        sp_rules.extend(part_sp)
        dict_rules.extend(part_dict)
    return CensusReport(
        n=n,
        m=m,
        mode=resolved,
        samples=eff_samples,
        seed=eff_seed,
        filters=ordered_filters,
        total=counts["total"],
        unanimous=counts["unanimous"],
        efficient=counts["efficient"],
        strategy_proof=counts["strategy_proof"],
        dictatorial=counts["dictatorial"],
        strategy_proof_rules=tuple(sp_rules),
        dictator_rules=tuple(dict_rules),
        sp_equals_dictators=sp_rules == dict_rules,
        elapsed_seconds=perf_counter() - t0,
    )


def _map_chunks(worker_fn, args_list: list, workers: int) -> list:
    if workers <= 1 or len(args_list) <= 1:
        return [worker_fn(a) for a in args_list]
    with multiprocessing.Pool(processes=min(workers, len(args_list))) as pool:
        return pool.map(worker_fn, args_list)


def census_rows(
    n: int, m: int, filters: Sequence[str] = (), budget: int | None = None
) -> Iterator[tuple[int, bool, bool, bool, bool, int, int]]:
    """Per-rule census detail, ascending rule code (exhaustive only).

    Yields (rule code, unanimous, efficient, strategy-proof, dictatorial,
    |M_f|, |D_f|); the strategy-proof column reports |M_f| = 0.
    """
    check_agent_count(n)
    check_alternative_count(m)
    size = _check_rule_space(n, m, budget)
    ordered = _ordered_filters(filters)
    sp = _engine.space(n, m)

    def gen() -> Iterator[tuple[int, bool, bool, bool, bool, int, int]]:
        digits = [0] * sp.tops_count
        for code in range(size):
            if all(_digit_filter(name, digits, sp, n, m) for name in ordered):
                d_mask, m_mask = _engine.cells_masks(digits, sp)
                m_count = m_mask.bit_count() * sp.cell_profile_count
                d_count = d_mask.bit_count() * sp.cell_profile_count
                yield (
                    code,
                    _engine.table_unanimous(digits, sp),
                    _engine.table_efficient_cells(digits, sp),
                    m_count == 0,
                    _engine.table_dictator(digits, sp) is not None,
                    m_count,
                    d_count,
                )
            _engine.increment_digits(digits, m)

    return gen()


# ---------------------------------------------------------------------------
# Verification suite.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    """Outcome of one suite check; failures carry a re-validatable counterexample."""

    lemma: str
    n: int
    m: int
    mode: str
    samples: int | None
    seed: int | None
    passed: bool
    checks: int
    counterexample: dict | None
    detail: dict = field(default_factory=dict)
    elapsed_seconds: float = 0.0

    def to_json_dict(self) -> dict:
        return {
            "lemma": self.lemma,
            "description": LEMMA_DESCRIPTIONS[self.lemma],
            "agents": self.n,
            "alternatives": self.m,
            "mode": self.mode,
            "samples": self.samples,
            "seed": self.seed,
            "passed": self.passed,
            "checks": self.checks,
            "counterexample": self.counterexample,
            "detail": self.detail,
        }


def _rule_string_from_digits(n: int, m: int, digits: Sequence[int]) -> str:
    return TopsTableRule(n, m, tuple(digits)).to_string()


def _verify_l1(n, m, mode, samples, seed, workers):
    """No unanimous, inefficient, strategy-proof rule may exist."""
    sp = _engine.space(n, m)
    checks = 0
    counterexample = None
    unanimous_seen = 0
    for _, digits in _iter_rule_digits(n, m, mode, samples, seed):
        if not _engine.table_unanimous(digits, sp):
            continue
        unanimous_seen += 1
        checks += 1
        if _engine.table_efficient_definitional(digits, sp):
            continue
        rule = TopsTableRule(n, m, tuple(digits))
        if find_manipulation(rule) is None:
            counterexample = {
                "kind": "strategy-proof unanimous rule that is not efficient",
                "rule": rule.to_string(),
            }
            break
    closed = 0
    if counterexample is None:
        for rule in _closed_form_library(n, m):
            checks += 1
            closed += 1
            if (
                is_strategy_proof(rule)
                and is_unanimous(rule)
                and not is_efficient(rule)
            ):
                counterexample = {
                    "kind": "strategy-proof unanimous rule that is not efficient",
                    "rule": rule.to_string(),
                }
                break
    detail = {"unanimous_rules": unanimous_seen, "closed_forms": closed}
    return counterexample is None, checks, counterexample, detail


def _verify_l3(n, m, mode, samples, seed, workers):
    """Pareto-efficient tops-table rules select some agent's top everywhere."""
    sp = _engine.space(n, m)
    checks = 0
    counterexample = None
    efficient_seen = 0
    for _, digits in _iter_rule_digits(n, m, mode, samples, seed):
        if not _engine.table_efficient_definitional(digits, sp):
            continue
        efficient_seen += 1
        checks += 1
        for tc in range(sp.tops_count):
            if not (sp.cell_tops_mask[tc] >> digits[tc]) & 1:
                counterexample = {
                    "kind": "efficient rule selecting nobody's top",
                    "rule": _rule_string_from_digits(n, m, digits),
                    "tops": list(sp.tops_tuples[tc]),
                    "outcome": digits[tc],
                }
                break
        if counterexample:
            break
    detail = {"efficient_rules": efficient_seen}
    return counterexample is None, checks, counterexample, detail


def _te_digit_stream(n, m, mode, samples, seed):
    """Unanimous and cell-efficient rule digits; sampled mode draws directly
    from the cell-efficient space."""
    sp = _engine.space(n, m)
    if mode == "exhaustive":
        for _, digits in _iter_rule_digits(n, m, "exhaustive", None, None):
            if _engine.table_unanimous(digits, sp) and _engine.table_efficient_cells(
                digits, sp
            ):
                yield digits
    else:
        rng = random.Random(seed)
        for _ in range(samples or 0):
            yield _sample_efficient_digits(rng, sp)


def _verify_l4(n, m, mode, samples, seed, workers):
    """Within tops-only efficient rules: every profile dictatorial iff dictatorial."""
    sp = _engine.space(n, m)
    checks = 0
    counterexample = None
    dictators = 0
    for digits in _te_digit_stream(n, m, mode, samples, seed):
        checks += 1
        d_count = sum(
            1 for _, _, d, _mnp in _engine.iter_profile_verdicts(digits, sp) if d
        )
        rule = TopsTableRule(n, m, tuple(digits))
        dict_agent = find_dictator(rule)
        if dict_agent is not None:
            dictators += 1
        if (d_count == sp.profile_count) != (dict_agent is not None):
            counterexample = {
                "kind": "all-profiles-dictatorial mismatch",
                "rule": rule.to_string(),
                "dictatorial_profiles": d_count,
                "profiles": sp.profile_count,
                "dictator": dict_agent,
            }
            break
    detail = {"dictators": dictators}
    return counterexample is None, checks, counterexample, detail


def _l5_rule_scan(digits, sp, n, m, checks: int) -> tuple[int, dict | None]:
    """Scan one rule: every profile exactly one verdict, constant per tops cell."""
    cell_verdicts: dict[int, tuple[bool, bool]] = {}
    for pc, tc, d, mnp in _engine.iter_profile_verdicts(digits, sp):
        checks += 1
        if d == mnp:
            return checks, {
                "kind": "profile not exactly one of dictatorial/manipulable",
                "rule": _rule_string_from_digits(n, m, digits),
                "profile": profile_from_code(pc, n, m).to_text(),
                "dictatorial": d,
                "manipulable": mnp,
            }
        seen = cell_verdicts.setdefault(tc, (d, mnp))
        if seen != (d, mnp):
            return checks, {
                "kind": "verdict not constant on a same-tops cell",
                "rule": _rule_string_from_digits(n, m, digits),
                "profile": profile_from_code(pc, n, m).to_text(),
                "dictatorial": d,
                "manipulable": mnp,
            }
    return checks, None


def _l5_chunk(args: tuple) -> tuple[int, dict | None]:
    n, m, lo, hi = args
    sp = _engine.space(n, m)
    digits = _engine.digits_from_code(lo, sp.tops_count, m)
    checks = 0
    counterexample = None
    for code in range(lo, hi):
        checks, counterexample = _l5_rule_scan(digits, sp, n, m, checks)
        if counterexample:
            break
        _engine.increment_digits(digits, m)
    return checks, counterexample


def _verify_l5(n, m, mode, samples, seed, workers):
    """Partition: per rule and profile, exactly one verdict holds."""
    sp = _engine.space(n, m)
    checks = 0
    counterexample = None
    rules_seen = 0
    if mode == "exhaustive":
        size = rule_space_size(n, m)
        chunks = [(n, m, lo, hi) for lo, hi in _chunk_ranges(size, workers)]
        for part_checks, part_cx in _map_chunks(_l5_chunk, chunks, workers):
            checks += part_checks
            if counterexample is None and part_cx is not None:
                counterexample = part_cx
        rules_seen = size
    else:
        for _, digits in _iter_rule_digits(n, m, "sampled", samples, seed):
            rules_seen += 1
            checks, counterexample = _l5_rule_scan(digits, sp, n, m, checks)
            if counterexample:
                break
    detail = {"rules": rules_seen, "profiles_per_rule": sp.profile_count}
    return counterexample is None, checks, counterexample, detail


def _verify_c1(n, m, mode, samples, seed, workers):
    """Strategy-proof unanimous rules are tops-only and efficient."""
    sp = _engine.space(n, m)
    checks = 0
    counterexample = None
    strategy_proof_seen = 0
    for _, digits in _iter_rule_digits(n, m, mode, samples, seed):
        if not _engine.table_unanimous(digits, sp):
            continue
        checks += 1
        rule = TopsTableRule(n, m, tuple(digits))
        if find_manipulation(rule) is not None:
            continue
        strategy_proof_seen += 1
        # tops-only holds by construction over this space
        if not _engine.table_efficient_definitional(digits, sp):
            counterexample = {
                "kind": "strategy-proof unanimous rule outside tops-only efficient",
                "rule": rule.to_string(),
            }
            break
    closed = 0
    if counterexample is None:
        for rule in _closed_form_library(n, m):
            checks += 1
            closed += 1
            if is_strategy_proof(rule) and is_unanimous(rule):
                strategy_proof_seen += 1
                if not (is_tops_only(rule) and is_efficient(rule)):
                    counterexample = {
                        "kind": "strategy-proof unanimous rule outside tops-only efficient",
                        "rule": rule.to_string(),
                    }
                    break
    detail = {"strategy_proof_unanimous": strategy_proof_seen, "closed_forms": closed}
    return counterexample is None, checks, counterexample, detail


def _table_counts(digits, sp) -> tuple[int, int]:
    d_mask, m_mask = _engine.cells_masks(digits, sp)
    return (
        m_mask.bit_count() * sp.cell_profile_count,
        d_mask.bit_count() * sp.cell_profile_count,
    )


def _verify_c2(n, m, mode, samples, seed, workers):
    """Duality of the orders: f >=_d g iff g >=_m f, over rule pairs."""
    sp = _engine.space(n, m)
    size = rule_space_size(n, m)
    checks = 0
    counterexample = None
    if mode == "exhaustive":
        tables = []
        for _, digits in _iter_rule_digits(n, m, "exhaustive", None, None):
            tables.append(_table_counts(digits, sp))
        pairs = ((f, g) for f in range(size) for g in range(size))
        rules_seen = size
    else:
        rng = random.Random(seed)
        cache: dict[int, tuple[int, int]] = {}

        def counts_of(code: int) -> tuple[int, int]:
            if code not in cache:
                digits = _engine.digits_from_code(code, sp.tops_count, m)
                cache[code] = _table_counts(digits, sp)
            return cache[code]

        pair_list = [
            (rng.randrange(size), rng.randrange(size)) for _ in range(samples or 0)
        ]
        tables = None
        pairs = iter(pair_list)
        rules_seen = None
    for f_code, g_code in pairs:
        if tables is not None:
            mf, df = tables[f_code]
            mg, dg = tables[g_code]
        else:
            mf, df = counts_of(f_code)
            mg, dg = counts_of(g_code)
        checks += 1
        if (df >= dg) != (mg >= mf):
            counterexample = {
                "kind": "duality violation",
                "f": _rule_string_from_digits(
                    n, m, _engine.digits_from_code(f_code, sp.tops_count, m)
                ),
                "g": _rule_string_from_digits(
                    n, m, _engine.digits_from_code(g_code, sp.tops_count, m)
                ),
                "m_f": mf,
                "d_f": df,
                "m_g": mg,
                "d_g": dg,
            }
            break
    if rules_seen is None:
        rules_seen = len({c for pair in pair_list for c in pair})
    detail = {"distinct_rules": rules_seen}
    return counterexample is None, checks, counterexample, detail


def _verify_r1(n, m, mode, samples, seed, workers):
    """Strategy-proof iff minimal in the manipulability order (iff M empty)."""
    sp = _engine.space(n, m)
    records = []

    def add(digits) -> None:
        m_count, _ = _table_counts(digits, sp)
        strategy_proof = find_manipulation(TopsTableRule(n, m, tuple(digits))) is None
        records.append((tuple(digits), m_count, strategy_proof))

    for _, digits in _iter_rule_digits(n, m, mode, samples, seed):
        add(digits)
    if mode == "sampled":
        # the full pool always contains the dictatorships; anchor the sample
        for table in sp.dictator_tables:
            add(list(table))
    min_m = min(r[1] for r in records)
    checks = 0
    counterexample = None
    for digits, m_count, strategy_proof in records:
        checks += 1
        if strategy_proof != (m_count == 0) or strategy_proof != (m_count == min_m):
            counterexample = {
                "kind": "minimality mismatch",
                "rule": _rule_string_from_digits(n, m, digits),
                "m_count": m_count,
                "min_m_count": min_m,
                "strategy_proof": strategy_proof,
            }
            break
    detail = {"min_m_count": min_m, "rules": len(records)}
    return counterexample is None, checks, counterexample, detail


def _verify_r2(n, m, mode, samples, seed, workers):
    """Dictatorial iff maximal in the dictatorial-power order over the
    tops-only efficient pool (iff every profile is dictatorial)."""
    sp = _engine.space(n, m)
    records = []

    def add(digits) -> None:
        _, d_count = _table_counts(digits, sp)
        rule = TopsTableRule(n, m, tuple(digits))
        records.append((rule, d_count, find_dictator(rule) is not None))

    for digits in _te_digit_stream(n, m, mode, samples, seed):
        add(digits)
    if mode == "sampled":
        # the pool always contains the dictatorships; anchor the sample
        for table in sp.dictator_tables:
            add(list(table))
    max_d = max(r[1] for r in records)
    checks = 0
    counterexample = None
    for rule, d_count, dictatorial in records:
        checks += 1
        if dictatorial != (d_count == max_d) or dictatorial != (
            d_count == sp.profile_count
        ):
            counterexample = {
                "kind": "maximality mismatch",
                "rule": rule.to_string(),
                "d_count": d_count,
                "max_d_count": max_d,
                "profiles": sp.profile_count,
                "dictatorial": dictatorial,
            }
            break
    detail = {"pool": len(records), "max_d_count": max_d}
    return counterexample is None, checks, counterexample, detail


def _verify_thm(n, m, mode, samples, seed, workers):
    """Strategy-proof unanimous tops-table rules are exactly the dictatorships."""
    report = census(n, m, mode=mode, samples=samples, seed=seed, workers=workers)
    passed = report.sp_equals_dictators
    counterexample = None
    if not passed:
        extra = [
            r for r in report.strategy_proof_rules if r not in report.dictator_rules
        ]
        # prefer a recognizable counterexample (the majority control) when present
        chosen = next(
            (r for r in extra if _known_equivalent(parse_rule(r, n, m)) is not None),
            extra[0],
        )
        rule = parse_rule(chosen, n, m)
        counterexample = {
            "kind": "strategy-proof unanimous efficient rule with no dictator",
            "rule": chosen,
            "equals": _known_equivalent(rule),
            "certificate": {
                "unanimous": is_unanimous(rule),
                "tops_only": is_tops_only(rule),
                "efficient": is_efficient(rule),
                "strategy_proof": is_strategy_proof(rule),
                "dictator": find_dictator(rule),
            },
        }
    detail = {
        "counts": {
            "total": report.total,
            "unanimous": report.unanimous,
            "efficient": report.efficient,
            "strategy_proof": report.strategy_proof,
            "dictatorial": report.dictatorial,
        }
    }
    return passed, report.total, counterexample, detail


def _known_equivalent(rule: Rule) -> str | None:
    """Closed-form name of the rule if it matches one, else None."""
    for candidate in _closed_form_library(rule.n, rule.m):
        if not candidate.tops_only_by_construction:
            continue
        if as_tops_table(candidate).outcomes == as_tops_table(rule).outcomes:
            return candidate.to_string()
    return None


def _closed_form_library(n: int, m: int) -> list[Rule]:
    rules: list[Rule] = [DictatorRule(n, m, i) for i in range(n)]
    rules.extend(ConstantRule(n, m, x) for x in range(m))
    rules.append(BordaLexRule(n, m))
    if m == 2:
        rules.append(MajorityLexRule(n))
    return rules


_LEMMA_IMPLS = {
    "L1": _verify_l1,
    "L3": _verify_l3,
    "L4": _verify_l4,
    "L5": _verify_l5,
    "C1": _verify_c1,
    "C2": _verify_c2,
    "R1": _verify_r1,
    "R2": _verify_r2,
    "THM": _verify_thm,
}


def verify_lemma(
    lemma: str,
    n: int,
    m: int,
    *,
    mode: str = "auto",
    samples: int | None = None,
    seed: int | None = None,
    workers: int = 1,
    budget: int | None = None,
) -> VerificationReport:
    """Run one suite check and report pass/fail with any counterexample.

    ``mode="auto"`` runs exhaustively when the rule space (or, for C2, the
    pair space) fits the budget and falls back to seeded sampling otherwise.
    """
    lemma = lemma.upper()
    if lemma not in _LEMMA_IMPLS:
        known = ", ".join(sorted(_LEMMA_IMPLS))
        raise UnknownLemmaError(f"unknown check id {lemma!r}; known ids: {known}")
    check_agent_count(n)
    check_alternative_count(m)
    size = rule_space_size(n, m)
    required = size * size if lemma == "C2" else size
    resolved, eff_samples, eff_seed = _resolve_mode(
        required, mode, samples, seed, _DEFAULT_SAMPLES[lemma],
        f"{lemma} at (n={n}, m={m})", budget,
    )
    t0 = perf_counter()
    passed, checks, counterexample, detail = _LEMMA_IMPLS[lemma](
        n, m, resolved, eff_samples, eff_seed, workers
    )
    return VerificationReport(
        lemma=lemma,
        n=n,
        m=m,
        mode=resolved,
        samples=eff_samples,
        seed=eff_seed,
        passed=passed,
        checks=checks,
        counterexample=counterexample,
        detail=detail,
        elapsed_seconds=perf_counter() - t0,
    )


# ---------------------------------------------------------------------------
# Two-alternative negative control.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CounterexampleCertificate:
    """Machine-checked properties of the two-alternative majority rule."""

    rule: MajorityLexRule
    unanimous: bool
    strategy_proof: bool
    tops_only: bool
    efficient: bool
    dictator: int | None

    @property
    def valid(self) -> bool:
        return (
            self.unanimous
            and self.strategy_proof
            and self.tops_only
            and self.efficient
            and self.dictator is None
        )

    def to_json_dict(self) -> dict:
        return {
            "rule": self.rule.to_string(),
            "unanimous": self.unanimous,
            "strategy_proof": self.strategy_proof,
            "tops_only": self.tops_only,
            "efficient": self.efficient,
            "dictator": self.dictator,
            "valid": self.valid,
        }


def majority_counterexample(n: int = 3) -> CounterexampleCertificate:
    """Certify majority at m=2 as unanimous, strategy-proof, tops-only,
    efficient, and non-dictatorial; shows two alternatives are not enough
    for the dictatorship conclusion."""
    rule = MajorityLexRule(n)
    return CounterexampleCertificate(
        rule=rule,
        unanimous=is_unanimous(rule),
        strategy_proof=is_strategy_proof(rule),
        tops_only=is_tops_only(rule),
        efficient=is_efficient(rule),
        dictator=find_dictator(rule),
    )
