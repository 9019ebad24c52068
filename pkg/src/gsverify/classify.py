"""Per-profile classification into manipulable or dictatorial, and the two orders.

A profile is dictatorial for a rule when no agent whose top was not selected
can move the outcome by any unilateral misreport.  A profile is manipulable
for a tops-only rule when some agent, after swapping to a preference with the
same top, can manipulate at the swapped profile.  For tops-only rules every
profile is exactly one of the two; the census layer verifies that partition
exhaustively rather than assuming it.

Rules compare by cardinality: ``f`` is at least as manipulable as ``g`` when
``|M_f| >= |M_g|`` and at least as dictatorial when ``|D_f| >= |D_g|``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

from . import _engine
from .errors import DimensionMismatchError
from .prefs import (
    Preference,
    Profile,
    check_agent_count,
    check_alternative_count,
    enumerate_preferences,
    enumerate_profiles,
    preferences_with_top,
)
from .rules import (
    ManipulationWitness,
    Rule,
    as_tops_table,
    find_dictator,
    is_efficient,
    is_strategy_proof,
    require_tops_only,
)


class Verdict(enum.Enum):
    DICTATORIAL = "dictatorial"
    MANIPULABLE = "manipulable"


@dataclass(frozen=True)
class ProfileClassification:
    """One profile's verdict with supporting evidence.

    ``witness`` is present exactly for manipulable profiles; ``violator`` is
    the (agent, misreport) pair that shows the profile is not dictatorial.
    """

    profile: Profile
    verdict: Verdict
    witness: ManipulationWitness | None
    violator: tuple[int, Preference] | None

    def __post_init__(self) -> None:
        if (self.verdict is Verdict.MANIPULABLE) != (self.witness is not None):
            raise ValueError("manipulable verdicts carry a witness, others do not")
        if self.verdict is Verdict.DICTATORIAL and self.violator is not None:
            raise ValueError("dictatorial verdicts carry no violator")


@dataclass(frozen=True)
class ClassificationSummary:
    """Counts (and optionally bitsets) of manipulable and dictatorial profiles."""

    rule: str
    n: int
    m: int
    m_count: int
    d_count: int
    total: int
    unanimous: bool
    m_set: int | None = None
    d_set: int | None = None


def _check_caps(rule: Rule) -> None:
    check_agent_count(rule.n)
    check_alternative_count(rule.m)


def find_dictatorial_violation(
    rule: Rule, profile: Profile
) -> tuple[int, Preference] | None:
    """First (agent, misreport) moving the outcome for a non-top-winning agent.

    Defined for any rule; ``None`` means the profile is dictatorial.
    """
    _check_caps(rule)
    out = rule.evaluate(profile)
    misreports = enumerate_preferences(profile.m)
    for i in range(profile.n):
        if profile.prefs[i].top == out:
            continue
        for q in misreports:
            if rule.evaluate(profile.with_replaced(i, q)) != out:
                return i, q
    return None


def is_dictatorial_profile(rule: Rule, profile: Profile) -> bool:
    return find_dictatorial_violation(rule, profile) is None


def find_profile_manipulation(
    rule: Rule, profile: Profile
) -> ManipulationWitness | None:
    """A manipulation at a same-top variant of the profile, if one exists.

    Only defined for tops-only rules; the witness profile is the varied
    profile where the stand-in preference replaced the agent's own.
    """
    _check_caps(rule)
    require_tops_only(rule)
    misreports = enumerate_preferences(profile.m)
    for i in range(profile.n):
        ti = profile.prefs[i].top
        for stand_in in preferences_with_top(profile.m, ti):
            varied = profile.with_replaced(i, stand_in)
            sincere = rule.evaluate(varied)
            for q in misreports:
                alt = rule.evaluate(varied.with_replaced(i, q))
                if stand_in.prefers(alt, sincere):
                    return ManipulationWitness(varied, i, q, sincere, alt)
    return None


def is_manipulable_profile(rule: Rule, profile: Profile) -> bool:
    return find_profile_manipulation(rule, profile) is not None


def classify_profile(rule: Rule, profile: Profile) -> ProfileClassification:
    """The verdict for one profile under a tops-only rule, with evidence."""
    require_tops_only(rule)
    violator = find_dictatorial_violation(rule, profile)
    if violator is None:
        return ProfileClassification(profile, Verdict.DICTATORIAL, None, None)
    witness = find_profile_manipulation(rule, profile)
    if witness is None:
        raise RuntimeError(
            "profile is neither dictatorial nor manipulable; "
            "this cannot happen for a tops-only rule"
        )
    return ProfileClassification(profile, Verdict.MANIPULABLE, witness, violator)


def classify_all(
    rule: Rule, *, materialize_sets: bool = False, method: str = "cells"
) -> ClassificationSummary:
    """Classify every profile and summarize the counts.

    ``method="cells"`` exploits that both verdicts are constant on each
    same-tops cell of the profile space; ``method="scan"`` runs the
    definitional per-profile checks instead.  Both must agree and the test
    suite compares them.
    """
    _check_caps(rule)
    table = as_tops_table(rule).outcomes
    sp = _engine.space(rule.n, rule.m)
    if method == "cells":
        d_mask, m_mask = _engine.cells_masks(table, sp)
        d_count = d_mask.bit_count() * sp.cell_profile_count
        m_count = m_mask.bit_count() * sp.cell_profile_count
        d_set = m_set = None
        if materialize_sets:
            d_set = _engine.expand_cells_to_profiles(sp, d_mask)
            m_set = _engine.expand_cells_to_profiles(sp, m_mask)
    elif method == "scan":
        d_count = m_count = 0
        d_set = m_set = 0
        for pc, _tc, dictatorial, manipulable in _engine.iter_profile_verdicts(table, sp):
            if dictatorial == manipulable:
                raise RuntimeError(
                    f"profile code {pc} is not exactly one of "
                    "dictatorial/manipulable; rule is not tops-only"
                )
            if dictatorial:
                d_count += 1
                d_set |= 1 << pc
            else:
                m_count += 1
                m_set |= 1 << pc
        if not materialize_sets:
            d_set = m_set = None
    else:
        raise ValueError(f"unknown classification method {method!r}")
    return ClassificationSummary(
        rule=rule.to_string(),
        n=rule.n,
        m=rule.m,
        m_count=m_count,
        d_count=d_count,
        total=sp.profile_count,
        unanimous=_engine.table_unanimous(table, sp),
        m_set=m_set,
        d_set=d_set,
    )


def manipulable_profile_count(rule: Rule) -> int:
    """|M_f| for a tops-only rule."""
    return classify_all(rule).m_count


def dictatorial_profile_count(rule: Rule) -> int:
    """|D_f| for any rule, by the definitional per-profile check."""
    _check_caps(rule)
    if rule.tops_only_by_construction:
        return classify_all(rule).d_count
    return sum(
        1
        for profile in enumerate_profiles(rule.n, rule.m)
        if find_dictatorial_violation(rule, profile) is None
    )


def _check_same_dims(f: Rule, g: Rule) -> None:
    if (f.n, f.m) != (g.n, g.m):
        raise DimensionMismatchError(
            f"cannot compare (n={f.n}, m={f.m}) with (n={g.n}, m={g.m})"
        )


def at_least_as_manipulable(f: Rule, g: Rule) -> bool:
    """|M_f| >= |M_g|; both rules must be tops-only."""
    _check_same_dims(f, g)
    return manipulable_profile_count(f) >= manipulable_profile_count(g)


def at_least_as_dictatorial(f: Rule, g: Rule) -> bool:
    """|D_f| >= |D_g|; defined for arbitrary rules."""
    _check_same_dims(f, g)
    return dictatorial_profile_count(f) >= dictatorial_profile_count(g)


def check_duality(f: Rule, g: Rule) -> bool:
    """Whether (f at least as dictatorial as g) iff (g at least as manipulable as f).

    Holds for every pair of tops-only rules; exposed as a checkable oracle.
    """
    _check_same_dims(f, g)
    return at_least_as_dictatorial(f, g) == at_least_as_manipulable(g, f)


def remark_strategyproof_minimal(f: Rule, pool: Iterable[Rule]) -> bool:
    """Check that f is strategy-proof iff every pool rule is at least as
    manipulable as f, and iff |M_f| = 0."""
    mf = manipulable_profile_count(f)
    sp = is_strategy_proof(f)
    pool_side = all(manipulable_profile_count(g) >= mf for g in pool)
    return sp == pool_side and sp == (mf == 0)


def remark_dictatorial_maximal(f: Rule, pool: Iterable[Rule]) -> bool:
    """Check that a tops-only efficient f is dictatorial iff it is at least as
    dictatorial as every pool rule, and iff every profile is dictatorial for it."""
    require_tops_only(f)
    if not is_efficient(f):
        raise ValueError(
            f"rule {f.to_string()} is not efficient; "
            "the maximality characterization needs tops-only efficient rules"
        )
    df = dictatorial_profile_count(f)
    total = math.factorial(f.m) ** f.n
    dictatorial = find_dictator(f) is not None
    pool_side = all(df >= dictatorial_profile_count(g) for g in pool)
    return dictatorial == pool_side and dictatorial == (df == total)


# ---------------------------------------------------------------------------
# Bitsets over profile codes.
# ---------------------------------------------------------------------------


def bitset_codes(bits: int) -> list[int]:
    """Ascending profile codes present in a bitset."""
    codes = []
    pc = 0
    while bits:
        if bits & 1:
            codes.append(pc)
        bits >>= 1
        pc += 1
    return codes


def bitset_to_hex(bits: int, total: int) -> str:
    """Fixed-width hex form of a profile-code bitset (bit i = code i)."""
    width = max(1, (total + 3) // 4)
    return format(bits, f"0{width}x")


def hex_to_bitset(text: str) -> int:
    return int(text, 16)
