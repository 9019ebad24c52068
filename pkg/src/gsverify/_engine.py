"""Integer-coded fast paths over one (n, m) profile space.

Everything here works on plain ints: preference rank codes, mixed-radix
profile codes (agent 0 most significant), tops codes over the m**n tops
cells, and tops-table rules as outcome tuples indexed by tops code.  The
object layer in ``prefs``/``rules`` stays definitional and readable; these
tables keep exhaustive rule-space scans fast.
"""

from __future__ import annotations

import math
from functools import lru_cache
from itertools import permutations, product
from typing import Iterator, Sequence

Table = Sequence[int]


class Space:
    """Precomputed lookup tables for a fixed (n, m) profile space."""

    __slots__ = (
        "n",
        "m",
        "fact",
        "rankings",
        "top_of",
        "position",
        "prefs_with_top",
        "profile_count",
        "tops_count",
        "tops_tuples",
        "tops_weights",
        "profile_weights",
        "cell_profile_count",
        "unanimous_cells",
        "cell_tops_mask",
        "cell_tops_sets",
        "dictator_tables",
    )

    def __init__(self, n: int, m: int):
        self.n = n
        self.m = m
        self.rankings = tuple(permutations(range(m)))
        self.fact = len(self.rankings)
        self.top_of = tuple(r[0] for r in self.rankings)
        position = []
        for r in self.rankings:
            row = [0] * m
            for depth, x in enumerate(r):
                row[x] = depth
            position.append(tuple(row))
        self.position = tuple(position)
        self.prefs_with_top = tuple(
            tuple(p for p in range(self.fact) if self.top_of[p] == x) for x in range(m)
        )
        self.profile_count = self.fact**n
        self.tops_count = m**n
        self.tops_tuples = tuple(product(range(m), repeat=n))
        self.tops_weights = tuple(m ** (n - 1 - i) for i in range(n))
        self.profile_weights = tuple(self.fact ** (n - 1 - i) for i in range(n))
        self.cell_profile_count = math.factorial(m - 1) ** n
        self.unanimous_cells = tuple(
            (tc, t[0]) for tc, t in enumerate(self.tops_tuples) if len(set(t)) == 1
        )
        self.cell_tops_mask = tuple(
            self._mask(t) for t in self.tops_tuples
        )
        self.cell_tops_sets = tuple(tuple(sorted(set(t))) for t in self.tops_tuples)
        self.dictator_tables = tuple(
            tuple(t[i] for t in self.tops_tuples) for i in range(n)
        )

    @staticmethod
    def _mask(tops: tuple[int, ...]) -> int:
        mask = 0
        for t in tops:
            mask |= 1 << t
        return mask

    def pref_codes_of(self, profile_code: int) -> tuple[int, ...]:
        codes = []
        rest = profile_code
        for _ in range(self.n):
            rest, r = divmod(rest, self.fact)
            codes.append(r)
        codes.reverse()
        return tuple(codes)

    def profile_code_of(self, pref_codes: Sequence[int]) -> int:
        code = 0
        for p in pref_codes:
            code = code * self.fact + p
        return code

    def tops_code_of(self, pref_codes: Sequence[int]) -> int:
        code = 0
        for p in pref_codes:
            code = code * self.m + self.top_of[p]
        return code


@lru_cache(maxsize=None)
def space(n: int, m: int) -> Space:
    return Space(n, m)


# ---------------------------------------------------------------------------
# Per-profile verdicts, definitional path.
# ---------------------------------------------------------------------------


def profile_verdicts(
    table: Table, sp: Space, pref_codes: Sequence[int], tc: int
) -> tuple[bool, bool]:
    """(dictatorial, manipulable) for one profile of a tops-table rule.

    Raw quantifiers: misreports range over all m! preferences, stand-ins
    over every preference with the agent's top.
    """
    out = table[tc]
    top_of = sp.top_of
    position = sp.position
    weights = sp.tops_weights
    dictatorial = True
    manipulable = False
    for i in range(sp.n):
        ti = top_of[pref_codes[i]]
        if ti == out:
            continue
        w = weights[i]
        base = tc - ti * w
        achievable = set()
        for q in range(sp.fact):
            y = table[base + top_of[q] * w]
            if y != out:
                achievable.add(y)
        if achievable:
            dictatorial = False
            if not manipulable:
                for pstar in sp.prefs_with_top[ti]:
                    pos = position[pstar]
                    out_rank = pos[out]
                    if any(pos[y] < out_rank for y in achievable):
                        manipulable = True
                        break
            if manipulable:
                break
    return dictatorial, manipulable


def iter_profile_verdicts(
    table: Table, sp: Space
) -> Iterator[tuple[int, int, bool, bool]]:
    """Yield (profile_code, tops_code, dictatorial, manipulable) over the space."""
    for pc, pref_codes in enumerate(product(range(sp.fact), repeat=sp.n)):
        tc = sp.tops_code_of(pref_codes)
        d, mnp = profile_verdicts(table, sp, pref_codes, tc)
        yield pc, tc, d, mnp


# ---------------------------------------------------------------------------
# Per-cell verdicts (constant across same-tops profiles for tops-table rules).
# ---------------------------------------------------------------------------


def cell_is_dictatorial(table: Table, sp: Space, tc: int) -> bool:
    tops = sp.tops_tuples[tc]
    out = table[tc]
    for i in range(sp.n):
        ti = tops[i]
        if ti == out:
            continue
        w = sp.tops_weights[i]
        base = tc - ti * w
        for x in range(sp.m):
            if table[base + x * w] != out:
                return False
    return True


def cells_masks(table: Table, sp: Space) -> tuple[int, int]:
    """(dictatorial, manipulable) cell bitmasks over tops codes."""
    d_mask = 0
    m_mask = 0
    for tc in range(sp.tops_count):
        if cell_is_dictatorial(table, sp, tc):
            d_mask |= 1 << tc
        else:
            m_mask |= 1 << tc
    return d_mask, m_mask


def expand_cells_to_profiles(sp: Space, cells_mask: int) -> int:
    """Bitset over profile codes covering every profile in the masked cells."""
    bits = 0
    for tc in range(sp.tops_count):
        if not (cells_mask >> tc) & 1:
            continue
        tops = sp.tops_tuples[tc]
        for combo in product(*(sp.prefs_with_top[t] for t in tops)):
            bits |= 1 << sp.profile_code_of(combo)
    return bits


# ---------------------------------------------------------------------------
# Whole-rule predicates on outcome tables.
# ---------------------------------------------------------------------------


def table_unanimous(table: Table, sp: Space) -> bool:
    return all(table[tc] == x for tc, x in sp.unanimous_cells)


def table_efficient_cells(table: Table, sp: Space) -> bool:
    """Tops-level criterion: every cell selects one of its agents' tops."""
    masks = sp.cell_tops_mask
    return all((masks[tc] >> table[tc]) & 1 for tc in range(sp.tops_count))


def table_efficient_definitional(table: Table, sp: Space) -> bool:
    """Pareto check over every profile: no alternative beats the outcome
    in every agent's ranking."""
    position = sp.position
    m = sp.m
    for pref_codes in product(range(sp.fact), repeat=sp.n):
        out = table[sp.tops_code_of(pref_codes)]
        for x in range(m):
            if x == out:
                continue
            if all(position[p][x] < position[p][out] for p in pref_codes):
                return False
    return True


def table_dictator(table: Table, sp: Space) -> int | None:
    for i, dict_table in enumerate(sp.dictator_tables):
        if tuple(table) == dict_table:
            return i
    return None


# ---------------------------------------------------------------------------
# Rule-code digit arithmetic (tops tables as base-m digit strings).
# ---------------------------------------------------------------------------


def digits_from_code(code: int, cells: int, m: int) -> list[int]:
    digits = [0] * cells
    rest = code
    for i in range(cells - 1, -1, -1):
        rest, digits[i] = divmod(rest, m)
    return digits


def code_from_digits(digits: Sequence[int], m: int) -> int:
    code = 0
    for d in digits:
        code = code * m + d
    return code


def increment_digits(digits: list[int], m: int) -> None:
    """Odometer step; wraps to all zeros after the last code."""
    i = len(digits) - 1
    while i >= 0:
        digits[i] += 1
        if digits[i] < m:
            return
        digits[i] = 0
        i -= 1
