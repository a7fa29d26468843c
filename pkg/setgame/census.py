"""Exact counts |S_(m,nu)| and exact ratios |S_(m,nu)| / |V_m|.

Counts come either from classifying every code of V_m (brute) or from the
level recurrences over the count vectors alone (formula), which reaches one
rank further. Everything is big-integer or Fraction arithmetic.
"""

import csv
import json
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from setgame.exceptions import InfeasibleError
from setgame.game import classify_level
from setgame.hf import level_size
from setgame.settings import settings
from setgame.utils import decimal


logger = logging.getLogger(__name__)

BRUTE = 'brute'
FORMULA = 'formula'
METHODS = (BRUTE, FORMULA)

CSV_FIELDS = ('m', 'nu', 'count', 'ratio_num', 'ratio_den')

# limit of the ratio at nu; every other index tends to zero
LIMITS = {1: Fraction(1, 2), 3: Fraction(1, 2)}


@dataclass(frozen=True)
class CensusTable:
    """Counts |S_(m,nu)| of one level. Tables compare by counts only."""

    m: int
    counts: dict
    method: str = field(default=FORMULA, compare=False)

    @property
    def total(self):
        return sum(self.counts.values())

    def count(self, nu):
        return self.counts.get(nu, 0)

    def to_dict(self):
        return {
            'm': self.m,
            'method': self.method,
            'counts': {
                str(nu): decimal(count) for nu, count in self.counts.items()
            },
        }


@dataclass(frozen=True)
class RatioTable:
    """Exact ratios |S_(m,nu)| / |V_m| of one level."""

    m: int
    ratios: dict

    def ratio(self, nu):
        return self.ratios.get(nu, Fraction(0))

    def distance(self, nu):
        """Distance of the ratio at nu from its limit as m grows."""

        return abs(self.ratio(nu) - LIMITS.get(nu, Fraction(0)))

    def distances(self):
        return {nu: self.distance(nu) for nu in self.ratios}

    def to_dict(self):
        return {
            'm': self.m,
            'ratios': {
                str(nu): _fraction_dict(r) for nu, r in self.ratios.items()
            },
            'distances': {
                str(nu): _fraction_dict(d)
                for nu, d in self.distances().items()
            },
        }


def _fraction_dict(value):
    return {
        'num': decimal(value.numerator),
        'den': decimal(value.denominator),
    }


def _check_formula_range(m, cap):
    cap = settings.count_cap if cap is None else cap

    if not 1 <= m <= cap:
        raise InfeasibleError(
            'the recurrences need 1 <= m <= {cap}, got m={m}'.format(
                cap=cap,
                m=m,
            )
        )


def census_brute(m, cap=None):
    """Counts each index over a full classification of V_m."""

    level = classify_level(m, cap=cap)
    return CensusTable(m=m, counts=level.counts(), method=BRUTE)


def next_level_counts(counts, size):
    """Applies the level recurrences.

    Args:
        counts: list whose entry nu is |S_(m,nu)|, for nu < m.
        size: |V_m|.

    Returns the list of |S_(m+1,nu)| for nu <= m.
    """

    m = len(counts)

    def at(nu):
        return counts[nu] if nu < m else 0

    result = [1]
    for nu in range(1, m + 1):
        k = (nu - 1) // 2
        if nu % 2:
            below = sum(at(2 * j) for j in range(k))
            result.append(
                (1 << (size - below)) - (1 << (size - below - at(2 * k)))
            )
        else:
            below = sum(at(2 * j + 1) for j in range(k))
            result.append(
                (1 << (below + at(2 * k + 1))) - (1 << below)
            )

    return result


def census_formula(m, cap=None):
    """Counts each index of V_m by the level recurrences.

    The base level V_1 = {0} holds the single 0-winning set; the recurrence
    only ever applies to indices below the next rank.
    """

    _check_formula_range(m, cap)

    counts = [1]
    for rank in range(1, m):
        counts = next_level_counts(counts, level_size(rank))
        logger.debug('formula counts reached V_%d', rank + 1)

    return CensusTable(m=m, counts=dict(enumerate(counts)), method=FORMULA)


def prob_table(m, cap=None):
    """Returns the exact ratios |S_(m,nu)| / |V_m| for every nu < m."""

    table = census_formula(m, cap=cap)
    size = level_size(m)

    return RatioTable(
        m=m,
        ratios={
            nu: Fraction(count, size) for nu, count in table.counts.items()
        },
    )


def census_rows(table):
    """Yields CSV rows of a census table."""

    size = level_size(table.m)

    for nu, count in table.counts.items():
        ratio = Fraction(count, size) if size else Fraction(0)
        yield {
            'm': table.m,
            'nu': nu,
            'count': decimal(count),
            'ratio_num': decimal(ratio.numerator),
            'ratio_den': decimal(ratio.denominator),
        }


def write_csv(tables, stream):
    writer = csv.DictWriter(stream, fieldnames=CSV_FIELDS, lineterminator='\n')
    writer.writeheader()
    for table in tables:
        writer.writerows(census_rows(table))


def write_json(tables, stream):
    json.dump([t.to_dict() for t in tables], stream, indent=2)
    stream.write('\n')
