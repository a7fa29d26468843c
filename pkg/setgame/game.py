"""Outcome of the membership game on hereditarily finite sets.

Two players alternately pick an element of the previous pick, starting inside
a given set; whoever picks the empty set wins, since the adversary cannot
move. Every well-founded position is won by one of the players, and the
winning index w is the least level of the winning hierarchy holding it.
"""

import enum
import functools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from setgame.exceptions import BoundExceededError, DomainError
from setgame.hf import (
    EMPTY,
    HFSet,
    as_hfset,
    check_code,
    elements,
    level_table
)
from setgame.settings import settings


logger = logging.getLogger(__name__)


class Player(enum.Enum):
    I = 'I'  # noqa: E741
    II = 'II'


@dataclass(frozen=True)
class Classification:
    """Winner and winning index of a position.

    The first player wins exactly at odd indices, and w = 0 only for the
    empty set.
    """

    winner: Player
    w: int

    def __post_init__(self):
        expected = Player.I if self.w % 2 else Player.II
        if self.winner is not expected:
            raise ValueError(
                'winner {winner} does not match index {w}'.format(
                    winner=self.winner.value,
                    w=self.w,
                )
            )

    def __str__(self):
        return 'winner={winner} w={w}'.format(
            winner=self.winner.value,
            w=self.w,
        )

    @classmethod
    def from_index(cls, w):
        return cls(winner=Player.I if w % 2 else Player.II, w=w)


def index_from_children(ws):
    """Returns the winning index of a set from the indices of its elements.

    Some element with an even index makes the set first-player winning, at
    one past the least such index; otherwise every element is odd and the set
    sits one past the largest of them.
    """

    ws = list(ws)
    even = [w for w in ws if w % 2 == 0]

    if even:
        return 1 + min(even)
    return 1 + max(ws, default=-1)


@functools.lru_cache(maxsize=1 << 16)
def _index_of_code(code):
    return index_from_children(_index_of_code(e) for e in elements(code))


def _index_of_set(value):
    """Computes w bottom-up over the transitive closure of value."""

    memo = {}
    stack = [value]

    while stack:
        s = stack[-1]
        if s in memo:
            stack.pop()
            continue

        missing = [m for m in s.members if m not in memo]
        if missing:
            stack.extend(missing)
        else:
            memo[s] = index_from_children(memo[m] for m in s.members)
            stack.pop()

    return memo[value]


def classify(x):
    """Classifies a set code or an HFSet."""

    if isinstance(x, HFSet):
        w = _index_of_set(x)
    else:
        w = _index_of_code(check_code(x))
    return Classification.from_index(w)


class LevelClassification(object):
    """Winning indices of every code of V_m, indexed by code.

    Args:
        m: the rank of the level.
        indices: tuple whose entry c is w(c).

    """

    def __init__(self, m, indices):
        self.m = m
        self.indices = tuple(indices)

    def __len__(self):
        return len(self.indices)

    def __iter__(self):
        for code, w in enumerate(self.indices):
            yield code, Classification.from_index(w)

    def __eq__(self, other):
        if not isinstance(other, LevelClassification):
            return NotImplemented
        return self.m == other.m and self.indices == other.indices

    def w(self, code):
        return self.indices[code]

    def classification(self, code):
        return Classification.from_index(self.indices[code])

    def index_of(self, code):
        """Returns w of any set whose elements all lie in this level.

        The code itself may be far past the level, as for the set of all
        codes of V_m holding a given index.
        """

        return index_from_children(self.indices[e] for e in elements(code))

    def realized(self):
        return set(self.indices)

    def counts(self):
        result = {}
        for w in self.indices:
            result[w] = result.get(w, 0) + 1
        return dict(sorted(result.items()))


def _chunk_indices(known, codes):
    return [
        index_from_children(known[e] for e in elements(code))
        for code in codes
    ]


def classify_level(m, cap=None, threads=None):
    """Classifies every code of V_m.

    Codes of rank r only have elements below |V_r|, so each rank layer is
    split into chunks evaluated independently; the result does not depend on
    the thread count.
    """

    level_table(m, cap=cap)
    threads = settings.threads if threads is None else threads
    indices = []
    start = 0

    for layer in range(m):
        stop = 1 << start
        layer_codes = range(start, stop)

        if threads > 1 and len(layer_codes) > threads:
            size = -(-len(layer_codes) // threads)
            chunks = [
                layer_codes[i:i + size]
                for i in range(0, len(layer_codes), size)
            ]
            known = tuple(indices)
            with ThreadPoolExecutor(max_workers=threads) as pool:
                for part in pool.map(
                        lambda chunk: _chunk_indices(known, chunk), chunks):
                    indices.extend(part)
        else:
            indices.extend(_chunk_indices(indices, layer_codes))

        logger.debug(
            'classified rank-%d layer of V_%d (%d codes)',
            layer, m, len(layer_codes),
        )
        start = stop

    return LevelClassification(m, indices)


def witness(n, bound=None):
    """Returns a set with winning index exactly n.

    z_0 is empty, z_(2k+1) = {z_(2k)} and z_(2k) = {z_(2j+1) : j < k}.
    """

    bound = settings.witness_bound if bound is None else bound

    if n < 0:
        raise DomainError('witness index must be natural, got {}'.format(n))
    if n > bound:
        raise BoundExceededError(
            'witness index {n} is past the bound of {bound}'.format(
                n=n,
                bound=bound,
            )
        )

    chain = [EMPTY]
    for i in range(1, n + 1):
        if i % 2:
            chain.append(HFSet([chain[i - 1]]))
        else:
            chain.append(HFSet(chain[1:i:2]))

    return chain[n]


def optimal_move(x):
    """Returns the engine's choice of element for the player to move.

    A mover who can win picks the element with the least even index; a doomed
    mover stalls on the element with the largest index. Ties go to the
    smallest code.
    """

    x = as_hfset(x)

    if not x:
        raise DomainError('mover has lost: the position is empty')

    scored = [(classify(y).w, y) for y in x]
    winning = [(w, y) for w, y in scored if w % 2 == 0]

    if winning:
        return min(winning, key=lambda item: item[0])[1]

    best = max(w for w, _ in scored)
    return next(y for w, y in scored if w == best)
