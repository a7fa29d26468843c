"""Hereditarily finite sets.

Two interchangeable representations are used throughout the package:

* a *set code*, the natural number of the Ackermann coding, where bit ``i``
  is set iff the set coded by ``i`` is an element. Levels of the cumulative
  hierarchy are initial segments of the code order: V_m is exactly the code
  interval ``[0, level_size(m))``.
* an :class:`HFSet`, an immutable and hash-consed nested value. Equal sets
  are the same object, so substructure is shared and witnesses whose codes
  are far too large to write down stay small.

"""

import functools
import logging
import weakref
from collections import deque
from dataclasses import dataclass

from setgame.exceptions import DomainError, InfeasibleError, ParseError
from setgame.settings import settings


logger = logging.getLogger(__name__)

SetCode = int

# largest element code used as a bit position: 2^24 bits is 2 MiB per code
CODE_BITS_MAX = 1 << 24


def elements(code):
    """Returns the element codes of `code` in increasing order."""

    bits = bin(code)[:1:-1]
    return [position for position, bit in enumerate(bits) if bit == '1']


def encode(codes):
    """Returns the code of the set whose elements have the passed codes."""

    value = 0
    for c in set(codes):
        value |= 1 << c
    return value


def rank(code):
    """Returns the rank of the set with the passed code.

    The largest element of a set is its highest bit, and rank is monotone in
    the code order, so the rank is the length of the highest-bit chain.
    """

    result = 0
    while code:
        code = code.bit_length() - 1
        result += 1
    return result


def level_size(m, cap=None):
    """Returns |V_m| exactly: |V_0| = 0 and |V_(m+1)| = 2^|V_m|."""

    cap = settings.count_cap if cap is None else cap

    if m < 0:
        raise DomainError('rank must be a natural number, got {}'.format(m))
    if m > cap:
        raise InfeasibleError(
            'level size not representable: |V_{m}| is past the count cap '
            'of {cap}'.format(m=m, cap=cap)
        )

    size = 0
    for _ in range(m):
        size = 1 << size
    return size


@dataclass(frozen=True)
class LevelTable:
    """The level V_m as the contiguous code range [0, |V_m|)."""

    m: int
    codes: range

    def __len__(self):
        return len(self.codes)

    def __iter__(self):
        return iter(self.codes)

    def __contains__(self, code):
        return code in self.codes


def level_table(m, cap=None):
    """Returns the enumerable level V_m."""

    cap = settings.enumeration_cap if cap is None else cap

    if m > cap:
        raise InfeasibleError(
            'V_{m} cannot be enumerated: past the enumeration cap of '
            '{cap}'.format(m=m, cap=cap)
        )

    table = LevelTable(m=m, codes=range(level_size(m)))
    logger.debug('V_%d holds %d codes', m, len(table))
    return table


@functools.total_ordering
class HFSet(object):
    """A hereditarily finite set.

    Args:
        members: iterable of HFSet values. Duplicates are merged.

    Instances are interned, so ``HFSet([]) is HFSet([])``. Ordering is the
    order of the Ackermann codes, computed without building the codes.

    """

    __slots__ = (
        '_members', '_hash', '_sorted', '_rank', '_code', '__weakref__',
    )

    _interned = weakref.WeakValueDictionary()

    def __new__(cls, members=()):
        members = frozenset(members)

        for member in members:
            if not isinstance(member, HFSet):
                raise TypeError(
                    'HFSet members must be HFSet, got {}'.format(
                        type(member).__name__,
                    )
                )

        existing = cls._interned.get(members)
        if existing is not None:
            return existing

        obj = super().__new__(cls)
        obj._members = members
        obj._hash = hash(members)
        obj._sorted = None
        obj._rank = 1 + max((m._rank for m in members), default=-1)
        obj._code = None
        cls._interned[members] = obj
        return obj

    @classmethod
    def from_code(cls, code):
        return _from_code(code)

    @property
    def members(self):
        return self._members

    @property
    def sorted_members(self):
        """Members in ascending code order."""

        if self._sorted is None:
            self._sorted = tuple(code_order(self._members))
        return self._sorted

    @property
    def rank(self):
        return self._rank

    @property
    def code(self):
        """The Ackermann code, built bottom-up over the transitive closure.

        Raises InfeasibleError once an element code is too large to use as a
        bit position.
        """

        if self._code is None:
            _build_codes(self)
        return self._code

    def __len__(self):
        return len(self._members)

    def __iter__(self):
        return iter(self.sorted_members)

    def __contains__(self, item):
        return item in self._members

    def __bool__(self):
        return bool(self._members)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, HFSet):
            return NotImplemented
        return self._members == other._members

    def __lt__(self, other):
        if not isinstance(other, HFSet):
            return NotImplemented
        return _compare(self, other) < 0

    def __repr__(self):
        return 'HFSet({})'.format(to_braces(self))


def code_order(sets):
    """Returns `sets` sorted in code order.

    Sets of lower rank have lower codes. Within one rank, codes compare like
    the member lists read from the largest member down, so every set
    reachable from `sets` is numbered rank layer by rank layer without
    building a code.
    """

    sets = list(sets)
    if len(sets) < 2:
        return sets
    order = _ordinals(sets)
    return sorted(sets, key=order.__getitem__)


def _ordinals(roots):
    layers = {}
    seen = set()
    stack = list(roots)

    while stack:
        s = stack.pop()
        if s in seen:
            continue
        seen.add(s)
        layers.setdefault(s.rank, []).append(s)
        stack.extend(s.members)

    order = {}
    for r in sorted(layers):
        layer = sorted(
            layers[r],
            key=lambda s: sorted((order[m] for m in s.members), reverse=True),
        )
        for s in layer:
            order[s] = len(order)

    return order


def _compare(a, b):
    if a is b:
        return 0
    if a.rank != b.rank:
        return -1 if a.rank < b.rank else 1

    order = _ordinals([a, b])
    return -1 if order[a] < order[b] else 1


def _build_codes(value):
    stack = [value]

    while stack:
        s = stack[-1]
        missing = [m for m in s._members if m._code is None]
        if missing:
            stack.extend(missing)
            continue

        stack.pop()
        if s._code is not None:
            continue

        widest = max((m._code for m in s._members), default=-1)
        if widest >= CODE_BITS_MAX:
            raise InfeasibleError(
                'set code not representable: an element code reaches '
                '{}'.format(CODE_BITS_MAX)
            )
        s._code = encode(m._code for m in s._members)


# one entry per code of V_5
@functools.lru_cache(maxsize=1 << 16)
def _from_code(code):
    value = HFSet(_from_code(e) for e in elements(code))
    value._code = code
    return value


EMPTY = HFSet()


def check_code(value):
    """Returns `value` if it is a valid set code."""

    if isinstance(value, int) and not isinstance(value, bool) and value >= 0:
        return value
    raise TypeError('expected a set code, got {!r}'.format(value))


def as_hfset(value):
    """Accepts an HFSet or a set code and returns the HFSet."""

    if isinstance(value, HFSet):
        return value
    return HFSet.from_code(check_code(value))


def tc(value):
    """Returns the transitive closure of a set code or an HFSet.

    The result has the same representation as the input: a frozenset of codes
    for a code, a frozenset of HFSet values otherwise.
    """

    if isinstance(value, HFSet):
        def children(s):
            return s.members

        start = value.members
    else:
        children = elements
        start = elements(value)

    seen = set(start)
    queue = deque(seen)

    while queue:
        for member in children(queue.popleft()):
            if member not in seen:
                seen.add(member)
                queue.append(member)

    return frozenset(seen)


def parse_braces(text):
    """Parses the braces notation into an HFSet.

    Grammar: Set := "{" (Set ("," Set)*)? "}", whitespace anywhere.
    Parsing uses an explicit stack, so nesting depth is unbounded.
    """

    stack = []
    result = None
    expect_set = True
    just_opened = False

    for position, char in enumerate(text):
        if char.isspace():
            continue

        if result is not None:
            raise ParseError('unexpected trailing input', position)

        if char == '{':
            if not expect_set:
                raise ParseError("expected ',' or '}'", position)
            stack.append([])
            just_opened = True

        elif char == '}':
            if not stack:
                raise ParseError("unbalanced '}'", position)
            if expect_set and not just_opened:
                raise ParseError("expected a set after ','", position)

            value = HFSet(stack.pop())
            expect_set = False
            just_opened = False

            if stack:
                stack[-1].append(value)
            else:
                result = value

        elif char == ',':
            if expect_set or not stack:
                raise ParseError("unexpected ','", position)
            expect_set = True
            just_opened = False

        else:
            raise ParseError(
                'unexpected character {!r}'.format(char),
                position,
            )

    if result is None:
        raise ParseError('unexpected end of input', len(text))

    return result


def to_braces(value):
    """Returns the canonical braces text, members in ascending code order."""

    value = as_hfset(value)
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
            memo[s] = '{' + ','.join(memo[m] for m in s) + '}'
            stack.pop()

    return memo[value]
