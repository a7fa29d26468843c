"""Finite, possibly non-well-founded sets as pointed graphs.

An edge x -> y means that y is an element of x. Positions with no legal move
are won by the player who moved into them; positions that no finite play can
settle are draws.
"""

import enum
import itertools
import json
import logging
import re
from collections import deque
from dataclasses import dataclass, field

import networkx as nx

from setgame.exceptions import DomainError, GraphFormatError
from setgame.hf import HFSet, as_hfset, code_order, tc


logger = logging.getLogger(__name__)

TOKEN_RE = re.compile(r'^[A-Za-z0-9_]+$')
NODE_RE = re.compile(r'^node\s+(?P<id>\S+?)\s*:(?P<children>.*)$')
POINT_RE = re.compile(r'^point\s+(?P<id>\S+)$')

SIGMA_EXTRAS_MAX = 3

# sets of rank below this are named by code: codes of V_5 stay under 65 536
NAMED_RANKS = 5

CLASS_NAMES = ('ALL', 'W', 'HW', 'WF')

# the five consistent relationships between V, W, HW and V_infinity, keyed by
# (V=W, W=HW, HW=WF, AR, AR^W, AR^HW)
PATTERN_CASES = {
    (True, True, True, True, True, True): 1,
    (False, False, True, False, True, True): 2,
    (False, False, True, False, False, True): 3,
    (True, True, False, False, False, False): 4,
    (False, False, False, False, False, False): 5,
}


class OutcomeKind(enum.Enum):
    WIN_I = 'WIN_I'
    WIN_II = 'WIN_II'
    DRAW = 'DRAW'


@dataclass(frozen=True)
class Outcome:
    """Result of a position: a winner with its index, or a draw."""

    kind: OutcomeKind
    w: int = None

    def __post_init__(self):
        if self.kind is OutcomeKind.DRAW:
            if self.w is not None:
                raise ValueError('a draw carries no winning index')
            return

        if self.w is None:
            raise ValueError('{} needs a winning index'.format(self.kind.name))

        expected = OutcomeKind.WIN_I if self.w % 2 else OutcomeKind.WIN_II
        if self.kind is not expected:
            raise ValueError(
                '{kind} does not match index {w}'.format(
                    kind=self.kind.name,
                    w=self.w,
                )
            )

    @classmethod
    def from_index(cls, w):
        kind = OutcomeKind.WIN_I if w % 2 else OutcomeKind.WIN_II
        return cls(kind=kind, w=w)

    @property
    def is_draw(self):
        return self.kind is OutcomeKind.DRAW

    def __str__(self):
        if self.is_draw:
            return self.kind.value
        return '{kind} w={w}'.format(kind=self.kind.value, w=self.w)


DRAW = Outcome(OutcomeKind.DRAW)


def retrograde(children):
    """Solves every node of a child map by backward induction.

    Nodes without children have index 0. Rounds alternate: every unresolved
    parent of an even-index node is won by the mover one index higher, and an
    unresolved node whose children are now all first-player wins becomes a
    second-player win two indices up. Whatever is left when a round adds
    nothing is a draw. Each edge is followed at most twice.

    Args:
        children: mapping of every node to an iterable of its children.

    Returns a dict mapping each node to its Outcome.

    """

    parents = {v: [] for v in children}
    pending = {}

    for v, targets in children.items():
        targets = set(targets)
        pending[v] = len(targets)
        for t in targets:
            parents[t].append(v)

    index = {}
    frontier = [v for v, n in pending.items() if n == 0]
    for v in frontier:
        index[v] = 0

    w = 0
    while frontier:
        odd = []
        for v in frontier:
            for p in parents[v]:
                if p not in index:
                    index[p] = w + 1
                    odd.append(p)

        even = []
        for v in odd:
            for p in parents[v]:
                if p not in index:
                    pending[p] -= 1
                    if not pending[p]:
                        index[p] = w + 2
                        even.append(p)

        frontier = even
        w += 2

    return {
        v: Outcome.from_index(index[v]) if v in index else DRAW
        for v in children
    }


class Apg(nx.DiGraph):
    """A finite pointed graph read as a set; edge x -> y means y in x.

    Args:
        incoming_graph_data: anything networkx.DiGraph accepts.
        point: optional distinguished node.

    """

    def __init__(self, incoming_graph_data=None, point=None, **attr):
        super().__init__(incoming_graph_data, **attr)
        if point is not None:
            self.graph['point'] = point

    @property
    def point(self):
        return self.graph.get('point')

    @point.setter
    def point(self, node):
        if node is not None and node not in self:
            raise DomainError('point {!r} is not a node'.format(node))
        self.graph['point'] = node

    @classmethod
    def from_children(cls, children, point=None):
        """Builds a graph from a mapping of node to its children."""

        g = cls()
        g.add_nodes_from(children)

        for v, targets in children.items():
            for t in targets:
                if t not in g:
                    raise GraphFormatError(
                        'unknown child {child!r} of {node!r}'.format(
                            child=t,
                            node=v,
                        )
                    )
                g.add_edge(v, t)

        g.point = point
        return g

    def positions(self):
        """Maps each node to its position in insertion order."""

        return {v: i for i, v in enumerate(self.nodes)}

    def children(self, node):
        order = self.positions()
        return sorted(self.successors(node), key=order.__getitem__)

    def child_map(self):
        """Maps every node to the tuple of its children, in node order."""

        order = self.positions()
        return {
            v: tuple(sorted(self.successors(v), key=order.__getitem__))
            for v in self.nodes
        }

    def solve(self):
        return solve(self)

    def optimal_move(self, node, outcomes=None):
        """Returns the engine's reply from `node`.

        A winning mover takes the second-player-won child with the least
        index, a drawn mover keeps the draw, and a doomed mover stalls on the
        child with the largest index. Ties go to the earliest node.
        """

        options = self.children(node)
        if not options:
            raise DomainError(
                'mover has lost: {!r} has no elements'.format(node)
            )

        outcomes = solve(self) if outcomes is None else outcomes
        winning = [
            v for v in options
            if outcomes[v].kind is OutcomeKind.WIN_II
        ]
        if winning:
            return min(winning, key=lambda v: outcomes[v].w)

        drawn = [v for v in options if outcomes[v].is_draw]
        if drawn:
            return drawn[0]

        best = max(outcomes[v].w for v in options)
        return next(v for v in options if outcomes[v].w == best)

    @classmethod
    def from_hfset(cls, value):
        """Imports a hereditarily finite set as its transitive closure graph.

        Nodes are created in ascending code order and named by their code
        below |V_5|, by their position otherwise.
        """

        value = as_hfset(value)
        members = code_order(tc(value) | {value})
        names = {}

        for i, s in enumerate(members):
            if s.rank < NAMED_RANKS:
                names[s] = str(s.code)
            else:
                names[s] = 'h{}'.format(i)

        return cls.from_children(
            {names[s]: [names[m] for m in s] for s in members},
            point=names[value],
        )

    def to_hfset(self, node):
        """Returns the set a well-founded node denotes."""

        if not is_wellfounded(self, node):
            raise DomainError(
                '{!r} is not well-founded and denotes no HF set'.format(node)
            )

        memo = {}
        stack = [node]

        while stack:
            v = stack[-1]
            if v in memo:
                stack.pop()
                continue

            missing = [c for c in self.successors(v) if c not in memo]
            if missing:
                stack.extend(missing)
            else:
                memo[v] = HFSet(memo[c] for c in self.successors(v))
                stack.pop()

        return memo[node]

    @classmethod
    def from_text(cls, text):
        """Parses the line format.

        ``node <id>: <child-id> ...`` declares a node, ``point <id>`` the
        point; blank lines and lines starting with '#' are skipped.
        """

        children = {}
        references = []
        point = None

        for number, raw in enumerate(text.splitlines(), start=1):
            line = raw.strip()
            if not line or line.startswith('#'):
                continue

            node_match = NODE_RE.match(line)
            point_match = POINT_RE.match(line)

            if node_match:
                node = _token(node_match.group('id'), number)
                if node in children:
                    raise GraphFormatError(
                        'node {!r} declared twice'.format(node),
                        number,
                    )
                targets = [
                    _token(t, number)
                    for t in node_match.group('children').split()
                ]
                children[node] = list(dict.fromkeys(targets))
                references.extend((t, number) for t in targets)

            elif point_match:
                if point is not None:
                    raise GraphFormatError('point declared twice', number)
                point = (_token(point_match.group('id'), number), number)

            else:
                raise GraphFormatError(
                    "expected 'node <id>: ...' or 'point <id>'",
                    number,
                )

        for target, number in references:
            if target not in children:
                raise GraphFormatError(
                    'unknown child id {!r}'.format(target),
                    number,
                )

        if point is not None and point[0] not in children:
            raise GraphFormatError(
                'unknown point id {!r}'.format(point[0]),
                point[1],
            )

        return cls.from_children(
            children,
            point=point[0] if point is not None else None,
        )

    def to_text(self):
        lines = []
        for v, targets in self.child_map().items():
            lines.append(
                'node {node}:{sep}{children}'.format(
                    node=v,
                    sep=' ' if targets else '',
                    children=' '.join(targets),
                )
            )
        if self.point is not None:
            lines.append('point {}'.format(self.point))
        return '\n'.join(lines) + '\n'

    @classmethod
    def from_json(cls, data):
        """Reads ``{"nodes": [...], "edges": [[x, y], ...], "point": id}``."""

        if isinstance(data, str):
            try:
                data = json.loads(data)
            except ValueError as e:
                raise GraphFormatError('invalid JSON: {}'.format(e))

        if not isinstance(data, dict) or 'nodes' not in data:
            raise GraphFormatError('JSON graph needs a "nodes" list')

        children = {}
        for node in data['nodes']:
            if not isinstance(node, str) or not TOKEN_RE.match(node):
                raise GraphFormatError('bad node id {!r}'.format(node))
            children[node] = []

        for edge in data.get('edges', []):
            if (not isinstance(edge, (list, tuple)) or len(edge) != 2 or
                    edge[0] not in children or edge[1] not in children):
                raise GraphFormatError('bad edge {!r}'.format(edge))
            if edge[1] not in children[edge[0]]:
                children[edge[0]].append(edge[1])

        point = data.get('point')
        if point is not None and point not in children:
            raise GraphFormatError('unknown point id {!r}'.format(point))

        return cls.from_children(children, point=point)

    def to_json(self):
        return {
            'nodes': list(self.nodes),
            'edges': [
                [v, t] for v, targets in self.child_map().items()
                for t in targets
            ],
            'point': self.point,
        }


def _token(text, line):
    if not TOKEN_RE.match(text):
        raise GraphFormatError('bad node id {!r}'.format(text), line)
    return text


def solve(g):
    """Returns the Outcome of every node of g."""

    return retrograde(g.child_map())


def bisim_quotient(g):
    """Collapses g by its coarsest bisimulation.

    Blocks are refined by the set of blocks their children fall in until the
    block count stops growing. Every block is named after its earliest node;
    the node-to-block map is kept in ``graph['quotient_map']``.
    """

    child_map = g.child_map()
    block = {v: 0 for v in child_map}
    count = 1 if child_map else 0

    while True:
        signatures = {}
        refined = {}
        for v, targets in child_map.items():
            signature = (block[v], frozenset(block[t] for t in targets))
            refined[v] = signatures.setdefault(signature, len(signatures))

        block = refined
        if len(signatures) == count:
            break
        count = len(signatures)

    representative = {}
    for v in child_map:
        representative.setdefault(block[v], v)

    order = g.positions()
    quotient_map = {v: representative[block[v]] for v in child_map}
    quotient = Apg.from_children(
        {
            rep: sorted(
                {quotient_map[t] for t in child_map[rep]},
                key=order.__getitem__,
            )
            for rep in representative.values()
        },
        point=quotient_map.get(g.point),
    )
    quotient.graph['quotient_map'] = quotient_map
    logger.debug(
        'bisimulation quotient: %d nodes -> %d',
        len(child_map), len(representative),
    )
    return quotient


def has_no_minimal_element(child_map, x, within=None):
    """Tells whether x is nonempty and none of its elements is minimal.

    An element y of x is minimal when y and x share no element. With
    `within`, both quantifiers range over that node class only.
    """

    members = set(child_map[x])
    if within is not None:
        members &= within

    if not members:
        return False

    return all(members.intersection(child_map[y]) for y in members)


def sigma(g, nodes):
    """Returns the first node of `nodes` with no minimal element, or None."""

    child_map = g.child_map()
    chosen = set(nodes)

    for v in child_map:
        if v in chosen and has_no_minimal_element(child_map, v):
            return v
    return None


def _closure_of(g, sources, step):
    seen = set(sources)
    queue = deque(seen)

    while queue:
        for nxt in step(queue.popleft()):
            if nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)

    return seen


def is_wellfounded(g, node):
    """Tells whether no cycle is reachable from node."""

    reachable = nx.descendants(g, node) | {node}
    return nx.is_directed_acyclic_graph(g.subgraph(reachable))


def wellfounded_nodes(g):
    """Returns the nodes from which no cycle is reachable."""

    cyclic = set()
    for component in nx.strongly_connected_components(g):
        v = next(iter(component))
        if len(component) > 1 or g.has_edge(v, v):
            cyclic |= component

    return set(g.nodes) - _closure_of(g, cyclic, g.predecessors)


def hw_nodes(g, outcomes=None):
    """Returns the hereditarily winning nodes: no draw is reachable."""

    outcomes = solve(g) if outcomes is None else outcomes
    draws = [v for v, outcome in outcomes.items() if outcome.is_draw]
    return set(g.nodes) - _closure_of(g, draws, g.predecessors)


def regularity_holds(g, within=None):
    """Regularity inside g, its quantifiers relativised to `within`."""

    child_map = g.child_map()
    candidates = child_map if within is None else within
    return not any(
        has_no_minimal_element(child_map, x, within)
        for x in candidates
    )


def sigma_spectrum(g, outcomes=None):
    """Returns the sorted indices w for which some index-w node has no
    minimal element."""

    outcomes = solve(g) if outcomes is None else outcomes
    child_map = g.child_map()
    return sorted({
        outcome.w for v, outcome in outcomes.items()
        if not outcome.is_draw and has_no_minimal_element(child_map, v)
    })


@dataclass
class PatternReport:
    """Node classes ALL ⊇ W ⊇ HW ⊇ WF of a finite graph and how they relate.

    `case` is the number of the consistent relationship the truncation
    matches, or None when it matches none.
    """

    classes: dict
    regularity: dict
    spectrum: list
    case: int = None
    equalities: dict = field(default_factory=dict)

    @property
    def pattern(self):
        text = CLASS_NAMES[0]
        for left, right in zip(CLASS_NAMES, CLASS_NAMES[1:]):
            sign = '=' if self.equalities[(left, right)] else '≠'
            text += sign + right
        return text

    def to_dict(self):
        return {
            'pattern': self.pattern,
            'case': self.case,
            'classes': {
                name: sorted(nodes) for name, nodes in self.classes.items()
            },
            'regularity': self.regularity,
            'spectrum': self.spectrum,
        }


def pattern_report(g):
    """Compares ALL ⊇ W ⊇ HW ⊇ WF inside g and lists its σ-spectrum."""

    outcomes = solve(g)
    everything = set(g.nodes)
    winning = {v for v, o in outcomes.items() if not o.is_draw}
    hereditary = hw_nodes(g, outcomes)
    founded = wellfounded_nodes(g)

    classes = dict(
        zip(CLASS_NAMES, (everything, winning, hereditary, founded))
    )
    equalities = {
        (left, right): classes[left] == classes[right]
        for left, right in zip(CLASS_NAMES, CLASS_NAMES[1:])
    }
    regularity = {
        'AR': regularity_holds(g),
        'AR^W': regularity_holds(g, winning),
        'AR^HW': regularity_holds(g, hereditary),
    }
    key = tuple(equalities.values()) + tuple(regularity.values())

    return PatternReport(
        classes=classes,
        regularity=regularity,
        spectrum=sigma_spectrum(g, outcomes),
        case=PATTERN_CASES.get(key),
        equalities=equalities,
    )


def _backbone(nu):
    """Child map of the well-founded witnesses z_0 .. z_(nu-1)."""

    names = ['z{}'.format(i) for i in range(nu)]
    children = {}

    for i, name in enumerate(names):
        if i == 0:
            children[name] = ()
        elif i % 2:
            children[name] = (names[i - 1],)
        else:
            children[name] = tuple(names[1:i:2])

    return children


def _extra_options(extras, backbone):
    """Child sets of one extra node: any extras plus at most one backbone
    node, nonempty, in lexicographic order."""

    options = []
    for size in range(len(extras) + 1):
        for chosen in itertools.combinations(extras, size):
            for anchor in (None,) + tuple(backbone):
                targets = chosen + (() if anchor is None else (anchor,))
                if targets:
                    options.append(targets)
    return options


def sigma_witness(nu, max_extras=SIGMA_EXTRAS_MAX):
    """Finds a pointed graph whose point has index nu and no minimal element.

    The search adds one to `max_extras` nodes on top of the well-founded
    witnesses z_0 .. z_(nu-1); each extra node holds extras and at most one
    witness. Candidates are tried by node count, then edge count, then
    lexicographically, and the first hit is returned restricted to the nodes
    reachable from its point 'x'.
    """

    if nu <= 1:
        raise DomainError(
            'no set of index {} lacks a minimal element; need nu > 1'.format(
                nu,
            )
        )

    backbone = _backbone(nu)

    for k in range(1, max_extras + 1):
        extras = ['x'] + ['e{}'.format(i) for i in range(1, k)]
        options = _extra_options(extras, list(backbone))
        candidates = sorted(
            itertools.product(range(len(options)), repeat=k),
            key=lambda picks: (sum(len(options[p]) for p in picks), picks),
        )
        logger.debug(
            'sigma witness for %d: %d candidates with %d extra nodes',
            nu, len(candidates), k,
        )

        for picks in candidates:
            child_map = dict(backbone)
            child_map.update(
                (name, options[p]) for name, p in zip(extras, picks)
            )

            if not has_no_minimal_element(child_map, 'x'):
                continue

            outcome = retrograde(child_map)['x']
            if outcome.is_draw or outcome.w != nu:
                continue

            g = Apg.from_children(child_map, point='x')
            reachable = nx.descendants(g, 'x') | {'x'}
            if not set(extras) <= reachable:
                continue

            return Apg.from_children(
                {
                    v: [t for t in targets if t in reachable]
                    for v, targets in child_map.items() if v in reachable
                },
                point='x',
            )

    raise DomainError(
        'no witness for index {nu} with up to {k} extra nodes'.format(
            nu=nu,
            k=max_extras,
        )
    )
