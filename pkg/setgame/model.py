"""Bounded stages of the stratified non-well-founded model construction.

Stage 0 is a seed structure of opaque atoms. Each later stage adjoins one new
node for every nonempty subset of the previous stage that no existing node
already represents; a node represents the set of its children. Old nodes
never gain children, so every stage end-extends the ones below it.
"""

import itertools
import json
import logging
from dataclasses import dataclass, field

from setgame.apg import (
    Apg,
    has_no_minimal_element,
    pattern_report,
    regularity_holds,
    solve
)
from setgame.exceptions import (
    CapExceededError,
    DomainError,
    InfeasibleError,
    SeedError
)
from setgame.settings import settings


logger = logging.getLogger(__name__)

TRUNCATION_NOTE = (
    'truncation check: (M_1, E_1) against (M_k, E_k); says nothing about the '
    'class-sized union'
)

PRESETS = {
    'wf': 'node e:\nnode o: e\n',
    'quine': 'node a: a\nnode e:\n',
    'unfounded-pair': 'node u: u e\nnode e:\n',
}


def preset(name):
    try:
        return Apg.from_text(PRESETS[name])
    except KeyError:
        raise DomainError(
            'unknown seed {name!r}; choose one of {names}'.format(
                name=name,
                names=', '.join(PRESETS),
            )
        )


@dataclass
class SeedReport:
    conditions: dict
    violations: list = field(default_factory=list)
    notes: dict = field(default_factory=dict)

    @property
    def passed(self):
        return not self.violations

    def to_dict(self):
        return {
            'passed': self.passed,
            'conditions': self.conditions,
            'violations': self.violations,
            'notes': self.notes,
        }


def check_seed(seed):
    """Checks conditions (i)-(iv) on a seed structure."""

    child_map = seed.child_map()
    violations = []

    empty = [v for v, targets in child_map.items() if not targets]
    if not empty:
        violations.append('(iii) no node is empty')

    by_extension = {}
    for v, targets in child_map.items():
        by_extension.setdefault(frozenset(targets), []).append(v)
    for nodes in by_extension.values():
        if len(nodes) > 1:
            violations.append(
                '(iv) nodes {} have the same elements'.format(
                    ', '.join(nodes),
                )
            )

    return SeedReport(
        conditions={
            '(i)': True,
            '(ii)': True,
            '(iii)': bool(empty),
            '(iv)': not any(v.startswith('(iv)') for v in violations),
        },
        violations=violations,
        notes={
            '(i)': 'every extension is a set: holds for finite seeds',
            '(ii)': 'seed nodes are opaque atoms: holds by construction',
        },
    )


class Model(object):
    """A built model: nodes tagged with their creation stage.

    Args:
        graph: Apg whose nodes carry 'stage' and 'label' attributes.
        stages: the stage bound k.
        cap: the node cap the model was built under.

    """

    def __init__(self, graph, stages, cap):
        self.graph = graph
        self.stages = stages
        self.cap = cap

    def __len__(self):
        return len(self.graph)

    def stage_of(self, node):
        return self.graph.nodes[node]['stage']

    def nodes_at(self, alpha):
        """Nodes of M_alpha, in creation order."""

        return [v for v in self.graph if self.stage_of(v) <= alpha]

    def edges_at(self, alpha):
        """E_alpha as a set of (set, element) pairs."""

        return {
            (v, u) for v, u in self.graph.edges
            if self.stage_of(v) <= alpha and self.stage_of(u) <= alpha
        }

    def truncation(self, alpha):
        """Returns (M_alpha, E_alpha) as a graph of its own."""

        nodes = set(self.nodes_at(alpha))
        return Apg.from_children({
            v: [u for u in targets if u in nodes]
            for v, targets in self.graph.child_map().items() if v in nodes
        })

    def stage_table(self):
        return [
            (v, self.stage_of(v), self.graph.nodes[v]['label'])
            for v in self.graph
        ]

    def to_text(self):
        lines = [self.graph.to_text()]
        for node, stage, label in self.stage_table():
            lines.append(
                '# stage {node} {stage} {label}\n'.format(
                    node=node,
                    stage=stage,
                    label=label,
                )
            )
        return ''.join(lines)

    def to_json(self):
        data = self.graph.to_json()
        data['stages'] = {v: stage for v, stage, _ in self.stage_table()}
        data['labels'] = {v: label for v, _, label in self.stage_table()}
        return json.dumps(data, indent=2) + '\n'


def build(seed, stages, cap=None, stage_limit=None):
    """Iterates subset adjunction `stages` times over a seed.

    Raises CapExceededError before a stage whose projected size passes the
    cap, naming the stage and the size.
    """

    cap = settings.model_cap if cap is None else cap
    stage_limit = (
        settings.model_stage_limit if stage_limit is None else stage_limit
    )

    if stages < 0 or stages > stage_limit:
        raise InfeasibleError(
            'stage bound must be within 0..{limit}, got {stages}'.format(
                limit=stage_limit,
                stages=stages,
            )
        )

    report = check_seed(seed)
    if not report.passed:
        raise SeedError(report)

    graph = Apg()
    for v in seed:
        graph.add_node(v, stage=0, label=v)
    graph.add_edges_from(seed.edges)

    represented = {
        frozenset(targets) for targets in graph.child_map().values()
    }
    current = list(graph)

    for alpha in range(stages):
        size = len(current)
        nonempty = sum(1 for s in represented if s)
        projected = size + (1 << size) - 1 - nonempty

        if projected > cap:
            raise CapExceededError(alpha + 1, projected, cap)

        created = []
        for width in range(1, size + 1):
            for members in itertools.combinations(current, width):
                if frozenset(members) not in represented:
                    created.append(members)

        for i, members in enumerate(created):
            node = 's{stage}n{i}'.format(stage=alpha + 1, i=i)
            label = '{' + ','.join(
                graph.nodes[u]['label'] for u in members
            ) + '}'
            graph.add_node(node, stage=alpha + 1, label=label)
            graph.add_edges_from((node, u) for u in members)
            represented.add(frozenset(members))
            current.append(node)

        logger.debug(
            'stage %d: %d new nodes, %d in total',
            alpha + 1, len(created), len(current),
        )

    return Model(graph, stages, cap)


def check_end_extension(model):
    """Every E_beta adds no element to a node of M_alpha, alpha < beta."""

    for beta in range(1, model.stages + 1):
        later = model.edges_at(beta)
        for alpha in range(beta):
            older = set(model.nodes_at(alpha))
            restricted = {(v, u) for v, u in later if v in older}
            if restricted != model.edges_at(alpha):
                return False
    return True


def check_extensionality(model):
    """Distinct nodes of every stage have distinct elements in that stage."""

    for alpha in range(model.stages + 1):
        truncation = model.truncation(alpha)
        extensions = {
            frozenset(targets) for targets in truncation.child_map().values()
        }
        if len(extensions) != len(truncation):
            return False
    return True


def check_thickness(model, alpha):
    """Every subset of M_alpha is represented in M_(alpha+1)."""

    if alpha + 1 > model.stages:
        raise DomainError(
            'thickness of stage {alpha} needs stage {next} but the model '
            'stops at {k}'.format(alpha=alpha, next=alpha + 1, k=model.stages)
        )

    older = set(model.nodes_at(alpha))
    child_map = model.truncation(alpha + 1).child_map()
    represented = {
        frozenset(targets) for targets in child_map.values()
        if older.issuperset(targets)
    }
    return len(represented) == 1 << len(older)


def check_stability(model):
    """Outcomes at stage k-1 agree with those at stage k on shared nodes."""

    if model.stages < 1:
        return True

    before = solve(model.truncation(model.stages - 1))
    after = solve(model.truncation(model.stages))
    return all(after[v] == outcome for v, outcome in before.items())


@dataclass
class ReflectionEntry:
    statement: str
    at_first: bool
    at_last: bool
    expectation: str
    holds: bool

    def to_dict(self):
        return {
            'statement': self.statement,
            'M_1': self.at_first,
            'M_k': self.at_last,
            'expectation': self.expectation,
            'holds': self.holds,
        }


@dataclass
class ReflectionReport:
    stages: int
    entries: list
    note: str = TRUNCATION_NOTE

    @property
    def passed(self):
        return all(e.holds for e in self.entries)

    def entry(self, statement):
        return next(e for e in self.entries if e.statement == statement)

    def to_dict(self):
        return {
            'stages': self.stages,
            'note': self.note,
            'passed': self.passed,
            'entries': [e.to_dict() for e in self.entries],
        }


class _Truth(object):
    """Statements about the winning classes evaluated inside one graph."""

    def __init__(self, g):
        self.child_map = g.child_map()
        self.outcomes = solve(g)
        self.g = g

    def sigma(self, predicate):
        return any(
            not outcome.is_draw and predicate(outcome.w) and
            has_no_minimal_element(self.child_map, v)
            for v, outcome in self.outcomes.items()
        )

    def sigma_w_ii(self):
        return self.sigma(lambda w: w % 2 == 0)

    def sigma_w_even(self, gamma):
        return self.sigma(lambda w: w % 2 == 0 and w <= 2 * gamma)

    def sigma_s(self, nu):
        return self.sigma(lambda w: w == nu)

    def regularity_in_w(self):
        winning = {v for v, o in self.outcomes.items() if not o.is_draw}
        return regularity_holds(self.g, winning)

    def even_indices(self):
        return sorted({
            o.w for o in self.outcomes.values()
            if not o.is_draw and o.w % 2 == 0
        })


def check_reflection(model):
    """Compares statements about winning classes in M_1 and in M_k.

    sigma(W_2g), sigma(W_II) and Regularity relativised to W are expected to
    agree; sigma(S_2g) in M_k is expected to imply sigma(S_2d) in M_1 for
    some d <= g.
    """

    if model.stages < 1:
        raise DomainError('reflection needs at least one stage')

    first = _Truth(model.truncation(1))
    last = _Truth(model.truncation(model.stages))
    entries = []

    def reflects(statement, at_first, at_last):
        entries.append(ReflectionEntry(
            statement, at_first, at_last, 'reflects', at_first == at_last,
        ))

    reflects('sigma(W_II)', first.sigma_w_ii(), last.sigma_w_ii())
    reflects('AR^W', first.regularity_in_w(), last.regularity_in_w())

    gammas = sorted({w // 2 for w in last.even_indices()})
    for gamma in gammas:
        reflects(
            'sigma(W_{})'.format(2 * gamma),
            first.sigma_w_even(gamma),
            last.sigma_w_even(gamma),
        )

    for gamma in gammas:
        at_last = last.sigma_s(2 * gamma)
        below = any(first.sigma_s(2 * d) for d in range(gamma + 1))
        entries.append(ReflectionEntry(
            'sigma(S_{})'.format(2 * gamma),
            first.sigma_s(2 * gamma),
            at_last,
            'implies',
            below or not at_last,
        ))

    return ReflectionReport(stages=model.stages, entries=entries)


def spectrum_shape(spectrum):
    """Names the shape of a σ-spectrum seen inside a truncation."""

    if not spectrum:
        return 'empty'
    if any(nu <= 1 for nu in spectrum):
        return 'other'
    if all(nu % 2 for nu in spectrum):
        return 'odd'
    return 'odd-or-from-mu'


@dataclass
class ModelReport:
    pattern: object
    spectrum: list
    shape: str
    note: str = TRUNCATION_NOTE

    def to_dict(self):
        data = self.pattern.to_dict()
        data['spectrum_shape'] = self.shape
        data['note'] = self.note
        return data


def classify_model(model):
    """Reports the class pattern and σ-spectrum of (M_k, E_k)."""

    report = pattern_report(model.truncation(model.stages))
    return ModelReport(
        pattern=report,
        spectrum=report.spectrum,
        shape=spectrum_shape(report.spectrum),
    )


def class_lemma_report(g):
    """Evaluates both sides of the class-level equivalences inside g.

    Returns statement -> {'left': bool, 'right': bool}. The values are
    evidence only: a finite truncation cannot settle a class statement.
    """

    truth = _Truth(g)
    report = pattern_report(g)
    classes = report.classes
    winning = classes['W']
    child_map = truth.child_map

    def inside(cls):
        # nodes all of whose elements lie in cls: the power class in g
        return {
            v for v, targets in child_map.items() if cls.issuperset(targets)
        }

    def sigma_of(nodes):
        return any(has_no_minimal_element(child_map, v) for v in nodes)

    w_i = {v for v, o in truth.outcomes.items() if not o.is_draw and o.w % 2}
    w_ii = winning - w_i

    return {
        'V=W <-> W=HW': {
            'left': classes['ALL'] == winning,
            'right': winning == classes['HW'],
        },
        'AR <-> W=WF': {
            'left': report.regularity['AR'],
            'right': winning == classes['WF'],
        },
        'not AR^W <-> sigma(P(W))': {
            'left': not report.regularity['AR^W'],
            'right': sigma_of(inside(winning)),
        },
        'AR^HW <-> HW=WF': {
            'left': report.regularity['AR^HW'],
            'right': classes['HW'] == classes['WF'],
        },
        'sigma(W_I) <-> not AR': {
            'left': sigma_of(w_i),
            'right': not report.regularity['AR'],
        },
        'sigma(W_II) -> not AR^W': {
            'left': sigma_of(w_ii),
            'right': not report.regularity['AR^W'],
        },
        'not sigma(P(W_II))': {
            'left': not sigma_of(inside(w_ii)),
            'right': True,
        },
    }
