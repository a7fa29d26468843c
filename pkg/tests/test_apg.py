import json

import pytest

from setgame import apg, game, hf
from setgame.exceptions import DomainError, GraphFormatError


MIXED = """\
# sinks, a first-player win at index 3 and a draw
node e:
node o: e
node t: o
node x: x t
node y: y o
point x
"""

QUINE_STAGE_ONE = """\
node a: a
node e:
node s1n0: e
node s1n1: a e
"""

PAIR_STAGE_ONE = """\
node u: u e
node e:
node s1n0: u
node s1n1: e
"""


@pytest.fixture(scope="module")
def mixed():
    return apg.Apg.from_text(MIXED)


class TestOutcome:
    def test_str(self):
        assert str(apg.Outcome.from_index(3)) == 'WIN_I w=3'
        assert str(apg.Outcome.from_index(0)) == 'WIN_II w=0'
        assert str(apg.DRAW) == 'DRAW'

    @pytest.mark.parametrize(
        argnames="kind,w",
        argvalues=[
            (apg.OutcomeKind.WIN_I, 2),
            (apg.OutcomeKind.WIN_II, 1),
            (apg.OutcomeKind.WIN_I, None),
            (apg.OutcomeKind.DRAW, 0),
        ]
    )
    def test_invalid(self, kind, w):
        with pytest.raises(ValueError):
            apg.Outcome(kind, w)


class TestSolve:
    def test_mixed_graph(self, mixed):
        outcomes = mixed.solve()

        assert outcomes['e'] == apg.Outcome.from_index(0)
        assert outcomes['o'] == apg.Outcome.from_index(1)
        assert outcomes['t'] == apg.Outcome.from_index(2)
        assert outcomes['x'] == apg.Outcome.from_index(3)
        assert outcomes['y'] is apg.DRAW

    def test_quine_atom_is_a_draw(self):
        assert apg.retrograde({'a': ['a']}) == {'a': apg.DRAW}

    def test_two_cycle_is_a_draw(self):
        outcomes = apg.retrograde({'a': ['b'], 'b': ['a']})

        assert outcomes == {'a': apg.DRAW, 'b': apg.DRAW}

    def test_cycle_escaping_to_a_sink(self):
        """A node on a cycle with a sink child is still a first-player win."""

        outcomes = apg.retrograde({'u': ['u', 'e'], 'e': []})

        assert outcomes['u'] == apg.Outcome.from_index(1)

    @pytest.mark.parametrize(argnames="code", argvalues=list(range(16)))
    def test_agrees_with_classify(self, code):
        g = apg.Apg.from_hfset(code)
        outcome = apg.solve(g)[g.point]

        assert outcome == apg.Outcome.from_index(game.classify(code).w)


class TestOptimalMove:
    @pytest.mark.parametrize(
        argnames="node,move",
        argvalues=[
            ('x', 't'),
            ('y', 'y'),
            ('o', 'e'),
            ('t', 'o'),
        ]
    )
    def test_moves(self, mixed, node, move):
        assert mixed.optimal_move(node) == move

    def test_no_move(self, mixed):
        with pytest.raises(DomainError, match='lost'):
            mixed.optimal_move('e')


class TestTextFormat:
    def test_round_trip(self, mixed):
        text = mixed.to_text()

        assert text.splitlines()[0] == 'node e:'
        assert text.splitlines()[-1] == 'point x'
        assert apg.Apg.from_text(text).to_text() == text

    def test_duplicate_children_merge(self):
        g = apg.Apg.from_text('node a: b b\nnode b:\n')

        assert g.children('a') == ['b']

    @pytest.mark.parametrize(
        argnames="text,line",
        argvalues=[
            ('node a:\nnode a:\n', 2),
            ('node a: b\n', 1),
            ('node a:\n\npoint b\n', 3),
            ('node a:\nedge a a\n', 2),
            ('node a-b:\n', 1),
            ('node a:\npoint a\npoint a\n', 3),
        ]
    )
    def test_errors(self, text, line):
        """Should name the offending line."""

        with pytest.raises(GraphFormatError) as error:
            apg.Apg.from_text(text)

        assert error.value.line == line
        assert 'on line {}'.format(line) in str(error.value)


class TestJsonFormat:
    def test_round_trip(self, mixed):
        data = mixed.to_json()
        g = apg.Apg.from_json(json.dumps(data))

        assert g.to_json() == data
        assert data['point'] == 'x'
        assert ['x', 'x'] in data['edges']

    @pytest.mark.parametrize(
        argnames="text",
        argvalues=[
            '{nope',
            '[]',
            '{"nodes": ["a"], "edges": [["a", "b"]]}',
            '{"nodes": ["a"], "point": "b"}',
            '{"nodes": [1]}',
        ]
    )
    def test_errors(self, text):
        with pytest.raises(GraphFormatError):
            apg.Apg.from_json(text)


class TestHFSetImport:
    def test_from_hfset(self):
        g = apg.Apg.from_hfset(hf.parse_braces('{{},{{}}}'))

        assert list(g) == ['0', '1', '3']
        assert g.point == '3'
        assert g.children('3') == ['0', '1']

    def test_large_ranks_use_positions(self):
        g = apg.Apg.from_hfset(game.witness(7))

        assert g.point == 'h7'
        assert len(g) == 8

    def test_rank_five_codes_stay_unnamed(self):
        """Should name a rank-5 set by position, not by its huge code."""

        value = hf.HFSet.from_code(1 << 65535)
        g = apg.Apg.from_hfset(value)

        assert len(g) == 18
        assert g.point == 'h17'
        assert '65535' in g
        assert apg.solve(g)[g.point] == \
            apg.Outcome.from_index(game.classify(value).w)

    def test_to_hfset(self):
        value = game.witness(6)
        g = apg.Apg.from_hfset(value)

        assert g.to_hfset(g.point) is value

    def test_to_hfset_of_a_cycle(self):
        g = apg.Apg.from_text(QUINE_STAGE_ONE)

        with pytest.raises(DomainError):
            g.to_hfset('s1n1')
        assert g.to_hfset('s1n0') is hf.HFSet.from_code(1)


class TestBisimulation:
    def test_quine_atoms_collapse(self):
        """A set of Quine atoms is the Quine atom itself."""

        g = apg.Apg.from_text('node a: a\nnode b: b\nnode c: a b\n')
        q = apg.bisim_quotient(g)

        assert list(q) == ['a']
        assert q.graph['quotient_map'] == {'a': 'a', 'b': 'a', 'c': 'a'}

    def test_distinct_sets_stay_apart(self):
        g = apg.Apg.from_text('node a: a\nnode b: b\nnode e:\nnode c: a e\n')
        q = apg.bisim_quotient(g)

        assert list(q) == ['a', 'e', 'c']
        assert q.children('c') == ['a', 'e']

    def test_two_cycle_collapses_to_quine(self):
        g = apg.Apg.from_text('node a: b\nnode b: a\npoint b\n')
        q = apg.bisim_quotient(g)

        assert list(q) == ['a']
        assert q.point == 'a'
        assert q.children('a') == ['a']

    def test_copies_of_sets_merge(self):
        g = apg.Apg.from_text(
            'node e1:\nnode e2:\nnode s1: e1\nnode s2: e2\nnode p: s1 s2\n'
        )
        q = apg.bisim_quotient(g)

        assert list(q) == ['e1', 's1', 'p']
        assert q.children('p') == ['s1']

    def test_quotient_preserves_outcomes(self, mixed):
        q = apg.bisim_quotient(mixed)
        before = apg.solve(mixed)
        after = apg.solve(q)

        for v, rep in q.graph['quotient_map'].items():
            assert before[v] == after[rep]


class TestSigma:
    def test_no_minimal_element(self):
        child_map = apg.Apg.from_text(PAIR_STAGE_ONE).child_map()

        assert apg.has_no_minimal_element(child_map, 's1n0')
        assert not apg.has_no_minimal_element(child_map, 'u')
        assert not apg.has_no_minimal_element(child_map, 'e')

    def test_within(self):
        child_map = {'a': ('a', 'e'), 'e': ()}

        assert not apg.has_no_minimal_element(child_map, 'a')
        assert apg.has_no_minimal_element(child_map, 'a', within={'a'})

    def test_sigma_picks_first_node(self):
        g = apg.Apg.from_text(QUINE_STAGE_ONE)

        assert apg.sigma(g, g.nodes) == 'a'
        assert apg.sigma(g, ['e', 's1n0']) is None

    def test_spectrum(self):
        assert apg.sigma_spectrum(apg.Apg.from_text(PAIR_STAGE_ONE)) == [2]
        assert apg.sigma_spectrum(apg.Apg.from_text(QUINE_STAGE_ONE)) == []


class TestClasses:
    def test_wellfounded_nodes(self):
        g = apg.Apg.from_text(PAIR_STAGE_ONE)

        assert apg.wellfounded_nodes(g) == {'e', 's1n1'}
        assert apg.is_wellfounded(g, 'e')
        assert not apg.is_wellfounded(g, 's1n0')

    def test_hw_nodes(self):
        g = apg.Apg.from_text(QUINE_STAGE_ONE)

        assert apg.hw_nodes(g) == {'e', 's1n0'}

    def test_regularity(self):
        assert apg.regularity_holds(apg.Apg.from_text('node e:\nnode o: e\n'))
        assert not apg.regularity_holds(apg.Apg.from_text(PAIR_STAGE_ONE))


class TestPatternReport:
    @pytest.mark.parametrize(
        argnames="text,pattern,case",
        argvalues=[
            ('node e:\nnode o: e\n', 'ALL=W=HW=WF', 1),
            (QUINE_STAGE_ONE, 'ALL≠W≠HW=WF', 2),
            (PAIR_STAGE_ONE, 'ALL=W=HW≠WF', 4),
            ('node a: a\nnode e:\n', 'ALL≠W=HW=WF', None),
        ]
    )
    def test_patterns(self, text, pattern, case):
        report = apg.pattern_report(apg.Apg.from_text(text))

        assert report.pattern == pattern
        assert report.case == case

    def test_to_dict(self):
        data = apg.pattern_report(apg.Apg.from_text(PAIR_STAGE_ONE)).to_dict()

        assert data['classes']['WF'] == ['e', 's1n1']
        assert data['regularity'] == {
            'AR': False, 'AR^W': False, 'AR^HW': False,
        }
        assert data['spectrum'] == [2]


class TestSigmaWitness:
    def test_smallest_witness(self):
        g = apg.sigma_witness(2)

        assert g.point == 'x'
        assert set(g) == {'z0', 'x', 'e1'}
        assert g.children('x') == ['e1']
        assert set(g.children('e1')) == {'z0', 'e1'}

    @pytest.mark.parametrize(argnames="nu", argvalues=[2, 3, 4, 5, 6])
    def test_index_and_sigma(self, nu):
        g = apg.sigma_witness(nu)

        assert apg.solve(g)[g.point] == apg.Outcome.from_index(nu)
        assert apg.sigma(g, [g.point]) == g.point

    def test_odd_witness_shape(self):
        g = apg.sigma_witness(3)

        assert set(g.children('x')) == {'e1', 'e2'}

    @pytest.mark.parametrize(argnames="nu", argvalues=[0, 1])
    def test_no_witness_below_two(self, nu):
        with pytest.raises(DomainError):
            apg.sigma_witness(nu)
