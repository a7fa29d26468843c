import gc
import weakref

import pytest

from setgame import game, hf
from setgame.exceptions import BoundExceededError, DomainError, InfeasibleError


@pytest.fixture(scope="module")
def level5():
    return game.classify_level(5)


class TestIndexFromChildren:
    @pytest.mark.parametrize(
        argnames="ws,result",
        argvalues=[
            ([], 0),
            ([0], 1),
            ([1], 2),
            ([1, 3], 4),
            ([0, 2], 1),
            ([3, 2], 3),
            ([1, 1, 5], 6),
        ]
    )
    def test_index(self, ws, result):
        """Should take one past the least even index, else one past the
        largest odd index."""

        assert game.index_from_children(ws) == result


class TestClassify:
    @pytest.mark.parametrize(
        argnames="value,winner,w",
        argvalues=[
            (0, game.Player.II, 0),
            (1, game.Player.I, 1),
            (2, game.Player.II, 2),
            (3, game.Player.I, 1),
            (6, game.Player.I, 3),
            (66, game.Player.II, 4),
        ]
    )
    def test_codes(self, value, winner, w):
        result = game.classify(value)

        assert result.winner is winner
        assert result.w == w

    def test_braces_text(self):
        result = game.classify(hf.parse_braces('{{},{{}}}'))

        assert str(result) == 'winner=I w=1'

    def test_rejects_non_codes(self):
        with pytest.raises(TypeError):
            game.classify(-3)

    def test_classification_parity(self):
        """Should refuse a winner that does not match the index parity."""

        with pytest.raises(ValueError):
            game.Classification(winner=game.Player.I, w=2)

    def test_deep_nesting(self):
        """Should classify a chain of 5000 braces without recursion."""

        value = hf.parse_braces('{' * 5000 + '}' * 5000)
        result = game.classify(value)

        assert result.w == 4999
        assert result.winner is game.Player.I

    def test_classified_sets_are_not_pinned(self):
        """Should not keep a classified set alive."""

        value = hf.HFSet([hf.HFSet([hf.HFSet.from_code(70000)])])
        ref = weakref.ref(value)
        game.classify(value)

        del value
        gc.collect()

        assert ref() is None


class TestClassifyLevel:
    def test_small_level(self):
        level = game.classify_level(3)

        assert level.indices == (0, 1, 2, 1)
        assert str(level.classification(2)) == 'winner=II w=2'

    def test_census_of_v5(self, level5):
        assert level5.counts() == {
            0: 1, 1: 32768, 2: 255, 3: 28672, 4: 3840,
        }
        assert len(level5) == 65536

    def test_rank_bound(self, level5):
        """w(x) <= rank(x) over all of V_5."""

        assert all(
            w <= hf.rank(code) for code, w in enumerate(level5.indices)
        )

    @pytest.mark.parametrize(argnames="m", argvalues=[1, 2, 3, 4, 5])
    def test_realized_indices(self, level5, m):
        """Exactly the indices below m should occur in V_m."""

        prefix = game.LevelClassification(
            m, level5.indices[:hf.level_size(m)],
        )
        assert prefix.realized() == set(range(m))

    def test_agrees_with_pointwise_classification(self, level5):
        for code in range(0, 65536, 97):
            assert level5.classification(code) == game.classify(code)

    def test_thread_count_does_not_matter(self, level5):
        assert game.classify_level(5, threads=4) == level5

    def test_index_of_large_code(self, level5):
        """The set of all 1-winning codes of V_5 should be 2-winning."""

        code = hf.encode(c for c, w in enumerate(level5.indices) if w == 1)

        assert level5.index_of(code) == 2
        assert hf.rank(code) == 5

    def test_past_enumeration_cap(self):
        with pytest.raises(InfeasibleError):
            game.classify_level(6)


class TestWitness:
    @pytest.mark.parametrize(argnames="n", argvalues=list(range(17)))
    def test_index(self, n):
        assert game.classify(game.witness(n)).w == n

    def test_small_witnesses(self):
        assert hf.to_braces(game.witness(2)) == '{{{}}}'
        assert hf.to_braces(game.witness(4)) == '{{{}},{{{{}}}}}'

    def test_bound(self):
        with pytest.raises(BoundExceededError):
            game.witness(17)
        assert game.classify(game.witness(20, bound=20)).w == 20

    def test_negative(self):
        with pytest.raises(DomainError):
            game.witness(-1)


class TestOptimalMove:
    def test_empty_position(self):
        with pytest.raises(DomainError, match='lost'):
            game.optimal_move(0)

    @pytest.mark.parametrize(
        argnames="code,move",
        argvalues=[
            (1, 0),
            (3, 0),
            (6, 2),
            (2, 1),
            (66, 6),
            (10, 1),
        ]
    )
    def test_moves(self, code, move):
        """Winning movers take the least even index; doomed movers stall on
        the largest index, ties going to the smallest code."""

        assert game.optimal_move(code).code == move

    def test_engine_wins_its_positions(self):
        """From every II-won position of V_4, each reply stays II-won."""

        for code in range(1, 1 << 16):
            if game.classify(code).winner is game.Player.II:
                for first in hf.as_hfset(code):
                    if first:
                        reply = game.optimal_move(first)
                        assert game.classify(reply).winner is game.Player.II
