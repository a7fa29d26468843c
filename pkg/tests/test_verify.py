import pytest

from setgame import verify
from setgame.exceptions import DomainError
from setgame.settings import Settings


@pytest.fixture(scope="module")
def ctx():
    return verify.SuiteContext(Settings(random_trials=50))


class TestNames:
    @pytest.mark.parametrize(argnames="names", argvalues=[None, [], ['all']])
    def test_all(self, names):
        assert verify.resolve_names(names) == list(verify.CHECKS)

    def test_suite_order(self):
        """Should order the ids as the suite runs them."""

        names = verify.resolve_names(['lemma1-witness', 'lemma5-1'])

        assert names == ['lemma5-1', 'lemma1-witness']

    def test_unknown(self):
        with pytest.raises(DomainError, match='unknown check id nope'):
            verify.resolve_names(['lemma2', 'nope'])


class TestLevelChecks:
    @pytest.mark.parametrize(
        argnames="check",
        argvalues=[
            verify.check_rank_bound,
            verify.check_nonemptiness,
            verify.check_level_growth,
            verify.check_level_membership,
            verify.check_witnesses,
        ]
    )
    def test_passes(self, ctx, check):
        status, _ = check(ctx)

        assert status == verify.PASS

    def test_context_counts(self, ctx):
        assert ctx.counts(4) == {0: 1, 1: 8, 2: 3, 3: 4}
        assert len(ctx.indices(3)) == 4

    def test_hf_roundtrip_on_v4(self, ctx):
        status, evidence = verify.check_hf_roundtrip(ctx, top=4, trials=50)

        assert status == verify.PASS
        assert evidence['codes'] == 16
        assert evidence['parser_trials'] == 50

    def test_conservativity(self, ctx):
        status, evidence = verify.check_conservativity(ctx, trials=100)

        assert status == verify.PASS
        assert evidence['codes'] == 16
        assert evidence['random_graphs'] == 100

    def test_census_oracle(self, ctx):
        status, evidence = verify.check_census_oracle(ctx)

        assert status == verify.PASS
        assert evidence['tables'][5] == {
            '0': '1', '1': '32768', '2': '255', '3': '28672', '4': '3840',
        }

    def test_probability_trend(self, ctx):
        status, evidence = verify.check_probability_trend(ctx)

        assert status == verify.PASS
        assert evidence['ratio_nu3']['5'] == '7/16'
        assert evidence['rest_below_2^-255']


class TestGraphChecks:
    def test_small_graphs(self):
        graphs = list(verify.small_graphs(2))

        assert len(graphs) == 2 + 16
        assert graphs[:2] == [{0: ()}, {0: (0,)}]

    def test_power_closure(self, ctx):
        status, evidence = verify.check_power_closure(
            ctx, max_nodes=3, trials=100,
        )

        assert status == verify.PASS
        assert evidence['exhaustive_graphs'] == 2 + 16 + 512

    def test_adjoining_a_draw_is_not_checked(self):
        """Only winning nodes are adjoined, so a Quine atom never counts."""

        children = {0: (0,)}

        assert verify._adjoin_failures(
            children, verify.apg.retrograde(children),
        ) == []

    def test_sigma_lower_bound(self, ctx):
        status, evidence = verify.check_sigma_lower_bound(ctx, max_nodes=3)

        assert status == verify.PASS
        assert evidence['graphs'] == 530

    def test_sigma_spectrum(self, ctx):
        status, evidence = verify.check_sigma_spectrum(
            ctx, indices=range(2, 5),
        )

        assert status == verify.PASS
        assert sorted(evidence['witnesses']) == ['2', '3', '4']


class TestModelChecks:
    def test_model_lemmas(self, ctx):
        status, evidence = verify.check_model_lemmas(ctx)

        assert status == verify.PASS
        assert evidence['quine']['nodes'] == 16

    def test_patterns(self, ctx):
        status, evidence = verify.check_patterns(ctx)

        assert status == verify.PASS
        assert evidence['quine@1']['case'] == 2
        assert evidence['wf@2']['pattern'] == 'ALL=W=HW=WF'

    def test_class_lemmas_report_only(self, ctx):
        status, evidence = verify.check_class_lemmas(ctx)

        assert status == verify.REPORT_ONLY
        assert sorted(evidence) == sorted(verify.model.PRESETS)


class TestRunSuite:
    @pytest.mark.parametrize(argnames="threads", argvalues=[1, 2])
    def test_results_in_suite_order(self, threads):
        results = verify.run_suite(
            ['sigma-spectrum', 'lemma1-witness', 'class-lemmas'],
            config=Settings(threads=threads, witness_bound=8),
        )

        assert [r.check for r in results] == [
            'lemma1-witness', 'sigma-spectrum', 'class-lemmas',
        ]
        assert [r.status for r in results] == [
            verify.PASS, verify.PASS, verify.REPORT_ONLY,
        ]

    def test_to_dict_without_timings(self):
        result = verify.CheckResult('lemma2', verify.PASS, {}, runtime_ms=12)

        assert result.to_dict(timings=False) == {
            'check': 'lemma2', 'status': verify.PASS, 'evidence': {},
        }
        assert result.to_dict()['runtime_ms'] == 12
