"""Desk-scale checks of the winning hierarchy, run as one suite.

Every check returns a status and a JSON-ready evidence payload. A failing
check carries the counterexample and the command that replays it.
"""

import itertools
import logging
import threading
import time
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from setgame import apg, census, game, hf, model
from setgame.exceptions import DomainError
from setgame.settings import settings
from setgame.utils import (
    decimal,
    random_children,
    random_hfset,
    seeded_random
)


logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
REPORT_ONLY = 'report-only'

CENSUS_TOP = 5
SMALL_GRAPH_NODES = 4
SIGMA_SPECTRUM = range(2, 9)
CONSERVATIVITY_TRIALS = 1000
PARSER_TRIALS = 200
MODEL_STAGES = 2


@dataclass
class CheckResult:
    check: str
    status: str
    evidence: object
    runtime_ms: int = 0

    def to_dict(self, timings=True):
        data = {
            'check': self.check,
            'status': self.status,
            'evidence': self.evidence,
        }
        if timings:
            data['runtime_ms'] = self.runtime_ms
        return data


class SuiteContext(object):
    """Shared, lazily computed inputs of the checks."""

    def __init__(self, config=None):
        self.settings = config or settings
        self._lock = threading.Lock()
        self._level = None

    @property
    def level(self):
        """Classification of V_5, computed once."""

        with self._lock:
            if self._level is None:
                self._level = game.classify_level(
                    CENSUS_TOP,
                    threads=self.settings.threads,
                )
            return self._level

    def indices(self, m):
        """Winning indices of V_m, a prefix of the V_5 table."""

        return self.level.indices[:hf.level_size(m)]

    def counts(self, m):
        result = {}
        for w in self.indices(m):
            result[w] = result.get(w, 0) + 1
        return dict(sorted(result.items()))


def _fraction(value):
    return '{}/{}'.format(decimal(value.numerator), decimal(value.denominator))


def _verdict(failures, evidence):
    if failures:
        evidence = dict(evidence, counterexamples=failures[:5])
        return FAIL, evidence
    return PASS, evidence


def check_hf_roundtrip(ctx, top=CENSUS_TOP, trials=PARSER_TRIALS):
    failures = []
    sizes = [hf.level_size(m) for m in range(top + 1)]
    size = sizes[top]

    for code in range(size):
        if hf.encode(hf.elements(code)) != code:
            failures.append({
                'code': code,
                'replay': 'setgame classify --code {}'.format(code),
            })
        r = hf.rank(code)
        for m in range(top + 1):
            if (r < m) != (code < sizes[m]):
                failures.append({'code': code, 'm': m, 'rank': r})
        if any(hf.rank(c) >= r for c in hf.tc(code)):
            failures.append({'code': code, 'property': 'tc rank'})

    rng = seeded_random(ctx.settings.random_seed)
    for _ in range(trials):
        x = random_hfset(rng, 6)
        text = hf.to_braces(x)
        if hf.parse_braces(text) is not x:
            failures.append({'braces': text})

    return _verdict(failures, {
        'codes': size,
        'parser_trials': trials,
        'seed': ctx.settings.random_seed,
    })


def check_rank_bound(ctx):
    failures = [
        {
            'code': code,
            'w': w,
            'rank': hf.rank(code),
            'replay': 'setgame classify --code {}'.format(code),
        }
        for code, w in enumerate(ctx.level.indices)
        if w > hf.rank(code)
    ]
    return _verdict(failures, {'codes': len(ctx.level)})


def check_nonemptiness(ctx):
    failures = []
    realized = {}

    for m in range(1, CENSUS_TOP + 1):
        found = sorted(set(ctx.indices(m)))
        realized[m] = found
        if found != list(range(m)):
            failures.append({'m': m, 'realized': found})

    for m in range(1, settings.COUNT_CAP_DEFAULT + 1):
        counts = census.census_formula(m).counts
        positive = sorted(nu for nu, c in counts.items() if c > 0)
        if positive != list(range(m)):
            failures.append({'m': m, 'formula_positive': positive})

    return _verdict(failures, {'realized': realized})


def check_level_growth(ctx):
    """S_(m+1,nu) \\ S_(m,nu) is nonempty iff 0 = nu = m or 0 < nu <= m."""

    failures = []

    for m in range(CENSUS_TOP):
        lower = ctx.counts(m)
        upper = ctx.counts(m + 1)
        for nu in range(m + 2):
            grows = upper.get(nu, 0) > lower.get(nu, 0)
            expected = (nu == 0 == m) or (0 < nu <= m)
            if grows != expected:
                failures.append({'m': m, 'nu': nu, 'grows': grows})

    return _verdict(failures, {'ranks': list(range(CENSUS_TOP))})


def check_level_membership(ctx):
    """S_(m,nu) as a set lies in S_(m+1,nu+1) \\ S_(m,nu+1) exactly when
    0 = nu < m = 1 or 0 < nu < m."""

    failures = []

    for m in range(1, CENSUS_TOP + 1):
        indices = ctx.indices(m)
        for nu in range(m + 1):
            code = hf.encode(c for c, w in enumerate(indices) if w == nu)
            w = ctx.level.index_of(code)
            observed = w == nu + 1 and hf.rank(code) == m
            expected = (nu == 0 and m == 1) or (0 < nu < m)
            if observed != expected:
                failures.append({'m': m, 'nu': nu, 'w': w})

    return _verdict(failures, {'ranks': list(range(1, CENSUS_TOP + 1))})


def check_census_oracle(ctx):
    failures = []
    tables = {}

    for m in range(1, CENSUS_TOP + 1):
        brute = ctx.counts(m)
        formula = census.census_formula(m).counts
        tables[m] = {str(nu): decimal(c) for nu, c in formula.items()}
        if brute != formula or sum(brute.values()) != hf.level_size(m):
            failures.append({
                'm': m,
                'brute': {str(k): v for k, v in brute.items()},
                'replay': 'setgame census --rank {} --method both'.format(m),
            })

    return _verdict(failures, {'tables': tables})


def check_probability_trend(ctx):
    failures = []
    half = Fraction(1, 2)
    tables = {m: census.prob_table(m) for m in range(1, 7)}

    for m in range(2, 7):
        if tables[m].ratio(1) != half:
            failures.append({'m': m, 'nu': 1, 'ratio': tables[m].ratio(1)})

    thirds = [tables[m].ratio(3) for m in (4, 5, 6)]
    if not thirds[0] < thirds[1] < thirds[2] < half:
        failures.append({'nu': 3, 'ratios': thirds})
    if thirds[1] != Fraction(7, 16):
        failures.append({'m': 5, 'nu': 3, 'ratio': thirds[1]})
    if half - thirds[2] >= Fraction(1, 1 << 200):
        failures.append({'m': 6, 'nu': 3, 'distance': half - thirds[2]})

    for nu in (0, 2, 4, 5):
        for m in range(nu + 1, 6):
            if not tables[m + 1].ratio(nu) < tables[m].ratio(nu):
                failures.append({'m': m, 'nu': nu, 'trend': 'not falling'})

    rest = sum(
        r for nu, r in tables[6].ratios.items() if nu not in (1, 3)
    )
    if rest >= Fraction(1, 1 << 255):
        failures.append({'m': 6, 'rest': rest})

    for failure in failures:
        for key, value in failure.items():
            if isinstance(value, Fraction):
                failure[key] = _fraction(value)
            elif isinstance(value, list):
                failure[key] = [_fraction(v) for v in value]

    return _verdict(failures, {
        'ratio_nu3': {
            str(m): _fraction(tables[m].ratio(3)) for m in (4, 5, 6)
        },
        'rest_below_2^-255': rest < Fraction(1, 1 << 255),
    })


def check_witnesses(ctx):
    bound = ctx.settings.witness_bound
    failures = [
        {'n': n, 'w': game.classify(game.witness(n)).w}
        for n in range(bound + 1)
        if game.classify(game.witness(n)).w != n
    ]
    return _verdict(failures, {'bound': bound})


def _outcome_of(classification):
    return apg.Outcome.from_index(classification.w)


def check_conservativity(ctx, top=4, trials=CONSERVATIVITY_TRIALS):
    failures = []

    for code in range(hf.level_size(top)):
        g = apg.Apg.from_hfset(code)
        q = apg.bisim_quotient(g)
        outcome = apg.solve(q)[q.point]
        if outcome != _outcome_of(game.classify(code)):
            failures.append({'code': code, 'outcome': str(outcome)})

    rng = seeded_random(ctx.settings.random_seed)
    for trial in range(trials):
        children = random_children(
            rng, rng.randint(1, 7), rng.uniform(0.1, 0.6), acyclic=True,
        )
        g = apg.Apg.from_children(children)
        q = apg.bisim_quotient(g)
        quotient_map = q.graph['quotient_map']
        before = apg.solve(g)
        after = apg.solve(q)
        values = {v: g.to_hfset(v) for v in g}

        for v in g:
            expected = _outcome_of(game.classify(values[v]))
            if before[v] != expected or after[quotient_map[v]] != expected:
                failures.append({'trial': trial, 'graph': g.to_text()})
                break
        for u, v in itertools.combinations(g, 2):
            same_block = quotient_map[u] == quotient_map[v]
            if same_block != (values[u] == values[v]):
                failures.append({'trial': trial, 'graph': g.to_text()})
                break

    return _verdict(failures, {
        'codes': hf.level_size(top),
        'random_graphs': trials,
        'seed': ctx.settings.random_seed,
    })


def small_graphs(max_nodes):
    """Yields every child map on nodes 0..n-1 for n = 1..max_nodes."""

    for n in range(1, max_nodes + 1):
        for mask in range(1 << (n * n)):
            yield {
                i: tuple(j for j in range(n) if mask >> (i * n + j) & 1)
                for i in range(n)
            }


def _adjoin(children, members):
    fresh = len(children)
    extended = dict(children)
    extended[fresh] = tuple(members)
    return apg.retrograde(extended)[fresh]


def _subsets(items):
    return itertools.chain.from_iterable(
        itertools.combinations(items, r) for r in range(len(items) + 1)
    )


def _adjoin_failures(children, outcomes):
    """Fresh nodes over winning children must win; over first-player wins
    they must be second-player wins."""

    failures = []
    winning = [v for v, o in outcomes.items() if not o.is_draw]

    for members in _subsets(winning):
        outcome = _adjoin(children, members)
        all_first = all(
            outcomes[v].kind is apg.OutcomeKind.WIN_I for v in members
        )
        if outcome.is_draw or (
                all_first and outcome.kind is not apg.OutcomeKind.WIN_II):
            failures.append({
                'graph': {str(k): list(v) for k, v in children.items()},
                'members': list(members),
                'outcome': str(outcome),
            })
    return failures


def check_power_closure(ctx, max_nodes=SMALL_GRAPH_NODES, trials=None):
    trials = ctx.settings.random_trials if trials is None else trials
    failures = []
    graphs = 0

    for children in small_graphs(max_nodes):
        graphs += 1
        failures.extend(
            _adjoin_failures(children, apg.retrograde(children))
        )

    rng = seeded_random(ctx.settings.random_seed)
    for _ in range(trials):
        size = rng.randint(1, 8)
        children = {
            i: tuple(j for j in range(size) if rng.random() < 0.3)
            for i in range(size)
        }
        outcomes = apg.retrograde(children)
        winning = [v for v, o in outcomes.items() if not o.is_draw]
        members = [v for v in winning if rng.random() < 0.5]
        outcome = _adjoin(children, members)
        if outcome.is_draw:
            failures.append({
                'graph': {str(k): list(v) for k, v in children.items()},
                'members': members,
            })

    return _verdict(failures, {
        'exhaustive_graphs': graphs,
        'random_trials': trials,
        'seed': ctx.settings.random_seed,
    })


def check_sigma_lower_bound(ctx, max_nodes=SMALL_GRAPH_NODES):
    failures = []
    graphs = 0

    for children in small_graphs(max_nodes):
        graphs += 1
        outcomes = apg.retrograde(children)
        for v, outcome in outcomes.items():
            if (not outcome.is_draw and outcome.w <= 1 and
                    apg.has_no_minimal_element(children, v)):
                failures.append({
                    'graph': {str(k): list(t) for k, t in children.items()},
                    'node': v,
                    'w': outcome.w,
                })

    return _verdict(failures, {'graphs': graphs})


def check_sigma_spectrum(ctx, indices=SIGMA_SPECTRUM):
    failures = []
    witnesses = {}

    for nu in indices:
        g = apg.sigma_witness(nu)
        outcome = apg.solve(g)[g.point]
        witnesses[str(nu)] = g.to_text()
        if outcome.is_draw or outcome.w != nu or \
                apg.sigma(g, [g.point]) != g.point:
            failures.append({
                'nu': nu,
                'outcome': str(outcome),
                'replay': 'setgame graph witness --nu {}'.format(nu),
            })

    return _verdict(failures, {'witnesses': witnesses})


def check_model_lemmas(ctx):
    failures = []
    evidence = {}

    for name in model.PRESETS:
        built = model.build(model.preset(name), MODEL_STAGES)
        reflection = model.check_reflection(built)
        results = {
            'nodes': len(built),
            'end_extension': model.check_end_extension(built),
            'extensionality': model.check_extensionality(built),
            'thickness': all(
                model.check_thickness(built, alpha)
                for alpha in range(MODEL_STAGES)
            ),
            'stability': model.check_stability(built),
            'reflection': reflection.passed,
        }
        evidence[name] = results
        if not all(v for k, v in results.items() if k != 'nodes'):
            failures.append({
                'seed': name,
                'results': results,
                'reflection': reflection.to_dict(),
                'replay': 'setgame model check --seed {} --stages {}'.format(
                    name, MODEL_STAGES,
                ),
            })

    quine = model.build(model.preset('quine'), 1)
    if len(quine) != 4:
        failures.append({'seed': 'quine', 'stages': 1, 'nodes': len(quine)})

    quine_k = model.build(model.preset('quine'), MODEL_STAGES)
    entry = model.check_reflection(quine_k).entry('sigma(W_II)')
    if entry.at_first or entry.at_last:
        failures.append({'seed': 'quine', 'sigma(W_II)': entry.to_dict()})

    return _verdict(failures, evidence)


EXPECTED_PATTERNS = {
    'wf': 'ALL=W=HW=WF',
    'quine': 'ALL≠W',
    'unfounded-pair': 'ALL=W=HW≠WF',
}


def check_patterns(ctx):
    failures = []
    evidence = {}

    for name, expected in EXPECTED_PATTERNS.items():
        for stages in range(MODEL_STAGES + 1):
            report = model.classify_model(
                model.build(model.preset(name), stages)
            )
            pattern = report.pattern.pattern
            evidence['{}@{}'.format(name, stages)] = {
                'pattern': pattern,
                'case': report.pattern.case,
                'spectrum': report.spectrum,
            }
            if not pattern.startswith(expected):
                failures.append({'seed': name, 'stages': stages,
                                 'pattern': pattern})

    return _verdict(failures, evidence)


def check_class_lemmas(ctx):
    evidence = {}
    for name in model.PRESETS:
        built = model.build(model.preset(name), MODEL_STAGES)
        evidence[name] = model.class_lemma_report(
            built.truncation(MODEL_STAGES)
        )
    return REPORT_ONLY, evidence


CHECKS = OrderedDict([
    ('hf-roundtrip', check_hf_roundtrip),
    ('lemma5-1', check_rank_bound),
    ('lemma5-2', check_nonemptiness),
    ('lemma5-3', check_level_growth),
    ('lemma5-4', check_level_membership),
    ('lemma6-oracle', check_census_oracle),
    ('theorem2-trend', check_probability_trend),
    ('lemma1-witness', check_witnesses),
    ('apg-conservativity', check_conservativity),
    ('lemma2', check_power_closure),
    ('lemma10-1', check_sigma_lower_bound),
    ('sigma-spectrum', check_sigma_spectrum),
    ('lemma8', check_model_lemmas),
    ('theorem4-patterns', check_patterns),
    ('class-lemmas', check_class_lemmas),
])


def resolve_names(names):
    """Expands 'all' and orders the ids as the suite runs them."""

    if not names or 'all' in names:
        return list(CHECKS)

    unknown = [n for n in names if n not in CHECKS]
    if unknown:
        raise DomainError(
            'unknown check id {unknown}; known: {known}'.format(
                unknown=', '.join(unknown),
                known=', '.join(CHECKS),
            )
        )
    return [n for n in CHECKS if n in names]


def _run_one(name, ctx):
    started = time.perf_counter()
    status, evidence = CHECKS[name](ctx)
    runtime_ms = int((time.perf_counter() - started) * 1000)
    logger.info('%s: %s in %d ms', name, status, runtime_ms)
    return CheckResult(
        check=name,
        status=status,
        evidence=evidence,
        runtime_ms=runtime_ms,
    )


def run_suite(names=None, config=None):
    """Runs the named checks and returns their results in suite order."""

    names = resolve_names(names)
    ctx = SuiteContext(config)
    threads = ctx.settings.threads

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            return list(pool.map(lambda n: _run_one(n, ctx), names))

    return [_run_one(name, ctx) for name in names]
