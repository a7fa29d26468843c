"""Command-line surface of setgame.

Exit codes: 0 on success, 1 on a domain error or a failed check, 2 on a
usage error. Results go to stdout (or --output), diagnostics to stderr.
"""

import argparse
import contextlib
import csv
import json
import logging
import os
import sys

from setgame import apg, census, game, hf, model, verify
from setgame.exceptions import (
    ConfigurationError,
    DomainError,
    GraphFormatError,
    SetGameError
)
from setgame.pictures import CENSUS_STRIP, LEVEL_MAP, Picture
from setgame.settings import Settings, settings
from setgame.utils import decimal, unlimited_int_digits
from setgame.version import __version__


logger = logging.getLogger(__name__)

TEXT = 'text'
JSON = 'json'
CSV = 'csv'

MAX_PLIES_DEFAULT = 64
PICTURE_SIZE_DEFAULT = 256
WITHIN_CLASSES = ('ALL', 'W', 'W_I', 'W_II', 'HW', 'WF')
ENUMERATE_FIELDS = ('code', 'braces', 'winner', 'w')


def natural(text):
    """argparse type for arbitrarily large natural numbers."""

    with unlimited_int_digits():
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(
                'expected a natural number, got {!r}'.format(text)
            )
    if value < 0:
        raise argparse.ArgumentTypeError(
            'expected a natural number, got {}'.format(text)
        )
    return value


def _common_parent(formats):
    parent = argparse.ArgumentParser(add_help=False)
    parent.add_argument(
        '--format', choices=formats, default=TEXT,
        help='output format (default: text)',
    )
    parent.add_argument(
        '--output', metavar='PATH',
        help='write the result to PATH instead of stdout',
    )
    parent.add_argument(
        '--verbose', action='store_true',
        help='log progress to stderr',
    )
    return parent


def build_parser():
    tabular = _common_parent((TEXT, JSON, CSV))
    structured = _common_parent((TEXT, JSON))
    plain = _common_parent((TEXT,))

    parser = argparse.ArgumentParser(
        prog='setgame',
        description='The membership game on hereditarily finite and '
                    'non-well-founded sets.',
    )
    parser.add_argument(
        '--version', action='version',
        version='%(prog)s {}'.format(__version__),
    )
    commands = parser.add_subparsers(dest='command', metavar='COMMAND')
    commands.required = True

    sub = commands.add_parser(
        'enumerate', parents=[tabular],
        help='list every code of V_m with its classification',
    )
    sub.add_argument('--rank', type=natural, required=True, metavar='M')
    sub.add_argument('--cache', metavar='PATH', help='level table cache')
    sub.set_defaults(handler=cmd_enumerate)

    sub = commands.add_parser(
        'classify', parents=[structured], help='classify one set',
    )
    source = sub.add_mutually_exclusive_group(required=True)
    source.add_argument('--set', dest='braces', metavar='BRACES')
    source.add_argument('--code', type=natural, metavar='N')
    sub.set_defaults(handler=cmd_classify)

    sub = commands.add_parser(
        'census', parents=[tabular], help='count |S_(m,nu)| exactly',
    )
    sub.add_argument('--rank', type=natural, required=True, metavar='M')
    sub.add_argument(
        '--method', choices=census.METHODS + ('both',),
        default=census.FORMULA,
    )
    sub.add_argument('--cache', metavar='PATH', help='level table cache')
    sub.set_defaults(handler=cmd_census)

    sub = commands.add_parser(
        'prob', parents=[tabular],
        help='exact ratios |S_(m,nu)| / |V_m| for m = 1..M',
    )
    sub.add_argument('--max-rank', type=natural, required=True, metavar='M')
    sub.set_defaults(handler=cmd_prob)

    graph = commands.add_parser('graph', help='pointed graph operations')
    graph_commands = graph.add_subparsers(dest='graph_command', metavar='OP')
    graph_commands.required = True

    for name, handler, help_text in (
            ('solve', cmd_graph_solve, 'outcome of every node'),
            ('quotient', cmd_graph_quotient, 'bisimulation quotient'),
            ('sigma', cmd_graph_sigma, 'a node with no minimal element'),
            ('report', cmd_graph_report, 'class pattern and lemma report')):
        sub = graph_commands.add_parser(
            name, parents=[structured], help=help_text,
        )
        sub.add_argument(
            '--file', required=True, metavar='F',
            help="graph text or JSON; '-' reads stdin",
        )
        sub.set_defaults(handler=handler)
        if name == 'sigma':
            sub.add_argument(
                '--within', choices=WITHIN_CLASSES, default='ALL',
                help='node class to search (default: ALL)',
            )

    sub = graph_commands.add_parser(
        'witness', parents=[structured],
        help='graph of index nu with no minimal element',
    )
    sub.add_argument('--nu', type=natural, required=True, metavar='N')
    sub.set_defaults(handler=cmd_graph_witness)

    mdl = commands.add_parser('model', help='bounded model stages')
    model_commands = mdl.add_subparsers(dest='model_command', metavar='OP')
    model_commands.required = True

    for name, handler in (('build', cmd_model_build),
                          ('check', cmd_model_check)):
        sub = model_commands.add_parser(name, parents=[structured])
        seed = sub.add_mutually_exclusive_group(required=True)
        seed.add_argument('--seed', choices=sorted(model.PRESETS))
        seed.add_argument('--file', metavar='F')
        sub.add_argument('--stages', type=natural, required=True, metavar='K')
        sub.add_argument('--cap', type=natural, metavar='N')
        sub.set_defaults(handler=handler)

    sub = commands.add_parser(
        'verify', parents=[structured], help='run the check suite',
    )
    sub.add_argument(
        '--suite', default='all', metavar='LIST',
        help="comma-separated check ids, or 'all'",
    )
    sub.add_argument(
        '--no-timings', action='store_true',
        help='leave runtime_ms out of the report',
    )
    sub.set_defaults(handler=cmd_verify)

    sub = commands.add_parser(
        'play', parents=[plain], help='play the game against the engine',
    )
    start = sub.add_mutually_exclusive_group(required=True)
    start.add_argument('--set', dest='braces', metavar='BRACES')
    start.add_argument('--graph', metavar='F')
    sub.add_argument('--node', metavar='ID')
    sub.add_argument(
        '--max-plies', type=natural, default=MAX_PLIES_DEFAULT, metavar='N',
    )
    sub.set_defaults(handler=cmd_play)

    sub = commands.add_parser(
        'render', parents=[plain], help='draw a picture of the hierarchy',
    )
    sub.add_argument('picture', choices=(LEVEL_MAP, CENSUS_STRIP))
    sub.add_argument('--out', required=True, metavar='FILE')
    sub.add_argument('--rank', type=natural, default=4, metavar='M')
    sub.add_argument(
        '--size', type=natural, default=PICTURE_SIZE_DEFAULT, metavar='N',
    )
    sub.set_defaults(handler=cmd_render)

    return parser


class Session(object):
    """Streams of one invocation."""

    def __init__(self, args, stdin, stdout, stderr):
        self.args = args
        self.stdin = stdin
        self.stdout = stdout
        self.stderr = stderr

    @contextlib.contextmanager
    def output(self):
        if self.args.output:
            with open(self.args.output, 'w', encoding='utf-8',
                      newline='') as stream:
                yield stream
        else:
            yield self.stdout

    def write_json(self, data):
        with self.output() as stream, unlimited_int_digits():
            json.dump(data, stream, indent=2, ensure_ascii=False)
            stream.write('\n')

    def write_lines(self, lines):
        with self.output() as stream:
            for line in lines:
                stream.write(line + '\n')

    def read_text(self, path):
        if path == '-':
            return self.stdin.read()
        try:
            with open(path, encoding='utf-8') as stream:
                return stream.read()
        except UnicodeDecodeError as e:
            raise GraphFormatError(
                '{path} is not UTF-8 text: {reason}'.format(
                    path=path,
                    reason=e.reason,
                )
            )


def read_graph(session, path):
    text = session.read_text(path)
    if text.lstrip().startswith('{'):
        return apg.Apg.from_json(text)
    return apg.Apg.from_text(text)


def load_level(m, cache=None):
    """Classifies V_m, reusing or refreshing a JSON cache file."""

    hf.level_table(m)

    if cache and os.path.exists(cache):
        try:
            with open(cache, encoding='utf-8') as stream:
                data = json.load(stream)
            cached_m = data['m']
            indices = data['indices']
        except (ValueError, KeyError, TypeError):
            raise ConfigurationError(
                'cache file {} is malformed; delete it'.format(cache)
            )
        if cached_m >= m and len(indices) == hf.level_size(cached_m):
            logger.debug('V_%d read from cache %s', m, cache)
            return game.LevelClassification(
                m, indices[:hf.level_size(m)],
            )

    level = game.classify_level(m)

    if cache:
        with open(cache, 'w', encoding='utf-8') as stream:
            json.dump({'m': m, 'indices': list(level.indices)}, stream)
        logger.debug('V_%d written to cache %s', m, cache)

    return level


def cmd_enumerate(session):
    args = session.args
    level = load_level(args.rank, args.cache)
    rows = [
        {
            'code': code,
            'braces': hf.to_braces(code),
            'winner': c.winner.value,
            'w': c.w,
        }
        for code, c in level
    ]

    if args.format == JSON:
        session.write_json({'m': args.rank, 'sets': rows})
    elif args.format == CSV:
        with session.output() as stream:
            writer = csv.DictWriter(
                stream, fieldnames=ENUMERATE_FIELDS, lineterminator='\n',
            )
            writer.writeheader()
            writer.writerows(rows)
    else:
        session.write_lines(
            '{code} {braces} winner={winner} w={w}'.format(**row)
            for row in rows
        )
    return 0


def cmd_classify(session):
    args = session.args
    value = hf.parse_braces(args.braces) if args.braces else args.code
    result = game.classify(value)

    if args.format == JSON:
        session.write_json({
            'set': hf.to_braces(value),
            'winner': result.winner.value,
            'w': result.w,
        })
    else:
        session.write_lines([str(result)])
    return 0


def _census_tables(args):
    if args.method == census.FORMULA:
        return [census.census_formula(args.rank)]

    level = load_level(args.rank, args.cache)
    brute = census.CensusTable(
        m=args.rank, counts=level.counts(), method=census.BRUTE,
    )
    if args.method == census.BRUTE:
        return [brute]
    return [brute, census.census_formula(args.rank)]


def _census_text(table):
    yield 'm={m} method={method} total={total}'.format(
        m=table.m,
        method=table.method,
        total=decimal(table.total),
    )
    for nu, count in table.counts.items():
        yield 'nu={nu} count={count}'.format(nu=nu, count=decimal(count))


def cmd_census(session):
    args = session.args
    tables = _census_tables(args)

    if args.format == JSON:
        with session.output() as stream:
            census.write_json(tables, stream)
    elif args.format == CSV:
        with session.output() as stream:
            census.write_csv(tables, stream)
    else:
        session.write_lines(
            line for table in tables for line in _census_text(table)
        )

    if len(tables) == 2 and tables[0] != tables[1]:
        session.stderr.write(
            'error: brute and formula tables differ at m={}\n'.format(
                args.rank,
            )
        )
        return 1
    return 0


def _ratio_text(value):
    return '{}/{}'.format(decimal(value.numerator), decimal(value.denominator))


def cmd_prob(session):
    args = session.args
    if args.max_rank < 1:
        raise DomainError('--max-rank must be at least 1')
    ranks = range(1, args.max_rank + 1)

    if args.format == JSON:
        session.write_json([census.prob_table(m).to_dict() for m in ranks])
    elif args.format == CSV:
        with session.output() as stream:
            census.write_csv([census.census_formula(m) for m in ranks], stream)
    else:
        lines = []
        for m in ranks:
            table = census.prob_table(m)
            for nu, ratio in table.ratios.items():
                lines.append(
                    'm={m} nu={nu} ratio={ratio} distance={distance}'.format(
                        m=m,
                        nu=nu,
                        ratio=_ratio_text(ratio),
                        distance=_ratio_text(table.distance(nu)),
                    )
                )
        session.write_lines(lines)
    return 0


def cmd_graph_solve(session):
    g = read_graph(session, session.args.file)
    outcomes = apg.solve(g)

    if session.args.format == JSON:
        session.write_json({
            v: {'outcome': o.kind.value, 'w': o.w}
            for v, o in outcomes.items()
        })
    else:
        session.write_lines(
            '{} {}'.format(v, outcome) for v, outcome in outcomes.items()
        )
    return 0


def cmd_graph_quotient(session):
    g = read_graph(session, session.args.file)
    q = apg.bisim_quotient(g)

    if session.args.format == JSON:
        data = q.to_json()
        data['quotient_map'] = q.graph['quotient_map']
        session.write_json(data)
    else:
        lines = q.to_text().splitlines()
        lines.extend(
            '# class {} {}'.format(v, rep)
            for v, rep in q.graph['quotient_map'].items()
        )
        session.write_lines(lines)
    return 0


def _class_nodes(g, name):
    outcomes = apg.solve(g)
    winning = {v for v, o in outcomes.items() if not o.is_draw}

    if name == 'ALL':
        return set(g.nodes)
    if name == 'W':
        return winning
    if name == 'W_I':
        return {v for v in winning if outcomes[v].w % 2}
    if name == 'W_II':
        return {v for v in winning if outcomes[v].w % 2 == 0}
    if name == 'HW':
        return apg.hw_nodes(g, outcomes)
    return apg.wellfounded_nodes(g)


def cmd_graph_sigma(session):
    args = session.args
    g = read_graph(session, args.file)
    found = apg.sigma(g, _class_nodes(g, args.within))
    spectrum = apg.sigma_spectrum(g)

    if args.format == JSON:
        session.write_json({
            'within': args.within,
            'witness': found,
            'spectrum': spectrum,
        })
    else:
        session.write_lines([
            'witness found: {}'.format(found) if found is not None
            else 'no witness in truncation',
            'spectrum: {}'.format(' '.join(map(str, spectrum)) or '-'),
        ])
    return 0


def _flag(value):
    return 'true' if value else 'false'


def cmd_graph_report(session):
    g = read_graph(session, session.args.file)
    report = apg.pattern_report(g)
    lemmas = model.class_lemma_report(g)

    if session.args.format == JSON:
        data = report.to_dict()
        data['lemmas'] = lemmas
        data['note'] = model.TRUNCATION_NOTE
        session.write_json(data)
        return 0

    lines = [
        'pattern {}'.format(report.pattern),
        'case {}'.format(report.case if report.case else 'none'),
    ]
    lines.extend(
        '{} {}'.format(name, _flag(value))
        for name, value in report.regularity.items()
    )
    lines.append(
        'spectrum {}'.format(' '.join(map(str, report.spectrum)) or '-')
    )
    lines.extend(
        '{name}: left={left} right={right}'.format(
            name=name,
            left=_flag(sides['left']),
            right=_flag(sides['right']),
        )
        for name, sides in lemmas.items()
    )
    session.write_lines(lines)
    return 0


def cmd_graph_witness(session):
    g = apg.sigma_witness(session.args.nu)

    if session.args.format == JSON:
        session.write_json(g.to_json())
    else:
        session.write_lines(g.to_text().splitlines())
    return 0


def _build_model(session):
    args = session.args
    if args.seed:
        seed = model.preset(args.seed)
    else:
        seed = read_graph(session, args.file)
    return model.build(seed, args.stages, cap=args.cap)


def cmd_model_build(session):
    built = _build_model(session)

    with session.output() as stream:
        if session.args.format == JSON:
            stream.write(built.to_json())
        else:
            stream.write(built.to_text())
    return 0


def model_checks(built):
    """Runs every structural check of a built model."""

    checks = {
        'end_extension': model.check_end_extension(built),
        'extensionality': model.check_extensionality(built),
        'stability': model.check_stability(built),
    }
    for alpha in range(built.stages):
        checks['thickness({})'.format(alpha)] = model.check_thickness(
            built, alpha,
        )

    reflection = model.check_reflection(built) if built.stages else None
    return checks, reflection


def cmd_model_check(session):
    built = _build_model(session)
    checks, reflection = model_checks(built)
    classified = model.classify_model(built)
    passed = all(checks.values()) and (
        reflection is None or reflection.passed
    )

    if session.args.format == JSON:
        session.write_json({
            'nodes': len(built),
            'stages': built.stages,
            'checks': checks,
            'reflection': reflection.to_dict() if reflection else None,
            'pattern': classified.to_dict(),
            'passed': passed,
        })
    else:
        lines = ['nodes {}'.format(len(built))]
        lines.extend(
            '{} {}'.format(name, _flag(value))
            for name, value in checks.items()
        )
        if reflection is not None:
            lines.extend(
                'reflection {statement}: M_1={first} M_k={last} '
                '{expectation} {holds}'.format(
                    statement=e.statement,
                    first=_flag(e.at_first),
                    last=_flag(e.at_last),
                    expectation=e.expectation,
                    holds='holds' if e.holds else 'fails',
                )
                for e in reflection.entries
            )
        lines.append('pattern {}'.format(classified.pattern.pattern))
        lines.append('spectrum shape {}'.format(classified.shape))
        lines.append('# {}'.format(model.TRUNCATION_NOTE))
        session.write_lines(lines)

    if not passed:
        session.stderr.write('error: model checks failed\n')
        return 1
    return 0


def cmd_verify(session):
    args = session.args
    names = [n.strip() for n in args.suite.split(',') if n.strip()]
    results = verify.run_suite(names)
    timings = not args.no_timings

    if args.format == JSON:
        session.write_json([r.to_dict(timings=timings) for r in results])
    else:
        session.write_lines(
            '{check} {status}{runtime}'.format(
                check=r.check,
                status=r.status,
                runtime=' {} ms'.format(r.runtime_ms) if timings else '',
            )
            for r in results
        )

    if any(r.status == verify.FAIL for r in results):
        session.stderr.write('error: some checks failed\n')
        return 1
    return 0


class MembershipPlay(object):
    """Play on a hereditarily finite set: positions are HFSet values."""

    def __init__(self, start):
        self.start = start

    def moves(self, position):
        return list(position)

    def label(self, position):
        return hf.to_braces(position)

    def comment(self, position):
        return str(game.classify(position))

    def reply(self, position):
        return game.optimal_move(position)

    def parse(self, text):
        return hf.parse_braces(text)


class GraphPlay(object):
    """Play on a pointed graph: positions are node ids."""

    def __init__(self, g, start):
        self.g = g
        self.start = start
        self.outcomes = apg.solve(g)

    def moves(self, position):
        return self.g.children(position)

    def label(self, position):
        return position

    def comment(self, position):
        return str(self.outcomes[position])

    def reply(self, position):
        return self.g.optimal_move(position, self.outcomes)

    def parse(self, text):
        return text


def _ask(session, play, options):
    """Prompts until the human names a legal move; None on end of input."""

    for i, option in enumerate(options, start=1):
        session.stdout.write('  {}) {}\n'.format(i, play.label(option)))

    while True:
        session.stdout.write('your move> ')
        session.stdout.flush()
        line = session.stdin.readline()
        if not line:
            return None

        text = line.strip()
        if text.isdigit() and 1 <= int(text) <= len(options):
            return options[int(text) - 1]

        try:
            choice = play.parse(text)
        except SetGameError:
            choice = None
        if choice in options:
            return choice

        session.stdout.write('not a legal move: {}\n'.format(text))


def run_play(session, play, max_plies):
    """Human plays I, the engine plays II; prints each ply."""

    position = play.start
    history = []
    players = ('I', 'II')

    for ply in range(max_plies + 1):
        mover = players[ply % 2]
        other = players[(ply + 1) % 2]
        session.stdout.write(
            'ply {ply}: position {position} ({comment}); {mover} to move\n'
            .format(
                ply=ply,
                position=play.label(position),
                comment=play.comment(position),
                mover=mover,
            )
        )

        options = play.moves(position)
        if not options:
            session.stdout.write(
                '{mover} cannot move: player {other} wins after {n} '
                'plies\n'.format(mover=mover, other=other, n=len(history))
            )
            return 0

        if ply == max_plies:
            break

        if mover == 'I':
            move = _ask(session, play, options)
            if move is None:
                session.stdout.write('game abandoned\n')
                return 0
        else:
            move = play.reply(position)
            session.stdout.write(
                'engine plays {move} ({comment})\n'.format(
                    move=play.label(move),
                    comment=play.comment(move),
                )
            )

        history.append(move)
        position = move

    session.stdout.write(
        'draw declared after {} plies\n'.format(max_plies)
    )
    return 0


def cmd_play(session):
    args = session.args

    if args.braces:
        play = MembershipPlay(hf.parse_braces(args.braces))
    else:
        g = read_graph(session, args.graph)
        node = args.node if args.node is not None else g.point
        if node is None:
            raise DomainError('graph play needs --node or a point')
        if node not in g:
            raise DomainError('node {!r} is not in the graph'.format(node))
        play = GraphPlay(g, node)

    return run_play(session, play, args.max_plies)


def cmd_render(session):
    args = session.args
    kwargs = {'size': args.size}

    if args.picture == LEVEL_MAP:
        kwargs['rank'] = args.rank
    else:
        kwargs['max_rank'] = args.rank

    picture = Picture(args.picture, **kwargs)
    picture.generate().save(args.out)
    session.stdout.write('wrote {}\n'.format(args.out))
    return 0


def main(argv=None, stdin=None, stdout=None, stderr=None, environ=None):
    """Runs one command and returns its exit code."""

    stdin = sys.stdin if stdin is None else stdin
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code

    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
        stream=stderr,
        force=True,
    )

    session = Session(args, stdin, stdout, stderr)
    try:
        settings.threads = Settings.from_env(environ).threads
        logger.debug('settings: %s', settings.to_dict())
        return args.handler(session)
    except (SetGameError, OSError) as e:
        stderr.write('error: {}\n'.format(e))
        return 1
