from setgame.apg import DRAW, Apg, Outcome, OutcomeKind
from setgame.census import census_brute, census_formula, prob_table
from setgame.game import Classification, Player, classify, witness
from setgame.hf import EMPTY, HFSet, parse_braces, to_braces
from setgame.model import Model, build, preset
from setgame.pictures import CENSUS_STRIP, LEVEL_MAP, Picture
from setgame.settings import Settings, settings
from setgame.version import __version__


__all__ = [
    '__version__',
    'Apg',
    'CENSUS_STRIP',
    'Classification',
    'DRAW',
    'EMPTY',
    'HFSet',
    'LEVEL_MAP',
    'Model',
    'Outcome',
    'OutcomeKind',
    'Picture',
    'Player',
    'Settings',
    'build',
    'census_brute',
    'census_formula',
    'classify',
    'parse_braces',
    'preset',
    'prob_table',
    'settings',
    'to_braces',
    'witness',
]
