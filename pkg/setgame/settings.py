import os

from setgame.exceptions import ConfigurationError
from setgame.fields import Field, fields_of
from setgame.validators import (
    MaxValueValidator,
    MinValueValidator,
    TypeValidator
)


THREADS_ENV = 'SETGAME_THREADS'

# |V_5| = 65 536 codes is the last enumerable level, |V_6| = 2^65536 the last
# level whose size is a representable integer.
ENUMERATION_CAP_MAX = 5
COUNT_CAP_MAX = 6


class Settings(object):
    """Caps, bounds and parallelism shared by every operation.

    Args:
        threads: worker threads for level classification and the check
            suite. Results never depend on it.
        enumeration_cap: largest rank m whose level V_m may be enumerated.
        count_cap: largest rank m whose level size may be computed.
        witness_bound: largest index n accepted by the witness builder.
        model_cap: largest node count a built model may reach.
        model_stage_limit: largest stage bound accepted by the builder.
        random_seed: seed of every randomised check.
        random_trials: trial count of randomised checks.

    """

    THREADS_DEFAULT = 1
    ENUMERATION_CAP_DEFAULT = 5
    COUNT_CAP_DEFAULT = 6
    WITNESS_BOUND_DEFAULT = 16
    MODEL_CAP_DEFAULT = 5000
    MODEL_STAGE_LIMIT_DEFAULT = 3
    RANDOM_SEED_DEFAULT = 1729
    RANDOM_TRIALS_DEFAULT = 10000

    threads = Field(
        default=THREADS_DEFAULT,
        validators=[
            TypeValidator(int),
            MinValueValidator(1),
        ]
    )
    enumeration_cap = Field(
        default=ENUMERATION_CAP_DEFAULT,
        validators=[
            TypeValidator(int),
            MinValueValidator(0),
            MaxValueValidator(ENUMERATION_CAP_MAX),
        ]
    )
    count_cap = Field(
        default=COUNT_CAP_DEFAULT,
        validators=[
            TypeValidator(int),
            MinValueValidator(0),
            MaxValueValidator(COUNT_CAP_MAX),
        ]
    )
    witness_bound = Field(
        default=WITNESS_BOUND_DEFAULT,
        validators=[
            TypeValidator(int),
            MinValueValidator(0),
        ]
    )
    model_cap = Field(
        default=MODEL_CAP_DEFAULT,
        validators=[
            TypeValidator(int),
            MinValueValidator(1),
        ]
    )
    model_stage_limit = Field(
        default=MODEL_STAGE_LIMIT_DEFAULT,
        validators=[
            TypeValidator(int),
            MinValueValidator(0),
        ]
    )
    random_seed = Field(
        default=RANDOM_SEED_DEFAULT,
        validators=[
            TypeValidator(int),
        ]
    )
    random_trials = Field(
        default=RANDOM_TRIALS_DEFAULT,
        validators=[
            TypeValidator(int),
            MinValueValidator(0),
        ]
    )

    def __init__(self, threads=None, enumeration_cap=None, count_cap=None,
                 witness_bound=None, model_cap=None, model_stage_limit=None,
                 random_seed=None, random_trials=None):
        self.threads = threads
        self.enumeration_cap = enumeration_cap
        self.count_cap = count_cap
        self.witness_bound = witness_bound
        self.model_cap = model_cap
        self.model_stage_limit = model_stage_limit
        self.random_seed = random_seed
        self.random_trials = random_trials

    @classmethod
    def from_env(cls, environ=None, **kwargs):
        """Builds settings, taking the thread count from SETGAME_THREADS."""

        environ = os.environ if environ is None else environ
        raw = environ.get(THREADS_ENV)

        if raw is not None and 'threads' not in kwargs:
            try:
                kwargs['threads'] = int(raw)
            except ValueError:
                raise ConfigurationError(
                    '{env} must be an integer, got {raw!r}'.format(
                        env=THREADS_ENV,
                        raw=raw,
                    )
                )

        return cls(**kwargs)

    def to_dict(self):
        return {name: getattr(self, name) for name in fields_of(type(self))}


settings = Settings()
