from setgame.exceptions import ConfigurationError


class Field(object):
    """Validated attribute of settings and pictures.

    A value of None falls back to the default. Validators see the final
    value, in order; the first ValueError they raise is re-raised as
    ConfigurationError and the attribute keeps its previous value.

    Args:
        validators: list of validators called as validator(value, name).
        default: default value or a callable returning it.

    """

    def __init__(self, validators=None, default=None):
        self.validators = validators
        self.default = default
        self.name = None

    def __set_name__(self, owner, name):
        self.name = name

    def __get__(self, instance, owner):
        if instance is None:
            return self
        return instance.__dict__.get(self.name)

    def __set__(self, instance, value):
        value = self.get_default() if value is None else value
        self.run_validators(value)
        instance.__dict__[self.name] = value

    def get_default(self):
        if callable(self.default):
            return self.default()
        return self.default

    def run_validators(self, value):
        if value is None or not self.validators:
            return

        for validator in self.validators:
            try:
                validator(value, self.name)
            except ConfigurationError:
                raise
            except ValueError as e:
                raise ConfigurationError(str(e)) from e


def fields_of(cls):
    """Returns the Field attributes of cls and its bases, by name, in
    definition order."""

    found = {}
    for klass in reversed(cls.__mro__):
        for name, attr in vars(klass).items():
            if isinstance(attr, Field):
                found[name] = attr
    return found
