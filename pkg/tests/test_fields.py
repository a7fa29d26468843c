import pytest

from setgame import fields, validators
from setgame.exceptions import ConfigurationError


class TestField:
    def setup_method(self):
        self.field = fields.Field()

    @pytest.mark.parametrize(
        argnames="default,result",
        argvalues=[
            (None, None),
            (1, 1),
            (0, 0),
            ('', ''),
            (lambda: 1, 1),
        ]
    )
    def test_get_default_method(self, default, result):
        """
        Should return a default value if it passed else return None.
        If a passed default value is callable then should call it and
        return a result of callable.
        """

        self.field.default = default
        assert self.field.get_default() == result

    def test_run_validators(self):
        """Should run every validator on a passed value."""

        self.field.validators = [validators.MinValueValidator(limit_value=2)]

        with pytest.raises(ValueError):
            self.field.run_validators(value=1)

    def test_run_validators_skips_none(self):
        """Should not validate a missing value."""

        self.field.validators = [validators.TypeValidator(int)]
        assert self.field.run_validators(value=None) is None

    @pytest.mark.parametrize(
        argnames="default,value,result",
        argvalues=[
            (1, 2, 2),
            (1, None, 1),
            (None, None, None),
            (None, 1, 1),
        ]
    )
    def test_set_instance_attribute(self, default, value, result):
        """
        An instance attribute should be equal to a passed value or, when the
        value is None, to the default value.
        """

        holder = type('Holder', (object,), {
            'field': fields.Field(default=default),
        })()
        holder.field = value

        assert holder.field == result

    def test_class_access_returns_field(self):
        """Should return the descriptor itself on class access."""

        field = fields.Field(default=3)
        holder = type('Holder', (object,), {'field': field})

        assert holder.field is field

    def test_failed_validation_keeps_previous_value(self):
        """Should leave the attribute untouched when validation fails."""

        holder = type('Holder', (object,), {
            'field': fields.Field(
                default=5,
                validators=[validators.MinValueValidator(1)],
            ),
        })()
        holder.field = None

        with pytest.raises(ValueError):
            holder.field = 0
        assert holder.field == 5

    def test_validation_error_is_configuration_error(self):
        """Should re-raise validator errors as ConfigurationError."""

        self.field.name = 'threads'
        self.field.validators = [validators.MinValueValidator(1)]

        with pytest.raises(ConfigurationError, match='threads must not'):
            self.field.run_validators(value=0)


def test_fields_of_follows_bases():
    """Should list inherited fields first, in definition order."""

    base = type('Base', (object,), {'a': fields.Field(), 'b': fields.Field()})
    child = type('Child', (base,), {'c': fields.Field()})

    assert list(fields.fields_of(child)) == ['a', 'b', 'c']
