from PIL import ImageColor


class MinValueValidator(object):

    def __init__(self, limit_value):
        self.limit_value = limit_value

    def __call__(self, value, field_name):
        if value < self.limit_value:
            raise ValueError(
                '{field_name} must not be less than {limit_value}'.format(
                    field_name=field_name,
                    limit_value=self.limit_value,
                )
            )


class MaxValueValidator(object):

    def __init__(self, limit_value):
        self.limit_value = limit_value

    def __call__(self, value, field_name):
        if value > self.limit_value:
            raise ValueError(
                '{field_name} must not be greater than {limit_value}'.format(
                    field_name=field_name,
                    limit_value=self.limit_value,
                )
            )


class TypeValidator(object):

    def __init__(self, required_type):
        self.required_type = required_type

    def __call__(self, value, field_name):
        # bool is an int subclass but never a valid count or bound
        if isinstance(value, bool) and self.required_type is int:
            raise ValueError(
                '{field_name} must be int type.'.format(field_name=field_name)
            )

        if not isinstance(value, self.required_type):
            if isinstance(self.required_type, tuple):
                types = ', '.join([r.__name__ for r in self.required_type])
            else:
                types = self.required_type.__name__

            raise ValueError(
                '{field_name} must be {types} type.'.format(
                    field_name=field_name,
                    types=types,
                )
            )


class ChoiceValidator(object):

    def __init__(self, choices):
        self.choices = tuple(choices)

    def __call__(self, value, field_name):
        if value not in self.choices:
            raise ValueError(
                '{field_name} must be one of {choices}.'.format(
                    field_name=field_name,
                    choices=', '.join(str(c) for c in self.choices),
                )
            )


class ColorValidator(object):

    def __call__(self, value, field_name):
        if value:
            try:
                ImageColor.getcolor(value, 'RGB')
            except Exception as e:
                raise ValueError(
                    '{field_name} {e}'.format(field_name=field_name, e=e)
                )


class ColorListValidator(ColorValidator):
    """Checks every color of a nonempty color list."""

    def __call__(self, value, field_name):
        if not value:
            raise ValueError(
                '{field_name} must hold at least one color.'.format(
                    field_name=field_name,
                )
            )
        for color in value:
            super().__call__(color, field_name)
