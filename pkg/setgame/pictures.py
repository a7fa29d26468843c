import abc
import math

from PIL import Image, ImageColor, ImageDraw

from setgame.census import prob_table
from setgame.fields import Field
from setgame.game import classify_level
from setgame.validators import (
    ChoiceValidator,
    ColorListValidator,
    ColorValidator,
    MaxValueValidator,
    MinValueValidator,
    TypeValidator
)


COLOR_LIST_FLAT = [
    '#ecf0f1', '#e74c3c', '#3498db', '#f1c40f', '#2ecc71',
    '#9b59b6', '#e67e22', '#1abc9c', '#34495e', '#95a5a6',
]

LEVEL_MAP = 'level-map'
CENSUS_STRIP = 'census-strip'


class BasePicture(object, metaclass=abc.ABCMeta):
    """Abstract class for pictures of the winning hierarchy.

    Args:
        size: output image side in pixels.

    """

    SIZE_MIN = 1

    size = Field(
        validators=[
            TypeValidator(int),
            MinValueValidator(SIZE_MIN),
        ]
    )

    def __init__(self, size):
        self.size = size
        self.img = self.get_initial_img()

    def get_initial_img(self):
        """
        Returns new PIL.Image.Image object for self.img from __init__ method.
        """

        return Image.new(
            mode='RGB',
            size=tuple([self.size]) * 2,
        )

    @abc.abstractmethod
    def generate(self):
        """Draws the picture and returns the PIL.Image.Image object."""

        pass


class ColorListMixin(object):
    """Mixin mapping winning indices to colors.

    Args:
        color_list: list of colors; index w gets color_list[w % len].

    """

    COLOR_LIST_DEFAULT = COLOR_LIST_FLAT

    color_list = Field(
        default=COLOR_LIST_DEFAULT,
        validators=[
            TypeValidator((list, tuple)),
            ColorListValidator(),
        ]
    )

    def __init__(self, color_list=None, *args, **kwargs):
        self.color_list = color_list
        super(ColorListMixin, self).__init__(*args, **kwargs)

    def get_index_color(self, w):
        """Returns the RGB color of winning index w."""

        color = self.color_list[w % len(self.color_list)]
        return ImageColor.getrgb(color)


class LevelMap(ColorListMixin, BasePicture):
    """Paints every code of V_m as one cell, in code order, row by row.

    Args:
        rank: the level m.
        background_color: color of the cells past the last code.

    """

    RANK_MAX = 5
    BACKGROUND_COLOR_DEFAULT = 'black'

    rank = Field(
        validators=[
            TypeValidator(int),
            MinValueValidator(1),
            MaxValueValidator(RANK_MAX),
        ]
    )
    background_color = Field(
        default=BACKGROUND_COLOR_DEFAULT,
        validators=[
            TypeValidator(str),
            ColorValidator(),
        ]
    )

    def __init__(self, rank, background_color=None, *args, **kwargs):
        self.rank = rank
        self.background_color = background_color
        super(LevelMap, self).__init__(*args, **kwargs)

    @property
    def side(self):
        """Cells on each axis."""

        return math.isqrt(len(self.level) - 1) + 1

    def generate(self):
        self.level = classify_level(self.rank)
        side = self.side
        background = ImageColor.getrgb(self.background_color)

        cells = [self.get_index_color(w) for w in self.level.indices]
        cells.extend([background] * (side * side - len(cells)))

        grid = Image.new(mode='RGB', size=(side, side))
        grid.putdata(cells)

        self.img = grid.resize(
            size=tuple([self.size]) * 2,
            resample=Image.NEAREST,
        )
        return self.img


class CensusStrip(ColorListMixin, BasePicture):
    """Draws one band per rank m = 1..max_rank, split into segments whose
    widths follow the exact ratios |S_(m,nu)| / |V_m|.

    Args:
        max_rank: the last rank drawn.

    """

    MAX_RANK_MAX = 6

    max_rank = Field(
        validators=[
            TypeValidator(int),
            MinValueValidator(1),
            MaxValueValidator(MAX_RANK_MAX),
        ]
    )

    def __init__(self, max_rank, *args, **kwargs):
        self.max_rank = max_rank
        super(CensusStrip, self).__init__(*args, **kwargs)

    def band(self, m):
        """Returns (nu, x0, x1) spans of the band of rank m."""

        ratios = prob_table(m).ratios
        spans = []
        total = 0

        for nu, ratio in ratios.items():
            x0 = math.floor(total * self.size)
            total += ratio
            x1 = math.floor(total * self.size)
            if x1 > x0:
                spans.append((nu, x0, x1))

        return spans

    def generate(self):
        draw = ImageDraw.Draw(self.img)
        height = self.size / self.max_rank

        for row, m in enumerate(range(1, self.max_rank + 1)):
            y0 = round(row * height)
            y1 = round((row + 1) * height)
            if y1 <= y0:
                continue

            for nu, x0, x1 in self.band(m):
                draw.rectangle(
                    xy=(x0, y0, x1 - 1, y1 - 1),
                    fill=self.get_index_color(nu),
                )

        return self.img


class Picture(object):

    """Factory of picture classes.

    Args:
        picture_type: LEVEL_MAP or CENSUS_STRIP.
        kwargs: keyword arguments are passed to the picture class.

    """

    PICTURE_MAP = {
        LEVEL_MAP: LevelMap,
        CENSUS_STRIP: CensusStrip,
    }

    picture_type = Field(
        validators=[
            TypeValidator(str),
            ChoiceValidator(PICTURE_MAP),
        ]
    )

    def __init__(self, picture_type, **kwargs):
        self.picture_type = picture_type
        self.picture_class = self.PICTURE_MAP[self.picture_type](**kwargs)
        self.kwargs = kwargs

    def generate(self):
        """Implements calling the generate method of the picture class."""

        return self.picture_class.generate()
