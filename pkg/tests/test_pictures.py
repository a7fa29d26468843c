import pytest
from PIL import Image

import setgame
from setgame import pictures
from setgame.exceptions import ConfigurationError


class TestPicture:
    @pytest.mark.parametrize(
        argnames="picture_type,picture_class,picture_kwargs",
        argvalues=[
            (setgame.LEVEL_MAP, pictures.LevelMap, {'rank': 2}),
            (setgame.CENSUS_STRIP, pictures.CensusStrip, {'max_rank': 3}),
        ]
    )
    def test_picture_class_arg(self, picture_type, picture_class,
                               picture_kwargs):
        """
        'picture_class' should be an instance of the class defined for the
        picture type, and 'generate' should return an Image.Image object.
        """

        picture = setgame.Picture(picture_type, size=8, **picture_kwargs)

        assert isinstance(picture.picture_class, picture_class)
        assert isinstance(picture.generate(), Image.Image)

    @pytest.mark.parametrize(
        argnames="picture_type", argvalues=['portrait', 3],
    )
    def test_unknown_picture_type(self, picture_type):
        """Should raise ConfigurationError for an undefined picture type."""

        with pytest.raises(ConfigurationError, match='picture_type must'):
            setgame.Picture(picture_type, size=8)

    def test_picture_type_choices(self):
        """Should name every known picture type in the error."""

        with pytest.raises(ConfigurationError) as error:
            setgame.Picture('portrait', size=8)

        assert 'level-map, census-strip' in str(error.value)


class TestColorListMixin:
    @pytest.mark.parametrize(
        argnames="color_list,w,color",
        argvalues=[
            (None, 0, (236, 240, 241)),
            (None, 11, (231, 76, 60)),
            (['red', 'blue'], 3, (0, 0, 255)),
        ]
    )
    def test_get_index_color(self, color_list, w, color):
        """Index w should take color_list[w % len(color_list)]."""

        mixin = pictures.ColorListMixin(color_list=color_list)

        assert mixin.get_index_color(w) == color

    @pytest.mark.parametrize(
        argnames="color_list",
        argvalues=[[], ['red', 'no-such-color'], 'red'],
    )
    def test_bad_color_list(self, color_list):
        with pytest.raises(ValueError):
            pictures.ColorListMixin(color_list=color_list)


class TestLevelMap:
    @pytest.fixture(scope="class")
    def img(self):
        return pictures.LevelMap(rank=2, size=4).generate()

    def test_cells_follow_code_order(self, img):
        """Code 0 (w=0) and code 1 (w=1) fill the first row."""

        assert img.getpixel((0, 0)) == (236, 240, 241)
        assert img.getpixel((3, 0)) == (231, 76, 60)

    def test_background_past_last_code(self, img):
        assert img.getpixel((0, 3)) == (0, 0, 0)

    @pytest.mark.parametrize(argnames="rank", argvalues=[0, 6, '2'])
    def test_bad_rank(self, rank):
        with pytest.raises(ValueError):
            pictures.LevelMap(rank=rank, size=4)


class TestCensusStrip:
    @pytest.fixture(scope="class")
    def strip(self):
        return pictures.CensusStrip(max_rank=2, size=10)

    def test_band(self, strip):
        """Segment widths should follow the exact ratios."""

        assert strip.band(1) == [(0, 0, 10)]
        assert strip.band(2) == [(0, 0, 5), (1, 5, 10)]

    def test_generate(self, strip):
        img = strip.generate()

        assert img.getpixel((9, 0)) == (236, 240, 241)
        assert img.getpixel((2, 7)) == (236, 240, 241)
        assert img.getpixel((7, 7)) == (231, 76, 60)

    def test_max_rank_limit(self):
        with pytest.raises(ValueError):
            pictures.CensusStrip(max_rank=7, size=10)
