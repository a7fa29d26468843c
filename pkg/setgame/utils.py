import contextlib
import random
import sys

from setgame.hf import EMPTY, HFSet


@contextlib.contextmanager
def unlimited_int_digits():
    """Lifts the interpreter's cap on int/str conversion length."""

    get_limit = getattr(sys, 'get_int_max_str_digits', None)

    if get_limit is None:
        yield
        return

    previous = get_limit()
    sys.set_int_max_str_digits(0)
    try:
        yield
    finally:
        sys.set_int_max_str_digits(previous)


def decimal(number):
    """Returns the decimal text of an arbitrarily large integer."""

    with unlimited_int_digits():
        return str(number)


def seeded_random(seed):
    return random.Random(seed)


def random_hfset(rng, max_rank, max_width=4):
    """Generates a random hereditarily finite set of rank at most max_rank."""

    if max_rank <= 0:
        return EMPTY

    width = rng.randint(0, max_width)
    return HFSet(
        random_hfset(rng, rng.randint(0, max_rank - 1), max_width)
        for _ in range(width)
    )


def random_children(rng, size, density=0.3, acyclic=False):
    """Generates a random child map on nodes 'n0'..'n<size-1>'.

    With `acyclic`, edges only point to lower-numbered nodes, so every node
    is well-founded.
    """

    names = ['n{}'.format(i) for i in range(size)]
    children = {}

    for i, name in enumerate(names):
        targets = names[:i] if acyclic else names
        children[name] = [t for t in targets if rng.random() < density]

    return children
