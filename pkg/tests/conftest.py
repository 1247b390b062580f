import random

import pytest

from starsolve.matrix import Matrix


@pytest.fixture
def rng():
    return random.Random(20260817)


def gr(re_num, re_den=1, im_num=0, im_den=1):
    """Entry quadruple in the exact file encoding."""
    return [str(re_num), str(re_den), str(im_num), str(im_den)]


def exact_doc_matrix(rows):
    """Nested [[GaussianRational-like]] to the quadruple encoding."""
    from starsolve import formats
    m = Matrix.exact(rows)
    return formats.encode_matrix(m)
