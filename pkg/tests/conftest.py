from fractions import Fraction

import pytest

from blockising.core import ConstantKernel, LinearKernel, SpinConfiguration

SAMPLE = SpinConfiguration.from_string("-+-+--++-++", -5)
HALF, THIRD, QUARTER = Fraction(1, 2), Fraction(1, 3), Fraction(1, 4)


@pytest.fixture(params=["constant", "linear"])
def nn_kernel(request):
    """A nearest-neighbour kernel with an admissible ``u`` (``u < q`` for the linear one)."""
    if request.param == "constant":
        return ConstantKernel(), HALF
    return LinearKernel(), QUARTER
