# copyright ############################### #
# This file is part of the Nlwaves Package. #
# Copyright (c) 2025.                       #
# ######################################### #

import numpy as np
import pytest

from nlwaves import InhomogeneousOperator, KernelModel, TwoSidedExponential, Nonlinearity
from nlwaves.tools import count_required_arguments, has_variable_length_positional_arguments, assert_callback


def _profile_1(xi):
    pass
def _profile_2(xi, scale=2.):
    pass
def _profile_3(xi, eta):
    pass
def _profile_4(*args):
    pass
def _profile_5(xi, /, *, eta=0.3):
    pass
def _profile_6(xi, eta, *args, **kwargs):
    pass
def _profile_7(**kwargs):
    pass


@pytest.mark.parametrize("func, required, variable", [
    (_profile_1, 1, False), (_profile_2, 1, False), (_profile_3, 2, False), (_profile_4, 0, True),
    (_profile_5, 1, False), (_profile_6, 2, True), (_profile_7, 0, False), (lambda: None, 0, False)])
def test_signature_inspection(func, required, variable):
    assert count_required_arguments(func) == required
    assert has_variable_length_positional_arguments(func) == variable


def test_assert_callback():
    for func in [_profile_1, _profile_2, _profile_4, _profile_5, np.tanh, abs]:
        assert_callback(func, 1, 'A_of_xi')
    with pytest.raises(TypeError, match="A_of_xi must be callable, got float"):
        assert_callback(2., 1, 'A_of_xi')
    with pytest.raises(TypeError, match="requires 2"):
        assert_callback(_profile_3, 1, 'A_of_xi')
    with pytest.raises(TypeError, match="must accept 1 positional"):
        assert_callback(_profile_7, 1, 'A_of_xi')


def test_callbacks_validated_on_construction():
    exp1 = KernelModel.scalar(TwoSidedExponential(1.))
    with pytest.raises(TypeError, match="kernel_of_xi must accept 1"):
        InhomogeneousOperator(-1., lambda xi, eta: exp1)
    assert InhomogeneousOperator(np.tanh, exp1).A(0.3)[0, 0] == np.tanh(0.3)
    with pytest.raises(TypeError):
        Nonlinearity(lambda u, v: u, lambda u: u)
