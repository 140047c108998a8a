import math

import numpy as np
import pytest

from qcmm.core.kinematics import (
    FunctionModel,
    ParametricD7Model,
    coordinate_derivatives,
    quadrispeed_sq,
    sample_kinematics,
    speed,
    velocity,
)
from qcmm.core.models import BewMode, BewModel, BewSpec, bew_d7
from qcmm.core.state_core import D7Params
from qcmm.errors import DegenerateClock, DomainError

INTERIOR = np.linspace(0.05, 0.95, 20)


def wavy(theta: float) -> D7Params:
    return D7Params(
        p1z=0.3 * math.sin(theta),
        p2z=0.2 * math.cos(2 * theta),
        mxx=0.25 * math.sin(1.5 * theta),
        myy=-0.2 * math.cos(theta),
        mxy=0.1 * math.sin(3 * theta),
        myx=0.05 * theta ** 2,
        mzz=0.4 * math.sin(theta),
    )


def wavy_rate(theta: float) -> D7Params:
    return D7Params(
        p1z=0.3 * math.cos(theta),
        p2z=-0.4 * math.sin(2 * theta),
        mxx=0.375 * math.cos(1.5 * theta),
        myy=0.2 * math.sin(theta),
        mxy=0.3 * math.cos(3 * theta),
        myx=0.1 * theta,
        mzz=0.4 * math.cos(theta),
    )


def numeric_bew_x():
    return FunctionModel(bew_d7, 0.0, 1.0)


def numeric_bew_decay(gamma=1.0):
    return FunctionModel(lambda t: bew_d7(math.exp(-gamma * t)), 0.0, 5.0)


def test_models_satisfy_protocol():
    assert isinstance(numeric_bew_x(), ParametricD7Model)
    assert isinstance(BewModel(), ParametricD7Model)


@pytest.mark.parametrize("model", [numeric_bew_x(), numeric_bew_decay()], ids=["parameter_x", "decay"])
def test_bew_speeds_by_finite_differences(model):
    for theta in INTERIOR:
        assert speed(model, theta, 1, transposed=True) == pytest.approx(0.0, abs=1e-6)
        assert speed(model, theta, 2, transposed=True) == pytest.approx(2.0, abs=1e-6)
        assert quadrispeed_sq(model, theta, 1, transposed=True) == pytest.approx(1.0, abs=1e-6)
        assert quadrispeed_sq(model, theta, 2, transposed=True) == pytest.approx(-3.0, abs=1e-6)
        assert speed(model, theta, 1) == pytest.approx(2.0, abs=1e-6)
        assert speed(model, theta, 2) == pytest.approx(0.0, abs=1e-6)


def test_bew_transposed_velocity_direction():
    v = velocity(BewModel(), 0.5, 2, transposed=True)
    assert v == pytest.approx((0.0, 2.0, 0.0))


@pytest.mark.parametrize("mode", list(BewMode))
def test_bew_speeds_analytic_all_modes(mode):
    model = BewModel(BewSpec(mode, gamma=1.5))
    lo, hi = model.domain
    for theta in np.linspace(lo, hi, 11):
        sample = sample_kinematics(model, theta)
        assert sample.degenerate == ()
        assert sample.speed1t == 0.0
        assert sample.speed2t == 2.0
        assert sample.qspeed1t_sq == 1.0
        assert sample.qspeed2t_sq == -3.0


def test_analytic_and_numeric_rates_agree():
    numeric = FunctionModel(wavy, 0.0, 2.0)
    analytic = FunctionModel(wavy, 0.0, 2.0, derivative_func=wavy_rate)
    for theta in (0.0, 0.3, 1.1, 2.0):
        a = coordinate_derivatives(analytic, theta).as_tuple()
        n = coordinate_derivatives(numeric, theta).as_tuple()
        assert np.allclose(a, n, rtol=0, atol=1e-6)


def test_central_difference_converges_at_second_order():
    numeric = FunctionModel(wavy, 0.0, 2.0)
    analytic = FunctionModel(wavy, 0.0, 2.0, derivative_func=wavy_rate)
    exact = np.array(coordinate_derivatives(analytic, 0.7).as_tuple())

    def error(h):
        return np.max(np.abs(np.array(coordinate_derivatives(numeric, 0.7, h).as_tuple()) - exact))

    assert error(0.1) / error(0.05) >= 3.5


@pytest.mark.parametrize("theta", [0.0, 2.0])
def test_one_sided_stencil_at_edges(theta):
    numeric = FunctionModel(wavy, 0.0, 2.0)
    analytic = FunctionModel(wavy, 0.0, 2.0, derivative_func=wavy_rate)
    exact = np.array(coordinate_derivatives(analytic, theta).as_tuple())
    approx = np.array(coordinate_derivatives(numeric, theta, 1e-3).as_tuple())
    assert np.max(np.abs(approx - exact)) < 1e-5


def test_clock_rates_cancel():
    rates = coordinate_derivatives(FunctionModel(wavy, 0.0, 2.0), 0.9)
    assert rates.t_minus + rates.t_plus == pytest.approx(0.0, abs=1e-9)


def test_reparametrization_leaves_speeds_unchanged():
    by_x = BewModel()
    by_t = BewModel(BewSpec(BewMode.DECAY, gamma=0.7))
    for t in (0.2, 1.0, 3.0):
        x = by_t.x_value(t)
        assert sample_kinematics(by_t, t).speeds() == pytest.approx(sample_kinematics(by_x, x).speeds())


def test_stationary_clock_is_degenerate():
    frozen = FunctionModel(lambda theta: D7Params(mxx=-0.2, myy=-0.2, mzz=-0.2), 0.0, 1.0)
    with pytest.raises(DegenerateClock) as excinfo:
        velocity(frozen, 0.5, 2, transposed=True)
    assert excinfo.value.branch == 2
    assert excinfo.value.transposed

    sample = sample_kinematics(frozen, 0.5)
    assert sample.degenerate == ("1", "2", "1t", "2t")
    assert sample.v1 is None
    assert math.isinf(sample.speed2t) and sample.speed2t > 0
    assert sample.qspeed2t_sq == -math.inf


@pytest.mark.parametrize("theta", [0.0, 1.0])
def test_flat_model_rates_vanish_at_edges(theta):
    flat = FunctionModel(lambda _: D7Params(p1z=0.1, mxx=-0.3, myy=-0.3, mxy=0.07, mzz=-0.1), 0.0, 1.0)
    rates = coordinate_derivatives(flat, theta)
    assert rates.as_tuple() == (0.0,) * 8
    assert sample_kinematics(flat, theta).degenerate == ("1", "2", "1t", "2t")


def test_theta_outside_domain():
    with pytest.raises(DomainError):
        coordinate_derivatives(numeric_bew_x(), 1.5)


def test_domain_narrower_than_stencil():
    tiny = FunctionModel(bew_d7, 0.0, 1e-6)
    with pytest.raises(DomainError):
        coordinate_derivatives(tiny, 0.0)


def test_empty_function_model_domain():
    with pytest.raises(DomainError):
        FunctionModel(bew_d7, 1.0, 1.0)


def test_bad_branch_index():
    with pytest.raises(ValueError):
        velocity(BewModel(), 0.5, 3)
