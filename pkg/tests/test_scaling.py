import numpy as np
import pytest

from loadcast.errors import DataError
from loadcast.scaling import ScalerParams, fit_scaler, inverse_transform, transform


def test_endpoints_map_to_unit_interval():
    m = np.array([[2.0, -1.0], [22.0, 3.0]])
    params = fit_scaler(m)
    out = transform(m, params)
    assert out[0].tolist() == [0.0, 0.0]
    assert out[1].tolist() == [1.0, 1.0]


def test_midpoint_maps_to_half():
    m = np.array([[0.0], [10.0], [5.0]])
    out = transform(m, fit_scaler(m))
    assert out[2, 0] == 0.5


def test_hand_evaluated_point():
    # (12 - 2) / (22 - 2) = 0.5 exactly
    params = ScalerParams(np.array([2.0]), np.array([22.0]))
    assert transform(np.array([[12.0]]), params)[0, 0] == 0.5


def test_roundtrip_identity(rng):
    for _ in range(20):
        m = rng.uniform(-50, 50, size=(30, 6))
        params = fit_scaler(m)
        back = inverse_transform(transform(m, params), params)
        assert np.max(np.abs(back - m) / np.maximum(1.0, np.abs(m))) < 1e-12


def test_values_outside_range_unclamped():
    params = ScalerParams(np.array([0.0]), np.array([10.0]))
    out = transform(np.array([[-5.0], [15.0]]), params)
    assert out[0, 0] == -0.5
    assert out[1, 0] == 1.5


def test_degenerate_column_zeroed_with_warning():
    m = np.array([[3.0, 1.0], [3.0, 2.0]])
    with pytest.warns(UserWarning, match="degenerate"):
        params = fit_scaler(m)
    assert params.degenerate.tolist() == [True, False]
    out = transform(m, params)
    assert out[:, 0].tolist() == [0.0, 0.0]
    # inverse restores the constant
    back = inverse_transform(out, params)
    assert back[:, 0].tolist() == [3.0, 3.0]


def test_one_dimensional_targets():
    y = np.array([5.0, 15.0, 10.0])
    params = fit_scaler(y)
    yn = transform(y, params)
    assert yn.tolist() == [0.0, 1.0, 0.5]
    assert inverse_transform(yn, params).tolist() == y.tolist()


def test_empty_matrix_rejected():
    with pytest.raises(DataError):
        fit_scaler(np.empty((0, 3)))


def test_column_count_mismatch_rejected():
    params = fit_scaler(np.array([[1.0, 2.0], [3.0, 4.0]]))
    with pytest.raises(DataError):
        transform(np.array([[1.0, 2.0, 3.0]]), params)
