import math

import numpy as np
import pytest

import samples
from spinning_eoms.params import SystemParams, base_params
from spinning_eoms.pipeline import evaluate, evaluate_batch
from spinning_eoms.steady_state import lambda_coeff

WB = base_params().omega_b


def _batch_values(items):
    return evaluate_batch(items)


def test_batch_is_bitwise_equal_to_scalar_path():
    rng = np.random.default_rng(31)
    items = [samples.random_params(rng) for _ in range(40)]
    batch = evaluate_batch(items)
    for k, p in enumerate(items):
        res = evaluate(p)
        assert batch.spectral_abscissa[k] == res.stability.spectral_abscissa
        assert batch.stable[k] == res.stable
        if res.report is None:
            assert all(math.isnan(v[k]) for v in batch.observables.values())
            continue
        for name, value in res.report.observables().items():
            assert batch.observables[name][k] == value, name


def test_batch_values_do_not_depend_on_companions():
    rng = np.random.default_rng(32)
    items = [samples.random_params(rng) for _ in range(30)]
    whole = evaluate_batch(items)
    part = evaluate_batch(items[7:19][::-1])
    for j, k in enumerate(range(18, 6, -1)):
        for name in whole.observables:
            a, b = whole.observables[name][k], part.observables[name][j]
            assert (math.isnan(a) and math.isnan(b)) or a == b


def test_batch_reports_singular_points_without_raising():
    p = base_params()
    singular = p.replace(opa_gain=abs(lambda_coeff(p)) / 2.0)
    res = evaluate_batch([p, singular, p])
    assert res.errors[0] is None and res.errors[2] is None
    assert res.errors[1].startswith("ParametricSingularity")
    assert not res.stable[1]
    assert math.isnan(res.observables["e_ca"][1])
    assert res.observables["e_ca"][0] == res.observables["e_ca"][2]


def test_unstable_points_carry_only_the_spectrum():
    p = base_params(delta_c_eff=0.5 * WB, delta_f=0.0, opa_gain=0.5 * WB)
    res = evaluate(p)
    assert not res.stable and res.covariance is None and res.report is None
    batch = evaluate_batch([p])
    assert batch.spectral_abscissa[0] > 0 and math.isnan(batch.observables["e_ca"][0])


def test_stability_only_skips_covariance():
    res = evaluate(base_params(), stability_only=True)
    assert res.stable and res.report is None
    batch = evaluate_batch([base_params()], stability_only=True)
    assert batch.stable[0] and math.isnan(batch.observables["e_ca"][0])


def test_empty_batch():
    res = evaluate_batch([])
    assert res.spectral_abscissa.shape == (0,) and res.errors == []


def test_undriven_system_relaxes_to_vacuum():
    res = evaluate(base_params(drive_eps=0.0, temperature=0.0))
    np.testing.assert_allclose(res.covariance, 0.5 * np.eye(6), rtol=0, atol=1e-14)
    for name, value in res.report.observables().items():
        if not name.startswith("nu_minus"):
            assert value <= 1e-14, name


def test_pipeline_outputs_are_physical():
    rng = np.random.default_rng(33)
    items = samples.random_stable_params(rng, 200)
    batch = evaluate_batch(items)
    for name in ("nu_minus_ca", "nu_minus_cb", "nu_minus_ab"):
        assert np.all(np.isfinite(batch.observables[name]))
    from spinning_eoms.dynamics import physicality
    from spinning_eoms.pipeline import covariance

    for p in items[:50]:
        assert physicality(covariance(p))


def test_large_batches_are_chunked_consistently(monkeypatch):
    import spinning_eoms.pipeline as pipeline

    rng = np.random.default_rng(34)
    items = [samples.random_params(rng) for _ in range(10)]
    ref = evaluate_batch(items)
    monkeypatch.setattr(pipeline, "BATCH_CHUNK", 3)
    chunked = evaluate_batch(items)
    for name in ref.observables:
        np.testing.assert_array_equal(ref.observables[name], chunked.observables[name])
    np.testing.assert_array_equal(ref.spectral_abscissa, chunked.spectral_abscissa)


def test_stack_rejects_mixed_shapes():
    with pytest.raises(Exception):
        SystemParams.stack([])
