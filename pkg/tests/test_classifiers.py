import numpy as np
import pytest

from tehier import (
    DegenerateDataError,
    DimensionError,
    LogRegConfig,
    SvmConfig,
    fit_multiclass,
    parse_label,
)

from conftest import hl, separable_blobs


def test_single_class_constant_model(rng):
    X = rng.normal(size=(6, 4))
    model = fit_multiclass("svm", X, [hl("1.2")] * 6)
    assert model.kind == "constant"
    probs = model.predict_proba(X)
    assert probs.shape == (6, 1)
    assert (probs == 1.0).all()
    assert model.classes == [hl("1.2")]


@pytest.mark.parametrize("kind", ["svm", "logreg"])
def test_three_class_blobs(rng, kind):
    X, y = separable_blobs(rng, 50, [(2.5, 0), (-2.5, 0), (0, 2.5)])
    labels = [hl(str(c + 1)) for c in y]
    config = SvmConfig(C=10.0, gamma=0.5) if kind == "svm" else LogRegConfig()
    model = fit_multiclass(kind, X, labels, config)
    probs = model.predict_proba(X)
    predicted = [model.classes[i] for i in probs.argmax(axis=1)]
    accuracy = np.mean([p == t for p, t in zip(predicted, labels)])
    assert accuracy >= 0.95
    assert np.allclose(probs.sum(axis=1), 1.0, atol=1e-9)
    assert (probs >= 0).all()


@pytest.mark.parametrize("kind", ["svm", "logreg"])
def test_midpoint_of_symmetric_problem_is_uncertain(rng, kind):
    center_a, center_b = np.array([1.5, 0.0]), np.array([-1.5, 0.0])
    noise = rng.normal(0, 0.3, (60, 2))
    # exact point symmetry through the midpoint: x -> (a + b) - x swaps classes
    X = np.vstack([noise + center_a, -noise + center_b])
    labels = [hl("1")] * 60 + [hl("2")] * 60
    config = SvmConfig(C=2.0, gamma=1.0) if kind == "svm" else LogRegConfig()
    model = fit_multiclass(kind, X, labels, config)
    midpoint = 0.5 * (center_a + center_b)
    probs = model.predict_proba(midpoint)[0]
    assert probs[0] == pytest.approx(0.5, abs=0.05)
    assert probs[1] == pytest.approx(0.5, abs=0.05)


def test_classes_sorted(rng):
    X = rng.normal(size=(9, 3))
    labels = [hl("3"), hl("1"), hl("2")] * 3
    model = fit_multiclass("logreg", X, labels)
    assert model.classes == [hl("1"), hl("2"), hl("3")]


def test_thread_count_does_not_change_svm_model(rng):
    X, y = separable_blobs(rng, 30, [(2, 0), (-2, 0), (0, 2)])
    labels = [hl(str(c + 1)) for c in y]
    config = SvmConfig(C=5.0, gamma=1.0, seed=7)
    serial = fit_multiclass("svm", X, labels, config, threads=1)
    threaded = fit_multiclass("svm", X, labels, config, threads=4)
    for m1, m2 in zip(serial.binary_models, threaded.binary_models):
        assert np.array_equal(m1.dual_coef, m2.dual_coef)
        assert m1.bias == m2.bias
        assert (m1.platt_a, m1.platt_b) == (m2.platt_a, m2.platt_b)
    query = rng.normal(size=(20, 2))
    assert np.array_equal(serial.predict_proba(query), threaded.predict_proba(query))


def test_dimension_mismatch(rng):
    X = rng.normal(size=(10, 4))
    labels = [hl("1")] * 5 + [hl("2")] * 5
    model = fit_multiclass("logreg", X, labels)
    with pytest.raises(DimensionError):
        model.predict_proba(np.zeros((2, 3)))


def test_empty_data_rejected():
    with pytest.raises(DegenerateDataError):
        fit_multiclass("svm", np.zeros((0, 3)), [])


def test_unknown_kind_rejected(rng):
    with pytest.raises(ValueError):
        fit_multiclass("forest", rng.normal(size=(4, 2)), [hl("1"), hl("2")] * 2)
