import json
import math

import pytest
from hypothesis import given, strategies as st

from dcsf import SystemParams
from dcsf.semantic import (
    SimilarityModel,
    SimilarityModelError,
    default_similarity_model,
    load_similarity_model,
    semantic_rate,
    semantic_similarity,
)

MODEL = default_similarity_model()
PARAMS = SystemParams()


def test_default_table_shape():
    assert MODEL.ks == tuple(range(1, 21))
    assert MODEL.floors[0] == pytest.approx(0.1)
    assert MODEL.floors[-1] == pytest.approx(0.38)
    assert MODEL.midpoints[0] == pytest.approx(12.0)
    assert MODEL.midpoints[-1] == pytest.approx(-4.0)
    assert all(c == 0.35 for c in MODEL.slopes)


def test_similarity_reference_value():
    # k=5: floor 0.1 + 0.28*4/19, midpoint 12 - 16*4/19, slope 0.35, at 20 dB
    xi = semantic_similarity(MODEL, 5, 100.0)
    assert xi == pytest.approx(0.9845567139970124, rel=1e-12)


def test_semantic_rate_reference_value():
    sr = semantic_rate(MODEL, 5, 100.0, PARAMS)
    assert sr == pytest.approx(787645.3711976099, rel=1e-12)


def test_similarity_logistic_midpoint():
    # at the midpoint SNR the curve sits halfway between floor and one
    a, b, _ = MODEL.parameters_at(3)
    xi = semantic_similarity(MODEL, 3, 10 ** (b / 10.0))
    assert xi == pytest.approx(a + (1.0 - a) / 2.0, rel=1e-12)


def test_similarity_requires_positive_snr():
    with pytest.raises(ValueError):
        semantic_similarity(MODEL, 5, 0.0)
    with pytest.raises(ValueError):
        semantic_similarity(MODEL, 5, -1.0)


def test_similarity_bounded():
    for k in range(1, 21):
        for snr_db in (-40, -10, 0, 10, 40):
            xi = semantic_similarity(MODEL, k, 10 ** (snr_db / 10.0))
            assert 0.0 < xi < 1.0


@given(k=st.integers(1, 20), g1=st.floats(-40.0, 40.0), g2=st.floats(-40.0, 40.0))
def test_similarity_monotone_in_snr(k, g1, g2):
    lo, hi = sorted((g1, g2))
    xi_lo = semantic_similarity(MODEL, k, 10 ** (lo / 10.0))
    xi_hi = semantic_similarity(MODEL, k, 10 ** (hi / 10.0))
    assert xi_lo <= xi_hi + 1e-15


@given(k=st.integers(1, 19), g=st.floats(-40.0, 40.0))
def test_similarity_monotone_in_k(k, g):
    snr = 10 ** (g / 10.0)
    assert semantic_similarity(MODEL, k, snr) <= semantic_similarity(MODEL, k + 1, snr) + 1e-12


def test_table_validation_rejects_rising_midpoints():
    with pytest.raises(SimilarityModelError):
        SimilarityModel((1, 2), (0.1, 0.2), (0.0, 5.0), (0.3, 0.3))


def test_table_validation_rejects_falling_floors():
    with pytest.raises(SimilarityModelError):
        SimilarityModel((1, 2), (0.3, 0.1), (5.0, 0.0), (0.3, 0.3))


def test_table_validation_rejects_bad_slope_and_floor():
    with pytest.raises(SimilarityModelError):
        SimilarityModel((1,), (0.1,), (0.0,), (0.0,))
    with pytest.raises(SimilarityModelError):
        SimilarityModel((1,), (1.0,), (0.0,), (0.3,))


def test_load_similarity_model_roundtrip(tmp_path):
    rows = [
        {"k": k, "a": a, "b": b, "c": c}
        for k, a, b, c in zip(MODEL.ks, MODEL.floors, MODEL.midpoints, MODEL.slopes)
    ]
    path = tmp_path / "table.json"
    path.write_text(json.dumps(rows))
    loaded = load_similarity_model(path)
    assert loaded == MODEL


def test_load_similarity_model_rejects_malformed(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps([{"k": 1, "a": 0.1}]))
    with pytest.raises(SimilarityModelError):
        load_similarity_model(path)


def test_rate_tradeoff_small_k_boosts_rate_factor():
    # the B*I/(kL) factor doubles when k halves; similarity tempers it
    xi10 = semantic_similarity(MODEL, 10, 1000.0)
    xi20 = semantic_similarity(MODEL, 20, 1000.0)
    r10 = semantic_rate(MODEL, 10, 1000.0, PARAMS)
    r20 = semantic_rate(MODEL, 20, 1000.0, PARAMS)
    assert r10 / r20 == pytest.approx(2.0 * xi10 / xi20, rel=1e-12)
