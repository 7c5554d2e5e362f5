"""Semantic-similarity surrogate and semantic transmission rate (objective f2).

The similarity xi(k, SNR) is a per-k logistic curve in SNR-dB with linear
interpolation between table rows. The table is monotone by construction:
floors rise and midpoints fall with k, so more symbols per word never hurt.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class SimilarityModelError(ValueError):
    """Raised when a similarity table violates the monotonicity invariants."""


@dataclass(frozen=True)
class SimilarityModel:
    """Logistic parameter table: xi(k, g) = a_k + (1 - a_k) / (1 + exp(-c_k (g - b_k)))."""

    ks: tuple[int, ...]
    floors: tuple[float, ...]     # a_k, non-decreasing in k, each in [0, 1)
    midpoints: tuple[float, ...]  # b_k in dB, non-increasing in k
    slopes: tuple[float, ...]     # c_k > 0

    def __post_init__(self):
        n = len(self.ks)
        if n < 1 or not (len(self.floors) == len(self.midpoints) == len(self.slopes) == n):
            raise SimilarityModelError("table columns must be non-empty and equal length")
        if list(self.ks) != sorted(set(self.ks)):
            raise SimilarityModelError("k values must be strictly increasing")
        for a in self.floors:
            if not (0.0 <= a < 1.0):
                raise SimilarityModelError(f"floor {a} outside [0, 1)")
        for c in self.slopes:
            if c <= 0:
                raise SimilarityModelError(f"slope {c} must be > 0")
        if any(b2 > b1 + 1e-12 for b1, b2 in zip(self.midpoints, self.midpoints[1:])):
            raise SimilarityModelError("midpoints must be non-increasing in k")
        if any(a2 < a1 - 1e-12 for a1, a2 in zip(self.floors, self.floors[1:])):
            raise SimilarityModelError("floors must be non-decreasing in k")

    def parameters_at(self, k: float) -> tuple[float, float, float]:
        """(a, b, c) at possibly fractional k, linearly interpolated and clamped."""
        ks = np.asarray(self.ks, dtype=float)
        a = float(np.interp(k, ks, self.floors))
        b = float(np.interp(k, ks, self.midpoints))
        c = float(np.interp(k, ks, self.slopes))
        return a, b, c


def default_similarity_model(k_min: int = 1, k_max: int = 20) -> SimilarityModel:
    """Default table: floors 0.1 -> 0.38, midpoints 12 dB -> -4 dB, slope 0.35."""
    ks = tuple(range(k_min, k_max + 1))
    n = len(ks)
    t = np.linspace(0.0, 1.0, n) if n > 1 else np.array([0.0])
    floors = tuple(float(v) for v in 0.1 + 0.28 * t)
    midpoints = tuple(float(v) for v in 12.0 - 16.0 * t)
    slopes = tuple(0.35 for _ in ks)
    return SimilarityModel(ks, floors, midpoints, slopes)


def load_similarity_model(path: str | Path) -> SimilarityModel:
    """Load a JSON array of {k, a, b, c} rows; rejects non-monotone tables."""
    rows = json.loads(Path(path).read_text())
    try:
        rows = sorted(rows, key=lambda r: r["k"])
        return SimilarityModel(
            ks=tuple(int(r["k"]) for r in rows),
            floors=tuple(float(r["a"]) for r in rows),
            midpoints=tuple(float(r["b"]) for r in rows),
            slopes=tuple(float(r["c"]) for r in rows),
        )
    except (KeyError, TypeError) as exc:
        raise SimilarityModelError(f"malformed similarity table {path}: {exc}") from exc


def semantic_similarity(model: SimilarityModel, k: float, snr: float) -> float:
    """xi in [0, 1), non-decreasing in both SNR and k."""
    if snr <= 0:
        raise ValueError("snr must be > 0")
    gamma_db = 10.0 * math.log10(snr)
    a, b, c = model.parameters_at(k)
    return a + (1.0 - a) / (1.0 + math.exp(-c * (gamma_db - b)))


def semantic_rate(model: SimilarityModel, k: float, snr: float, params) -> float:
    """suts/s delivered at k symbols/word over a link with the given SNR."""
    xi = semantic_similarity(model, k, snr)
    return params.bandwidth * params.info_per_sentence / (k * params.words_per_sentence) * xi


def sum_semantic_rate(scenario, individual, params) -> float:
    """Objective f2: total semantic rate across an individual's clusters."""
    from . import problem  # late import; problem depends on this module

    rates, _ = problem.cluster_semantic_terms(individual, scenario, params)
    return float(rates.sum())
