"""Multivariate moments, cumulants and Gram-Charlier density expansions.

Tensors are flat numpy arrays in Kronecker (row-major) order. Moment,
cumulant and coefficient sequences are dicts of the same shape as the
JSON files the ``kronstat`` CLI reads and writes.
"""

from __future__ import annotations

import json

import numpy as np

from ._core import (
    AccuracyError,
    ContractError,
    Error,
    InputError,
    NumericalError,
    ResourceError,
    gaussian_pdf,
    hermite_identity,
    hermite_scalar,
    kron_power,
    symmetrize,
)
from . import _core

__all__ = [
    "AccuracyError",
    "ContractError",
    "Error",
    "InputError",
    "NumericalError",
    "ResourceError",
    "Model",
    "alpha_from_delta",
    "cumulants_from_moments",
    "delta_from_alpha",
    "fit",
    "gaussian_pdf",
    "hermite_identity",
    "hermite_scalar",
    "kron_power",
    "moments_from_cumulants",
    "sample_moments",
    "symmetrize",
    "validate",
]


def _call(fn, seq: dict) -> dict:
    return json.loads(fn(json.dumps(seq)))


def moments_from_cumulants(cumulants: dict) -> dict:
    return _call(_core._moments_from_cumulants, cumulants)


def cumulants_from_moments(moments: dict) -> dict:
    return _call(_core._cumulants_from_moments, moments)


def alpha_from_delta(delta: dict) -> dict:
    return _call(_core._alpha_from_delta, delta)


def delta_from_alpha(alpha: dict) -> dict:
    return _call(_core._delta_from_alpha, alpha)


def sample_moments(samples, max_order: int) -> dict:
    return json.loads(_core._sample_moments(np.asarray(samples, dtype=float), max_order))


class Model:
    """A fitted or loaded series density."""

    def __init__(self, spec: dict | str):
        self._text = spec if isinstance(spec, str) else json.dumps(spec)
        self.spec = json.loads(self._text)

    @classmethod
    def load(cls, path) -> "Model":
        with open(path, encoding="utf-8") as f:
            return cls(f.read())

    @property
    def dim(self) -> int:
        return int(self.spec["dim"])

    def pdf(self, points) -> np.ndarray:
        """Density at each row of ``points`` (shape (n, d), or (n,) when d == 1)."""
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts.reshape(-1, 1) if self.dim == 1 else pts.reshape(1, -1)
        return np.asarray(_core._pdf(self._text, pts))

    def char_fn(self, lam) -> complex:
        return _core._char_fn(self._text, np.atleast_1d(np.asarray(lam, dtype=float)))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as f:
            json.dump(self.spec, f, indent=2)


def fit(samples, order: int = 6, mixture: dict | None = None) -> Model:
    pts = np.asarray(samples, dtype=float)
    if pts.ndim == 1:
        pts = pts.reshape(-1, 1)
    return Model(_core._fit(pts, order, json.dumps(mixture) if mixture else ""))


def validate(only=(), seed: int | None = None) -> dict:
    args = {"only": list(only)}
    if seed is not None:
        args["seed"] = seed
    return json.loads(_core._validate(**args))
