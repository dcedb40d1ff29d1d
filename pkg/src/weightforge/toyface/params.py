"""Identity and nuisance parameter spaces for the procedural face domain.

An identity is 8 numbers in [0, 1] controlling the face itself; nuisances
control everything that may vary between photos of the same person (pose,
framing, background, expression).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterRangeError

IDENTITY_DIM = 8
IDENTITY_FIELDS = (
    "face_hue",
    "face_aspect",
    "eye_spacing",
    "eye_size",
    "mouth_curvature",
    "skin_tone",
    "hair_tone",
    "nose_length",
)

ROTATION_RANGE = (-0.3, 0.3)
TRANSLATION_RANGE = (-3.0, 3.0)
SCALE_RANGE = (0.85, 1.15)
EXPRESSION_RANGE = (-1.0, 1.0)


@dataclass(frozen=True)
class IdentityParams:
    """8 face-shape/colour controls, each in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        if values.shape != (IDENTITY_DIM,):
            raise ParameterRangeError(
                f"identity needs exactly {IDENTITY_DIM} components, got shape {values.shape}"
            )
        if not np.all((values >= 0.0) & (values <= 1.0)):
            raise ParameterRangeError("identity components must lie in [0, 1]")
        object.__setattr__(self, "values", values)

    def __getattr__(self, name):
        try:
            return float(self.values[IDENTITY_FIELDS.index(name)])
        except ValueError:
            raise AttributeError(name) from None


def _check(name, value, lo, hi):
    if not (lo <= float(value) <= hi):
        raise ParameterRangeError(f"{name}={value} outside [{lo}, {hi}]")


@dataclass(frozen=True)
class NuisanceParams:
    """Per-photo variation: pose, framing, backdrop and expression."""

    rotation: float = 0.0
    translation: tuple = (0.0, 0.0)
    scale: float = 1.0
    background_hue: float = 0.5
    expression_offset: float = 0.0

    def __post_init__(self):
        _check("rotation", self.rotation, *ROTATION_RANGE)
        tx, ty = self.translation
        _check("translation x", tx, *TRANSLATION_RANGE)
        _check("translation y", ty, *TRANSLATION_RANGE)
        _check("scale", self.scale, *SCALE_RANGE)
        _check("background hue", self.background_hue, 0.0, 1.0)
        _check("expression offset", self.expression_offset, *EXPRESSION_RANGE)
        object.__setattr__(self, "translation", (float(tx), float(ty)))


NEUTRAL_NUISANCE = NuisanceParams()


def sample_identity(rng_seed) -> IdentityParams:
    """Draw an identity uniformly; accepts a seed or a numpy Generator."""
    rng = _as_rng(rng_seed)
    return IdentityParams(rng.random(IDENTITY_DIM))


def sample_nuisance(rng_seed) -> NuisanceParams:
    rng = _as_rng(rng_seed)
    return NuisanceParams(
        rotation=rng.uniform(*ROTATION_RANGE),
        translation=(rng.uniform(*TRANSLATION_RANGE), rng.uniform(*TRANSLATION_RANGE)),
        scale=rng.uniform(*SCALE_RANGE),
        background_hue=rng.random(),
        expression_offset=rng.uniform(*EXPRESSION_RANGE),
    )


def _as_rng(seed_or_rng) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return np.random.default_rng(seed_or_rng)
