"""Procedural 32x32 face renderer.

Rendering is a pure function of (identity, nuisance): no global state, no
RNG.  Faces are built from five soft-edged primitives (head ellipse, hair
cap, two eyes, nose, mouth arc) over a solid background.  All identity
colour information lives inside the head ellipse, so `face_mask` bounds
every pixel that can change when only identity colours change.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterRangeError, StructuralError
from .params import IdentityParams, NuisanceParams

IMAGE_SIZE = 32

# Expression perturbs the mouth arc much less than identity curvature does,
# so curvature stays recoverable from a single image.
CURVATURE_IDENTITY_GAIN = 0.55
CURVATURE_EXPRESSION_GAIN = 0.08


def _hsv_to_rgb(h, s, v):
    h = (h % 1.0) * 6.0
    i = int(h)
    f = h - i
    p, q, t = v * (1 - s), v * (1 - s * f), v * (1 - s * (1 - f))
    return [
        (v, t, p), (q, v, p), (p, v, t), (p, q, v), (t, p, v), (v, p, q),
    ][i % 6]


def _soft(d, width):
    """Smoothstep alpha: 1 well inside (d<0), 0 for d >= width."""
    s = np.clip((width - d) / (2.0 * width), 0.0, 1.0)
    return s * s * (3.0 - 2.0 * s)


def _canonical_grid(nuisance: NuisanceParams):
    """Pixel-centre coordinates mapped back into face space."""
    pix = (np.arange(IMAGE_SIZE, dtype=np.float64) - (IMAGE_SIZE - 1) / 2.0) / 16.0
    u0, v0 = np.meshgrid(pix, pix)  # v indexes rows (down), u columns (right)
    tx, ty = nuisance.translation
    u = u0 - tx / 16.0
    v = v0 - ty / 16.0
    c, s = np.cos(nuisance.rotation), np.sin(nuisance.rotation)
    uq = (c * u + s * v) / nuisance.scale
    vq = (-s * u + c * v) / nuisance.scale
    return uq, vq


def _head_geometry(identity: IdentityParams):
    aspect = 0.85 + 0.30 * identity.face_aspect
    return 0.50 * aspect, 0.60 / aspect  # semi-axes (a, b)


def _head_distance(identity, u, v):
    a, b = _head_geometry(identity)
    return np.sqrt((u / a) ** 2 + ((v - 0.05) / b) ** 2) - 1.0


def render(identity: IdentityParams, nuisance: NuisanceParams) -> np.ndarray:
    """Render one face; returns float32 (32, 32, 3) with values in [0, 1]."""
    if not isinstance(identity, IdentityParams):
        identity = IdentityParams(np.asarray(identity, dtype=np.float64))
    if not isinstance(nuisance, NuisanceParams):
        raise ParameterRangeError("nuisance must be a NuisanceParams instance")

    u, v = _canonical_grid(nuisance)
    img = np.empty((IMAGE_SIZE, IMAGE_SIZE, 3), dtype=np.float64)
    img[:] = _hsv_to_rgb(nuisance.background_hue, 0.30, 0.86)

    edge = 0.06

    # Head.
    face_rgb = np.array(
        _hsv_to_rgb(identity.face_hue, 0.42, 0.30 + 0.60 * identity.skin_tone)
    )
    _blend(img, _soft(_head_distance(identity, u, v), edge), face_rgb)

    # Hair: a slightly larger cap clipped above a fixed hairline; tone is a
    # grey-brown ramp independent of face colour.
    a, b = _head_geometry(identity)
    d_hair = np.sqrt((u / (1.08 * a)) ** 2 + ((v - 0.02) / (1.08 * b)) ** 2) - 1.0
    hair_alpha = _soft(d_hair, edge) * _soft(v - (-0.22), 0.08)
    g = 0.10 + 0.75 * identity.hair_tone
    _blend(img, hair_alpha, np.array([g, 0.82 * g, 0.62 * g]))

    # Eyes: sclera disc + pupil.
    ex = 0.14 + 0.13 * identity.eye_spacing
    re = 0.045 + 0.060 * identity.eye_size
    for sign in (-1.0, 1.0):
        d_eye = np.sqrt((u - sign * ex) ** 2 + (v + 0.13) ** 2)
        _blend(img, _soft(d_eye - re, 0.04), np.array([0.95, 0.95, 0.97]))
        _blend(img, _soft(d_eye - 0.5 * re, 0.03), np.array([0.08, 0.07, 0.10]))

    # Nose: a vertical capsule whose length is the identity cue.
    ln = 0.10 + 0.20 * identity.nose_length
    vy = np.clip(v, -0.04, -0.04 + ln)
    d_nose = np.sqrt(u**2 + (v - vy) ** 2) - 0.035
    _blend(img, _soft(d_nose, 0.035), face_rgb * 0.72)

    # Mouth: parabolic arc; curvature mixes identity and expression.
    curv = CURVATURE_IDENTITY_GAIN * (2.0 * identity.mouth_curvature - 1.0)
    curv += CURVATURE_EXPRESSION_GAIN * nuisance.expression_offset
    wm = 0.19
    v_arc = 0.30 + 0.15 * curv * (1.0 - 2.0 * (u / wm) ** 2)
    mouth_alpha = _soft(np.abs(v - v_arc) - 0.045, 0.03) * _soft(np.abs(u) - wm, 0.03)
    _blend(img, mouth_alpha, np.array([0.72, 0.26, 0.30]))

    return np.clip(img, 0.0, 1.0).astype(np.float32)


def _blend(img, alpha, rgb):
    img += alpha[..., None] * (rgb[None, None, :] - img)


def face_mask(identity: IdentityParams, nuisance: NuisanceParams) -> np.ndarray:
    """Boolean mask of every pixel the head ellipse can influence."""
    u, v = _canonical_grid(nuisance)
    return _head_distance(identity, u, v) < 0.06


def nuisance_encoding(nuisance: NuisanceParams) -> np.ndarray:
    """6-dim conditioning vector, each component roughly in [-1, 1]."""
    tx, ty = nuisance.translation
    return np.array(
        [
            nuisance.rotation / 0.3,
            tx / 3.0,
            ty / 3.0,
            (nuisance.scale - 1.0) / 0.15,
            2.0 * nuisance.background_hue - 1.0,
            nuisance.expression_offset,
        ],
        dtype=np.float32,
    )


def save_png(path, image: np.ndarray) -> None:
    import matplotlib.image

    matplotlib.image.imsave(str(path), np.clip(image, 0.0, 1.0))


def load_png(path) -> np.ndarray:
    import matplotlib.image

    img = matplotlib.image.imread(str(path))
    if img.ndim != 3 or img.shape[2] < 3:
        raise StructuralError(f"{path}: expected an RGB image")
    return np.ascontiguousarray(img[:, :, :3], dtype=np.float32)
