from .params import (
    IdentityParams,
    NuisanceParams,
    NEUTRAL_NUISANCE,
    sample_identity,
    sample_nuisance,
)
from .render import render, face_mask, nuisance_encoding, save_png, load_png
from .encoders import (
    FaceEncoder,
    ImageEncoder,
    train_encoders,
    identity_similarity,
    face_embedding,
    image_embedding,
)

__all__ = [
    "IdentityParams",
    "NuisanceParams",
    "NEUTRAL_NUISANCE",
    "sample_identity",
    "sample_nuisance",
    "render",
    "face_mask",
    "nuisance_encoding",
    "save_png",
    "load_png",
    "FaceEncoder",
    "ImageEncoder",
    "train_encoders",
    "identity_similarity",
    "face_embedding",
    "image_embedding",
]
