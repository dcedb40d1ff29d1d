"""Trainable face and image encoders for the toy domain.

The face encoder is a convolutional regressor trained to predict the 8
identity parameters; its penultimate (tanh) layer is the 16-dim face
embedding used for identity similarity.  The image encoder is the encoder
half of a convolutional autoencoder trained for pixel reconstruction; its
32-dim bottleneck is the global image embedding.
"""

from __future__ import annotations

import numpy as np
import torch
import torch.nn as nn
import torch.nn.functional as F

from ..errors import DatasetSizeError, DegenerateEmbeddingError
from ..seeding import derive_seed, rng_for
from .params import IDENTITY_DIM

FACE_EMBED_DIM = 16
IMAGE_EMBED_DIM = 32

MIN_IDENTITIES = 50
MIN_RENDERS_PER_IDENTITY = 20


class FaceEncoder(nn.Module):
    def __init__(self, embed_dim: int = FACE_EMBED_DIM):
        super().__init__()
        self.embed_dim = embed_dim
        self.conv = nn.Sequential(
            nn.Conv2d(3, 16, 3, stride=2, padding=1),
            nn.ReLU(),
            nn.Conv2d(16, 32, 3, stride=2, padding=1),
            nn.ReLU(),
            nn.Conv2d(32, 32, 3, stride=2, padding=1),
            nn.ReLU(),
        )
        self.fc = nn.Sequential(nn.Linear(32 * 4 * 4, 64), nn.ReLU())
        self.embed_layer = nn.Linear(64, embed_dim)
        self.head = nn.Linear(embed_dim, IDENTITY_DIM)

    def embed(self, x: torch.Tensor) -> torch.Tensor:
        h = self.fc(self.conv(x).flatten(1))
        return torch.tanh(self.embed_layer(h))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        return torch.sigmoid(self.head(self.embed(x)))


class ImageEncoder(nn.Module):
    """Convolutional autoencoder; `embed` returns the bottleneck code."""

    def __init__(self, embed_dim: int = IMAGE_EMBED_DIM):
        super().__init__()
        self.embed_dim = embed_dim
        self.enc = nn.Sequential(
            nn.Conv2d(3, 16, 3, stride=2, padding=1),
            nn.ReLU(),
            nn.Conv2d(16, 32, 3, stride=2, padding=1),
            nn.ReLU(),
            nn.Conv2d(32, 64, 3, stride=2, padding=1),
            nn.ReLU(),
        )
        self.to_code = nn.Linear(64 * 4 * 4, embed_dim)
        self.from_code = nn.Linear(embed_dim, 64 * 4 * 4)
        self.dec = nn.Sequential(
            nn.ConvTranspose2d(64, 32, 4, stride=2, padding=1),
            nn.ReLU(),
            nn.ConvTranspose2d(32, 16, 4, stride=2, padding=1),
            nn.ReLU(),
            nn.ConvTranspose2d(16, 3, 4, stride=2, padding=1),
        )

    def embed(self, x: torch.Tensor) -> torch.Tensor:
        return self.to_code(self.enc(x).flatten(1))

    def forward(self, x: torch.Tensor) -> torch.Tensor:
        h = F.relu(self.from_code(self.embed(x)))
        return torch.sigmoid(self.dec(h.view(-1, 64, 4, 4)))


def _to_batch(images) -> torch.Tensor:
    arr = np.asarray(images, dtype=np.float32)
    if arr.ndim == 3:
        arr = arr[None]
    return torch.from_numpy(np.transpose(arr, (0, 3, 1, 2)).copy())


def face_embedding(images, encoder: FaceEncoder) -> np.ndarray:
    with torch.no_grad():
        return encoder.embed(_to_batch(images)).numpy()


def image_embedding(images, encoder: ImageEncoder) -> np.ndarray:
    with torch.no_grad():
        return encoder.embed(_to_batch(images)).numpy()


def identity_similarity(a, b, face_encoder: FaceEncoder) -> float:
    """Cosine similarity of face embeddings; in [-1, 1], 1 on identical input."""
    emb = face_embedding(np.stack([np.asarray(a), np.asarray(b)]), face_encoder)
    norms = np.linalg.norm(emb, axis=1)
    if np.any(norms == 0.0):
        raise DegenerateEmbeddingError("face embedding has zero norm")
    return float(np.dot(emb[0], emb[1]) / (norms[0] * norms[1]))


def train_encoders(
    dataset,
    seed: int,
    face_epochs: int = 40,
    image_epochs: int = 40,
    batch_size: int = 64,
    lr: float = 1e-3,
    input_noise: float = 0.02,
    holdout_fraction: float = 0.12,
):
    """Train both encoders on (image, IdentityParams) pairs.

    The held-out split is by identity, so reported metrics measure
    generalization to unseen faces.  Returns (face_encoder, image_encoder,
    metrics dict).
    """
    images = np.stack([np.asarray(img, dtype=np.float32) for img, _ in dataset])
    params = np.stack(
        [np.asarray(ident.values, dtype=np.float32) for _, ident in dataset]
    )

    ident_keys = [p.tobytes() for p in params]
    unique_keys = sorted(set(ident_keys))
    counts = {k: ident_keys.count(k) for k in unique_keys}
    if len(unique_keys) < MIN_IDENTITIES or min(counts.values()) < MIN_RENDERS_PER_IDENTITY:
        raise DatasetSizeError(
            f"need >= {MIN_IDENTITIES} identities x {MIN_RENDERS_PER_IDENTITY} renders, "
            f"got {len(unique_keys)} identities, min {min(counts.values()) if counts else 0} renders"
        )

    rng = rng_for(seed, "encoder-split")
    order = rng.permutation(len(unique_keys))
    n_hold = max(1, int(round(holdout_fraction * len(unique_keys))))
    held = {unique_keys[i] for i in order[:n_hold]}
    train_idx = np.array([i for i, k in enumerate(ident_keys) if k not in held])
    val_idx = np.array([i for i, k in enumerate(ident_keys) if k in held])

    x_train = _to_batch(images[train_idx])
    x_val = _to_batch(images[val_idx])
    y_train = torch.from_numpy(params[train_idx])
    y_val = torch.from_numpy(params[val_idx])

    torch.manual_seed(derive_seed(seed, "face-encoder-init"))
    face = FaceEncoder()
    face_curve = _fit(
        face,
        x_train,
        y_train,
        epochs=face_epochs,
        batch_size=batch_size,
        lr=lr,
        rng=rng_for(seed, "face-encoder-batches"),
        noise=input_noise,
        noise_gen=torch.Generator().manual_seed(derive_seed(seed, "face-noise")),
    )

    torch.manual_seed(derive_seed(seed, "image-encoder-init"))
    image = ImageEncoder()
    image_curve = _fit(
        image,
        x_train,
        x_train,
        epochs=image_epochs,
        batch_size=batch_size,
        lr=lr,
        rng=rng_for(seed, "image-encoder-batches"),
    )

    with torch.no_grad():
        face.eval(), image.eval()
        pred = face(x_val)
        rmse = torch.sqrt(((pred - y_val) ** 2).mean(dim=0))
        recon = image(x_val)
        mse = ((recon - x_val) ** 2).mean().item()
    metrics = {
        "val_rmse_per_component": [float(v) for v in rmse],
        "val_rmse_max": float(rmse.max()),
        "val_recon_psnr": float(10.0 * np.log10(1.0 / mse)) if mse > 0 else float("inf"),
        "face_final_loss": face_curve[-1],
        "image_final_loss": image_curve[-1],
        "n_train": int(len(train_idx)),
        "n_val": int(len(val_idx)),
    }
    return face, image, metrics


def _fit(model, x, y, epochs, batch_size, lr, rng, noise=0.0, noise_gen=None):
    opt = torch.optim.Adam(model.parameters(), lr=lr)
    loss_curve = []
    model.train()
    n = x.shape[0]
    for _ in range(epochs):
        order = torch.from_numpy(rng.permutation(n))
        epoch_loss, seen = 0.0, 0
        for start in range(0, n, batch_size):
            idx = order[start : start + batch_size]
            xb, yb = x[idx], y[idx]
            if noise > 0.0:
                xb = xb + noise * torch.randn(xb.shape, generator=noise_gen)
            opt.zero_grad()
            loss = F.mse_loss(model(xb), yb)
            loss.backward()
            opt.step()
            epoch_loss += loss.item() * len(idx)
            seen += len(idx)
        loss_curve.append(epoch_loss / seen)
    model.eval()
    return loss_curve
