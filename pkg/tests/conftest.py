import numpy as np
import pytest

from hevclab.frames import frame_from_array


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def textured_plane(width, height, seed=1):
    """Mixed flat/gradient/sine/noise content, deterministic per seed."""
    rng = np.random.default_rng(seed)
    yy, xx = np.mgrid[0:height, 0:width]
    img = np.full((height, width), 96.0)
    img += (xx * 0.35) % 48
    img += 40 * np.sin(xx * 0.4) * (yy > height // 2)
    img[: height // 3, : width // 3] = 200
    img += rng.normal(0, 5, img.shape)
    return np.clip(img, 0, 255).astype(np.uint8)


@pytest.fixture
def textured_frame():
    return frame_from_array(textured_plane(128, 128))
