"""X-ray image normalization.

Whatever arrives (PNG, JPEG, or pre-decoded pixel data extracted from a
DICOM file) is converted to a 224x224 grayscale float tensor in [0, 1] for
the classifier. The pre-decoded format is raw row-major 8-bit pixels behind
an 8-byte header: big-endian uint32 width, then height.
"""

from __future__ import annotations

import io
import struct

import numpy as np
from PIL import Image

from ..errors import ValidationFailure

MODEL_SIZE = 224

FORMATS = ("dicom_pixel_data", "png", "jpeg")


def decode_to_tensor(data: bytes, image_format: str) -> np.ndarray:
    if image_format not in FORMATS:
        raise ValidationFailure(f"format: unknown image format {image_format!r}")
    if image_format == "dicom_pixel_data":
        image = _from_pixel_data(data)
    else:
        try:
            image = Image.open(io.BytesIO(data))
            image.load()
        except Exception:
            raise ValidationFailure("image: undecodable image data") from None
    grayscale = image.convert("L").resize((MODEL_SIZE, MODEL_SIZE), Image.BILINEAR)
    return np.asarray(grayscale, dtype=np.float32) / 255.0


def _from_pixel_data(data: bytes) -> Image.Image:
    if len(data) < 8:
        raise ValidationFailure("image: pixel data too short for header")
    width, height = struct.unpack(">II", data[:8])
    expected = width * height
    if width == 0 or height == 0 or len(data) - 8 != expected:
        raise ValidationFailure("image: pixel data does not match declared dimensions")
    array = np.frombuffer(data, dtype=np.uint8, count=expected, offset=8).reshape((height, width))
    return Image.fromarray(array, mode="L")


def encode_pixel_data(array: np.ndarray) -> bytes:
    """Inverse of the pre-decoded format, used by fixtures."""
    height, width = array.shape
    return struct.pack(">II", width, height) + array.astype(np.uint8).tobytes()
