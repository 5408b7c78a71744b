"""
Binary parameter checkpoints.

Layout: magic b"STNT1", uint32 layer count, int32 layer sizes, uint8 activation
tag, then every parameter as little-endian float64 in module order (weight
row-major, then bias, layer by layer).
"""
import logging
import os
import struct
import tempfile
from pathlib import Path
from typing import Union

import numpy as np
import torch

from src.errors import InvalidInputError
from src.engine.gradients import assign_flat_parameters, flat_parameters
from src.engine.network import ACTIVATIONS, NetworkParams

logger = logging.getLogger(__name__)

MAGIC = b"STNT1"


def save_checkpoint(params: NetworkParams, path: Union[str, Path]) -> Path:
    path = Path(path)
    sizes = params.layer_sizes
    header = MAGIC + struct.pack("<I", len(sizes)) + struct.pack(f"<{len(sizes)}i", *sizes)
    header += struct.pack("<B", ACTIVATIONS.index(params.activation))
    payload = flat_parameters(params).numpy().astype("<f8").tobytes()

    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "wb") as handle:
        handle.write(header + payload)
    os.replace(tmp, path)
    logger.debug(f"Wrote checkpoint {path} ({len(payload) // 8} parameters).")
    return path


def load_checkpoint(path: Union[str, Path]) -> NetworkParams:
    data = Path(path).read_bytes()
    if not data.startswith(MAGIC):
        raise InvalidInputError(f"{path} is not a parameter checkpoint (bad magic).")
    offset = len(MAGIC)
    (count,) = struct.unpack_from("<I", data, offset)
    offset += 4
    sizes = list(struct.unpack_from(f"<{count}i", data, offset))
    offset += 4 * count
    (tag,) = struct.unpack_from("<B", data, offset)
    offset += 1
    if tag >= len(ACTIVATIONS):
        raise InvalidInputError(f"{path}: unknown activation tag {tag}.")

    params = NetworkParams(sizes, ACTIVATIONS[tag])
    values = np.frombuffer(data, dtype="<f8", offset=offset)
    if values.size != params.parameter_count:
        raise InvalidInputError(
            f"{path}: expected {params.parameter_count} parameters, found {values.size}."
        )
    assign_flat_parameters(params, torch.from_numpy(values.astype(np.float64)))
    return params
