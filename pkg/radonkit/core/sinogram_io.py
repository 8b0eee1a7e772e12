# radonkit/core/sinogram_io.py

"""
Sinogram files: a CSV of (omega_1..omega_n, p, value) rows in direction-major
order under a one-line comment header, plus a JSON sidecar with the grid
metadata. Floats are written with 17 significant digits.
"""

import json
import logging
import re
from pathlib import Path
from typing import Optional, Union

import numpy as np
import pandas as pd
from pydantic import ValidationError

from radonkit.core.geometry import Direction, GeometryError
from radonkit.core.schema import BodySpec, FunctionSpec, SinogramMetadata
from radonkit.core.transforms import Sinogram, SinogramError

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.17g"
HEADER_FIELD = re.compile(r"(\w+)=(\S+)")

PathLike = Union[str, Path]


def sidecar_path(path: PathLike) -> Path:
    return Path(path).with_suffix(".json")


def _compact(model) -> str:
    return "null" if model is None else json.dumps(model.model_dump(mode="json", exclude_none=True), separators=(",", ":"))


def sinogram_frame(sino: Sinogram) -> pd.DataFrame:
    n, (m, count) = sino.dimension, sino.offsets.shape
    omega = np.repeat(np.array([d.vector for d in sino.directions]), count, axis=0)
    frame = pd.DataFrame({f"omega_{k + 1}": omega[:, k] for k in range(n)})
    frame["p"] = sino.offsets.ravel()
    frame["value"] = sino.values.ravel()
    return frame


def write_sinogram(sino: Sinogram, path: PathLike) -> Path:
    """Write the CSV and its sidecar; returns the sidecar path."""
    path = Path(path)
    meta = sino.metadata
    header = (f"# transform={sino.transform} dimension={sino.dimension} "
              f"body={_compact(meta.body if meta else None)} function={_compact(meta.function if meta else None)}\n")
    with open(path, "w", newline="") as f:
        f.write(header)
        sinogram_frame(sino).to_csv(f, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    side = sidecar_path(path)
    if meta is None:
        meta = SinogramMetadata(transform=sino.transform, dimension=sino.dimension,
                                offset_rule="arbitrary", offsets_per_direction=sino.offsets_per_direction,
                                windows=None if sino.windows is None else [tuple(w) for w in sino.windows.tolist()])
    with open(side, "w") as f:
        f.write(meta.model_dump_json(indent=2))
    logger.info(f"[io] wrote {len(sino.directions)}x{sino.offsets_per_direction} sinogram to {path}")
    return side


def _parse_header(line: str) -> dict:
    if not line.startswith("#"):
        raise SinogramError("Sinogram CSV must start with a '# transform=... dimension=...' header")
    fields = dict(HEADER_FIELD.findall(line))
    if "dimension" not in fields:
        raise SinogramError(f"Sinogram header lacks a dimension: {line.strip()}")
    return fields


def _direction(components: tuple) -> Direction:
    try:
        return Direction(tuple(float(c) for c in components))
    except GeometryError:
        # files from elsewhere may carry fewer digits
        return Direction.from_vector(components)


def read_sinogram(path: PathLike) -> Sinogram:
    path = Path(path)
    with open(path, "r") as f:
        header = _parse_header(f.readline())
    try:
        dimension = int(header["dimension"])
    except ValueError:
        raise SinogramError(f"Invalid dimension in sinogram header: {header['dimension']}")
    transform = header.get("transform", "radon")

    frame = pd.read_csv(path, comment="#", float_precision="round_trip")
    omega_cols = [f"omega_{k + 1}" for k in range(dimension)]
    missing = [c for c in omega_cols + ["p", "value"] if c not in frame.columns]
    if missing:
        raise SinogramError(f"Sinogram CSV {path} lacks columns {missing}")

    directions, offsets, values = [], [], []
    for key, group in frame.groupby(omega_cols, sort=False):
        key = key if isinstance(key, tuple) else (key,)
        directions.append(_direction(key))
        offsets.append(group["p"].to_numpy())
        values.append(group["value"].to_numpy())
    if len({len(o) for o in offsets}) != 1:
        raise SinogramError(f"Sinogram CSV {path} has a different number of offsets per direction")

    side = sidecar_path(path)
    if side.is_file():
        try:
            metadata = SinogramMetadata.model_validate_json(side.read_text())
        except ValidationError as e:
            raise SinogramError(f"Sinogram sidecar {side} is invalid: {e}")
        if metadata.dimension != dimension:
            raise SinogramError(f"Sidecar dimension {metadata.dimension} disagrees with CSV dimension {dimension}")
    else:
        logger.warning(f"[WARN] no sidecar next to {path}; slabs will be estimated from the samples")
        metadata = SinogramMetadata(
            transform=transform,
            dimension=dimension,
            offset_rule="arbitrary",
            body=_header_model(BodySpec, header.get("body")),
            function=_header_model(FunctionSpec, header.get("function")),
            offsets_per_direction=len(offsets[0]),
        )
    windows = np.array(metadata.windows) if metadata.windows is not None else None
    return Sinogram(dimension, tuple(directions), np.array(offsets), np.array(values),
                    windows, transform, metadata)


def _header_model(model, text: Optional[str]):
    if not text or text == "null":
        return None
    try:
        return model.model_validate_json(text)
    except ValidationError:
        logger.warning(f"[WARN] ignoring unreadable header field: {text[:80]}")
        return None
