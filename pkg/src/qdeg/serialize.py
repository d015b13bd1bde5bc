"""JSON encoding of channels: complex entries as ``[re, im]`` pairs."""

from __future__ import annotations

import json
import os

import numpy as np

from .channels import ChoiMatrix, QuantumChannel, channel_from_choi, channel_from_kraus
from .errors import ShapeMismatch


def encode_matrix(m: np.ndarray) -> list:
    return [[[float(v.real), float(v.imag)] for v in row] for row in np.asarray(m, dtype=complex)]


def decode_matrix(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[2] != 2:
        raise ShapeMismatch("matrix entries must be [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_dict(channel: QuantumChannel) -> dict:
    return {
        "dim_in": channel.dim_in,
        "dim_out": channel.dim_out,
        "kraus": [encode_matrix(k) for k in channel.kraus],
    }


def channel_from_dict(data: dict) -> QuantumChannel:
    if not isinstance(data, dict):
        raise ShapeMismatch("channel JSON must be an object")
    try:
        din, dout = int(data["dim_in"]), int(data["dim_out"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ShapeMismatch("channel JSON needs integer dim_in and dim_out") from exc
    if ("kraus" in data) == ("choi" in data):
        raise ShapeMismatch("exactly one of 'kraus' or 'choi' must be present")
    if "kraus" in data:
        ops = [decode_matrix(k) for k in data["kraus"]]
        return channel_from_kraus(ops, din, dout)
    j = decode_matrix(data["choi"])
    return channel_from_choi(ChoiMatrix(din, dout, j))


def save_channel(channel: QuantumChannel, path: str | os.PathLike) -> None:
    with open(path, "w") as fh:
        json.dump(channel_to_dict(channel), fh)


def load_channel(path: str | os.PathLike) -> QuantumChannel:
    with open(path) as fh:
        return channel_from_dict(json.load(fh))
