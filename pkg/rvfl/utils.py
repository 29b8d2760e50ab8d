import os
import json
import base64

import numpy as np


def output_path(output_dir, *parts):
    """Join parts under output_dir, creating the parent directory if needed."""
    path = os.path.join(output_dir, *parts)
    parent = os.path.dirname(path)
    if parent and not os.path.exists(parent):
        os.makedirs(parent)
    return path


def encode_array(arr):
    """Lossless JSON-friendly form of a float64 array (base64 of little-endian bytes)."""
    arr = np.ascontiguousarray(arr, dtype="<f8")
    return {
        "shape": list(arr.shape),
        "data": base64.b64encode(arr.tobytes()).decode("ascii"),
    }


def decode_array(blob):
    raw = base64.b64decode(blob["data"].encode("ascii"))
    return np.frombuffer(raw, dtype="<f8").reshape(blob["shape"]).astype(np.float64)


def load_from_json(file_path):
    """Load the stored data from json, and return as a dict."""
    if os.path.exists(file_path):
        with open(file_path, 'r') as f:
            return json.load(f)


def dump_to_json(file_path, data):
    with open(file_path, 'w') as f:
        json.dump(data, f, indent=2, sort_keys=True)
        f.write("\n")
