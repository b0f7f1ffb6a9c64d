"""Serialization of Boolean functions, social choice tables and reports.

Binary layouts (little endian):
  BFN1: b"BFN1", u32 n, then 2^n f64 values.
  SCF1: b"SCF1", u32 k, u32 n, then (k!)^n u8 winners.
"""
import json
import math
import struct

import numpy as np

from . import boolean_core as bc
from . import manipulation as mp

BFN_MAGIC = b"BFN1"
SCF_MAGIC = b"SCF1"


def _infer_codomain(values):
    if np.all(np.abs(values) == 1):
        return bc.PM1
    if np.all((values == 0) | (values == 1)):
        return bc.ZERO_ONE
    return bc.REAL


def function_to_json(f):
    return json.dumps({"n": f.n, "codomain": f.codomain, "values": f.values.tolist()})


def function_from_json(text):
    d = json.loads(text)
    return bc.BooleanFunction(int(d["n"]), np.array(d["values"], float), d.get("codomain", bc.REAL))


def function_to_bytes(f):
    return BFN_MAGIC + struct.pack("<I", f.n) + f.values.astype("<f8").tobytes()


def function_from_bytes(data, codomain=None):
    """Codomain is inferred from the values unless given (±1 before 0/1)."""
    if data[:4] != BFN_MAGIC:
        raise ValueError("not a BFN1 table")
    (n,) = struct.unpack("<I", data[4:8])
    vals = np.frombuffer(data[8:], dtype="<f8")
    if vals.size != 1 << n:
        raise ValueError(f"expected {1 << n} values, found {vals.size}")
    return bc.BooleanFunction(n, vals.astype(float), codomain or _infer_codomain(vals))


def scf_to_bytes(f):
    return SCF_MAGIC + struct.pack("<II", f.k, f.n) + np.asarray(f.table(), np.uint8).tobytes()


def scf_from_bytes(data, name="table"):
    if data[:4] != SCF_MAGIC:
        raise ValueError("not an SCF1 table")
    k, n = struct.unpack("<II", data[4:12])
    vals = np.frombuffer(data[12:], dtype=np.uint8)
    if vals.size != math.factorial(k) ** n:
        raise ValueError("table length does not match (k!)^n")
    return mp.from_table(k, n, vals.copy(), name)


def save_function(f, path):
    if str(path).endswith(".json"):
        with open(path, "w") as fh:
            fh.write(function_to_json(f))
    else:
        with open(path, "wb") as fh:
            fh.write(function_to_bytes(f))


def load_function(path):
    if str(path).endswith(".json"):
        with open(path) as fh:
            return function_from_json(fh.read())
    with open(path, "rb") as fh:
        return function_from_bytes(fh.read())


def to_jsonable(obj):
    """Recursively convert numpy scalars/arrays, Fractions and dataclasses."""
    from dataclasses import asdict, is_dataclass
    from fractions import Fraction
    if is_dataclass(obj) and not isinstance(obj, type):
        return to_jsonable(asdict(obj))
    if isinstance(obj, dict):
        return {str(k) if not isinstance(k, str) else k: to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, Fraction):
        return {"numerator": obj.numerator, "denominator": obj.denominator, "value": float(obj)}
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return str(obj)
    return obj
