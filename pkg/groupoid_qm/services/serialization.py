"""JSON and CSV input/output for specs, elements, states and time series.

Complex numbers travel as [re, im] pairs; plain numbers are accepted on input.
Elements and states carry the fingerprint of their groupoid under "groupoid".
"""

from __future__ import annotations

import json
import logging
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, TextIO, Union

import numpy as np
import pandas as pd

from config import get_config
from groupoid_qm.domain.models import (
    AlgebraElement,
    DensityMatrix,
    FiniteGroupoid,
    GroupoidSpec,
    Operator,
    State,
    complex_pairs,
)
from groupoid_qm.errors import BindingError, InvalidSpecError
from groupoid_qm.services.groupoid_core import build_groupoid

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def read_json(path: PathLike) -> Any:
    """
    Raises:
        OSError: If the file cannot be read.
        InvalidSpecError: If the content is not valid JSON (with line number).
    """
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidSpecError(f"{path}: invalid JSON: {exc.msg}", line=exc.lineno) from exc


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_json(payload: Any, path: Optional[PathLike] = None, stream: Optional[TextIO] = None) -> None:
    """Write JSON atomically to path, or to stream (stdout by default)."""
    text = dumps(payload)
    if path is None:
        (stream or sys.stdout).write(text)
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    temp_path = path.with_suffix(path.suffix + ".tmp")
    temp_path.write_text(text, encoding="utf-8")
    temp_path.replace(path)


def _int_field(payload: Dict[str, Any], name: str) -> Optional[int]:
    value = payload.get(name)
    if value is None:
        return None
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidSpecError(f"{name} must be an integer, got {value!r}", field=name)
    return value


def spec_from_dict(payload: Any) -> GroupoidSpec:
    if not isinstance(payload, dict):
        raise InvalidSpecError("Groupoid spec must be a JSON object")
    kind = payload.get("kind")
    if not isinstance(kind, str):
        raise InvalidSpecError("Groupoid spec needs a string 'kind'", field="kind")
    edges = payload.get("edges", [])
    if not isinstance(edges, list):
        raise InvalidSpecError("edges must be a list of [a, b] pairs", field="edges")
    tables = payload.get("tables")
    if tables is not None and not isinstance(tables, dict):
        raise InvalidSpecError("tables must be an object", field="tables")
    return GroupoidSpec(
        kind=kind,
        n=_int_field(payload, "n"),
        m=_int_field(payload, "m"),
        edges=tuple(tuple(edge) if isinstance(edge, list) else edge for edge in edges),
        tables=tables,
    )


def load_groupoid(path: PathLike) -> FiniteGroupoid:
    groupoid = build_groupoid(spec_from_dict(read_json(path)))
    logger.info("Loaded groupoid from %s: %d events, %d transitions", path, groupoid.n_events, groupoid.n_transitions)
    return groupoid


def groupoid_to_dict(g: FiniteGroupoid) -> Dict[str, Any]:
    """The declarative spec when known, otherwise the explicit tables."""
    if g.spec is not None and g.spec.kind != "explicit":
        return g.spec.to_dict()
    return {"kind": "explicit", "tables": g.to_dict()}


def _complex_value(value: Any, field: str) -> complex:
    if isinstance(value, bool):
        raise InvalidSpecError(f"Expected a number or [re, im], got {value!r}", field=field)
    if isinstance(value, (int, float)):
        return complex(value)
    if (
        isinstance(value, list)
        and len(value) == 2
        and all(isinstance(part, (int, float)) and not isinstance(part, bool) for part in value)
    ):
        return complex(value[0], value[1])
    raise InvalidSpecError(f"Expected a number or [re, im], got {value!r}", field=field)


def complex_vector(values: Any, field: str = "coeffs") -> np.ndarray:
    if not isinstance(values, list):
        raise InvalidSpecError(f"{field} must be a list", field=field)
    return np.array([_complex_value(v, f"{field}[{i}]") for i, v in enumerate(values)], dtype=np.complex128)


def complex_matrix(rows: Any, field: str = "entries") -> np.ndarray:
    if not isinstance(rows, list) or not rows:
        raise InvalidSpecError(f"{field} must be a non-empty list of rows", field=field)
    matrix = [complex_vector(row, f"{field}[{i}]") for i, row in enumerate(rows)]
    if any(len(row) != len(rows) for row in matrix):
        raise InvalidSpecError(f"{field} must be a square matrix", field=field)
    return np.array(matrix)


def _check_binding(g: FiniteGroupoid, payload: Dict[str, Any]) -> None:
    bound = payload.get("groupoid")
    if bound is None:
        return
    if isinstance(bound, str):
        fingerprint = bound
    else:
        fingerprint = build_groupoid(spec_from_dict(bound)).fingerprint
    if fingerprint != g.fingerprint:
        raise BindingError(f"Document is bound to groupoid {fingerprint[:8]}, not {g.fingerprint[:8]}")


def _coeff_payload(payload: Any) -> Dict[str, Any]:
    if isinstance(payload, list):
        return {"coeffs": payload}
    if not isinstance(payload, dict) or "coeffs" not in payload:
        raise InvalidSpecError("Expected an object with 'coeffs' or a coefficient list", field="coeffs")
    return payload


def element_from_dict(g: FiniteGroupoid, payload: Any) -> AlgebraElement:
    payload = _coeff_payload(payload)
    _check_binding(g, payload)
    return AlgebraElement(g, complex_vector(payload["coeffs"]))


def element_to_dict(f: AlgebraElement) -> Dict[str, Any]:
    return {"groupoid": f.groupoid.fingerprint, "coeffs": complex_pairs(f.coeffs)}


def state_from_dict(g: FiniteGroupoid, payload: Any) -> State:
    payload = _coeff_payload(payload)
    _check_binding(g, payload)
    return State(g, complex_vector(payload["coeffs"]))


def state_to_dict(rho: State) -> Dict[str, Any]:
    return {"groupoid": rho.groupoid.fingerprint, "coeffs": complex_pairs(rho.coeffs)}


def density_from_dict(payload: Any) -> DensityMatrix:
    rows = payload.get("entries") if isinstance(payload, dict) else payload
    return DensityMatrix(complex_matrix(rows))


def operator_from_dict(payload: Any) -> Operator:
    rows = payload.get("entries") if isinstance(payload, dict) else payload
    return Operator(complex_matrix(rows))


def load_element(g: FiniteGroupoid, path: PathLike) -> AlgebraElement:
    return element_from_dict(g, read_json(path))


def load_state(g: FiniteGroupoid, path: PathLike) -> State:
    return state_from_dict(g, read_json(path))


def complex_columns(prefix: str, labels: Sequence[str], values: np.ndarray) -> Dict[str, np.ndarray]:
    """re_/im_ column pairs for a (rows × len(labels)) complex array."""
    values = np.asarray(values, dtype=np.complex128)
    columns: Dict[str, np.ndarray] = {}
    for index, label in enumerate(labels):
        columns[f"re_{prefix}{label}"] = values[:, index].real
        columns[f"im_{prefix}{label}"] = values[:, index].imag
    return columns


def time_series_frame(times: np.ndarray, columns: Dict[str, np.ndarray]) -> pd.DataFrame:
    frame = pd.DataFrame({"t": np.asarray(times, dtype=np.float64)})
    for name, values in columns.items():
        frame[name] = np.asarray(values, dtype=np.float64)
    return frame


def write_csv(frame: pd.DataFrame, path: Optional[PathLike] = None, stream: Optional[TextIO] = None) -> None:
    """CSV with every float written as %.16e (17 significant digits)."""
    float_format = get_config().runtime.csv_float_format
    if path is None:
        (stream or sys.stdout).write(frame.to_csv(index=False, float_format=float_format, lineterminator="\n"))
        return
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(path, index=False, float_format=float_format, lineterminator="\n")


__all__ = [
    "read_json",
    "dumps",
    "write_json",
    "spec_from_dict",
    "load_groupoid",
    "groupoid_to_dict",
    "complex_vector",
    "complex_matrix",
    "element_from_dict",
    "element_to_dict",
    "state_from_dict",
    "state_to_dict",
    "density_from_dict",
    "operator_from_dict",
    "load_element",
    "load_state",
    "complex_columns",
    "time_series_frame",
    "write_csv",
]
