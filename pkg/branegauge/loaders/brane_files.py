"""
Brane File Loader

Reads and writes the JSON brane descriptions:

- ``projective``: twisted complexes on P^n
- ``torus``: constant complexes with a connection and optional term metrics
- ``torus-cone``: a compatible chain map between two torus branes

Exact coefficients are rational strings ``"a/b"``; matrix entries are
``[re, im]`` pairs or plain real numbers.
"""

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Literal, Union

import structlog
from pydantic import BaseModel, ConfigDict, Field, TypeAdapter, ValidationError

from ..core.errors import BraneGaugeError, SchemaError
from ..core.linalg import MatrixAlgebra, to_fraction
from ..core.projective import TwistedComplex, make_complex, poly_from_terms, poly_to_terms
from ..core.torus import CompatibleMap, ConnectionFamily, ConstantComplex, constant_complex


logger = structlog.get_logger(__name__)

Number = Union[int, float, str]
Entry = Union[tuple[Number, Number], Number]
MatrixData = list[list[Entry]]
PolyTerm = tuple[Number, Number, list[int]]


class _Schema(BaseModel):
    model_config = ConfigDict(extra="forbid")


class ProjectiveFile(_Schema):
    model: Literal["projective"]
    n: int = Field(ge=1)
    terms: dict[int, list[int]]
    differentials: dict[int, list[list[list[PolyTerm]]]] = Field(default_factory=dict)


class TorusBody(_Schema):
    ranks: dict[int, Annotated[int, Field(ge=0)]]
    differentials: dict[int, MatrixData] = Field(default_factory=dict)
    connection: dict[int, list[MatrixData]] = Field(default_factory=dict)
    metrics: dict[int, MatrixData] = Field(default_factory=dict)


class TorusFile(TorusBody):
    model: Literal["torus"]
    g: int = Field(ge=1)


class TorusConeFile(_Schema):
    model: Literal["torus-cone"]
    g: int = Field(ge=1)
    source: TorusBody
    target: TorusBody
    map: dict[int, MatrixData] = Field(default_factory=dict)


BraneFile = Annotated[Union[ProjectiveFile, TorusFile, TorusConeFile], Field(discriminator="model")]
_adapter = TypeAdapter(BraneFile)


@dataclass(frozen=True)
class ProjectiveBrane:
    complex: TwistedComplex


@dataclass(frozen=True)
class TorusBrane:
    g: int
    complex: ConstantComplex
    connection: ConnectionFamily
    metrics: dict[int, Any]


@dataclass(frozen=True)
class TorusConeBrane:
    map: CompatibleMap
    source_metrics: dict[int, Any]
    target_metrics: dict[int, Any]


Brane = Union[ProjectiveBrane, TorusBrane, TorusConeBrane]


# ---------------------------------------------------------------------------
# Parsing
# ---------------------------------------------------------------------------

def _entry(value: Entry) -> tuple[Fraction, Fraction]:
    if isinstance(value, (tuple, list)):
        re, im = value
        return to_fraction(re), to_fraction(im)
    return to_fraction(value), Fraction(0)


def _matrix(algebra: MatrixAlgebra, rows: MatrixData, nrows: int, ncols: int, what: str) -> Any:
    if len(rows) != nrows or any(len(row) != ncols for row in rows):
        raise SchemaError(f"{what} must be {nrows}x{ncols}")
    return algebra.matrix([[_entry(e) for e in row] for row in rows], cols=ncols)


def _torus_parts(body: TorusBody, g: int, algebra: MatrixAlgebra, label: str):
    ranks = dict(body.ranks)

    def rank(i: int) -> int:
        return ranks.get(i, 0)

    differentials = {
        i: _matrix(algebra, rows, rank(i + 1), rank(i), f"{label}differential {i}")
        for i, rows in body.differentials.items()
    }
    complex_ = constant_complex(algebra, ranks, differentials)
    matrices = {}
    for i, blocks in body.connection.items():
        if len(blocks) != g:
            raise SchemaError(f"{label}connection in degree {i} needs {g} matrices, got {len(blocks)}")
        matrices[i] = tuple(
            _matrix(algebra, rows, rank(i), rank(i), f"{label}connection {i}.{k + 1}")
            for k, rows in enumerate(blocks)
        )
    metrics = {
        i: _matrix(algebra, rows, rank(i), rank(i), f"{label}metric {i}")
        for i, rows in body.metrics.items()
    }
    return complex_, ConnectionFamily(g, matrices), metrics


def _from_schema(data: ProjectiveFile | TorusFile | TorusConeFile, algebra: MatrixAlgebra) -> Brane:
    if isinstance(data, ProjectiveFile):
        differentials = {
            p: [[poly_from_terms(data.n, entry) for entry in row] for row in rows]
            for p, rows in data.differentials.items()
        }
        return ProjectiveBrane(make_complex(data.n, data.terms, differentials))
    if isinstance(data, TorusFile):
        complex_, connection, metrics = _torus_parts(data, data.g, algebra, "")
        return TorusBrane(data.g, complex_, connection, metrics)
    source, alpha, source_metrics = _torus_parts(data.source, data.g, algebra, "source ")
    target, beta, target_metrics = _torus_parts(data.target, data.g, algebra, "target ")
    components = {
        i: _matrix(algebra, rows, target.rank(i), source.rank(i), f"map {i}")
        for i, rows in data.map.items()
    }
    return TorusConeBrane(CompatibleMap(source, alpha, target, beta, components),
                          source_metrics, target_metrics)


def parse_brane(payload: dict | str, algebra: MatrixAlgebra) -> Brane:
    """
    Parse a brane description (a dict or JSON text).

    Raises:
        SchemaError: on malformed JSON, schema violations or inconsistent shapes
    """
    try:
        raw = json.loads(payload) if isinstance(payload, str) else payload
        data = _adapter.validate_python(raw)
        return _from_schema(data, algebra)
    except json.JSONDecodeError as e:
        raise SchemaError(f"invalid JSON: {e}") from e
    except ValidationError as e:
        raise SchemaError(f"schema violation: {e.error_count()} error(s): {e.errors()[0]['msg']}") from e
    except SchemaError:
        raise
    except (BraneGaugeError, ValueError, ZeroDivisionError) as e:
        raise SchemaError(str(e)) from e


def load_brane(path: str | Path, algebra: MatrixAlgebra) -> Brane:
    """Read and parse a brane file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise SchemaError(f"cannot read {path}: {e}") from e
    brane = parse_brane(text, algebra)
    logger.debug("brane_loaded", path=str(path), kind=type(brane).__name__)
    return brane


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _dump_scalar(algebra: MatrixAlgebra, value: Any) -> list:
    if algebra.exact:
        return [str(algebra.real_part(value)), str(algebra.imag_part(value))]
    z = algebra.to_complex(value)
    return [z.real, z.imag]


def dump_matrix(algebra: MatrixAlgebra, m: Any) -> list:
    return [[_dump_scalar(algebra, e) for e in row] for row in algebra.to_rows(m)]


def _dump_body(complex_: ConstantComplex, connection: ConnectionFamily, metrics: dict) -> dict:
    la = complex_.algebra
    return {
        "ranks": {str(i): r for i, r in sorted(complex_.ranks.items())},
        "differentials": {str(i): dump_matrix(la, d) for i, d in sorted(complex_.differentials.items())},
        "connection": {
            str(i): [dump_matrix(la, a) for a in blocks]
            for i, blocks in sorted(connection.matrices.items())
        },
        "metrics": {str(i): dump_matrix(la, h) for i, h in sorted(metrics.items())},
    }


def dump_brane(brane: Brane) -> dict:
    """JSON-ready dict that parses back to an equal brane."""
    if isinstance(brane, ProjectiveBrane):
        c = brane.complex
        return {
            "model": "projective",
            "n": c.n,
            "terms": {str(p): list(c.twists(p)) for p in c.degrees},
            "differentials": {
                str(p): [[poly_to_terms(e) for e in row] for row in rows]
                for p, rows in sorted(c.differentials.items())
            },
        }
    if isinstance(brane, TorusBrane):
        return {"model": "torus", "g": brane.g,
                **_dump_body(brane.complex, brane.connection, brane.metrics)}
    f = brane.map
    la = f.source.algebra
    return {
        "model": "torus-cone",
        "g": f.source_connection.g,
        "source": _dump_body(f.source, f.source_connection, brane.source_metrics),
        "target": _dump_body(f.target, f.target_connection, brane.target_metrics),
        "map": {str(i): dump_matrix(la, m) for i, m in sorted(f.components.items())},
    }
