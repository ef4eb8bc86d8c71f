"""
Pydantic models for every JSON artefact: lattices, embeddings,
certificates, fibre configurations, Weierstrass models and quartic reports.
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, PositiveInt, model_validator

SCHEMA_VERSION = 1

Status = Literal["verified", "refuted", "not_checked"]
# a run whose steps raised is "error", distinct from a budget skip
ReportStatus = Literal["verified", "refuted", "not_checked", "error"]


def to_builtin(value: Any) -> Any:
    """Turn numpy scalars/arrays and tuples into plain JSON-friendly Python values."""
    if isinstance(value, np.ndarray):
        return [to_builtin(v) for v in value.tolist()]
    if isinstance(value, (np.integer,)):
        return int(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, (set, frozenset)):
        return sorted(to_builtin(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [to_builtin(v) for v in value]
    if isinstance(value, dict):
        return {str(k): to_builtin(v) for k, v in value.items()}
    return value


def dump_json(payload: Union[BaseModel, Dict[str, Any]], indent: Optional[int] = 2) -> str:
    """
    Serialize an artefact with the schema version and sorted keys.

    Args:
        payload: A pydantic model or a plain dictionary

    Returns:
        Deterministic JSON text
    """
    if isinstance(payload, BaseModel):
        data = payload.model_dump(mode="json")
    else:
        data = to_builtin(payload)
    data = {"schema": SCHEMA_VERSION, **data}
    return json.dumps(data, sort_keys=True, indent=indent, ensure_ascii=False)


def error_payload(kind: str, message: str) -> Dict[str, Any]:
    return {"error": {"type": kind, "message": message}}


# Lattices

class RootLatticeModel(BaseModel):
    """Even lattice given by its integer Gram matrix."""
    model_config = ConfigDict(frozen=True)

    rank: int = Field(ge=0)
    gram: List[List[int]]
    label: Optional[str] = None

    @model_validator(mode="after")
    def check_gram(self):
        if len(self.gram) != self.rank or any(len(row) != self.rank for row in self.gram):
            raise ValueError("gram must be rank x rank")
        for i in range(self.rank):
            for j in range(i):
                if self.gram[i][j] != self.gram[j][i]:
                    raise ValueError("gram must be symmetric")
        return self

    def matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64).reshape(self.rank, self.rank)


class SublatticeEmbedding(BaseModel):
    """Images of a sub-basis in ambient coordinates, with the induced Gram matrix."""
    model_config = ConfigDict(frozen=True)

    ambient: RootLatticeModel
    images: List[List[int]]
    sub_gram: List[List[int]]

    @model_validator(mode="after")
    def check_images(self):
        rank = self.ambient.rank
        if any(len(v) != rank for v in self.images):
            raise ValueError("every image needs ambient-rank coordinates")
        if self.images:
            B = np.array(self.images, dtype=np.int64)
            induced = B @ self.ambient.matrix() @ B.T
            if induced.tolist() != self.sub_gram:
                raise ValueError("sub_gram does not match the images")
        elif self.sub_gram:
            raise ValueError("empty embedding with a non-empty sub_gram")
        return self

    @property
    def rank(self) -> int:
        return len(self.images)

    def lattice(self) -> RootLatticeModel:
        return RootLatticeModel(rank=len(self.images), gram=self.sub_gram)


class DiscriminantGroupDescriptor(BaseModel):
    invariant_factors: List[int]
    order: int

    @model_validator(mode="after")
    def check_chain(self):
        product = 1
        for f in self.invariant_factors:
            product *= f
        if product != self.order:
            raise ValueError("order must be the product of the invariant factors")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError("invariant factors must form a divisibility chain")
        return self


class ExtendedFiberLattice(BaseModel):
    """Degenerate lattice of an affine Dynkin diagram with its fibre class."""
    model_config = ConfigDict(frozen=True)

    kodaira: str
    vertices: List[str]
    gram: List[List[int]]
    multiplicities: List[PositiveInt]

    @model_validator(mode="after")
    def check_radical(self):
        G = np.array(self.gram, dtype=np.int64)
        m = np.array(self.multiplicities, dtype=np.int64)
        if G.shape != (len(self.vertices), len(self.vertices)) or len(m) != len(self.vertices):
            raise ValueError("gram, vertices and multiplicities disagree in size")
        if np.any(G @ m):
            raise ValueError("gram does not annihilate the multiplicity vector")
        return self

    def matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64)


class Certificate(BaseModel):
    """Outcome of one verification with its witness data."""
    check: str
    status: Status
    detail: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def normalize_detail(cls, data):
        if isinstance(data, dict) and "detail" in data:
            data = {**data, "detail": to_builtin(data["detail"])}
        return data


class VerificationReport(BaseModel):
    seed: int
    success: bool
    status: ReportStatus
    certificates: List[Certificate]
    errors: List[str] = Field(default_factory=list)


# Fibres

class DualGraph(BaseModel):
    vertices: List[str]
    adjacency: List[List[int]]
    multiplicities: List[PositiveInt]


class FiberTypeRecord(BaseModel):
    """One row of the characteristic-2 singular fibre table."""
    model_config = ConfigDict(frozen=True)

    kodaira: str
    symbol: str
    n: Optional[int] = None
    m_v: int
    e_v: int
    delta_min: int
    delta_fixed: bool
    n_v: int
    dynkin: Optional[str] = None
    family: str
    reduced: bool


class FiberEntry(BaseModel):
    type: str
    n: Optional[int] = None
    delta: int = Field(ge=0)
    a2: int = Field(default=0, ge=0)


class FiberConfiguration(BaseModel):
    fibers: List[FiberEntry]
    cost: int
    N_total: int


class EnumerationResult(BaseModel):
    budget: int
    standard_budget: bool
    objective: str
    required_a2: int
    max: Optional[int]
    types_at_max: List[str]
    count: int
    configurations: List[FiberConfiguration]


class IncidenceProblem(BaseModel):
    num_points: PositiveInt
    points_per_block: PositiveInt
    blocks_per_point: PositiveInt
    max_shared_points: PositiveInt


class CensusReport(BaseModel):
    problem: IncidenceProblem
    arithmetic_feasible: bool
    num_blocks: Optional[int] = None
    exhaustive_searched: bool = False
    exhaustive_feasible: Optional[bool] = None
    incidence: Optional[List[List[int]]] = None
    reason: str = ""


# Fields and Weierstrass models

class FieldDescriptor(BaseModel):
    """{"k": 8, "modulus": "0x11b"} for GF(2^k), {"p": 5} for a prime field."""
    k: Optional[int] = None
    modulus: Optional[str] = None
    p: Optional[int] = None


class WeierstrassModelData(BaseModel):
    field: FieldDescriptor
    a1: List[str] = Field(default_factory=list)
    a2: List[str] = Field(default_factory=list)
    a3: List[str] = Field(default_factory=list)
    a4: List[str] = Field(default_factory=list)
    a6: List[str] = Field(default_factory=list)


class PlaceReport(BaseModel):
    place: str
    v_delta: int = Field(ge=0)
    classification: str
    delta: Optional[int] = None


# Quartics

class PlaneSectionReport(BaseModel):
    plane: List[str]
    status: Literal["reduced", "double-conic", "contains-double-line"]
    section: Dict[str, str] = Field(default_factory=dict)
    node_locus: List[List[str]] = Field(default_factory=list)
    square_root: Optional[Dict[str, str]] = None
    double_line: Optional[List[str]] = None


class QuarticReport(BaseModel):
    seed: Optional[int] = None
    field: FieldDescriptor
    nodes: List[List[str]]
    nonreduced_planes: List[List[str]] = Field(default_factory=list)
    census: Dict[str, Any] = Field(default_factory=dict)
    status: Status
