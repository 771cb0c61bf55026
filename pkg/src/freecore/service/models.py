"""Pydantic shapes for the HTTP surface.

These validate transport structure only; the engine's schema module
stays the single authority on semantic validation, so every model is
converted back to a plain document before parsing.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class SummandModel(BaseModel):
    kind: str
    size: int | None = None
    eigenvalues: list[str] | None = None
    weight: str | None = None
    param: str | None = None
    amplification: str | None = None
    label: str | None = None
    generators: list[str] | None = None


class TailModel(BaseModel):
    generators: list[str]
    weight_base: str = "1/2"


class SpecModel(BaseModel):
    schema_version: int = 1
    name: str = "input"
    summands: list[SummandModel] = Field(default_factory=list)
    tail: TailModel | None = None

    def document(self) -> dict:
        return self.model_dump(exclude_none=True)


class PairRequest(BaseModel):
    spec1: SpecModel
    spec2: SpecModel
    height: int = Field(default=3, ge=0, le=12)
    oracle: bool = False


class ScenarioRequest(BaseModel):
    indices: list[str]
    beta: dict[str, str]
    gamma: dict[str, str] = Field(default_factory=dict)
    atoms: dict[str, list[str]] = Field(default_factory=dict)
    q: dict[str, str] = Field(default_factory=dict)
    gamma_choice: str = "smallest"

    def document(self) -> dict:
        return self.model_dump(exclude={"gamma_choice"})


class FdimRequest(BaseModel):
    specs: list[SpecModel] = Field(min_length=1, max_length=2)


class OracleRequest(BaseModel):
    steps: int = Field(default=5, ge=2, le=9)
    samples: int = Field(default=100, ge=1, le=2000)
    simulate: bool = False


class ReportResponse(BaseModel):
    payload: dict
    text: str


class HealthResponse(BaseModel):
    status: str
    version: str
