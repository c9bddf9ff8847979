"""Pydantic request/response models for the scenario service."""

from __future__ import annotations

from typing import Dict, List, Union

from pydantic import BaseModel, Field

ParamValue = Union[int, str]


class ScenarioInfo(BaseModel):
    name: str
    summary: str
    topic: str
    expected_verdict: str
    default_params: Dict[str, ParamValue]


class CatalogResponse(BaseModel):
    scenarios: List[ScenarioInfo]


class RunRequest(BaseModel):
    scenario: str = Field(description="scenario name, or 'all'")
    seed: int = 42
    params: Dict[str, ParamValue] = Field(default_factory=dict)


class ReportRow(BaseModel):
    step: str
    action: str
    status: str
    observables: Dict[str, ParamValue]


class ReportModel(BaseModel):
    scenario: str
    seed: int
    params: Dict[str, ParamValue]
    verdict: str
    expected_verdict: str
    matches_expected: bool
    rows: List[ReportRow]
    structured: str = Field(description="canonical JSONL serialization (golden format)")
    table: str = Field(description="human-readable table")


class RunResponse(BaseModel):
    reports: List[ReportModel]
    all_match: bool


class HealthResponse(BaseModel):
    status: str
    version: str
    scenario_count: int
