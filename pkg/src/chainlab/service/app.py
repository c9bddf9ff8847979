"""FastAPI service exposing the scenario lab over HTTP.

The service is stateless: every run request executes the requested
scenarios in-process and returns the full reports, including the canonical
structured serialization used for golden-file comparison. Start it with
`uvicorn chainlab.service.app:app` or `chainlab serve`.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException

import chainlab
from chainlab.harness import (
    ScenarioError,
    ScenarioReport,
    run_scenario,
    scenario_catalog,
    scenario_spec,
)
from chainlab.service.schemas import (
    CatalogResponse,
    HealthResponse,
    ReportModel,
    ReportRow,
    RunRequest,
    RunResponse,
    ScenarioInfo,
)


def _to_model(report: ScenarioReport) -> ReportModel:
    spec = scenario_spec(report.scenario)
    return ReportModel(
        scenario=report.scenario,
        seed=report.seed,
        params=report.params,
        verdict=report.verdict,
        expected_verdict=spec.expected_verdict,
        matches_expected=report.verdict == spec.expected_verdict,
        rows=[ReportRow(**row.to_record()) for row in report.rows],
        structured=report.to_structured(),
        table=report.to_table(),
    )


def create_app() -> FastAPI:
    app = FastAPI(
        title="chainlab",
        description="deterministic blockchain attack/defense scenario lab",
        version=chainlab.__version__,
    )

    @app.get("/", response_model=HealthResponse)
    @app.get("/healthz", response_model=HealthResponse)
    def healthz() -> HealthResponse:
        return HealthResponse(status="ok", version=chainlab.__version__,
                              scenario_count=len(scenario_catalog()))

    @app.get("/scenarios", response_model=CatalogResponse)
    def scenarios() -> CatalogResponse:
        return CatalogResponse(scenarios=[
            ScenarioInfo(
                name=spec.name,
                summary=spec.summary,
                topic=spec.topic,
                expected_verdict=spec.expected_verdict,
                default_params=spec.defaults,
            )
            for spec in scenario_catalog()
        ])

    @app.post("/runs", response_model=RunResponse)
    def runs(request: RunRequest) -> RunResponse:
        if request.scenario == "all":
            if request.params:
                raise HTTPException(
                    status_code=422,
                    detail="parameter overrides require a single scenario, not 'all'")
            names = [spec.name for spec in scenario_catalog()]
        else:
            names = [request.scenario]
        reports = []
        for name in names:
            try:
                report = run_scenario(name, seed=request.seed, params=request.params)
            except ScenarioError as exc:
                status = 404 if exc.code == "unknown_scenario" else 422
                raise HTTPException(status_code=status, detail=str(exc))
            reports.append(_to_model(report))
        return RunResponse(reports=reports,
                           all_match=all(r.matches_expected for r in reports))

    return app


app = create_app()
