"""
FastAPI application for the char2-quartics verifier.
Provides REST API endpoints for the verifications and stored reports.
"""

import os
from pathlib import Path
from typing import Any, Dict, List, Optional

import uvicorn
from fastapi import FastAPI, HTTPException
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse
from pydantic import BaseModel, Field

import char2_weierstrass as cw
import fiber_combinatorics as fc
import lattice_core as lc
from config import settings
from orchestrator import VerificationOrchestrator, save_report
from schemas import Certificate, EnumerationResult, FiberTypeRecord, VerificationReport, WeierstrassModelData


def safe_join_path(base_dir: str, filename: str) -> str:
    """
    Safely join paths and prevent directory traversal attacks.

    Args:
        base_dir: Base directory path
        filename: Filename to join

    Returns:
        Safe joined path

    Raises:
        HTTPException: If path traversal is detected
    """
    base = Path(base_dir).resolve()
    safe_filename = os.path.basename(filename)
    full_path = (base / safe_filename).resolve()

    try:
        full_path.relative_to(base)
    except ValueError:
        raise HTTPException(status_code=400, detail="Invalid file path")

    return str(full_path)


# Initialize FastAPI app
app = FastAPI(
    title="char2-quartics",
    description="Exact verifications for nodes on quartic surfaces in characteristic 2",
    version="1.0.0"
)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


# Request models
class EnumerateRequest(BaseModel):
    """Request model for the fibre configuration enumerator."""
    budget: int = Field(default=fc.STANDARD_BUDGET, ge=0, le=48)
    require_a2: int = Field(default=0, ge=0, le=12)
    summary: bool = False


class VerifyRequest(BaseModel):
    """Request model for a suite run."""
    seed: Optional[int] = None
    only: Optional[List[str]] = None
    save: bool = True


# Response models
class LatticeInfo(BaseModel):
    """Invariants of one ADE lattice."""
    label: str
    rank: int
    gram: List[List[int]]
    determinant: int
    two_length: int
    invariant_factors: List[int]
    roots: int


class DiscriminantResponse(BaseModel):
    discriminant: List[str]
    degree: int
    oracle_agrees: bool
    square: bool
    places: List[Dict[str, Any]]


def domain_error(e: Exception) -> HTTPException:
    if isinstance(e, ValueError):
        return HTTPException(status_code=400, detail=str(e))
    return HTTPException(status_code=500, detail=str(e))


@app.get("/")
async def root():
    """Root endpoint with API information."""
    return {
        "name": "char2-quartics",
        "version": "1.0.0",
        "description": "Lattice, fibre and quartic-surface verifications in characteristic 2",
        "endpoints": {
            "GET /fiber-table": "Characteristic-2 singular fibre table",
            "GET /nv/{label}": "Maximum disjoint configurations in a fibre",
            "POST /enumerate": "Optimal fibre configurations for a budget",
            "GET /lattice/{label}": "Invariants of an ADE lattice",
            "GET /lattice/{label}/index-lemma": "Closure indices of A1^r",
            "POST /wmodel/discriminant": "Discriminant and places of a Weierstrass model",
            "POST /verify-all": "Run the verification suite",
            "GET /reports": "List stored reports",
            "GET /reports/{name}": "Download a stored report",
            "GET /health": "Health check"
        }
    }


@app.get("/health")
async def health_check():
    """Health check endpoint."""
    return {"status": "healthy"}


@app.get("/fiber-table", response_model=List[FiberTypeRecord])
async def fiber_table(max_n: int = 8):
    if not 0 <= max_n <= 40:
        raise HTTPException(status_code=400, detail="max_n must lie in [0, 40]")
    return [fc.fiber_table(t) for t in fc.all_types(max_n)]


@app.get("/nv/{label}")
def nv(label: str, a2: Optional[int] = None, omit: Optional[str] = None):
    """
    N_v of a fibre type, optionally with A2's or with a vertex removed.

    Returns:
        Type, N_v and the requested variants
    """
    try:
        record = fc.fiber_table(label)
        result = {"type": record.kodaira, "N_v": fc.max_disjoint(label)}
        if a2 is not None:
            result["N_v^(i)"] = fc.max_disjoint_with_A2(label, a2)
        if omit is not None:
            vertex = int(omit) if omit.isdigit() else omit
            result["N_v_omitting"] = fc.max_disjoint_omitting(label, vertex)
        return result
    except Exception as e:
        raise domain_error(e)


@app.post("/enumerate")
def enumerate_configurations(request: EnumerateRequest):
    try:
        result: EnumerationResult = fc.enumerate_configurations(request.budget, request.require_a2)
    except Exception as e:
        raise domain_error(e)
    data = result.model_dump(mode="json")
    if request.summary:
        data.pop("configurations")
    return data


@app.get("/lattice/{label}", response_model=LatticeInfo)
def lattice_info(label: str):
    try:
        L = lc.ade_gram(label)
        return LatticeInfo(
            label=L.label,
            rank=L.rank,
            gram=L.gram,
            determinant=lc.determinant(L),
            two_length=lc.two_length(L),
            invariant_factors=lc.discriminant_group(L).invariant_factors,
            roots=len(lc.enumerate_roots(L)),
        )
    except Exception as e:
        raise domain_error(e)


@app.get("/lattice/{label}/index-lemma", response_model=Certificate)
def index_lemma(label: str, r: Optional[int] = None):
    try:
        return lc.verify_index_lemma(label, r)
    except Exception as e:
        raise domain_error(e)


@app.post("/wmodel/discriminant", response_model=DiscriminantResponse)
def wmodel_discriminant(data: WeierstrassModelData):
    try:
        w = cw.WeierstrassModel.from_data(data)
        delta = cw.discriminant(w)
        places = cw.place_reports(w)
        return DiscriminantResponse(
            discriminant=delta.to_hex(),
            degree=delta.degree,
            oracle_agrees=delta == cw.discriminant_oracle(w),
            square=places["square"],
            places=places["places"],
        )
    except Exception as e:
        raise domain_error(e)


@app.post("/verify-all", response_model=VerificationReport)
def verify_all(request: VerifyRequest):
    """
    Run the verification suite.

    Args:
        request: Seed, optional check selection and whether to store the report

    Returns:
        VerificationReport with every certificate
    """
    try:
        orchestrator = VerificationOrchestrator(seed=request.seed, verbose=False)
        report = orchestrator.run_all(request.only)
        if request.save:
            save_report(report)
        return report
    except Exception as e:
        raise domain_error(e)


@app.get("/reports")
async def list_reports():
    """
    List all stored reports.

    Returns:
        List of report files
    """
    try:
        if not os.path.isdir(settings.reports_dir):
            return {"reports": []}
        reports = []
        for filename in sorted(os.listdir(settings.reports_dir)):
            if filename.endswith(".json"):
                file_path = os.path.join(settings.reports_dir, filename)
                reports.append({"name": filename, "size": os.path.getsize(file_path)})
        return {"reports": reports}
    except Exception as e:
        raise HTTPException(status_code=500, detail=str(e))


@app.get("/reports/{report_name}")
async def get_report(report_name: str):
    """
    Download a stored report.

    Args:
        report_name: Name of the report file

    Returns:
        JSON file
    """
    report_path = safe_join_path(settings.reports_dir, report_name)

    if not report_name.endswith(".json"):
        raise HTTPException(status_code=400, detail="Invalid report name")

    if not os.path.exists(report_path) or not os.path.isfile(report_path):
        raise HTTPException(status_code=404, detail="Report not found")

    return FileResponse(report_path, media_type="application/json", filename=os.path.basename(report_path))


@app.delete("/reports/{report_name}")
async def delete_report(report_name: str):
    report_path = safe_join_path(settings.reports_dir, report_name)

    if not report_name.endswith(".json"):
        raise HTTPException(status_code=400, detail="Invalid report name")

    if os.path.exists(report_path) and os.path.isfile(report_path):
        os.remove(report_path)
        return {"message": "Report deleted successfully"}
    raise HTTPException(status_code=404, detail="Report not found")


def start_server():
    """Start the FastAPI server."""
    uvicorn.run(
        "main:app",
        host=settings.host,
        port=settings.port,
        reload=True
    )


if __name__ == "__main__":
    start_server()
