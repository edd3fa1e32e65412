"""
Health check endpoint.
"""

from datetime import datetime, timezone

from fastapi import APIRouter
from pydantic import BaseModel

from app import __version__
from app.services.suite import FIXTURES

router = APIRouter(tags=["Health"])


class HealthResponse(BaseModel):
    """Health check response."""
    status: str
    timestamp: str
    version: str
    fixtures: int


@router.get("/health", response_model=HealthResponse)
async def health_check():
    """Liveness probe; reports the number of registered suite fixtures."""
    return HealthResponse(
        status="healthy",
        timestamp=datetime.now(timezone.utc).isoformat(),
        version=__version__,
        fixtures=len(FIXTURES),
    )
