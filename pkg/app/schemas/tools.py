"""
Tool registry entries and the request body shared by the CLI and HTTP surfaces.
"""

from typing import List, Optional
from pydantic import BaseModel, Field


class ToolInfo(BaseModel):
    """Tool metadata for the registry."""
    tool_key: str
    name: str
    description: str
    inputs: List[str]
    endpoint: str


class ToolRequest(BaseModel):
    """
    Inputs in the shell grammar. Each tool reads the fields it needs:
    curves as polynomials in X, Y, Z, points as (a:b:c), transforms as nine
    comma-separated entries, candidate lists separated by ';'.
    """
    field: str = "Q"
    conic: Optional[str] = None
    curve: Optional[str] = None
    c1: Optional[str] = None
    c2: Optional[str] = None
    components: List[str] = Field(default_factory=list)
    point: Optional[str] = None
    point2: Optional[str] = None
    witness: Optional[str] = None
    candidates: Optional[str] = None
    normalizer: Optional[str] = None
    only: List[str] = Field(default_factory=list)
