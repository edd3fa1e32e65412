"""
Tools router - handles /v1/tools endpoints.
"""

from fastapi import APIRouter, HTTPException, Request

from app.schemas import ErrorCode, ErrorResponse, ReportDocument, ToolRequest
from app.services.toolkit import TOOLS_REGISTRY, ToolkitService

router = APIRouter(prefix="/tools", tags=["Tools"])

service = ToolkitService()


def _not_found(tool_key: str, request_id: str) -> HTTPException:
    return HTTPException(
        status_code=404,
        detail=ErrorResponse(
            error_code=ErrorCode.UNKNOWN_TOOL,
            message=f"Tool '{tool_key}' not found",
            request_id=request_id,
            retryable=False
        ).model_dump()
    )


@router.get("/")
async def list_tools():
    """
    List all available tools.
    Returns tool registry with metadata.
    """
    return {
        "tools": [tool.model_dump() for tool in TOOLS_REGISTRY.values()]
    }


@router.get("/{tool_key}")
async def get_tool_info(tool_key: str):
    """
    Get information about a specific tool.
    """
    if tool_key not in TOOLS_REGISTRY:
        raise _not_found(tool_key, "")

    return TOOLS_REGISTRY[tool_key].model_dump()


@router.post("/{tool_key}", response_model=ReportDocument)
def run_tool(tool_key: str, body: ToolRequest, request: Request):
    """
    Run a tool. The body carries inputs in the CLI grammar; domain errors are
    rendered by the SGPointsError handler.
    """
    request_id = getattr(request.state, "request_id", "unknown")

    if tool_key not in TOOLS_REGISTRY:
        raise _not_found(tool_key, request_id)

    return service.run(tool_key, body, request_id)
