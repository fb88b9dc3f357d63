"""HTTP service layer: FastAPI app plus request/response schemas."""

from .app import app, handle_compare, handle_phase_report, handle_simulate

__all__ = ["app", "handle_simulate", "handle_compare", "handle_phase_report"]
