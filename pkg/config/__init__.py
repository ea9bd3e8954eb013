"""surfacekit configuration: stage bounds, budgets, tracing."""
from .settings import settings

__all__ = ["settings"]
