from .app import create_app
from .serve import BackgroundServer, free_port

__all__ = ["BackgroundServer", "create_app", "free_port"]
