"""ehrkit: a desk-scale, self-hostable electronic health record platform."""

from .platform import Platform

__all__ = ["Platform"]
__version__ = "0.1.0"
