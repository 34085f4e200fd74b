"""Random planar graphs near the critical density: weighted multigraphs,
core-kernel decomposition, urn-driven random cores and scaling experiments."""
from __future__ import annotations

__version__ = "0.1.0"
