# __init__.py
from .arnoldi import arnoldi, arnoldi_step
from .gmres import AffineSystem, gmres_restarted

__all__ = ["arnoldi", "arnoldi_step", "AffineSystem", "gmres_restarted"]
