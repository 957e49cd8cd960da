# waveholtz.py
import logging
import math
from typing import Iterator, Literal

import numpy as np
import scipy.linalg as sla
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from pydantic import Field

from sobolev_anderson.anderson import FixedPointProblem
from sobolev_anderson.errors import InvalidDimensionError, InvalidParameterError, SingularSystemError
from .config import (
    WAVEHOLTZ_1D_AMPLITUDE,
    WAVEHOLTZ_1D_N,
    WAVEHOLTZ_2D_AMPLITUDE,
    WAVEHOLTZ_2D_N,
    WAVEHOLTZ_CFL,
    WAVEHOLTZ_REFERENCE_CHUNK,
)

logger = logging.getLogger(__name__)

SpeedProfile = Literal["a", "b", "c"]


def wave_speed_1d(x: np.ndarray, profile: SpeedProfile) -> np.ndarray:
    """Stencil coefficient for the three 1D wave-speed profiles"""
    x = np.asarray(x, dtype=float)
    if profile == "a":
        return np.ones_like(x)
    if profile == "b":
        return 1.0 - 0.55 * np.exp(-144.0 * (x - 0.5) ** 2)
    if profile == "c":
        return np.where(np.abs(x - 0.5) < 0.125, 0.3, 1.0)
    raise InvalidParameterError(f"unknown wave speed profile '{profile}'")


def cross_speed_2d(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """c² = 0.3 on the cross 0.4 <= x <= 0.6 or 0.4 <= y <= 0.6, 1 elsewhere"""
    X, Y = np.meshgrid(x, y, indexing="ij")
    inside = ((X >= 0.4) & (X <= 0.6)) | ((Y >= 0.4) & (Y <= 0.6))
    return np.where(inside, 0.3, 1.0)


def _along(ndim: int, axis: int, index) -> tuple:
    return tuple(index if ax == axis else slice(None) for ax in range(ndim))


def flux_laplacian(kappa: np.ndarray, h: float) -> sp.csr_matrix:
    """
    Variable-coefficient Laplacian with face coefficients (κ_i + κ_{i+1})/2.

    Args:
        kappa: Coefficient on the full grid, walls included (shape (n+2,) or (n+2, n+2))
        h: Grid spacing

    Returns:
        Sparse operator on the interior unknowns, row-major flattening, Dirichlet walls
    """
    shape = tuple(s - 2 for s in kappa.shape)
    size = int(np.prod(shape))
    index = np.arange(size).reshape(shape)
    diag = np.zeros(shape)
    rows, cols, vals = [], [], []

    for axis in range(kappa.ndim):
        # interior in every other direction, full length along this one
        k = kappa[tuple(slice(None) if ax == axis else slice(1, -1) for ax in range(kappa.ndim))]
        faces = 0.5 * (k[_along(k.ndim, axis, slice(None, -1))] + k[_along(k.ndim, axis, slice(1, None))])
        left = faces[_along(k.ndim, axis, slice(None, -1))]
        right = faces[_along(k.ndim, axis, slice(1, None))]
        diag -= left + right

        coupling = right[_along(k.ndim, axis, slice(None, -1))].ravel()
        src = index[_along(k.ndim, axis, slice(None, -1))].ravel()
        dst = index[_along(k.ndim, axis, slice(1, None))].ravel()
        rows += [src, dst]
        cols += [dst, src]
        vals += [coupling, coupling]

    rows.append(index.ravel())
    cols.append(index.ravel())
    vals.append(diag.ravel())
    matrix = sp.coo_matrix(
        (np.concatenate(vals) / h**2, (np.concatenate(rows), np.concatenate(cols))), shape=(size, size)
    )
    return matrix.tocsr()


def steps_per_period(period: float, h: float, speed_max: float, cfl: float) -> int:
    """Smallest even step count with Δt <= cfl·h/speed_max"""
    nt = math.ceil(period * speed_max / (cfl * h) - 1e-12)
    return max(2, nt + (nt % 2))


class WaveHoltzProblem(FixedPointProblem):
    """
    WaveHoltz iteration for ∇·(c²∇u) + ω²u = f with homogeneous Dirichlet walls.

    G(u) is the filtered wave solve (2/T)∫₀ᵀ (cos ωt − ¼) w(t) dt, where w
    starts from u at rest and is driven by −cos(ωt)f. The wave equation is
    stepped with second-order leapfrog and the integral uses the trapezoidal rule.
    """

    name: str = "waveholtz"
    dim: Literal[1, 2] = 1
    n_side: int = Field(ge=1)
    omega: float = Field(gt=0)
    cfl: float = Field(gt=0)
    kappa: np.ndarray
    stiffness: sp.csr_matrix
    forcing: np.ndarray
    source_index: int
    dt: float
    nt: int
    is_linear: bool = True

    @property
    def period(self) -> float:
        return 2.0 * np.pi / self.omega

    def leapfrog(self, u: np.ndarray, forcing: np.ndarray | None = None) -> Iterator[tuple[int, float, np.ndarray]]:
        """
        Leapfrog trajectory over one period.

        Yields:
            (k, t_k, w^k) for k = 0..nt; u may hold several columns
        """
        dt, L = self.dt, self.stiffness
        f = 0.0 if forcing is None else (forcing if u.ndim == 1 else forcing[:, None])

        w = np.array(u, dtype=float)
        w_prev = w + 0.5 * dt**2 * (L @ w - f)
        yield 0, 0.0, w
        for k in range(self.nt):
            t = k * dt
            w_next = 2.0 * w - w_prev + dt**2 * (L @ w - np.cos(self.omega * t) * f)
            w_prev, w = w, w_next
            yield k + 1, (k + 1) * dt, w

    def _filter(self, u: np.ndarray, forcing: np.ndarray | None) -> np.ndarray:
        acc = np.zeros_like(u, dtype=float)
        for k, t, w in self.leapfrog(u, forcing):
            weight = 0.5 if k in (0, self.nt) else 1.0
            acc += weight * (np.cos(self.omega * t) - 0.25) * w
        return (2.0 / self.period) * self.dt * acc

    def apply_G(self, x):
        return self._filter(x, self.forcing)

    def apply_linear(self, v: np.ndarray) -> np.ndarray:
        """G(v) − G(0): the filtered wave solve with zero forcing"""
        return self._filter(np.asarray(v, dtype=float), None)

    def discrete_energy(self, w_prev: np.ndarray, w_next: np.ndarray) -> float:
        """‖(w^{k+1} − w^k)/Δt‖² − ⟨w^{k+1}, L w^k⟩, conserved by unforced leapfrog"""
        velocity = (w_next - w_prev) / self.dt
        return float(velocity @ velocity - w_next @ (self.stiffness @ w_prev))

    def reference_solution(self):
        """Dense solve of (I − S)x = G(0) with S the assembled linear part"""
        size = self.n
        S = np.empty((size, size))
        for start in range(0, size, WAVEHOLTZ_REFERENCE_CHUNK):
            stop = min(size, start + WAVEHOLTZ_REFERENCE_CHUNK)
            S[:, start:stop] = self.apply_linear(np.eye(size)[:, start:stop])
        logger.info("Assembled %dx%d WaveHoltz operator", size, size)
        try:
            return sla.solve(np.eye(size) - S, self.apply_G(np.zeros(size)))
        except np.linalg.LinAlgError as exc:
            raise SingularSystemError("WaveHoltz system I - S is singular") from exc


def helmholtz_pilot(stiffness: sp.csr_matrix, omega: float, source_index: int) -> np.ndarray:
    """Sparse direct solve of (L + ω²I)u = e_src"""
    size = stiffness.shape[0]
    unit = np.zeros(size)
    unit[source_index] = 1.0
    operator = (stiffness + omega**2 * sp.identity(size, format="csr")).tocsc()
    u = spla.spsolve(operator, unit)
    if not np.all(np.isfinite(u)):
        raise SingularSystemError(f"Helmholtz operator is singular at omega={omega}")
    return u


def build_waveholtz(
    dim: Literal[1, 2] = 1,
    n: int | None = None,
    omega: float | None = None,
    speed: SpeedProfile = "a",
    cfl: float = WAVEHOLTZ_CFL,
    amplitude: float | None = None,
) -> WaveHoltzProblem:
    """
    Build a 1D or 2D WaveHoltz fixed-point problem.

    Args:
        dim: 1 or 2
        n: Interior points per direction, h = 1/(n+1) (513 in 1D, 65 in 2D by default)
        omega: Angular frequency (25√2 in 1D, 11 in 2D by default)
        speed: 1D wave-speed profile "a", "b" or "c"; 2D always uses the cross
        cfl: Courant number, in (0, 1/√dim]
        amplitude: Target max |u| used to scale the point source

    Returns:
        WaveHoltzProblem
    """
    if dim not in (1, 2):
        raise InvalidDimensionError(f"WaveHoltz supports 1D and 2D, got {dim}")
    n = n or (WAVEHOLTZ_1D_N if dim == 1 else WAVEHOLTZ_2D_N)
    omega = omega or (25.0 * np.sqrt(2.0) if dim == 1 else 11.0)
    amplitude = amplitude or (WAVEHOLTZ_1D_AMPLITUDE if dim == 1 else WAVEHOLTZ_2D_AMPLITUDE)
    if n < 2:
        raise InvalidDimensionError(f"WaveHoltz grid needs n >= 2, got {n}")
    if omega <= 0:
        raise InvalidParameterError(f"omega must be positive, got {omega}")
    if not 0.0 < cfl <= 1.0 / np.sqrt(dim) + 1e-12:
        raise InvalidParameterError(f"cfl={cfl} violates the {dim}D leapfrog limit 1/sqrt({dim})")

    h = 1.0 / (n + 1)
    full = h * np.arange(n + 2)
    if dim == 1:
        kappa = wave_speed_1d(full, speed)
        # gridpoint 128, or the middle of a coarser grid
        source_index = min(127, n // 2)
    else:
        kappa = cross_speed_2d(full, full)
        ix = min(n - 1, max(0, int(round(0.25 / h)) - 1))
        iy = min(n - 1, max(0, int(round(0.75 / h)) - 1))
        source_index = ix * n + iy

    stiffness = flux_laplacian(kappa, h)
    period = 2.0 * np.pi / omega
    nt = steps_per_period(period, h, float(np.sqrt(kappa.max())), cfl)

    pilot = helmholtz_pilot(stiffness, omega, source_index)
    forcing = np.zeros(stiffness.shape[0])
    forcing[source_index] = amplitude / np.max(np.abs(pilot))

    logger.info("Built %dD WaveHoltz problem: n=%d, omega=%.4f, nt=%d", dim, n, omega, nt)
    return WaveHoltzProblem(
        name=f"waveholtz{dim}d",
        dim=dim,
        n=stiffness.shape[0],
        n_side=n,
        h=h,
        omega=omega,
        cfl=cfl,
        kappa=kappa,
        stiffness=stiffness,
        forcing=forcing,
        source_index=source_index,
        dt=period / nt,
        nt=nt,
    )
