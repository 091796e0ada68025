"""Grid pseudospectra and circular inclusion regions."""
from __future__ import annotations

from dataclasses import dataclass
import csv

import numpy as np

from . import linalg_core as lc
from .bounds import DEFAULT_C, BoundFunction, departure_budget
from .errors import DegenerateRegion

OUTSIDE, INSIDE, INDETERMINATE = 0, 1, 2


def smallest_singular_values(A, zs, chunk=4096):
    """``s_min(zI - A)`` for every ``z`` in ``zs`` (any shape)."""
    arr = lc.as_array(A, square=True)
    n = arr.shape[0]
    flat = np.asarray(zs, dtype=np.complex128).ravel()
    out = np.empty(flat.size)
    eye = np.eye(n)
    for start in range(0, flat.size, chunk):
        z = flat[start:start + chunk]
        shifted = z[:, None, None] * eye - arr
        out[start:start + chunk] = np.linalg.svd(shifted, compute_uv=False)[:, -1]
    return out.reshape(np.shape(zs))


@dataclass(frozen=True)
class PseudoGrid:
    """``s_min(zI - A)`` on a rectangular grid with an epsilon membership mask.

    ``member`` is 1 where ``s_min < epsilon``, 0 where not, and 2 where the
    comparison is within rounding of the boundary.
    """
    re: np.ndarray
    im: np.ndarray
    smin: np.ndarray
    epsilon: float
    member: np.ndarray

    @property
    def points(self):
        return self.re[None, :] + 1j * self.im[:, None]

    @property
    def mask(self):
        return self.member == INSIDE

    @property
    def spacing(self):
        dx = self.re[1] - self.re[0]
        dy = self.im[1] - self.im[0]
        return float(np.hypot(dx, dy))

    def with_epsilon(self, epsilon, boundary_tol):
        return PseudoGrid(self.re, self.im, self.smin, float(epsilon),
                          classify(self.smin, epsilon, boundary_tol))

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            wr.writerow(["re", "im", "s_min", "member"])
            z = self.points
            for i in range(z.shape[0]):
                for j in range(z.shape[1]):
                    wr.writerow([repr(float(z[i, j].real)), repr(float(z[i, j].imag)),
                                 repr(float(self.smin[i, j])), int(self.member[i, j])])


def classify(smin, epsilon, boundary_tol):
    member = np.where(smin < epsilon, INSIDE, OUTSIDE).astype(np.int8)
    member[np.abs(smin - epsilon) < boundary_tol] = INDETERMINATE
    return member


def pseudospectrum_grid(A, region, resolution, epsilon):
    """Evaluate the epsilon-pseudospectrum on a grid.

    ``region`` is ``(re_min, re_max, im_min, im_max)``; ``resolution`` is the
    point count per axis (int or ``(n_re, n_im)``).
    """
    arr = lc.as_array(A, square=True)
    re0, re1, im0, im1 = (float(x) for x in region)
    if not (re1 > re0 and im1 > im0):
        raise DegenerateRegion(f"empty region {region}")
    nx, ny = (resolution, resolution) if np.isscalar(resolution) else resolution
    if nx < 2 or ny < 2:
        raise DegenerateRegion("resolution must be >= 2 per axis")
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    re = np.linspace(re0, re1, int(nx))
    im = np.linspace(im0, im1, int(ny))
    z = re[None, :] + 1j * im[:, None]
    smin = smallest_singular_values(arr, z)
    tol = 1e-12 * (1.0 + lc.operator_norm(arr))
    return PseudoGrid(re, im, smin, float(epsilon), classify(smin, epsilon, tol))


@dataclass(frozen=True)
class InclusionDisks:
    """Disks about the eigenvalues: radius ``inner`` is inside, ``outer`` encloses."""
    centers: np.ndarray
    inner_radius: float
    outer_radius: float
    nu: float
    normal: bool

    def _dist(self, z):
        return lc.distance_to_set(z, self.centers)

    def in_inner(self, z):
        return self._dist(z) < self.inner_radius

    def in_outer(self, z):
        return self._dist(z) < self.outer_radius

    def to_dict(self):
        return {
            "centers": [[float(c.real), float(c.imag)] for c in self.centers],
            "inner_radius": self.inner_radius,
            "outer_radius": self.outer_radius,
            "nu": self.nu,
            "normal": self.normal,
        }


def inclusion_disks(A, w, epsilon, dostanic_C=DEFAULT_C, budget=None, bf=None,
                    ordering=lc.SEARCH):
    arr = lc.as_array(A, square=True)
    if not epsilon > 0:
        raise ValueError("epsilon must be positive")
    if budget is None:
        budget = departure_budget(arr, w, ordering=ordering)
    if bf is None:
        bf = BoundFunction.for_weight(w, dostanic_C)
    sigma = lc.eigenvalues(arr)
    if budget.normal:
        outer, nu = float(epsilon), 0.0
    else:
        nu = budget.nu_upper
        outer = bf.scaled_H(nu, epsilon)
    return InclusionDisks(sigma, float(epsilon), float(outer), nu, bool(budget.normal))
