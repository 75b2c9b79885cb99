"""
Qubit measurements built from weighted rank-1 projectors, and the
two-qubit shared states they act on.
"""
import math
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt
from django.db import models

from core.exceptions import InvalidPovmError

ANGLE_TOL = 1e-12
COMPLETENESS_TOL = 1e-10
TWO_PI = 2 * math.pi


class Hemisphere(models.TextChoices):
    """Half of the Bloch sphere by azimuth: east is [0, pi), west is [pi, 2 pi)."""
    EAST = 'east', 'Eastern (0 <= phi < pi)'
    WEST = 'west', 'Western (pi <= phi < 2 pi)'


@dataclass(frozen=True)
class ProjectorAngles:
    """Angles of the pure state cos(theta)|0> + e^{i phi} sin(theta)|1>."""
    theta: float
    phi: float

    def __post_init__(self) -> None:
        if not -ANGLE_TOL <= self.theta <= math.pi / 2 + ANGLE_TOL:
            raise InvalidPovmError(f'theta={self.theta} outside [0, pi/2]')
        if not 0.0 <= self.phi < TWO_PI:
            raise InvalidPovmError(f'phi={self.phi} outside [0, 2 pi)')

    @classmethod
    def normalized(cls, theta: float, phi: float) -> 'ProjectorAngles':
        """Clip theta into range and wrap phi into [0, 2 pi)."""
        wrapped = math.fmod(phi, TWO_PI)
        if wrapped < 0:
            wrapped += TWO_PI
        if wrapped >= TWO_PI:
            wrapped = 0.0
        return cls(min(max(theta, 0.0), math.pi / 2), wrapped)

    @property
    def is_polar(self) -> bool:
        """At the poles the azimuth carries no information."""
        return abs(math.sin(2 * self.theta)) < ANGLE_TOL

    def complement(self) -> 'ProjectorAngles':
        """The orthogonal pure state."""
        return ProjectorAngles.normalized(math.pi / 2 - self.theta, self.phi + math.pi)

    def matrix(self) -> npt.NDArray[np.complex128]:
        c, s = math.cos(self.theta), math.sin(self.theta)
        off = s * c * np.exp(1j * self.phi)
        return np.array([[c * c, np.conj(off)], [off, s * s]], dtype=np.complex128)


@dataclass(frozen=True)
class PovmElement:
    gamma: float
    angles: ProjectorAngles

    def __post_init__(self) -> None:
        if not self.gamma >= 0:
            raise InvalidPovmError(f'POVM weight {self.gamma} is negative')

    def matrix(self) -> npt.NDArray[np.complex128]:
        return self.gamma * self.angles.matrix()


@dataclass(frozen=True)
class Povm:
    """Weighted rank-1 projectors that sum to the 2x2 identity."""
    elements: tuple[PovmElement, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, 'elements', tuple(self.elements))
        if not self.elements:
            raise InvalidPovmError('A POVM needs at least one element')
        total = sum(element.matrix() for element in self.elements)
        deviation = float(np.max(np.abs(total - np.eye(2))))
        if deviation > COMPLETENESS_TOL:
            raise InvalidPovmError(f'POVM elements miss the identity by {deviation:.3g}')

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, index: int) -> PovmElement:
        return self.elements[index]


@dataclass(frozen=True)
class SharedState:
    """alpha|00> + beta|11> with strictly positive Schmidt coefficients."""
    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (self.alpha > 0 and self.beta > 0):
            raise InvalidPovmError('Schmidt coefficients must be strictly positive')
        if abs(self.alpha**2 + self.beta**2 - 1.0) > 1e-12:
            raise InvalidPovmError('Schmidt coefficients must satisfy alpha^2 + beta^2 = 1')

    @classmethod
    def maximally_entangled(cls) -> 'SharedState':
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))

    def vector(self) -> npt.NDArray[np.complex128]:
        return np.array([self.alpha, 0.0, 0.0, self.beta], dtype=np.complex128)
