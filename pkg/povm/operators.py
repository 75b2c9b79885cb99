"""
Projectors, Bloch vectors and bipartite outcome probabilities.
"""
import math
from collections.abc import Sequence

import numpy as np
import numpy.typing as npt

from core.exceptions import InvalidPovmError
from core.rng import SeedLike, make_rng

from .models import COMPLETENESS_TOL, Povm, PovmElement, ProjectorAngles, SharedState

# Eigenvalues below this are dropped by the rank-1 refinement.
EIGEN_TOL = 1e-12


def projector(angles: ProjectorAngles) -> npt.NDArray[np.complex128]:
    return angles.matrix()


def bloch_vector(angles: ProjectorAngles) -> npt.NDArray[np.float64]:
    s2 = math.sin(2 * angles.theta)
    return np.array([s2 * math.cos(angles.phi), s2 * math.sin(angles.phi), math.cos(2 * angles.theta)])


def outcome_probability(state: SharedState, e1: PovmElement, e2: PovmElement) -> float:
    """
    Probability of outcomes (e1, e2) on alpha|00> + beta|11>:

        gamma1 * gamma2 * (a^2 + b^2 + 2abc),
        a = alpha cos(theta1) cos(theta2), b = beta sin(theta1) sin(theta2),
        c = cos(phi1 + phi2).
    """
    t1, t2 = e1.angles, e2.angles
    a = state.alpha * math.cos(t1.theta) * math.cos(t2.theta)
    b = state.beta * math.sin(t1.theta) * math.sin(t2.theta)
    c = math.cos(t1.phi + t2.phi)
    return e1.gamma * e2.gamma * (a * a + b * b + 2 * a * b * c)


def outcome_probability_matrix(state: SharedState, e1: PovmElement, e2: PovmElement) -> float:
    """<psi| (gamma1 P1) x (gamma2 P2) |psi> evaluated directly."""
    psi = state.vector()
    return float(np.real(np.conj(psi) @ np.kron(e1.matrix(), e2.matrix()) @ psi))


def outcome_table(state: SharedState, povm_1: Povm, povm_2: Povm) -> npt.NDArray[np.float64]:
    return np.array([[outcome_probability(state, e1, e2) for e2 in povm_2] for e1 in povm_1])


def angles_of(vector: npt.ArrayLike) -> ProjectorAngles:
    """Angles of the ray through a non-zero vector in C^2 (global phase dropped)."""
    v = np.asarray(vector, dtype=np.complex128)
    r0, r1 = abs(v[0]), abs(v[1])
    theta = math.atan2(r1, r0)
    if r0 < EIGEN_TOL or r1 < EIGEN_TOL:
        return ProjectorAngles.normalized(theta, 0.0)
    return ProjectorAngles.normalized(theta, float(np.angle(v[1]) - np.angle(v[0])))


def refine_povm(operators: Sequence[npt.ArrayLike]) -> Povm:
    """Split positive operators summing to the identity into weighted rank-1 projectors."""
    matrices = [np.asarray(op, dtype=np.complex128) for op in operators]
    if not matrices or any(m.shape != (2, 2) for m in matrices):
        raise InvalidPovmError('POVM operators must be 2x2 matrices')
    if np.max(np.abs(sum(matrices) - np.eye(2))) > COMPLETENESS_TOL:
        raise InvalidPovmError('POVM operators do not sum to the identity')

    elements = []
    for m in matrices:
        if np.max(np.abs(m - m.conj().T)) > COMPLETENESS_TOL:
            raise InvalidPovmError('POVM operator is not Hermitian')
        values, vectors = np.linalg.eigh(m)
        if values[0] < -COMPLETENESS_TOL:
            raise InvalidPovmError(f'POVM operator has negative eigenvalue {values[0]:.3g}')
        for value, vector in zip(values, vectors.T):
            if value > EIGEN_TOL:
                elements.append(PovmElement(float(value), angles_of(vector)))
    return Povm(tuple(elements))


def measurement_povm(theta: float, phi: float) -> Povm:
    """Two-outcome projective measurement onto (theta, phi) and its orthogonal complement."""
    first = ProjectorAngles.normalized(theta, phi)
    return Povm((PovmElement(1.0, first), PovmElement(1.0, first.complement())))


def tsirelson_povms() -> tuple[dict[int, Povm], dict[int, Povm], SharedState]:
    """
    Measurements on (|00> + |11>)/sqrt(2) whose statistics win the CHSH
    game with probability cos^2(pi/8) on every question pair.
    """
    alice = {0: measurement_povm(0.0, 0.0), 1: measurement_povm(math.pi / 4, 0.0)}
    bob = {0: measurement_povm(math.pi / 8, 0.0), 1: measurement_povm(math.pi / 8, math.pi)}
    return alice, bob, SharedState.maximally_entangled()


def random_povm(rng: SeedLike = None, n: int = 4) -> Povm:
    """
    Random rank-1 POVM with `n` elements: random vectors v_k are mapped
    through S^(-1/2), S = sum v_k v_k^dagger, so the projectors sum to I.
    """
    if n < 2:
        raise InvalidPovmError('A random POVM needs at least two elements')
    generator = make_rng(rng)
    vectors = generator.standard_normal((n, 2)) + 1j * generator.standard_normal((n, 2))
    frame = vectors.T @ vectors.conj()
    values, basis = np.linalg.eigh(frame)
    inverse_sqrt = basis @ np.diag(values ** -0.5) @ basis.conj().T
    tight = vectors @ inverse_sqrt.T

    elements = []
    for w in tight:
        weight = float(np.vdot(w, w).real)
        elements.append(PovmElement(weight, angles_of(w)))
    return Povm(tuple(elements))


def random_state(rng: SeedLike = None) -> SharedState:
    generator = make_rng(rng)
    t = generator.uniform(1e-6, math.pi / 2 - 1e-6)
    return SharedState(math.cos(t), math.sin(t))
