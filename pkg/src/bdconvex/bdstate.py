"""Bell-diagonal two-qubit states: representations, conversions, geometry.

A Bell-diagonal (BD) state is a mixture of the four Bell states

    psi_1 = phi+ = (|00> + |11>)/sqrt2      psi_3 = psi+ = (|01> + |10>)/sqrt2
    psi_2 = phi- = (|00> - |11>)/sqrt2      psi_4 = psi- = (|01> - |10>)/sqrt2

with weights ``p = (p1, p2, p3, p4)``.  Equivalently it is
``(I + t1 XX + t2 YY + t3 ZZ) / 4`` with correlation vector ``t``.  Bell
labels are 1-based throughout the public API (``k`` in ``{1, 2, 3, 4}``),
array positions are 0-based.

Matrices use the computational basis ordering |00>, |01>, |10>, |11>.
"""

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from bdconvex import _jacobi
from bdconvex.errors import (
    NegativeProbabilityError,
    NotHermitianError,
    NotNormalizedError,
    OutsideTetrahedronError,
    StateFormatError,
)

NEGATIVE_TOL = 1e-12
NORMALIZATION_TOL = 1e-9
BOUNDARY_BAND = 1e-12
TETRAHEDRON_TOL = 1e-12
HERMITIAN_TOL = 1e-14
PPT_TOL = 1e-10

_SQ2 = np.sqrt(0.5)

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

#: Bell kets as rows, in label order phi+, phi-, psi+, psi-.
BELL_KETS = np.array(
    [
        [_SQ2, 0, 0, _SQ2],
        [_SQ2, 0, 0, -_SQ2],
        [0, _SQ2, _SQ2, 0],
        [0, _SQ2, -_SQ2, 0],
    ],
    dtype=complex,
)
BELL_PROJECTORS = np.einsum("ki,kj->kij", BELL_KETS, BELL_KETS.conj())

#: rows map p -> t
P_TO_T = np.array(
    [
        [1, -1, 1, -1],
        [-1, 1, 1, -1],
        [1, 1, -1, -1],
    ],
    dtype=float,
)

#: sign patterns s with p_k = (1 + s . t) / 4 (positivity, tetrahedron faces)
_POSITIVITY_SIGNS = np.array(
    [[1, -1, 1], [-1, 1, 1], [1, 1, -1], [-1, -1, -1]], dtype=float
)
#: the remaining four patterns: 1 + s . t = 2 - 4 p_k (separability)
_SEPARABILITY_SIGNS = -_POSITIVITY_SIGNS

#: Bell states sit on the tetrahedron vertices.
TETRAHEDRON_VERTICES = {k + 1: tuple(P_TO_T[:, k]) for k in range(4)}

#: Vertices of the separable octahedron, O1+- .. O3+-.
OCTAHEDRON_VERTICES = {
    "O1+": (1.0, 0.0, 0.0),
    "O1-": (-1.0, 0.0, 0.0),
    "O2+": (0.0, 1.0, 0.0),
    "O2-": (0.0, -1.0, 0.0),
    "O3+": (0.0, 0.0, 1.0),
    "O3-": (0.0, 0.0, -1.0),
}


def _frozen(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class BDState:
    """Probability vector over the Bell basis.

    Build instances with :func:`bd_from_probs` or :func:`tvec_to_probs`;
    the constructor itself does not validate.
    """

    p: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "p", _frozen(self.p))

    @property
    def dominant(self) -> int:
        """Bell label of the largest weight (smallest label on ties)."""
        return int(np.argmax(self.p)) + 1

    @property
    def p_max(self) -> float:
        return float(np.max(self.p))

    def permuted(self, perm) -> "BDState":
        """State with weights ``p[perm]``."""
        return BDState(self.p[np.asarray(perm)])

    def __eq__(self, other):
        if not isinstance(other, BDState):
            return NotImplemented
        return bool(np.array_equal(self.p, other.p))

    def __hash__(self):
        return hash(self.p.tobytes())

    def __repr__(self):
        return f"BDState(p={self.p.tolist()})"


@dataclass(frozen=True)
class TVector:
    t1: float
    t2: float
    t3: float

    def as_array(self) -> np.ndarray:
        return np.array([self.t1, self.t2, self.t3], dtype=float)


class Region(enum.Enum):
    SEPARABLE_INTERIOR = "separable_interior"
    SEPARABLE_BOUNDARY = "separable_boundary"
    ENTANGLED = "entangled"


@dataclass(frozen=True)
class RegionClass:
    """Which of the five tetrahedron regions a state lies in.

    ``index`` is the Bell label of the weight above 1/2 for entangled
    states and ``None`` otherwise.
    """

    region: Region
    index: Optional[int] = None

    @property
    def is_entangled(self) -> bool:
        return self.region is Region.ENTANGLED

    @property
    def is_separable(self) -> bool:
        return not self.is_entangled

    def __str__(self):
        if self.is_entangled:
            return f"entangled({self.index})"
        return self.region.value


def bd_from_probs(p) -> BDState:
    """Validate and normalize a Bell-basis probability 4-vector.

    Components in ``[-1e-12, 0)`` are treated as round-off and clamped to
    zero before renormalizing.

    Raises
    ------
    NegativeProbabilityError
        A component is below ``-1e-12``.
    NotNormalizedError
        The components sum to something further than ``1e-9`` from one.
    """
    p = np.asarray(p, dtype=float)
    if p.shape != (4,):
        raise StateFormatError(f"expected 4 probabilities, got shape {p.shape}")
    if not np.all(np.isfinite(p)):
        raise StateFormatError("probabilities must be finite")
    if np.any(p < -NEGATIVE_TOL):
        raise NegativeProbabilityError(f"negative probability in {p.tolist()}")
    p = np.where(p < 0.0, 0.0, p)
    total = math.fsum(p)
    if abs(total - 1.0) > NORMALIZATION_TOL:
        raise NotNormalizedError(f"probabilities sum to {total!r}, not 1")
    return BDState(p / total)


def probs_to_tvec(s: BDState) -> TVector:
    t = P_TO_T @ s.p
    return TVector(float(t[0]), float(t[1]), float(t[2]))


def tvec_to_probs(t) -> BDState:
    """Inverse of :func:`probs_to_tvec`.

    Each weight is a positivity face ``1 + s.t`` divided by four.

    Raises
    ------
    OutsideTetrahedronError
        Some positivity face is violated by more than ``1e-12``.
    """
    if isinstance(t, TVector):
        t = t.as_array()
    t = np.asarray(t, dtype=float)
    if t.shape != (3,):
        raise StateFormatError(f"expected 3 correlation coefficients, got shape {t.shape}")
    if not np.all(np.isfinite(t)):
        raise StateFormatError("correlation coefficients must be finite")
    faces = 1.0 + _POSITIVITY_SIGNS @ t
    if np.any(faces < -TETRAHEDRON_TOL):
        raise OutsideTetrahedronError(f"t = {t.tolist()} lies outside the tetrahedron")
    p = np.clip(faces / 4.0, 0.0, None)
    return BDState(p / p.sum())


def density_matrix(s: BDState) -> np.ndarray:
    """4x4 density matrix from the Pauli expansion."""
    t = P_TO_T @ s.p
    rho = np.kron(PAULI_I, PAULI_I)
    for ti, sigma in zip(t, (PAULI_X, PAULI_Y, PAULI_Z)):
        rho = rho + ti * np.kron(sigma, sigma)
    return rho / 4.0


def density_matrix_from_projectors(s: BDState) -> np.ndarray:
    """Same matrix as :func:`density_matrix`, summed over Bell projectors."""
    return np.einsum("k,kij->ij", s.p.astype(complex), BELL_PROJECTORS)


def bell_diagonal(m) -> np.ndarray:
    """Diagonal of ``m`` in the Bell basis (real part)."""
    m = np.asarray(m)
    return np.real(np.einsum("ki,...ij,kj->...k", BELL_KETS.conj(), m, BELL_KETS))


def check_density_matrix(m) -> np.ndarray:
    """Return ``m`` as a complex 4x4 array after checking it is a state.

    Raises ``NotHermitianError`` for asymmetric input and
    ``InvalidStateError`` subclasses for a bad trace or negative spectrum.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (4, 4):
        raise StateFormatError(f"expected a 4x4 matrix, got shape {m.shape}")
    if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
        raise NotHermitianError("matrix is not Hermitian")
    tr = np.trace(m).real
    if abs(tr - 1.0) > 1e-12:
        raise NotNormalizedError(f"trace is {tr!r}, not 1")
    if _jacobi.eigvalsh(m)[0] < -1e-12:
        raise NegativeProbabilityError("matrix has a negative eigenvalue")
    return m


def classify(s: BDState) -> RegionClass:
    """Locate a state among the octahedron interior, its boundary, and the
    four entangled corners."""
    k = int(np.argmax(s.p))
    pk = s.p[k]
    if pk > 0.5 + BOUNDARY_BAND:
        return RegionClass(Region.ENTANGLED, k + 1)
    if pk >= 0.5 - BOUNDARY_BAND:
        return RegionClass(Region.SEPARABLE_BOUNDARY)
    return RegionClass(Region.SEPARABLE_INTERIOR)


def is_separable(s: BDState) -> bool:
    return classify(s).is_separable


def concurrence(s: BDState) -> float:
    return max(0.0, 2.0 * s.p_max - 1.0)


def partial_transpose(m) -> np.ndarray:
    """Transpose over the second qubit; accepts stacks ``(..., 4, 4)``."""
    m = np.asarray(m)
    shape = m.shape
    r = m.reshape(shape[:-2] + (2, 2, 2, 2))
    return np.swapaxes(r, -1, -3).reshape(shape)


def ppt_min_eigenvalue(m):
    """Smallest eigenvalue of the partial transpose of ``m``.

    ``m`` may be a single 4x4 matrix (returns a float) or a stack of them
    (returns an array). For a BD state this is ``1/2 - max p``, so it is
    non-negative exactly on the separable octahedron.
    """
    m = np.asarray(m)
    if m.shape[-2:] != (4, 4):
        raise StateFormatError(f"expected 4x4 matrices, got shape {m.shape}")
    asym = np.max(np.abs(m - np.conj(np.swapaxes(m, -1, -2))))
    if asym > HERMITIAN_TOL:
        raise NotHermitianError(f"matrix is not Hermitian (deviation {asym:.3g})")
    w = _jacobi.eigvalsh(partial_transpose(m))[..., 0]
    return float(w) if w.ndim == 0 else w


# -- separability predicates --------------------------------------------
# Three descriptions of the octahedron; they must agree on every state.

def separable_by_weights(p) -> np.ndarray:
    return np.all(np.asarray(p) <= 0.5 + BOUNDARY_BAND, axis=-1)


def separable_by_inequalities(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    signs = np.concatenate([_POSITIVITY_SIGNS, _SEPARABILITY_SIGNS])
    return np.all(1.0 + t @ signs.T >= -BOUNDARY_BAND, axis=-1)


def separable_by_l1(t) -> np.ndarray:
    return np.sum(np.abs(np.asarray(t)), axis=-1) <= 1.0 + BOUNDARY_BAND


def state_from_json(doc) -> BDState:
    """Parse ``{"p": [p1..p4]}`` or ``{"t": [t1, t2, t3]}``.

    Structural problems raise ``StateFormatError``; well-formed documents
    describing an impossible state raise an ``InvalidStateError``.
    """
    if not isinstance(doc, dict):
        raise StateFormatError("state document must be a JSON object")
    keys = set(doc) & {"p", "t"}
    if len(keys) != 1 or len(doc) != 1:
        raise StateFormatError('state document needs exactly one of "p" or "t"')
    key = keys.pop()
    values = doc[key]
    arity = 4 if key == "p" else 3
    if (
        not isinstance(values, list)
        or len(values) != arity
        or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in values)
    ):
        raise StateFormatError(f'"{key}" must be a list of {arity} numbers')
    if key == "p":
        return bd_from_probs(values)
    return tvec_to_probs(values)


def state_to_json(s: BDState) -> dict:
    return {"p": s.p.tolist()}
