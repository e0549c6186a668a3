"""Cone-localized plane extension: convex geometry, a finite local Fermi
field, and the tensor combination with the circle field.

A generalized cone is a convex support polygon together with a covering
interval of asymptotic directions of opening below pi; its projection to the
plane is the Minkowski sum of the polygon with the closed ray cone spanned
by the two boundary directions.  Disjointness of two such regions is an
exact convex feasibility question, decided by linear programming, and
cross-checked by a certifying point-sampling oracle.

Test functions on the plane enter only through their Gram matrix and their
support polygons, so the Fermi factor is represented exactly on a small
fermionic Fock space whose ladder operators reproduce the Gram-modified
anticommutation relations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
from scipy.optimize import linprog

from .covering import CoveringInterval, CoveringPoint, projections_disjoint
from .errors import DegenerateGeometry, UnknownTransformedFunction
from .fock import phase_from_elements


def direction_vector(mu: float) -> np.ndarray:
    """Unit direction n_mu = R(-mu) (0, 1) = (sin mu, cos mu)."""
    return np.array([np.sin(mu), np.cos(mu)])


def rotation_matrix(omega: float) -> np.ndarray:
    c, s = np.cos(omega), np.sin(omega)
    return np.array([[c, -s], [s, c]])


def _validate_polygon(polygon: np.ndarray) -> np.ndarray:
    poly = np.asarray(polygon, dtype=float)
    if poly.ndim != 2 or poly.shape[1] != 2 or poly.shape[0] == 0:
        raise DegenerateGeometry("support polygon must be a nonempty list of plane points")
    if not np.all(np.isfinite(poly)):
        raise DegenerateGeometry("support polygon has non-finite vertices")
    return poly


@dataclass(frozen=True)
class GeneralizedCone:
    polygon: np.ndarray
    directions: CoveringInterval

    def __post_init__(self):
        object.__setattr__(self, "polygon", _validate_polygon(self.polygon))
        if self.directions.half_width >= np.pi / 2:
            raise DegenerateGeometry("direction interval must have opening below pi")

    def boundary_rays(self) -> tuple[np.ndarray, np.ndarray]:
        return (
            direction_vector(self.directions.lower),
            direction_vector(self.directions.upper),
        )


def _intersection_lp(
    poly1: np.ndarray, rays1: tuple[np.ndarray, ...], poly2: np.ndarray, rays2: tuple[np.ndarray, ...]
) -> bool:
    """Feasibility of conv(poly1) + cone(rays1) meeting conv(poly2) + cone(rays2)."""
    n1, n2 = poly1.shape[0], poly2.shape[0]
    r1, r2 = len(rays1), len(rays2)
    n_var = n1 + r1 + n2 + r2
    a_eq = np.zeros((4, n_var))
    b_eq = np.array([0.0, 0.0, 1.0, 1.0])
    a_eq[0, :n1] = poly1[:, 0]
    a_eq[1, :n1] = poly1[:, 1]
    for k, d in enumerate(rays1):
        a_eq[0, n1 + k] = d[0]
        a_eq[1, n1 + k] = d[1]
    off = n1 + r1
    a_eq[0, off : off + n2] = -poly2[:, 0]
    a_eq[1, off : off + n2] = -poly2[:, 1]
    for k, d in enumerate(rays2):
        a_eq[0, off + n2 + k] = -d[0]
        a_eq[1, off + n2 + k] = -d[1]
    a_eq[2, :n1] = 1.0
    a_eq[3, off : off + n2] = 1.0
    res = linprog(np.zeros(n_var), A_eq=a_eq, b_eq=b_eq, bounds=(0, None), method="highs")
    if res.status == 0:
        return True
    if res.status == 2:
        return False
    raise DegenerateGeometry(f"intersection feasibility solver returned status {res.status}")


def cones_disjoint(cone1: GeneralizedCone, cone2: GeneralizedCone) -> bool:
    """Exact disjointness of the two projected cone regions."""
    return not _intersection_lp(
        cone1.polygon, cone1.boundary_rays(), cone2.polygon, cone2.boundary_rays()
    )


def polygons_disjoint(poly1: np.ndarray, poly2: np.ndarray) -> bool:
    return not _intersection_lp(_validate_polygon(poly1), (), _validate_polygon(poly2), ())


def _in_ray_cone(v: np.ndarray, d1: np.ndarray, d2: np.ndarray) -> bool:
    # opening below pi: v = a d1 + b d2 with a = -c2/cross12, b = c1/cross12,
    # so membership is the two product sign tests below
    cross12 = d1[0] * d2[1] - d1[1] * d2[0]
    c1 = d1[0] * v[1] - d1[1] * v[0]
    c2 = d2[0] * v[1] - d2[1] * v[0]
    return bool(c1 * cross12 >= -1e-12 and c2 * cross12 <= 1e-12)


def point_in_cone_sampled(point: np.ndarray, cone: GeneralizedCone, base_samples: int = 6) -> bool:
    """Certified membership against sampled base points of the support hull.

    True means the point provably lies in the cone (an explicit base point
    witnesses it); False only means no witness at this sampling density.
    """
    d1, d2 = cone.boundary_rays()
    poly = cone.polygon
    n = poly.shape[0]
    weight_grid = np.linspace(0.0, 1.0, base_samples)
    if n == 1:
        bases = poly
    else:
        combos = []
        for idx in itertools.combinations(range(n), min(n, 3)):
            for w in itertools.product(weight_grid, repeat=len(idx) - 1):
                if sum(w) <= 1.0 + 1e-12:
                    weights = np.array(list(w) + [1.0 - sum(w)])
                    combos.append(weights @ poly[list(idx)])
        bases = np.array(combos)
    for p in bases:
        if _in_ray_cone(point - p, d1, d2):
            return True
    return False


def cones_overlap_sampled(
    cone1: GeneralizedCone,
    cone2: GeneralizedCone,
    ray_extent: float = 40.0,
    ray_samples: int = 25,
    base_samples: int = 5,
) -> bool:
    """Point-sampling overlap certificate, independent of the LP route.

    Samples points of each cone explicitly (hull combinations plus ray
    grid) and tests membership in the other; True is a certified overlap.
    """
    t_grid = np.concatenate(([0.0], np.geomspace(1e-3, ray_extent, ray_samples)))
    for a, b in ((cone1, cone2), (cone2, cone1)):
        d1, d2 = a.boundary_rays()
        poly = a.polygon
        n = poly.shape[0]
        weights = np.linspace(0.0, 1.0, base_samples)
        base_points = [poly.mean(axis=0)]
        base_points.extend(poly)
        for i in range(n):
            for w in weights:
                base_points.append(w * poly[i] + (1 - w) * poly[(i + 1) % n])
        for p in base_points:
            for t1 in t_grid:
                for t2 in t_grid:
                    x = p + t1 * d1 + t2 * d2
                    if point_in_cone_sampled(x, b, base_samples):
                        return True
    return False


@dataclass
class TestFunctionSpace:
    """Abstract plane test functions: labels, Gram matrix, supports.

    The conjugation map gives the coefficients of conj(f_i) in the span;
    the default identity covers real test functions.
    """

    labels: list[str]
    gram: np.ndarray
    polygons: list[np.ndarray]
    conj_map: np.ndarray | None = None
    _mode_vectors: np.ndarray = field(init=False, repr=False)
    _ladders: dict | None = field(default=None, init=False, repr=False)

    def __post_init__(self):
        k = len(self.labels)
        self.gram = np.asarray(self.gram, dtype=complex)
        if self.gram.shape != (k, k):
            raise ValueError("Gram matrix shape does not match the label count")
        if np.max(np.abs(self.gram - self.gram.conj().T)) > 1e-12:
            raise ValueError("Gram matrix must be Hermitian")
        eigvals, eigvecs = np.linalg.eigh(self.gram)
        if eigvals[0] < -1e-10 * max(1.0, eigvals[-1]):
            raise ValueError("Gram matrix must be positive semidefinite")
        self.polygons = [_validate_polygon(p) for p in self.polygons]
        if len(self.polygons) != k:
            raise ValueError("one support polygon per test function required")
        for i in range(k):
            for j in range(i + 1, k):
                if polygons_disjoint(self.polygons[i], self.polygons[j]):
                    if abs(self.gram[i, j]) > 1e-12:
                        raise ValueError(
                            f"disjoint supports {self.labels[i]}, {self.labels[j]} "
                            "require a vanishing Gram entry"
                        )
        if self.conj_map is None:
            self.conj_map = np.eye(k, dtype=complex)
        self.conj_map = np.asarray(self.conj_map, dtype=complex)
        clipped = np.clip(eigvals, 0.0, None)
        self._mode_vectors = np.sqrt(clipped)[:, None] * eigvecs.conj().T

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def fock_dim(self) -> int:
        return 1 << self.size

    def index_of(self, label: str) -> int:
        return self.labels.index(label)

    def _ladder(self, k: int) -> sp.csr_matrix:
        if self._ladders is None:
            self._ladders = {}
        if k not in self._ladders:
            dim = self.fock_dim
            masks = np.arange(dim, dtype=np.int64)
            bit = np.int64(1) << k
            occupied = (masks & bit) != 0
            src = masks[occupied]
            dst = src ^ bit
            signs = 1.0 - 2.0 * (np.bitwise_count(src & (bit - 1)).astype(np.int64) & 1)
            self._ladders[k] = sp.csr_matrix(
                (signs.astype(complex), (dst, src)), shape=(dim, dim)
            )
        return self._ladders[k]

    def creator(self, i: int) -> sp.csr_matrix:
        """c*(f_i) as a sum of orthonormal-mode creators."""
        total = sp.csr_matrix((self.fock_dim, self.fock_dim), dtype=complex)
        for k in range(self.size):
            coeff = self._mode_vectors[k, i]
            if coeff != 0:
                total = total + coeff * self._ladder(k).conj().T
        return total.tocsr()

    def annihilator(self, i: int) -> sp.csr_matrix:
        return self.creator(i).conj().T.tocsr()

    def conjugate_vector(self, i: int) -> np.ndarray:
        return self.conj_map[:, i]


def fermi_field(i: int, space: TestFunctionSpace) -> sp.csr_matrix:
    """Psi(f_i) = c*(f_i) + c(conj f_i); self-adjoint for real test functions."""
    conj_coeffs = space.conjugate_vector(i)
    annihilate = sp.csr_matrix((space.fock_dim, space.fock_dim), dtype=complex)
    for j, coeff in enumerate(conj_coeffs):
        if coeff != 0:
            annihilate = annihilate + np.conj(coeff) * space.annihilator(j)
    return (space.creator(i) + annihilate).tocsr()


def fermi_exchange_elements(
    space: TestFunctionSpace, i: int, j: int, adjoint: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """Dense element tables of Psi_i Psi_j against Psi_j Psi_i.

    With adjoint=True the second ordering pairs the adjoint of field i:
    Psi_i* Psi_j against Psi_j Psi_i*.
    """
    psi_i = fermi_field(i, space)
    psi_j = fermi_field(j, space)
    first = psi_i.conj().T.tocsr() if adjoint else psi_i
    forward = (first @ psi_j).toarray()
    reversed_ = (psi_j @ first).toarray()
    return forward, reversed_


@dataclass
class TensorField:
    """F = Psi(f) tensor Phi, localized in a generalized cone."""

    matrix: sp.spmatrix
    localization: GeneralizedCone
    label: str


def tensor_field(i: int, space: TestFunctionSpace, circle_matrix, interval: CoveringInterval) -> TensorField:
    mat = sp.kron(fermi_field(i, space), circle_matrix, format="csr")
    return TensorField(mat, GeneralizedCone(space.polygons[i], interval), space.labels[i])


def tensor_exchange_from_parts(
    fermi_forward: np.ndarray,
    fermi_reversed: np.ndarray,
    circle_forward: np.ndarray,
    circle_reversed: np.ndarray,
    floor: float = 1e-10,
) -> tuple[complex, float]:
    """Exchange phase of the tensor fields from factor element tables.

    Matrix elements of a Kronecker product factorize exactly, so the tensor
    tables are the outer products of the factor tables.
    """
    fw = np.kron(fermi_forward.ravel(), circle_forward.ravel())
    rv = np.kron(fermi_reversed.ravel(), circle_reversed.ravel())
    return phase_from_elements(fw, rv, floor=floor)


@dataclass(frozen=True)
class EuclideanMotion:
    """Plane motion x -> R(-omega) x + a, acting on cones and test labels.

    Direction labels are clockwise from north (n_mu = R(-mu) e_y), so the
    point action R(-omega) shifts every direction label by +omega; the
    asymptotic interval of a cone then transforms the same way as the
    circle localization interval it doubles as.
    """

    translation: np.ndarray
    rotation: float

    def __post_init__(self):
        object.__setattr__(self, "translation", np.asarray(self.translation, dtype=float))

    def apply_point(self, x: np.ndarray) -> np.ndarray:
        return rotation_matrix(-self.rotation) @ np.asarray(x, dtype=float) + self.translation

    def apply_polygon(self, polygon: np.ndarray) -> np.ndarray:
        poly = _validate_polygon(polygon)
        return poly @ rotation_matrix(-self.rotation).T + self.translation

    def apply_interval(self, interval: CoveringInterval) -> CoveringInterval:
        return CoveringInterval(
            CoveringPoint(interval.center.omega + self.rotation), interval.half_width
        )

    def apply_cone(self, cone: GeneralizedCone) -> GeneralizedCone:
        return GeneralizedCone(self.apply_polygon(cone.polygon), self.apply_interval(cone.directions))

    def compose(self, inner: "EuclideanMotion") -> "EuclideanMotion":
        """Motion equal to applying inner first, then this one."""
        return EuclideanMotion(
            rotation_matrix(-self.rotation) @ inner.translation + self.translation,
            self.rotation + inner.rotation,
        )


def rep_e2(translation, rotation: float) -> EuclideanMotion:
    return EuclideanMotion(np.asarray(translation, dtype=float), float(rotation))


def transformed_label(space: TestFunctionSpace, i: int, motion: EuclideanMotion, tol: float = 1e-9) -> int:
    """Index of the test function whose support is the transformed polygon.

    The pullback representation moves supports by the Euclidean motion; the
    moved function must already be a member of the space.
    """
    target = motion.apply_polygon(space.polygons[i])
    for j, poly in enumerate(space.polygons):
        if poly.shape == target.shape and np.max(np.abs(poly - target)) < tol:
            return j
    raise UnknownTransformedFunction(
        f"no test function with the transformed support of {space.labels[i]}"
    )
