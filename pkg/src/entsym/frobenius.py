"""Frobenius algebras on based Hilbert spaces as concrete tensors.

A finite-dimensional C*-algebra with a faithful positive functional is the
same thing as a Frobenius algebra in the category of Hilbert spaces.  Here an
algebra is a pair of arrays: a multiplication ``mult`` of shape ``(n, n*n)``
and a unit column ``unit`` of shape ``(n, 1)``.  The counit is ``unit``
daggered and the comultiplication is ``mult`` daggered; the canonical
normalisation used throughout makes every constructor special
(``mult @ mult^ = id``) with ``counit(unit) = dim``, i.e. the functional is
the special trace ``sum_i n_i Tr_i`` of the underlying multimatrix algebra.

Axiom checking is residual-based: every check reports the max-abs-entry norm
of LHS - RHS of the defining equation, so callers choose their own cutoff.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .tensors import DEFAULT_TOL, Tolerance, as_matrix, cap, cup, dagger, residual, tensor

__all__ = [
    "FrobeniusAlgebra",
    "AlgebraElement",
    "AlgebraReport",
    "HomReport",
    "check_algebra",
    "involution",
    "multiply",
    "counit_value",
    "left_mult_operator",
    "is_positive_element",
    "matrix_algebra",
    "multimatrix_algebra",
    "commutative_algebra",
    "tensor_product",
    "BhIso",
    "bh_iso",
    "check_star_homomorphism",
    "check_star_cohomomorphism",
    "max_entangled_element",
    "center_dimension",
]


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra:
    """An algebra ``(carrier, mult, unit)`` with its adjoint coalgebra.

    ``blocks`` records a multimatrix presentation ``(n_1, ..., n_k)`` when the
    algebra was built as a direct sum of matrix algebras; it licenses the Choi
    oracle in :mod:`entsym.channels`.
    """

    dim: int
    mult: np.ndarray
    unit: np.ndarray
    label: str = ""
    blocks: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        n = self.dim
        if n < 1:
            raise ValueError("algebra dimension must be positive")
        object.__setattr__(self, "mult", as_matrix(self.mult))
        object.__setattr__(self, "unit", as_matrix(self.unit))
        if self.mult.shape != (n, n * n):
            raise ValueError(f"mult must have shape ({n}, {n * n}), got {self.mult.shape}")
        if self.unit.shape != (n, 1):
            raise ValueError(f"unit must have shape ({n}, 1), got {self.unit.shape}")

    @cached_property
    def comult(self) -> np.ndarray:
        return dagger(self.mult)

    @cached_property
    def counit(self) -> np.ndarray:
        return dagger(self.unit)

    @cached_property
    def mult3(self) -> np.ndarray:
        """Multiplication as a rank-3 tensor ``m[c, a, b]``."""
        return self.mult.reshape(self.dim, self.dim, self.dim)

    @cached_property
    def comult3(self) -> np.ndarray:
        """Comultiplication as a rank-3 tensor ``m^[a, b, c]``."""
        return self.comult.reshape(self.dim, self.dim, self.dim)

    @cached_property
    def frob_cup(self) -> np.ndarray:
        """Self-duality cup ``comult . unit`` of shape (n*n, 1)."""
        return self.comult @ self.unit

    @cached_property
    def frob_cap(self) -> np.ndarray:
        """Self-duality cap ``counit . mult`` of shape (1, n*n)."""
        return self.counit @ self.mult

    @cached_property
    def invol_matrix(self) -> np.ndarray:
        """Matrix K with ``star(x) = K @ conj(x)`` (the transpose-like map)."""
        return self.frob_cup.reshape(self.dim, self.dim).T.copy()

    def __repr__(self) -> str:
        name = self.label or "FrobeniusAlgebra"
        return f"<{name} dim={self.dim}>"


@dataclass(frozen=True, eq=False)
class AlgebraElement:
    """An element of a Frobenius algebra, as carrier coordinates."""

    algebra: FrobeniusAlgebra
    coords: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "coords", as_matrix(self.coords))
        if self.coords.shape != (self.algebra.dim, 1):
            raise ValueError(
                f"coords must have shape ({self.algebra.dim}, 1), got {self.coords.shape}"
            )


@dataclass(frozen=True, eq=False)
class AlgebraReport:
    """Residuals of the Frobenius axioms plus derived structure flags.

    Flags are recomputed from residuals against the tolerance, never asserted
    by construction.
    """

    assoc: float
    unital: float
    frobenius: float
    special: float
    symmetric: float
    commutative: float
    standard: float
    epsilon: float = DEFAULT_TOL.epsilon

    def residuals(self) -> dict[str, float]:
        return {
            "assoc": self.assoc,
            "unital": self.unital,
            "frobenius": self.frobenius,
            "special": self.special,
            "symmetric": self.symmetric,
            "commutative": self.commutative,
            "standard": self.standard,
        }

    @property
    def is_frobenius(self) -> bool:
        return max(self.assoc, self.unital, self.frobenius) <= self.epsilon

    @property
    def is_special(self) -> bool:
        return self.special <= self.epsilon

    @property
    def is_symmetric(self) -> bool:
        return self.symmetric <= self.epsilon

    @property
    def is_commutative(self) -> bool:
        return self.commutative <= self.epsilon

    @property
    def is_standard(self) -> bool:
        return self.standard <= self.epsilon


def check_algebra(alg: FrobeniusAlgebra, tol: Tolerance = DEFAULT_TOL) -> AlgebraReport:
    """Residuals of associativity, unitality, Frobenius, speciality, symmetry,
    commutativity and standardness, each as ``max |LHS - RHS|``.

    Contractions are staged over the rank-3 multiplication tensors so that
    large algebras never materialise Kronecker products.
    """
    n = alg.dim
    m3 = alg.mult3
    c3 = alg.comult3
    u = alg.unit[:, 0]

    # associativity: m(m x id) = m(id x m) as tensors with three inputs
    lhs = np.einsum("cxz,xab->cabz", m3, m3, optimize=True)
    rhs = np.einsum("caz,zbx->cabx", m3, m3, optimize=True)
    assoc = residual((lhs - rhs).reshape(n, -1), tol)

    left_u = np.einsum("cab,a->cb", m3, u, optimize=True)
    right_u = np.einsum("cab,b->ca", m3, u, optimize=True)
    eye = np.eye(n)
    unital = max(residual(left_u - eye, tol), residual(right_u - eye, tol))

    # Frobenius equation: (id x m)(m^ x id) = m^ m = (m x id)(id x m^)
    mid = np.einsum("cdx,xab->cdab", c3, m3, optimize=True)
    left = np.einsum("cqa,dqb->cdab", c3, m3, optimize=True)
    right = np.einsum("cap,pdb->cdab", m3, c3, optimize=True)
    frob = max(
        residual((left - mid).reshape(n * n, n * n), tol),
        residual((right - mid).reshape(n * n, n * n), tol),
    )

    special = residual(np.einsum("cab,abd->cd", m3, c3, optimize=True) - eye, tol)

    capv = alg.frob_cap.reshape(n, n)
    symmetric = residual(capv - capv.T, tol)

    comm = residual((np.einsum("cab->cba", m3) - m3).reshape(n, -1), tol)

    cupv = alg.frob_cup.reshape(n, n)
    g_left = capv @ cupv.T
    g_right = capv.T @ cupv
    standard = residual(g_left - g_right, tol)

    return AlgebraReport(
        assoc=assoc,
        unital=unital,
        frobenius=frob,
        special=special,
        symmetric=symmetric,
        commutative=comm,
        standard=standard,
        epsilon=tol.epsilon,
    )


def _coords(x) -> np.ndarray:
    if isinstance(x, AlgebraElement):
        return x.coords
    return as_matrix(x)


def multiply(alg: FrobeniusAlgebra, x, y) -> np.ndarray:
    """Product of two elements, ``m(x (x) y)``, as carrier coordinates."""
    xv = _coords(x)[:, 0]
    yv = _coords(y)[:, 0]
    return np.einsum("cab,a,b->c", alg.mult3, xv, yv, optimize=True).reshape(-1, 1)


def involution(alg: FrobeniusAlgebra, x) -> np.ndarray:
    """The unique C*-involution ``x -> x*`` (conjugate-linear)."""
    return alg.invol_matrix @ np.conj(_coords(x))


def counit_value(alg: FrobeniusAlgebra, x) -> complex:
    """Value of the canonical functional (the counit) on an element."""
    return complex((alg.counit @ _coords(x))[0, 0])


def left_mult_operator(alg: FrobeniusAlgebra, x) -> np.ndarray:
    """Matrix of left multiplication by ``x`` on the carrier."""
    xv = _coords(x)[:, 0]
    return np.einsum("cab,a->cb", alg.mult3, xv, optimize=True)


def is_positive_element(alg: FrobeniusAlgebra, x, tol: Tolerance = DEFAULT_TOL) -> tuple[bool, float]:
    """Positivity of an algebra element via its left-multiplication operator.

    ``x >= 0`` in the C*-algebra iff ``L_x`` is PSD on the GNS space, which is
    the carrier itself since the functional is faithful.
    """
    from .tensors import is_psd

    return is_psd(left_mult_operator(alg, x), tol)


# ---------------------------------------------------------------------------
# constructors


def matrix_algebra(d: int) -> FrobeniusAlgebra:
    """The full operator algebra on a d-dimensional space, on carrier H (x) H.

    Multiplication ``(1/sqrt d) (id (x) cap (x) id)`` and unit
    ``sqrt(d) cup`` make the counit the special trace ``d Tr``.
    """
    if d < 1:
        raise ValueError("matrix_algebra needs d >= 1")
    eye = np.eye(d, dtype=complex)
    mult = tensor(eye, cap(d), eye) / np.sqrt(d)
    unit = np.sqrt(d) * cup(d)
    return FrobeniusAlgebra(d * d, mult, unit, label=f"M{d}", blocks=(d,))


def multimatrix_algebra(blocks) -> FrobeniusAlgebra:
    """Direct sum of matrix algebras with block sizes ``blocks``.

    Blocks are laid out in list order; each uses the carrier convention of
    :func:`matrix_algebra`.  The counit is the special trace
    ``x -> sum_i n_i Tr_i(p_i x)`` and ``counit(unit) = dim``.
    """
    blocks = tuple(int(b) for b in blocks)
    if not blocks:
        raise ValueError("multimatrix_algebra needs at least one block")
    if any(b < 1 for b in blocks):
        raise ValueError("block sizes must be positive")
    n = sum(b * b for b in blocks)
    mult = np.zeros((n, n * n), dtype=complex)
    unit = np.zeros((n, 1), dtype=complex)
    off = 0
    for b in blocks:
        ma = matrix_algebra(b)
        sl = slice(off, off + b * b)
        m3 = mult.reshape(n, n, n)
        m3[sl, sl, sl] += ma.mult3
        unit[sl] = ma.unit
        off += b * b
    label = "+".join(f"M{b}" for b in blocks)
    return FrobeniusAlgebra(n, mult, unit, label=label, blocks=blocks)


def commutative_algebra(k: int) -> FrobeniusAlgebra:
    """The commutative algebra C^k (k one-dimensional blocks)."""
    return multimatrix_algebra([1] * k)


def tensor_product(a: FrobeniusAlgebra, b: FrobeniusAlgebra) -> FrobeniusAlgebra:
    """Tensor product algebra on the product carrier (middle-swap multiplication)."""
    na, nb = a.dim, b.dim
    mult = np.einsum("cab,duv->cdaubv", a.mult3, b.mult3, optimize=True).reshape(
        na * nb, (na * nb) ** 2
    )
    unit = tensor(a.unit, b.unit)
    label = f"({a.label or '?'})x({b.label or '?'})"
    return FrobeniusAlgebra(na * nb, mult, unit, label=label, blocks=None)


@dataclass(frozen=True, eq=False)
class BhIso:
    """Trace-preserving *-isomorphism between d x d matrices and the
    operator-algebra carrier: ``X -> sqrt(d) (X (x) 1) cup``.

    In the fixed bases this is ``sqrt(d)`` times row-major vectorisation.
    """

    d: int

    @property
    def forward(self) -> np.ndarray:
        return np.sqrt(self.d) * np.eye(self.d * self.d, dtype=complex)

    @property
    def inverse(self) -> np.ndarray:
        return np.eye(self.d * self.d, dtype=complex) / np.sqrt(self.d)

    def apply(self, x: np.ndarray) -> np.ndarray:
        """Matrix in M_d -> carrier coordinates, shape (d*d, 1)."""
        x = np.asarray(x, dtype=complex)
        if x.shape != (self.d, self.d):
            raise ValueError(f"expected a {self.d}x{self.d} matrix, got {x.shape}")
        return np.sqrt(self.d) * x.reshape(-1, 1)

    def unapply(self, w) -> np.ndarray:
        """Carrier coordinates -> matrix in M_d."""
        w = _coords(w)
        if w.shape != (self.d * self.d, 1):
            raise ValueError(f"expected carrier coords of length {self.d * self.d}")
        return w.reshape(self.d, self.d) / np.sqrt(self.d)


def bh_iso(d: int) -> BhIso:
    """The canonical identification of M_d with :func:`matrix_algebra` (d)."""
    if d < 1:
        raise ValueError("bh_iso needs d >= 1")
    return BhIso(d)


# ---------------------------------------------------------------------------
# structure-preserving map checks


@dataclass(frozen=True, eq=False)
class HomReport:
    """Residuals of the three *-homomorphism or *-cohomomorphism equations."""

    mult: float
    unit: float
    involution: float
    unitary: float
    epsilon: float = DEFAULT_TOL.epsilon

    def residuals(self) -> dict[str, float]:
        return {
            "mult": self.mult,
            "unit": self.unit,
            "involution": self.involution,
            "unitary": self.unitary,
        }

    @property
    def passes(self) -> bool:
        return max(self.mult, self.unit, self.involution) <= self.epsilon

    @property
    def unitary_star_iso(self) -> bool:
        return self.passes and self.unitary <= self.epsilon


def _unitarity_residual(f: np.ndarray, tol: Tolerance) -> float:
    r1 = residual(dagger(f) @ f - np.eye(f.shape[1]), tol)
    r2 = residual(f @ dagger(f) - np.eye(f.shape[0]), tol)
    return max(r1, r2)


def check_star_homomorphism(
    f, a: FrobeniusAlgebra, b: FrobeniusAlgebra, tol: Tolerance = DEFAULT_TOL
) -> HomReport:
    """Residuals of multiplicativity, unit preservation and involution
    preservation for a linear map ``f: a -> b``."""
    f = as_matrix(f)
    if f.shape != (b.dim, a.dim):
        raise ValueError(f"map shape {f.shape} does not match ({b.dim}, {a.dim})")
    lhs = f @ a.mult
    rhs = np.einsum("pa,qb,cab->cpq", f, f, b.mult3, optimize=True).reshape(b.dim, -1)
    # rhs above is m_b(f x f) assembled without forming kron(f, f)
    mult_res = residual(lhs - rhs, tol)
    unit_res = residual(f @ a.unit - b.unit, tol)
    invol_res = residual(f @ a.invol_matrix - b.invol_matrix @ np.conj(f), tol)
    return HomReport(
        mult=mult_res,
        unit=unit_res,
        involution=invol_res,
        unitary=_unitarity_residual(f, tol),
        epsilon=tol.epsilon,
    )


def check_star_cohomomorphism(
    f, a: FrobeniusAlgebra, b: FrobeniusAlgebra, tol: Tolerance = DEFAULT_TOL
) -> HomReport:
    """Residuals of comultiplicativity, counit preservation and involution
    preservation for a linear map ``f: a -> b`` (the adjoint-side equations)."""
    f = as_matrix(f)
    if f.shape != (b.dim, a.dim):
        raise ValueError(f"map shape {f.shape} does not match ({b.dim}, {a.dim})")
    lhs = np.einsum("pqc,ca->pqa", b.comult3, f, optimize=True)
    rhs = np.einsum("pa,qb,abc->pqc", f, f, a.comult3, optimize=True)
    comult_res = residual((lhs - rhs).reshape(b.dim * b.dim, a.dim), tol)
    counit_res = residual(b.counit @ f - a.counit, tol)
    invol_res = residual(f @ a.invol_matrix - b.invol_matrix @ np.conj(f), tol)
    return HomReport(
        mult=comult_res,
        unit=counit_res,
        involution=invol_res,
        unitary=_unitarity_residual(f, tol),
        epsilon=tol.epsilon,
    )


def max_entangled_element(d: int) -> AlgebraElement:
    """The maximally entangled state of two d-level systems as an element of
    ``matrix_algebra(d) (x) matrix_algebra(d)``.

    The element is ``(1/d^2)`` times the double-cup wiring pairing the output
    leg of each factor with the corresponding input leg of the other copy; the
    counit evaluates to exactly 1 on it, which is the normalisation used when
    it initialises the shared resource of a coding scheme.
    """
    if d < 1:
        raise ValueError("max_entangled_element needs d >= 1")
    alg = tensor_product(matrix_algebra(d), matrix_algebra(d))
    coords = cup(d * d) / (d * d)
    return AlgebraElement(alg, coords)


def center_dimension(alg: FrobeniusAlgebra, tol: float = 1e-9) -> int:
    """Dimension of the centre, computed as the common nullspace of all
    commutator maps ``L_b - R_b`` over the carrier basis."""
    n = alg.dim
    rows = []
    for b in range(n):
        e = np.zeros((n, 1), dtype=complex)
        e[b, 0] = 1.0
        lm = left_mult_operator(alg, e)
        rm = np.einsum("cab,b->ca", alg.mult3, e[:, 0], optimize=True)
        rows.append(lm - rm)
    stack = np.vstack(rows)
    svals = np.linalg.svd(stack, compute_uv=False)
    cutoff = tol * max(1.0, float(svals[0])) if svals.size else tol
    return n - int(np.sum(svals > cutoff))
