"""Finite abelian groups, characters, 2-cocycles and twisted group algebras.

Groups are products of cyclic factors with elements stored as integer tuples;
cocycles are full ``|G| x |G|`` tables of unit-modulus values indexed by the
group's element enumeration.  The twisted group algebra ``A(L, phi)`` carries
an orthonormal graded basis; its multiplication absorbs a ``1/sqrt(|L|)`` and
its unit a ``sqrt(|L|)`` so the result is special with the special trace as
counit, matching the normalisation of the operator-algebra constructors.

Coboundary testing is exact in structure: on a finite abelian group a
2-cocycle is a coboundary iff its table is symmetric, and in that case a
trivialising cochain is constructed by normalising powers of the generators
(no floating-point cohomology solves).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .frobenius import FrobeniusAlgebra
from .tensors import DEFAULT_TOL, Tolerance, as_matrix, residual

__all__ = [
    "FiniteAbelianGroup",
    "Subgroup",
    "Character",
    "dual_group",
    "restriction",
    "Cocycle2",
    "CocycleReport",
    "check_cocycle",
    "trivial_cocycle",
    "coboundary",
    "weyl_cocycle",
    "is_coboundary",
    "cohomologous",
    "ProjectiveRep",
    "check_projective_rep",
    "clock_shift_rep",
    "GradedAlgebra",
    "twisted_group_algebra",
    "label_characters",
    "factor_basis",
    "fourier_matrix",
    "character_action",
    "is_covariant",
    "is_grading_preserving",
    "classicalization_iso",
    "covariant_channel_matrix",
]

Element = tuple


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """Direct sum of cyclic groups Z_n1 (+) ... (+) Z_nk, elements as tuples."""

    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        orders = tuple(int(n) for n in self.orders)
        if any(n < 1 for n in orders):
            raise ValueError("cyclic orders must be positive")
        object.__setattr__(self, "orders", orders)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        return tuple(itertools.product(*(range(n) for n in self.orders)))

    @cached_property
    def index(self) -> dict[Element, int]:
        return {g: i for i, g in enumerate(self.elements)}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Element:
        return (0,) * len(self.orders)

    def add(self, g: Element, h: Element) -> Element:
        return tuple((a + b) % n for a, b, n in zip(g, h, self.orders))

    def neg(self, g: Element) -> Element:
        return tuple((-a) % n for a, n in zip(g, self.orders))

    def contains(self, g) -> bool:
        return tuple(g) in self.index

    def __repr__(self) -> str:
        if not self.orders:
            return "Z1"
        return "x".join(f"Z{n}" for n in self.orders)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of a finite abelian group, enumerated from generators."""

    parent: FiniteAbelianGroup
    generators: tuple[Element, ...]

    def __post_init__(self) -> None:
        gens = tuple(tuple(g) for g in self.generators)
        for g in gens:
            if not self.parent.contains(g):
                raise ValueError(f"generator {g} is not in {self.parent}")
        object.__setattr__(self, "generators", gens)

    @cached_property
    def elements(self) -> tuple[Element, ...]:
        seen = {self.parent.identity}
        frontier = [self.parent.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in self.generators:
                    y = self.parent.add(x, g)
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class Character:
    """Character chi(g) = exp(2 pi i sum_i k_i g_i / n_i) of a group."""

    group: FiniteAbelianGroup
    exponents: tuple[int, ...]

    def __post_init__(self) -> None:
        exps = tuple(int(k) % n for k, n in zip(self.exponents, self.group.orders))
        if len(exps) != len(self.group.orders):
            raise ValueError("exponent tuple length does not match the group")
        object.__setattr__(self, "exponents", exps)

    def __call__(self, g: Element) -> complex:
        phase = sum(k * a / n for k, a, n in zip(self.exponents, g, self.group.orders))
        return complex(np.exp(2j * np.pi * phase))

    def values(self, labels=None) -> np.ndarray:
        labels = self.group.elements if labels is None else labels
        return np.array([self(g) for g in labels], dtype=complex)


def dual_group(group: FiniteAbelianGroup) -> list[Character]:
    """All characters of the group, one per exponent tuple."""
    return [Character(group, k) for k in group.elements]


def restriction(group: FiniteAbelianGroup, sub: Subgroup):
    """The restriction homomorphism from characters of the group to value
    tables on the subgroup.

    Returns ``(restrict, characters)`` where ``restrict(chi)`` is the tuple of
    values of ``chi`` on ``sub.elements`` and ``characters`` is the complete
    duplicate-free list of such tables (every character of the subgroup arises
    this way because the circle group is divisible).
    """
    if sub.parent is not group and sub.parent != group:
        raise ValueError("subgroup does not live in the given group")

    def restrict(chi: Character) -> tuple[complex, ...]:
        return tuple(complex(chi(g)) for g in sub.elements)

    tables: list[tuple[complex, ...]] = []
    for chi in dual_group(group):
        t = restrict(chi)
        if not any(max(abs(a - b) for a, b in zip(t, s)) < 1e-9 for s in tables):
            tables.append(t)
    return restrict, tables


# ---------------------------------------------------------------------------
# 2-cocycles


@dataclass(frozen=True, eq=False)
class Cocycle2:
    """U(1)-valued 2-cocycle as a full table over the group's enumeration."""

    group: FiniteAbelianGroup
    table: np.ndarray

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=complex)
        n = self.group.order
        if t.shape != (n, n):
            raise ValueError(f"cocycle table must be {n}x{n}, got {t.shape}")
        object.__setattr__(self, "table", t)

    def __call__(self, g: Element, h: Element) -> complex:
        return complex(self.table[self.group.index[tuple(g)], self.group.index[tuple(h)]])

    def conj(self) -> "Cocycle2":
        return Cocycle2(self.group, np.conj(self.table))

    def mul(self, other: "Cocycle2") -> "Cocycle2":
        if other.group != self.group:
            raise ValueError("cocycles live on different groups")
        return Cocycle2(self.group, self.table * other.table)

    @property
    def is_trivial(self) -> bool:
        return bool(np.abs(self.table - 1.0).max() < 1e-12)


@dataclass(frozen=True, eq=False)
class CocycleReport:
    unit_modulus: float
    cocycle_identity: float
    normalized: float
    symmetric: float
    epsilon: float = DEFAULT_TOL.epsilon

    @property
    def is_cocycle(self) -> bool:
        return max(self.unit_modulus, self.cocycle_identity) <= self.epsilon


def check_cocycle(psi: Cocycle2, tol: Tolerance = DEFAULT_TOL) -> CocycleReport:
    """Residuals of unit-modulus and the 2-cocycle identity over all triples."""
    g = psi.group
    t = psi.table
    unit_mod = float(np.abs(np.abs(t) - 1.0).max())
    n = g.order
    sum_idx = np.array(
        [[g.index[g.add(x, y)] for y in g.elements] for x in g.elements], dtype=int
    )
    # psi(a,b) psi(a+b,c) = psi(b,c) psi(a,b+c) for all triples
    worst = 0.0
    for ia in range(n):
        for ib in range(n):
            ab = sum_idx[ia, ib]
            diff = np.abs(t[ia, ib] * t[ab, :] - t[ib, :] * t[ia, sum_idx[ib, :]])
            worst = max(worst, float(diff.max()))
    e = g.index[g.identity]
    normalized = float(abs(t[e, e] - 1.0))
    symmetric = float(np.abs(t - t.T).max())
    return CocycleReport(
        unit_modulus=unit_mod,
        cocycle_identity=worst,
        normalized=normalized,
        symmetric=symmetric,
        epsilon=tol.epsilon,
    )


def trivial_cocycle(group: FiniteAbelianGroup) -> Cocycle2:
    n = group.order
    return Cocycle2(group, np.ones((n, n), dtype=complex))


def coboundary(group: FiniteAbelianGroup, phi) -> Cocycle2:
    """The coboundary of a 1-cochain: ``(d phi)(g, h) = phi(g) phi(h) / phi(g+h)``."""
    vals = np.asarray(phi, dtype=complex).reshape(-1)
    if vals.shape != (group.order,):
        raise ValueError("cochain must assign one value per group element")
    if np.abs(np.abs(vals) - 1.0).max() > 1e-12:
        raise ValueError("cochain values must have unit modulus")
    n = group.order
    table = np.empty((n, n), dtype=complex)
    for i, x in enumerate(group.elements):
        for j, y in enumerate(group.elements):
            table[i, j] = vals[i] * vals[j] / vals[group.index[group.add(x, y)]]
    return Cocycle2(group, table)


def weyl_cocycle(d: int) -> Cocycle2:
    """The bimultiplicative cocycle ``psi((a1,a2),(b1,b2)) = omega^(a2 b1)`` on
    Z_d x Z_d; nondegenerate, so the twisted group algebra is a full matrix
    algebra."""
    if d < 2:
        raise ValueError("weyl_cocycle needs d >= 2")
    group = FiniteAbelianGroup((d, d))
    omega = np.exp(2j * np.pi / d)
    n = group.order
    table = np.empty((n, n), dtype=complex)
    for i, (a1, a2) in enumerate(group.elements):
        for j, (b1, b2) in enumerate(group.elements):
            table[i, j] = omega ** (a2 * b1)
    return Cocycle2(group, table)


def _power_coefficient(psi: Cocycle2, gen: Element, count: int) -> tuple[complex, Element]:
    """Coefficient and endpoint of the word gen^count in the twisted algebra."""
    g = psi.group
    coeff = 1.0 + 0j
    cur = g.identity
    for _ in range(count):
        coeff *= psi(cur, gen)
        cur = g.add(cur, gen)
    return coeff, cur


def is_coboundary(
    psi: Cocycle2, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, np.ndarray | None]:
    """Decide whether the cocycle is a coboundary; return a trivialising cochain.

    On a finite abelian group a 2-cocycle is a coboundary iff its table is
    symmetric (the antisymmetrised form classifies the cohomology class and
    symmetric classes are trivial because U(1) is divisible).  When symmetric,
    a cochain ``w`` with ``d w = psi`` is produced constructively by taking
    each generator's full-cycle coefficient to its principal root.
    """
    rep = check_cocycle(psi, tol)
    if rep.unit_modulus > tol.epsilon:
        raise ValueError("cocycle table entries must have unit modulus")
    if not rep.is_cocycle:
        raise ValueError("table does not satisfy the 2-cocycle identity")
    if rep.symmetric > tol.epsilon:
        return False, None

    g = psi.group
    e_idx = g.index[g.identity]
    const = complex(psi.table[e_idx, e_idx])
    norm_psi = Cocycle2(g, psi.table / const)

    k = len(g.orders)
    gens = [
        tuple((1 if j == i else 0) % g.orders[j] for j in range(k)) for i in range(k)
    ]
    roots = []
    for gen, order in zip(gens, g.orders):
        c, endpoint = _power_coefficient(norm_psi, gen, order)
        assert endpoint == g.identity
        roots.append(np.exp(1j * np.angle(c) / order))

    w = np.empty(g.order, dtype=complex)
    for idx, el in enumerate(g.elements):
        coeff = 1.0 + 0j
        cur = g.identity
        for gen, a in zip(gens, el):
            for _ in range(a):
                coeff *= norm_psi(cur, gen)
                cur = g.add(cur, gen)
        lam = np.prod([r ** (-a) for r, a in zip(roots, el)]) if k else 1.0
        w[idx] = np.conj(coeff * lam)
    w = w * const

    resid = np.abs(coboundary(g, w).table - psi.table).max()
    if resid > max(tol.epsilon, 1e-9):
        raise AssertionError(f"trivialising cochain failed to reproduce the cocycle ({resid:.2e})")
    return True, w


def cohomologous(psi1: Cocycle2, psi2: Cocycle2, tol: Tolerance = DEFAULT_TOL):
    """Whether two cocycles differ by a coboundary; returns the cochain if so."""
    return is_coboundary(psi1.mul(psi2.conj()), tol)


# ---------------------------------------------------------------------------
# projective representations


@dataclass(frozen=True, eq=False)
class ProjectiveRep:
    """Unitaries ``pi(g)`` with ``pi(g) pi(h) = psi(g, h) pi(g + h)``."""

    group: FiniteAbelianGroup
    cocycle: Cocycle2
    degree: int
    mats: tuple[np.ndarray, ...]

    def __post_init__(self) -> None:
        if len(self.mats) != self.group.order:
            raise ValueError("need one unitary per group element")
        mats = tuple(as_matrix(m) for m in self.mats)
        for m in mats:
            if m.shape != (self.degree, self.degree):
                raise ValueError("representation matrices must be square of the stated degree")
        object.__setattr__(self, "mats", mats)

    def __call__(self, g: Element) -> np.ndarray:
        return self.mats[self.group.index[tuple(g)]]


@dataclass(frozen=True, eq=False)
class ProjectiveRepReport:
    relation: float
    unitary: float
    commutant_dimension: int
    epsilon: float = DEFAULT_TOL.epsilon

    @property
    def passes(self) -> bool:
        return max(self.relation, self.unitary) <= self.epsilon

    @property
    def irreducible(self) -> bool:
        return self.commutant_dimension == 1


def check_projective_rep(rep: ProjectiveRep, tol: Tolerance = DEFAULT_TOL) -> ProjectiveRepReport:
    g = rep.group
    worst_rel = 0.0
    worst_uni = 0.0
    eye = np.eye(rep.degree)
    for x in g.elements:
        px = rep(x)
        worst_uni = max(worst_uni, residual(px @ px.conj().T - eye, tol))
        for y in g.elements:
            lhs = px @ rep(y)
            rhs = rep.cocycle(x, y) * rep(g.add(x, y))
            worst_rel = max(worst_rel, residual(lhs - rhs, tol))
    d = rep.degree
    rows = [np.kron(rep(x), np.eye(d)) - np.kron(np.eye(d), rep(x).T) for x in g.elements]
    svals = np.linalg.svd(np.vstack(rows), compute_uv=False)
    cutoff = 1e-9 * max(1.0, float(svals[0])) if svals.size else 1e-9
    commutant = d * d - int(np.sum(svals > cutoff))
    return ProjectiveRepReport(
        relation=worst_rel, unitary=worst_uni, commutant_dimension=commutant, epsilon=tol.epsilon
    )


def clock_shift_rep(d: int) -> ProjectiveRep:
    """The clock/shift family ``pi(a1, a2) = X^a1 Z^a2`` on C^d (Pauli family
    at d = 2), an irreducible projective representation for the Weyl cocycle."""
    if d < 2:
        raise ValueError("clock_shift_rep needs d >= 2")
    psi = weyl_cocycle(d)
    group = psi.group
    omega = np.exp(2j * np.pi / d)
    shift = np.zeros((d, d), dtype=complex)
    for j in range(d):
        shift[(j + 1) % d, j] = 1.0
    clock = np.diag(omega ** np.arange(d)).astype(complex)
    mats = []
    for a1, a2 in group.elements:
        mats.append(np.linalg.matrix_power(shift, a1) @ np.linalg.matrix_power(clock, a2))
    return ProjectiveRep(group=group, cocycle=psi, degree=d, mats=tuple(mats))


# ---------------------------------------------------------------------------
# twisted group algebras and gradings


@dataclass(frozen=True, eq=False)
class GradedAlgebra(FrobeniusAlgebra):
    """A Frobenius algebra whose orthonormal basis carries a group grading."""

    group: FiniteAbelianGroup = FiniteAbelianGroup(())
    grading: tuple[Element, ...] = ()
    cocycle: Cocycle2 | None = None

    def __post_init__(self) -> None:
        super().__post_init__()
        if len(self.grading) != self.dim:
            raise ValueError("need one grading label per basis vector")
        for g in self.grading:
            if not self.group.contains(g):
                raise ValueError(f"grading label {g} is not in {self.group}")

    def twist(self, psi: Cocycle2) -> "GradedAlgebra":
        """The same graded carrier with multiplication twisted by ``conj(psi)``.

        ``psi`` must live on this algebra's grading group; the new cocycle is
        ``conj(psi) * phi`` restricted to the grading labels.
        """
        if psi.group != self.group:
            raise ValueError("twisting cocycle lives on a different group")
        base = self.cocycle if self.cocycle is not None else trivial_cocycle(self.group)
        return twisted_group_algebra_on_labels(
            self.group, self.grading, psi.conj().mul(base), label=f"{self.label}~twist"
        )


def twisted_group_algebra_on_labels(
    group: FiniteAbelianGroup,
    labels: tuple[Element, ...],
    phi: Cocycle2,
    label: str = "",
) -> GradedAlgebra:
    """Twisted group algebra on an explicit closed label set inside ``group``."""
    labels = tuple(tuple(g) for g in labels)
    n = len(labels)
    pos = {g: i for i, g in enumerate(labels)}
    if len(pos) != n:
        raise ValueError("grading labels must be distinct")
    if group.identity not in pos:
        raise ValueError("label set must contain the identity")
    rep = check_cocycle(phi)
    if not rep.is_cocycle:
        raise ValueError("invalid 2-cocycle")
    if rep.normalized > 1e-10:
        raise ValueError("cocycle must be normalised (psi(e, e) = 1)")
    mult = np.zeros((n, n, n), dtype=complex)
    for i, x in enumerate(labels):
        for j, y in enumerate(labels):
            z = group.add(x, y)
            if z not in pos:
                raise ValueError("label set is not closed under addition")
            mult[pos[z], i, j] = phi(x, y) / np.sqrt(n)
    unit = np.zeros((n, 1), dtype=complex)
    unit[pos[group.identity], 0] = np.sqrt(n)
    return GradedAlgebra(
        dim=n,
        mult=mult.reshape(n, n * n),
        unit=unit,
        label=label or f"A({group},phi)",
        blocks=None,
        group=group,
        grading=labels,
        cocycle=phi,
    )


def twisted_group_algebra(L, phi: Cocycle2 | None = None) -> GradedAlgebra:
    """The twisted group algebra ``A(L, phi)`` as a graded special symmetric
    Frobenius algebra; ``phi = None`` means the trivial twist.

    ``L`` may be a :class:`FiniteAbelianGroup` (grading group = L itself) or a
    :class:`Subgroup` (grading labels inside the parent group; the cocycle
    must then live on the parent).
    """
    if isinstance(L, Subgroup):
        group = L.parent
        labels = L.elements
    else:
        group = L
        labels = L.elements
    if phi is None:
        phi = trivial_cocycle(group)
    name = f"A({group},{'1' if phi.is_trivial else 'phi'})"
    return twisted_group_algebra_on_labels(group, labels, phi, label=name)


def label_characters(alg: GradedAlgebra) -> list[np.ndarray]:
    """Distinct character value-tables on the algebra's grading labels.

    For a full group grading this is the character table; for subgroup labels
    it is the complete list of restricted characters, deduplicated in the
    enumeration order of the ambient dual group.
    """
    tables: list[np.ndarray] = []
    for chi in dual_group(alg.group):
        t = chi.values(alg.grading)
        if not any(np.abs(t - s).max() < 1e-9 for s in tables):
            tables.append(t)
    if len(tables) != alg.dim:
        raise ValueError("grading labels do not form a subgroup; character basis unavailable")
    return tables


def factor_basis(alg: GradedAlgebra) -> np.ndarray:
    """Unitary basis change from factor (idempotent) to graded coordinates.

    Column ``c`` holds the carrier coordinates of the c-th minimal idempotent
    ``(1/sqrt n) sum_g chi_c(g) g-hat``.  Only defined for the untwisted
    algebra, where the idempotents exist.
    """
    if alg.cocycle is not None:
        worst = max(
            abs(alg.cocycle(x, y) - 1.0) for x in alg.grading for y in alg.grading
        )
        if worst > 1e-10:
            raise ValueError("factor basis requires the untwisted algebra")
    chars = label_characters(alg)
    n = alg.dim
    cols = [t.reshape(-1, 1) / np.sqrt(n) for t in chars]
    return np.hstack(cols)


def fourier_matrix(L) -> np.ndarray:
    """The unitary taking factor-basis coordinates to graded-basis coordinates."""
    alg = L if isinstance(L, GradedAlgebra) else twisted_group_algebra(L, None)
    return factor_basis(alg)


def _ensure_same_group(a: GradedAlgebra, b: GradedAlgebra) -> None:
    if a.group != b.group:
        raise ValueError("algebras are graded over different groups")


def character_action(xi: Character, alg: GradedAlgebra) -> np.ndarray:
    """Diagonal action of a dual-group element on the graded carrier."""
    if xi.group != alg.group:
        raise ValueError("character lives on a different group")
    return np.diag([xi(g) for g in alg.grading]).astype(complex)


def is_covariant(
    f, src: GradedAlgebra, tgt: GradedAlgebra, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, float]:
    """Covariance of a carrier map under the dual-group action, as a residual
    over a generating set of characters."""
    _ensure_same_group(src, tgt)
    mat = f.matrix if hasattr(f, "matrix") else as_matrix(f)
    k = len(src.group.orders)
    worst = 0.0
    gens = [Character(src.group, tuple(1 if j == i else 0 for j in range(k))) for i in range(k)]
    for xi in gens:
        lhs = character_action(xi, tgt) @ mat
        rhs = mat @ character_action(xi, src)
        worst = max(worst, residual(lhs - rhs, tol))
    return worst <= tol.epsilon, worst


def is_grading_preserving(
    f, src: GradedAlgebra, tgt: GradedAlgebra, tol: Tolerance = DEFAULT_TOL
) -> tuple[bool, float]:
    """Whether the carrier map is supported on matching grading labels."""
    mat = f.matrix if hasattr(f, "matrix") else as_matrix(f)
    worst = 0.0
    for i, gi in enumerate(tgt.grading):
        for j, gj in enumerate(src.grading):
            if gi != gj:
                worst = max(worst, float(abs(mat[i, j])))
    return worst <= tol.epsilon, worst


def classicalization_iso(alg: GradedAlgebra, cochain) -> np.ndarray:
    """Unitary *-isomorphism from a coboundary-twisted algebra to its untwisted
    form, as the diagonal matrix of a trivialising cochain.

    ``cochain`` assigns a unit-modulus value to each grading label with
    ``d(cochain) = conj(phi)`` for the algebra's twist ``phi``; distinct valid
    cochains differ by a character of the grading group, and the resulting
    isomorphisms genuinely differ - the choice matters downstream.
    """
    vals = np.asarray(cochain, dtype=complex).reshape(-1)
    if vals.shape != (alg.dim,):
        raise ValueError("cochain must assign one value per grading label")
    return np.diag(vals).astype(complex)


def covariant_channel_matrix(alg: GradedAlgebra, weights) -> np.ndarray:
    """Carrier matrix of the covariant classical channel with translation
    weights ``q`` over the character set: diagonal with entries
    ``sum_xi q(xi) xi(g)``.

    ``weights`` is a probability vector aligned with :func:`label_characters`.
    """
    q = np.asarray(weights, dtype=float).reshape(-1)
    chars = label_characters(alg)
    if q.shape != (len(chars),):
        raise ValueError("need one weight per character")
    if q.min() < -1e-12 or abs(q.sum() - 1.0) > 1e-9:
        raise ValueError("weights must form a probability vector")
    diag = sum(qi * t for qi, t in zip(q, chars))
    return np.diag(diag).astype(complex)
