"""Cocycle twists of graded channels and their entanglement-invertible maps.

Given a finite abelian group G, a 2-cocycle psi on it, and an irreducible
projective representation pi with that cocycle (degree d), every G-graded
algebra A(L, phi) acquires a twisted partner A(L, conj(psi) phi) on the same
carrier, and every covariant channel between untwisted algebras transports to
a channel between the twisted ones with the same matrix in graded bases.

The interconversion is witnessed by a pair of counit-preserving maps

    u : A (x) B(H_e) -> A~        u(g-hat (x) s) = sqrt(d) Tr[pi(g)^T s~] g-hat
    v : A~ (x) B(H_e) -> A        v(g-hat (x) s) = sqrt(d) Tr[pi(g)^+ s~] g-hat

(``s~`` the matrix form of the operator-algebra element ``s``) which are
*-cohomomorphisms, hence channels, and undo one another when fed half of a
maximally entangled d-level resource.  Feeding the pair around a covariant
channel yields exact entanglement-assisted coding schemes in both directions;
teleportation and dense coding are the instance L = G = Z_d x Z_d with the
nondegenerate bimultiplicative cocycle and the clock/shift representation.

The transpose/conjugate placement in the scalar patterns above, and the
``sqrt(d)`` scale, were calibrated once against the cohomomorphism and
invertibility equations (which overdetermine them) and are frozen here.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channels import ChannelMap, is_channel
from .frobenius import check_star_cohomomorphism, matrix_algebra, tensor_product
from .groups import (
    Cocycle2,
    GradedAlgebra,
    ProjectiveRep,
    check_projective_rep,
    is_covariant,
    trivial_cocycle,
)
from .tensors import DEFAULT_TOL, Tolerance, cup, residual

__all__ = [
    "UptInstance",
    "trivial_upt",
    "EntangledPair",
    "build_u",
    "build_v",
    "build_entangled_pair",
    "entanglement_invertibility",
    "pull_through_residuals",
    "transform_channel",
    "naturality_check",
    "coding_scheme_equations",
    "equivalence_functor_check",
    "pair_verification_report",
]


@dataclass(frozen=True, eq=False)
class UptInstance:
    """A transformation datum: cocycle plus projective representation.

    The component at a grading label g is the unitary ``pi(g)``; monoidality
    of the family is exactly the projective-representation relation, which is
    validated on construction together with ``pi(identity) = id``.
    """

    cocycle: Cocycle2
    rep: ProjectiveRep

    def __post_init__(self) -> None:
        if self.rep.group != self.cocycle.group:
            raise ValueError("representation and cocycle live on different groups")
        if np.abs(self.rep.cocycle.table - self.cocycle.table).max() > 1e-10:
            raise ValueError("representation cocycle does not match the given cocycle")
        rep_report = check_projective_rep(self.rep)
        if not rep_report.passes:
            raise ValueError("projective representation relations fail")
        eye = np.eye(self.rep.degree)
        if residual(self.rep(self.rep.group.identity) - eye) > 1e-10:
            raise ValueError("component at the identity must be the identity")

    @property
    def group(self):
        return self.cocycle.group

    @property
    def resource_dim(self) -> int:
        return self.rep.degree


def trivial_upt(group) -> UptInstance:
    """Degree-1 instance with trivial cocycle; u and v collapse to identities."""
    psi = trivial_cocycle(group)
    mats = tuple(np.ones((1, 1), dtype=complex) for _ in group.elements)
    rep = ProjectiveRep(group=group, cocycle=psi, degree=1, mats=mats)
    return UptInstance(cocycle=psi, rep=rep)


def _check_compatible(alg: GradedAlgebra, upt: UptInstance) -> None:
    if not isinstance(alg, GradedAlgebra):
        raise ValueError("need a graded algebra")
    if alg.group != upt.group:
        raise ValueError("algebra grading group does not match the transformation datum")


def _scalar_block(pi_g: np.ndarray, conjugate: bool) -> np.ndarray:
    mat = np.conj(pi_g) if conjugate else pi_g
    return np.sqrt(pi_g.shape[0]) * mat.reshape(-1)


def _build_map(alg: GradedAlgebra, upt: UptInstance, conjugate: bool) -> np.ndarray:
    n = alg.dim
    d = upt.resource_dim
    out = np.zeros((n, n, d * d), dtype=complex)
    for i, g in enumerate(alg.grading):
        out[i, i, :] = _scalar_block(upt.rep(g), conjugate)
    return out.reshape(n, n * d * d)


def build_u(alg: GradedAlgebra, upt: UptInstance) -> ChannelMap:
    """The map ``A (x) B(H_e) -> A~`` acting on homogeneous elements by
    ``g-hat (x) s -> sqrt(d) pi(g)_{ab} s_{(a,b)} g-hat`` in carrier coordinates."""
    _check_compatible(alg, upt)
    src = tensor_product(alg, matrix_algebra(upt.resource_dim))
    tgt = alg.twist(upt.cocycle)
    return ChannelMap(src, tgt, _build_map(alg, upt, conjugate=False))


def build_v(alg: GradedAlgebra, upt: UptInstance) -> ChannelMap:
    """The partner ``A~ (x) B(H_e) -> A`` built from the conjugate components
    (the dual transformation datum)."""
    _check_compatible(alg, upt)
    twisted = alg.twist(upt.cocycle)
    src = tensor_product(twisted, matrix_algebra(upt.resource_dim))
    return ChannelMap(src, alg, _build_map(alg, upt, conjugate=True))


@dataclass(frozen=True, eq=False)
class EntangledPair:
    """The two interconversion maps for one algebra and transformation datum."""

    source: GradedAlgebra
    twisted: GradedAlgebra
    resource_dim: int
    u_map: ChannelMap
    v_map: ChannelMap

    @property
    def dims_match(self) -> bool:
        return self.source.dim == self.twisted.dim


def build_entangled_pair(alg: GradedAlgebra, upt: UptInstance) -> EntangledPair:
    _check_compatible(alg, upt)
    d = upt.resource_dim
    resource = matrix_algebra(d)
    twisted = alg.twist(upt.cocycle)
    u = ChannelMap(tensor_product(alg, resource), twisted, _build_map(alg, upt, conjugate=False))
    v = ChannelMap(tensor_product(twisted, resource), alg, _build_map(alg, upt, conjugate=True))
    return EntangledPair(source=alg, twisted=twisted, resource_dim=d, u_map=u, v_map=v)


def _resource_state(d: int) -> np.ndarray:
    """Maximally entangled resource as a (d*d, d*d) coefficient grid."""
    return (cup(d * d) / (d * d)).reshape(d * d, d * d)


def entanglement_invertibility(pair: EntangledPair, tol: Tolerance = DEFAULT_TOL) -> tuple[float, float]:
    """Residuals of the two equations stating that v undoes u (and u undoes v)
    across half of a maximally entangled state."""
    n = pair.source.dim
    if pair.twisted.dim != n:
        raise ValueError("twisted algebra dimension mismatch")
    d = pair.resource_dim
    u3 = pair.u_map.matrix.reshape(n, n, d * d)
    v3 = pair.v_map.matrix.reshape(n, n, d * d)
    psi = _resource_state(d)
    eye = np.eye(n)
    back = np.einsum("sTb,Tav,vb->sa", v3, u3, psi, optimize=True)
    forth = np.einsum("sTb,Tav,vb->sa", u3, v3, psi, optimize=True)
    return residual(back - eye, tol), residual(forth - eye, tol)


def pull_through_residuals(upt: UptInstance) -> tuple[float, float, float, float]:
    """The four cup/cap pull-through identities tying the components to their
    duals: conjugate components slide through the self-duality of H_e."""
    d = upt.resource_dim
    cp = cup(d)
    ca = cp.conj().T
    worst = [0.0, 0.0, 0.0, 0.0]
    for g in upt.group.elements:
        pg = upt.rep(g)
        pgc = np.conj(pg)
        worst[0] = max(worst[0], residual(ca @ np.kron(pg, pgc) - ca))
        worst[1] = max(worst[1], residual(np.kron(pg, pgc) @ cp - cp))
        worst[2] = max(worst[2], residual(ca @ np.kron(pgc, pg) - ca))
        worst[3] = max(worst[3], residual(np.kron(pgc, pg) @ cp - cp))
    return tuple(worst)


def transform_channel(f: ChannelMap, psi: Cocycle2, tol: Tolerance = DEFAULT_TOL) -> ChannelMap:
    """Transport a covariant channel between untwisted graded algebras to the
    corresponding channel between the conj(psi)-twisted algebras.

    In graded bases the matrix is unchanged (and diagonal on matching labels);
    only the algebra structures move.  Refuses non-covariant input, where the
    construction is undefined.
    """
    src, tgt = f.source, f.target
    if not isinstance(src, GradedAlgebra) or not isinstance(tgt, GradedAlgebra):
        raise ValueError("transform_channel needs graded algebras on both sides")
    ok, cov_res = is_covariant(f.matrix, src, tgt, tol)
    if not ok:
        raise ValueError(f"channel is not covariant (residual {cov_res:.3e}); refusing to transform")
    return ChannelMap(src.twist(psi), tgt.twist(psi), f.matrix.copy())


def naturality_check(
    f: ChannelMap,
    pair_src: EntangledPair,
    pair_tgt: EntangledPair,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[float, float]:
    """Residuals of the two naturality squares relating (u, v) at the source
    and target of a covariant channel ``f``; ``f`` transports to ``f~``
    between the twisted algebras with the same matrix."""
    if pair_src.resource_dim != pair_tgt.resource_dim:
        raise ValueError("pairs use different resource dimensions")
    d = pair_src.resource_dim
    n1, n2 = pair_src.source.dim, pair_tgt.source.dim
    if f.matrix.shape != (n2, n1):
        raise ValueError("channel does not run between the pairs' algebras")
    fm = f.matrix
    u1 = pair_src.u_map.matrix.reshape(n1, n1, d * d)
    u2 = pair_tgt.u_map.matrix.reshape(n2, n2, d * d)
    v1 = pair_src.v_map.matrix.reshape(n1, n1, d * d)
    v2 = pair_tgt.v_map.matrix.reshape(n2, n2, d * d)
    # u_2 (f (x) id) = f~ u_1 and v_2 (f~ (x) id) = f v_1, flattened over (a, w)
    lhs_u = np.einsum("tbw,ba->taw", u2, fm, optimize=True)
    rhs_u = np.einsum("ts,saw->taw", fm, u1, optimize=True)
    res_u = residual((lhs_u - rhs_u).reshape(n2, -1), tol)
    lhs_v = np.einsum("tbw,ba->taw", v2, fm, optimize=True)
    rhs_v = np.einsum("ts,saw->taw", fm, v1, optimize=True)
    res_v = residual((lhs_v - rhs_v).reshape(n2, -1), tol)
    return res_u, res_v


def _pipeline(decode3: np.ndarray, channel: np.ndarray, encode3: np.ndarray, psi: np.ndarray) -> np.ndarray:
    """``D . (N (x) id) . (E (x) id) . (id (x) Psi)`` with the resource spread
    across the two trailing legs."""
    return np.einsum("ybv,ba,axw,wv->yx", decode3, channel, encode3, psi, optimize=True)


def coding_scheme_equations(
    f: ChannelMap,
    f_twisted: ChannelMap,
    pair_src: EntangledPair,
    pair_tgt: EntangledPair | None = None,
    tol: Tolerance = DEFAULT_TOL,
) -> tuple[float, float]:
    """Residuals of the two exact coding-scheme pipelines built from the pairs:
    (u at the source, v at the target) realises ``f`` through ``f_twisted``,
    and (v at the source, u at the target) realises ``f_twisted`` through ``f``.
    """
    if pair_tgt is None:
        pair_tgt = pair_src
    d = pair_src.resource_dim
    n1, n2 = pair_src.source.dim, pair_tgt.source.dim
    psi = _resource_state(d)
    u1 = pair_src.u_map.matrix.reshape(n1, n1, d * d)
    v1 = pair_src.v_map.matrix.reshape(n1, n1, d * d)
    u2 = pair_tgt.u_map.matrix.reshape(n2, n2, d * d)
    v2 = pair_tgt.v_map.matrix.reshape(n2, n2, d * d)
    got_plain = _pipeline(v2, f_twisted.matrix, u1, psi)
    res1 = residual(got_plain - f.matrix, tol)
    got_twisted = _pipeline(u2, f.matrix, v1, psi)
    res2 = residual(got_twisted - f_twisted.matrix, tol)
    return res1, res2


def equivalence_functor_check(
    f: ChannelMap, g: ChannelMap, psi: Cocycle2, tol: Tolerance = DEFAULT_TOL
) -> dict[str, float]:
    """Functoriality evidence: transforming a composite equals composing the
    transforms, and the identity transforms to the identity."""
    if g.source.dim != f.target.dim:
        raise ValueError("channels are not composable")
    gf = ChannelMap(f.source, g.target, g.matrix @ f.matrix)
    lhs = transform_channel(gf, psi)
    rhs_g = transform_channel(g, psi)
    rhs_f = transform_channel(f, psi)
    comp = residual(lhs.matrix - rhs_g.matrix @ rhs_f.matrix, tol)
    ident = ChannelMap(f.source, f.source, np.eye(f.source.dim, dtype=complex))
    ident_res = residual(transform_channel(ident, psi).matrix - ident.matrix, tol)
    return {"composition": comp, "identity": ident_res}


def pair_verification_report(pair: EntangledPair, tol: Tolerance = DEFAULT_TOL) -> dict:
    """Full verification of a pair: cohomomorphism equations for u and v,
    channel-hood, invertibility residuals and dimension preservation."""
    u, v = pair.u_map, pair.v_map
    rep_u = check_star_cohomomorphism(u.matrix, u.source, u.target, tol)
    rep_v = check_star_cohomomorphism(v.matrix, v.source, v.target, tol)
    inv1, inv2 = entanglement_invertibility(pair, tol)
    return {
        "u_cohom": rep_u,
        "v_cohom": rep_v,
        "u_channel": is_channel(u, tol),
        "v_channel": is_channel(v, tol),
        "invertibility": (inv1, inv2),
        "dim_preserved": pair.dims_match,
    }
