"""2x2 block decomposition of an operator relative to ``H = M ⊕ M⊥`` and
``K = N ⊕ N⊥``.

Blocks are kept in subspace coordinates: for stored orthonormal bases
``U_M, U_M⊥`` of the domain and ``V_N, V_N⊥`` of the codomain,

    A = V_N* T U_M      B = V_N* T U_M⊥
    C = V_N⊥* T U_M     D = V_N⊥* T U_M⊥
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .numerics import adjoint, as_mat
from .subspaces import Subspace, complement

__all__ = ["BlockOp", "decompose", "reassemble", "embed", "assemble"]


@dataclass(frozen=True, eq=False)
class BlockOp:
    m: Subspace
    mperp: Subspace
    n: Subspace
    nperp: Subspace
    a: np.ndarray
    b: np.ndarray
    c: np.ndarray
    d: np.ndarray

    @property
    def ambient_dom(self):
        return self.m.ambient

    @property
    def ambient_cod(self):
        return self.n.ambient

    @property
    def dom_basis(self):
        """``[U_M U_M⊥]``, a unitary matrix."""
        return np.hstack([self.m.basis, self.mperp.basis])

    @property
    def cod_basis(self):
        return np.hstack([self.n.basis, self.nperp.basis])

    def with_blocks(self, a=None, b=None, c=None, d=None):
        """Same geometry, some blocks replaced."""
        return BlockOp(
            self.m, self.mperp, self.n, self.nperp,
            self.a if a is None else a,
            self.b if b is None else b,
            self.c if c is None else c,
            self.d if d is None else d,
        )

    def adjoint(self):
        """Block form of ``T*`` relative to ``(N, M)``: blocks ``(A*, C*, B*, D*)``."""
        return BlockOp(
            self.n, self.nperp, self.m, self.mperp,
            adjoint(self.a), adjoint(self.c), adjoint(self.b), adjoint(self.d),
        )


def decompose(t, m, n, mperp=None, nperp=None):
    """Split ``t`` (``n.ambient x m.ambient``) into blocks relative to ``(M, N)``.

    Complement bases are computed unless supplied; the choice is carried in
    the returned BlockOp so later results can be re-embedded consistently.
    """
    t = as_mat(t, "T")
    if t.shape[1] != m.ambient:
        raise InvalidInput(f"T has {t.shape[1]} columns but M lives in dimension {m.ambient}")
    if t.shape[0] != n.ambient:
        raise InvalidInput(f"T has {t.shape[0]} rows but N lives in dimension {n.ambient}")
    mperp = complement(m) if mperp is None else mperp
    nperp = complement(n) if nperp is None else nperp
    if mperp.ambient != m.ambient or mperp.dim != m.ambient - m.dim:
        raise InvalidInput("supplied M-complement has the wrong dimensions")
    if nperp.ambient != n.ambient or nperp.dim != n.ambient - n.dim:
        raise InvalidInput("supplied N-complement has the wrong dimensions")
    vn, vnp = adjoint(n.basis), adjoint(nperp.basis)
    tm, tmp = t @ m.basis, t @ mperp.basis
    return BlockOp(m, mperp, n, nperp, vn @ tm, vn @ tmp, vnp @ tm, vnp @ tmp)


def assemble(a, b, c, d):
    return np.block([[a, b], [c, d]])


def embed(blk, block_matrix):
    """Map a matrix given in ``(M ⊕ M⊥) -> (N ⊕ N⊥)`` coordinates to ambient form."""
    return blk.cod_basis @ block_matrix @ adjoint(blk.dom_basis)


def reassemble(blk):
    return embed(blk, assemble(blk.a, blk.b, blk.c, blk.d))
