"""Pauli-basis algebra for chains of 2x2 complex matrices.

Any 2x2 complex matrix decomposes as M = sum_p c^p sigma_p over the Pauli
basis (sigma_0 = identity), with c^p = trace(M sigma_p) / 2.  Because
sigma_q sigma_r is always a fourth-power-of-i multiple of a single basis
element, the product of two matrices maps to a bilinear combination of their
coefficient vectors.  Index bookkeeping uses

    phi(a, b) = (a + b * (-1)**(a + b - 1)) mod 4      (which index survives)
    epsilon(a, b, c) = (a - b)(b - c)(c - a) / 2       (power of i picked up)

so the coefficients of a product J*K are

    (J*K)^p = sum_q J^q * K^phi(p, q) * i**epsilon(p, q, phi(p, q)).

Long chains are reduced with this composition law while an explicit
log-magnitude scale is carried alongside the coefficients, so products whose
entries would span hundreds of orders of magnitude stay representable.

A "Pauli vector" throughout is a length-4 complex array of coefficients
(c^0, c^1, c^2, c^3); batched arguments stack them along leading axes.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product as _iterproduct

import numpy as np

from .errors import ChainTooLong, NonFiniteCoefficient

__all__ = [
    "PAULI_MATRICES",
    "ScaledPauliVector",
    "compose",
    "epsilon",
    "explicit_product",
    "fold_chain",
    "fold_suffixes",
    "from_matrix",
    "identity",
    "phi",
    "to_matrix",
]

PAULI_MATRICES = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)

# i**n for integer n, exact (complex pow would round).
_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)


def phi(a: int, b: int) -> int:
    """Surviving basis index: sigma_b pairs with sigma_phi(a,b) to give sigma_a."""
    # Only the parity of the exponent matters; reducing it mod 2 keeps the
    # arithmetic in integers (a negative integer power would give a float).
    return (a + b * (-1) ** ((a + b - 1) % 2)) % 4


def epsilon(a: int, b: int, c: int) -> int:
    """Half the cyclic difference product (a-b)(b-c)(c-a); the power of i."""
    # For integer indices at least two share parity, so the product is even.
    return (a - b) * (b - c) * (c - a) // 2


def _build_tables() -> tuple[np.ndarray, np.ndarray]:
    ph = np.empty((4, 4), dtype=np.intp)
    ip = np.empty((4, 4), dtype=complex)
    for p in range(4):
        for q in range(4):
            r = phi(p, q)
            ph[p, q] = r
            ip[p, q] = _I_POWERS[epsilon(p, q, r) % 4]
    return ph, ip


_PHI_TABLE, _IPOW_TABLE = _build_tables()


def identity() -> np.ndarray:
    """Pauli vector of the identity matrix."""
    return np.array([1.0, 0.0, 0.0, 0.0], dtype=complex)


def from_matrix(m: np.ndarray) -> np.ndarray:
    """Pauli coefficients of a 2x2 matrix (batched over leading axes)."""
    m = np.asarray(m, dtype=complex)
    c0 = (m[..., 0, 0] + m[..., 1, 1]) / 2
    c1 = (m[..., 0, 1] + m[..., 1, 0]) / 2
    c2 = (m[..., 0, 1] - m[..., 1, 0]) * 0.5j
    c3 = (m[..., 0, 0] - m[..., 1, 1]) / 2
    return np.stack([c0, c1, c2, c3], axis=-1)


def to_matrix(c: np.ndarray) -> np.ndarray:
    """2x2 matrix for a Pauli vector (batched over leading axes)."""
    c = np.asarray(c, dtype=complex)
    m = np.empty(c.shape[:-1] + (2, 2), dtype=complex)
    m[..., 0, 0] = c[..., 0] + c[..., 3]
    m[..., 0, 1] = c[..., 1] - 1j * c[..., 2]
    m[..., 1, 0] = c[..., 1] + 1j * c[..., 2]
    m[..., 1, 1] = c[..., 0] - c[..., 3]
    return m


def compose(j: np.ndarray, k: np.ndarray) -> np.ndarray:
    """Pauli vector of the ordered product J*K.

    Both arguments are Pauli vectors (leading axes broadcast).  Sixteen
    complex multiplies per product; no matrices are formed.
    """
    j = np.asarray(j, dtype=complex)
    k = np.asarray(k, dtype=complex)
    # k[..., PHI] gathers, for each output index p, the partner coefficient
    # of every q; the i-power table supplies the phase.
    return np.sum(j[..., None, :] * k[..., _PHI_TABLE] * _IPOW_TABLE, axis=-1)


@dataclass(frozen=True)
class ScaledPauliVector:
    """A Pauli vector with its magnitude factored into exp(log_scale).

    The represented matrix is exp(log_scale) * to_matrix(vector); vector's
    largest coefficient magnitude is normalized to 1.
    """

    vector: np.ndarray
    log_scale: float

    def matrix(self) -> np.ndarray:
        """Collapse to a plain 2x2 matrix.  Overflows if exp(log_scale) does."""
        return np.exp(self.log_scale) * to_matrix(self.vector)

    def coefficient(self, p: int) -> complex:
        """Plain (unscaled-out) coefficient c^p.  Overflows like matrix()."""
        return complex(self.vector[p] * np.exp(self.log_scale))


def _normalize(c: np.ndarray, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # Divide each vector by its max coefficient magnitude and log the factor.
    # Zero vectors pass through unchanged (scale 1) so no NaN appears.
    mag = np.max(np.abs(c), axis=-1)
    div = np.where(mag > 0.0, mag, 1.0)
    return c / div[..., None], s + np.log(div)


def _as_chain_array(chain) -> np.ndarray:
    c = np.asarray(chain, dtype=complex)
    if c.ndim == 1 and c.size == 0:
        return c.reshape(0, 4)
    if c.ndim < 2 or c.shape[-1] != 4:
        raise ValueError("chain must be a sequence of length-4 Pauli vectors")
    return c


def _check_finite(c: np.ndarray) -> None:
    if not np.isfinite(c).all():
        raise NonFiniteCoefficient("chain contains non-finite coefficients")


def _fold_tree(c: np.ndarray, s: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Ordered product along axis -2 by pairwise halving; returns (vec, log)."""
    c, s = _normalize(c, s)
    while c.shape[-2] > 1:
        n = c.shape[-2]
        half = n // 2
        left = c[..., 0 : 2 * half : 2, :]
        right = c[..., 1 : 2 * half : 2, :]
        merged = compose(left, right)
        ms = s[..., 0 : 2 * half : 2] + s[..., 1 : 2 * half : 2]
        if n % 2:
            merged = np.concatenate([merged, c[..., n - 1 : n, :]], axis=-2)
            ms = np.concatenate([ms, s[..., n - 1 : n]], axis=-1)
        # Renormalizing every level keeps both operands at order 1, so the
        # sixteen-term sums can never overflow no matter the chain depth.
        c, s = _normalize(merged, ms)
    return c[..., 0, :], s[..., 0]


def fold_chain(chain, log_scales=None) -> ScaledPauliVector:
    """Ordered product chain[0] * chain[1] * ... with magnitude tracking.

    Parameters
    ----------
    chain : sequence of Pauli vectors, shape (n, 4)
        Factors in multiplication order.  Empty input yields the identity.
    log_scales : array (n,), optional
        Per-element log-magnitude offsets: element i represents
        exp(log_scales[i]) * chain[i].

    Returns
    -------
    ScaledPauliVector
        Product with max coefficient magnitude normalized to 1 and the
        total magnitude in log_scale.  Linear cost: n - 1 compositions,
        organized as an order-preserving pairwise tree so the work is done
        in whole-array numpy passes.
    """
    c = _as_chain_array(chain)
    _check_finite(c)
    if c.shape[0] == 0:
        return ScaledPauliVector(identity(), 0.0)
    if log_scales is None:
        s = np.zeros(c.shape[:-1])
    else:
        s = np.asarray(log_scales, dtype=float).copy()
    vec, log = _fold_tree(c, s)
    if not (np.isfinite(vec).all() and np.isfinite(log)):
        raise NonFiniteCoefficient("product is not finite despite rescaling")
    return ScaledPauliVector(vec, float(log))


def fold_batch(c: np.ndarray, s: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """fold_chain for stacked chains: reduce (..., n, 4) along axis -2.

    Returns (vectors (..., 4), log_scales (...,)).  Vectorized building
    block behind spectrum evaluation.  A batch of one is bit-identical to
    fold_chain; rows inside larger batches can differ in the last unit of
    the mantissa because numpy's reductions round differently with stride.
    """
    c = np.asarray(c, dtype=complex)
    _check_finite(c)
    if s is None:
        s = np.zeros(c.shape[:-1])
    vec, log = _fold_tree(c, np.asarray(s, dtype=float).copy())
    if not (np.isfinite(vec).all() and np.isfinite(log).all()):
        raise NonFiniteCoefficient("product is not finite despite rescaling")
    return vec, log


def fold_suffixes(chain, log_scales=None) -> tuple[np.ndarray, np.ndarray]:
    """All suffix products of a chain in one sweep.

    Entry i of the result is the ordered product chain[i] * ... * chain[n-1];
    entry n is the identity.  Computed by index doubling (log2(n) vectorized
    passes), so a 1e5-element chain needs ~17 whole-array steps instead of
    1e5 scalar compositions.

    Returns
    -------
    (vectors (n+1, 4), log_scales (n+1,))
    """
    c = _as_chain_array(chain)
    _check_finite(c)
    n = c.shape[0]
    if log_scales is None:
        s = np.zeros(n)
    else:
        s = np.asarray(log_scales, dtype=float).copy()
    c, s = _normalize(c.copy(), s)
    span = 1  # each entry currently holds the product of `span` elements
    while span < n:
        head = n - span
        merged = compose(c[:head], c[span:])
        ms = s[:head] + s[span:]
        c = np.concatenate([merged, c[head:]], axis=0)
        s = np.concatenate([ms, s[head:]])
        c, s = _normalize(c, s)
        span *= 2
    out_c = np.concatenate([c, identity()[None, :]], axis=0)
    out_s = np.concatenate([s, [0.0]])
    if not (np.isfinite(out_c).all() and np.isfinite(out_s).all()):
        raise NonFiniteCoefficient("suffix products are not finite despite rescaling")
    return out_c, out_s


def explicit_product(chain, max_len: int = 8) -> np.ndarray:
    """Product of a short chain by the literal multi-index sum.

    Expands all 4**(m-1) index paths instead of composing pairwise, which
    makes it an independent cross-check of fold_chain for small m.  Raises
    ChainTooLong beyond max_len factors (cost grows as 4**(m-1)).
    """
    c = _as_chain_array(chain)
    _check_finite(c)
    m = c.shape[0]
    if m > max_len:
        raise ChainTooLong(f"explicit product of {m} factors exceeds max_len={max_len}")
    if m == 0:
        return identity()
    out = np.zeros(4, dtype=complex)
    for p in range(4):
        total = 0.0 + 0.0j
        for qs in _iterproduct(range(4), repeat=m - 1):
            path = (0,) + qs + (p,)  # q_0 = 0 seeds the recursion
            term = 1.0 + 0.0j
            for fac in range(m):
                lo, hi = path[fac], path[fac + 1]
                r = phi(hi, lo)
                term *= c[fac, r] * _I_POWERS[epsilon(hi, lo, r) % 4]
            total += term
        out[p] = total
    return out
