import logging
from dataclasses import replace
from fractions import Fraction
from typing import Dict, List, Sequence, Tuple, Union

from app.core.exceptions import DimensionMismatchError, SingularMatrixError, TransformError
from app.extension.spec import BasisTransform, ExtensionSpec, NIndex, ShiftParams, _offset
from app.linalg.matrix import RatMatrix, Vector
from app.linalg.rational import RationalLike, to_rational
from app.triangular.basis import build_T, tri_basis

logger = logging.getLogger(__name__)

# Unit upper-triangular slots of the n = 4 basis change that only moves
# generators by elements of higher width.
G1_SLOTS_4 = (("12", "24"), ("12", "14"), ("23", "14"), ("34", "13"), ("34", "14"))


def inner_action(n: int, mu: Sequence[Fraction]) -> RatMatrix:
    """Matrix of u -> [mu, u] on T(n) in row convention."""
    T = build_T(n)
    r = T.dim
    rows = []
    for x in range(r):
        unit = tuple(Fraction(1) if t == x else Fraction(0) for t in range(r))
        rows.append(T.bracket_vectors(tuple(mu), unit))
    return RatMatrix.from_rows(rows, r)


def apply_shift(spec: ExtensionSpec, p: ShiftParams) -> ExtensionSpec:
    """
    Redefine X^a -> X^a + mu^a

    A^a gains the matrix of [mu^a, .], B^a loses it, and
    sigma^{ab} += mu^b A^a + mu^a B^b + [mu^a, mu^b], so the result
    presents the same algebra in the shifted basis.

    Args:
        spec: Extension to shift
        p: Shift parameters, one length-r vector per X

    Returns:
        The shifted spec
    """
    if p.f != spec.f or any(len(row) != spec.r for row in p.mu):
        raise DimensionMismatchError(f"shift parameters do not match n={spec.n}, f={spec.f}")
    T = build_T(spec.n)
    # ad of each mu in the N basis
    actions = [inner_action(spec.n, mu) for mu in p.mu]
    A = tuple(a + m for a, m in zip(spec.A, actions))
    B = tuple(b - m for b, m in zip(spec.B, actions))
    # New [X^a, X^b]
    sigma = []
    for alpha in range(spec.f):
        row = []
        for beta in range(spec.f):
            mu_a, mu_b = p.mu[alpha], p.mu[beta]
            terms = (
                spec.sigma[alpha][beta],
                spec.A[alpha].vecmul(mu_b),
                spec.B[beta].vecmul(mu_a),
                T.bracket_vectors(mu_a, mu_b),
            )
            row.append(tuple(sum(vals, Fraction(0)) for vals in zip(*terms)))
        sigma.append(tuple(row))
    logger.debug(f"Applied shift to n={spec.n}, f={spec.f} spec")
    return replace(spec, A=A, B=B, sigma=tuple(sigma))


def shift_pivots(n: int) -> List[Tuple[int, Tuple[int, int], Fraction]]:
    """
    Positions of A that each shift component controls on its own

    For every basis index pq other than 1n, the action of mu_pq touches a set
    of A positions disjoint from those of every other component; the first
    one in row-major order is its pivot.

    Returns:
        List of (pq offset, (row, col) pivot, coefficient of mu_pq there)
    """
    basis = tri_basis(n)
    pivots = []
    for pq in range(basis.r - 1):
        unit = tuple(Fraction(1) if t == pq else Fraction(0) for t in range(basis.r))
        action = inner_action(n, unit)
        position = next(
            ((row, col) for row in range(basis.r) for col in range(basis.r) if action[row, col]),
            None,
        )
        if position is not None:
            pivots.append((pq, position, action[position]))
    return pivots


def _as_transform(G: Union[BasisTransform, RatMatrix]) -> BasisTransform:
    return G if isinstance(G, BasisTransform) else BasisTransform(G)


def check_G_preserves_tri(G: Union[BasisTransform, RatMatrix], n: int) -> bool:
    """
    True iff N -> G N leaves the products of T(n) unchanged

    Raises:
        SingularMatrixError: If G is singular
    """
    transform = _as_transform(G)
    T = build_T(n)
    if transform.G.rows != T.dim:
        raise DimensionMismatchError(f"G is {transform.G.rows}x{transform.G.rows}, T({n}) has dim {T.dim}")
    rows = [transform.G.row(x) for x in range(T.dim)]
    for x in range(T.dim):
        for y in range(T.dim):
            image = T.bracket_vectors(rows[x], rows[y])
            if transform.inverse.vecmul(image) != T.tensor[x][y]:
                return False
    return True


def apply_basis_transform(spec: ExtensionSpec, G: Union[BasisTransform, RatMatrix]) -> ExtensionSpec:
    """
    Change the nilradical basis N -> G N

    A^a -> G A^a G^-1, B^a -> G B^a G^-1, sigma^{ab} -> sigma^{ab} G^-1.

    Raises:
        TransformError: If G does not preserve T(n)
    """
    transform = _as_transform(G)
    if not check_G_preserves_tri(transform, spec.n):
        raise TransformError("G does not preserve the products of T(n)")
    g, g_inv = transform.G, transform.inverse
    A = tuple(g @ a @ g_inv for a in spec.A)
    B = tuple(g @ b @ g_inv for b in spec.B)
    sigma = tuple(tuple(g_inv.vecmul(vec) for vec in row) for row in spec.sigma)
    return replace(spec, A=A, B=B, sigma=sigma)


def recombine_X(spec: ExtensionSpec, M: RatMatrix) -> ExtensionSpec:
    """
    Replace X^a by sum_b M_ab X^b

    Raises:
        SingularMatrixError: If M is singular
    """
    if (M.rows, M.cols) != (spec.f, spec.f):
        raise DimensionMismatchError(f"M must be {spec.f}x{spec.f}")
    M.inverse()
    f, r = spec.f, spec.r

    def combine(mats: Tuple[RatMatrix, ...]) -> Tuple[RatMatrix, ...]:
        out = []
        for alpha in range(f):
            total = RatMatrix.zeros(r)
            for beta in range(f):
                if M[alpha, beta]:
                    total = total + mats[beta].scale(M[alpha, beta])
            out.append(total)
        return tuple(out)

    sigma = []
    for alpha in range(f):
        row = []
        for beta in range(f):
            vec = [Fraction(0)] * r
            for gamma in range(f):
                for delta in range(f):
                    w = M[alpha, gamma] * M[beta, delta]
                    if w:
                        for t, v in enumerate(spec.sigma[gamma][delta]):
                            vec[t] += w * v
            row.append(tuple(vec))
        sigma.append(tuple(row))
    return replace(spec, A=combine(spec.A), B=combine(spec.B), sigma=tuple(sigma))


def g1_matrix(n: int, slots: Dict[Tuple[NIndex, NIndex], RationalLike]) -> RatMatrix:
    """Identity plus the given off-diagonal entries."""
    basis = tri_basis(n)
    entries = [(x, x, 1) for x in range(basis.r)]
    for (row, col), value in slots.items():
        entries.append((_offset(basis, row), _offset(basis, col), value))
    return RatMatrix.from_entries(basis.r, entries)


def g2_matrix(n: int, generators: Sequence[RationalLike]) -> RatMatrix:
    """
    Diagonal basis change scaling N_j(j+1) by g_j and N_ik by the product
    of g_i..g_(k-1)

    Raises:
        SingularMatrixError: If a generator scale is zero
    """
    if len(generators) != n - 1:
        raise DimensionMismatchError(f"{len(generators)} scales for n-1={n - 1} generators")
    g = [to_rational(v) for v in generators]
    if any(v == 0 for v in g):
        raise SingularMatrixError("generator scales must be nonzero")
    basis = tri_basis(n)
    diagonal = []
    for t in basis.order:
        value = Fraction(1)
        for j in range(t.i, t.k):
            value *= g[j - 1]
        diagonal.append(value)
    return RatMatrix.diagonal(diagonal)


def apply_chain(spec: ExtensionSpec, operations: List[Dict]) -> ExtensionSpec:
    """
    Apply transformations in sequence

    Args:
        spec: Starting spec
        operations: List of {"type": "shift"|"basis"|"recombine", "params": ...}
            with ShiftParams, a BasisTransform/RatMatrix, or an f x f RatMatrix

    Returns:
        The transformed spec
    """
    current = spec
    for op in operations:
        if not op or not isinstance(op, dict):
            logger.warning(f"Skipping invalid operation: {op}")
            continue

        op_type = op.get("type")
        if not op_type:
            logger.warning(f"Skipping operation with missing type: {op}")
            continue

        params = op.get("params")
        if params is None:
            logger.warning(f"Skipping {op_type}: missing params")
            continue

        if op_type == "shift":
            current = apply_shift(current, params)
        elif op_type == "basis":
            current = apply_basis_transform(current, params)
        elif op_type == "recombine":
            current = recombine_X(current, params)
        else:
            raise ValueError(f"Unsupported operation: {op_type}")
    return current


def invert_chain(operations: List[Dict]) -> List[Dict]:
    """Chain that undoes the given one exactly."""
    inverse = []
    for op in reversed(operations):
        op_type, params = op["type"], op["params"]
        if op_type == "shift":
            inverse.append({"type": "shift", "params": params.negated()})
        elif op_type == "basis":
            inverse.append({"type": "basis", "params": _as_transform(params).inverted()})
        elif op_type == "recombine":
            inverse.append({"type": "recombine", "params": params.inverse()})
        else:
            raise ValueError(f"Unsupported operation: {op_type}")
    return inverse
