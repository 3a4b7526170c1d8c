from .errors import OrderOutOfRangeError, PreconditionError
from .framework import Configuration, rigidity_matrix
from .linalg import left_nullspace, min_norm_solve, nullspace
from .parameters import Tolerances
from math import comb
import numpy as np

MAX_LEVEL = 20


class FlexSequence():
    """Formal derivatives ``X^(1), ..., X^(N)`` of a motion at ``t = 0``.

    Args:

        base (:class:`Configuration`):
            The configuration ``X^(0)`` the flex starts from.

        derivatives (list of array-like):
            The free-coordinate vectors ``X^(1)`` to ``X^(N)``.

        degeneracy (int, optional):
            The number `m` of leading derivatives that vanish identically.
            Counted from `derivatives` if not given.
    """

    def __init__(self, base, derivatives, degeneracy=None):

        if not isinstance(base, Configuration):
            base = Configuration(base)

        self.base = base
        self.derivatives = [
            np.array(x, dtype=np.float64).reshape(-1)
            for x in derivatives
        ]
        for x in self.derivatives:
            x.flags.writeable = False
            assert len(x) == len(base), \
                "Derivatives and base configuration disagree in length"

        leading_zeros = 0
        for x in self.derivatives:
            if np.any(x != 0):
                break
            leading_zeros += 1

        if degeneracy is None:
            degeneracy = leading_zeros

        assert degeneracy <= leading_zeros, \
            f"Derivatives 1..{degeneracy} have to be zero"
        assert degeneracy == leading_zeros or degeneracy == self.order, \
            f"Derivative {degeneracy + 1} has to be the leading nonzero one"

        self.degeneracy = degeneracy

    @property
    def order(self):
        return len(self.derivatives)

    def derivative(self, a):
        """``X^(a)``, where ``X^(0)`` is the base configuration."""

        if a == 0:
            return self.base.values
        return self.derivatives[a - 1]

    def extended(self, derivative):

        return FlexSequence(self.base, self.derivatives + [derivative])

    def scaled(self, c):
        """The flex of the reparameterized motion ``X(c t)``."""

        return FlexSequence(
            self.base,
            [c**a * x for a, x in enumerate(self.derivatives, start=1)])


class FlexExtension():
    """The affine solution set of one level of the flex equations.

    Any ``particular + H @ h`` with `H` the stacked `homogeneous_basis`
    solves level `level` when `feasible` is set.
    """

    def __init__(
            self,
            level,
            particular,
            homogeneous_basis,
            feasible,
            obstruction,
            residual):

        self.level = level
        self.particular = particular
        self.homogeneous_basis = homogeneous_basis
        self.feasible = feasible
        self.obstruction = obstruction
        self.residual = residual


def scale_of(X0):
    """Reference scale ``1 + |X0|^2`` of all feasibility tolerances."""

    if isinstance(X0, Configuration):
        X0 = X0.values
    X0 = np.asarray(X0, dtype=np.float64)
    return 1.0 + float(X0 @ X0)


def edge_derivatives(framework, X0, flex, up_to):
    """The per-edge differences ``x_u^(a) - x_v^(a)`` for ``a = 0..up_to``.

    Returns:

        List of arrays of shape `(E, d)`.
    """

    deltas = [framework.edge_differences(framework.embed(X0))]
    for a in range(1, up_to + 1):
        deltas.append(framework.edge_differences(
            framework.embed_derivative(flex.derivative(a))))
    return deltas


def constraint_coefficient(framework, X0, flex, k):
    """The `k`-th derivative at ``t = 0`` of ``D_e(t)`` along the formal
    motion, i.e. ``sum_a binom(k, a) (x_u^(a) - x_v^(a))^T (x_u^(k-a) -
    x_v^(k-a))`` for every edge.

    Args:

        framework (:class:`Framework`):
            The framework.

        X0 (:class:`Configuration`):
            The base configuration.

        flex (:class:`FlexSequence`):
            Derivatives up to at least order `k`.

        k (int):
            The level, ``1 <= k <= min(flex.order, 20)``.

    Returns:

        Array of shape `(E,)`.
    """

    if not 1 <= k <= min(flex.order, MAX_LEVEL):
        raise OrderOutOfRangeError(
            f"level {k} outside 1..{min(flex.order, MAX_LEVEL)}")

    deltas = edge_derivatives(framework, X0, flex, k)

    return sum(
        comb(k, a) * np.einsum('ij,ij->i', deltas[a], deltas[k - a])
        for a in range(k + 1))


def level_rhs(framework, X0, flex, k):
    """The part ``b_k`` of level `k` that does not involve ``X^(k)``, so
    that level `k` reads ``R X^(k) + b_k = 0``."""

    if not 2 <= k <= MAX_LEVEL or flex.order < k - 1:
        raise OrderOutOfRangeError(
            f"level {k} needs a flex of order {k - 1}, got {flex.order}")

    deltas = edge_derivatives(framework, X0, flex, k - 1)

    return sum(
        comb(k, a) * np.einsum('ij,ij->i', deltas[a], deltas[k - a])
        for a in range(1, k))


def three_n_coefficient(framework, X0, flex, n):
    """The level-``3n`` coefficient of a flex with degeneracy ``n - 1``,
    evaluated group by group: the first-order term ``2 d0.d3n``, the cross
    term ``2 binom(3n, n) dn.d2n`` and the extra terms
    ``binom(3n, n+k) d(n+k).d(2n-k)`` for ``k = 1..n-1``.

    Returns:

        The three groups as arrays of shape `(E,)`.
    """

    assert flex.order >= 3 * n, "Flex is too short"
    assert flex.degeneracy >= n - 1, f"Flex needs degeneracy {n - 1}"

    deltas = edge_derivatives(framework, X0, flex, 3 * n)

    def dot(a, b):
        return np.einsum('ij,ij->i', deltas[a], deltas[b])

    first_order = 2 * dot(0, 3 * n)
    cross = 2 * comb(3 * n, n) * dot(n, 2 * n)
    extra = sum(
        (comb(3 * n, n + k) * dot(n + k, 2 * n - k) for k in range(1, n)),
        np.zeros(framework.num_edges))

    return first_order, cross, extra


def first_order_flex_basis(framework, X0, tolerances=None):
    """Orthonormal basis of the first-order flexes (the nullspace of the
    rigidity matrix). An empty list means first-order rigid."""

    if tolerances is None:
        tolerances = Tolerances()

    R = rigidity_matrix(framework, X0)
    return list(nullspace(R, tolerances.rank_rtol).T)


def stress_basis(framework, X0, tolerances=None):
    """Orthonormal basis of the self-stresses ``w`` with ``w^T R = 0``.

    Bars between two pinned vertices have zero rows and carry no stress.
    """

    if tolerances is None:
        tolerances = Tolerances()

    R = rigidity_matrix(framework, X0)
    active = ~framework.pinned[framework.edges].all(axis=1)

    W = np.zeros((framework.num_edges, 0))
    if active.any():
        W_active = left_nullspace(R[active], tolerances.rank_rtol)
        W = np.zeros((framework.num_edges, W_active.shape[1]))
        W[active] = W_active

    return list(W.T)


def is_solvable(stresses, b, scale, tolerances):
    """Whether ``R x = -b`` is solvable, judged by the stress projections.

    Returns:

        The verdict and the obstruction ``|W^T b|``.
    """

    b = np.asarray(b, dtype=np.float64)
    norm_b = float(np.linalg.norm(b))
    if norm_b == 0.0 or len(stresses) == 0:
        return True, 0.0

    obstruction = float(np.linalg.norm(np.stack(stresses) @ b))
    # round-off floor for right hand sides that cancel to ~0
    bound = tolerances.feasibility * max(norm_b, 1e-3 * scale)

    return obstruction <= bound, obstruction


def extend_flex(framework, X0, flex, tolerances=None):
    """Solve the next level ``k = flex.order + 1`` of the flex equations.

    Args:

        framework (:class:`Framework`):
            The framework.

        X0 (:class:`Configuration`):
            The base configuration.

        flex (:class:`FlexSequence`):
            A flex satisfying levels ``1..k-1``.

        tolerances (:class:`Tolerances`, optional):
            Rank and feasibility tolerances.

    Returns:

        A :class:`FlexExtension` with the minimum-norm particular solution of
        ``R X^(k) = -b_k`` and the nullspace of `R`.
    """

    if tolerances is None:
        tolerances = Tolerances()

    k = flex.order + 1
    scale = scale_of(X0)

    if flex.order > 0:
        _, residuals = verify_flex(framework, X0, flex, flex.order, tolerances)
        if max(residuals) > tolerances.extension_residual * scale:
            raise PreconditionError(
                f"flex violates lower levels (residual {max(residuals):.3e})")

    R = rigidity_matrix(framework, X0)
    H = nullspace(R, tolerances.rank_rtol)

    if k == 1:
        b = np.zeros(framework.num_edges)
    else:
        b = level_rhs(framework, X0, flex, k)

    stresses = stress_basis(framework, X0, tolerances)
    feasible, obstruction = is_solvable(stresses, b, scale, tolerances)

    particular, residual = min_norm_solve(R, -b, tolerances.rank_rtol)

    return FlexExtension(
        k,
        particular,
        list(H.T),
        feasible,
        obstruction,
        residual)


def verify_flex(framework, X0, flex, n, tolerances=None):
    """Check that `flex` solves the flex equations up to level `n`.

    Returns:

        Whether all levels hold to ``1e-9 * (1 + |X0|^2)``, and the maximal
        absolute constraint coefficient of every level ``1..n``.
    """

    if tolerances is None:
        tolerances = Tolerances()

    assert flex.order >= n, f"Flex of order {flex.order} can't verify {n}"

    residuals = [
        float(np.max(np.abs(
            constraint_coefficient(framework, X0, flex, k)), initial=0.0))
        for k in range(1, n + 1)
    ]
    bound = tolerances.verify * scale_of(X0)

    return all(r <= bound for r in residuals), residuals
