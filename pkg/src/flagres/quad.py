"""Grothendieck residues by trapezoid quadrature on small tori.

For a torus ``|z_k - c_k| = r_k`` the normalized integral

    (2 pi i)^{-n} \\oint h / (f_1 ... f_n) dz_1 ... dz_n

becomes, after ``z_k = c_k + r_k e^{i theta_k}``, the grid average of
``h / prod(f) * prod(z_k - c_k)``.  The product trapezoid rule is exact for
trigonometric polynomials and converges geometrically for integrands that
are analytic on a neighbourhood of the torus.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from .expr import Expr

DENOMINATOR_GUARD = 1e-8
SNAP_TOLERANCE = 1e-6
DEFAULT_RADIUS = 0.5
MAX_SHRINKS = 6
# upper bound on grid points evaluated per vectorized chunk
CHUNK_POINTS = 1 << 18


class QuadratureError(Exception):
    pass


class DenominatorVanishes(QuadratureError):
    pass


class NonIntegerResidue(QuadratureError):
    pass


@dataclass(frozen=True)
class TorusSpec:
    center: Tuple[complex, ...]
    radii: Tuple[float, ...]
    nodes_per_circle: int = 8

    def __post_init__(self):
        object.__setattr__(self, "center", tuple(complex(c) for c in self.center))
        object.__setattr__(self, "radii", tuple(float(r) for r in self.radii))
        if len(self.center) != len(self.radii):
            raise ValueError("center and radii have different lengths")
        if any(r <= 0 for r in self.radii):
            raise ValueError("radii must be positive")
        n = self.nodes_per_circle
        if n < 4 or n & (n - 1):
            raise ValueError("nodes_per_circle must be a power of two >= 4")

    @property
    def dim(self) -> int:
        return len(self.center)

    def with_nodes(self, nodes: int) -> "TorusSpec":
        return TorusSpec(self.center, self.radii, nodes)

    def scaled(self, factor: float) -> "TorusSpec":
        return TorusSpec(self.center, tuple(r * factor for r in self.radii), self.nodes_per_circle)


def snap(value: complex, tol: float = SNAP_TOLERANCE) -> Optional[int]:
    k = round(value.real)
    if abs(value - k) < tol and abs(value.imag) < tol:
        return int(k)
    return None


@dataclass
class ResidueEstimate:
    value: complex
    node_history: List[Tuple[int, complex]] = field(default_factory=list)
    converged: bool = False
    snapped_integer: Optional[int] = None
    radii: Tuple[float, ...] = ()
    # +1 or -1: orientation of the coordinate torus relative to the residue cycle
    orientation: int = 1

    def __post_init__(self):
        self.value = complex(self.value)
        if self.snapped_integer is None:
            self.snapped_integer = snap(self.value)

    def scaled(self, factor) -> "ResidueEstimate":
        f = complex(factor)
        return ResidueEstimate(
            self.value * f,
            [(n, v * f) for n, v in self.node_history],
            self.converged,
            None,
            self.radii,
            self.orientation,
        )

    def to_dict(self) -> dict:
        return {
            "value": [float(f"{self.value.real:.15g}"), float(f"{self.value.imag:.15g}")],
            "snapped_integer": self.snapped_integer,
            "converged": self.converged,
            "radii": [float(f"{r:.15g}") for r in self.radii],
            "orientation": self.orientation,
            "node_history": [
                [n, [float(f"{v.real:.15g}"), float(f"{v.imag:.15g}")]] for n, v in self.node_history
            ],
        }


# A residue problem: numerator and denominators evaluated on a grid.
# ``evaluate(values)`` takes per-variable arrays and returns (numerator, [denominators]).
@dataclass
class ResidueProblem:
    evaluate: Callable[[Sequence[np.ndarray]], Tuple[np.ndarray, List[np.ndarray]]]
    torus: TorusSpec
    guard: float = DENOMINATOR_GUARD


def _grid_chunks(torus: TorusSpec):
    n, N = torus.dim, torus.nodes_per_circle
    circles = [
        c + r * np.exp(2j * np.pi * np.arange(N) / N) for c, r in zip(torus.center, torus.radii)
    ]
    lead = 0
    while lead < n and N ** (n - lead) > CHUNK_POINTS:
        lead += 1
    tail = circles[lead:]
    if tail:
        mesh = np.meshgrid(*tail, indexing="ij")
        mesh = [m.ravel() for m in mesh]
        size = mesh[0].size
    else:
        mesh, size = [], 1
    for idx in itertools.product(range(N), repeat=lead):
        head = [np.full(size, circles[k][i]) for k, i in enumerate(idx)]
        yield head + mesh


def torus_average(problem: ResidueProblem) -> complex:
    """Normalized residue integral over the torus at its node count."""
    torus = problem.torus
    center = torus.center
    partial = []
    count = 0
    for values in _grid_chunks(torus):
        num, dens = problem.evaluate(values)
        w = np.ones_like(values[0])
        for v, c in zip(values, center):
            w = w * (v - c)
        prod = np.ones_like(values[0])
        for d in dens:
            if np.min(np.abs(d)) <= problem.guard:
                raise DenominatorVanishes("a denominator vanishes near the torus")
            prod = prod * d
        with np.errstate(all="ignore"):
            vals = num * w / prod
        if not np.all(np.isfinite(vals)):
            raise ex.OverflowEvaluation("non-finite integrand on the torus")
        partial.append(np.sum(vals))
        count += vals.size
    return complex(np.sum(np.array(partial)) / count)


def expr_problem(numerator: Expr, denominators: Sequence[Expr], variables: Sequence[str], torus: TorusSpec) -> ResidueProblem:
    evaluator = ex.Evaluator([numerator, *denominators], variables)

    def evaluate(values):
        out = evaluator(values)
        return out[0], out[1:]

    return ResidueProblem(evaluate, torus)


def _infer_variables(denominators, variables):
    if variables is None:
        names = set()
        for d in denominators:
            names |= d.free_vars
        variables = sorted(names)
    variables = tuple(variables)
    if len(variables) != len(denominators):
        raise ValueError(f"{len(denominators)} denominators but {len(variables)} variables")
    return variables


def grothendieck_residue(numerator: Expr, denominators: Sequence[Expr], torus: TorusSpec, variables: Optional[Sequence[str]] = None) -> complex:
    """Trapezoid estimate of the Grothendieck residue at the torus' node count."""
    variables = _infer_variables(denominators, variables)
    if torus.dim != len(variables):
        raise ValueError("torus dimension does not match the number of variables")
    return torus_average(expr_problem(numerator, denominators, variables, torus))


def refine_until_stable(problem: ResidueProblem, rel_tol: float = 1e-10, max_nodes: int = 256, start_nodes: int = 8) -> ResidueEstimate:
    """Double the nodes per circle until two successive estimates agree."""
    history: List[Tuple[int, complex]] = []
    nodes = start_nodes
    prev = None
    converged = False
    while nodes <= max_nodes:
        problem.torus = problem.torus.with_nodes(nodes)
        v = torus_average(problem)
        history.append((nodes, v))
        if prev is not None and abs(v - prev) <= max(rel_tol, rel_tol * abs(v)):
            converged = True
            break
        prev = v
        nodes *= 2
    return ResidueEstimate(history[-1][1], history, converged, None, problem.torus.radii)


def _with_shrinking(build: Callable[[TorusSpec], ResidueProblem], torus: TorusSpec, rel_tol, max_nodes, shrinks=MAX_SHRINKS):
    last_err = None
    for _ in range(shrinks + 1):
        try:
            return refine_until_stable(build(torus), rel_tol, max_nodes)
        except (DenominatorVanishes, ex.BranchCutError, ex.PoleError) as err:
            last_err = err
            torus = torus.scaled(0.5)
    raise last_err


def _default_torus(point, radii, n) -> TorusSpec:
    center = tuple(complex(p) for p in point) if point is not None else (0j,) * n
    if radii is None:
        radii = (DEFAULT_RADIUS,) * n
    elif isinstance(radii, (int, float)):
        radii = (float(radii),) * n
    return TorusSpec(center, tuple(float(r) for r in radii), 8)


def residue(numerator: Expr, denominators: Sequence[Expr], variables: Sequence[str], point=None, radii=None,
            rel_tol: float = 1e-10, max_nodes: int = 256, shrink: bool = True) -> ResidueEstimate:
    """Refined Grothendieck residue with automatic radius shrinking."""
    variables = _infer_variables(denominators, variables)
    torus = _default_torus(point, radii, len(variables))
    build = lambda t: expr_problem(numerator, denominators, variables, t)  # noqa: E731
    return _with_shrinking(build, torus, rel_tol, max_nodes, MAX_SHRINKS if shrink else 0)


class _JacobianIntegrand:
    """det(JX) (or tr(JX)^n) over prod X, evaluated from symbolic partials."""

    def __init__(self, X: Sequence[Expr], variables: Sequence[str], mode: str):
        self.n = len(X)
        self.mode = mode
        self.partials = ex.jacobian(X, variables)
        flat = [e for row in self.partials for e in row]
        self.evaluator = ex.Evaluator(list(X) + flat, variables)

    def __call__(self, values):
        out = self.evaluator(values)
        n = self.n
        comps, flat = out[:n], out[n:]
        if self.mode == "det":
            J = np.stack([np.stack(flat[i * n:(i + 1) * n], axis=-1) for i in range(n)], axis=-2)
            num = np.linalg.det(J)
        else:
            tr = flat[0]
            for i in range(1, n):
                tr = tr + flat[i * n + i]
            num = tr ** n
        return num, list(comps)


def _check_shape(X, variables, point):
    if len(X) != len(variables):
        raise ValueError("need one component per variable")
    if point is not None and len(point) != len(variables):
        raise ValueError("point dimension mismatch")


def _oriented(est: ResidueEstimate, sign: int) -> ResidueEstimate:
    out = est.scaled(sign) if sign < 0 else est
    out.orientation = sign
    return out


def jacobian_residue(X: Sequence[Expr], variables: Sequence[str], point=None, radii=None,
                     rel_tol: float = 1e-10, max_nodes: int = 256, require_integer: bool = True) -> ResidueEstimate:
    """Estimate of the local index (Milnor number) of ``X`` at ``point``.

    The coordinate torus can be homologous to the residue cycle
    ``{|X_i| = eps}`` with either orientation (e.g. ``X = (-y^3, x^2)``).
    The Jacobian residue of a holomorphic map is positive, so the sign of
    the raw integral fixes the orientation, which is stored on the result.
    """
    _check_shape(X, variables, point)
    integrand = _JacobianIntegrand(X, variables, "det")
    torus = _default_torus(point, radii, len(variables))
    build = lambda t: ResidueProblem(integrand, t)  # noqa: E731
    est = _with_shrinking(build, torus, rel_tol, max_nodes)
    # The torus only represents the residue cycle once the lowest-order
    # terms dominate on it; halve until two successive radii agree.
    trial = _default_torus(point, est.radii, len(variables))
    for _ in range(MAX_SHRINKS):
        trial = trial.scaled(0.5)
        try:
            finer = refine_until_stable(build(trial), rel_tol, max_nodes)
        except (DenominatorVanishes, ex.BranchCutError, ex.PoleError):
            # a zero crosses this torus, or high powers underflow the guard
            continue
        if abs(finer.value - est.value) < SNAP_TOLERANCE and (est.converged or not finer.converged):
            break
        est = finer
    est = _oriented(est, -1 if est.value.real < 0 else 1)
    if require_integer and est.converged and est.snapped_integer is None:
        raise NonIntegerResidue(f"Jacobian residue converged to non-integer {est.value}")
    return est


def baumbott_c1n_residue(X: Sequence[Expr], variables: Sequence[str], point=None, radii=None,
                         rel_tol: float = 1e-10, max_nodes: int = 256) -> ResidueEstimate:
    """Estimate of (2 pi i)^{-n} \\oint tr(JX)^n / prod(X_i) dz over the residue cycle.

    Uses the torus and orientation found by :func:`jacobian_residue`.
    """
    _check_shape(X, variables, point)
    jac = jacobian_residue(X, variables, point, radii, rel_tol, max_nodes, require_integer=False)
    integrand = _JacobianIntegrand(X, variables, "trace")
    torus = _default_torus(point, jac.radii, len(variables))
    est = refine_until_stable(ResidueProblem(integrand, torus), rel_tol, max_nodes)
    return _oriented(est, jac.orientation)


__all__ = [
    "TorusSpec", "ResidueEstimate", "ResidueProblem", "grothendieck_residue", "refine_until_stable",
    "residue", "jacobian_residue", "baumbott_c1n_residue", "torus_average", "expr_problem", "snap",
    "QuadratureError", "DenominatorVanishes", "NonIntegerResidue", "SNAP_TOLERANCE",
]
