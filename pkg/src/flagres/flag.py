"""Local 2-flags (dim F1 = 1, codim F2 = 1) and their residues.

A :class:`FlagChart` holds a vector field ``X`` (tangent to F1) and the
coefficients of a 1-form ``omega`` (defining F2) on one coordinate chart.
Residues at isolated singular points are computed twice, once by exact
local algebra and once by torus quadrature, and the two must agree.
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import expr as ex
from . import ideal as idl
from . import quad
from .expr import Expr
from .forms import DifferentialForm, d, exact_log_form, gv_combination, psi_form
from .poly import Polynomial

ZERO_TOLERANCE = 1e-9
AGREEMENT_TOLERANCE = quad.SNAP_TOLERANCE
SAMPLE_RADIUS = 0.4
SAMPLE_SEED = 20240917


class FlagError(Exception):
    pass


class UnsupportedConfiguration(FlagError):
    pass


class NotInNormalForm(FlagError):
    pass


class FlagConditionFails(FlagError):
    pass


class OracleDisagreement(FlagError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# sampling


def sample_points(exprs: Sequence[Expr], variables: Sequence[str], count: int, seed: int = SAMPLE_SEED,
                  radius: float = SAMPLE_RADIUS, retries: int = 5):
    """Random points of the polydisc where every expression evaluates.

    Returns ``(points, values)`` with ``values[k][i]`` the value of
    ``exprs[k]`` at ``points[i]``.  A point that hits a pole or branch cut
    is redrawn up to ``retries`` times.
    """
    rng = np.random.default_rng(seed)
    variables = tuple(variables)
    evaluator = ex.Evaluator(list(exprs), variables)
    points, values = [], [[] for _ in exprs]
    for _ in range(count):
        for attempt in range(retries + 1):
            r = radius * np.sqrt(rng.random(len(variables)))
            th = 2 * np.pi * rng.random(len(variables))
            z = r * np.exp(1j * th)
            try:
                out = evaluator(list(z))
            except ex.EvaluationError:
                if attempt == retries:
                    raise
                continue
            points.append(dict(zip(variables, (complex(v) for v in z))))
            for k, o in enumerate(out):
                values[k].append(complex(o))
            break
    return points, values


# ---------------------------------------------------------------------------
# data model


@dataclass(frozen=True)
class FlagChart:
    variables: Tuple[str, ...]
    X: Tuple[Expr, ...]
    omega: Tuple[Expr, ...]
    integrating_factor: Optional[Tuple[Expr, Expr]] = None
    theta12: Optional[DifferentialForm] = None
    theta2: Optional[DifferentialForm] = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "X", tuple(ex.as_expr(e) for e in self.X))
        object.__setattr__(self, "omega", tuple(ex.as_expr(e) for e in self.omega))
        n = len(self.variables)
        if len(self.X) != n or len(self.omega) != n:
            raise FlagError(f"need {n} vector-field and 1-form components")
        for e in self.X + self.omega:
            extra = e.free_vars - set(self.variables)
            if extra:
                raise FlagError(f"undeclared variables {sorted(extra)}")
        if self.integrating_factor is not None:
            f, g = (ex.as_expr(e) for e in self.integrating_factor)
            object.__setattr__(self, "integrating_factor", (f, g))
            residuals = [ex.sub(w, ex.mul(f, ex.diff(g, v))) for w, v in zip(self.omega, self.variables)]
            _, vals = sample_points(residuals, self.variables, 50)
            worst = max(abs(v) for col in vals for v in col)
            if worst >= ZERO_TOLERANCE:
                raise FlagError(f"omega != f dg: residual {worst:.3g}")
        for th in (self.theta12, self.theta2):
            if th is not None and (th.variables != self.variables or th.degree != 1):
                raise FlagError("theta forms must be 1-forms on the chart variables")

    @classmethod
    def from_strings(cls, variables, X, omega, integrating_factor=None, theta12=None, theta2=None, name=""):
        variables = tuple(variables)
        p = lambda s: ex.parse(s, variables)  # noqa: E731
        inf = None if integrating_factor is None else (p(integrating_factor[0]), p(integrating_factor[1]))
        th12 = None if theta12 is None else DifferentialForm.one_form(variables, [p(s) for s in theta12])
        th2 = None if theta2 is None else DifferentialForm.one_form(variables, [p(s) for s in theta2])
        return cls(variables, tuple(p(s) for s in X), tuple(p(s) for s in omega), inf, th12, th2, name)

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def k1(self) -> int:
        return self.n - 1

    @property
    def k2(self) -> int:
        return 1

    def connection_theta2(self) -> Optional[DifferentialForm]:
        """theta2 as supplied, or df/f from the integrating factor."""
        if self.theta2 is not None:
            return self.theta2
        if self.integrating_factor is not None:
            return exact_log_form(self.variables, self.integrating_factor[0])
        return None


@dataclass
class TheoremCheck:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "passed": self.passed, "detail": self.detail}


@dataclass
class ResidueReport:
    task: str
    point: Tuple
    algebraic: Optional[Fraction] = None
    numeric: Optional[quad.ResidueEstimate] = None
    checks: List[TheoremCheck] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    children: Dict[str, "ResidueReport"] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks) and all(r.passed for r in self.children.values())

    @property
    def converged(self) -> bool:
        ok = self.numeric is None or self.numeric.converged
        return ok and all(r.converged for r in self.children.values())

    @property
    def value(self):
        if self.algebraic is not None:
            return self.algebraic
        if self.numeric is not None:
            s = self.numeric.snapped_integer
            return s if s is not None else self.numeric.value
        return None

    def check(self, name: str) -> TheoremCheck:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_dict(self) -> dict:
        alg = self.algebraic
        return {
            "task": self.task,
            "point": [_fmt_coord(a) for a in self.point],
            "algebraic": None if alg is None else (int(alg) if alg.denominator == 1 else str(alg)),
            "numeric": None if self.numeric is None else self.numeric.to_dict(),
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
            "children": {k: v.to_dict() for k, v in self.children.items()},
        }


def _fmt_coord(a):
    if isinstance(a, Fraction):
        return str(a)
    if isinstance(a, int):
        return str(a)
    a = complex(a)
    return [float(f"{a.real:.15g}"), float(f"{a.imag:.15g}")]


@dataclass(frozen=True)
class QuadSettings:
    radii: Optional[Tuple[float, ...]] = None
    rel_tol: float = 1e-10
    max_nodes: int = 256


DEFAULT_QUAD = QuadSettings()


def is_exact_point(point) -> bool:
    return all(isinstance(a, (int, Fraction)) for a in point)


def _origin(c: FlagChart):
    return tuple(Fraction(0) for _ in c.variables)


# ---------------------------------------------------------------------------
# flag condition and singular loci


def contraction(c: FlagChart) -> Expr:
    """omega(X) = sum X_i omega_i."""
    return ex.add(*(ex.mul(a, b) for a, b in zip(c.X, c.omega)))


def check_flag(c: FlagChart) -> bool:
    """omega(X) == 0: exactly on polynomial data, numerically (100 points) otherwise."""
    iota = contraction(c)
    if ex.is_zero(iota):
        return True
    if ex.is_polynomial(iota):
        return ex.to_polynomial(iota, c.variables).is_zero()
    _, (vals,) = sample_points([iota], c.variables, 100)
    return max(abs(v) for v in vals) < ZERO_TOLERANCE


def _polys(exprs, variables) -> List[Polynomial]:
    return [ex.to_polynomial(e, variables) for e in exprs]


def singular_locus_vf(c: FlagChart) -> idl.IdealPresentation:
    return idl.IdealPresentation.from_generators(_polys(c.X, c.variables), c.variables)


def singular_locus_form(c: FlagChart) -> idl.IdealPresentation:
    return idl.IdealPresentation.from_generators(_polys(c.omega, c.variables), c.variables)


def check_singular_inclusion(c: FlagChart) -> bool:
    """S(F1) is contained in S(F2): every omega coefficient lies in the radical of (X)."""
    fx = [p for p in _polys(c.X, c.variables) if not p.is_zero()]
    gw = _polys(c.omega, c.variables)
    if not fx:
        return all(g.is_zero() for g in gw)
    return all(idl.radical_contains(fx, g) for g in gw)


def local_generators(exprs: Sequence[Expr], variables: Sequence[str], point) -> List[Polynomial]:
    """Polynomial generators of the same ideal in the local ring at ``point``.

    Polynomial components are used as they are.  For a product, factors that
    are not polynomial but evaluate to a nonzero value at the point are
    analytic units there and are dropped.
    """
    variables = tuple(variables)
    at = {v: complex(a) for v, a in zip(variables, point)}
    out = []
    for e in exprs:
        if ex.is_polynomial(e):
            out.append(ex.to_polynomial(e, variables))
            continue
        factors = e.factors if isinstance(e, ex.Mul) else (e,)
        poly_part = []
        for f in factors:
            if ex.is_polynomial(f):
                poly_part.append(f)
                continue
            try:
                val = ex.evaluate(f, at)
            except ex.EvaluationError:
                raise ex.NotPolynomialError(f) from None
            if abs(val) < ZERO_TOLERANCE:
                raise ex.NotPolynomialError(f)
        out.append(ex.to_polynomial(ex.mul(*poly_part), variables))
    return out


def _try_local_multiplicity(exprs, variables, point):
    if not is_exact_point(point):
        return None, "non-rational point: numeric path only"
    try:
        gens = local_generators(exprs, variables, point)
    except ex.NotPolynomialError as err:
        return None, f"algebraic path unavailable ({err})"
    return Fraction(idl.local_multiplicity(gens, point)), ""


@functools.lru_cache(maxsize=128)
def _jacobian_estimate(X: Tuple[Expr, ...], variables, point, settings: QuadSettings):
    center = tuple(complex(a) for a in point)
    return quad.jacobian_residue(
        list(X), variables, center, settings.radii, settings.rel_tol, settings.max_nodes, require_integer=False
    )


@functools.lru_cache(maxsize=128)
def _trace_estimate(X: Tuple[Expr, ...], variables, point, settings: QuadSettings):
    center = tuple(complex(a) for a in point)
    return quad.baumbott_c1n_residue(list(X), variables, center, settings.radii, settings.rel_tol, settings.max_nodes)


def _copy(est: quad.ResidueEstimate) -> quad.ResidueEstimate:
    return quad.ResidueEstimate(est.value, list(est.node_history), est.converged, est.snapped_integer, est.radii,
                                est.orientation)


def _agreement(report: ResidueReport, hard: bool = True):
    est, alg = report.numeric, report.algebraic
    report.checks.append(TheoremCheck("converged", est.converged, f"nodes {est.node_history[-1][0]}"))
    if alg is None:
        return
    diff = abs(est.value - complex(alg))
    ok = diff < AGREEMENT_TOLERANCE
    report.checks.append(TheoremCheck("oracle_agreement", ok, f"|numeric - algebraic| = {diff:.3g}"))
    if hard and not ok and est.converged:
        raise OracleDisagreement(
            f"{report.task}: algebraic {alg} vs numeric {est.value} at {report.point}", report
        )


# ---------------------------------------------------------------------------
# residues


def res_cn_vf(c: FlagChart, point=None, settings: QuadSettings = DEFAULT_QUAD) -> ResidueReport:
    """Res_{c_n}(F1, N1; p) = mu(X; p)."""
    point = tuple(point) if point is not None else _origin(c)
    report = ResidueReport("c_n(F1)", point)
    report.algebraic, note = _try_local_multiplicity(c.X, c.variables, point)
    if note:
        report.notes.append(note)
    report.numeric = _copy(_jacobian_estimate(c.X, c.variables, point, settings))
    _agreement(report)
    return report


def comparison_factor(n: int) -> int:
    return (-1) ** n * math.factorial(n - 1)


def res_cn_form(c: FlagChart, point=None, settings: QuadSettings = DEFAULT_QUAD) -> ResidueReport:
    """Res_{c_n}(F2, N2; p) = (-1)^n (n-1)! mu(omega; p)."""
    point = tuple(point) if point is not None else _origin(c)
    factor = comparison_factor(c.n)
    report = ResidueReport("c_n(F2)", point)
    mu, note = _try_local_multiplicity(c.omega, c.variables, point)
    if note:
        report.notes.append(note)
    report.algebraic = None if mu is None else factor * mu
    report.numeric = _jacobian_estimate(c.omega, c.variables, point, settings).scaled(factor)
    report.notes.append(f"factor (-1)^n (n-1)! = {factor}")
    _agreement(report)
    return report


def verify_comparison(c: FlagChart, point=None, settings: QuadSettings = DEFAULT_QUAD) -> ResidueReport:
    """Three sub-checks: ideal equality, Milnor number equality, residue ratio."""
    point = tuple(point) if point is not None else _origin(c)
    factor = comparison_factor(c.n)
    report = ResidueReport("comparison", point)
    report.checks.append(TheoremCheck("flag_condition", check_flag(c)))

    try:
        f = local_generators(c.X, c.variables, point)
        g = local_generators(c.omega, c.variables, point)
        if is_exact_point(point):
            eq = idl.local_ideals_equal(f, g, point)
            detail = "(X) == (omega) in the local ring at the point"
        else:
            eq = idl.ideals_equal(f, g)
            detail = "(X) == (omega) as polynomial ideals (non-rational point)"
        report.checks.append(TheoremCheck("ideal_equality", eq, detail))
    except ex.NotPolynomialError as err:
        report.checks.append(TheoremCheck("ideal_equality", False, f"unavailable: {err}"))

    sub = {}
    for key, fn in (("vf", res_cn_vf), ("form", res_cn_form)):
        try:
            sub[key] = fn(c, point, settings)
            report.children[key] = sub[key]
        except (OracleDisagreement, idl.NotFiniteAtPoint, quad.QuadratureError, ex.EvaluationError) as err:
            report.checks.append(TheoremCheck(f"residue_{key}", False, f"{type(err).__name__}: {err}"))

    if len(sub) == 2:
        vf, form = sub["vf"], sub["form"]
        mu_f = vf.value
        mu_g = None if form.value is None else Fraction(form.value) / factor if not isinstance(form.value, complex) else None
        report.checks.append(TheoremCheck("milnor_equality", mu_f is not None and mu_f == mu_g, f"mu(X) = {mu_f}, mu(omega) = {mu_g}"))
        a, b = vf.numeric.snapped_integer, form.numeric.snapped_integer
        ok = a is not None and b is not None and a != 0 and Fraction(b, a) == factor
        report.checks.append(TheoremCheck("ratio", ok, f"Res(F2)/Res(F1) = {b}/{a}, expected {factor}"))
        if vf.algebraic is not None and form.algebraic is not None and vf.algebraic:
            report.algebraic = form.algebraic / vf.algebraic
        report.numeric = quad.ResidueEstimate(form.numeric.value / vf.numeric.value if vf.numeric.value else 0j,
                                              [], vf.numeric.converged and form.numeric.converged)
    else:
        report.checks.append(TheoremCheck("milnor_equality", False, "residues unavailable"))
        report.checks.append(TheoremCheck("ratio", False, "residues unavailable"))
    return report


def trace_of_jacobian(c: FlagChart) -> Expr:
    return ex.add(*(ex.diff(x, v) for x, v in zip(c.X, c.variables)))


def _vanishes(e: Expr, variables) -> Tuple[bool, str]:
    if ex.is_identically_zero(e):
        return True, "symbolic"
    if ex.is_polynomial(e):
        return False, "symbolic"
    _, (vals,) = sample_points([e], variables, 50)
    return max(abs(v) for v in vals) < ZERO_TOLERANCE, "numeric"


def _form_vanishes(form: DifferentialForm) -> Tuple[bool, str]:
    modes = set()
    for coeff in form.coefficients.values():
        ok, mode = _vanishes(coeff, form.variables)
        modes.add(mode)
        if not ok:
            return False, mode
    return True, "numeric" if "numeric" in modes else "symbolic"


def _monomial_residue(numerator: Expr, denominators: Sequence[Expr], variables) -> Optional[Fraction]:
    """Exact residue when every denominator is a single term c_i z^(A_i).

    The torus integral is the coefficient of z^(sum A_i - 1) in the
    numerator over prod c_i; the residue cycle orientation is sign(det A).
    """
    if not (ex.is_polynomial(numerator) and all(ex.is_polynomial(dn) for dn in denominators)):
        return None
    rows, coef = [], Fraction(1)
    for dn in denominators:
        p = ex.to_polynomial(dn, variables)
        if len(p) != 1:
            return None
        (mono, c), = p.terms.items()
        rows.append(mono)
        coef *= c
    det = round(np.linalg.det(np.array(rows, dtype=float))) if rows else 1
    if det == 0:
        return None
    target = tuple(sum(col) - 1 for col in zip(*rows))
    if any(t < 0 for t in target):
        return Fraction(0)
    raw = ex.to_polynomial(numerator, variables).terms.get(target, Fraction(0)) / coef
    return raw if det > 0 else -raw


def res_c1n_flag(c: FlagChart, point=None, settings: QuadSettings = DEFAULT_QUAD) -> ResidueReport:
    """Res_{c1^n}(F, N12; p), equal to the Baum-Bott c1^n residue of F1 when omega = f dg."""
    if c.integrating_factor is None:
        raise UnsupportedConfiguration("res_c1n_flag needs an integrating factor omega = f dg")
    point = tuple(point) if point is not None else _origin(c)
    report = ResidueReport("c1^n(F, N12)", point)
    try:
        fp = ex.evaluate(c.integrating_factor[0], {v: complex(a) for v, a in zip(c.variables, point)})
        unit = abs(fp) > ZERO_TOLERANCE
        detail = f"f(p) = {fp:.6g}"
    except ex.EvaluationError as err:
        unit, detail = False, str(err)
    report.checks.append(TheoremCheck("integrating_factor_unit", unit, detail))
    theta2 = c.connection_theta2()
    ok, mode = _form_vanishes(d(theta2))
    report.checks.append(TheoremCheck("d_theta2_zero", ok, f"d(df/f) vanishes ({mode}); mixed term Res_(c1^(n-1), c1) = 0"))
    tr = trace_of_jacobian(c)
    tr_zero = ex.is_identically_zero(tr)
    report.notes.append(f"tr(JX) = {ex.canonical(tr) if ex.is_polynomial(tr) else tr}")
    if tr_zero:
        report.algebraic = Fraction(0)
        report.notes.append("tr(JX) vanishes identically")
    elif is_exact_point(point) and not any(point):
        num = ex.power(tr, c.n)
        report.algebraic = _monomial_residue(num, c.X, c.variables)
    report.numeric = _copy(_trace_estimate(c.X, c.variables, point, settings))
    _agreement(report)
    return report


def verify_binomial_identity(c: FlagChart, point=None, settings: QuadSettings = DEFAULT_QUAD) -> ResidueReport:
    """BB^0 + n BB^1 = BB(F1) with k1 = n-1, k2 = 1."""
    if c.integrating_factor is None:
        raise UnsupportedConfiguration(
            "binomial identity needs an integrating factor (to kill BB^1)"
            + ("" if c.theta12 is not None else " and no theta12 was supplied")
        )
    point = tuple(point) if point is not None else _origin(c)
    base = res_c1n_flag(c, point, settings)
    report = ResidueReport("binomial_identity", point)
    report.children["c1n"] = base
    theta2 = c.connection_theta2()
    if c.theta12 is not None:
        psi1 = psi_form(c.theta12, theta2, 1, c.k1)
        ok, mode = _form_vanishes(psi1)
        report.checks.append(TheoremCheck("psi1_zero", ok, f"psi_1 contains (d theta2)^1 ({mode})"))
        lhs, rhs = gv_combination(theta2, c.theta12, c.k1, c.k2)
        report.notes.append(f"gv lhs degree {lhs.degree}, rhs degree {rhs.degree} (equal modulo exact forms)")
    else:
        report.notes.append("theta12 not supplied: BB^0 taken from the c1^n integral")
    bb0 = base.numeric.value
    bb1 = 0j
    lhs_val = bb0 + c.n * bb1
    rhs_val = base.numeric.value
    ok = abs(lhs_val - rhs_val) < 1e-8 and base.check("d_theta2_zero").passed
    report.checks.append(TheoremCheck("binomial_identity", ok, f"BB0 + n*BB1 = {lhs_val:.6g}, BB(F1) = {rhs_val:.6g}"))
    report.algebraic = base.algebraic
    report.numeric = _copy(base.numeric)
    return report


def check_no_isolated_singularities(c: FlagChart) -> bool:
    """With omega = dz_1, the flag forces f_1 = 0 and S(F1) = {f_2 = ... = f_n = 0} is not isolated."""
    w = c.omega
    if not (isinstance(w[0], ex.Const) and w[0].value == 1 and all(ex.is_zero(e) for e in w[1:])):
        raise NotInNormalForm("omega must be dz_1 in this chart")
    try:
        polys = _polys(c.X, c.variables)
    except ex.NotPolynomialError as err:
        raise NotInNormalForm(f"X must be polynomial: {err}") from None
    if not polys[0].is_zero():
        raise FlagConditionFails(f"omega(X) = f_1 = {polys[0]} is not zero")
    rest = [p for p in polys[1:] if not p.is_zero()]
    if not rest:
        return True
    I = idl.IdealPresentation.from_generators(rest, c.variables)
    return I.is_unit() or not I.is_zero_dimensional()


def closedness_of(theta12: DifferentialForm, theta2: DifferentialForm, k1: int, k2: int = 1,
                  count: int = 50) -> Dict[int, bool]:
    """check_closed for psi_0 .. psi_k2 at ``count`` random points."""
    from .forms import check_closed

    out = {}
    for j in range(0, k2 + 1):
        psi = psi_form(theta12, theta2, j, k1)
        coeffs = list(d(psi).coefficients.values()) or [ex.ZERO]
        pts, _ = sample_points(coeffs, theta12.variables, count)
        out[j] = check_closed(psi, pts)
    return out


def check_closedness(c: FlagChart, count: int = 50) -> Dict[int, bool]:
    """Closedness of every psi_j built from the chart's theta data."""
    theta2 = c.connection_theta2()
    if c.theta12 is None or theta2 is None:
        raise UnsupportedConfiguration("closedness needs theta12 and theta2 (or an integrating factor)")
    return closedness_of(c.theta12, theta2, c.k1, c.k2, count)


__all__ = [
    "FlagChart", "ResidueReport", "TheoremCheck", "QuadSettings",
    "check_flag", "contraction", "singular_locus_vf", "singular_locus_form", "check_singular_inclusion",
    "local_generators", "res_cn_vf", "res_cn_form", "verify_comparison", "res_c1n_flag",
    "verify_binomial_identity", "check_no_isolated_singularities", "check_closedness", "closedness_of", "trace_of_jacobian", "sample_points",
    "comparison_factor", "FlagError", "UnsupportedConfiguration", "NotInNormalForm", "FlagConditionFails",
    "OracleDisagreement",
]
