"""Command line driver: read a flag problem file, run its tasks, write a report.

    flagres <subcommand> <file> [--out report.json] [--nodes N] [--rel-tol T] [--radii R]

Exit status is 0 when every theorem check passes and every estimate
converged, 1 on computation failures, 2 on unreadable or invalid input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import re
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional

import jsonschema

from . import __version__
from . import cohomology as coh
from . import expr as ex
from . import flag as fl
from . import ideal as idl
from . import quad
from .forms import DifferentialForm, FormError

CORPUS_ENV = "FLAGRES_CORPUS"

TASKS = (
    "check_flag", "singular_loci", "singular_inclusion", "milnor", "res_cn_vf", "res_cn_form",
    "comparison", "res_c1n", "binomial", "no_isolated", "closedness", "chern_pn", "positivity",
)

_expr_list = {"type": "array", "items": {"type": "string"}}
_coord = {
    "oneOf": [
        {"type": "string"},
        {"type": "number"},
        {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    ]
}
_twists = {"type": "array", "items": {"type": "integer"}, "minItems": 1}
_projective_case = {
    "type": "object",
    "required": ["n", "F1_twists", "F2_twists"],
    "properties": {
        "n": {"type": "integer", "minimum": 1},
        "F1_twists": _twists,
        "F2_twists": _twists,
        "j_values": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}

PROBLEM_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "patternProperties": {"^_": {}},
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "chart": {
            "type": "object", "required": ["vars"], "additionalProperties": False,
            "properties": {"vars": {"type": "array", "items": {"type": "string"}, "minItems": 1}},
        },
        "foliation1": {
            "type": "object", "required": ["vector_field"], "additionalProperties": False,
            "properties": {"vector_field": _expr_list},
        },
        "foliation2": {
            "type": "object", "required": ["one_form"], "additionalProperties": False,
            "properties": {"one_form": _expr_list},
        },
        "integrating_factor": {
            "type": "object", "required": ["f", "g"], "additionalProperties": False,
            "properties": {"f": {"type": "string"}, "g": {"type": "string"}},
        },
        "theta12": _expr_list,
        "theta2": _expr_list,
        "points": {
            "type": "array",
            "items": {
                "type": "object", "required": ["coords"],
                "patternProperties": {"^_": {}},
                "additionalProperties": False,
                "properties": {
                    "coords": {"type": "array", "items": _coord},
                    "kind": {"enum": ["exact", "approx"]},
                    "label": {"type": "string"},
                    "ambient": {"type": "object"},
                },
            },
        },
        "tasks": {"type": "array", "items": {"enum": list(TASKS)}},
        "quad": {
            "type": "object", "additionalProperties": False,
            "properties": {
                "radii": {"oneOf": [{"type": "number", "exclusiveMinimum": 0},
                                    {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}}]},
                "rel_tol": {"type": "number", "exclusiveMinimum": 0},
                "max_nodes": {"type": "integer", "minimum": 8},
            },
        },
        "projective": {"oneOf": [_projective_case, {"type": "array", "items": _projective_case}]},
        "expected_closed_form": {"type": "string"},
        "positivity": {
            "type": "object", "required": ["n", "F_twists", "F1_twists"], "additionalProperties": False,
            "properties": {
                "n": {"type": "integer", "minimum": 1},
                "F_twists": _twists,
                "F1_twists": _twists,
                "j": {"type": "integer", "minimum": 0},
                "expected": {"type": "integer"},
            },
        },
        "ideals": {
            "type": "array",
            "items": {
                "type": "object", "required": ["vars", "generators"], "additionalProperties": False,
                "patternProperties": {"^_": {}},
                "properties": {
                    "vars": {"type": "array", "items": {"type": "string"}},
                    "generators": _expr_list,
                    "point": {"type": "array", "items": {"type": "string"}},
                    "expected": {"type": "integer"},
                    "numeric": {"type": "boolean"},
                },
            },
        },
        "theta_entries": {
            "type": "array",
            "items": {
                "type": "object", "required": ["vars", "theta12", "theta2", "k1"], "additionalProperties": False,
                "patternProperties": {"^_": {}},
                "properties": {
                    "label": {"type": "string"},
                    "vars": {"type": "array", "items": {"type": "string"}},
                    "theta12": _expr_list,
                    "theta2": _expr_list,
                    "k1": {"type": "integer", "minimum": 0},
                    "k2": {"type": "integer", "minimum": 0},
                },
            },
        },
        "reference_values": {
            "type": "array",
            "items": {
                "type": "object", "required": ["quantity", "expression", "value"], "additionalProperties": False,
                "patternProperties": {"^_": {}},
                "properties": {
                    "quantity": {"enum": ["mu", "res_cn_vf", "res_cn_form"]},
                    "expression": {"type": "string"},
                    "value": {"type": ["number", "string"]},
                },
            },
        },
    },
    "dependentRequired": {
        "foliation1": ["chart", "foliation2"],
        "foliation2": ["chart", "foliation1"],
        "points": ["foliation1"],
        "integrating_factor": ["foliation1"],
        "theta12": ["foliation1"],
        "theta2": ["foliation1"],
    },
}


class InputError(Exception):
    """Unreadable or schema-invalid problem file (exit status 2)."""


# ---------------------------------------------------------------------------
# loading


def corpus_dir() -> Path:
    env = os.environ.get(CORPUS_ENV)
    if env:
        return Path(env)
    return Path(str(resources.files("flagres") / "corpus"))


def resolve(path: str) -> Path:
    p = Path(path)
    if p.exists():
        return p
    for cand in (corpus_dir() / path, corpus_dir() / f"{path}.json"):
        if cand.exists():
            return cand
    raise InputError(f"no such problem file: {path}")


def _parse_coord(c, kind):
    if kind == "exact":
        if isinstance(c, list):
            raise InputError("exact coordinates must be rationals")
        try:
            return Fraction(str(c))
        except ValueError:
            raise InputError(f"bad exact coordinate {c!r}") from None
    if isinstance(c, list):
        return complex(c[0], c[1])
    return complex(c) if not isinstance(c, str) else complex(c.replace(" ", "").replace("i", "j"))


class Problem:
    def __init__(self, data: dict, digest: str, source: str):
        self.data = data
        self.digest = digest
        self.source = source
        self.name = data.get("name", Path(source).stem)
        self.chart: Optional[fl.FlagChart] = None
        self.points: List[tuple] = []
        self.labels: List[str] = []
        if "chart" in data and "foliation1" in data:
            self._build_chart()

    def _build_chart(self):
        d = self.data
        v = tuple(d["chart"]["vars"])
        inf = d.get("integrating_factor")
        try:
            self.chart = fl.FlagChart.from_strings(
                v, d["foliation1"]["vector_field"], d["foliation2"]["one_form"],
                None if inf is None else (inf["f"], inf["g"]),
                d.get("theta12"), d.get("theta2"), self.name,
            )
        except ex.ParseError as err:
            raise InputError(f"expression error: {err}") from None
        except fl.FlagError as err:
            raise InputError(str(err)) from None
        for k, pt in enumerate(d.get("points", [])):
            kind = pt.get("kind", "exact")
            if len(pt["coords"]) != len(v):
                raise InputError(f"point {k} has {len(pt['coords'])} coordinates, chart has {len(v)}")
            self.points.append(tuple(_parse_coord(c, kind) for c in pt["coords"]))
            self.labels.append(pt.get("label", f"p{k}"))

    def settings(self, overrides: dict) -> fl.QuadSettings:
        q = dict(self.data.get("quad", {}))
        q.update({k: v for k, v in overrides.items() if v is not None})
        radii = q.get("radii")
        n = self.chart.n if self.chart else 1
        if isinstance(radii, (int, float)):
            radii = (float(radii),) * n
        elif radii is not None:
            radii = tuple(float(r) for r in radii)
            if len(radii) == 1:
                radii = radii * n
        return fl.QuadSettings(radii, float(q.get("rel_tol", 1e-10)), int(q.get("max_nodes", 256)))

    def projective_cases(self):
        p = self.data.get("projective")
        if p is None:
            return []
        return p if isinstance(p, list) else [p]


def load_problem(path: str) -> Problem:
    p = resolve(path)
    raw = p.read_bytes()
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as err:
        raise InputError(f"{p}: invalid JSON: {err}") from None
    try:
        jsonschema.validate(data, PROBLEM_SCHEMA)
    except jsonschema.ValidationError as err:
        loc = "/".join(str(a) for a in err.absolute_path)
        raise InputError(f"{p}: schema error at '{loc}': {err.message}") from None
    return Problem(data, hashlib.sha256(raw).hexdigest(), str(p))


# ---------------------------------------------------------------------------
# tasks


def _fmt(v):
    if v is None:
        return None
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else str(v)
    if isinstance(v, complex):
        return [float(f"{v.real:.15g}"), float(f"{v.imag:.15g}")]
    return v


def _entry(task, passed, result, point=None, converged=True):
    return {"task": task, "point": point, "passed": bool(passed), "converged": bool(converged), "result": result}


def _per_point(fn: Callable, task: str):
    def run(prob: Problem, settings):
        out = []
        for pt, label in zip(prob.points, prob.labels):
            rep = fn(prob.chart, pt, settings)
            out.append(_entry(task, rep.passed, rep.to_dict(), label, rep.converged))
        if not prob.points:
            raise fl.FlagError(f"{task} needs at least one point")
        return out
    return run


def _task_check_flag(prob, settings):
    c = prob.chart
    iota = fl.contraction(c)
    shown = str(ex.canonical(iota)) if ex.is_polynomial(iota) else str(iota)
    holds = fl.check_flag(c)
    return [_entry("check_flag", holds, {"contraction": shown, "holds": holds})]


def _basis_strings(I: idl.IdealPresentation):
    return [str(g) for g in I.basis]


def _task_singular_loci(prob, settings):
    vf, form = fl.singular_locus_vf(prob.chart), fl.singular_locus_form(prob.chart)
    res = {
        "vector_field": {"basis": _basis_strings(vf), "zero_dimensional": vf.is_zero_dimensional()},
        "one_form": {"basis": _basis_strings(form), "zero_dimensional": form.is_zero_dimensional()},
    }
    return [_entry("singular_loci", True, res)]


def _task_singular_inclusion(prob, settings):
    ok = fl.check_singular_inclusion(prob.chart)
    return [_entry("singular_inclusion", ok, {"S(F1) in S(F2)": ok})]


def _milnor_item(k, item, settings):
    v = tuple(item["vars"])
    try:
        gens = [ex.parse(s, v) for s in item["generators"]]
    except ex.ParseError as err:
        raise InputError(f"ideal {k}: {err}") from None
    point = tuple(Fraction(a) for a in item.get("point", ["0"] * len(v)))
    polys = [ex.to_polynomial(g, v) for g in gens]
    mu = idl.local_multiplicity(polys, point)
    res = {"generators": item["generators"], "mu": mu}
    passed, converged = True, True
    if "expected" in item:
        res["expected"] = item["expected"]
        passed = mu == item["expected"]
    if item.get("numeric", True) and len(gens) == len(v):
        est = quad.jacobian_residue(gens, v, point, settings.radii, settings.rel_tol,
                                    settings.max_nodes, require_integer=False)
        res["numeric"] = est.to_dict()
        converged = est.converged
        passed = passed and est.snapped_integer == mu and abs(est.value - mu) < quad.SNAP_TOLERANCE
    return _entry("milnor", passed, res, f"ideal{k}", converged)


def _task_milnor(prob, settings):
    out = []
    for k, item in enumerate(prob.data.get("ideals", [])):
        try:
            out.append(_milnor_item(k, item, settings))
        except COMPUTATION_ERRORS as err:
            out.append({"task": "milnor", "point": f"ideal{k}", "passed": False, "converged": False,
                        "error": f"{type(err).__name__}: {err}"})
    if prob.chart is not None:
        out.extend(_per_point(fl.res_cn_vf, "milnor")(prob, settings))
    if not out:
        raise fl.FlagError("milnor needs 'ideals' or a chart with points")
    return out


def _task_no_isolated(prob, settings):
    ok = fl.check_no_isolated_singularities(prob.chart)
    return [_entry("no_isolated", ok, {"no_isolated_singularity": ok})]


def _task_closedness(prob, settings):
    out = []
    if prob.chart is not None and prob.chart.theta12 is not None:
        res = fl.check_closedness(prob.chart)
        out.append(_entry("closedness", all(res.values()), {f"psi_{j}": v for j, v in res.items()}, "chart"))
    for k, item in enumerate(prob.data.get("theta_entries", [])):
        v = tuple(item["vars"])
        try:
            th12 = DifferentialForm.one_form(v, [ex.parse(s, v) for s in item["theta12"]])
            th2 = DifferentialForm.one_form(v, [ex.parse(s, v) for s in item["theta2"]])
        except (ex.ParseError, FormError) as err:
            raise InputError(f"theta entry {k}: {err}") from None
        res = fl.closedness_of(th12, th2, item["k1"], item.get("k2", 1))
        out.append(_entry("closedness", all(res.values()), {f"psi_{j}": ok for j, ok in res.items()},
                          item.get("label", f"theta{k}")))
    if not out:
        raise fl.FlagError("closedness needs theta12 on the chart or 'theta_entries'")
    return out


def closed_form_value(template: str, n: int, j: int) -> Fraction:
    """Evaluate an expression in ``n`` and ``j`` (exponents may involve both)."""
    text = re.sub(r"\bn\b", f"({n})", template)
    text = re.sub(r"\bj\b", f"({j})", text)
    try:
        return ex.evaluate_exact(ex.parse(text, ()), {})
    except ex.ParseError as err:
        raise InputError(f"expected_closed_form: {err}") from None


def _task_chern_pn(prob, settings):
    cases = prob.projective_cases()
    if not cases:
        raise fl.FlagError("chern_pn needs a 'projective' block")
    closed = prob.data.get("expected_closed_form")
    out = []
    for case in cases:
        n = case["n"]
        F1, F2 = coh.SplitSheaf(tuple(case["F1_twists"])), coh.SplitSheaf(tuple(case["F2_twists"]))
        js = case.get("j_values", list(range(n)))
        table = coh.residue_table(n, F1, F2, js)
        res = {"n": n, "values": {str(j): _fmt(v) for j, v in table.items()}}
        passed = True
        if closed:
            expected = {j: closed_form_value(closed, n, j) for j in js}
            res["expected"] = {str(j): _fmt(v) for j, v in expected.items()}
            passed = all(table[j] == expected[j] for j in js)
        out.append(_entry("chern_pn", passed, res, f"n={n}"))
    return out


def _task_positivity(prob, settings):
    cfg = prob.data.get("positivity")
    if cfg is None:
        raise fl.FlagError("positivity needs a 'positivity' block")
    n = cfg["n"]
    F, F1 = coh.SplitSheaf(tuple(cfg["F_twists"])), coh.SplitSheaf(tuple(cfg["F1_twists"]))
    j = cfg.get("j", n - 1)
    rep = coh.residue_positivity_check(n, F, F1)
    j_value = coh.flag_residue_total(n, F1, F, j)
    res = {
        "j": j,
        "j_value": _fmt(j_value),
        "positivity": rep.to_dict(),
        "discrepancy": j_value != rep.value,
    }
    if res["discrepancy"]:
        res["note"] = f"c1(N12)^(n-1-j) c1(N2)^(1+j) at j={j} is {j_value}; (a-b)^n is {rep.value}"
    passed = rep.nonneg and rep.semistable_proxy
    if "expected" in cfg:
        res["expected"] = cfg["expected"]
        passed = passed and j_value == cfg["expected"]
    return [_entry("positivity", passed, res)]


TASK_RUNNERS: Dict[str, Callable] = {
    "check_flag": _task_check_flag,
    "singular_loci": _task_singular_loci,
    "singular_inclusion": _task_singular_inclusion,
    "milnor": _task_milnor,
    "res_cn_vf": _per_point(fl.res_cn_vf, "res_cn_vf"),
    "res_cn_form": _per_point(fl.res_cn_form, "res_cn_form"),
    "comparison": _per_point(fl.verify_comparison, "comparison"),
    "res_c1n": _per_point(fl.res_c1n_flag, "res_c1n"),
    "binomial": _per_point(fl.verify_binomial_identity, "binomial"),
    "no_isolated": _task_no_isolated,
    "closedness": _task_closedness,
    "chern_pn": _task_chern_pn,
    "positivity": _task_positivity,
}


def _all_polynomial(c: fl.FlagChart) -> bool:
    return all(ex.is_polynomial(e) for e in c.X + c.omega)


def _form_isolated(c: fl.FlagChart) -> bool:
    """False when the 1-form is polynomial with a positive-dimensional zero set."""
    if not all(ex.is_polynomial(e) for e in c.omega):
        return True
    return fl.singular_locus_form(c).is_zero_dimensional()


def applicable_tasks(prob: Problem) -> List[str]:
    """Declared tasks first, then every other check the file's data supports."""
    d, c = prob.data, prob.chart
    out = list(d.get("tasks", []))
    extra = []
    if c is not None:
        extra.append("check_flag")
        if _all_polynomial(c):
            extra.append("singular_loci")
        w = c.omega
        if isinstance(w[0], ex.Const) and w[0].value == 1 and all(ex.is_zero(e) for e in w[1:]):
            extra.append("no_isolated")
        if prob.points:
            extra.append("comparison" if _form_isolated(c) else "res_cn_vf")
            if c.integrating_factor is not None:
                extra.append("binomial")
    if (c is not None and c.theta12 is not None and c.connection_theta2() is not None) or d.get("theta_entries"):
        extra.append("closedness")
    if d.get("ideals"):
        extra.append("milnor")
    if d.get("projective"):
        extra.append("chern_pn")
    if d.get("positivity"):
        extra.append("positivity")
    return out + [t for t in extra if t not in out]


SUBCOMMAND_TASKS: Dict[str, Callable[[Problem], List[str]]] = {
    "check-flag": lambda p: ["check_flag"] + (["singular_inclusion"] if p.chart and _all_polynomial(p.chart) else []),
    "milnor": lambda p: ["milnor"],
    "residue": lambda p: ["res_cn_vf", "res_cn_form"] + (["res_c1n"] if p.chart and p.chart.integrating_factor else []),
    "chern-pn": lambda p: ["chern_pn"],
    "verify": applicable_tasks,
    "run": lambda p: list(p.data.get("tasks") or applicable_tasks(p)),
}

COMPUTATION_ERRORS = (
    fl.FlagError, idl.NotZeroDimensional, idl.NotFiniteAtPoint, idl.NonRationalPoint, idl.ReductionLimitExceeded,
    quad.QuadratureError, ex.ExprError, ValueError, ZeroDivisionError,
)


def run_tasks(prob: Problem, tasks: List[str], settings: fl.QuadSettings) -> List[dict]:
    entries = []
    for task in tasks:
        if task not in TASK_RUNNERS:
            raise InputError(f"unknown task {task!r}")
        needs_chart = task not in ("milnor", "chern_pn", "positivity", "closedness")
        if needs_chart and prob.chart is None:
            raise InputError(f"task {task} needs a chart with both foliations")
        try:
            entries.extend(TASK_RUNNERS[task](prob, settings))
        except InputError:
            raise
        except COMPUTATION_ERRORS as err:
            entries.append({"task": task, "point": None, "passed": False, "converged": False,
                            "error": f"{type(err).__name__}: {err}"})
    return entries


def _reference_comparisons(prob: Problem, entries: List[dict]) -> List[dict]:
    """Compare computed values with reference values recorded in the input; never asserted."""
    out = []
    for ref in prob.data.get("reference_values", []):
        q = ref["quantity"]
        computed = None
        for e in entries:
            r = e.get("result") or {}
            if q == "mu" and e["task"] in ("comparison", "res_cn_vf", "milnor") and "children" in r:
                src = r["children"].get("vf", r) if e["task"] == "comparison" else r
                computed = src.get("algebraic")
                if computed is None and src.get("numeric"):
                    computed = src["numeric"]["snapped_integer"]
            elif q in ("res_cn_vf", "res_cn_form") and e["task"] == "comparison":
                src = r.get("children", {}).get("vf" if q == "res_cn_vf" else "form", {})
                computed = src.get("algebraic")
                if computed is None and src.get("numeric"):
                    computed = src["numeric"]["snapped_integer"]
            elif e["task"] == q:
                computed = r.get("algebraic")
            if computed is not None:
                break
        value = ref["value"]
        agrees = None if computed is None else Fraction(str(computed)) == Fraction(str(value))
        out.append({
            "quantity": q, "reference_expression": ref["expression"], "reference_value": value,
            "computed": computed, "agrees": agrees, "asserted": False,
        })
    return out


def build_report(prob: Problem, subcommand: str, settings: fl.QuadSettings) -> dict:
    tasks = SUBCOMMAND_TASKS[subcommand](prob)
    entries = run_tasks(prob, tasks, settings)
    n_pass = sum(e["passed"] for e in entries)
    return {
        "tool": "flagres",
        "version": __version__,
        "input": {"file": Path(prob.source).name, "sha256": prob.digest, "name": prob.name},
        "subcommand": subcommand,
        "settings": {"radii": None if settings.radii is None else list(settings.radii),
                     "rel_tol": settings.rel_tol, "max_nodes": settings.max_nodes},
        "tasks": entries,
        "reference_comparisons": _reference_comparisons(prob, entries),
        "summary": {
            "entries": len(entries),
            "passed": n_pass,
            "failed": len(entries) - n_pass,
            "all_passed": n_pass == len(entries),
            "all_converged": all(e["converged"] for e in entries),
        },
    }


def exit_status(report: dict) -> int:
    s = report["summary"]
    return 0 if s["all_passed"] and s["all_converged"] else 1


def _summary_lines(report: dict) -> List[str]:
    lines = [f"{report['input']['name']} ({report['subcommand']})"]
    for e in report["tasks"]:
        tag = "PASS" if e["passed"] and e["converged"] else "FAIL"
        where = f" @ {e['point']}" if e.get("point") else ""
        extra = e.get("error") or _short(e)
        lines.append(f"  [{tag}] {e['task']}{where}: {extra}")
    for r in report["reference_comparisons"]:
        lines.append(
            f"  [NOTE] {r['quantity']}: computed {r['computed']}, reference {r['reference_expression']} = "
            f"{r['reference_value']} ({'agrees' if r['agrees'] else 'differs'}, not asserted)"
        )
    s = report["summary"]
    lines.append(f"  {s['passed']}/{s['entries']} passed")
    return lines


def _short(e: dict) -> str:
    r = e.get("result") or {}
    if "checks" in r:
        failed = [c["name"] for c in r["checks"] if not c["passed"]]
        val = r.get("algebraic")
        if val is None and r.get("numeric"):
            val = r["numeric"]["snapped_integer"]
            if val is None:
                val = r["numeric"]["value"]
        return f"value {val}" + (f"; failed {failed}" if failed else "")
    if "values" in r:
        return "values " + ", ".join(f"j={j}: {v}" for j, v in r["values"].items())
    if "mu" in r:
        return f"mu {r['mu']}"
    if "j_value" in r:
        return f"j={r['j']}: {r['j_value']}; (a-b)^n = {r['positivity']['value']}" + (
            " (discrepancy flagged)" if r["discrepancy"] else "")
    return ", ".join(f"{k}={v}" for k, v in r.items() if not isinstance(v, (dict, list)))


def _radii_arg(text: str):
    try:
        vals = [float(t) for t in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad radii {text!r}") from None
    if any(v <= 0 for v in vals):
        raise argparse.ArgumentTypeError("radii must be positive")
    return vals[0] if len(vals) == 1 else vals


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="flagres", description="Residues of 2-flags of holomorphic foliations.")
    ap.add_argument("--version", action="version", version=f"flagres {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name in SUBCOMMAND_TASKS:
        p = sub.add_parser(name)
        p.add_argument("file", help="problem file (path, or name inside the corpus directory)")
        p.add_argument("--out", help="write the JSON report here")
        p.add_argument("--nodes", type=int, help="maximum nodes per circle")
        p.add_argument("--rel-tol", type=float, dest="rel_tol")
        p.add_argument("--radii", type=_radii_arg)
        p.add_argument("--quiet", action="store_true")
    sub.add_parser("corpus-list")
    return ap


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "corpus-list":
        root = corpus_dir()
        for p in sorted(root.glob("*.json")):
            try:
                name = json.loads(p.read_text()).get("name", "")
            except json.JSONDecodeError:
                name = "(invalid JSON)"
            print(f"{p.stem:<28} {name}")
        return 0
    try:
        prob = load_problem(args.file)
        settings = prob.settings({"radii": args.radii, "rel_tol": args.rel_tol, "max_nodes": args.nodes})
        report = build_report(prob, args.command, settings)
    except InputError as err:
        print(f"flagres: {err}", file=sys.stderr)
        return 2
    if args.out:
        Path(args.out).write_text(json.dumps(report, indent=2) + "\n")
    if not args.quiet:
        print("\n".join(_summary_lines(report)))
    return exit_status(report)


if __name__ == "__main__":
    sys.exit(main())
