"""Regenerate the JSON problem files shipped in src/flagres/corpus.

    python scripts/make_corpus.py [--check]

With --check, exits non-zero if any file on disk differs from what this
script would write.
"""
from __future__ import annotations

import argparse
import cmath
import json
import sys
from pathlib import Path

OUT = Path(__file__).resolve().parents[1] / "src" / "flagres" / "corpus"


def izawa_chart(l: int):
    """Chart (x, y, w, t) on {1 + x^l + ... + t^l + s^l = 0, 1 + s z = 0}, with z as the leaf function."""
    S = f"1 + x^{l} + y^{l} + w^{l} + t^{l}"
    B = f"({S})^(({-l - 1})/{l})"
    zeta = {a: f"{a}^{l - 1}*{B}" for a in "xywt"}
    X = [f"-{zeta['y']}", zeta["x"], f"-{zeta['t']}", zeta["w"]]
    omega = [zeta[a] for a in "xywt"]
    g = f"-({S})^(-1/{l})"
    points = []
    for k in range(l):
        wk = cmath.exp(1j * cmath.pi * (2 * k + 1) / l)
        wj = cmath.exp(1j * cmath.pi * (2 * (l - k - 1) + 1) / l)
        points.append({
            "coords": ["0", "0", "0", "0"],
            "kind": "exact",
            "label": f"k={k}",
            "ambient": {
                "s": [round(wk.real, 15) + 0.0, round(wk.imag, 15) + 0.0],
                "z": [round(-wj.real, 15) + 0.0, round(-wj.imag, 15) + 0.0],
            },
        })
    return X, omega, g, points


def izawa_problem(l: int) -> dict:
    X, omega, g, points = izawa_chart(l)
    return {
        "name": f"codimension-one foliation dz on a hypersurface of P5 x P1, l = {l}",
        "_source": "hypersurface {sum x_i^l = 0} and {x0 y0 + x1 y1 = 0} in P5 x P1; chart x0 = y0 = 1",
        "_comment": [
            "The branch constant (-1)^(-1/l) multiplies X and omega alike and cancels in every residue; it is dropped.",
            "omega = dz with z = -(1 + x^l + y^l + w^l + t^l)^(-1/l), so the exponent is (-l-1)/l.",
            "Every singular point sits at the chart origin; 'ambient' records its (s, z) coordinates.",
        ],
        "chart": {"vars": ["x", "y", "w", "t"]},
        "foliation1": {"vector_field": X},
        "foliation2": {"one_form": omega},
        "integrating_factor": {"f": "1", "g": g},
        "points": points,
        "tasks": ["check_flag", "comparison", "res_c1n", "binomial"],
        "quad": {"radii": 0.125, "rel_tol": 1e-10, "max_nodes": 64},
        "reference_values": [
            {"quantity": "mu", "expression": "(l-1)^2", "value": (l - 1) ** 2},
            {"quantity": "res_cn_form", "expression": "6*(l-1)^2", "value": 6 * (l - 1) ** 2},
        ],
    }


def final_problem() -> dict:
    X, omega, g, points = izawa_chart(3)
    return {
        "name": "c1^4 residue of the hypersurface flag (integrating factor f = 1), l = 3",
        "_source": "same manifold and flag as izawa_like; tr(JX) vanishes identically",
        "chart": {"vars": ["x", "y", "w", "t"]},
        "foliation1": {"vector_field": X},
        "foliation2": {"one_form": omega},
        "integrating_factor": {"f": "1", "g": g},
        "points": points[:1],
        "tasks": ["check_flag", "res_c1n", "binomial"],
        "quad": {"radii": 0.125, "rel_tol": 1e-10, "max_nodes": 64},
    }


def pn_problem() -> dict:
    return {
        "name": "flag X = d/dz3, omega = z0 dz1 - z1 dz0 on P^n: residue table",
        "_source": "F1 = O(1), F2 = O(1)^(n-1); c1(N12) = (n-2)h, c1(N2) = 2h",
        "projective": [
            {"n": n, "F1_twists": [1], "F2_twists": [1] * (n - 1), "j_values": list(range(n))}
            for n in range(3, 9)
        ],
        "expected_closed_form": "(n-2)^(n-1-j)*2^(1+j)",
        "tasks": ["chern_pn"],
    }


def semistability_problem() -> dict:
    return {
        "name": "semi-stable F = O(1)+O(1) on P^3 with F1 = O(1)",
        "_source": "positivity of residues for semi-stable foliations; example on P^3",
        "_comment": "The example's value 2^3 is the j = 2 entry; the proof's (a-b)^n gives 1. Both are reported.",
        "projective": {"n": 3, "F1_twists": [1], "F2_twists": [1, 1], "j_values": [0, 1, 2]},
        "positivity": {"n": 3, "F_twists": [1, 1], "F1_twists": [1], "j": 2, "expected": 8},
        "tasks": ["chern_pn", "positivity"],
    }


def pn_chart_problem() -> dict:
    return {
        "name": "P^3 flag in the chart z3 = 1 around [0:0:0:1]",
        "_source": "X = d/dz3 becomes the radial field -(u0, u1, u2); omega = u0 du1 - u1 du0",
        "chart": {"vars": ["z0", "z1", "z2"]},
        "foliation1": {"vector_field": ["-z0", "-z1", "-z2"]},
        "foliation2": {"one_form": ["-z1", "z0", "0"]},
        "points": [{"coords": ["0", "0", "0"], "label": "[0:0:0:1]"}],
        "tasks": ["check_flag", "singular_loci", "singular_inclusion", "res_cn_vf"],
    }


def log_flag_problem() -> dict:
    l1, l2, l3 = 1, 2, 3
    a1, a2, a3 = f"({l3 - l2})/{l1}", f"({l1 - l3})/{l2}", f"({l2 - l1})/{l3}"
    return {
        "name": "logarithmic flag on P^3, lambda = (1, 2, 3), chart z0 = 1",
        "_source": "X = sum lambda_i z_i d/dz_i with the logarithmic 1-form of its osculating planes",
        "_comment": [
            "eta1 = omega satisfies d eta1 = (sum dz_i/z_i) ^ eta1, so theta2 = sum dz_i/z_i.",
            "eta2 = z1 z2 z3 (dz1/z1 + dz2/z2 - dz3/z3) also annihilates X (1 + 2 - 3 = 0); "
            "d eta2 = (sum dz_i/z_i) ^ eta2, so theta22 = sum dz_i/z_i and theta12 = -theta22.",
        ],
        "chart": {"vars": ["z1", "z2", "z3"]},
        "foliation1": {"vector_field": [f"{l1}*z1", f"{l2}*z2", f"{l3}*z3"]},
        "foliation2": {"one_form": [f"{a1}*z2*z3", f"{a2}*z1*z3", f"{a3}*z1*z2"]},
        "theta12": ["-1/z1", "-1/z2", "-1/z3"],
        "theta2": ["1/z1", "1/z2", "1/z3"],
        "points": [{"coords": ["0", "0", "0"], "label": "[1:0:0:0]"}],
        "tasks": ["check_flag", "singular_inclusion", "res_cn_vf", "closedness"],
    }


def constructed_n2() -> dict:
    return {
        "name": "constructed flag X = (x^2, y^3), omega = -y^3 dx + x^2 dy",
        "_source": "X = (f1, f2) with omega coefficients (-f2, f1); mu = 6 on both sides",
        "chart": {"vars": ["x", "y"]},
        "foliation1": {"vector_field": ["x^2", "y^3"]},
        "foliation2": {"one_form": ["-y^3", "x^2"]},
        "points": [{"coords": ["0", "0"], "label": "origin"}],
        "tasks": ["check_flag", "singular_loci", "singular_inclusion", "res_cn_vf", "res_cn_form", "comparison"],
    }


def degenerate_n2() -> dict:
    return {
        "name": "control: omega coefficients (x^2, x^2) do not generate the ideal of X",
        "chart": {"vars": ["x", "y"]},
        "foliation1": {"vector_field": ["x^2", "y^3"]},
        "foliation2": {"one_form": ["x^2", "x^2"]},
        "points": [{"coords": ["0", "0"], "label": "origin"}],
        "tasks": ["comparison"],
    }


def exact_n2() -> dict:
    return {
        "name": "flag with integrating factor: omega = (1 + y) d(xy + x^3), X Hamiltonian for g",
        "_source": "omega = f dg with f(0) != 0; both sides of the binomial identity equal the c1^2 integral",
        "chart": {"vars": ["x", "y"]},
        "foliation1": {"vector_field": ["x", "-y - 3*x^2"]},
        "foliation2": {"one_form": ["(1 + y)*(y + 3*x^2)", "(1 + y)*x"]},
        "integrating_factor": {"f": "1 + y", "g": "x*y + x^3"},
        "points": [{"coords": ["0", "0"], "label": "origin"}],
        "tasks": ["check_flag", "comparison", "res_c1n", "binomial"],
    }


def diagonal_n2() -> dict:
    return {
        "name": "diagonal field X = (x, y) with omega = y dx - x dy = -x^2 d(y/x)",
        "_source": "mu = 1 on both sides; the only integrating factor, -x^2, vanishes at the origin",
        "chart": {"vars": ["x", "y"]},
        "foliation1": {"vector_field": ["x", "y"]},
        "foliation2": {"one_form": ["y", "-x"]},
        "points": [{"coords": ["0", "0"], "label": "origin"}],
        "tasks": ["check_flag", "res_cn_vf", "res_cn_form", "comparison"],
    }


def normal_form_problem(name, vars_, X, label, tasks=("no_isolated",)) -> dict:
    return {
        "name": name,
        "_source": "F2 regular with omega = dz1; the flag forces f1 = 0",
        "chart": {"vars": vars_},
        "foliation1": {"vector_field": X},
        "foliation2": {"one_form": ["1"] + ["0"] * (len(vars_) - 1)},
        "tasks": list(tasks),
        "_label": label,
    }


def milnor_corpus() -> dict:
    I = []

    def add(vars_, gens, expected, point=None, numeric=True, note=None):
        item = {"vars": vars_, "generators": gens, "expected": expected}
        if point is not None:
            item["point"] = point
        if not numeric:
            item["numeric"] = False
        if note:
            item["_note"] = note
        I.append(item)

    xy, xyz, xyzw = ["x", "y"], ["x", "y", "z"], ["x", "y", "z", "w"]
    for a, b in [(1, 1), (2, 3), (3, 4), (5, 7), (10, 20), (8, 25)]:
        add(xy, [f"x^{a}", f"y^{b}"], a * b)
    add(xyz, ["x^2", "y^3", "z^4"], 24)
    add(xyz, ["x^5", "y^5", "z^8"], 200)
    add(xyzw, ["x^3", "y^4", "z^5", "w^2"], 120)
    add(xy, ["x + x^2", "y"], 1, note="x(1 + x): the second factor is a unit")
    add(xy, ["x + y^2", "y + x^2"], 1)
    add(xy, ["x^2 + y^3", "y^2 + x^3"], 4)
    add(xy, ["x^3 + y^4", "y^2 + x^5"], 6)
    add(xy, ["x^2 + x*y^2", "y^3 + x^4"], 6, note="branches x = 0 and x = -y^2 contribute 3 each")
    add(xy, ["x^2*(1 + y)", "y^3*(2 - x)"], 6)
    add(xyz, ["x + y^2", "y + z^2", "z + x^2"], 1)
    add(xyz, ["x^2 + y^3", "y^2 + z^3", "z^2 + x^3"], 8)
    add(xy, ["x^2 - 1", "y - 1"], 1, point=["1", "1"])
    add(xy, ["(x - 1)^3", "(y + 1)^2"], 6, point=["1", "-1"])
    add(xy, ["(x - 1/2)^2 + y^3", "y^2"], 4, point=["1/2", "0"])
    add(xy, ["x^2 + y^3", "x*y"], 5, numeric=False,
        note="x^2 dominates y^3 on every equal-radius torus, which is then not a residue cycle")
    add(xy, ["x", "x + y"], 1, numeric=False, note="x + y vanishes on the diagonal torus")
    return {
        "name": "zero-dimensional ideals with known local multiplicity",
        "_source": "monomial ideals (staircase count = product of exponents) and perturbations",
        "ideals": I,
        "tasks": ["milnor"],
    }


def theta_problem() -> dict:
    return {
        "name": "connection forms theta12, theta2 from explicit flags",
        "_comment": [
            "log3: the logarithmic flag on P^3 (see log_flag.json).",
            "regular3: eta1 = dy, eta2 = dx, X = d/dw; theta2 = x dy and theta12 = w dx + x dy satisfy "
            "d eta1 = theta2 ^ eta1 and d eta2 = theta21 ^ eta1 + theta22 ^ eta2 with theta22 = -theta12, theta21 = -x dx.",
            "linear6: eta1 = dx1, eta2 = dx2 in C^6 (k1 = 2, k2 = 1); theta2 = x3 dx1, theta12 = x4 dx2 + x5 dx1.",
            "log6: eta1, eta2 logarithmic 1-forms times x1...x6 in C^6 (k1 = 2); theta2 = -theta12 = sum dx_i/x_i.",
        ],
        "theta_entries": [
            {"label": "log3", "vars": ["z1", "z2", "z3"], "theta12": ["-1/z1", "-1/z2", "-1/z3"],
             "theta2": ["1/z1", "1/z2", "1/z3"], "k1": 2, "k2": 1},
            {"label": "regular3", "vars": ["x", "y", "w"], "theta12": ["w", "x", "0"],
             "theta2": ["0", "x", "0"], "k1": 2, "k2": 1},
            {"label": "linear6", "vars": [f"x{i}" for i in range(1, 7)],
             "theta12": ["x5", "x4", "0", "0", "0", "0"], "theta2": ["0", "0", "0", "0", "0", "0"],
             "k1": 2, "k2": 1},
            {"label": "linear6b", "vars": [f"x{i}" for i in range(1, 7)],
             "theta12": ["x5", "x4", "0", "0", "0", "0"], "theta2": ["x3", "0", "0", "0", "0", "0"],
             "k1": 2, "k2": 1},
            {"label": "log6", "vars": [f"x{i}" for i in range(1, 7)],
             "theta12": [f"-1/x{i}" for i in range(1, 7)], "theta2": [f"1/x{i}" for i in range(1, 7)],
             "k1": 2, "k2": 1},
        ],
        "tasks": ["closedness"],
    }


def regular_flag_problem() -> dict:
    return {
        "name": "regular flag X = d/dw, omega = dy with explicit connection forms",
        "chart": {"vars": ["x", "y", "w"]},
        "foliation1": {"vector_field": ["0", "0", "1"]},
        "foliation2": {"one_form": ["0", "1", "0"]},
        "theta12": ["w", "x", "0"],
        "theta2": ["0", "x", "0"],
        "tasks": ["check_flag", "singular_inclusion", "closedness"],
    }


def corpus() -> dict:
    return {
        "pn_example": pn_problem(),
        "semistability": semistability_problem(),
        "pn_chart": pn_chart_problem(),
        "log_flag": log_flag_problem(),
        "izawa_like": izawa_problem(2),
        "izawa_like_l3": izawa_problem(3),
        "final_example": final_problem(),
        "constructed_n2": constructed_n2(),
        "degenerate_n2": degenerate_n2(),
        "exact_n2": exact_n2(),
        "diagonal_n2": diagonal_n2(),
        "normal_form": normal_form_problem("omega = dz1, X = (0, z2, z3): the z1-axis is singular", ["z1", "z2", "z3"],
                         ["0", "z2", "z3"], "3 variables", ("check_flag", "no_isolated")),
        "normal_form_plane": normal_form_problem("omega = dz1, X = (0, z2): the line z2 = 0 is singular", ["z1", "z2"],
                               ["0", "z2"], "2 variables", ("check_flag", "no_isolated")),
        "normal_form_control": normal_form_problem("control: X = (z1, z2) is not tangent to dz1", ["z1", "z2"],
                                 ["z1", "z2"], "control"),
        "milnor_ideals": milnor_corpus(),
        "theta_forms": theta_problem(),
        "regular_flag": regular_flag_problem(),
    }


def render(data: dict) -> str:
    return json.dumps(data, indent=2) + "\n"


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--check", action="store_true")
    ap.add_argument("--out", type=Path, default=OUT)
    args = ap.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)
    stale = []
    for name, data in corpus().items():
        path = args.out / f"{name}.json"
        text = render(data)
        if args.check:
            if not path.exists() or path.read_text() != text:
                stale.append(path.name)
        else:
            path.write_text(text)
    if stale:
        print("stale corpus files: " + ", ".join(stale), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
