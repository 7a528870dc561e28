"""Residues of the hypersurface flag for several l.

    python scripts/hypersurface_example.py [--l 2 3] [--nodes 64]

For each singular point the Milnor number of X is computed twice (standard
basis, torus quadrature), together with the residue ratio for the 1-form.
The last column compares mu with the reference value (l-1)^2 recorded in
the corpus; the two agree only at l = 2.
"""
import argparse
import sys
import time
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

from make_corpus import izawa_problem  # noqa: E402

from flagres import cli  # noqa: E402
from flagres import flag as fl  # noqa: E402


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--l", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--nodes", type=int, default=64)
    args = ap.parse_args()
    ok = True
    for l in args.l:
        prob = cli.Problem(izawa_problem(l), "", f"hypersurface l={l}")
        settings = prob.settings({"max_nodes": args.nodes})
        for pt, label in zip(prob.points, prob.labels):
            t0 = time.perf_counter()
            rep = fl.verify_comparison(prob.chart, pt, settings)
            vf, form = rep.children.get("vf"), rep.children.get("form")
            mu = vf.algebraic if vf else None
            num = vf.numeric.value.real if vf else float("nan")
            ratio = form.numeric.value.real / vf.numeric.value.real if vf and form else float("nan")
            ok &= rep.passed
            print(
                f"l={l} {label}: mu={mu} numeric={num:.10f} ratio={ratio:.10f} "
                f"reference (l-1)^2={(l - 1) ** 2} {'agrees' if mu == (l - 1) ** 2 else 'differs'} "
                f"[{'pass' if rep.passed else 'FAIL'}] {time.perf_counter() - t0:.1f}s"
            )
    return 0 if ok else 1


if __name__ == "__main__":
    raise SystemExit(main())
