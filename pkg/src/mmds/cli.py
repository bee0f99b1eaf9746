"""Command-line interface.

    mmds embed --input D.csv --m 2 --out-prefix out/ex [--svg]
    mmds embed --space space.json --m 2 --out-prefix out/weighted
    mmds euclidean-test --input D.csv
    mmds circle-demo --n 1000 --m 3 --out-prefix out/circle --svg
    mmds converge --scenario scenario.json --out-prefix out/conv
    mmds perturb --input D.csv --eps 0.01 --seed 3 --out-prefix out/noisy
    mmds strain --input D.csv --candidate X.csv

Exit codes: 0 ok, 2 I/O error, 3 validation error, 4 solver failure.
"""

import argparse
import json
import os
import sys

import numpy as np

from . import io as mio
from .circle import circle_mds_analytic, operator_eigenvalue_circle
from .classical import centered_gram, classical_mds, is_euclidean, strain
from .convergence import (
    ConvergenceReport,
    Stage,
    measure_sequence_experiment,
    perturb_dissimilarities,
    procrustes_align,
    sampling_convergence_experiment,
    sibson_stability,
)
from .errors import SolverError, ValidationError
from .measure import measure_mds, operator_strain
from .mmspace import (
    DiscreteMeasure,
    build_circle_space,
    build_euclidean_space,
    build_sphere_space,
    space_from_matrix,
    validate_dissimilarity,
)
from .svg import line_svg, scatter_svg

EXIT_OK, EXIT_IO, EXIT_VALIDATION, EXIT_SOLVER = 0, 2, 3, 4


class ScenarioError(ValidationError):
    def __init__(self, field, message):
        super().__init__(f"scenario field '{field}': {message}")
        self.field = field


def _out(prefix, suffix):
    path = f"{prefix}{suffix}"
    parent = os.path.dirname(path)
    if parent:
        os.makedirs(parent, exist_ok=True)
    return path


def _write(path, text):
    with open(path, "w", newline="") as fh:
        fh.write(text)


def _load_input(args):
    """Return ``(space, weighted)`` from ``--input`` (CSV) or ``--space`` (JSON)."""
    if args.space:
        space = mio.read_space_json(args.space)
        return space, not space.measure.is_uniform
    if args.input:
        d, header = mio.read_matrix_csv(args.input)
        labels = header if header and len(header) == d.shape[0] else None
        return space_from_matrix(validate_dissimilarity(d), labels=labels), False
    raise ValidationError("one of --input or --space is required")


def cmd_embed(args):
    space, weighted = _load_input(args)
    m = args.m
    side = {"n": space.n, "m": m}
    if weighted:
        emb = measure_mds(space, m)
        coords = emb.coords
        side.update(
            method="measure",
            eigenvalues=emb.spectrum.eigenvalues,
            retained_eigenvalues=emb.truncated_eigenvalues,
            strain=operator_strain(emb.spectrum, m),
            warnings=list(emb.warnings),
        )
    else:
        emb = classical_mds(space.dist, m)
        coords = emb.coords
        side.update(
            method="classical",
            eigenvalues=emb.eigenvalues,
            retained_eigenvalues=emb.retained_eigenvalues,
            strain=strain(centered_gram(space.dist), emb),
            warnings=list(emb.warnings),
        )
    eu = is_euclidean(space.dist, tol=args.tol)
    side.update(euclidean=eu["euclidean"], min_eigenvalue=eu["min_eigenvalue"])

    if args.format == "json":
        _write(_out(args.out_prefix, ".embedding.json"), mio.dumps({"coords": coords}))
    else:
        _write(_out(args.out_prefix, ".csv"), mio.format_matrix_csv(coords))
    _write(_out(args.out_prefix, ".json"), mio.dumps(side))
    if args.svg:
        labels = [str(p) for p in space.points] if space.n <= 50 else None
        _write(_out(args.out_prefix, ".svg"), scatter_svg(coords, "MDS embedding", labels))
    return side


def cmd_euclidean_test(args):
    space, _ = _load_input(args)
    res = is_euclidean(space.dist, tol=args.tol)
    text = mio.dumps(res)
    if args.out_prefix:
        _write(_out(args.out_prefix, ".json"), text)
    else:
        sys.stdout.write(text)
    return res


def _project3(coords):
    """Oblique projection of the first three coordinates onto the page."""
    x = np.zeros((coords.shape[0], 3))
    k = min(3, coords.shape[1])
    x[:, :k] = coords[:, :k]
    c, s = np.cos(np.pi / 6), np.sin(np.pi / 6)
    return np.column_stack([x[:, 0] + 0.5 * c * x[:, 2], x[:, 1] + 0.5 * s * x[:, 2]])


def cmd_circle_demo(args):
    n, m = args.n, args.m
    analytic = circle_mds_analytic(n, m)
    numeric = classical_mds(build_circle_space(n).dist, m)
    align = procrustes_align(numeric.coords, analytic.embedding.coords)
    lam = analytic.mode_eigenvalues
    kmax = min(n // 2, args.modes)
    eig_table = [
        {
            "k": k,
            "multiplicity": 1 if 2 * k == n else 2,
            "matrix_eigenvalue": lam[k],
            "operator_eigenvalue": lam[k] / n,
            "limit": operator_eigenvalue_circle(k),
        }
        for k in range(1, kmax + 1)
    ]
    coef_table = [{"j": j, "a_jn": a, "limit": np.sqrt(2.0) / j}
                  for j, a in sorted(analytic.coefficients.items()) if j <= 2 * args.modes]
    side = {
        "n": n,
        "m": m,
        "modes": list(analytic.modes),
        "mode0_eigenvalue": lam[0],
        "eigenvalues": eig_table,
        "coefficients": coef_table,
        "alignment_residual": align.residual,
        "warnings": list(analytic.embedding.warnings),
    }
    _write(_out(args.out_prefix, "_analytic.csv"), mio.format_matrix_csv(analytic.embedding.coords))
    _write(_out(args.out_prefix, "_numeric.csv"), mio.format_matrix_csv(numeric.coords))
    _write(_out(args.out_prefix, ".json"), mio.dumps(side))
    if args.svg:
        _write(_out(args.out_prefix, ".svg"),
               scatter_svg(_project3(analytic.embedding.coords), f"MDS of {n} circle points"))
    return side


def _scenario_space(spec):
    if not isinstance(spec, dict) or "kind" not in spec:
        raise ScenarioError("space", "must be an object with a 'kind'")
    kind = spec["kind"]
    try:
        if kind == "circle":
            return build_circle_space(int(spec["n"]), spec.get("measure", "uniform"))
        if kind == "sphere":
            return build_sphere_space(int(spec["n"]), int(spec.get("dim", 2)), int(spec.get("seed", 0)))
        if kind == "euclidean":
            return build_euclidean_space(spec["coords"])
        if kind == "file":
            path = spec["path"]
            if path.endswith(".json"):
                return mio.read_space_json(path)
            d, _ = mio.read_matrix_csv(path)
            return space_from_matrix(d)
    except KeyError as exc:
        raise ScenarioError(f"space.{exc.args[0]}", "missing") from None
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ScenarioError("space", str(exc)) from None
    raise ScenarioError("space.kind", f"unknown kind {kind!r}")


def _int_list(scn, key, default=None):
    val = scn.get(key, default)
    if val is None:
        raise ScenarioError(key, "missing")
    if not isinstance(val, list) or not val or not all(isinstance(v, int) and not isinstance(v, bool) for v in val):
        raise ScenarioError(key, "must be a nonempty list of integers")
    return val


def run_scenario(scn):
    if not isinstance(scn, dict):
        raise ScenarioError("<root>", "scenario must be a JSON object")
    space = _scenario_space(scn.get("space"))
    m = scn.get("m")
    if not isinstance(m, int) or isinstance(m, bool) or m < 1:
        raise ScenarioError("m", "must be an integer >= 1")
    seq = scn.get("sequence")
    if not isinstance(seq, dict) or "kind" not in seq:
        raise ScenarioError("sequence", "must be an object with a 'kind'")
    kind = seq["kind"]
    if kind == "iid":
        sizes = _int_list(scn, "sizes")
        seeds = _int_list(scn, "seeds")
        return sampling_convergence_experiment(space, sizes, m, seeds)
    if kind == "weights":
        if "hemisphere" in seq:
            if space.description.get("kind") != "circle":
                raise ScenarioError("sequence.hemisphere", "only valid for circle spaces")
            measures = [build_circle_space(space.n, ("hemisphere", q)).measure
                        for q in seq["hemisphere"]]
        elif "weights" in seq:
            try:
                measures = [DiscreteMeasure.normalized(w) for w in seq["weights"]]
            except (TypeError, ValueError) as exc:
                raise ScenarioError("sequence.weights", str(exc)) from None
        else:
            raise ScenarioError("sequence", "weights sequence needs 'hemisphere' or 'weights'")
        if not measures:
            raise ScenarioError("sequence", "empty measure list")
        return measure_sequence_experiment(space, measures, m)
    if kind == "perturb":
        eps = seq.get("eps")
        if not isinstance(eps, list) or not eps:
            raise ScenarioError("sequence.eps", "must be a nonempty list of numbers")
        trials = seq.get("trials", 10)
        seeds = _int_list(scn, "seeds", [0])
        rows = sibson_stability(space.dist, m, eps, int(trials), seeds[0])
        stages = [Stage(r.eps, 0.0, r.residual, (r.eigenvalue_drift,)) for r in rows]
        return ConvergenceReport(stages, {"space": dict(space.description), "m": m,
                                          "experiment": "perturbation", "trials": trials,
                                          "seed": seeds[0]})
    raise ScenarioError("sequence.kind", f"unknown kind {kind!r}")


def cmd_converge(args):
    if not args.scenario:
        raise ValidationError("--scenario is required")
    with open(args.scenario) as fh:
        try:
            scn = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError("<root>", f"invalid JSON: {exc}") from None
    report = run_scenario(scn)
    _write(_out(args.out_prefix, ".json"), mio.dumps(report.to_dict()))
    _write(_out(args.out_prefix, ".csv"), mio.report_to_csv(report))
    xs = list(range(len(report.stages)))
    _write(_out(args.out_prefix, ".svg"),
           line_svg(xs, [("aligned residual", report.residuals), ("tv distance", report.tv_distances)],
                    "Convergence", "stage", "value"))
    return report


def cmd_perturb(args):
    space, _ = _load_input(args)
    out = perturb_dissimilarities(space.dist, args.eps, args.seed)
    _write(_out(args.out_prefix, ".csv"), mio.format_matrix_csv(out.entries))
    return out


def cmd_strain(args):
    space, _ = _load_input(args)
    b = centered_gram(space.dist)
    if args.candidate:
        cand, _ = mio.read_matrix_csv(args.candidate)
    else:
        cand = classical_mds(space.dist, args.m).coords
    res = {"strain": strain(b, cand)}
    text = mio.dumps(res)
    if args.out_prefix:
        _write(_out(args.out_prefix, ".json"), text)
    else:
        sys.stdout.write(text)
    return res


HANDLERS = {
    "embed": cmd_embed,
    "euclidean-test": cmd_euclidean_test,
    "circle-demo": cmd_circle_demo,
    "converge": cmd_converge,
    "perturb": cmd_perturb,
    "strain": cmd_strain,
}


def build_parser():
    p = argparse.ArgumentParser(prog="mmds", description="Classical and metric-measure MDS toolkit")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, prefix_default="mmds_out"):
        sp.add_argument("--input", help="dissimilarity matrix CSV")
        sp.add_argument("--space", help="metric measure space JSON")
        sp.add_argument("--m", type=int, default=2, help="target dimension")
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--out-prefix", default=prefix_default)
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--svg", action="store_true")
        sp.add_argument("--tol", type=float, default=None)
        sp.add_argument("--error-json", action="store_true", help="print errors as JSON on stdout")

    common(sub.add_parser("embed", help="embed a matrix (classical) or weighted space (measure MDS)"))
    common(sub.add_parser("euclidean-test", help="test whether a matrix is Euclidean"), None)
    c = sub.add_parser("circle-demo", help="analytic vs numeric MDS of the geodesic circle")
    common(c)
    c.add_argument("--n", type=int, default=1000)
    c.add_argument("--modes", type=int, default=10, help="rows in the eigenvalue table")
    cv = sub.add_parser("converge", help="run a convergence scenario")
    common(cv)
    cv.add_argument("--scenario", help="scenario JSON")
    pt = sub.add_parser("perturb", help="add symmetric noise to a matrix")
    common(pt)
    pt.add_argument("--eps", type=float, default=0.01)
    st = sub.add_parser("strain", help="strain of a configuration against a matrix")
    common(st, None)
    st.add_argument("--candidate", help="configuration CSV (n rows); default is the classical solution")
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "m", 1) is not None and args.m < 1:
        parser.error("--m must be >= 1")
    try:
        HANDLERS[args.command](args)
    except OSError as exc:
        return _fail(args, EXIT_IO, exc)
    except ValidationError as exc:
        return _fail(args, EXIT_VALIDATION, exc)
    except SolverError as exc:
        return _fail(args, EXIT_SOLVER, exc)
    return EXIT_OK


def _fail(args, code, exc):
    payload = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    if getattr(exc, "field", None):
        payload["field"] = exc.field
    if args.error_json:
        sys.stdout.write(json.dumps(payload, sort_keys=True) + "\n")
    else:
        sys.stderr.write(f"mmds: error: {exc}\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
