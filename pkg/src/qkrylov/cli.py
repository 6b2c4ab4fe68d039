"""Command-line experiment runner.

``qkrylov <command> [--config FILE] [--seed N] [--eps X] [--delta X] [--out DIR] [--FIELD VALUE ...]``

Each command reads a flat JSON config whose fields can all be overridden
by a flag of the same name. Results go to ``report.json``, ``report.csv``
and one ``.dat`` file per curve; the wall time lives in ``wall_time.json``
so that the report itself is byte-identical across runs with one seed.
The exit status is 0 only when every bound-checked row passes.
"""

from __future__ import annotations

import argparse
import itertools
import json
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import applications, arnoldi, cg, io, lcu, stationary
from .errors import BoundViolated, ConfigInvalid, InputUnreadable, ParamInvalid, QKrylovError
from .linalg import hermitian_with_spectrum, is_hermitian, normalize, random_state, random_unitary
from .report import ExperimentReport, config_hash, to_jsonable

EXPERIMENTS = ("arnoldi", "cg", "stationary", "triangle", "polygon", "power", "lcu-bench", "matmul")
COMMANDS = EXPERIMENTS + ("generate",)
MATRIX_KINDS = ("spd-spectrum", "hermitian-spectrum", "contraction", "laplacian", "adjacency-random")
MAX_CONTRACTION = 0.95


def _int_list(text):
    if isinstance(text, list):
        return [int(v) for v in text]
    return [int(v) for v in str(text).replace(" ", "").split(",") if v]


def _float_list(text):
    if isinstance(text, list):
        return [float(v) for v in text]
    return [float(v) for v in str(text).replace(" ", "").split(",") if v]


def _bool(text):
    if isinstance(text, bool):
        return text
    if str(text).lower() in ("1", "true", "yes"):
        return True
    if str(text).lower() in ("0", "false", "no"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


# name -> (parser, default, help)
FIELDS = {
    "seed": (int, 0, "64-bit seed for every random draw"),
    "eps": (float, 1e-3, "accuracy target"),
    "delta": (float, 0.05, "failure probability (stationary, lcu, matmul) or breakdown threshold"),
    "out": (str, "out", "output directory"),
    "matrix": (str, "", "Matrix Market input (generated from the seed when empty)"),
    "matrix_b": (str, "", "second Matrix Market operand for matmul"),
    "vector": (str, "", "start/right-hand-side vector file"),
    "graph": (str, "", "edge list or Matrix Market adjacency"),
    "n": (int, 16, "dimension or vertex count for generated inputs"),
    "kappa": (float, 10.0, "condition number for generated inputs"),
    "rho": (float, 0.9, "spectral radius for generated contractions"),
    "p": (float, 0.5, "edge probability for random graphs"),
    "trials": (int, 10, "number of random instances"),
    "m_grid": (_int_list, [2, 4, 6], "Krylov dimensions / CG step counts"),
    "eta_grid": (_int_list, [1, 2, 3, 4], "stationary iteration counts"),
    "l_grid": (_int_list, [2, 4, 8], "number of combined states or polygon sizes"),
    "mu_grid": (_float_list, [2.0, 3.0], "power-iteration shifts"),
    "method": (str, "improved", "arnoldi: improved or direct"),
    "leaves": (str, "postselect", "arnoldi: power states by postselect or pm-pairs"),
    "scheme": (str, "rotation-tree", "cg: rotation-tree or postselect"),
    "kind": (str, "spd-spectrum", "generate: matrix kind"),
    "graph_kind": (str, "cycle", "generate laplacian: cycle, path, star or complete"),
    "normalized": (_bool, False, "generate laplacian: symmetric normalization"),
    "path": (str, "", "generate: output Matrix Market path"),
}

CHOICES = {
    "method": ("improved", "direct"),
    "leaves": ("postselect", "pm-pairs"),
    "scheme": ("rotation-tree", "postselect"),
    "kind": MATRIX_KINDS,
    "graph_kind": ("cycle", "path", "star", "complete"),
}

COMMON = ("seed", "eps", "delta", "out")
COMMAND_FIELDS = {
    "arnoldi": COMMON + ("matrix", "vector", "n", "m_grid", "method", "leaves"),
    "cg": COMMON + ("matrix", "vector", "n", "kappa", "m_grid", "scheme"),
    "stationary": COMMON + ("matrix", "vector", "n", "rho", "eta_grid"),
    "triangle": COMMON + ("graph", "n", "p", "trials"),
    "polygon": COMMON + ("graph", "n", "p", "trials", "l_grid"),
    "power": COMMON + ("matrix", "vector", "n", "mu_grid", "trials"),
    "lcu-bench": COMMON + ("n", "l_grid", "trials"),
    "matmul": COMMON + ("matrix", "matrix_b", "n", "trials"),
    "generate": COMMON + ("kind", "n", "kappa", "rho", "p", "graph_kind", "normalized", "path"),
}

COMMAND_DEFAULTS = {
    "cg": {"m_grid": [1, 2, 3, 4, 5], "delta": 1e-4},
    "arnoldi": {"delta": 1e-4},
    "stationary": {"n": 8, "eps": 1e-2},
    "triangle": {"n": 10, "trials": 20},
    "polygon": {"n": 7, "trials": 10, "l_grid": [3, 4, 5], "eps": 1e-5},
    "power": {"n": 16, "trials": 5},
    "lcu-bench": {"n": 8},
    "matmul": {"n": 4, "eps": 0.02, "trials": 3},
}


@dataclass
class ExperimentConfig:
    command: str
    params: dict = field(default_factory=dict)

    def __getitem__(self, key):
        return self.params[key]

    @property
    def seed(self) -> int:
        return self.params["seed"]

    def validate(self) -> "ExperimentConfig":
        if self.command not in COMMANDS:
            raise ConfigInvalid(f"unknown command {self.command!r}\n{usage()}")
        s = self.params["seed"]
        if not 0 <= s < 2 ** 64:
            raise ConfigInvalid("seed must be a 64-bit unsigned integer")
        for key in ("eps", "delta"):
            if key in self.params and not 0 < self.params[key] < 1:
                raise ConfigInvalid(f"{key} must lie in (0, 1)")
        for key, v in self.params.items():
            if key.endswith("_grid") and not v:
                raise ConfigInvalid(f"{key} must not be empty")
            if key in CHOICES and v not in CHOICES[key]:
                raise ConfigInvalid(f"{key} must be one of {', '.join(CHOICES[key])}, not {v!r}")
        return self

    def identity(self) -> dict:
        """The config minus the output directory, which says where results go, not what they are."""
        return {"command": self.command, **{k: v for k, v in self.params.items() if k != "out"}}

    def hashed(self) -> str:
        return config_hash(self.identity())


def usage() -> str:
    return ("usage: qkrylov {" + ",".join(COMMANDS) + "} [--config FILE] [--seed N] "
            "[--eps X] [--delta X] [--out DIR] [--FIELD VALUE ...]")


def build_config(command: str, file_values: dict | None = None, overrides: dict | None = None) -> ExperimentConfig:
    """Defaults, then the config file, then command-line overrides."""
    if command not in COMMANDS:
        raise ConfigInvalid(f"unknown command {command!r}\n{usage()}")
    allowed = COMMAND_FIELDS[command]
    params = {k: FIELDS[k][1] for k in allowed}
    params.update(COMMAND_DEFAULTS.get(command, {}))
    for source in (file_values or {}, overrides or {}):
        for key, value in source.items():
            if key == "command":
                if value != command:
                    raise ConfigInvalid(f"config is for {value!r}, not {command!r}")
                continue
            if key not in allowed:
                raise ConfigInvalid(f"field {key!r} does not apply to {command!r}")
            try:
                params[key] = FIELDS[key][0](value)
            except (TypeError, ValueError) as exc:
                raise ConfigInvalid(f"field {key!r}: {exc}") from exc
    return ExperimentConfig(command, params).validate()


def load_config_file(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise InputUnreadable(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigInvalid(f"{path}: invalid JSON ({exc})") from exc
    if not isinstance(data, dict) or any(isinstance(v, dict) for v in data.values()):
        raise ConfigInvalid("config must be a flat JSON object")
    return data


# --------------------------------------------------------------------------
# test inputs


def _laplacian(graph_kind: str, n: int, normalized: bool):
    g = {"cycle": [(i, (i + 1) % n) for i in range(n)],
         "path": [(i, i + 1) for i in range(n - 1)],
         "star": [(0, i) for i in range(1, n)],
         "complete": list(itertools.combinations(range(n), 2))}
    if graph_kind not in g:
        raise ParamInvalid(f"unknown graph kind {graph_kind!r}")
    graph = applications.Graph.from_edges(n, g[graph_kind])
    if normalized:
        return applications.normalized_laplacian(graph)
    A = graph.adjacency
    return np.diag(A.sum(axis=1)) - A


def _laplacian_spectrum(graph_kind: str, n: int, normalized: bool):
    k = np.arange(n)
    if graph_kind == "cycle" and not normalized:
        return np.sort(2 - 2 * np.cos(2 * np.pi * k / n))
    return np.linalg.eigvalsh(_laplacian(graph_kind, n, normalized))


def test_matrix(kind: str, params: dict, seed: int):
    """``(matrix, metadata)`` for one of :data:`MATRIX_KINDS`."""
    n = int(params.get("n", 16))
    if n < 1:
        raise ParamInvalid("n must be positive")
    rng = np.random.default_rng(seed)
    meta = {"kind": kind, "n": n, "seed": seed}
    if kind == "spd-spectrum":
        kappa = float(params.get("kappa", 10.0))
        if kappa < 1:
            raise ParamInvalid("kappa must be at least 1")
        inner = rng.uniform(1 / kappa, 1, max(n - 2, 0))
        ev = np.sort(np.concatenate([[1 / kappa, 1.0][: n], inner]))
        meta.update(kappa=kappa, condition_number=float(ev.max() / ev.min()))
    elif kind == "hermitian-spectrum":
        ev = np.sort(np.concatenate([[-1.0, 1.0][: n], rng.uniform(-1, 1, max(n - 2, 0))]))
    elif kind == "contraction":
        rho = float(params.get("rho", 0.9))
        if not 0 < rho <= MAX_CONTRACTION:
            raise ParamInvalid(f"rho must lie in (0, {MAX_CONTRACTION}]")
        ev = np.sort(np.concatenate([[rho], rng.uniform(-rho, rho, n - 1)]))
        meta.update(rho=rho)
    elif kind == "laplacian":
        gk = params.get("graph_kind", "cycle")
        norm = bool(params.get("normalized", False))
        L = _laplacian(gk, n, norm)
        ev = _laplacian_spectrum(gk, n, norm)
        meta.update(graph_kind=gk, normalized=norm, spectrum=ev)
        return L.astype(complex), meta
    elif kind == "adjacency-random":
        p = float(params.get("p", 0.5))
        if not 0 <= p <= 1:
            raise ParamInvalid("p must lie in [0, 1]")
        g = applications.Graph.random(n, p, rng)
        meta.update(p=p, spectrum=np.linalg.eigvalsh(g.adjacency.astype(float)))
        return g.adjacency.astype(complex), meta
    else:
        raise ParamInvalid(f"unknown matrix kind {kind!r}")
    Q = random_unitary(n, rng, real=True)
    A = (Q * ev) @ Q.T
    A = (A + A.T) / 2
    meta["spectrum"] = ev
    return A.astype(complex), meta


def generate_test_matrix(kind: str, params: dict, seed: int, path) -> Path:
    """Write the matrix to ``path`` (Matrix Market) and its spectrum to ``path.meta.json``."""
    A, meta = test_matrix(kind, params, seed)
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    io.write_matrix(path, A, comment=f"{kind} seed={seed}")
    meta_path = path.with_name(path.name + ".meta.json")
    meta_path.write_text(json.dumps(to_jsonable(meta), sort_keys=True, indent=2) + "\n")
    return path


def _matrix(cfg: ExperimentConfig, kind: str, **params):
    if cfg["matrix"]:
        return io.read_matrix(cfg["matrix"])
    return test_matrix(kind, {"n": cfg["n"], **params}, cfg.seed)[0]


def _vector(cfg: ExperimentConfig, n: int, rng):
    if cfg["vector"]:
        v = io.read_vector(cfg["vector"])
        if v.shape[0] != n:
            raise ConfigInvalid(f"vector has length {v.shape[0]}, matrix has dimension {n}")
        return normalize(v)
    return random_state(n, rng)


def _graphs(cfg: ExperimentConfig, rng):
    if cfg["graph"]:
        path = cfg["graph"]
        if str(path).endswith(".mtx"):
            adj = np.rint(io.read_matrix(path).real).astype(int)
        else:
            adj = io.read_edge_list(path)
        try:
            return [applications.Graph(adj)]
        except ValueError as exc:
            raise InputUnreadable(f"{path}: {exc}") from exc
    return [applications.Graph.random(cfg["n"], cfg["p"], rng) for _ in range(cfg["trials"])]


# --------------------------------------------------------------------------
# experiments


def _run_arnoldi(cfg, rng) -> ExperimentReport:
    A = _matrix(cfg, "hermitian-spectrum")
    x0 = _vector(cfg, A.shape[0], rng)
    rep = ExperimentReport("arnoldi")
    lam_max = float(np.linalg.eigvalsh(A).max()) if is_hermitian(A) else float("nan")
    curve = ([], [])
    for m in cfg["m_grid"]:
        c = arnoldi.classical_arnoldi(A, x0, m, cfg["delta"])
        if cfg["method"] == "improved":
            q = arnoldi.quantum_arnoldi_improved(A, x0, m, cfg["delta"], cfg["eps"], rng, path=cfg["leaves"])
        elif cfg["method"] == "direct":
            q = arnoldi.quantum_arnoldi_direct(A, x0, m, cfg["delta"], cfg["eps"], rng)
        else:
            raise ConfigInvalid(f"unknown arnoldi method {cfg['method']!r}")
        cols = min(q.columns, c.columns)
        err = np.abs(q.H[: cols + 1, :cols] - c.H[: cols + 1, :cols])
        top = arnoldi.ritz_pairs(q)[0].value.real
        row = rep.add(m=m, method=cfg["method"], columns=q.columns, breakdown_step=q.breakdown_step,
                      ritz_max=top, true_max=lam_max, ritz_error=abs(top - lam_max),
                      measured_error=float(err.max()),
                      query_count=int(sum(q.details.get("counters", {}).values())))
        if "h_error_bound" in q.details:
            hb = q.details["h_error_bound"][: cols + 1, :cols]
            row["predicted_bound"] = float(hb.max())
            row["entrywise_ok"] = bool(np.all(err <= hb + 1e-10))
            rep.check_bound(row)
            row["bound_ok"] = row["bound_ok"] and row["entrywise_ok"]
        curve[0].append(m)
        curve[1].append(abs(top - lam_max))
    rep.curves["ritz_error"] = curve
    return rep


def _run_cg(cfg, rng) -> ExperimentReport:
    A = _matrix(cfg, "spd-spectrum", kappa=cfg["kappa"])
    b = _vector(cfg, A.shape[0], rng)
    rep = ExperimentReport("cg")
    curve = ([], [])
    for m in cfg["m_grid"]:
        _, sub = cg.quantum_cg(A, b, m, cfg["delta"], cfg["eps"], cfg["scheme"], rng)
        final = dict(sub.rows[-1])
        final["m_requested"] = m
        rep.rows.append(final)
        curve[0].append(m)
        curve[1].append(final["fidelity"])
    rep.curves["fidelity"] = curve
    return rep


def _run_stationary(cfg, rng) -> ExperimentReport:
    A = _matrix(cfg, "contraction", rho=cfg["rho"])
    b = _vector(cfg, A.shape[0], rng)
    p = stationary.StationaryProblem(A, b, np.zeros_like(b), max(cfg["eta_grid"]))
    return stationary.compare_methods(p, cfg["eps"], cfg["eta_grid"])


def _brute_triangle(g) -> bool:
    a = g.adjacency
    return any(a[i, j] and a[j, k] and a[i, k] for i, j, k in itertools.combinations(range(g.n), 3))


def _run_triangle(cfg, rng) -> ExperimentReport:
    rep = ExperimentReport("triangle")
    for gid, g in enumerate(_graphs(cfg, rng)):
        res = applications.triangle_search(g, cfg["eps"], rng)
        truth = _brute_triangle(g)
        rep.add(graph=gid, n=g.n, edges=int(g.adjacency.sum() // 2), triangle=list(res.triangle or []),
                found=res.triangle is not None, brute_force=truth,
                agree=(res.triangle is not None) == truth, probes=res.probes,
                probe_eps=res.probe_eps, quantum_cost=res.quantum_cost)
    rep.summary["all_agree"] = all(r["agree"] for r in rep.rows)
    return rep


def _run_polygon(cfg, rng) -> ExperimentReport:
    rep = ExperimentReport("polygon")
    for gid, g in enumerate(_graphs(cfg, rng)):
        for l in cfg["l_grid"]:
            if l > g.n:
                continue
            res = applications.polygon_search(g, l, cfg["eps"], rng)
            diag = np.diag(np.linalg.matrix_power(g.adjacency, l))
            rep.add(graph=gid, n=g.n, l=l, cycle=list(res.cycle or []), found=res.cycle is not None,
                    closed_walk_vertices=res.closed_walk_vertices,
                    detection_matches=sorted(res.closed_walk_vertices) == [int(i) for i in np.flatnonzero(diag)],
                    probes=res.probes)
    rep.summary["caveat"] = applications.PolygonSearch.caveat
    return rep


def _run_power(cfg, rng) -> ExperimentReport:
    rep = ExperimentReport("power")
    if cfg["matrix"]:
        mats = [io.read_matrix(cfg["matrix"])]
    else:
        # one dominant eigenvalue at 0.9, the rest inside [-0.7, 0.7]
        mats = [hermitian_with_spectrum(np.concatenate([[0.9], rng.uniform(-0.7, 0.7, cfg["n"] - 1)]), rng)
                for _ in range(cfg["trials"])]
    for t, A in enumerate(mats):
        b0 = _vector(cfg, A.shape[0], rng)
        for mu in cfg["mu_grid"]:
            run = applications.power_iteration_shifted(A, mu, cfg["eps"], b0=b0, rng=rng)
            true = run.details["true_eigenvalue"]
            row = rep.add(instance=t, mu=mu, eta=run.eta, converged=run.details["converged"],
                          eigenvalue_estimate=run.eigenvalue_estimate, true_eigenvalue=true,
                          measured_error=abs(run.eigenvalue_estimate - true), predicted_bound=cfg["eps"],
                          shifted_kappa=run.shifted_kappa,
                          kappa_bound=applications.shifted_kappa_bound(mu) if mu > 1 else float("inf"),
                          c1_reference=applications.C1_REFERENCE)
            rep.check_bound(row)
    return rep


def _run_lcu(cfg, rng) -> ExperimentReport:
    rep = ExperimentReport("lcu-bench")
    n = cfg["n"]
    for l in cfg["l_grid"]:
        for t in range(cfg["trials"]):
            coeffs = rng.normal(size=l) + 1j * rng.normal(size=l)
            states = [random_state(n, rng) for _ in range(l)]
            spec = lcu.CombinationSpec(coeffs, states, target_eps=cfg["eps"])
            target = normalize(spec.target())
            ps = lcu.combine_postselect(spec)
            sp = lcu.combine_select_prepare(spec)
            tr = lcu.combine_rotation_tree(spec, rng, delta=cfg["delta"])
            row = rep.add(l=l, trial=t, postselect_probability=ps.success_probability,
                          postselect_closed_form=lcu.closed_form_postselect(spec),
                          select_prepare_probability=sp.success_probability,
                          select_prepare_closed_form=lcu.closed_form_select_prepare(spec),
                          tree_queries=tr.query_count,
                          scheme_disagreement=float(max(np.linalg.norm(ps.vector - tr.vector),
                                                        np.linalg.norm(sp.vector - tr.vector))),
                          measured_error=float(np.linalg.norm(tr.vector - target)),
                          predicted_bound=tr.achieved_error)
            rep.check_bound(row)
    return rep


def _run_matmul(cfg, rng) -> ExperimentReport:
    rep = ExperimentReport("matmul")
    n = cfg["n"]
    for t in range(cfg["trials"]):
        if cfg["matrix"]:
            A = io.read_matrix(cfg["matrix"])
            B = io.read_matrix(cfg["matrix_b"]) if cfg["matrix_b"] else A
        else:
            A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            A /= np.linalg.norm(A, 2)
            B /= np.linalg.norm(B, 2)
        est = applications.matrix_multiply_quantum(A, B, cfg["eps"], rng, cfg["delta"])
        row = rep.add(trial=t, n=A.shape[0], measured_error=float(np.abs(est - A @ B).max()),
                      predicted_bound=cfg["eps"])
        rep.check_bound(row)
        if cfg["matrix"]:
            break
    return rep


def _run_generate(cfg, rng) -> ExperimentReport:
    out = Path(cfg["out"])
    path = Path(cfg["path"]) if cfg["path"] else out / f"{cfg['kind']}-{cfg['n']}.mtx"
    params = {k: cfg[k] for k in ("n", "kappa", "rho", "p", "graph_kind", "normalized")}
    written = generate_test_matrix(cfg["kind"], params, cfg.seed, path)
    rep = ExperimentReport("generate")
    rep.add(kind=cfg["kind"], path=str(written), meta=str(written) + ".meta.json")
    return rep


RUNNERS = {
    "arnoldi": _run_arnoldi, "cg": _run_cg, "stationary": _run_stationary,
    "triangle": _run_triangle, "polygon": _run_polygon, "power": _run_power,
    "lcu-bench": _run_lcu, "matmul": _run_matmul, "generate": _run_generate,
}


def run_experiment(cfg: ExperimentConfig, write: bool = True) -> ExperimentReport:
    """Run one experiment, stamp every row with the seed and config hash, write outputs."""
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    start = time.perf_counter()
    rep = RUNNERS[cfg.command](cfg, rng)
    elapsed = time.perf_counter() - start
    h = cfg.hashed()
    for row in rep.rows:
        row["seed"] = cfg.seed
        row["config_hash"] = h
    rep.summary.update(config=cfg.identity(), config_hash=h,
                       bound_rows=len(rep.bound_rows()), failed_rows=len(rep.failed_rows()))
    if write:
        out = Path(cfg["out"])
        rep.write(out)
        (out / "wall_time.json").write_text(json.dumps({"wall_time_s": elapsed}) + "\n")
    return rep


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qkrylov", description="Quantum Krylov experiment runner.")
    sub = ap.add_subparsers(dest="command", metavar="command")
    for cmd in COMMANDS:
        sp = sub.add_parser(cmd, help=f"run the {cmd} experiment" if cmd != "generate" else "write a test matrix")
        sp.add_argument("--config", help="flat JSON config file")
        for name in COMMAND_FIELDS[cmd]:
            sp.add_argument(f"--{name}", dest=name, default=None, help=FIELDS[name][2])
    return ap


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if not argv or argv[0] not in COMMANDS and not argv[0].startswith("-"):
        cmd = argv[0] if argv else ""
        print(f"error: unknown command {cmd!r}\n{usage()}", file=sys.stderr)
        return 2
    args = _parser().parse_args(argv)
    if args.command is None:
        print(usage(), file=sys.stderr)
        return 2
    overrides = {k: v for k, v in vars(args).items()
                 if k not in ("command", "config") and v is not None}
    try:
        file_values = load_config_file(args.config) if args.config else {}
        cfg = build_config(args.command, file_values, overrides)
        rep = run_experiment(cfg)
        failed = rep.failed_rows()
        if failed:
            raise BoundViolated("bound check failed on rows:\n" + "\n".join(
                json.dumps(to_jsonable(r), sort_keys=True) for r in failed))
    except BoundViolated as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigInvalid, InputUnreadable, ParamInvalid) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except QKrylovError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3
    print(f"{cfg.command}: {len(rep.rows)} rows, {len(rep.bound_rows())} bound-checked, all pass -> {cfg['out']}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
