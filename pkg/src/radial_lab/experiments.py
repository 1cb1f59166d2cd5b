"""Config-driven experiment runner.

Configs are INI-style key-value sections: an ``[experiment]`` section
selecting the kind and its parameters, plus optional ``[x]`` and ``[y]``
sections holding generator recipes or DSET1 paths.  Four kinds exist:

* ``bounds-table``     - CSV grid of all bound functions and dominance flags
* ``projection-sweep`` - radial-projection dimension estimates per viewpoint
* ``incidence-sweep``  - union-size exponent harness across levels
* ``frostman-audit``   - ball and dyadic certificates for an input set

Every sweep certifies its inputs before running and aborts with the
failing certificate serialized if certification fails.  Reruns with the
same config produce byte-identical CSV bodies; timestamps and wall times
live only in the manifest.
"""

from __future__ import annotations

import configparser
import hashlib
import json
import time
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bounds import (
    bound_orthogonal_exceptional,
    bound_osw1,
    bound_osw2,
    dominance_report,
    incidence_exponent,
)
from .dyadic import CubeSet, Point2
from .frostman import (
    FrostmanCertificate,
    check_ball_frostman,
    check_dyadic_frostman,
    max_dyadic_exponent,
)
from .generators import GeneratorSpec, build, random_tree_set
from .incidence import certified_center_families, renwang_harness, IncidenceRecord
from .projection import sup_radial_dimension
from .storage import load_cube_set, save_set

LEVEL_CAP = 14

EXPERIMENT_KINDS = ("bounds-table", "projection-sweep", "incidence-sweep", "frostman-audit")


class ConfigError(ValueError):
    """Invalid configuration; ``path`` names the offending section.key."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class CertificationError(RuntimeError):
    """An input set failed certification; the certificate is attached."""

    def __init__(self, message: str, certificate: Optional[FrostmanCertificate]):
        super().__init__(message)
        self.certificate = certificate


@dataclass(frozen=True)
class SetSource:
    """Either a generator recipe or a DSET1 path."""

    spec: Optional[GeneratorSpec] = None
    path: Optional[str] = None

    def materialize(self, level: Optional[int] = None) -> CubeSet:
        if self.path is not None:
            S = load_cube_set(self.path)
            if level is not None and S.level != level:
                raise ConfigError("path", f"set at level {S.level}, wanted {level}")
            return S
        spec = self.spec
        if level is not None and level != spec.level:
            spec = replace(spec, level=level)
        return build(spec)


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str
    out: str
    levels: tuple = (8,)
    seed: Optional[int] = None
    eps: float = 0.1
    precision_lo: int = 4
    rho: Fraction = Fraction(1, 16)
    samples: int = 64
    step: Fraction = Fraction(1, 20)
    density: Fraction = Fraction(1)
    col_stride: int = 1
    p_kind: str = "diagonal"
    p_stride: int = 16
    p_t: Fraction = Fraction(1, 2)
    s_target: Optional[Fraction] = None
    C_target: Fraction = Fraction(4)
    x: Optional[SetSource] = None
    y: Optional[SetSource] = None
    raw: str = field(default="", compare=False)

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError("experiment.kind", f"unknown kind {self.kind!r}")
        for n in self.levels:
            if not 0 <= n <= LEVEL_CAP:
                raise ConfigError(
                    "experiment.levels",
                    f"level {n} beyond desk-scale cap {LEVEL_CAP}; refused",
                )
        needs_seed = self.kind in ("projection-sweep", "incidence-sweep") and (
            self.p_kind == "tree"
            or (self.x is not None and self.x.spec is not None and self.x.spec.kind == "random_tree")
            or (self.y is not None and self.y.spec is not None and self.y.spec.kind == "random_tree")
            or self.kind == "projection-sweep"
        )
        if needs_seed and self.seed is None:
            raise ConfigError("experiment.seed", "stochastic experiment needs a seed")


def _parse_section_spec(cp: configparser.ConfigParser, section: str,
                        default_level: int, seed: Optional[int]) -> Optional[SetSource]:
    if not cp.has_section(section):
        return None
    sec = cp[section]
    if "path" in sec:
        return SetSource(path=sec["path"])
    kind = sec.get("kind")
    if kind is None:
        raise ConfigError(f"{section}.kind", "generator section needs kind or path")
    level = sec.getint("level", fallback=default_level)
    params: dict = {}
    try:
        if kind == "cantor_product":
            params["digits_x"] = [int(d) for d in sec.get("digits_x", "0 1 2 3").split()]
            params["digits_y"] = [int(d) for d in sec.get("digits_y", "0 1 2 3").split()]
        elif kind == "line_set":
            params["a"] = Fraction(sec.get("a", "0"))
            params["b"] = Fraction(sec.get("b", "0"))
        elif kind == "graph_set":
            for key in ("a2", "a1", "a0"):
                params[key] = Fraction(sec.get(key, "0"))
        elif kind == "random_tree":
            params["t"] = Fraction(sec.get("t", "1"))
        elif kind == "full_grid":
            pass
        else:
            raise ConfigError(f"{section}.kind", f"unknown generator {kind!r}")
    except ValueError as exc:
        raise ConfigError(f"{section}", str(exc)) from None
    sec_seed = sec.getint("seed", fallback=seed) if kind == "random_tree" else None
    return SetSource(spec=GeneratorSpec(kind=kind, level=level, params=params, seed=sec_seed))


def load_config(path) -> ExperimentConfig:
    """Parse an INI experiment config; errors carry the section.key path."""
    raw = Path(path).read_text()
    return parse_config(raw)


def parse_config(raw: str) -> ExperimentConfig:
    cp = configparser.ConfigParser()
    cp.read_string(raw)
    if not cp.has_section("experiment"):
        raise ConfigError("experiment", "missing [experiment] section")
    exp = cp["experiment"]
    kind = exp.get("kind")
    if kind is None:
        raise ConfigError("experiment.kind", "missing")
    levels = tuple(int(v) for v in exp.get("levels", "8").split())
    seed = exp.getint("seed", fallback=None)

    def frac(key: str, default: str) -> Fraction:
        try:
            return Fraction(exp.get(key, default))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"experiment.{key}", str(exc)) from None

    s_target = exp.get("s", fallback=None)
    cfg = ExperimentConfig(
        kind=kind,
        out=exp.get("out", "runs/out"),
        levels=levels,
        seed=seed,
        eps=exp.getfloat("eps", fallback=0.1),
        precision_lo=exp.getint("precision_lo", fallback=4),
        rho=frac("rho", "1/16"),
        samples=exp.getint("samples", fallback=64),
        step=frac("step", "1/20"),
        density=frac("density", "1"),
        col_stride=exp.getint("col_stride", fallback=1),
        p_kind=exp.get("p_kind", "diagonal"),
        p_stride=exp.getint("p_stride", fallback=16),
        p_t=frac("p_t", "1/2"),
        s_target=None if s_target is None else Fraction(s_target),
        C_target=frac("C", "4"),
        x=_parse_section_spec(cp, "x", levels[-1], seed),
        y=_parse_section_spec(cp, "y", levels[-1], seed),
        raw=raw,
    )
    return cfg


@dataclass
class RunResult:
    kind: str
    out_dir: Path
    outputs: dict
    data: dict
    manifest: dict


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return f"{v:.12g}"
    if isinstance(v, Fraction):
        return f"{float(v):.12g}"
    return str(v)


def _write_csv(path: Path, header: str, rows: list) -> None:
    path.write_text("\n".join([header] + rows) + "\n")


def _config_hash(cfg: ExperimentConfig) -> str:
    basis = cfg.raw if cfg.raw else repr(cfg)
    return hashlib.sha256(basis.encode()).hexdigest()


def _gate_dyadic(S: CubeSet, what: str, C: Fraction, out: Path) -> FrostmanCertificate:
    """Measure the best dyadic exponent; abort the run if nothing verifies."""
    s = max_dyadic_exponent(S, C, Fraction(1, 64))
    if s is None:
        cert = check_dyadic_frostman(S, Fraction(0), C)
        (out / "failed_certificate.json").write_text(json.dumps(cert.to_json(), indent=2))
        raise CertificationError(f"{what} failed dyadic certification at C={C}", cert)
    return check_dyadic_frostman(S, s, C)


def _strided_diagonal(n: int, stride: int) -> CubeSet:
    if stride < 1 or (1 << n) % stride:
        raise ConfigError("experiment.p_stride", f"stride {stride} must divide 2^{n}")
    return CubeSet(n, ((k, k) for k in range(0, 1 << n, stride)))


def run(cfg: ExperimentConfig) -> RunResult:
    """Execute one experiment; deterministic given config plus seed."""
    t0 = time.perf_counter()
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    if cfg.kind == "bounds-table":
        outputs, data = _run_bounds_table(cfg, out)
    elif cfg.kind == "projection-sweep":
        outputs, data = _run_projection_sweep(cfg, out)
    elif cfg.kind == "incidence-sweep":
        outputs, data = _run_incidence_sweep(cfg, out)
    else:
        outputs, data = _run_frostman_audit(cfg, out)
    manifest = {
        "kind": cfg.kind,
        "config_hash": _config_hash(cfg),
        "version": __version__,
        "created_unix": time.time(),
        "wall_seconds": time.perf_counter() - t0,
        "outputs": {k: str(v) for k, v in outputs.items()},
    }
    manifest.update(data.get("manifest_extra", {}))
    (out / "manifest.json").write_text(json.dumps(manifest, indent=2))
    outputs["manifest"] = out / "manifest.json"
    return RunResult(cfg.kind, out, outputs, data, manifest)


def _run_bounds_table(cfg: ExperimentConfig, out: Path):
    step = cfg.step
    grid = []
    v = Fraction(0)
    while v <= 2:
        grid.append(v)
        v += step
    rows = []
    for dx in grid:
        for dy in grid:
            rep = dominance_report(dx, dy)
            o2 = bound_osw2(dx, dy)
            ortho = bound_orthogonal_exceptional(dy, min(dy, Fraction(1)))
            inc = (
                incidence_exponent(min(dx, Fraction(1)), dy)
                if dx > 0 and dy > 0
                else None
            )
            rows.append(
                ",".join(
                    _fmt(x)
                    for x in (
                        dx, dy,
                        bound_osw1(dx, dy),
                        o2,
                        rep.main,
                        ortho,
                        inc,
                        int(rep.strict_over_osw1),
                        "" if rep.strict_over_osw2 is None else int(rep.strict_over_osw2),
                    )
                )
            )
    path = out / "bounds.csv"
    _write_csv(
        path,
        "dx,dy,osw1,osw2,main,ortho_exceptional_at_umax,incidence_exponent,"
        "strict_over_osw1,strict_over_osw2",
        rows,
    )
    return {"bounds": path}, {"rows": len(rows)}


def _sample_centers(S: CubeSet, count: int, seed: int) -> list:
    """Deterministic sample of member-cube centers, canonical order kept."""
    rng = np.random.default_rng([seed, 0xA11CE])
    total = len(S)
    if total <= count:
        picks = range(total)
    else:
        picks = sorted(rng.choice(total, size=count, replace=False).tolist())
    members = S.members
    level = S.level
    out = []
    for idx in picks:
        i, j = members[idx]
        out.append(Point2(Fraction(2 * i + 1, 1 << (level + 1)),
                          Fraction(2 * j + 1, 1 << (level + 1))))
    return out


def _run_projection_sweep(cfg: ExperimentConfig, out: Path):
    if cfg.x is None or cfg.y is None:
        raise ConfigError("x/y", "projection-sweep needs [x] and [y] sections")
    rows = []
    per_level = {}
    certs = {}
    for n in cfg.levels:
        Y = cfg.y.materialize(level=n)
        X = cfg.x.materialize(level=n)
        certs[f"y_level_{n}"] = _gate_dyadic(Y, f"Y at level {n}", Fraction(4), out).to_json()
        certs[f"x_level_{n}"] = _gate_dyadic(X, f"X at level {n}", Fraction(4), out).to_json()
        xs = _sample_centers(X, cfg.samples, cfg.seed or 0)
        result = sup_radial_dimension(xs, Y, m=n, rho=cfg.rho, m_lo=cfg.precision_lo)
        per_level[n] = result
        for x, est in result.estimates:
            if est is None:
                continue
            for scale, cnt in zip(range(est.window[0], est.window[1] + 1), est.counts):
                rows.append(
                    ",".join(
                        _fmt(v)
                        for v in (n, float(x.x), float(x.y), scale, cnt,
                                  est.slope, est.residual)
                    )
                )
        save_set(out / f"y_level_{n}.dset", Y)
    path = out / "projection.csv"
    _write_csv(path, "n,x_x,x_y,scale,bin_count,slope,residual", rows)
    (out / "certificates.json").write_text(json.dumps(certs, indent=2))
    max_slope = max(per_level[n].max_slope for n in cfg.levels)
    return (
        {"projection": path, "certificates": out / "certificates.json"},
        {"per_level": per_level, "manifest_extra": {"max_slope": max_slope}},
    )


def _build_incidence_instance(cfg: ExperimentConfig, n: int):
    """P plus its certificate for one sweep level."""
    if cfg.p_kind == "diagonal":
        P = _strided_diagonal(n, cfg.p_stride)
        cert = check_dyadic_frostman(P, Fraction(1), Fraction(2 * cfg.p_stride))
        if not cert.verified:
            raise CertificationError("strided diagonal failed its certificate", cert)
        half_range = False
    elif cfg.p_kind == "tree":
        P = random_tree_set(n, cfg.p_t, cfg.seed, top_band=True)
        s = max_dyadic_exponent(P, Fraction(4), Fraction(1, 64))
        if s is None:
            raise CertificationError("tree instance failed certification",
                                     check_dyadic_frostman(P, Fraction(0), Fraction(4)))
        cert = check_dyadic_frostman(P, min(s, cfg.p_t), Fraction(4))
        half_range = True
    else:
        raise ConfigError("experiment.p_kind", f"unknown instance kind {cfg.p_kind!r}")
    return P, cert, half_range


def _run_incidence_sweep(cfg: ExperimentConfig, out: Path):
    rows = []
    records = {}
    for n in cfg.levels:
        P, cert, half_range = _build_incidence_instance(cfg, n)
        families, M = certified_center_families(
            P, cfg.density, stride=cfg.col_stride, half_range=half_range
        )
        record = renwang_harness(P, cert, families, M, cfg.eps)
        records[n] = record
        rows.append(record.csv_row())
    path = out / "incidence.csv"
    _write_csv(path, IncidenceRecord.CSV_HEADER, rows)
    ns = sorted(records)
    fitted = None
    if len(ns) >= 2:
        ys = [np.log2(records[n].union_size / records[n].M) for n in ns]
        fitted = float(np.polyfit(ns, ys, 1)[0])
    return (
        {"incidence": path},
        {"records": records, "manifest_extra": {"fitted_exponent": fitted}},
    )


def _run_frostman_audit(cfg: ExperimentConfig, out: Path):
    if cfg.x is None:
        raise ConfigError("x", "frostman-audit needs an [x] section")
    S = cfg.x.materialize(level=cfg.levels[-1])
    report = {}
    if cfg.s_target is not None:
        ball = check_ball_frostman(S, cfg.s_target, cfg.C_target)
        dyadic = check_dyadic_frostman(S, cfg.s_target, cfg.C_target)
        report["ball"] = ball.to_json()
        report["dyadic"] = dyadic.to_json()
        verified = ball.verified and dyadic.verified
    else:
        s = max_dyadic_exponent(S, cfg.C_target, Fraction(1, 64))
        if s is None:
            report["dyadic"] = check_dyadic_frostman(S, Fraction(0), cfg.C_target).to_json()
            verified = False
        else:
            dyadic = check_dyadic_frostman(S, s, cfg.C_target)
            report["dyadic"] = dyadic.to_json()
            report["measured_exponent"] = float(s)
            verified = dyadic.verified
    report["size"] = len(S)
    report["level"] = S.level
    path = out / "audit.json"
    path.write_text(json.dumps(report, indent=2))
    save_set(out / "input.dset", S)
    return {"audit": path, "input": out / "input.dset"}, {
        "report": report,
        "manifest_extra": {"verified": verified},
    }
