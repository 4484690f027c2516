"""Scenario files, task dispatch and the verification report.

A scenario is a TOML file with exactly the keys name, polarization, s, t,
nu and tasks.  Each task produces an entry with a status (pass, fail,
uncertified or skipped), values tagged with where they come from
(PAPER, TRIVIAL or DERIVED) and the certificates needed to re-check the
verdict without redoing the heavy computations.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence

import tomli

from . import __version__
from .chern import (
    BundleChern,
    Lattice,
    abelian_surface,
    blowup,
    det,
    direct_sum,
    dual,
    line_bundle,
    miranda_invariants,
    riemann_roch,
    sym,
    tensor,
    twist,
)
from .cover import (
    Degeneration,
    LocalSingularity,
    MirandaData,
    analyze_base_point,
    branch_data,
    branch_formula,
    build_model,
    canonical_decomposition_check,
    classify_parameters,
    eliminate_cubic,
    governing_polynomial,
    proportionality,
)
from .ledger import LedgerError, parse_script
from .numerology import (
    FibrationData,
    OrbitData,
    horikawa_count,
    moduli_dimension,
    orbit_count,
    pencil_triangle,
    two_division_orbits,
    zeuthen_segre_count,
)
from .qpoly import PolyError, parse, poly_square_root

PASS, FAIL, UNCERTIFIED, SKIPPED = "pass", "fail", "uncertified", "skipped"
POLARIZATIONS = ("general", "special", "product")
SIMPLE_TASKS = ("classify", "local-singularity", "branch", "invariants", "numerology",
                "canonical-check", "moduli")
SCENARIO_KEYS = {"name", "polarization", "s", "t", "nu", "tasks"}


class ScenarioError(ValueError):
    """The scenario or ledger file does not parse or validate."""


# -- values -----------------------------------------------------------------------


def _plain(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else int(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if hasattr(v, "value") and isinstance(getattr(v, "value"), str):
        return v.value
    if isinstance(v, (str, int, float, bool)) or v is None:
        return v
    return str(v)


def tagged(value, tag: str) -> dict:
    assert tag in ("PAPER", "TRIVIAL", "DERIVED")
    return {"value": _plain(value), "tag": tag}


@dataclass
class TaskResult:
    task: str
    status: str
    values: Dict[str, dict] = field(default_factory=dict)
    certificates: Dict[str, object] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    wall_time_ms: float = 0.0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "task": self.task,
            "status": self.status,
            "values": self.values,
            "certificates": _plain(self.certificates),
            "notes": list(self.notes),
        }
        if timing:
            out["wall_time_ms"] = round(self.wall_time_ms, 3)
        return out


# -- scenario -----------------------------------------------------------------------


@dataclass(frozen=True)
class Scenario:
    name: str
    polarization: str
    s: Fraction
    t: Fraction
    nu: Optional[int]
    tasks: tuple
    base_dir: Optional[Path] = None

    def echo(self) -> dict:
        return {
            "name": self.name,
            "polarization": self.polarization,
            "s": str(self.s),
            "t": str(self.t),
            "nu": self.nu,
            "tasks": list(self.tasks),
        }


def parse_rational(value, key: str) -> Fraction:
    if isinstance(value, bool):
        raise ScenarioError(f"{key} must be a rational, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            pass
    raise ScenarioError(f"{key} must be an integer or a string 'p/q', got {value!r}")


def scenario_from_mapping(data: dict, base_dir: Optional[Path] = None) -> Scenario:
    unknown = set(data) - SCENARIO_KEYS
    if unknown:
        raise ScenarioError(f"unknown keys: {sorted(unknown)}")
    for key in ("name", "polarization", "s", "t", "tasks"):
        if key not in data:
            raise ScenarioError(f"missing key {key!r}")
    name = data["name"]
    if not isinstance(name, str) or not name:
        raise ScenarioError("name must be a nonempty string")
    pol = data["polarization"]
    if pol not in POLARIZATIONS:
        raise ScenarioError(f"polarization must be one of {POLARIZATIONS}, got {pol!r}")
    s, t = parse_rational(data["s"], "s"), parse_rational(data["t"], "t")
    if s == 0 and t == 0:
        raise ScenarioError("(s, t) = (0, 0) is not allowed")
    nu = data.get("nu")
    if nu is not None:
        if pol != "special":
            raise ScenarioError("nu is only meaningful for a special polarization")
        if isinstance(nu, bool) or not isinstance(nu, int) or nu < 1:
            raise ScenarioError(f"nu must be a positive integer, got {nu!r}")
    tasks = data["tasks"]
    if not isinstance(tasks, list) or not tasks:
        raise ScenarioError("tasks must be a nonempty list")
    for task in tasks:
        if not isinstance(task, str):
            raise ScenarioError(f"task names are strings, got {task!r}")
        if task.startswith("ledger:"):
            if not task[len("ledger:"):]:
                raise ScenarioError("ledger task needs a file name")
        elif task not in SIMPLE_TASKS:
            raise ScenarioError(f"unknown task {task!r}")
    return Scenario(name, pol, s, t, nu, tuple(tasks), base_dir)


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    try:
        raw = path.read_bytes()
    except OSError as exc:
        raise ScenarioError(f"cannot read {path}: {exc}") from None
    try:
        data = tomli.loads(raw.decode("utf-8"))
    except (tomli.TOMLDecodeError, UnicodeDecodeError) as exc:
        raise ScenarioError(f"{path}: {exc}") from None
    return scenario_from_mapping(data, path.parent)


def bundled_path(kind: str, name: str) -> Path:
    return Path(str(resources.files("tschirn").joinpath("data", kind, name)))


def resolve_ledger(name: str, base_dir: Optional[Path]) -> Path:
    candidates = []
    if base_dir is not None:
        candidates.append(base_dir / name)
        candidates.append(base_dir.parent / "ledgers" / name)
    candidates.append(bundled_path("ledgers", name))
    for c in candidates:
        if c.is_file():
            return c
    raise ScenarioError(f"ledger file {name!r} not found")


# -- tasks --------------------------------------------------------------------------


def _timed(fn: Callable[[], TaskResult]) -> TaskResult:
    start = time.perf_counter()
    result = fn()
    result.wall_time_ms = (time.perf_counter() - start) * 1000
    return result


def task_classify(sc: Scenario) -> TaskResult:
    cls = classify_parameters(sc.s, sc.t)
    G = governing_polynomial()
    gval = G.evaluate({"s": sc.s, "t": sc.t, "x": 0, "y": 0, "z": 0, "w": 0})
    degenerate = cls.kind is not Degeneration.GENERAL
    ok = degenerate == (gval == 0)
    tag = "TRIVIAL" if not degenerate else "PAPER"
    return TaskResult("classify", PASS if ok else FAIL, {
        "class": tagged(cls.kind.value, tag),
        "locus": tagged(cls.locus, tag),
        "governing_value": tagged(gval, "DERIVED"),
    }, {"governing_polynomial": str(G), "s": sc.s, "t": sc.t})


def task_local(sc: Scenario) -> TaskResult:
    data = MirandaData.chen_hacon(sc.s, sc.t)
    model = build_model(data)
    res = analyze_base_point(model, sc.s, sc.t)
    cert = dict(res.certificates)
    cert["minors"] = [str(m.with_vars(("x", "y", "z", "w"))) for m in model.minor_list()]
    values = {
        "class": tagged(str(res.degeneration), "PAPER" if res.degeneration.locus else "TRIVIAL"),
        "singularity": tagged(res.kind.value if res.kind else None, "DERIVED"),
        "points_in_orbit": tagged(res.orbit_size, "PAPER"),
    }
    if res.kind is LocalSingularity.CONE_TWISTED_CUBIC:
        values["hilbert_series"] = tagged(cert["hilbert_series"], "DERIVED")
        values["singular_locus_dimension"] = tagged(cert["singular_locus_dimension"], "DERIVED")
    if res.kind is LocalSingularity.THREE_PLANES:
        values["components"] = tagged(len(cert["components"]), "PAPER")
        values["intersection_lines"] = tagged(len(cert["intersection_lines"]), "PAPER")
    notes = [res.reason] if res.reason else []
    return TaskResult("local-singularity", PASS if res.certified else UNCERTIFIED, values, cert, notes)


def task_branch(sc: Scenario) -> TaskResult:
    data = MirandaData.chen_hacon(sc.s, sc.t)
    model = build_model(data)
    cubic = eliminate_cubic(model)
    br = branch_data(model)
    D = branch_formula(sc.s, sc.t)
    lam = proportionality(br.polynomial, D)
    symbolic = branch_data(build_model(MirandaData.chen_hacon()))
    lam_symbolic = proportionality(symbolic.polynomial, branch_formula())
    square = poly_square_root(br.polynomial) is not None if not br.polynomial.is_zero() else True
    cls = classify_parameters(sc.s, sc.t)
    expected_square = {Degeneration.GENERAL: False, Degeneration.TOTALLY_RAMIFIED: True}.get(cls.kind)
    ok = bool(lam) and lam == lam_symbolic and (expected_square is None or square == expected_square)
    notes = ["the eliminated cubic is validated only through its discriminant"]
    if expected_square is None:
        notes.append("square test not applicable to a non-normal cover")
    return TaskResult("branch", PASS if ok else FAIL, {
        "lambda": tagged(lam, "DERIVED"),
        "lambda_symbolic": tagged(lam_symbolic, "DERIVED"),
        "is_square": tagged(square, "PAPER" if expected_square is not None else "DERIVED"),
    }, {
        "cubic": str(cubic),
        "branch": str(br.polynomial),
        "stripped_factor": str(br.stripped),
        "formula": str(D),
        "class": str(cls),
    }, notes)


def invariant_data() -> Dict[str, dict]:
    """The Chern inputs of the Chen-Hacon datum, of its blow-up at the four
    base points and of the normalization in the product case."""
    A = Lattice(["L"], [[4]])
    Y = abelian_surface(A)
    L = A["L"]
    ch = miranda_invariants(Y, (1, 2, 1), BundleChern(2, L, 1), (0, 0, 1))
    Yt = blowup(Y, 4)
    Lt = Yt.lattice["L"]
    Es = dual(twist(direct_sum(line_bundle(Lt), line_bundle(Lt)), -Yt.K))
    blown = miranda_invariants(Yt, (1, 2, 1), Es, (0, 0, 4))
    prod = miranda_invariants(Y, (1, 2, 1), BundleChern(2, A.zero(), 0), (0, 1, 1))
    return {
        "chen_hacon": {"result": ch, "expected": (2, 2, 5, 1),
                       "input": {"Ksq_Y": 0, "c1^2": 4, "c1.K": 0, "c2": 1, "hE": [0, 0, 1]}},
        "blown_up": {"result": blown, "expected": (5, 2, 20, 4),
                     "input": {"Ksq_Y": int(Yt.Ksq), "c1^2": Es.c1.square(), "c1.K": Es.c1.dot(Yt.K),
                               "c2": Es.c2, "hE": [0, 0, 4]}},
        "product": {"result": prod, "expected": (2, 3, 0, 0),
                    "input": {"Ksq_Y": 0, "c1^2": 0, "c1.K": 0, "c2": 0, "hE": [0, 1, 1]}},
    }


def task_invariants(sc: Scenario) -> TaskResult:
    cls = classify_parameters(sc.s, sc.t)
    data = invariant_data()
    values = {}
    cert = {}
    for key, item in data.items():
        r = item["result"]
        values[key] = tagged(list(r.as_tuple()), "PAPER")
        cert[key] = {"input": item["input"], "expected": list(item["expected"])}
    if cls.kind is Degeneration.NON_NORMAL:
        return TaskResult("invariants", SKIPPED, {}, {}, ["non-normal total space"])
    if sc.polarization == "product":
        return TaskResult("invariants", SKIPPED, {"product": values["product"]}, {"product": cert["product"]},
                          ["product polarization: the normalization is not of general type"])
    ok = all(tuple(item["result"].as_tuple()) == item["expected"] for item in data.values())
    return TaskResult("invariants", PASS if ok else FAIL, values, cert)


def task_numerology(sc: Scenario) -> TaskResult:
    nodal = zeuthen_segre_count(FibrationData.of_genus(3, c2Total=4))
    hyper = horikawa_count(-4, 0)
    orb = orbit_count(OrbitData(4, (2,)))
    div = two_division_orbits()
    values = {
        "nodal_members": tagged(nodal, "PAPER"),
        "hyperelliptic_members": tagged(hyper, "PAPER"),
        "branch_points": tagged(orb.branchPoints, "PAPER"),
        "stabilized_members": tagged(orb.stabilizedElements, "PAPER"),
        "orbits_of_size_4_off_base": tagged(len(div.other_orbits), "PAPER"),
    }
    ok = (nodal, hyper, orb.branchPoints, orb.stabilizedElements, len(div.other_orbits)) == (12, 6, 3, 6, 3)
    notes = []
    if sc.polarization in ("general", "special"):
        tri = pencil_triangle(sc.polarization, sc.nu if sc.nu is not None else 2)
        values["smooth_hyperelliptic"] = tagged(tri["hyperelliptic"], "PAPER")
        values["reducible_members"] = tagged(tri["reducible"], "PAPER")
        ok = ok and tri["hyperelliptic"] + tri["reducible"] == orb.stabilizedElements
    else:
        notes.append("product polarization: more than two reducible members may occur; "
                     "only hyperelliptic = 6 - nu is enforced for special polarizations")
    return TaskResult("numerology", PASS if ok else FAIL, values, {
        "zeuthen_segre": {"c2": 4, "e_base": 2, "e_fiber": -4, "delta": 1},
        "horikawa": {"Ksq": -4, "chi": 0},
        "orbit": {"order": 4, "fiber_sizes": [2]},
    }, notes)


def task_canonical(sc: Scenario) -> TaskResult:
    r = canonical_decomposition_check()
    return TaskResult("canonical-check", PASS if r["ok"] else FAIL, {
        "Ksq": tagged(r["Ksq"], "PAPER"),
        "genus_Phi": tagged(r["genus_Phi"], "PAPER"),
        "genus_Xi": tagged(r["genus_Xi"], "TRIVIAL"),
    }, {"gram": {"Xi.Xi": -3, "Xi.Phi": 4, "Phi.Phi": 0}})


def task_moduli(sc: Scenario) -> TaskResult:
    tangent = parse_script(bundled_path("ledgers", "tangent_chase.ledger").read_text()).propagate()
    en = parse_script(bundled_path("ledgers", "eagon_northcott.ledger").read_text()).propagate()
    h1 = tangent.interval("TS", "h1")
    h0N = tangent.interval("NS", "h0")
    h0 = en.interval("S3", "h0")
    if not (h1.is_point() and h0N.is_point() and h0.is_point()):
        return TaskResult("moduli", FAIL, {}, {}, ["ledger values are not forced"])
    A = Lattice(["f"], [[4]])
    F = BundleChern(2, A["f"], 1)
    chi = riemann_roch(tensor(sym(F, 3), dual(det(F))), abelian_surface(A))
    m = moduli_dimension(h0.lo, 3, h1.lo, h0N.lo)
    ok = m.dimension == 4 and m.consistent and chi == h0.lo
    return TaskResult("moduli", PASS if ok else FAIL, {
        "dimension": tagged(m.dimension, "PAPER"),
        "polarized_abelian_moduli": tagged(m.polarized_abelian, "PAPER"),
        "projective_sections": tagged(m.sections_projective, "PAPER"),
        "h1_TS": tagged(h1.lo, "PAPER"),
        "h0_N": tagged(h0N.lo, "PAPER"),
        "chi_S3": tagged(chi, "DERIVED"),
    }, {"checks": m.checks})


def task_ledger(sc: Scenario, name: str) -> TaskResult:
    path = resolve_ledger(name, sc.base_dir)
    return ledger_task(path, f"ledger:{name}")


def ledger_task(path: Path, label: str) -> TaskResult:
    script = parse_script(path.read_text())
    res = script.check()
    rep = res.report
    values = {}
    for d in rep.derived:
        if d.quantity != "chi":
            values[f"{d.quantity}({d.symbol})"] = tagged(d.value, "DERIVED")
    cert = {
        "report": rep.to_dict(),
        "claims": [{"symbol": c.symbol, "index": c.index, "value": c.value} for c in script.claims],
    }
    notes = []
    if not res.passed:
        notes.append(res.message)
        notes.extend(f"conflict: {line}" for line in res.trace)
        cert["conflict_trace"] = res.trace
    return TaskResult(label, PASS if res.passed else FAIL, values, cert, notes)


TASKS: Dict[str, Callable[[Scenario], TaskResult]] = {
    "classify": task_classify,
    "local-singularity": task_local,
    "branch": task_branch,
    "invariants": task_invariants,
    "numerology": task_numerology,
    "canonical-check": task_canonical,
    "moduli": task_moduli,
}


def run_task(sc: Scenario, task: str) -> TaskResult:
    def go():
        try:
            if task.startswith("ledger:"):
                return task_ledger(sc, task[len("ledger:"):])
            return TASKS[task](sc)
        except (PolyError, LedgerError, ValueError) as exc:
            if isinstance(exc, ScenarioError):
                raise
            return TaskResult(task, FAIL, {}, {}, [f"{type(exc).__name__}: {exc}"])
    return _timed(go)


# -- report -------------------------------------------------------------------------


@dataclass
class Report:
    kind: str
    echo: dict
    tasks: List[TaskResult]
    recheck: Optional[dict] = None

    def summary(self) -> Dict[str, int]:
        counts = {PASS: 0, FAIL: 0, UNCERTIFIED: 0, SKIPPED: 0}
        for t in self.tasks:
            counts[t.status] += 1
        return counts

    @property
    def exit_code(self) -> int:
        bad = any(t.status in (FAIL, UNCERTIFIED) for t in self.tasks)
        if self.recheck is not None and not self.recheck.get("ok", False):
            bad = True
        return 1 if bad else 0

    def to_dict(self, timing: bool = True) -> dict:
        out = {
            "tool": "tschirn",
            "version": __version__,
            self.kind: self.echo,
            "tasks": [t.to_dict(timing) for t in self.tasks],
            "summary": self.summary(),
        }
        if self.recheck is not None:
            out["recheck"] = self.recheck
        return out

    def to_json(self, timing: bool = True) -> str:
        return canonical_json(self.to_dict(timing))

    def to_markdown(self) -> str:
        lines = [f"# {self.kind}: {self.echo.get('name', self.echo.get('file', ''))}", ""]
        lines.append("| task | status | values |")
        lines.append("| --- | --- | --- |")
        for t in self.tasks:
            vals = ", ".join(f"{k}={v['value']} [{v['tag']}]" for k, v in t.values.items())
            lines.append(f"| {t.task} | {t.status} | {vals} |")
        s = self.summary()
        lines.append("")
        lines.append(", ".join(f"{k}: {v}" for k, v in s.items()))
        for t in self.tasks:
            for n in t.notes:
                lines.append(f"- {t.task}: {n}")
        return "\n".join(lines) + "\n"


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def run_scenario(path: str | Path, jobs: int = 4, recheck: bool = False) -> Report:
    sc = load_scenario(path)
    return run_loaded(sc, jobs, recheck)


def run_loaded(sc: Scenario, jobs: int = 4, recheck: bool = False) -> Report:
    for task in sc.tasks:
        if task.startswith("ledger:"):
            resolve_ledger(task[len("ledger:"):], sc.base_dir)
    if jobs > 1 and len(sc.tasks) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(lambda task: run_task(sc, task), sc.tasks))
    else:
        results = [run_task(sc, task) for task in sc.tasks]
    report = Report("scenario", sc.echo(), results)
    if recheck:
        report.recheck = recheck_report(report.to_dict(timing=False))
    return report


def run_ledger(path: str | Path, recheck: bool = False) -> Report:
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"cannot read {path}")
    try:
        result = _timed(lambda: ledger_task(path, "ledger"))
    except LedgerError as exc:
        raise ScenarioError(str(exc)) from None
    report = Report("ledger", {"file": path.name}, [result])
    if recheck:
        report.recheck = recheck_report(report.to_dict(timing=False))
    return report


# -- re-verification ------------------------------------------------------------------


def _check_task(entry: dict, scenario: Optional[dict]) -> Optional[str]:
    """Re-derive a verdict from the embedded certificates; returns an error
    message or None."""
    task, status, cert, values = entry["task"], entry["status"], entry["certificates"], entry["values"]
    if status == SKIPPED:
        return None
    if task == "classify":
        G = parse(cert["governing_polynomial"], ["x", "y", "z", "w", "s", "t"])
        s, t = Fraction(str(cert["s"])), Fraction(str(cert["t"]))
        g = G.evaluate({"s": s, "t": t, "x": 0, "y": 0, "z": 0, "w": 0})
        cls = classify_parameters(s, t)
        ok = (cls.kind is not Degeneration.GENERAL) == (g == 0) and values["class"]["value"] == cls.kind.value
        return None if ok == (status == PASS) else "classification verdict does not follow"
    if task == "local-singularity":
        ctx = ["x", "y", "z", "w"]
        minors = [parse(m, ctx) for m in cert.get("minors", [])]
        if "hilbert_numerator" in cert:
            ok = cert["hilbert_numerator"] == [1, 2] and cert["hilbert_pole_order"] == 2 \
                and cert["singular_locus_dimension"] == 0
        elif "components" in cert:
            ok = len(cert["components"]) == 3 and len(cert["intersection_lines"]) == 2
            for proj in cert["projections"]:
                sub = {"z": parse(proj["z"], ctx), "w": parse(proj["w"], ctx)}
                ok = ok and all(m.subs(sub).is_zero() for m in minors)
        else:
            ok = False
        return None if ok == (status == PASS) else "singularity certificate does not support the verdict"
    if task == "branch":
        ctx = ["x", "y", "z", "w", "s", "t"]
        lam = values["lambda"]["value"]
        br, D = parse(cert["branch"], ctx), parse(cert["formula"], ctx)
        ok = lam not in (None, 0) and br == D * Fraction(str(lam))
        cubic = parse(cert["cubic"], ctx)
        ok = ok and cubic.degree("z") == 3
        return None if (ok or status != PASS) else "branch polynomial is not lambda times the formula"
    if task == "invariants":
        for key, c in cert.items():
            inp = c["input"]
            Ksq = 3 * Fraction(str(inp["Ksq_Y"])) - 4 * Fraction(str(inp["c1.K"])) \
                + 2 * Fraction(str(inp["c1^2"])) - 3 * Fraction(str(inp["c2"]))
            got = values[key]["value"]
            if Fraction(str(got[2])) != Ksq:
                return f"K^2 for {key} does not follow from its Chern input"
            if status == PASS and list(got) != list(c["expected"]):
                return f"invariants for {key} differ from the expected values"
        return None
    if task.startswith("ledger"):
        rep = cert["report"]
        if rep["contradiction"]:
            return None if status == FAIL else "contradictory ledger marked as passing"
        forced = all(rep["values"][c["symbol"]][f"h{c['index']}"] == str(c["value"]) for c in cert["claims"])
        return None if forced == (status == PASS) else "ledger claims do not match the recorded intervals"
    if task == "numerology":
        z = cert["zeuthen_segre"]
        nodal = (z["c2"] - z["e_base"] * z["e_fiber"]) // z["delta"]
        h = cert["horikawa"]
        hyper = h["Ksq"] - 3 * h["chi"] + 10
        ok = values["nodal_members"]["value"] == nodal and values["hyperelliptic_members"]["value"] == hyper
        return None if ok or status != PASS else "counts do not follow from the recorded inputs"
    if task == "canonical-check":
        g = cert["gram"]
        Ksq = g["Xi.Xi"] + 2 * g["Xi.Phi"] + g["Phi.Phi"]
        genus = 1 + (g["Phi.Phi"] + g["Xi.Phi"] + g["Phi.Phi"]) // 2
        ok = Ksq == values["Ksq"]["value"] == 5 and genus == values["genus_Phi"]["value"] == 3
        return None if ok == (status == PASS) else "canonical data do not support the verdict"
    if task == "moduli":
        ok = all(cert["checks"].values()) and values["dimension"]["value"] == \
            values["polarized_abelian_moduli"]["value"] + values["projective_sections"]["value"]
        return None if ok == (status == PASS) else "moduli count does not follow"
    return f"no re-check rule for task {task!r}"


def recheck_report(report: dict) -> dict:
    problems = []
    for entry in report["tasks"]:
        msg = _check_task(entry, report.get("scenario"))
        if msg:
            problems.append({"task": entry["task"], "problem": msg})
    return {"ok": not problems, "problems": problems}
