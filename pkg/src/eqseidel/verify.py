"""Check suites shared by the CLI and the tests: one CheckReport per concern."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor

from .errors import EngineError
from .module import CheckReport, ModuleElem, check_grading
from .product import check_axioms, product_expand
from .seidel import intertwining_residual, verify_inverse_pair


def grading_report(spec, r_max):
    report = CheckReport(f"gradedness ({spec.id})")
    maps = []
    for r in range(r_max + 1):
        if spec.product is not None:
            maps.append((f"product r={r}", spec.product_at(r).L))
        if spec.seidel is not None:
            maps.append((f"seidel r={r}", spec.seidel_family().instantiate(r)))
        if spec.inverse is not None:
            maps.append((f"inverse r={r}", spec.inverse_family().instantiate(r)))
    for name, M in maps:
        report.merge(_named(check_grading(M), name))
    report.details["maps"] = len(maps)
    return report


def _named(report, name):
    report.name = name
    return report


def axioms_report(spec, r_max, seed=0):
    report = CheckReport(f"product axioms ({spec.id})")
    for r in range(r_max + 1):
        try:
            report.merge(check_axioms(spec.table_at(r), seed=seed + r))
        except EngineError as exc:
            report.fail(f"r={r}: {exc}")
    return report


def intertwining_report(spec, r_max):
    report = CheckReport(f"intertwining residual ({spec.id})")
    if spec.generator is None:
        report.details["skipped"] = "no degree-2 generator"
        return report
    F = spec.seidel_family()
    for r in range(r_max + 1):
        T, T1 = spec.table_at(r), spec.table_at(r + 1)
        for label in spec.basis.labels:
            x = ModuleElem.basis_vector(spec.basis, spec.config, label)
            res = intertwining_residual(F, T, T1, x, r=r)
            if res:
                report.fail(f"r={r}, x={label}: residual {res}")
    return report


def inverse_report(spec, r_max):
    report = CheckReport(f"inverse pair ({spec.id})")
    if spec.inverse is None:
        report.details["skipped"] = "no inverse family declared"
        return report
    F, G = spec.seidel_family(), spec.inverse_family()
    for r in range(r_max + 1):
        report.merge(verify_inverse_pair(F, G, r))
    return report


def solver_report(spec, r_max):
    """Solve the ansatz and compare with the declared maps at every level."""
    from .solver import induct_over_r

    report = CheckReport(f"solver reproduces declared maps ({spec.id})")
    if not spec.has_ansatz():
        report.details["skipped"] = "no ansatz declared"
        return report
    try:
        solved = induct_over_r(spec, r_max)
    except EngineError as exc:
        report.fail(str(exc))
        return report
    F = spec.seidel_family()
    for r in range(r_max + 1):
        if spec.product is not None:
            got = product_expand(solved.product_at(r))
            want = spec.table_at(r)
            if got.table != want.table:
                report.fail(f"r={r}: solved product differs from the declared one")
        if solved.seidel_at(r).matrix != F.instantiate(r).matrix:
            report.fail(f"r={r}: solved Seidel map differs from the declared one")
    report.details["coefficients"] = solved.to_json()["coefficients"]
    return report


SUITES = {
    "gradedness": grading_report,
    "axioms": axioms_report,
    "intertwining": intertwining_report,
    "inverse": inverse_report,
}


def verify_space(spec, r_max, jobs=1, solve=False):
    """Run every suite; results come back in a fixed order whatever ``jobs`` is."""
    names = list(SUITES)
    tasks = [(name, SUITES[name]) for name in names]
    if solve:
        tasks.append(("solver", solver_report))

    def run(task):
        name, fn = task
        try:
            return fn(spec, r_max)
        except EngineError as exc:
            rep = CheckReport(f"{name} ({spec.id})")
            rep.fail(f"{type(exc).__name__}: {exc}")
            return rep

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(run, tasks))
    return [run(t) for t in tasks]
