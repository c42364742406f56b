"""Command-line driver: ``iqg verify|dual|coeffs|chars``.

Every check is a pure function of its parameters; the driver only schedules
them and merges the records in a fixed order.
"""
from __future__ import annotations

import argparse
import configparser
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction

SCHEMA_VERSION = 1
SUITES = ("algebra", "modules", "special", "duality", "decompose", "chars", "coeffs")
EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str = "verify"
    g_list: list = field(default_factory=lambda: [1, 2, 3])
    n: int | None = None
    nmax: int = 4
    order: int = 5
    window: int | None = None
    suites: list = field(default_factory=lambda: list(SUITES))
    verma: bool = False
    what: str = "P"
    out: str | None = None
    jobs: int = 1

    def validate(self):
        if self.order < 0:
            raise ConfigError(f"--order must be >= 0, got {self.order}")
        if not self.g_list or any(g < 1 for g in self.g_list):
            raise ConfigError(f"--g needs positive integers, got {self.g_list}")
        if self.nmax < 0:
            raise ConfigError(f"--nmax must be >= 0, got {self.nmax}")
        if self.jobs < 1:
            raise ConfigError(f"--jobs must be >= 1, got {self.jobs}")
        unknown = [s for s in self.suites if s not in SUITES]
        if unknown:
            raise ConfigError(f"unknown suites {unknown}; choose from {list(SUITES)}")
        uses_verma = self.verma or (self.command == "verify" and {"modules", "duality"} & set(self.suites))
        if self.window is not None and uses_verma:
            low = 4 * max(self.g_list) + 4
            if self.window < low:
                raise ConfigError(f"--window must be >= 4g + 4 = {low} for Verma suites, got {self.window}")
        if self.command in ("dual", "chars") and self.n is None:
            raise ConfigError(f"{self.command} needs --n")
        if self.command in ("dual", "chars"):
            for g in self.g_list:
                if self.n % g:
                    raise ConfigError(f"--n {self.n} is not a multiple of g={g}")
                if self.command == "chars" and self.n < 0:
                    raise ConfigError("chars needs --n >= 0")
                if self.command == "dual" and self.n < 0 and not self.verma:
                    raise ConfigError("negative --n needs --verma")
        if self.command == "coeffs" and self.what not in ("P", "alpha", "casimir"):
            raise ConfigError(f"--what must be P, alpha or casimir, got {self.what!r}")


@dataclass
class Record:
    id: str
    params: dict
    status: str
    residual: str | None = None
    seconds: float = 0.0
    data: dict | None = None

    def sort_key(self):
        return (self.id, sorted(self.params.items()))


# ----------------------------------------------------------------------
# checks (module-level so they can be sent to worker processes)


def _short(x, limit=160) -> str:
    s = repr(x)
    return s if len(s) <= limit else s[: limit - 3] + "..."


def _json_scalar(c):
    if isinstance(c, (Fraction, int)):
        return str(c)
    if hasattr(c, "to_json"):
        return c.to_json()
    return str(c)


def task_algebra(g, order):
    from .algebra import check_symmetries, verify_defining_relations

    out = []
    for suite, res in (("algebra.relations", verify_defining_relations(g, order)), ("algebra.symmetry", check_symmetries(g, order))):
        for r in res:
            fn = r.first_nonzero()
            out.append(Record(f"{suite}:{r.name}", {"g": g, "order": order}, "pass" if r.ok else "fail",
                              None if r.ok else f"h^{fn[0][0]} h'^{fn[0][1]}: {_short(fn[1])}"))
    return out


def task_modules(g, n, order, window, verma):
    from .modules import build_module, casimir_scalar, check_module_relations

    mod = build_module("interpolating", n, g, order, window=window, verma=verma)
    params = {"g": g, "n": n, "order": order, "verma": verma}
    out = []
    for root_sign in (1, -1):
        rep = check_module_relations(mod, root_sign=root_sign)
        fails = rep.failures()
        first = None
        if fails:
            name = sorted(fails)[0]
            col = sorted(fails[name])[0]
            first = f"{name} column {col}: {_short(fails[name][col])}"
        out.append(Record(f"modules.relations:sqrtC={'+' if root_sign > 0 else '-'}", params, "fail" if fails else "pass", first))
    c = casimir_scalar(mod)
    ok = c == mod.one() * (n + 1) ** 2
    out.append(Record("modules.casimir", params, "pass" if ok else "fail", None if ok else _short(c)))
    return out


def task_special(g, n, order):
    from .langlands import check_specialization_table

    bad = check_specialization_table(n, g, order)
    first = None if not bad else f"{sorted(bad, key=str)[0]}: {_short(bad[sorted(bad, key=str)[0]])}"
    return [Record("special.table", {"g": g, "n": n, "order": order}, "fail" if bad else "pass", first)]


def task_duality(g, n, order, window, verma):
    from .langlands import check_duality_identities

    rep = check_duality_identities(n, g, order, verma=verma, window=window)
    out = []
    for name, res in sorted(rep.residuals.items()):
        first = None
        if res:
            k = sorted(res, key=str)[0]
            first = f"vector {k}: {_short(res[k])}"
        out.append(Record(f"duality:{name}", {"g": g, "n": n, "order": order, "verma": verma}, "fail" if res else "pass", first))
    for name, res in sorted(rep.signed.items()):
        out.append(Record(f"duality.signed:{name}", {"g": g, "n": n, "order": order, "verma": verma}, "fail" if res else "pass"))
    return out


def expected_highest_weights(n: int, g: int, verma: bool = False) -> list:
    if g % 2 == 0 and (n != 0 or verma):
        return [n // g, n // g - 1]
    return [n // g]


def task_decompose(g, n, order, window, verma):
    from .langlands import decompose_dual

    params = {"g": g, "n": n, "order": order, "verma": verma}
    comps = decompose_dual(n, g, order, verma=verma, window=window)
    hw = [c.highest_weight for c in comps]
    expected = expected_highest_weights(n, g, verma)
    out = [Record("decompose.highest_weights", params, "pass" if hw == expected else "fail",
                  None if hw == expected else f"got {hw}, expected {expected}", data={"highest_weights": hw})]
    for c in comps:
        out.append(Record(f"decompose.intertwiner:m={c.highest_weight}", params, "pass" if c.intertwines else "fail",
                          None if c.intertwines else f"fails on {c.intertwiner_failures[:3]}"))
    return out


def task_chars(g, n):
    from .langlands import char_duality

    rep = char_duality(n, g)
    out = []
    for key in ("folded == dual", "components sum to dual", "classical limit"):
        out.append(Record(f"chars:{key}", {"g": g, "n": n}, "pass" if rep[key] else "fail", None if rep[key] else f"folded {rep['folded']} vs dual {rep['dual']}",
                          data={"folded": rep["folded"].to_json(), "dual": rep["dual"].to_json()}))
    return out


def task_coeffs(g, order):
    from .algebra import casimir_coeffs, commutator_coeffs, get_context, harish_chandra_delta, sinh_ratio_pbw
    from .pbw import HH, casimir_pbw

    params = {"g": g, "order": order}
    alpha = commutator_coeffs(g, order)
    cas = casimir_coeffs(g, order)
    ctx = get_context(g, order)
    delta = harish_chandra_delta(ctx.psi_C, ctx)
    checks = {
        "alpha h'=0 slice": alpha.at_hp_zero() == sinh_ratio_pbw(order, 1, 0).at_hp_zero(),
        "alpha h=0 slice": alpha.at_h_zero() == sinh_ratio_pbw(order, 0, 1).at_h_zero(),
        "alpha balanced": all(c.is_balanced() for c in alpha.coeffs.values()),
        "casimir balanced": all(c.is_balanced() for c in cas.coeffs.values()),
        "casimir order 0": cas[(0, 0)] == casimir_pbw(),
        "delta(C) = H^2": delta == type(delta).constant(order, HH * HH),
    }
    return [Record(f"coeffs:{k}", params, "pass" if v else "fail") for k, v in checks.items()]


TASKS = {
    "algebra": task_algebra,
    "modules": task_modules,
    "special": task_special,
    "duality": task_duality,
    "decompose": task_decompose,
    "chars": task_chars,
    "coeffs": task_coeffs,
}


def _run_task(spec):
    name, args = spec
    t = time.perf_counter()
    recs = TASKS[name](*args)
    dt = time.perf_counter() - t
    for r in recs:
        r.seconds = round(dt / max(len(recs), 1), 4)
    return recs


def plan_verify(cfg: RunConfig) -> list:
    tasks = []
    N = cfg.order
    for g in cfg.g_list:
        mults = [n for n in range(0, cfg.nmax + 1) if n % g == 0]
        for s in cfg.suites:
            if s == "algebra":
                tasks.append(("algebra", (g, N)))
            elif s == "coeffs":
                tasks.append(("coeffs", (g, N)))
            elif s == "modules":
                tasks += [("modules", (g, n, N, None, False)) for n in range(cfg.nmax + 1)]
                tasks += [("modules", (g, n, N, cfg.window, True)) for n in range(-cfg.nmax, cfg.nmax + 1)]
            elif s == "special" and g >= 2:
                tasks += [("special", (g, n, N)) for n in mults]
            elif s == "duality":
                tasks += [("duality", (g, n, N, None, False)) for n in mults]
                tasks += [("duality", (g, n, N, cfg.window or 4 * g + 8, True)) for n in sorted({-m for m in mults} | set(mults))]
            elif s == "decompose":
                tasks += [("decompose", (g, n, N, None, False)) for n in mults]
                tasks += [("decompose", (g, n, N, cfg.window or 4 * g + 8, True)) for n in mults]
            elif s == "chars":
                tasks += [("chars", (g, n)) for n in mults]
    return tasks


def execute(tasks: list, jobs: int) -> list:
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    records = [r for batch in results for r in batch]
    return sorted(records, key=Record.sort_key)


# ----------------------------------------------------------------------
# non-verify commands


def run_dual(cfg: RunConfig) -> tuple:
    from .langlands import check_duality_identities, decompose_dual, dual_character, dual_module

    out = {}
    records = []
    for g in cfg.g_list:
        D = dual_module(cfg.n, g, cfg.order, verma=cfg.verma, window=cfg.window)
        comps = decompose_dual(cfg.n, g, cfg.order, verma=cfg.verma, window=cfg.window)
        rep = check_duality_identities(cfg.n, g, cfg.order, verma=cfg.verma, window=cfg.window)
        params = {"g": g, "n": cfg.n, "order": cfg.order, "verma": cfg.verma}
        for name, res in sorted(rep.residuals.items()):
            records.append(Record(f"duality:{name}", params, "fail" if res else "pass"))
        for c in comps:
            records.append(Record(f"decompose.intertwiner:m={c.highest_weight}", params, "pass" if c.intertwines else "fail"))
        out[str(g)] = {
            "dual_rank": D.size,
            "sub_basis": D.indices,
            "weights": D.weights,
            "highest_weights": [c.highest_weight for c in comps],
            "intertwiners": [
                {"highest_weight": c.highest_weight,
                 "images": [{str(p): s.to_json(_json_scalar) for p, s in sorted(v.items())} for v in c.vectors]}
                for c in comps
            ],
            "character": dual_character(D).to_json() if not cfg.verma else None,
            "LX+": [[i, j, s.to_json(_json_scalar)] for (i, j), s in sorted(D.LXp.items())],
        }
    return sorted(records, key=Record.sort_key), out


def run_coeffs(cfg: RunConfig) -> tuple:
    from .algebra import casimir_coeffs, commutator_coeffs
    from .qnumbers import build_P

    out = {}
    for g in cfg.g_list:
        if cfg.what == "P":
            out[str(g)] = [[k, str(c)] for k, c in build_P(g).coefficient_table()]
        else:
            table = commutator_coeffs(g, cfg.order) if cfg.what == "alpha" else casimir_coeffs(g, cfg.order)
            out[str(g)] = [{"n": n, "m": m, "terms": c.to_json(str)} for (n, m), c in table.items()]
    return [], out


def run_chars(cfg: RunConfig) -> tuple:
    records = []
    for g in cfg.g_list:
        records += task_chars(g, cfg.n)
    return sorted(records, key=Record.sort_key), {}


# ----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iqg", description="Exact checks for the interpolating quantum groups U_{h,h'}(sl2, g).")
    p.add_argument("--config", help="key = value file with defaults for the flags below")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--g", help="comma-separated list of g values")
        sp.add_argument("--order", type=int, help="truncation order N")
        sp.add_argument("--out", help="write the JSON report here")
        sp.add_argument("--jobs", type=int, help="worker processes")

    v = sub.add_parser("verify", help="run verification suites")
    common(v)
    v.add_argument("--nmax", type=int)
    v.add_argument("--window", type=int, help="Verma window J")
    v.add_argument("--suites", help=f"comma-separated subset of {','.join(SUITES)} (empty string for none)")

    d = sub.add_parser("dual", help="Langlands-dual module report")
    common(d)
    d.add_argument("--n", type=int)
    d.add_argument("--verma", action="store_true", default=None)
    d.add_argument("--window", type=int)

    c = sub.add_parser("coeffs", help="coefficient tables")
    common(c)
    c.add_argument("--what", choices=["P", "alpha", "casimir"])

    ch = sub.add_parser("chars", help="character duality")
    common(ch)
    ch.add_argument("--n", type=int)
    return p


def _parse_int_list(s: str) -> list:
    try:
        return [int(x) for x in s.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected a comma-separated list of integers, got {s!r}") from None


def read_config_file(path: str) -> dict:
    parser = configparser.ConfigParser()
    try:
        with open(path) as fh:
            parser.read_string("[run]\n" + fh.read())
    except OSError as exc:
        raise OSError(f"cannot read config file {path}: {exc}") from exc
    except configparser.Error as exc:
        raise ConfigError(f"bad config file {path}: {exc}") from exc
    return dict(parser["run"])


def make_config(args: argparse.Namespace) -> RunConfig:
    file_vals = read_config_file(args.config) if args.config else {}
    cfg = RunConfig(command=args.command)
    if args.command == "chars":
        cfg.order = 2

    def pick(name, conv):
        v = getattr(args, name, None)
        if v is None and name in file_vals:
            try:
                v = conv(file_vals[name])
            except ValueError:
                raise ConfigError(f"bad value for {name} in config: {file_vals[name]!r}") from None
        return v

    g = getattr(args, "g", None) or file_vals.get("g")
    if g:
        cfg.g_list = _parse_int_list(g)
    for name, conv in (("n", int), ("nmax", int), ("order", int), ("window", int), ("jobs", int), ("out", str), ("what", str)):
        v = pick(name, conv)
        if v is not None:
            setattr(cfg, name, v)
    suites = getattr(args, "suites", None)
    if suites is None:
        suites = file_vals.get("suites")
    if suites is not None:
        cfg.suites = [s.strip() for s in suites.split(",") if s.strip()]
    verma = getattr(args, "verma", None)
    if verma is None and "verma" in file_vals:
        verma = file_vals["verma"].lower() in ("1", "true", "yes")
    cfg.verma = bool(verma)
    cfg.validate()
    return cfg


def format_lines(records: list) -> list:
    lines = []
    for r in records:
        params = " ".join(f"{k}={v}" for k, v in sorted(r.params.items()))
        line = f"{r.status.upper():4s} {r.id} [{params}]"
        if r.residual:
            line += f" first residual: {r.residual}"
        lines.append(line)
    n_fail = sum(r.status != "pass" for r in records)
    lines.append(f"SUMMARY {len(records) - n_fail}/{len(records)} checks passed")
    return lines


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    try:
        cfg = make_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    try:
        if cfg.command == "verify":
            records, data = execute(plan_verify(cfg), cfg.jobs), {}
        elif cfg.command == "dual":
            records, data = run_dual(cfg)
        elif cfg.command == "coeffs":
            records, data = run_coeffs(cfg)
        else:
            records, data = run_chars(cfg)
    except ValueError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG

    for line in format_lines(records):
        print(line)
    if data:
        print(json.dumps(data, indent=1, sort_keys=True))
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": cfg.command,
        "config": {k: v for k, v in asdict(cfg).items() if k != "out"},
        "records": [asdict(r) for r in records],
        "data": data,
    }
    if cfg.out:
        try:
            with open(cfg.out, "w") as fh:
                json.dump(report, fh, indent=1, sort_keys=True)
        except OSError as exc:
            print(f"I/O error: {exc}", file=sys.stderr)
            return EXIT_CONFIG
    return EXIT_FAIL if any(r.status != "pass" for r in records) else EXIT_OK


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
