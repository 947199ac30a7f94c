"""Command-line front end: ``atf <command> --job job.json``.

A job is a JSON object::

    {
      "ring": {"vars": ["x", "y", "z"], "characteristic": 0, "order": "degrevlex"},
      "ideals": {
        "m": ["x", "y", "z"],
        "I": {"power": ["m", 2]},
        "J": ["x*y*z"]
      },
      "command": "check",
      "params": {"J": "J", "I": "I"},
      "N": 5,
      "expect": "FALSE"
    }

Ideals are generator lists or references: ``{"family": name, "params": {...},
"part": "J"}``, ``{"jacobian": name}``, ``{"power": [name, k]}``,
``{"sum": [names]}``, ``{"product": [names]}``, ``{"quotient": [name, modulus]}``
(the image of ``name`` in the ring modulo ``modulus``).

Exit codes: 0 TRUE, 1 FALSE, 2 UNDECIDED, 3 input error.
"""

from __future__ import annotations

import argparse
import concurrent.futures
import json
import sys
import time
from importlib import resources
from pathlib import Path

from . import atf as checks
from .blowup import (Verdict, aluffi_presentation, form_ideal, quotient_rees_presentation,
                     rees_presentation, standard_base_test, sym_presentation, vv_component)
from .cache import GroebnerStore, using_store
from .errors import AluffiError, BudgetExceeded, DegreeCapExceeded, ParseError
from .families import FamilySpec, jacobian_ideal
from .groebner import budget, current_budget
from .ideal import Ideal, ideal_equal, ideal_power, ideal_product, ideal_sum
from .ring import RingSpec

EXIT = {Verdict.TRUE: 0, Verdict.FALSE: 1, Verdict.UNDECIDED: 2}
INPUT_ERROR = 3
COMMANDS = ("check", "strong", "rees", "sym", "aluffi", "qrees", "grform", "vv", "jacobian",
            "family", "criterion", "corpus", "verify")


class JobError(Exception):
    """Malformed or inconsistent job description."""


# --------------------------------------------------------------------------
# job parsing
# --------------------------------------------------------------------------

def ring_from_json(desc: dict) -> RingSpec:
    if not isinstance(desc, dict) or "vars" not in desc:
        raise JobError("ring needs a 'vars' list")
    names = desc["vars"]
    if isinstance(names, str):
        names = names.split()
    base = RingSpec(tuple(names), int(desc.get("characteristic", 0)),
                    desc.get("order", "degrevlex"))
    if desc.get("quotient"):
        base = base.with_quotient([base.parse(q) for q in desc["quotient"]])
    return base


class Job:
    def __init__(self, data: dict, command: str | None = None):
        if not isinstance(data, dict):
            raise JobError("a job must be a JSON object")
        self.data = data
        self.command = command or data.get("command")
        if self.command not in COMMANDS:
            raise JobError(f"unknown command {self.command!r}")
        self.params = dict(data.get("params", {}))
        self.N = int(data.get("N", self.params.get("N", checks.DEFAULT_N)))
        if self.N < 1:
            raise JobError("N must be at least 1")
        self.budget_ms = data.get("budget_ms")
        if self.budget_ms is not None and self.budget_ms <= 0:
            raise JobError("budget_ms must be positive")
        self.ring = ring_from_json(data["ring"]) if "ring" in data else None
        self._defs = dict(data.get("ideals", {}))
        self._built: dict = {}

    def ideal(self, name: str) -> Ideal:
        if not isinstance(name, str):
            raise JobError(f"ideal references must be names, got {name!r}")
        if name in self._built:
            return self._built[name]
        if name not in self._defs:
            raise JobError(f"undefined ideal {name!r}")
        self._built[name] = None
        out = self._build(self._defs[name])
        self._built[name] = out
        return out

    def _build(self, spec) -> Ideal:
        if isinstance(spec, list):
            if self.ring is None:
                raise JobError("explicit generators need a 'ring'")
            return Ideal(self.ring, [self.ring.parse(g) for g in spec])
        if not isinstance(spec, dict) or len(spec) == 0:
            raise JobError(f"cannot read ideal description {spec!r}")
        if "family" in spec:
            ideals = FamilySpec(spec["family"], spec.get("params", {})).build()
            part = spec.get("part", "J")
            if part not in ideals:
                raise JobError(f"family {spec['family']} has no part {part!r}")
            out = ideals[part]
            if self.ring is None:
                self.ring = out.ring
            return self._adopt(out)
        if "jacobian" in spec:
            return jacobian_ideal(self._ref(spec["jacobian"]))
        if "power" in spec:
            name, k = spec["power"]
            return ideal_power(self._ref(name), int(k))
        if "sum" in spec:
            return ideal_sum(*[self._ref(n) for n in spec["sum"]])
        if "product" in spec:
            parts = [self._ref(n) for n in spec["product"]]
            out = parts[0]
            for P in parts[1:]:
                out = ideal_product(out, P)
            return out
        if "quotient" in spec:
            name, modulus = spec["quotient"]
            A, M = self._ref(name), self._ref(modulus)
            ring = A.ring.with_quotient(M.nonzero_gens())
            return Ideal(ring, [g.embed(ring) for g in A.gens])
        raise JobError(f"cannot read ideal description {spec!r}")

    def _ref(self, name) -> Ideal:
        A = self.ideal(name)
        if A is None:
            raise JobError(f"ideal {name!r} refers to itself")
        return A

    def _adopt(self, A: Ideal) -> Ideal:
        if self.ring is not None and A.ring != self.ring:
            if A.ring.vars != self.ring.vars:
                raise JobError("family ring does not match the job ring")
            return Ideal(self.ring, [g.embed(self.ring) for g in A.gens])
        return A

    def param_ideal(self, key: str, default: str | None = None) -> Ideal:
        name = self.params.get(key, default)
        if name is None:
            raise JobError(f"parameter {key!r} is required")
        return self.ideal(name)


def load_job(path, command=None) -> Job:
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise JobError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise JobError(f"{path} is not valid JSON: {exc}") from exc
    return Job(data, command)


# --------------------------------------------------------------------------
# commands
# --------------------------------------------------------------------------

def _info_cert(check, inputs, details, started, verdict=Verdict.TRUE, evidence=()):
    outer = current_budget()
    stats = {"ms": round((time.perf_counter() - started) * 1000.0, 3),
             "gb_steps": outer.steps if outer is not None else 0}
    return checks.Certificate(check, inputs, verdict, list(evidence), "computed", stats, details)


def _presentation_cert(name, alg, inputs, started):
    return _info_cert(name, inputs, alg.describe(), started)


def run_job(job: Job) -> checks.Certificate:
    cmd = job.command
    p = job.params
    started = time.perf_counter()
    if cmd == "check":
        J, I = job.param_ideal("J", "J"), job.param_ideal("I", "I")
        if p.get("mode", "exact") == "truncated":
            return checks.atf_truncated(J, I, job.N, budget_ms=job.budget_ms)
        return checks.atf_exact(J, I, method=p.get("method", "evaluation"),
                                budget_ms=job.budget_ms)
    if cmd == "strong":
        J, I = job.param_ideal("J", "J"), job.param_ideal("I", "I")
        return checks.strongly_atf(J, I, permutations=bool(p.get("permutations", False)),
                                   budget_ms=job.budget_ms)
    if cmd == "criterion":
        return _criterion(job)
    if cmd == "family":
        with budget(max_ms=job.budget_ms):
            return _family(job, started)

    with budget(max_ms=job.budget_ms):
        if cmd in ("rees", "sym"):
            I = job.param_ideal("I", "I")
            alg = rees_presentation(I) if cmd == "rees" else sym_presentation(I)
            return _presentation_cert(cmd, alg, checks.describe_pair(I=I), started)
        if cmd in ("aluffi", "qrees"):
            J, I = job.param_ideal("J", "J"), job.param_ideal("I", "I")
            build = aluffi_presentation if cmd == "aluffi" else quotient_rees_presentation
            return _presentation_cert(cmd, build(J, I), checks.describe_pair(J=J, I=I), started)
        if cmd == "grform":
            J, I = job.param_ideal("J", "J"), job.param_ideal("I", "I")
            report = standard_base_test(J.gens, I)
            details = form_ideal(J, I).describe()
            details["valuations"] = [v if isinstance(v, int) else str(v)
                                     for v in report.valuations]
            details["initial_forms"] = [str(f) for f in report.initial_forms]
            return _info_cert("grform", checks.describe_pair(J=J, I=I), details, started,
                              report.verdict)
        if cmd == "vv":
            J, I = job.param_ideal("J", "J"), job.param_ideal("I", "I")
            n = int(p.get("n", 2))
            comp = vv_component(J, I, n)
            evidence = [{"n": n, "equal": comp.is_zero}]
            if not comp.is_zero:
                evidence[0]["witness"] = str(comp.residue_gens[0])
            details = {"residues": [str(r) for r in comp.residue_gens]}
            return _info_cert("vv", checks.describe_pair(J=J, I=I), details, started,
                              Verdict.of(comp.is_zero), evidence)
        if cmd == "jacobian":
            J = job.param_ideal("J", "J")
            jac = jacobian_ideal(J)
            details = {"jacobian": jac.describe()}
            verdict = Verdict.TRUE
            if "I" in p:
                same = ideal_equal(jac, job.param_ideal("I"))
                details["equals_I"] = same
                verdict = Verdict.of(same)
            return _info_cert("jacobian", checks.describe_pair(J=J), details, started, verdict)
    raise JobError(f"command {cmd!r} cannot run as a single job")


def _family(job: Job, started) -> checks.Certificate:
    p = job.params
    spec = FamilySpec(p.get("family"), p.get("params", {}))
    ideals = spec.build()
    details = {k: A.describe() for k, A in ideals.items()}
    details["ring"] = next(iter(ideals.values())).ring.describe()
    verdict = Verdict.TRUE
    if p.get("compare_jacobian") and "I" in ideals:
        same = ideal_equal(jacobian_ideal(ideals["J"]), ideals["I"])
        details["jacobian_matches_closed_form"] = same
        verdict = Verdict.of(same)
    return _info_cert("family", {"family": spec.family, "params": spec.params}, details,
                      started, verdict)


def _criterion(job: Job) -> checks.Certificate:
    p = job.params
    name = p.get("name")
    kw = {"budget_ms": job.budget_ms}
    if name == "colon":
        return checks.colon_criterion(job.param_ideal("J", "J"), job.param_ideal("I", "I"), **kw)
    if name == "sum":
        return checks.sum_criterion(job.param_ideal("J1", "J1"), job.param_ideal("J2", "J2"),
                                    job.param_ideal("I", "I"), **kw)
    if name == "residual":
        return checks.residual_criterion(job.param_ideal("J1", "J1"), job.param_ideal("J2", "J2"), job.N, **kw)
    if name == "perturbation":
        return checks.perturbation_check(job.param_ideal("J1", "J1"), job.param_ideal("J2", "J2"),
                                         job.param_ideal("I", "I"), int(p.get("N", 2)), **kw)
    if name == "nested":
        return checks.nested_sufficiency(job.param_ideal("J1", "J1"), job.param_ideal("J2", "J2"),
                                         job.param_ideal("I", "I"), job.N, **kw)
    if name == "transfer":
        return checks.transfer_criterion(job.param_ideal("J1", "J1"), job.param_ideal("J2", "J2"),
                                         job.param_ideal("I", "I"), **kw)
    raise JobError(f"unknown criterion {name!r}")


def execute(job: Job) -> checks.Certificate:
    """Run a job, turning budget exhaustion into an UNDECIDED certificate."""
    started = time.perf_counter()
    try:
        return run_job(job)
    except (BudgetExceeded, DegreeCapExceeded) as exc:
        cert = _info_cert(job.command, {}, {"reason": str(exc)}, started, Verdict.UNDECIDED)
        return cert


# --------------------------------------------------------------------------
# verification of certificates
# --------------------------------------------------------------------------

def verify_certificate(data: dict) -> tuple:
    """Re-check the witness of a FALSE certificate by membership tests alone.

    Returns ``(ok, message)``.
    """
    cert = checks.Certificate.from_dict(data)
    if cert.verdict is not Verdict.FALSE:
        return True, f"{cert.verdict.value} certificate carries no witness to re-check"
    inputs = cert.inputs
    if "ring" not in inputs or "J" not in inputs or "I" not in inputs:
        return False, "certificate inputs lack the ring or the pair"
    ring = ring_from_json(inputs["ring"])
    J = Ideal(ring, [ring.parse(g) for g in inputs["J"]["gens"]])
    I = Ideal(ring, [ring.parse(g) for g in inputs["I"]["gens"]])
    for rec in cert.evidence:
        if rec.get("equal") is False and rec.get("witness"):
            ok = checks.verify_witness(J, I, int(rec["n"]), rec["witness"])
            msg = "witness verified" if ok else "witness does NOT separate J ∩ I^n from J I^(n-1)"
            return ok, f"{msg}: {rec['witness']} at n={rec['n']}"
    return False, "FALSE certificate without a witness"


# --------------------------------------------------------------------------
# corpus runs
# --------------------------------------------------------------------------

def shipped_corpus() -> Path:
    return Path(str(resources.files("aluffi") / "corpus"))


def _corpus_one(path: str, cache_dir):
    try:
        data = json.loads(Path(path).read_text())
        if "expect" not in data:
            return path, None, "INPUT_ERROR", "missing 'expect' field"
        expected = data["expect"]
        job = Job(data)
        if cache_dir:
            with using_store(GroebnerStore(cache_dir)):
                cert = execute(job)
        else:
            cert = execute(job)
        return path, expected, cert.verdict.value, ""
    except (JobError, AluffiError, ValueError, KeyError, TypeError) as exc:
        return path, data.get("expect") if isinstance(data, dict) else None, "INPUT_ERROR", str(exc)


def run_corpus(directory, workers: int = 1, cache_dir=None) -> list:
    """Run every ``*.json`` job in ``directory``; rows are ``(name, expected, got, note)``."""
    paths = sorted(str(p) for p in Path(directory).glob("*.json"))
    if workers > 1 and len(paths) > 1:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_corpus_one, paths, [cache_dir] * len(paths)))
    else:
        results = [_corpus_one(p, cache_dir) for p in paths]
    return [(Path(p).stem, exp, got, note) for p, exp, got, note in results]


def format_table(rows) -> str:
    lines = [f"{'job':40s} {'expected':10s} {'got':12s} status"]
    for name, exp, got, note in rows:
        status = "pass" if exp == got else "FAIL"
        line = f"{name:40s} {str(exp):10s} {got:12s} {status}"
        if note:
            line += f"  ({note})"
        lines.append(line)
    return "\n".join(lines)


# --------------------------------------------------------------------------
# entry point
# --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="atf", description=__doc__.split("\n\n")[0])
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--job", help="job JSON file (certificate JSON for verify)")
    parser.add_argument("--dir", help="corpus directory (default: the shipped corpus)")
    parser.add_argument("--N", type=int, help="truncation bound")
    parser.add_argument("--budget-ms", type=int, help="wall-time budget in milliseconds")
    parser.add_argument("--cache", help="directory of the on-disk Groebner basis cache")
    parser.add_argument("--out", help="write the certificate JSON here instead of stdout")
    parser.add_argument("--workers", type=int, default=1, help="parallel corpus jobs")
    return parser


def _emit(text: str, out):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return INPUT_ERROR if exc.code else 0
    if args.N is not None and args.N < 1:
        print("error: --N must be at least 1", file=sys.stderr)
        return INPUT_ERROR
    if args.budget_ms is not None and args.budget_ms <= 0:
        print("error: --budget-ms must be positive", file=sys.stderr)
        return INPUT_ERROR

    if args.command == "corpus":
        directory = args.dir or args.job or shipped_corpus()
        if not Path(directory).is_dir():
            print(f"error: {directory} is not a directory", file=sys.stderr)
            return INPUT_ERROR
        rows = run_corpus(directory, args.workers, args.cache)
        _emit(format_table(rows), args.out)
        return 0 if all(exp == got for _, exp, got, _ in rows) else 1

    if not args.job:
        print("error: --job is required", file=sys.stderr)
        return INPUT_ERROR

    if args.command == "verify":
        try:
            data = json.loads(Path(args.job).read_text())
            ok, message = verify_certificate(data)
        except (OSError, ValueError, KeyError, AluffiError) as exc:
            print(f"error: {exc}", file=sys.stderr)
            return INPUT_ERROR
        print(message)
        return 0 if ok else 1

    try:
        job = load_job(args.job, args.command)
        if args.N is not None:
            job.N = args.N
        if args.budget_ms is not None:
            job.budget_ms = args.budget_ms
        if args.cache:
            with using_store(GroebnerStore(args.cache)):
                cert = execute(job)
        else:
            cert = execute(job)
    except ParseError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    except (JobError, AluffiError, ValueError, KeyError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return INPUT_ERROR
    _emit(cert.to_json(indent=2), args.out)
    return EXIT[cert.verdict]


if __name__ == "__main__":
    sys.exit(main())
