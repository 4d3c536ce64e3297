"""Command-line entry points and JSON reports.

Every number in a report is wrapped as {"value": ..., "source": ...} with
source one of "computed", "formula" or "external"; a report whose computed
and formula values disagree has "passed": false at the top level, and the
process exit code is 0 only when every report passed.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import logging
import sys
import time
import urllib.error
import urllib.parse
import urllib.request
from dataclasses import asdict, dataclass, field
from pathlib import Path

from sympy import primerange

from .exact_arith import AdmissibilityError, PrecisionError, require_admissible, vp, zeta_neg
from .homalg import (
    annihilator,
    cohomology,
    euler_characteristic,
    local_square_complex,
    regulator,
    simple_complex_shape,
    verify_sN,
    verify_xi_relation,
)
from .mazur_tate import (
    IntegralityError,
    alpha,
    merel_number,
    predicted_slope,
    sum_of_logs_both,
    xi_eis,
    xi_mt,
    xi_mt_star,
    xi_prime,
)
from .modular_symbols import (
    build_space,
    congruence_audit,
    eisenstein_local,
    eta_product_x0_11,
    x0_11_demo,
)
from .qexp import DEFAULT_QPREC, eis_pm, verify_deformation_eigenform, verify_eprime_hecke, verify_xe
from .tame_group_ring import TameContext

SCHEMA_VERSION = 1
LMFDB_URL = "https://www.lmfdb.org/api/mf_newforms/"
DEFAULT_CACHE = Path.home() / ".cache" / "tame_eisenstein"

log = logging.getLogger(__name__)


def tag(value, source="computed"):
    return {"value": value, "source": source}


def compare(computed, formula):
    """A computed/formula pair with an agreement flag."""
    return {"computed": tag(computed), "formula": tag(formula, "formula"), "agree": computed == formula}


@dataclass
class RunConfig:
    command: str
    k: int = 14
    p: int = 5
    N: int = 11
    precision: int | None = None
    qprec: int = DEFAULT_QPREC
    primes: list = field(default_factory=lambda: [2, 3, 7, 13])
    out: str | None = None
    cache_dir: str = str(DEFAULT_CACHE)
    offline: bool = False
    allow_weight_two: bool = False

    def context(self) -> TameContext:
        return TameContext(self.N, self.p, M=self.precision, k=self.k)


def _report(kind, config, body, passed):
    return {
        "schema_version": SCHEMA_VERSION,
        "command": kind,
        "parameters": {"k": config.k, "p": config.p, "N": config.N},
        "passed": bool(passed),
        **body,
    }


# -- xi ------------------------------------------------------------------------

def cmd_xi(config: RunConfig) -> dict:
    require_admissible(config.k, config.p, config.N, config.allow_weight_two)
    k, ctx = config.k, config.context()
    body = {"gamma": tag(ctx.gamma), "nu": tag(ctx.nu), "precision": tag(ctx.M)}
    xi = xi_mt(k, ctx)
    body["xi_MT"] = tag([int(c) for c in xi.coeffs])
    xp = xi_prime(k, ctx)
    body["xi_prime"] = tag(xp)
    body["xi_prime_unit"] = tag(xp % ctx.p != 0)
    try:
        body["xi_MT_star"] = tag([int(c) for c in xi_mt_star(k, ctx).coeffs])
    except IntegralityError as exc:
        body["xi_MT_star"] = {"error": str(exc), "source": "computed"}
    e = xi_eis(k, ctx)
    body["xi_Eis"] = tag({"a": e.a, "b": e.b})
    if xp % ctx.p:
        body["alpha"] = tag(alpha(k, ctx))
    merel = merel_number(ctx.N, ctx.p, ctx)
    body["merel_number"] = tag(merel)
    if k == 2:
        body["merel_equivalence"] = tag((merel == 0) == (xp % ctx.p == 0))
    body["sum_of_logs"] = tag(sum_of_logs_both(k, ctx))
    try:
        body["predicted_slope"] = tag(list(predicted_slope(k, ctx)))
    except ValueError as exc:
        body["predicted_slope"] = {"error": str(exc), "source": "computed"}
    passed = body.get("merel_equivalence", {"value": True})["value"]
    return _report("xi", config, body, passed)


# -- eis-verify ------------------------------------------------------------------

def cmd_eis_verify(config: RunConfig) -> dict:
    require_admissible(config.k, config.p, config.N, config.allow_weight_two)
    k, ctx, P = config.k, config.context(), config.qprec
    reports = [verify_xe(k, ctx, P), verify_eprime_hecke(k, ctx, config.primes, P),
               verify_deformation_eigenform(k, ctx, config.primes, P)]
    body = {"identities": [dict(r.as_dict(), source="computed") for r in reports], "qprec": tag(P)}
    return _report("eis-verify", config, body, all(r.passed for r in reports))


# -- hecke ---------------------------------------------------------------------

def _is_x0_11_demo(config):
    return (config.k, config.p, config.N) == (2, 5, 11)


def cmd_hecke(config: RunConfig) -> dict:
    if not _is_x0_11_demo(config):
        require_admissible(config.k, config.p, config.N, config.allow_weight_two)
    k, p, N = config.k, config.p, config.N
    space = build_space(N, k)
    rep = eisenstein_local(space, p, config.precision)
    nu = vp(N - 1, p)
    a0 = eis_pm(k, N, -1, 1)[0] if k >= 4 else zeta_neg(2) * (1 - N) / 2
    index_formula = int(vp(a0, p))
    ctx = TameContext(N, p, k=k)
    xp = xi_prime(k, ctx)
    conditions = {
        "xi_prime_unit": tag(xp % p != 0, "formula"),
        "principal": tag(rep.principal),
        "rank_one": tag(rep.rank == 1),
    }
    biconditional = (rep.rank == 1) == (xp % p != 0 and rep.principal)
    body = {
        "rank": tag(rep.rank),
        "rank_certified": tag(rep.rank_certified),
        "index": dict(compare(rep.index_exponent, index_formula), base=p),
        "principal": tag(rep.principal),
        "eigenvalues": {str(ell): tag(v) for ell, v in rep.eigen_map.items()},
        "eigen_modulus": tag(rep.eigen_modulus),
        "conditions": conditions,
        "rank_one_biconditional": tag(biconditional),
        "wN_minus_one_on_component": tag(rep.wN_is_minus_one),
        "UN_matches_wN": tag(rep.UN_is_minus_scaled_wN),
        "precision": tag(rep.M),
        "nu": tag(nu),
    }
    passed = body["index"]["agree"] and biconditional and rep.wN_is_minus_one
    if rep.rank == 1 and xp % p:
        audit = congruence_audit(rep, k, ctx)
        body["congruence_audit"] = {str(ell): compare(r["computed"], r["formula"]) for ell, r in audit.items()}
        passed = passed and all(r["passed"] for r in audit.values())
    if _is_x0_11_demo(config):
        demo = x0_11_demo()
        body["x0_11"] = {str(ell): {"a_ell": tag(r["a_ell"]), "mod5": tag(r["mod5"]), "mod25": tag(r["mod25"])}
                         for ell, r in demo.items()}
        passed = passed and all(r["mod5"] and r["mod25"] for r in demo.values())
    return _report("hecke", config, body, passed)


# -- local ---------------------------------------------------------------------

def cmd_local(config: RunConfig) -> dict:
    require_admissible(config.k, config.p, config.N, config.allow_weight_two)
    k, ctx = config.k, config.context()
    exact = local_square_complex(k, ctx, exact=True)
    C = local_square_complex(k, ctx)
    H = cohomology(C)
    sN = verify_sN(k, ctx)
    rel = verify_xi_relation(k, ctx)
    reg = regulator(exact)
    shape = simple_complex_shape(k, ctx)
    anns = []
    for h in H:
        ideal = annihilator(h, ctx, check_precision=True, C=exact)
        anns.append({"generators": tag([list(g) for g in ideal.generators]),
                     "log_index": tag(ctx.q * ctx.M - ideal.log_size), "stable": tag(ideal.stable)})
    body = {
        "d_squared_zero": tag(C.d_squared_zero()),
        "cohomology": [{"degree": i, "invariants": tag(h.invariants)} for i, h in enumerate(H)],
        "euler_characteristic": tag(euler_characteristic(H)),
        "annihilators": anns,
        "regulator": {str(j): tag(str(v)) for j, v in enumerate(reg.values)},
        "regulator_valuations": tag(list(reg.valuations)),
        "sN": {"passed": tag(sN["passed"]), "characters": sN["characters"]},
        "xi_relation": {"passed": tag(rel["passed"])},
        "simple_complex_shape": {key: tag(v) for key, v in shape.items()},
    }
    passed = C.d_squared_zero() and sN["passed"] and rel["passed"] and euler_characteristic(H) == 0
    return _report("local", config, body, passed)


# -- external eigenvalue data ------------------------------------------------------

class FetchError(RuntimeError):
    """Structured failure of the eigenvalue client; ``kind`` is one of
    "network", "schema" or "cache-miss"."""

    def __init__(self, kind, message, **info):
        super().__init__(message)
        self.kind = kind
        self.info = info

    def as_dict(self):
        return {"error": self.kind, "message": str(self), **self.info}


@dataclass
class EigenvalueRecord:
    level: int
    weight: int
    label: str
    dim: int
    traces: list  # trace of a_n for n = 1, 2, ...; the eigenvalues when dim = 1
    source: str

    def a(self, n):
        return self.traces[n - 1]

    def validate(self):
        if self.traces[0] != self.dim:
            raise FetchError("schema", f"{self.label}: a_1 trace is {self.traces[0]}, expected {self.dim}")
        if self.dim == 1:
            small = [ell for ell in primerange(2, 30) if self.level % ell]
            for i, l1 in enumerate(small):
                for l2 in small[i + 1:]:
                    if l1 * l2 <= len(self.traces) and self.a(l1 * l2) != self.a(l1) * self.a(l2):
                        raise FetchError("schema", f"{self.label}: a_{l1 * l2} is not multiplicative")
        return self


def _key(*parts):
    return hashlib.sha256("|".join(map(str, parts)).encode()).hexdigest()[:32]


class EigenvalueCache:
    """One JSON document per record plus one per query, with filenames
    derived from a hash of the key. Writes go through a temporary file and
    an atomic rename."""

    def __init__(self, root):
        self.root = Path(root)

    def _write(self, path, payload):
        self.root.mkdir(parents=True, exist_ok=True)
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(payload, sort_keys=True, indent=1))
        tmp.replace(path)

    def query_path(self, level, weight):
        return self.root / f"query-{_key(level, weight)}.json"

    def record_path(self, level, weight, label):
        return self.root / f"record-{_key(level, weight, label)}.json"

    def store(self, level, weight, raw, records):
        for r in records:
            self._write(self.record_path(level, weight, r.label), asdict(r))
        self._write(self.query_path(level, weight),
                    {"level": level, "weight": weight, "raw": raw, "labels": [r.label for r in records]})

    def load(self, level, weight):
        path = self.query_path(level, weight)
        if not path.exists():
            return None
        query = json.loads(path.read_text())
        records = []
        for label in query["labels"]:
            data = json.loads(self.record_path(level, weight, label).read_text())
            records.append(EigenvalueRecord(**data))
        return records


def _parse_lmfdb(payload, level, weight):
    if not isinstance(payload, dict) or not isinstance(payload.get("data"), list):
        raise FetchError("schema", "response has no 'data' list", level=level, weight=weight)
    records = []
    for row in payload["data"]:
        try:
            rec = EigenvalueRecord(level=int(row["level"]), weight=int(row["weight"]), label=str(row["label"]),
                                   dim=int(row["dim"]), traces=[int(x) for x in row["traces"]], source="external")
        except (KeyError, TypeError, ValueError) as exc:
            raise FetchError("schema", f"unexpected newform record: {exc}", level=level, weight=weight) from exc
        records.append(rec.validate())
    return records


def fetch_eigenvalues(level: int, weight: int, config: RunConfig, opener=None,
                      retries: int = 3, backoff: float = 0.5) -> list:
    """Newform traces at (level, weight, trivial character), from the cache
    or from the public database API."""
    cache = EigenvalueCache(config.cache_dir)
    cached = cache.load(level, weight)
    if cached is not None:
        return cached
    if config.offline:
        raise FetchError("cache-miss", f"no cached data for level {level}, weight {weight}",
                         level=level, weight=weight, cache_dir=str(cache.root))
    opener = opener or urllib.request.urlopen
    query = urllib.parse.urlencode({"level": level, "weight": weight, "char_orbit_index": 1,
                                    "_format": "json", "_fields": "label,level,weight,dim,traces"})
    url = f"{LMFDB_URL}?{query}"
    last = None
    for attempt in range(retries):
        try:
            with opener(url, timeout=30) as resp:
                payload = json.loads(resp.read().decode())
            break
        except (urllib.error.URLError, OSError, json.JSONDecodeError) as exc:
            last = exc
            log.warning("fetch attempt %d failed: %s", attempt + 1, exc)
            time.sleep(backoff * 2 ** attempt)
    else:
        raise FetchError("network", f"giving up after {retries} attempts: {last}", level=level, weight=weight)
    records = _parse_lmfdb(payload, level, weight)
    cache.store(level, weight, payload, records)
    return records


def x0_11_oracle_record(P: int = 100) -> EigenvalueRecord:
    """The X_0(11) newform from the eta-product expansion, tagged as such."""
    coeffs = eta_product_x0_11(P)
    return EigenvalueRecord(11, 2, "11.2.a.a", 1, coeffs[1:], "eta-oracle").validate()


def cmd_fetch(config: RunConfig) -> dict:
    records = fetch_eigenvalues(config.N, config.k, config)
    body = {"records": [{"label": r.label, "dim": r.dim, "source": r.source,
                         "a_ell": {str(ell): {"value": r.a(ell), "source": "external" if r.source == "external" else r.source}
                                   for ell in config.primes if ell <= len(r.traces)}} for r in records]}
    passed = True
    if (config.N, config.k) == (11, 2):
        oracle = x0_11_oracle_record()
        agree = all(r.a(ell) == oracle.a(ell) for r in records for ell in config.primes if r.dim == 1)
        body["eta_oracle_agrees"] = tag(agree)
        passed = agree
    return _report("fetch", config, body, passed)


# -- CLI -------------------------------------------------------------------------

COMMANDS = {
    "xi": cmd_xi,
    "eis-verify": cmd_eis_verify,
    "hecke": cmd_hecke,
    "local": cmd_local,
    "fetch": cmd_fetch,
}


def _prime_list(text):
    return [int(x) for x in text.split(",") if x.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tame-eisenstein",
                                     description="Mazur-Tate elements, Eisenstein congruences and tame local regulators.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sp = sub.add_parser(name)
        sp.add_argument("--k", type=int, default=14)
        sp.add_argument("--p", type=int, default=5)
        sp.add_argument("--N", type=int, default=11)
        sp.add_argument("--precision", type=int, default=None, help="p-adic precision M")
        sp.add_argument("--qprec", type=int, default=DEFAULT_QPREC, help="q-expansion precision")
        sp.add_argument("--primes", type=_prime_list, default=[2, 3, 7, 13])
        sp.add_argument("--offline", action="store_true")
        sp.add_argument("--cache-dir", default=str(DEFAULT_CACHE))
        sp.add_argument("--out", default=None, help="write the JSON report here as well")
        sp.add_argument("--allow-weight-two", action="store_true")
    return parser


def run(argv=None) -> tuple[dict, int]:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    config = RunConfig(command=args.command, k=args.k, p=args.p, N=args.N, precision=args.precision,
                       qprec=args.qprec, primes=args.primes, out=args.out, cache_dir=args.cache_dir,
                       offline=args.offline, allow_weight_two=args.allow_weight_two)
    try:
        report = COMMANDS[args.command](config)
        code = 0 if report["passed"] else 1
    except AdmissibilityError as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": args.command, "passed": False,
                  "error": {"kind": "admissibility", "condition": exc.condition, "message": str(exc)}}
        code = 2
    except PrecisionError as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": args.command, "passed": False,
                  "error": {"kind": "precision", "message": str(exc),
                            "suggested_precision": (args.precision or 8) + 4}}
        code = 3
    except FetchError as exc:
        report = {"schema_version": SCHEMA_VERSION, "command": args.command, "passed": False,
                  "error": exc.as_dict()}
        code = 4
    if config.out:
        Path(config.out).write_text(json.dumps(report, indent=1, sort_keys=True))
    return report, code


def main(argv=None) -> int:
    report, code = run(argv)
    json.dump(report, sys.stdout, indent=1, sort_keys=True)
    sys.stdout.write("\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
