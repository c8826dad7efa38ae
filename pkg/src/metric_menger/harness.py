"""SAT roundtrip: reduce formulas, solve the instances, compare with the SAT oracle."""

from __future__ import annotations

import json
import random
from typing import Iterable, Sequence

from .cnf import CnfFormula, evaluate, sat_brute_force, to_dimacs
from .dp import DEFAULT_STATE_BUDGET, solve_mm
from .reduction import InvalidWitness, build_reduction, extract_assignment
from .solver import DEFAULT_NODE_BUDGET, GuardExceeded
from .generators import all_formulas, random_formula

# gadget graphs outgrow the solver's default vertex limit from r = 5 on
ROUNDTRIP_MAX_VERTICES = 2000


def legal_settings(rs: Iterable[int], variants: Iterable[str]) -> list[tuple[int, str]]:
    """``(r, variant)`` pairs the reduction accepts."""
    return [(r, v) for r in rs for v in variants if r >= 3 and (v == "deg4" or r >= 4)]


def roundtrip_formulas(
    nvars: int,
    nclauses: int,
    exhaustive: bool,
    trials: int,
    seed: int,
    random_vars: int | None = None,
    random_clauses: int | None = None,
) -> list[tuple[str, CnfFormula]]:
    """Labelled corpus: every formula of the given size (if ``exhaustive``),
    then ``trials`` random ones with at most ``random_vars`` variables and
    ``random_clauses`` clauses (defaulting to the exhaustive size)."""
    out = []
    if exhaustive:
        out += [(f"all-{t}", phi) for t, phi in enumerate(all_formulas(nvars, nclauses))]
    rng = random.Random(seed)
    rv = nvars if random_vars is None else random_vars
    rc = nclauses if random_clauses is None else random_clauses
    out += [(f"rand-{t}", random_formula(rng, rv, rc)) for t in range(trials)]
    return out


def check_formula(
    phi: CnfFormula,
    r: int,
    variant: str,
    method: str = "auto",
    node_budget: int = DEFAULT_NODE_BUDGET,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> dict:
    """One comparison; returns a small JSON-ready record."""
    sat = sat_brute_force(phi) is not None
    inst, cert = build_reduction(phi, r, 2, variant)
    rec = {"sat": sat}
    try:
        out = solve_mm(
            inst, method, node_budget=node_budget, state_budget=state_budget,
            max_vertices=ROUNDTRIP_MAX_VERTICES,
        )
    except GuardExceeded as exc:
        rec["guard"] = str(exc)
        return rec
    rec["answer"] = out.answer
    rec["method"] = out.stats["method"]
    if out.answer:
        try:
            f = extract_assignment(cert, out.witness)
            rec["extracted_ok"] = evaluate(phi, f)
        except InvalidWitness as exc:
            rec["extracted_ok"] = False
            rec["extract_error"] = str(exc)
    return rec


def run_roundtrip(
    nvars: int = 2,
    nclauses: int = 2,
    rs: Sequence[int] = (3, 4, 5),
    variants: Sequence[str] = ("deg4", "deg3"),
    methods: Sequence[str] = ("auto",),
    trials: int = 0,
    seed: int = 0,
    exhaustive: bool = True,
    random_vars: int | None = None,
    random_clauses: int | None = None,
    node_budget: int = DEFAULT_NODE_BUDGET,
    state_budget: int = DEFAULT_STATE_BUDGET,
) -> dict:
    """Deterministic report (no timings) keyed by ``r/variant/method``.

    A disagreement is a formula whose satisfiability differs from the
    solver's answer; an extraction failure is a yes whose witness does not
    decode to a satisfying assignment. Guard hits are counted separately.
    """
    corpus = roundtrip_formulas(nvars, nclauses, exhaustive, trials, seed, random_vars, random_clauses)
    settings = legal_settings(rs, variants)
    report = {
        "config": {
            "nvars": nvars, "nclauses": nclauses, "rs": list(rs), "variants": list(variants),
            "methods": list(methods), "trials": trials, "seed": seed, "exhaustive": exhaustive,
            "random_vars": random_vars, "random_clauses": random_clauses,
            "node_budget": node_budget, "state_budget": state_budget,
        },
        "formulas": len(corpus),
        "settings": {},
        "disagreements": [],
        "extraction_failures": [],
        "guard_hits": [],
    }
    for r, variant in settings:
        for method in methods:
            key = f"r={r}/{variant}/{method}"
            tally = {"cases": 0, "sat": 0, "yes": 0, "agree": 0, "guard": 0}
            for label, phi in corpus:
                rec = check_formula(phi, r, variant, method, node_budget, state_budget)
                tally["cases"] += 1
                tally["sat"] += rec["sat"]
                where = {"setting": key, "formula": label, "dimacs": to_dimacs(phi)}
                if "guard" in rec:
                    tally["guard"] += 1
                    report["guard_hits"].append({**where, "error": rec["guard"]})
                    continue
                tally["yes"] += rec["answer"]
                if rec["answer"] == rec["sat"]:
                    tally["agree"] += 1
                else:
                    report["disagreements"].append({**where, "sat": rec["sat"], "answer": rec["answer"]})
                if rec.get("extracted_ok") is False:
                    report["extraction_failures"].append({**where, "error": rec.get("extract_error", "")})
            report["settings"][key] = tally
    return report


def report_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True) + "\n"
