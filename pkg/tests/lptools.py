"""Minimal CPLEX-LP reader plus a scipy/HiGHS bridge.

Independent of the package's model builder on purpose: it re-parses the
exported text so fidelity tests exercise the real export format.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.optimize import LinearConstraint, milp
from scipy.sparse import lil_matrix

_SENSES = ("<=", ">=", "=")


@dataclass
class ParsedLp:
    objective: list[tuple[float, str]]
    constraints: list[tuple[str, list[tuple[float, str]], str, float]]
    binaries: list[str]
    generals: list[str]
    bounds: dict[str, tuple[float, float]]


def _rows(lines: list[str]) -> list[list[str]]:
    """Group wrapped physical lines into logical rows (rows start 'name:')."""
    rows: list[list[str]] = []
    for line in lines:
        tokens = line.split()
        if not tokens:
            continue
        if tokens and tokens[0].endswith(":"):
            rows.append(tokens)
        elif rows:
            rows[-1].extend(tokens)
        else:
            rows.append(tokens)
    return rows


def _parse_terms(tokens: list[str]):
    terms: list[tuple[float, str]] = []
    sense, rhs = None, 0.0
    sign = 1.0
    i = 0
    while i < len(tokens):
        tok = tokens[i]
        if tok in _SENSES:
            sense = tok
            rhs = float(tokens[i + 1])
            break
        if tok == "+":
            sign = 1.0
            i += 1
            continue
        if tok == "-":
            sign = -1.0
            i += 1
            continue
        try:
            coef = float(tok)
            var = tokens[i + 1]
            i += 2
        except ValueError:
            coef = 1.0
            var = tok
            i += 1
        terms.append((sign * coef, var))
        sign = 1.0
    return terms, sense, rhs


def parse_lp(text: str) -> ParsedLp:
    section = None
    objective: list[tuple[float, str]] = []
    constraints = []
    binaries: list[str] = []
    generals: list[str] = []
    bounds: dict[str, tuple[float, float]] = {}
    section_lines: dict[str, list[str]] = {}
    for raw in text.splitlines():
        stripped = raw.strip()
        if stripped in ("Minimize", "Maximize", "Subject To", "Bounds", "Binaries", "Generals", "End"):
            section = stripped
            section_lines.setdefault(section, [])
            continue
        if section:
            section_lines.setdefault(section, []).append(raw)

    for row in _rows(section_lines.get("Minimize", [])):
        body = row[1:] if row[0].endswith(":") else row
        terms, _, _ = _parse_terms(body + ["=", "0"])
        objective.extend(terms)
    for row in _rows(section_lines.get("Subject To", [])):
        name = row[0].rstrip(":")
        terms, sense, rhs = _parse_terms(row[1:])
        assert sense is not None, f"constraint {name} has no sense"
        constraints.append((name, terms, sense, rhs))
    for raw in section_lines.get("Binaries", []):
        binaries.extend(raw.split())
    for raw in section_lines.get("Generals", []):
        generals.extend(raw.split())
    for raw in section_lines.get("Bounds", []):
        tokens = raw.split()
        if len(tokens) == 5 and tokens[1] == "<=" and tokens[3] == "<=":
            lo = float(tokens[0])
            hi = float("inf") if tokens[4] == "+inf" else float(tokens[4])
            bounds[tokens[2]] = (lo, hi)
    return ParsedLp(objective, constraints, binaries, generals, bounds)


def solve_lp(text: str):
    """Solve exported LP text with HiGHS; returns (feasible, objective, values)."""
    parsed = parse_lp(text)
    names = list(dict.fromkeys(parsed.binaries + parsed.generals))
    for _, terms, _, _ in parsed.constraints:
        for _, var in terms:
            if var not in names:
                names.append(var)
    index = {name: i for i, name in enumerate(names)}
    n = len(names)

    c = np.zeros(n)
    for coef, var in parsed.objective:
        c[index[var]] += coef

    A = lil_matrix((len(parsed.constraints), n))
    lo = np.empty(len(parsed.constraints))
    hi = np.empty(len(parsed.constraints))
    for row, (_, terms, sense, rhs) in enumerate(parsed.constraints):
        for coef, var in terms:
            A[row, index[var]] += coef
        lo[row] = rhs if sense in (">=", "=") else -np.inf
        hi[row] = rhs if sense in ("<=", "=") else np.inf

    lower = np.zeros(n)
    upper = np.ones(n)
    for var, (b_lo, b_hi) in parsed.bounds.items():
        lower[index[var]] = b_lo
        upper[index[var]] = b_hi
    from scipy.optimize import Bounds

    result = milp(
        c,
        constraints=[LinearConstraint(A.tocsr(), lo, hi)],
        integrality=np.ones(n),
        bounds=Bounds(lower, upper),
    )
    if not result.success:
        return False, None, {}
    values = {name: float(result.x[index[name]]) for name in names}
    return True, float(result.fun), values
