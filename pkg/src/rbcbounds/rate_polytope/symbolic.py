"""Symbolic linear-inequality systems over rate variables and exact FME.

An inequality is sum(rate_coeffs * rates) <= sum(atom_coeffs * atoms) with
exact rational coefficients. Atoms are named nonnegative constants (mutual
information terms). Rate variables are implicitly nonnegative: that
constraint is structural, never stored, and is used as a lower bound for a
variable while it is being eliminated. Rows that are trivially true under
those sign conventions (all rate coefficients <= 0 and all atom coefficients
>= 0) are removed on construction, as are exact duplicates after scaling to
a primitive integer form.
"""
from __future__ import annotations

import json
from fractions import Fraction
from math import gcd

from ..errors import InputError
from ..channel_model import write_text_atomic


def _to_fraction(value):
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise InputError(f"coefficient {value!r} is not an exact rational")


def _normalize(rates, atoms):
    """Scale by a positive rational to coprime integers; None if trivial."""
    coeffs = list(rates) + list(atoms)
    denom_lcm = 1
    for c in coeffs:
        denom_lcm = denom_lcm * c.denominator // gcd(denom_lcm, c.denominator)
    ints = [int(c * denom_lcm) for c in coeffs]
    g = 0
    for v in ints:
        g = gcd(g, abs(v))
    if g == 0:
        return None  # 0 <= 0
    ints = [v // g for v in ints]
    nr = len(rates)
    rates_i, atoms_i = tuple(ints[:nr]), tuple(ints[nr:])
    if all(v <= 0 for v in rates_i) and all(v >= 0 for v in atoms_i):
        return None  # always true: rates >= 0, atoms >= 0
    return rates_i, atoms_i


class Inequality:
    """One row: rates . r <= atoms . a, stored in primitive integer form."""

    __slots__ = ("rates", "atoms")

    def __init__(self, rates, atoms):
        self.rates = tuple(Fraction(v) for v in rates)
        self.atoms = tuple(Fraction(v) for v in atoms)

    def key(self):
        norm = _normalize(self.rates, self.atoms)
        return norm

    def __repr__(self):
        return f"Inequality(rates={self.rates}, atoms={self.atoms})"


class SymbolicIneqSystem:
    """Inequality system over named rate variables and named MI atoms."""

    def __init__(self, rate_vars, atoms, inequalities):
        self.rate_vars = tuple(str(v) for v in rate_vars)
        self.atoms = tuple(str(a) for a in atoms)
        if len(set(self.rate_vars)) != len(self.rate_vars):
            raise InputError("duplicate rate variable names")
        if len(set(self.atoms)) != len(self.atoms):
            raise InputError("duplicate atom names")
        seen = set()
        rows = []
        for ineq in inequalities:
            if not isinstance(ineq, Inequality):
                ineq = Inequality(*ineq)
            if len(ineq.rates) != len(self.rate_vars) or \
                    len(ineq.atoms) != len(self.atoms):
                raise InputError("coefficient vector length mismatch")
            key = ineq.key()
            if key is None or key in seen:
                continue
            seen.add(key)
            rows.append(Inequality(key[0], key[1]))
        self.inequalities = tuple(rows)

    def _var_index(self, name):
        try:
            return self.rate_vars.index(name)
        except ValueError:
            raise InputError(f"unknown rate variable {name!r}")

    def restrict(self, rate_vars):
        """Project onto a variable subset whose dropped columns are all zero."""
        keep = [self._var_index(v) for v in rate_vars]
        drop = [i for i in range(len(self.rate_vars)) if i not in keep]
        for ineq in self.inequalities:
            for i in drop:
                if ineq.rates[i] != 0:
                    raise InputError(
                        f"variable {self.rate_vars[i]} still has nonzero "
                        "coefficients; eliminate it first")
        rows = [Inequality([ineq.rates[i] for i in keep], ineq.atoms)
                for ineq in self.inequalities]
        return SymbolicIneqSystem(rate_vars, self.atoms, rows)

    def normalized_set(self):
        return frozenset(ineq.key() for ineq in self.inequalities)

    def same_inequalities(self, other):
        """Exact match up to positive scaling and reordering."""
        if self.rate_vars != other.rate_vars or self.atoms != other.atoms:
            return False
        return self.normalized_set() == other.normalized_set()

    def to_jsonable(self):
        return {
            "rate_vars": list(self.rate_vars),
            "atoms": list(self.atoms),
            "inequalities": [
                {"rates": [str(c) for c in ineq.rates],
                 "atoms": [str(c) for c in ineq.atoms]}
                for ineq in self.inequalities],
        }

    @classmethod
    def from_jsonable(cls, doc):
        try:
            rows = [(tuple(_to_fraction(c) for c in row["rates"]),
                     tuple(_to_fraction(c) for c in row["atoms"]))
                    for row in doc["inequalities"]]
            return cls(doc["rate_vars"], doc["atoms"], rows)
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed system object: {exc}")


def load_system(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return SymbolicIneqSystem.from_jsonable(json.load(fh))
    except OSError as exc:
        raise InputError(f"cannot read system file {path}: {exc}")
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed system file {path}: {exc}")


def save_system(system, path):
    write_text_atomic(path, json.dumps(system.to_jsonable(), indent=1) + "\n")


def fme_eliminate(system, victims):
    """Exact Fourier-Motzkin projection eliminating the victim variables.

    For each victim, every lower bound (including the structural victim >= 0)
    is paired with every upper bound. Victims keep their column, zeroed.
    """
    victims = [victims] if isinstance(victims, str) else list(victims)
    current = system
    for victim in victims:
        vi = current._var_index(victim)
        uppers, lowers, others = [], [], []
        for ineq in current.inequalities:
            c = ineq.rates[vi]
            if c > 0:
                uppers.append(ineq)
            elif c < 0:
                lowers.append(ineq)
            else:
                others.append(ineq)
        # structural victim >= 0, i.e. -victim <= 0
        zero_low = Inequality(
            tuple(Fraction(-1) if i == vi else Fraction(0)
                  for i in range(len(current.rate_vars))),
            tuple(Fraction(0) for _ in current.atoms))
        lowers.append(zero_low)
        new_rows = list(others)
        for low in lowers:
            p = -low.rates[vi]
            for up in uppers:
                q = up.rates[vi]
                rates = tuple(q * lr + p * ur
                              for lr, ur in zip(low.rates, up.rates))
                atoms = tuple(q * la + p * ua
                              for la, ua in zip(low.atoms, up.atoms))
                new_rows.append(Inequality(rates, atoms))
        current = SymbolicIneqSystem(current.rate_vars, current.atoms,
                                     new_rows)
    return current


def substitute(system, mapping, new_vars=None):
    """Rewrite each old rate variable as a rational-linear form in new ones.

    mapping : {old_var: {new_var: coefficient}}. Every old variable must be
    mapped. Side constraints on the new variables are the caller's job.
    """
    for old in system.rate_vars:
        if old not in mapping:
            raise InputError(f"variable {old!r} is not mapped")
    if new_vars is None:
        new_vars = []
        for old in system.rate_vars:
            for nv in mapping[old]:
                if nv not in new_vars:
                    new_vars.append(nv)
    new_vars = tuple(new_vars)
    cols = {}
    for old in system.rate_vars:
        col = [Fraction(0)] * len(new_vars)
        for nv, coeff in mapping[old].items():
            try:
                col[new_vars.index(nv)] = _to_fraction(coeff)
            except ValueError:
                raise InputError(f"new variable {nv!r} missing from new_vars")
        cols[old] = col
    rows = []
    for ineq in system.inequalities:
        rates = [Fraction(0)] * len(new_vars)
        for old_i, coeff in enumerate(ineq.rates):
            if coeff == 0:
                continue
            for j, c in enumerate(cols[system.rate_vars[old_i]]):
                rates[j] += coeff * c
        rows.append(Inequality(rates, ineq.atoms))
    return SymbolicIneqSystem(new_vars, system.atoms, rows)
