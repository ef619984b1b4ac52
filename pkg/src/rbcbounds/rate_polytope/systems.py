"""Golden inequality systems for the decode-and-forward rate derivations.

These are the library-level sources of the .sys fixture files shipped in
fixtures/: the pre-elimination system with explicit binning rates, its
projection onto the message rates, and the rate-transfer-enlarged system,
together with the atom-order relations that certify their equivalence.
"""
from fractions import Fraction

from .numeric import AtomRelation
from .symbolic import SymbolicIneqSystem, substitute

ATOM_NAMES = (
    "I(U1;Y1|T,X1)",    # A1
    "I(T,U1;Y1|X1)",    # A2
    "I(U2;Y2|T,X1)",    # A3
    "I(T,X1,U2;Y2)",    # A4
    "I(U1;U2|T,X1)",    # A5
)


def binned_rate_system():
    """Pre-elimination region with explicit binning rates R1', R2'."""
    rate_vars = ("R0", "R1", "R2", "R1p", "R2p")
    rows = [
        # R1 + R1' <= A1
        ((0, 1, 0, 1, 0), (1, 0, 0, 0, 0)),
        # R0 + R1 + R1' <= A2
        ((1, 1, 0, 1, 0), (0, 1, 0, 0, 0)),
        # R2 + R2' <= A3
        ((0, 0, 1, 0, 1), (0, 0, 1, 0, 0)),
        # R0 + R2 + R2' <= A4
        ((1, 0, 1, 0, 1), (0, 0, 0, 1, 0)),
        # R1' + R2' >= A5
        ((0, 0, 0, -1, -1), (0, 0, 0, 0, -1)),
    ]
    return SymbolicIneqSystem(rate_vars, ATOM_NAMES, rows)


def projected_rate_system():
    """The eight message-rate bounds left after eliminating R1', R2'."""
    rate_vars = ("R0", "R1", "R2")
    rows = [
        ((0, 1, 0), (1, 0, 0, 0, 0)),
        ((1, 1, 0), (0, 1, 0, 0, 0)),
        ((0, 0, 1), (0, 0, 1, 0, 0)),
        ((1, 0, 1), (0, 0, 0, 1, 0)),
        ((0, 1, 1), (1, 0, 1, 0, -1)),
        ((1, 1, 1), (0, 1, 1, 0, -1)),
        ((1, 1, 1), (1, 0, 0, 1, -1)),
        ((2, 1, 1), (0, 1, 0, 1, -1)),
    ]
    return SymbolicIneqSystem(rate_vars, ATOM_NAMES, rows)


def transfer_substitution():
    """Rate-transfer map: old rates rewritten in post-transfer coordinates.

    The transferred triple is (R0 - D1 - D2, R1 + D1, R2 + D2), so the old
    rates are R0 + D1 + D2, R1 - D1, R2 - D2 in the new variables.
    """
    return {
        "R0": {"R0": 1, "D1": 1, "D2": 1},
        "R1": {"R1": 1, "D1": -1},
        "R2": {"R2": 1, "D2": -1},
    }


def transferred_rate_system():
    """projected_rate_system rewritten over (R0, R1, R2, D1, D2)."""
    return substitute(projected_rate_system(), transfer_substitution(),
                      new_vars=("R0", "R1", "R2", "D1", "D2"))


def enlarged_rate_system():
    """The five-bound region after eliminating the transfer amounts."""
    rate_vars = ("R0", "R1", "R2")
    rows = [
        ((1, 1, 0), (0, 1, 0, 0, 0)),
        ((1, 0, 1), (0, 0, 0, 1, 0)),
        ((1, 1, 1), (0, 1, 1, 0, -1)),
        ((1, 1, 1), (1, 0, 0, 1, -1)),
        ((2, 1, 1), (0, 1, 0, 1, -1)),
    ]
    return SymbolicIneqSystem(rate_vars, ATOM_NAMES, rows)


def enlargement_relations():
    """Atom-value conditions certifying the five-bound equivalence.

    All atoms are nonnegative, and the chain rule forces A1 <= A2 and
    A3 <= A4 for every distribution.
    """
    rels = []
    n = len(ATOM_NAMES)
    for i in range(n):
        coeffs = [Fraction(0)] * n
        coeffs[i] = Fraction(-1)
        rels.append(AtomRelation(coeffs, 0))     # -Ai <= 0
    rels.append(AtomRelation((1, -1, 0, 0, 0), 0))   # A1 <= A2
    rels.append(AtomRelation((0, 0, 1, -1, 0), 0))   # A3 <= A4
    return rels
