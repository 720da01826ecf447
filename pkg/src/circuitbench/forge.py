"""Desk-scale hard-polynomial search.

Which 0/1 coefficient vectors of length d+1 arise as the degree-d truncation
of something a small device can compute?  Two oracles answer that question:

  * parameter sweep: the image of the universal template's truncated
    coefficient map over all parameter assignments in F_p;
  * circuit enumeration: the truncated coefficient vectors of every
    canonical circuit of bounded size with constants in F_p, computed by
    exact expansion (an independent path).

The searches return the lexicographically first vector outside the realized
set, or report saturation when every vector is realized.  Sign-condition
search does the analogous thing for the signs of integer coefficients of
constant-free circuits.
"""

from dataclasses import dataclass
from itertools import product

from .algebra import SparsePoly
from .circuits import enumerate_circuits, expand_circuit, is_constant_free
from .errors import BudgetError
from .primes import is_prime
from .systems import DEFAULT_SOLVE_BUDGET, build_hardness_system, solve_bruteforce
from .universal import _series_mul

DEFAULT_SWEEP_BUDGET = 10**7
DEFAULT_ENUM_ORACLE_BUDGET = 2_000_000


def lex_first_missing(vectors, d):
    """First vector of {0,1}^(d+1) not in `vectors`, index 0 most
    significant; None when all are present."""
    for cand in product((0, 1), repeat=d + 1):
        if cand not in vectors:
            return cand
    return None


@dataclass(frozen=True)
class RealizableSet:
    s: int
    d: int
    p: int
    vectors: frozenset  # 0/1 vectors of length d+1
    source: str  # "parameter-sweep" | "circuit-enumeration"


def _sweep_image(s, d, p, budget):
    """All truncated coefficient vectors of the s-level template over F_p.

    Walks level values rather than raw assignments: the value of level j
    depends only on the values of earlier levels and its own coefficients,
    so identical level-value prefixes are explored once.  Products of the
    same pair of side-vectors are cached globally.
    """
    if p ** (s * (s + 1)) > budget:
        raise BudgetError(
            f"{p}^{s * (s + 1)} sweep assignments exceed budget {budget}",
            reached=p ** (s * (s + 1)),
        )
    image = set()
    pair_cache = {}

    def products(span):
        out = set()
        ordered = sorted(span)
        for qi, q in enumerate(ordered):
            for r in ordered[qi:]:
                key = (q, r)
                val = pair_cache.get(key)
                if val is None:
                    val = tuple(_series_mul(list(q), list(r), d, p))
                    pair_cache[key] = val
                out.add(val)
        return out

    def combos(state, j):
        """All vectors a_0 * 1 + sum_i a_i * level_i over a in F_p^j."""
        spans = {(0,) * (d + 1)}
        for i in range(j - 1, 0, -1):  # levels j-1 .. 1
            base = state[i - 1]
            new = set()
            for vec in spans:
                for a in range(p):
                    new.add(
                        tuple((x + a * y) % p for x, y in zip(vec, base))
                        if a
                        else vec
                    )
            spans = new
        out = set()
        for vec in spans:
            for a0 in range(p):
                if a0:
                    first = (vec[0] + a0) % p
                    out.add((first,) + vec[1:])
                else:
                    out.add(vec)
        return out

    def rec(state, j):
        if j > s:
            image.add(state[-1])
            return
        if j == 1:
            for a0 in range(p):
                for b0 in range(p):
                    vec = [0] * (d + 1)
                    vec[0] = a0
                    if d >= 1:
                        vec[1] = b0
                    rec(state + (tuple(vec),), j + 1)
                    if d == 0:
                        break  # b0 is invisible at cap 0
            return
        span = combos(state, j)
        for value in sorted(products(span)):
            rec(state + (value,), j + 1)

    rec((), 1)
    return image


def realizable_vectors(
    s,
    d,
    p,
    oracle="parameter-sweep",
    enum_size=None,
    budget=None,
):
    """The set of realizable 0/1 truncated coefficient vectors.

    The circuit-enumeration oracle takes `enum_size` as its vertex-count
    bound (default s, counting all vertices) and draws constants from all of
    F_p.  Note the template sweep is well defined for any prime, including
    p <= d; only the hard-vector search needs p > d.
    """
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if d < 0:
        raise ValueError("d must be >= 0")
    if oracle == "parameter-sweep":
        image = _sweep_image(s, d, p, budget or DEFAULT_SWEEP_BUDGET)
        zero_one = frozenset(v for v in image if all(x in (0, 1) for x in v))
        return RealizableSet(s, d, p, zero_one, "parameter-sweep")
    if oracle == "circuit-enumeration":
        size = enum_size if enum_size is not None else s
        found = set()
        for circuit in enumerate_circuits(
            size, 1, range(p), budget=budget or DEFAULT_ENUM_ORACLE_BUDGET
        ):
            poly = expand_circuit(circuit, cap=d, modulus=p)
            vec = tuple(poly.coefficient((i,)) for i in range(d + 1))
            if all(x in (0, 1) for x in vec):
                found.add(vec)
        return RealizableSet(s, d, p, frozenset(found), "circuit-enumeration")
    raise ValueError(f"unknown oracle {oracle!r}")


@dataclass(frozen=True)
class HardVectorSearch:
    s: int
    d: int
    p: int
    gamma: tuple | None  # lex-first hard vector, None when saturated
    saturated: bool
    systems_checked: int


def find_hard_vector(s, d, p, solve_budget=DEFAULT_SOLVE_BUDGET, sweep_budget=None):
    """Lexicographically first gamma whose hardness system is unsolvable
    over F_p, determined by building and brute-force solving each system.

    Requires p > d: identifying two degree-<=d polynomials from their values
    on 0..d needs d+1 distinct points mod p.  The answer is cross-checked
    against the parameter-sweep image, to which it provably must be equal.
    """
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    if p <= d:
        raise ValueError(f"need p > d for {d + 1} distinct interpolation points, got p={p}")
    sweep = _sweep_image(s, d, p, sweep_budget or DEFAULT_SWEEP_BUDGET)
    zero_one = {v for v in sweep if all(x in (0, 1) for x in v)}
    expected = lex_first_missing(zero_one, d)
    checked = 0
    for gamma in product((0, 1), repeat=d + 1):
        system = build_hardness_system(s, d, gamma)
        checked += 1
        if solve_bruteforce(system, p, budget=solve_budget) is None:
            if gamma != expected:
                raise RuntimeError(
                    f"solver found hard vector {gamma} but the sweep predicts "
                    f"{expected}; truncated evaluation paths disagree"
                )
            return HardVectorSearch(s, d, p, gamma, False, checked)
    if expected is not None:
        raise RuntimeError(
            f"solver saturated but the sweep predicts {expected} is unrealizable"
        )
    return HardVectorSearch(s, d, p, None, True, checked)


def hardness_certificate(s, d, p, gamma, enum_size=None, budget=None):
    """Exhaustively confirm that no enumerated circuit of bounded size over
    F_p computes the polynomial sum_i gamma_i x^i exactly.

    Returns (True, None) or (False, offending circuit).
    """
    target = SparsePoly(
        {(i,): g for i, g in enumerate(gamma) if g}, 1, modulus=p
    )
    size = enum_size if enum_size is not None else s
    for circuit in enumerate_circuits(
        size, 1, range(p), budget=budget or DEFAULT_ENUM_ORACLE_BUDGET
    ):
        if expand_circuit(circuit, modulus=p) == target:
            return False, circuit
    return True, None


def poscoef(circuit, i, budget=None):
    """Exact sign of the coefficient of x^i of a constant-free one-variable
    circuit: 1, 0, or -1.  Expansion is truncated at degree i, which cannot
    change coefficients at or below i."""
    if not is_constant_free(circuit):
        raise ValueError("poscoef requires a constant-free circuit")
    if circuit.num_vars > 1:
        raise ValueError("poscoef requires a one-variable circuit")
    if i < 0:
        raise ValueError("coefficient index must be >= 0")
    kwargs = {"budget": budget} if budget is not None else {}
    poly = expand_circuit(circuit, cap=i, **kwargs)
    if circuit.num_vars == 0:
        coeff = poly.coefficient(()) if i == 0 else 0
    else:
        coeff = poly.coefficient((i,))
    return (coeff > 0) - (coeff < 0)


@dataclass(frozen=True)
class SignConditionSearch:
    s: int
    cap: int  # highest inspected coefficient index
    bits: tuple | None  # lex-first unrealized sign condition
    saturated: bool
    realized: frozenset
    circuits_enumerated: int


def sign_condition_search(s, cap, budget=None):
    """Lex-first sign condition (b_0..b_cap, b_i = 1 iff the coefficient of
    x^i is strictly positive) realized by no constant-free circuit with at
    most s vertices.

    Circuits of larger formal degree still participate; only coefficients
    0..cap are inspected.  An empty circuit set (s=0) realizes nothing, so
    the answer is the all-zero condition.
    """
    realized = set()
    count = 0
    for circuit in enumerate_circuits(
        s, 1, (-1,), budget=budget or DEFAULT_ENUM_ORACLE_BUDGET
    ):
        count += 1
        poly = expand_circuit(circuit, cap=cap)
        bits = tuple(
            1 if poly.coefficient((i,)) > 0 else 0 for i in range(cap + 1)
        )
        realized.add(bits)
    bits = lex_first_missing(realized, cap)
    return SignConditionSearch(
        s=s,
        cap=cap,
        bits=bits,
        saturated=bits is None,
        realized=frozenset(realized),
        circuits_enumerated=count,
    )
