"""Interactive verification machinery.

Three layers, each usable on its own:

  * F_2 hash-collision predicates and Goldwasser-Sipser style set-size
    estimation (is a set of encoded elements small or large?);
  * permanent verification by downward self-reducibility: a chain of
    circuits C_1..C_t is accepted when C_1 is identically the 1x1 entry and
    every C_k agrees with the first-row minor expansion of C_{k-1} at random
    matrices;
  * an Arthur-Merlin-Arthur protocol that evaluates one bit of a permanent
    claim end to end against an honest or a cheating prover.
"""

import math
import random
from dataclasses import dataclass

from .circuits import (
    Circuit,
    CircuitBuilder,
    InputVar,
    bind_params,
    compile_mod_evaluator,
    serialize_circuit,
)
from .pit import pit_equal
from .primes import is_prime, next_prime_at_least, sieve


# ---------------------------------------------------------------------------
# Hashing over F_2


@dataclass(frozen=True)
class HashMatrix:
    """A rows x cols bit matrix; rows are stored as cols-bit integers."""

    rows: tuple
    cols: int

    def apply(self, x):
        """Hash a cols-bit integer to a len(rows)-bit integer."""
        if x < 0 or x >> self.cols:
            raise ValueError(f"element {x} does not fit in {self.cols} bits")
        out = 0
        for row in self.rows:
            out = (out << 1) | (bin(row & x).count("1") & 1)
        return out


def random_hash_matrix(rng, rows, cols):
    return HashMatrix(tuple(rng.getrandbits(cols) for _ in range(rows)), cols)


def psi(matrices, elements):
    """True iff every hash collides element 0 with the corresponding later
    element, the two being distinct: AND_j (A_j e_0 = A_j e_j and e_0 != e_j)."""
    if len(elements) != len(matrices) + 1:
        raise ValueError("need one element per matrix plus the pivot")
    e0 = elements[0]
    for a, ej in zip(matrices, elements[1:]):
        if e0 == ej or a.apply(e0) != a.apply(ej):
            return False
    return True


def phi(matrices, elements):
    """Exists a pivot in the set colliding, under every matrix, with some
    distinct set element.  Evaluated exactly by bucketing the set under each
    matrix, never by scanning tuples."""
    elements = list(elements)
    collide_all = set(elements)
    for a in matrices:
        buckets = {}
        for e in elements:
            buckets.setdefault(a.apply(e), []).append(e)
        ok = set()
        for members in buckets.values():
            if len(members) >= 2:
                ok.update(members)
        collide_all &= ok
        if not collide_all:
            return False
    return True


def phi_reference(matrices, elements):
    """Quadratic-scan reference for phi, kept independent of the bucketing
    path so the two can be checked against each other."""
    elements = list(elements)
    for e0 in elements:
        if all(
            any(e0 != ej and a.apply(e0) == a.apply(ej) for ej in elements)
            for a in matrices
        ):
            return True
    return False


@dataclass(frozen=True)
class GsReport:
    set_size: int
    m: int
    cols: int
    trials: int
    seed: int
    phi_count: int
    rate: float
    verdict: str  # "small" | "large" | "inconclusive"


def gs_estimate(elements, m, trials, seed, cols=12, tolerance=0.05):
    """Empirical rate of the collision predicate over random hash samples.

    A set of size at most 2^(m-2) makes the predicate hold with probability
    at most 1/2, while size at least m 2^m forces it always; the verdict
    reflects which side the measured rate lands on.
    """
    elements = sorted(set(elements))
    for e in elements:
        if e < 0 or e >> cols:
            raise ValueError(f"element {e} does not fit in {cols} bits")
    rng = random.Random(seed)
    hits = 0
    for _ in range(trials):
        matrices = [random_hash_matrix(rng, m, cols) for _ in range(m)]
        if phi(matrices, elements):
            hits += 1
    rate = hits / trials if trials else 0.0
    if trials and hits == trials:
        verdict = "large"
    elif rate <= 0.5 + tolerance:
        verdict = "small"
    else:
        verdict = "inconclusive"
    return GsReport(len(elements), m, cols, trials, seed, hits, rate, verdict)


# ---------------------------------------------------------------------------
# Permanent chains


def _minor_rows(rows, col):
    return [r[:col] + r[col + 1 :] for r in rows[1:]]


def _expansion_nodes(builder, rows, sign):
    """Minor expansion along the first row; sign=-1 alternates (determinant)."""
    k = len(rows)
    if k == 1:
        return rows[0][0]
    acc = None
    for i in range(k):
        sub = _expansion_nodes(builder, _minor_rows(rows, i), sign)
        term = builder.mul(rows[0][i], sub)
        if sign < 0 and i % 2:
            term = builder.mul(builder.const(-1), term)
        acc = builder.add(acc, term) if acc is not None else term
    return acc


def _chain(t, sign):
    circuits = []
    for k in range(1, t + 1):
        builder = CircuitBuilder(num_vars=k * k)
        rows = [[builder.input(i * k + j + 1) for j in range(k)] for i in range(k)]
        circuits.append(builder.finish(_expansion_nodes(builder, rows, sign)))
    return circuits


def build_permanent_chain(t):
    """Minor-expansion circuits for the 1x1 up to the t x t permanent.
    Matrix entry (i, j) is variable (i-1)*k + j, 1-based."""
    if not 1 <= t <= 6:
        raise ValueError("chains supported for 1 <= t <= 6")
    return _chain(t, +1)


def build_determinant_chain(t):
    """Same shape computing determinants: the canonical wrong answer."""
    if not 1 <= t <= 6:
        raise ValueError("chains supported for 1 <= t <= 6")
    return _chain(t, -1)


def permanent_agreement_system(chain, grid_bound=2):
    """The system forcing a skeleton chain to compute permanents: one
    equation per circuit and grid point, C_k(e) - per(e) = 0 with e ranging
    over {0..grid_bound}^(k*k).  Unknowns are the chain's parameter slots.

    The primes at which this system is solvable form the pool the evaluation
    protocol's collision test is probing, so a density probe over it makes
    that set explicit; for a constant-free honest chain it is every prime,
    for the determinant chain it is exactly {2}.
    """
    from itertools import product as _product

    from .families import permanent
    from .systems import PolySystem

    num_params = {c.num_params for c in chain}
    if len(num_params) != 1:
        raise ValueError("chain circuits must share one parameter-slot count")
    (unknowns,) = num_params
    equations = []
    for k, skeleton in enumerate(chain, start=1):
        if skeleton.num_vars != k * k:
            raise ValueError(f"chain circuit {k} must have {k * k} variables")
        for point in _product(range(grid_bound + 1), repeat=k * k):
            matrix = [list(point[r * k : (r + 1) * k]) for r in range(k)]
            target = permanent(matrix)
            builder = CircuitBuilder(num_params=unknowns)
            subst = {j + 1: builder.const(v) for j, v in enumerate(point)}
            out = builder.inline(skeleton, input_map=subst)
            if target:
                out = builder.add(out, builder.const(-target))
            equations.append(builder.finish(out))
    return PolySystem(unknowns, tuple(equations), f"permanent-agreement(t={len(chain)})")


@dataclass(frozen=True)
class PermanentVerifyReport:
    accepted: bool
    reason: str
    p: int
    trials: int
    seed: int


def permanent_verify(chain, p, trials, seed):
    """Accept iff C_1 is identically the single matrix entry and every C_k
    matches the first-row minor expansion of C_{k-1} on `trials` random
    matrices over F_p.

    The base identity is decided by pit_equal; the inductive identities are
    polynomial, so an honest chain is accepted with probability 1, while a
    corruption of degree-D difference survives each trial with probability
    at most D/p.
    """
    if not chain:
        raise ValueError("empty chain")
    for k, c in enumerate(chain, start=1):
        if c.num_vars != k * k:
            raise ValueError(f"chain circuit {k} must have {k * k} variables")
        if c.num_params:
            raise ValueError("bind chain parameters before verification")
    if not is_prime(p):
        raise ValueError(f"modulus {p} is not prime")
    rng = random.Random(seed)
    base = Circuit((InputVar(1),), 0, 1, 0)
    verdict = pit_equal(chain[0], base, p, seed=rng.getrandbits(32))
    if not verdict.equal:
        return PermanentVerifyReport(False, "base circuit is not the 1x1 entry", p, trials, seed)
    runs = [compile_mod_evaluator(c, p) for c in chain]
    for k in range(2, len(chain) + 1):
        for trial in range(trials):
            flat = tuple(rng.randrange(p) for _ in range(k * k))
            rows = [list(flat[i * k : (i + 1) * k]) for i in range(k)]
            lhs = runs[k - 1](flat, ())
            rhs = 0
            for i in range(k):
                minor = _minor_rows(rows, i)
                minor_flat = tuple(v for row in minor for v in row)
                rhs = (rhs + rows[0][i] * runs[k - 2](minor_flat, ())) % p
            if lhs != rhs:
                return PermanentVerifyReport(
                    False,
                    f"self-reduction failed at size {k}, trial {trial}",
                    p,
                    trials,
                    seed,
                )
    return PermanentVerifyReport(True, "all identities held", p, trials, seed)


# ---------------------------------------------------------------------------
# The evaluation protocol


@dataclass(frozen=True)
class ProverMessage:
    chain: tuple  # skeleton circuits C_1..C_t, possibly with parameter slots
    small_primes: tuple  # p_0..p_m, hash-collision candidates
    small_constants: tuple  # per prime: a residue vector for the parameter slots
    big_prime: int
    big_constants: tuple

    def payload(self):
        def consts(vals):
            return f"{len(vals)}:" + ",".join(str(v) for v in vals)

        chain_txt = "|".join(
            serialize_circuit(c).rstrip("\n").replace("\n", ";") for c in self.chain
        )
        primes = ",".join(str(q) for q in self.small_primes)
        ctxt = "/".join(consts(v) for v in self.small_constants)
        return (
            f"chain={chain_txt} primes={primes} constants={ctxt} "
            f"big={self.big_prime}:{consts(self.big_constants)}"
        )


class HonestProver:
    """Sends the true minor-expansion chain and genuinely colliding primes."""

    mode = "honest"

    def message(self, t, n, max_value, matrices, cols):
        chain = tuple(build_permanent_chain(t))
        picks = find_collision_primes(matrices, cols)
        if picks is None:
            return None
        big = next_prime_at_least(max(2, math.factorial(n) * max(1, max_value) ** n))
        empty = tuple(() for _ in picks)
        return ProverMessage(chain, picks, empty, big, ())


class CheatingProver:
    """Same envelope, but the chain computes determinants."""

    def __init__(self, variant="determinant-skeleton"):
        self.variant = variant
        self.mode = f"cheating({variant})"

    def message(self, t, n, max_value, matrices, cols):
        chain = tuple(build_determinant_chain(t))
        picks = find_collision_primes(matrices, cols)
        if picks is None:
            return None
        big = next_prime_at_least(max(2, math.factorial(n) * max(1, max_value) ** n))
        empty = tuple(() for _ in picks)
        return ProverMessage(chain, picks, empty, big, ())


def find_collision_primes(matrices, cols):
    """Deterministically pick primes (p_0, .., p_m) below 2^cols satisfying
    the collision predicate, or None when no pivot collides everywhere."""
    pool = sieve((1 << cols) - 1)
    buckets = []
    for a in matrices:
        b = {}
        for q in pool:
            b.setdefault(a.apply(q), []).append(q)
        buckets.append(b)
    for p0 in pool:
        partners = []
        for a, b in zip(matrices, buckets):
            members = b[a.apply(p0)]
            mate = next((q for q in members if q != p0), None)
            if mate is None:
                break
            partners.append(mate)
        else:
            return (p0, *partners)
    return None


@dataclass(frozen=True)
class ProtocolTranscript:
    seed: int
    rounds: tuple  # (round, sender, payload)
    verdict: str  # "accept" | "reject"
    answer: int | None

    def to_text(self):
        lines = [f"round={r} sender={s} payload={p}" for r, s, p in self.rounds]
        answer = "none" if self.answer is None else str(self.answer)
        lines.append(f"verdict={self.verdict} answer={answer}")
        return "\n".join(lines) + "\n"

    def to_json_obj(self):
        return {
            "seed": self.seed,
            "rounds": [
                {"round": r, "sender": s, "payload": p} for r, s, p in self.rounds
            ],
            "verdict": self.verdict,
            "answer": self.answer,
        }


def split_input(n):
    """Sizes (|y|, |z|) with 0 < |y| <= |z| and |z| a power of two; the power
    is unique in [n/2, n-1]."""
    if n < 2:
        raise ValueError("need at least two input values")
    z = 1
    while 2 * z <= n - 1:
        z *= 2
    return n - z, z


def ama_simulate(
    x,
    i,
    b,
    prover,
    seed,
    k=1,
    m=4,
    cols=12,
    verify_trials=2,
):
    """Three-round evaluation protocol for bit i of the permanent of the
    matrix packed into the y part of x.

    Arthur splits x into (y, z); a non-square |y| short-circuits to
    "accept iff the claimed bit is 0".  Otherwise Arthur sends random hash
    matrices; the prover answers with a circuit chain, colliding primes with
    per-prime constants, and a large prime for the actual evaluation; Arthur
    checks the collision, primality, the size bound, and that the chain
    computes permanents modulo every supplied prime, then compares bit i of
    the evaluation.  Any failed check sends him to the same
    "accept iff b = 0" branch.  Identical seeds reproduce the transcript
    byte for byte.
    """
    x = [int(v) for v in x]
    n = len(x)
    if n < 2 or n > 10:
        raise ValueError("desk-scale protocol needs 2 <= n <= 10")
    if any(v < 0 for v in x):
        raise ValueError("inputs must be nonnegative integers")
    if b not in (0, 1):
        raise ValueError("claimed bit must be 0 or 1")
    if i < 0:
        raise ValueError("bit position must be >= 0")
    rng = random.Random(seed)
    rounds = []

    ylen, zlen = split_input(n)
    t = math.isqrt(ylen)
    square = t * t == ylen
    head = f"split=|y|:{ylen},|z|:{zlen} square={int(square)}"
    if not square:
        rounds.append((1, "A", head + " branch=non-square"))
        verdict = "accept" if b == 0 else "reject"
        return ProtocolTranscript(seed, tuple(rounds), verdict, None)

    matrices = [random_hash_matrix(rng, m, cols) for _ in range(m)]
    mats_txt = ",".join(
        ".".join(format(row, f"0{(cols + 3) // 4}x") for row in a.rows) for a in matrices
    )
    rounds.append((1, "A", f"{head} matrices={mats_txt}"))

    y = x[:ylen]
    max_value = max(x)
    msg = prover.message(t, n, max_value, matrices, cols)

    def fail(reason):
        rounds.append((3, "A", f"checks=failed reason={reason} branch=b-zero"))
        verdict = "accept" if b == 0 else "reject"
        return ProtocolTranscript(seed, tuple(rounds), verdict, None)

    if msg is None:
        rounds.append((2, "M", "message=none"))
        return fail("no prover message")
    rounds.append((2, "M", msg.payload()))

    chain = msg.chain
    if len(chain) != t or len(msg.small_primes) != m + 1:
        return fail("malformed message")
    if len(msg.small_constants) != m + 1:
        return fail("malformed constants")
    num_params = {c.num_params for c in chain}
    if len(num_params) != 1:
        return fail("inconsistent parameter counts")
    (params_count,) = num_params
    for c, kk in zip(chain, range(1, t + 1)):
        if c.num_vars != kk * kk:
            return fail("wrong chain arity")
        if c.size() > n ** (2 * k):
            return fail("skeleton too large")
    if any(len(v) != params_count for v in msg.small_constants):
        return fail("constant vector length mismatch")
    if len(msg.big_constants) != params_count:
        return fail("constant vector length mismatch")
    if any(q >> cols for q in msg.small_primes):
        return fail("prime does not fit the encoding")
    if not psi(matrices, list(msg.small_primes)):
        return fail("no hash collision")
    bound = math.factorial(n) * max_value**n
    if msg.big_prime < bound:
        return fail("evaluation prime too small")
    for q in (*msg.small_primes, msg.big_prime):
        if not is_prime(q):
            return fail(f"composite modulus {q}")

    checks = []
    for q, consts in zip(msg.small_primes, msg.small_constants):
        bound_chain = [bind_params(c, consts) for c in chain]
        try:
            report = permanent_verify(bound_chain, q, verify_trials, rng.getrandbits(32))
        except ValueError:
            # e.g. a base circuit whose formal degree voids the identity test
            return fail(f"chain not verifiable mod {q}")
        checks.append(f"mod{q}:{'ok' if report.accepted else 'fail'}")
        if not report.accepted:
            rounds.append((3, "A", f"checks={','.join(checks)}"))
            return fail(f"chain is not the permanent mod {q}")
    big_chain = [bind_params(c, msg.big_constants) for c in chain]
    try:
        report = permanent_verify(big_chain, msg.big_prime, verify_trials, rng.getrandbits(32))
    except ValueError:
        return fail(f"chain not verifiable mod {msg.big_prime}")
    checks.append(f"mod{msg.big_prime}:{'ok' if report.accepted else 'fail'}")
    if not report.accepted:
        rounds.append((3, "A", f"checks={','.join(checks)}"))
        return fail(f"chain is not the permanent mod {msg.big_prime}")

    run = compile_mod_evaluator(big_chain[-1], msg.big_prime)
    value = run(tuple(v % msg.big_prime for v in y), ())
    bit = value >> i & 1
    rounds.append(
        (3, "A", f"checks={','.join(checks)} value={value} bit{i}={bit}")
    )
    verdict = "accept" if bit == b else "reject"
    return ProtocolTranscript(seed, tuple(rounds), verdict, bit)
