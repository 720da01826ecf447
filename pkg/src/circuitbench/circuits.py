"""Arithmetic-circuit IR: parsing, evaluation, metrics, and enumeration.

A circuit is an immutable straight-line program: a tuple of nodes in
topological order (every gate references strictly earlier nodes), one
designated output node, and declared counts of input variables and parameter
slots.  Leaves are variables x_j, integer constants, or parameter slots;
gates are binary + and *.
"""

from dataclasses import dataclass

from .algebra import DEFAULT_MONOMIAL_BUDGET
from .errors import BudgetError, ParseError
from .rings import IntegerRing, PrimeField, TruncatedPolyRing


@dataclass(frozen=True)
class InputVar:
    index: int  # 1-based


@dataclass(frozen=True)
class Const:
    value: int


@dataclass(frozen=True)
class Param:
    index: int  # 1-based


@dataclass(frozen=True)
class Add:
    left: int  # node position, 0-based
    right: int


@dataclass(frozen=True)
class Mul:
    left: int
    right: int


_GATES = (Add, Mul)


@dataclass(frozen=True)
class Circuit:
    """Immutable circuit.  Node positions are 0-based; the text format shows
    them as g1, g2, ... in the same order."""

    nodes: tuple
    output: int
    num_vars: int
    num_params: int = 0

    def __post_init__(self):
        if not self.nodes:
            raise ValueError("a circuit needs at least one node")
        if not 0 <= self.output < len(self.nodes):
            raise ValueError("output index out of range")
        for pos, node in enumerate(self.nodes):
            if isinstance(node, _GATES):
                if not (0 <= node.left < pos and 0 <= node.right < pos):
                    raise ValueError(f"node {pos} references a non-earlier node")
            elif isinstance(node, InputVar):
                if not 1 <= node.index <= self.num_vars:
                    raise ValueError(f"input index {node.index} outside 1..{self.num_vars}")
            elif isinstance(node, Param):
                if not 1 <= node.index <= self.num_params:
                    raise ValueError(f"param index {node.index} outside 1..{self.num_params}")
            elif not isinstance(node, Const):
                raise ValueError(f"unknown node type {node!r}")

    def size(self):
        """Total vertex count, leaves included."""
        return len(self.nodes)

    def gate_count(self):
        return sum(1 for n in self.nodes if isinstance(n, _GATES))

    def reachable(self):
        """Positions of nodes reachable from the output, ascending."""
        seen = set()
        stack = [self.output]
        while stack:
            i = stack.pop()
            if i in seen:
                continue
            seen.add(i)
            node = self.nodes[i]
            if isinstance(node, _GATES):
                stack.append(node.left)
                stack.append(node.right)
        return sorted(seen)


# ---------------------------------------------------------------------------
# Text format


def parse_circuit(text):
    """Parse the line-oriented circuit format.

    Layout: "nvars <k>", optional "nparams <k>", gate definitions
    "g<i> = in|param|const|add|mul ...", and a final "out g<i>".  '#' starts
    a comment; blank lines are ignored.  Gates must be named consecutively
    g1, g2, ... and may only reference earlier gates.
    """
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split("#", 1)[0].strip()
        if stripped:
            rows.append((lineno, stripped))
    if not rows:
        raise ParseError("empty circuit text")

    pos = 0
    lineno, line = rows[pos]
    head = line.split()
    if len(head) != 2 or head[0] != "nvars":
        raise ParseError("expected 'nvars <k>'", lineno)
    try:
        num_vars = int(head[1])
    except ValueError:
        raise ParseError("bad nvars count", lineno) from None
    if num_vars < 0:
        raise ParseError("nvars must be >= 0", lineno)
    pos += 1

    num_params = 0
    if pos < len(rows):
        lineno, line = rows[pos]
        head = line.split()
        if head[0] == "nparams":
            if len(head) != 2:
                raise ParseError("expected 'nparams <k>'", lineno)
            try:
                num_params = int(head[1])
            except ValueError:
                raise ParseError("bad nparams count", lineno) from None
            if num_params < 0:
                raise ParseError("nparams must be >= 0", lineno)
            pos += 1

    def gate_ref(token, lineno, defined):
        if not token.startswith("g"):
            raise ParseError(f"expected a gate name, got {token!r}", lineno)
        try:
            idx = int(token[1:])
        except ValueError:
            raise ParseError(f"bad gate name {token!r}", lineno) from None
        if idx < 1:
            raise ParseError(f"bad gate name {token!r}", lineno)
        if idx > defined:
            raise ParseError(f"forward reference to {token}", lineno)
        return idx - 1

    nodes = []
    output = None
    for lineno, line in rows[pos:]:
        toks = line.split()
        if toks[0] == "out":
            if len(toks) != 2:
                raise ParseError("expected 'out g<i>'", lineno)
            output = gate_ref(toks[1], lineno, len(nodes))
            if (lineno, line) != rows[-1]:
                raise ParseError("'out' must be the final line", lineno)
            break
        if len(toks) < 3 or toks[1] != "=":
            raise ParseError("expected 'g<i> = <kind> ...'", lineno)
        name = toks[0]
        if not name.startswith("g"):
            raise ParseError(f"expected a gate name, got {name!r}", lineno)
        try:
            idx = int(name[1:])
        except ValueError:
            raise ParseError(f"bad gate name {name!r}", lineno) from None
        if 1 <= idx <= len(nodes):
            raise ParseError(f"duplicate gate name {name}", lineno)
        if idx != len(nodes) + 1:
            raise ParseError(f"gate names must be consecutive; expected g{len(nodes) + 1}", lineno)
        kind, args = toks[2], toks[3:]
        if kind == "in":
            if len(args) != 1:
                raise ParseError("expected 'in <j>'", lineno)
            j = int(args[0])
            if not 1 <= j <= num_vars:
                raise ParseError(f"input index {j} outside 1..{num_vars}", lineno)
            nodes.append(InputVar(j))
        elif kind == "param":
            if len(args) != 1:
                raise ParseError("expected 'param <j>'", lineno)
            j = int(args[0])
            if not 1 <= j <= num_params:
                raise ParseError(f"param index {j} outside 1..{num_params}", lineno)
            nodes.append(Param(j))
        elif kind == "const":
            if len(args) != 1:
                raise ParseError("expected 'const <signed decimal>'", lineno)
            try:
                nodes.append(Const(int(args[0])))
            except ValueError:
                raise ParseError(f"bad constant {args[0]!r}", lineno) from None
        elif kind in ("add", "mul"):
            if len(args) != 2:
                raise ParseError(f"expected '{kind} g<a> g<b>'", lineno)
            a = gate_ref(args[0], lineno, len(nodes))
            b = gate_ref(args[1], lineno, len(nodes))
            nodes.append(Add(a, b) if kind == "add" else Mul(a, b))
        else:
            raise ParseError(f"unknown node kind {kind!r}", lineno)
    else:
        raise ParseError("missing output line", rows[-1][0])

    return Circuit(tuple(nodes), output, num_vars, num_params)


def serialize_circuit(circuit):
    """Inverse of parse_circuit, emitting nodes in index order."""
    lines = [f"nvars {circuit.num_vars}"]
    if circuit.num_params:
        lines.append(f"nparams {circuit.num_params}")
    for pos, node in enumerate(circuit.nodes, start=1):
        if isinstance(node, InputVar):
            lines.append(f"g{pos} = in {node.index}")
        elif isinstance(node, Param):
            lines.append(f"g{pos} = param {node.index}")
        elif isinstance(node, Const):
            lines.append(f"g{pos} = const {node.value}")
        elif isinstance(node, Add):
            lines.append(f"g{pos} = add g{node.left + 1} g{node.right + 1}")
        else:
            lines.append(f"g{pos} = mul g{node.left + 1} g{node.right + 1}")
    lines.append(f"out g{circuit.output + 1}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Evaluation


def evaluate(circuit, ring, inputs=(), params=()):
    """Evaluate under the usual recursive semantics.

    `inputs` and `params` are sequences of ring elements (or ints for the
    scalar rings) covering all declared variables and parameter slots.
    """
    if len(inputs) != circuit.num_vars:
        raise ValueError(f"expected {circuit.num_vars} input values, got {len(inputs)}")
    if len(params) != circuit.num_params:
        raise ValueError(f"expected {circuit.num_params} param values, got {len(params)}")
    coerce = isinstance(ring, (IntegerRing, PrimeField))
    values = []
    for node in circuit.nodes:
        if isinstance(node, Add):
            values.append(ring.add(values[node.left], values[node.right]))
        elif isinstance(node, Mul):
            values.append(ring.mul(values[node.left], values[node.right]))
        elif isinstance(node, InputVar):
            v = inputs[node.index - 1]
            values.append(ring.from_int(v) if coerce else v)
        elif isinstance(node, Param):
            v = params[node.index - 1]
            values.append(ring.from_int(v) if coerce else v)
        else:
            values.append(ring.from_int(node.value))
    return values[circuit.output]


_OP_ADD, _OP_MUL, _OP_IN, _OP_PARAM, _OP_CONST = range(5)


def compile_instructions(circuit):
    """Flatten into (op, a, b) triples for fast repeated evaluation."""
    prog = []
    for node in circuit.nodes:
        if isinstance(node, Add):
            prog.append((_OP_ADD, node.left, node.right))
        elif isinstance(node, Mul):
            prog.append((_OP_MUL, node.left, node.right))
        elif isinstance(node, InputVar):
            prog.append((_OP_IN, node.index - 1, 0))
        elif isinstance(node, Param):
            prog.append((_OP_PARAM, node.index - 1, 0))
        else:
            prog.append((_OP_CONST, node.value, 0))
    return prog


def compile_mod_evaluator(circuit, p):
    """A closure computing the circuit mod p on (inputs, params) tuples."""
    prog = compile_instructions(circuit)
    out = circuit.output

    def run(inputs=(), params=()):
        values = []
        append = values.append
        for op, a, b in prog:
            if op == _OP_ADD:
                append((values[a] + values[b]) % p)
            elif op == _OP_MUL:
                append(values[a] * values[b] % p)
            elif op == _OP_IN:
                append(inputs[a] % p)
            elif op == _OP_PARAM:
                append(params[a] % p)
            else:
                append(a % p)
        return values[out]

    return run


def expand_circuit(
    circuit,
    cap=None,
    modulus=None,
    budget=DEFAULT_MONOMIAL_BUDGET,
    params_as_vars=False,
):
    """Exact symbolic expansion into a SparsePoly.

    With `params_as_vars`, parameter slots become extra variables appended
    after the declared inputs.  `cap` truncates total degree after every
    gate, which is exact for the kept part.
    """
    extra = circuit.num_params if params_as_vars else 0
    if circuit.num_params and not params_as_vars:
        raise ValueError("circuit has parameter slots; bind them or set params_as_vars")
    var_count = circuit.num_vars + extra
    base = IntegerRing() if modulus is None else PrimeField(modulus)
    ring = TruncatedPolyRing(base, var_count, cap, budget=budget)
    inputs = [ring.gen(i) for i in range(1, circuit.num_vars + 1)]
    params = [ring.gen(circuit.num_vars + i) for i in range(1, extra + 1)]
    return evaluate(circuit, ring, inputs, params)


def bind_params(circuit, values):
    """Replace every parameter slot with an integer constant."""
    if len(values) != circuit.num_params:
        raise ValueError(f"expected {circuit.num_params} parameter values")
    nodes = tuple(
        Const(int(values[n.index - 1])) if isinstance(n, Param) else n for n in circuit.nodes
    )
    return Circuit(nodes, circuit.output, circuit.num_vars, 0)


def simplify_constants(circuit):
    """Fold constant subexpressions and drop unreachable nodes.

    Rewrites 0+f -> f, 0*f -> 0, 1*f -> f and evaluates gates whose children
    are both constants.  The computed polynomial is unchanged; the formal
    degree can only drop.
    """
    # value per old position: ("const", v) or ("node", new_index)
    nodes = []
    memo = {}

    def intern(node):
        if node in memo:
            return memo[node]
        nodes.append(node)
        memo[node] = len(nodes) - 1
        return memo[node]

    desc = []
    for node in circuit.nodes:
        if isinstance(node, Const):
            desc.append(("const", node.value))
        elif isinstance(node, (InputVar, Param)):
            desc.append(("node", intern(node)))
        else:
            lk, lv = desc[node.left]
            rk, rv = desc[node.right]
            is_add = isinstance(node, Add)
            if lk == "const" and rk == "const":
                desc.append(("const", lv + rv if is_add else lv * rv))
            elif is_add and lk == "const" and lv == 0:
                desc.append(("node", rv))
            elif is_add and rk == "const" and rv == 0:
                desc.append(("node", lv))
            elif not is_add and (lk == "const" and lv == 0 or rk == "const" and rv == 0):
                desc.append(("const", 0))
            elif not is_add and lk == "const" and lv == 1:
                desc.append(("node", rv))
            elif not is_add and rk == "const" and rv == 1:
                desc.append(("node", lv))
            else:
                a = lv if lk == "node" else intern(Const(lv))
                b = rv if rk == "node" else intern(Const(rv))
                if a > b:
                    a, b = b, a
                new = Add(a, b) if is_add else Mul(a, b)
                desc.append(("node", intern(new)))

    kind, val = desc[circuit.output]
    if kind == "const":
        nodes = [Const(val)]
        out = 0
    else:
        out = val
        nodes = nodes[: out + 1]
    # drop nodes not reachable from the output
    keep = Circuit(tuple(nodes), out, circuit.num_vars, circuit.num_params)
    reach = keep.reachable()
    remap = {old: new for new, old in enumerate(reach)}
    packed = []
    for old in reach:
        node = keep.nodes[old]
        if isinstance(node, _GATES):
            cls = Add if isinstance(node, Add) else Mul
            packed.append(cls(remap[node.left], remap[node.right]))
        else:
            packed.append(node)
    return Circuit(tuple(packed), remap[out], circuit.num_vars, circuit.num_params)


class CircuitBuilder:
    """Incremental hash-consing constructor for circuits.

    Structurally identical nodes are emitted once, so repeated constants and
    shared subterms stay shared.  Methods return node positions usable as
    gate operands.
    """

    def __init__(self, num_vars=0, num_params=0):
        self.num_vars = num_vars
        self.num_params = num_params
        self._nodes = []
        self._memo = {}

    def _emit(self, node):
        idx = self._memo.get(node)
        if idx is None:
            self._nodes.append(node)
            idx = len(self._nodes) - 1
            self._memo[node] = idx
        return idx

    def input(self, index):
        return self._emit(InputVar(index))

    def const(self, value):
        return self._emit(Const(int(value)))

    def param(self, index):
        return self._emit(Param(index))

    def add(self, a, b):
        return self._emit(Add(min(a, b), max(a, b)))

    def mul(self, a, b):
        return self._emit(Mul(min(a, b), max(a, b)))

    def inline(self, circuit, input_map=None, param_map=None):
        """Copy another circuit's reachable nodes in, returning its output
        position.  `input_map` sends variable indices to node positions of
        this builder (e.g. constants); `param_map` renumbers parameter slots.
        """
        placed = {}
        for pos in circuit.reachable():
            node = circuit.nodes[pos]
            if isinstance(node, InputVar):
                if input_map is not None and node.index in input_map:
                    placed[pos] = input_map[node.index]
                else:
                    placed[pos] = self.input(node.index)
            elif isinstance(node, Param):
                idx = param_map[node.index] if param_map else node.index
                placed[pos] = self.param(idx)
            elif isinstance(node, Const):
                placed[pos] = self.const(node.value)
            elif isinstance(node, Add):
                placed[pos] = self.add(placed[node.left], placed[node.right])
            else:
                placed[pos] = self.mul(placed[node.left], placed[node.right])
        return placed[circuit.output]

    def finish(self, output):
        return Circuit(tuple(self._nodes), output, self.num_vars, self.num_params)


# ---------------------------------------------------------------------------
# Structural metrics


def formal_degree(circuit):
    """Syntactic degree: 1 at every leaf, max at +, sum at *."""
    deg = []
    for node in circuit.nodes:
        if isinstance(node, Add):
            deg.append(max(deg[node.left], deg[node.right]))
        elif isinstance(node, Mul):
            deg.append(deg[node.left] + deg[node.right])
        else:
            deg.append(1)
    return deg[circuit.output]


def is_constant_free(circuit):
    """True iff the only constant leaf value is -1 and no parameter appears."""
    for node in circuit.nodes:
        if isinstance(node, Param):
            return False
        if isinstance(node, Const) and node.value != -1:
            return False
    return True


@dataclass(frozen=True)
class CircuitMetrics:
    size: int  # all vertices, leaves included
    gate_count: int  # gates only; both counts exposed since conventions differ
    formal_degree: int
    max_const_abs: int  # max(2, largest |constant|)


def metrics(circuit):
    consts = [abs(n.value) for n in circuit.nodes if isinstance(n, Const)]
    return CircuitMetrics(
        size=circuit.size(),
        gate_count=circuit.gate_count(),
        formal_degree=formal_degree(circuit),
        max_const_abs=max(2, max(consts, default=0)),
    )


@dataclass(frozen=True)
class WeightReport:
    exact_weight: int
    bound: int  # M ** (size * formal_degree)
    bound_holds: bool
    size: int
    formal_degree: int
    max_const_abs: int


def weight_report(circuit, budget=DEFAULT_MONOMIAL_BUDGET):
    """Exact coefficient weight of the expanded polynomial, with the
    M^(s*d) bound it must satisfy.  Parameter slots are treated as extra
    variables for the expansion."""
    m = metrics(circuit)
    poly = expand_circuit(circuit, budget=budget, params_as_vars=True)
    exact = poly.weight()
    bound = m.max_const_abs ** (m.size * m.formal_degree)
    return WeightReport(
        exact_weight=exact,
        bound=bound,
        bound_holds=exact <= bound,
        size=m.size,
        formal_degree=m.formal_degree,
        max_const_abs=m.max_const_abs,
    )


# ---------------------------------------------------------------------------
# Generation


def random_circuit(rng, size, num_vars, const_lo=-5, const_hi=5, num_params=0, gate_bias=0.75):
    """A random valid circuit with exactly `size` nodes (output = last)."""
    if size < 1:
        raise ValueError("size must be >= 1")
    nodes = []
    for pos in range(size):
        want_gate = pos > 0 and (pos == size - 1 or rng.random() < gate_bias)
        if want_gate:
            a = rng.randrange(pos)
            b = rng.randrange(pos)
            nodes.append(Add(a, b) if rng.random() < 0.5 else Mul(a, b))
        else:
            kinds = ["const"]
            if num_vars:
                kinds.append("in")
            if num_params:
                kinds.append("param")
            kind = rng.choice(kinds)
            if kind == "in":
                nodes.append(InputVar(rng.randint(1, num_vars)))
            elif kind == "param":
                nodes.append(Param(rng.randint(1, num_params)))
            else:
                nodes.append(Const(rng.randint(const_lo, const_hi)))
    return Circuit(tuple(nodes), size - 1, num_vars, num_params)


DEFAULT_ENUM_BUDGET = 5_000_000


def _node_key(node, keys):
    if isinstance(node, InputVar):
        return (0, node.index)
    if isinstance(node, Const):
        return (1, node.value)
    if isinstance(node, Add):
        return (2, keys[node.left], keys[node.right])
    return (3, keys[node.left], keys[node.right])


def _keymin_order_ok(nodes, keys, leaf_count):
    """True iff the gate subsequence is the min-key topological order."""
    n = len(nodes)
    placed = [False] * n
    for i in range(leaf_count):
        placed[i] = True
    for pos in range(leaf_count, n):
        best = None
        for q in range(leaf_count, n):
            if placed[q]:
                continue
            g = nodes[q]
            if placed[g.left] and placed[g.right]:
                if best is None or keys[q] < keys[best]:
                    best = q
        if best != pos:
            return False
        placed[pos] = True
    return True


def enumerate_circuits(max_size, num_vars, constant_pool, max_gates=None, budget=None):
    """Yield every canonical circuit with at most `max_size` vertices.

    Leaves are drawn from the declared variables and the constant pool.  The
    canonical form has one representative per shared-subexpression DAG:

      * no two nodes are structurally identical (common subexpressions are
        shared);
      * children of the commutative gates are ordered left index <= right;
      * every node except the output feeds a later node (no dead code);
      * leaves precede gates and are sorted (variables by index, then
        constants by value), and gates appear in min-key topological order,
        which fixes a unique node ordering per DAG.

    `max_gates` additionally bounds the gate count.  The stream is
    deterministic; exceeding `budget` yielded circuits raises BudgetError.
    """
    if budget is None:
        budget = DEFAULT_ENUM_BUDGET
    pool = sorted({int(v) for v in constant_pool})
    leaf_candidates = [InputVar(i) for i in range(1, num_vars + 1)]
    leaf_candidates += [Const(v) for v in pool]

    nodes = []
    keys = []
    refcount = []
    present = set()
    yielded = 0

    def emit_ok():
        return all(refcount[i] > 0 for i in range(len(nodes) - 1))

    def rec(gates, leaf_count):
        nonlocal yielded
        if nodes and emit_ok() and _keymin_order_ok(nodes, keys, leaf_count):
            yielded += 1
            if yielded > budget:
                raise BudgetError(
                    f"circuit enumeration budget {budget} exceeded", reached=yielded
                )
            yield Circuit(tuple(nodes), len(nodes) - 1, num_vars, 0)
        if len(nodes) == max_size:
            return
        gate_room = max_size - len(nodes)
        if max_gates is not None:
            gate_room = min(gate_room, max_gates - gates)
        unused = sum(1 for c in refcount if c == 0)
        if gates == 0:
            for leaf in leaf_candidates:
                k = _node_key(leaf, keys)
                if keys and k <= keys[-1]:
                    continue
                # each future gate retires at most one unused node net
                room = max_size - len(nodes) - 1
                if max_gates is not None:
                    room = min(room, max_gates)
                if unused > room:
                    continue
                nodes.append(leaf)
                keys.append(k)
                refcount.append(0)
                present.add(leaf)
                yield from rec(0, leaf_count + 1)
                present.discard(leaf)
                refcount.pop()
                keys.pop()
                nodes.pop()
        if gate_room >= 1 and nodes:
            n = len(nodes)
            for cls in (Add, Mul):
                for a in range(n):
                    for b in range(a, n):
                        g = cls(a, b)
                        if g in present:
                            continue
                        delta = (refcount[a] == 0) + (b != a and refcount[b] == 0)
                        # each later gate can retire at most one unused node net
                        if (unused - delta + 1) - 1 > (gate_room - 1):
                            continue
                        nodes.append(g)
                        keys.append(_node_key(g, keys))
                        refcount.append(0)
                        refcount[a] += 1
                        refcount[b] += 1
                        present.add(g)
                        yield from rec(gates + 1, leaf_count)
                        present.discard(g)
                        refcount[b] -= 1
                        refcount[a] -= 1
                        refcount.pop()
                        keys.pop()
                        nodes.pop()

    if max_size >= 1:
        yield from rec(0, 0)
