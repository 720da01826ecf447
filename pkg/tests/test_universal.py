import random

import pytest

from circuitbench.algebra import SparsePoly
from circuitbench.circuits import (
    bind_params,
    enumerate_circuits,
    evaluate,
    expand_circuit,
    formal_degree,
    parse_circuit,
)
from circuitbench.rings import IntegerRing, PrimeField
from circuitbench.universal import (
    build_universal,
    embed,
    interpolate_univariate,
    interpolated_coefficients,
    truncated_coefficient_map,
    truncated_coefficient_map_reference,
)


def test_parameter_count():
    for s in range(1, 13):
        assert build_universal(s).param_count() == s * (s + 1)


def test_level_one_evaluation():
    t = build_universal(1)
    assert evaluate(t.circuit, IntegerRing(), [1], [2, 3]) == 5


def test_level_two_symbolic_expansion():
    # (a2_0 + a2_1 (a1_0 + b1_0 x)) * (b2_0 + b2_1 (a1_0 + b1_0 x)),
    # expanded with the parameters as extra variables 2..7 after x
    t = build_universal(2)
    got = expand_circuit(t.circuit, params_as_vars=True)

    def var(i):
        return SparsePoly.variable(i, 7)

    x, a10, b10, a20, a21, b20, b21 = (var(i) for i in range(1, 8))
    u1 = a10 + b10 * x
    want = (a20 + a21 * u1) * (b20 + b21 * u1)
    assert got == want


def test_coefficient_map_level_one_is_identity():
    t = build_universal(1)
    for a0 in range(5):
        for b0 in range(5):
            vec = truncated_coefficient_map(t, 1, 5, [a0, b0])
            assert vec.entries == (a0, b0)


def test_coefficient_map_linear_has_no_quadratic_part():
    t = build_universal(1)
    rng = random.Random(67)
    for _ in range(50):
        params = [rng.randrange(11) for _ in range(2)]
        vec = truncated_coefficient_map(t, 2, 11, params)
        assert vec.entries[2] == 0


def test_coefficient_map_pinned_example():
    t = build_universal(2)
    vec = truncated_coefficient_map(t, 2, 5, [1] * 6)
    assert vec.entries == (4, 4, 1)


def test_coefficient_map_matches_ring_reference():
    rng = random.Random(71)
    for s in (1, 2, 3):
        t = build_universal(s)
        for _ in range(20):
            d = rng.randint(0, 8)
            p = rng.choice([5, 7, 101])
            params = [rng.randrange(p) for _ in range(t.param_count())]
            fast = truncated_coefficient_map(t, d, p, params)
            ref = truncated_coefficient_map_reference(t, d, p, params)
            assert fast.entries == ref.entries


def test_coefficient_map_matches_full_expansion():
    rng = random.Random(73)
    for s in (1, 2, 3):
        t = build_universal(s)
        for _ in range(10):
            d = rng.randint(0, 8)
            p = rng.choice([5, 7])
            params = [rng.randrange(p) for _ in range(t.param_count())]
            bound = bind_params(t.circuit, params)
            full = expand_circuit(bound, modulus=p)
            want = tuple(full.truncate(d).coefficient((i,)) for i in range(d + 1))
            assert truncated_coefficient_map(t, d, p, params).entries == want


def test_coefficient_degree_bound_symbolically():
    # the coefficient of x^i, viewed as a polynomial in the parameters,
    # stays within the (i+1) * 2^(2s) degree bound
    for s in (1, 2):
        t = build_universal(s)
        poly = expand_circuit(t.circuit, params_as_vars=True)
        per_i = {}
        for exps, _ in poly.monomials():
            i = exps[0]
            par_deg = sum(exps[1:])
            per_i[i] = max(per_i.get(i, 0), par_deg)
        for i, deg in per_i.items():
            assert deg <= t.coefficient_degree_bound(i)


def test_interpolated_coefficients_exact():
    assert interpolate_univariate((0, 1, 2), (1, 0, 1), 5) == (1, 3, 1)  # (x-1)^2
    d = 4
    for c in enumerate_circuits(5, 1, (-1, 0, 1, 2), max_gates=2):
        if formal_degree(c) > d:
            continue
        got = interpolated_coefficients(c, d, 101)
        full = expand_circuit(c, modulus=101)
        assert got == tuple(full.coefficient((i,)) for i in range(d + 1))


def test_interpolation_rejects_coincident_points():
    with pytest.raises(ValueError):
        interpolate_univariate((0, 5), (1, 2), 5)


def test_template_serialization_reparses():
    t = build_universal(3)
    again = parse_circuit(t.to_text())
    assert again == t.circuit


def test_embed_square():
    c = parse_circuit("nvars 1\ng1 = in 1\ng2 = mul g1 g1\nout g2\n")
    emb = embed(c, 101)
    assert emb.levels == 2
    t = emb.template
    assert emb.params[t.param_slot(1, 0, "a") - 1] == 0
    assert emb.params[t.param_slot(1, 0, "b") - 1] == 1
    assert emb.params[t.param_slot(2, 1, "a") - 1] == 1
    assert emb.params[t.param_slot(2, 1, "b") - 1] == 1


def test_embed_lone_constant_needs_two_levels():
    c = parse_circuit("nvars 1\ng1 = const 7\nout g1\n")
    emb = embed(c, 101)
    assert emb.levels == 2
    t = emb.template
    assert emb.params[t.param_slot(2, 0, "a") - 1] == 7
    assert emb.params[t.param_slot(2, 0, "b") - 1] == 1
    for r in range(5):
        assert evaluate(bind_params(t.circuit, emb.params), PrimeField(101), [r]) == 7


def test_embed_difference_of_squares():
    c = parse_circuit(
        "nvars 1\n"
        "g1 = in 1\ng2 = const 1\ng3 = add g1 g2\n"
        "g4 = const -1\ng5 = add g1 g4\ng6 = mul g3 g5\nout g6\n"
    )
    emb = embed(c, 101)
    bound = bind_params(emb.template.circuit, emb.params)
    target = parse_circuit(
        "nvars 1\ng1 = in 1\ng2 = mul g1 g1\ng3 = const -1\ng4 = add g2 g3\nout g4\n"
    )
    from circuitbench.pit import pit_equal

    assert pit_equal(bound, target, 101, trials=8).equal


def test_embed_identity_leaf():
    c = parse_circuit("nvars 1\ng1 = in 1\nout g1\n")
    emb = embed(c, 101)
    assert emb.levels == 1
    assert emb.params == (0, 1)


def test_embed_exhaustive_two_gates():
    p = 101
    field = PrimeField(p)
    rng = random.Random(79)
    for c in enumerate_circuits(5, 1, (-1, 0, 1, 2), max_gates=2):
        emb = embed(c, p)
        bound = bind_params(emb.template.circuit, emb.params)
        for _ in range(50):
            r = rng.randrange(p)
            assert evaluate(bound, field, [r]) == evaluate(c, field, [r])


def test_embed_over_the_integers():
    from circuitbench.rings import IntegerRing
    from circuitbench.universal import Embedding

    c = parse_circuit(
        "nvars 1\ng1 = in 1\ng2 = const 7\ng3 = add g1 g2\ng4 = mul g3 g3\nout g4\n"
    )
    emb = embed(c)  # no modulus: integer parameters, exact verification
    assert isinstance(emb, Embedding)
    bound = bind_params(emb.template.circuit, emb.params)
    for r in (-3, 0, 2, 10):
        assert evaluate(bound, IntegerRing(), [r]) == (r + 7) ** 2


def test_embed_rejects_multivariate():
    c = parse_circuit("nvars 2\ng1 = in 1\ng2 = in 2\ng3 = add g1 g2\nout g3\n")
    with pytest.raises(ValueError):
        embed(c, 101)


def test_embed_rejects_params():
    c = parse_circuit("nvars 1\nnparams 1\ng1 = param 1\nout g1\n")
    with pytest.raises(ValueError):
        embed(c, 101)
