import pytest

from ferrers.core import (
    Monomial,
    MonomialIdeal,
    Shape,
    Substitution,
    VariableContext,
    enumerate_shapes,
    generator_count_predicted,
    generators,
    minimize,
    specialize,
    validate_shape,
)
from ferrers.errors import (
    LengthMismatch,
    MalformedInput,
    MuOutOfRange,
    MuTooSmall,
    NotAPartition,
    WidthLessThanHeight,
)


def gens(ideal):
    return set(ideal.format())


def test_shape_basic():
    s = validate_shape((5, 4, 4), (1, 2, 3))
    assert (s.n, s.m) == (3, 5)
    t = validate_shape((1,), (0,))
    assert (t.n, t.m) == (1, 1)


@pytest.mark.parametrize(
    "lam, mu, err",
    [
        ((3, 3), (1, 0), MuOutOfRange),
        ((2, 3), (0, 0), NotAPartition),
        ((3, 0), (0, 0), NotAPartition),
        ((2, 2), (0, 2), MuOutOfRange),
        ((1, 1), (0, 0), WidthLessThanHeight),
        ((3, 3), (0,), LengthMismatch),
        ((), (), LengthMismatch),
    ],
)
def test_shape_rejects(lam, mu, err):
    with pytest.raises(err):
        validate_shape(lam, mu)


def test_shape_json_roundtrip_and_default_mu():
    s = Shape.from_json({"lambda": [4, 4, 4], "mu": [1, 2, 3]})
    assert Shape.from_json(s.to_json()) == s
    assert Shape.from_json({"lambda": [3, 2]}).mu == (0, 0)
    with pytest.raises(MalformedInput):
        Shape.from_json({"mu": [0]})


def test_diagram():
    assert validate_shape((4, 4, 4), (1, 2, 3)).diagram() == ".###\n..##\n...#"


def test_generators_of_shapes():
    assert gens(generators(validate_shape((5, 4, 4), (1, 2, 3)))) == {
        "x1*y2", "x1*y3", "x1*y4", "x1*y5", "x2*y3", "x2*y4", "x3*y4"
    }
    prism = generators(validate_shape((3, 3), (0, 0)))
    assert gens(prism) == {f"x{i}*y{j}" for i in (1, 2) for j in (1, 2, 3)}
    assert gens(generators(validate_shape((1,), (0,)))) == {"x1*y1"}


def test_monomial_parse_and_format():
    ctx = VariableContext.xy(2, 3)
    m = ctx.parse("x1*y3^2")
    assert m.exps == (1, 0, 0, 0, 2)
    assert ctx.format(m.exps) == "x1*y3^2"
    assert ctx.parse("1").degree == 0
    with pytest.raises(MalformedInput):
        ctx.parse("z1")
    with pytest.raises(MalformedInput):
        ctx.parse("x1+y1")


def test_monomial_arithmetic():
    a, b = Monomial((1, 0, 2)), Monomial((0, 1, 1))
    assert a.lcm(b).exps == (1, 1, 2)
    assert (a * b).exps == (1, 1, 3)
    assert b.divides(Monomial((0, 1, 2))) and not a.divides(b)


def test_minimize():
    ctx = VariableContext.x(2)
    assert gens(minimize(MonomialIdeal.from_strings(ctx, ["x1^2", "x1^2*x2"]))) == {"x1^2"}
    ctx3 = VariableContext.x(3)
    same = MonomialIdeal.from_strings(ctx3, ["x1*x2", "x1*x3"])
    assert minimize(same) == same


def test_specialize_bad_examples():
    I = generators(validate_shape((2, 2), (0, 0)))
    assert len(I) == 4
    assert gens(specialize(I)) == {"x1^2", "x1*x2", "x2^2"}

    ctx = VariableContext.xy(2, 3)
    J = MonomialIdeal.from_strings(ctx, ["x1*y1", "x1*y3", "x2*y1"])
    assert gens(specialize(J)) == {"x1^2", "x1*x3", "x1*x2"}
    flipped = Substitution((3, 2, 1))
    assert gens(specialize(J, flipped)) == {"x1*x3", "x1^2", "x2*x3"}


def test_specialize_requires_xy_context():
    with pytest.raises(MalformedInput):
        specialize(MonomialIdeal.from_strings(VariableContext.x(2), ["x1*x2"]))
    with pytest.raises(MalformedInput):
        specialize(generators(validate_shape((2, 2), (0, 0))), Substitution((1,)))


def test_generator_count_predicted():
    assert generator_count_predicted(validate_shape((5, 4, 4), (1, 2, 3))) == 7
    assert generator_count_predicted(validate_shape((4, 4), (1, 2))) == 5
    with pytest.raises(MuTooSmall):
        generator_count_predicted(validate_shape((2, 2), (0, 0)))


def test_predicted_count_matches_specialization_on_sweep():
    for shape in enumerate_shapes(4, 6, lifting=True):
        assert len(specialize(generators(shape))) == generator_count_predicted(shape)


def test_ideal_json_roundtrip():
    I = specialize(generators(validate_shape((4, 3), (1, 2))))
    assert MonomialIdeal.from_json(I.to_json()) == I
    with pytest.raises(MalformedInput):
        MonomialIdeal.from_json({"variables": ["x1"], "generators": [[-1]]})


def test_enumerate_shapes_counts():
    shapes = list(enumerate_shapes(4, 6, lifting=True))
    assert len(shapes) == 790
    assert len(set(shapes)) == len(shapes)
    assert sum(1 for _ in enumerate_shapes(4, 6)) == 1843
