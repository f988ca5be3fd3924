"""Acceptance suite: one group of tests per criterion, each at its stated tolerance.

Run directly (``python tests/test_acceptance.py``) or through pytest; the
terminal summary prints one PASS/FAIL line per criterion.
"""
import json
import sys
import time
from itertools import combinations

import pytest

from ferrers.cli import main
from ferrers.complex import (
    Face,
    build_bipartite_complex,
    build_shape_complex,
    lcm_lattice_degrees,
    lifting_claim_failures,
    specialize_labels,
)
from ferrers.core import MonomialIdeal, Substitution, VariableContext, enumerate_shapes, generators, specialize, validate_shape
from ferrers.graphs import (
    Graph,
    analyze,
    check_condition,
    derive_shape,
    edge_ideal,
    graph_from_creation_sequence,
    graph_of_ideal,
    is_squarefree_strongly_stable_deg2,
    is_strongly_stable_deg2,
    is_threshold,
    threshold_creation_sequences,
    threshold_report,
    threshold_shape,
)
from ferrers.oracle import betti_oracle, height, invariants_oracle, taylor_betti
from ferrers.resolution import (
    Q,
    betti_closed_form_totals,
    betti_from_faces,
    cellular_chain_complex,
    check_minimal,
    verify_resolution,
)

DEFAULT_FIELDS = (2, 32003)
SWEEP = list(enumerate_shapes(4, 6, lifting=True))
_elapsed: dict[str, float] = {}


class timed:
    def __init__(self, key):
        self.key = key

    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        _elapsed[self.key] = _elapsed.get(self.key, 0.0) + time.perf_counter() - self.start
        return False


def ideal_strings(ideal):
    return set(ideal.format())


# ---------------------------------------------------------------- criterion 1


@pytest.mark.criterion(1, "prism resolution, lambda=(3,3), mu=(0,0)")
def test_criterion_1_prism():
    with timed("c1") as t:
        shape = validate_shape((3, 3), (0, 0))
        X = build_shape_complex(shape)
        assert X == build_bipartite_complex(2, 3)
        assert X.f_vector() == (6, 9, 5, 1)
        table = betti_from_faces(X)
        assert table.totals() == (1, 6, 9, 5, 1)
        assert betti_closed_form_totals(shape) == table.totals()
        for field in (2, 32003, Q):
            assert verify_resolution(X, field).defects == ()
    assert _elapsed["c1"] < 1.0, _elapsed["c1"]


# ---------------------------------------------------------------- criterion 2


@pytest.mark.criterion(2, "fixtures from the worked examples")
def test_criterion_2_diff_spec_generators():
    with timed("c2"):
        I = generators(validate_shape((5, 4, 4), (1, 2, 3)))
        J = generators(validate_shape((5, 5, 5), (1, 3, 4)))
        assert ideal_strings(I) == {"x1*y2", "x1*y3", "x1*y4", "x1*y5", "x2*y3", "x2*y4", "x3*y4"}
        assert ideal_strings(J) == {"x1*y2", "x1*y3", "x1*y4", "x1*y5", "x2*y4", "x2*y5", "x3*y5"}
        assert ideal_strings(specialize(I)) == {"x1*x2", "x1*x3", "x1*x4", "x1*x5", "x2*x3", "x2*x4", "x3*x4"}
        assert ideal_strings(specialize(J)) == {"x1*x2", "x1*x3", "x1*x4", "x1*x5", "x2*x4", "x2*x5", "x3*x5"}
        g, g2 = graph_of_ideal(specialize(I)), graph_of_ideal(specialize(J))
        assert [v for v in range(1, 6) if g.degree(v) == 2] == []
        assert len([v for v in range(1, 6) if g2.degree(v) == 2]) == 2


@pytest.mark.criterion(2, "fixtures from the worked examples")
def test_criterion_2_bad_specializations():
    with timed("c2"):
        four = generators(validate_shape((2, 2), (0, 0)))
        assert len(four) == 4 and len(specialize(four)) == 3

        ctx = VariableContext.xy(2, 3)
        I = MonomialIdeal.from_strings(ctx, ["x1*y1", "x1*y3", "x2*y1"])
        same = specialize(I)
        assert len(same) == len(I) == 3
        assert (height(I), height(same)) == (2, 1)
        flipped = specialize(I, Substitution((3, 2, 1)))
        assert ideal_strings(flipped) == {"x1*x3", "x1^2", "x2*x3"}
        for field in DEFAULT_FIELDS:
            assert betti_oracle(I, field).z_graded() == betti_oracle(flipped, field).z_graded()
            assert taylor_betti(I, field).z_graded() == taylor_betti(flipped, field).z_graded()


@pytest.mark.criterion(2, "fixtures from the worked examples")
def test_criterion_2_facets():
    with timed("c2"):
        X = build_shape_complex(validate_shape((4, 4, 4), (1, 2, 3)))
        facets = X.maximal_faces()
        triangles = [f for f in facets if f.dim == 2 and 1 in (len(f.row_set), len(f.col_set))]
        squares = [f for f in facets if len(f.row_set) == 2 and len(f.col_set) == 2]
        assert (len(facets), len(triangles), len(squares)) == (3, 2, 1)
        Y = build_shape_complex(validate_shape((5, 5, 5), (1, 3, 4)))
        assert Face.of([1, 2, 3], [5]) in Y.maximal_faces()
    assert _elapsed["c2"] < 5.0, _elapsed["c2"]


# ---------------------------------------------------------------- criterion 3


@pytest.mark.criterion(3, "exhaustive shape sweep n<=4, m<=6, mu_i>=i-1")
def test_criterion_3_sweep():
    assert len(SWEEP) == 790
    with timed("c347"):
        for shape in SWEEP:
            X = build_shape_complex(shape)
            Xbar = specialize_labels(X)
            I = generators(shape)
            Ibar = specialize(I)
            for Y in (X, Xbar):
                C = cellular_chain_complex(Y)
                assert C.composition_is_zero(), shape
                assert check_minimal(C), shape
            faces = betti_from_faces(X)
            faces_bar = betti_from_faces(Xbar)
            closed = betti_closed_form_totals(shape)
            assert faces.totals() == faces_bar.totals() == closed, shape
            assert faces.z_graded() == faces_bar.z_graded(), shape
            assert faces_bar.regularity() == 2 and faces_bar.is_linear(2), shape
            for field in DEFAULT_FIELDS:
                assert betti_oracle(I, field) == faces == taylor_betti(I, field), (shape, field)
                assert betti_oracle(Ibar, field) == faces_bar == taylor_betti(Ibar, field), (shape, field)


# ---------------------------------------------------------------- criterion 4


@pytest.mark.criterion(4, "acyclicity of every lcm-lattice restriction")
def test_criterion_4_acyclicity():
    with timed("c347"):
        checked = 0
        for shape in SWEEP:
            X = build_shape_complex(shape)
            for Y in (X, specialize_labels(X)):
                for field in DEFAULT_FIELDS:
                    report = verify_resolution(Y, field)
                    assert report.ok, (shape, field, report.defects[:1])
                    checked += report.degrees_checked
        assert checked > 0


@pytest.mark.criterion(4, "acyclicity of every lcm-lattice restriction")
def test_criterion_4_injected_defect(tmp_path, capsys):
    with timed("c347"):
        data = build_bipartite_complex(2, 3).to_json()
        square = next(f for f in data["faces"] if f["dim"] == 2)
        data["faces"] = [f for f in data["faces"] if f is not square and f["dim"] < 3]
        path = tmp_path / "broken.json"
        path.write_text(json.dumps(data))
        assert main(["verify", str(path)]) == 4
        assert "first counterexample" in capsys.readouterr().out


# ---------------------------------------------------------------- criterion 7


@pytest.mark.criterion(7, "degree lifting commutes with restriction")
def test_criterion_7_lifting_commutes():
    failures = {}
    lattice_points = 0
    with timed("c347"):
        for shape in SWEEP:
            Xbar = specialize_labels(build_shape_complex(shape))
            lattice_points += len(lcm_lattice_degrees(Xbar))
            bad = lifting_claim_failures(shape)
            if bad:
                failures[shape] = bad
    total = sum(len(v) for v in failures.values())
    first_shape = next(iter(failures), None)
    print(f"lifting: {total} of {lattice_points} lattice degrees fail, over {len(failures)} of {len(SWEEP)} shapes")
    assert not failures, (
        f"{total} of {lattice_points} (shape, degree) pairs fail over {len(failures)} shapes; "
        f"first: lambda={first_shape.lam}, mu={first_shape.mu}, degree={failures[first_shape][0]}"
    )


@pytest.mark.criterion(3, "exhaustive shape sweep n<=4, m<=6, mu_i>=i-1")
def test_criteria_3_4_7_time_budget():
    assert "c347" in _elapsed
    assert _elapsed["c347"] < 300.0, _elapsed["c347"]


# ---------------------------------------------------------------- criterion 5


THRESHOLD_SEQUENCES = list(threshold_creation_sequences(7))


@pytest.mark.criterion(5, "threshold graphs on at most 7 vertices")
def test_criterion_5_threshold_sweep():
    with timed("c5"):
        assert len(THRESHOLD_SEQUENCES) == 63
        for seq in THRESHOLD_SEQUENCES:
            G = graph_from_creation_sequence(seq)
            assert not G.isolated_vertices()
            cert = is_threshold(G)
            assert cert is not None and cert.verify(G), seq
            ts = threshold_shape(G)
            assert is_squarefree_strongly_stable_deg2(edge_ideal(G.relabel(ts.ordering))), seq
            oracle = invariants_oracle(edge_ideal(G))
            for report in (threshold_report(G), analyze(G)):
                assert (report.height, report.depth, report.reg) == (ts.n, 1, 2), seq
                assert report == oracle, seq
                assert report.betti == oracle.betti, seq
            assert ts.agrees_with_general, seq
    assert _elapsed["c5"] < 120.0, _elapsed["c5"]


@pytest.mark.criterion(5, "threshold graphs on at most 7 vertices")
def test_criterion_5_rejections():
    c4 = Graph(4, frozenset({(1, 2), (2, 3), (3, 4), (1, 4)}))
    p4 = Graph(4, frozenset({(1, 2), (2, 3), (3, 4)}))
    two_k2 = Graph(4, frozenset({(1, 2), (3, 4)}))
    from ferrers.errors import NotThreshold

    for G in (c4, p4, two_k2):
        assert is_threshold(G) is None
        with pytest.raises(NotThreshold):
            threshold_shape(G)


# ---------------------------------------------------------------- criterion 6


def strongly_stable_deg2(m):
    """All strongly stable degree-two ideals in m variables containing x1*xm."""
    pairs = [(a, b) for a in range(1, m + 1) for b in range(a, m + 1)]
    ctx = VariableContext.x(m)
    for k in range(1, len(pairs) + 1):
        for chosen in combinations(pairs, k):
            if (1, m) not in chosen:
                continue
            gens = []
            for a, b in chosen:
                e = [0] * m
                e[a - 1] += 1
                e[b - 1] += 1
                gens.append(tuple(e))
            I = MonomialIdeal.from_json({"variables": list(ctx.names), "generators": gens})
            if is_strongly_stable_deg2(I):
                yield I


@pytest.mark.criterion(6, "named graphs and strongly stable ideals")
def test_criterion_6_named_graphs():
    with timed("c6"):
        k4e = Graph(4, frozenset({(1, 2), (1, 3), (1, 4), (2, 3), (2, 4)}))
        d = derive_shape(k4e)
        assert (d.n, d.lam, d.mu) == (2, (4, 4), (1, 2))
        r = analyze(k4e)
        assert (r.betti_totals[1:], r.height, r.depth, r.cohen_macaulay) == ((5, 6, 2), 2, 1, False)
        assert r == invariants_oracle(edge_ideal(k4e))

        g_prime = Graph(4, frozenset({(1, 2), (1, 3), (1, 4), (2, 3)}))
        d = derive_shape(g_prime)
        assert (d.n, d.lam, d.mu) == (2, (4, 3), (1, 2))
        r = analyze(g_prime)
        assert (r.betti_totals[1:], r.cohen_macaulay) == ((4, 4, 1), False)
        assert r == invariants_oracle(edge_ideal(g_prime))


@pytest.mark.criterion(6, "named graphs and strongly stable ideals")
def test_criterion_6_strongly_stable_cm():
    with timed("c6"):
        for m in range(1, 6):
            cm = []
            for I in strongly_stable_deg2(m):
                G = graph_of_ideal(I)
                d = derive_shape(G)
                assert d.mu == tuple(range(d.n)) and check_condition(G, d)
                oracle = invariants_oracle(I)
                assert analyze(G) == oracle
                if oracle.cohen_macaulay:
                    cm.append(I)
            full = Graph.complete(m, loops=True)
            assert [graph_of_ideal(I) for I in cm] == [full]
            r = invariants_oracle(cm[0])
            assert (r.dim, r.depth) == (0, 0)
    assert _elapsed["c6"] < 120.0, _elapsed["c6"]


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-p", "no:cacheprovider"]))
