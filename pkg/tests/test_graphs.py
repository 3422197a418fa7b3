import math
from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from jamkit.graphs import (Graph, TreeSpec, cycle, format_edge_list,
                           hex_torus, is_bipartite, line, make_lattice,
                           make_tree, neighborhood, parse_edge_list,
                           positive_entropy, split_vertices, star, torus,
                           triangle_extension, truncation_radius,
                           twin_extension)


@st.composite
def small_graph(draw):
    n = draw(st.integers(min_value=2, max_value=8))
    pairs = list(combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [p for p, keep in zip(pairs, mask) if keep])


def adjacency_is_symmetric(g):
    return all(u in g.neighbors(v) for v, u in g.edges.tolist()) and all(
        v in g.neighbors(u) for u, v in g.edges.tolist())


class TestConstruction:
    def test_rejects_self_loop(self):
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 0)])

    def test_rejects_duplicate(self):
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 1), (1, 0)])

    def test_rejects_out_of_range(self):
        with pytest.raises(ValueError):
            Graph.from_edges(2, [(0, 2)])

    def test_neighbor_lists_sorted(self):
        g = Graph.from_edges(4, [(2, 0), (3, 0), (0, 1)])
        assert g.neighbors(0).tolist() == [1, 2, 3]

    def test_immutable(self):
        g = line(3)
        with pytest.raises(ValueError):
            g.edges[0, 0] = 5


class TestLattices:
    def test_torus_2d(self):
        g = torus(2, [4, 4])
        assert g.n_vertices == 16 and g.n_edges == 32
        assert set(g.degrees().tolist()) == {4}

    def test_line(self):
        g = line(5)
        assert g.n_edges == 4
        assert g.degree(0) == g.degree(4) == 1

    def test_hex_torus(self):
        # brick-wall count by hand: 16 horizontal + 8 vertical edges
        g = hex_torus(4, 4)
        assert g.n_vertices == 16 and g.n_edges == 24
        assert set(g.degrees().tolist()) == {3}
        assert is_bipartite(g) is not None

    def test_torus_rejects_small_side(self):
        with pytest.raises(ValueError):
            torus(2, [2, 4])

    def test_hex_rejects_odd(self):
        with pytest.raises(ValueError):
            hex_torus(5, 4)

    def test_make_lattice_dispatch(self):
        assert make_lattice("cycle", [6]).n_edges == 6
        assert make_lattice("torus", [3, 3, 3]).n_vertices == 27
        with pytest.raises(ValueError):
            make_lattice("kagome", [3])

    @pytest.mark.parametrize("g", [line(7), cycle(6), torus(2, [3, 5]),
                                   hex_torus(4, 6)])
    def test_generator_invariants(self, g):
        assert adjacency_is_symmetric(g)
        assert g.is_connected()


class TestTrees:
    def test_full_tree_count(self):
        # 1 + 3 + 6 vertices for branching 2, depth 2, root degree 3
        g, roots = make_tree(TreeSpec(2, 2, (3,)))
        assert g.n_vertices == 10 and g.n_edges == 9
        assert roots == (0,) and g.degree(0) == 3

    def test_depth_zero(self):
        g, _ = make_tree(TreeSpec(3, 0, (3,)))
        assert g.n_vertices == 1 and g.n_edges == 0

    def test_branching_one_is_path(self):
        g, roots = make_tree(TreeSpec(1, 4, (2,)))
        assert g.n_vertices == 9
        assert sorted(g.degrees().tolist()) == [1, 1] + [2] * 7

    def test_interior_degrees(self):
        g, _ = make_tree(TreeSpec(3, 3, (4,)))
        deg = g.degrees()
        interior = deg[deg > 1]
        assert set(interior.tolist()) == {4}
        assert g.n_edges == g.n_vertices - 1 and g.is_connected()

    def test_two_roots(self):
        g, roots = make_tree(TreeSpec(2, 3, (1, 1), root_separation=4))
        assert roots == (0, 4)
        assert g.degree(0) == g.degree(4) == 1
        assert g.n_edges == g.n_vertices - 1 and g.is_connected()

    def test_two_roots_reduced_degree(self):
        g, roots = make_tree(TreeSpec(3, 2, (3, 3), root_separation=2))
        assert g.degree(roots[0]) == g.degree(roots[1]) == 3

    def test_invalid_root_degree(self):
        with pytest.raises(ValueError):
            TreeSpec(2, 1, (5,))

    def test_depth_too_small_for_separation(self):
        with pytest.raises(ValueError):
            TreeSpec(2, 1, (1, 1), root_separation=5)

    def test_branching_one_double_reduced_is_isolated_vertex(self):
        g, roots = make_tree(TreeSpec(1, 3, (0,)))
        assert g.n_vertices == 1 and g.n_edges == 0 and roots == (0,)


class TestSplit:
    def test_path3_middle(self):
        g, w_star = split_vertices(line(3), [1])
        assert g.n_vertices == 4 and g.n_edges == 2
        assert sorted(g.degree(v) for v in w_star) == [1, 1]
        assert not g.is_connected()

    def test_degree_one_unchanged(self):
        g0 = line(3)
        g, w_star = split_vertices(g0, [0])
        assert g.n_vertices == g0.n_vertices and g.n_edges == g0.n_edges
        assert len(w_star) == 1 and g.degree(w_star[0]) == 1

    def test_counts_law(self):
        # |V'| = |V| - |W| + sum deg(w), |E'| = |E|, all W* degree 1
        base = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 0), (2, 4)])
        w = [0, 2]
        g, w_star = split_vertices(base, w)
        assert g.n_edges == base.n_edges
        assert g.n_vertices == base.n_vertices - len(w) + sum(base.degree(x) for x in w)
        assert len(w_star) == sum(base.degree(x) for x in w)
        assert all(g.degree(v) == 1 for v in w_star)

    def test_untouched_adjacency_preserved(self):
        base = cycle(5)
        g, _ = split_vertices(base, [0])
        # vertices 1..4 relabel to 0..3; the path 1-2-3-4 must survive
        assert g.has_edge(0, 1) and g.has_edge(1, 2) and g.has_edge(2, 3)

    def test_edge_order_preserved(self):
        base = cycle(4)
        g, _ = split_vertices(base, [1])
        assert g.n_edges == base.n_edges
        # splitting never reorders edges: endpoints outside W keep identity
        for i, (u, v) in enumerate(base.edges.tolist()):
            nu, nv = g.edges[i]
            assert {u, v} & {1} or {nu, nv} == {u - (u > 1), v - (v > 1)}

    def test_rejects_isolated(self):
        g = Graph.from_edges(3, [(0, 1)])
        with pytest.raises(ValueError):
            split_vertices(g, [2])

    def test_gadget_builders(self):
        tw = twin_extension(line(3))
        assert tw.n_vertices == 6 and tw.n_edges == 5
        tri = triangle_extension(line(2))
        assert tri.n_vertices == 6 and tri.n_edges == 7


class TestQueries:
    def test_neighborhood_radius_zero(self):
        assert neighborhood(line(5), 2, 0).tolist() == [2]

    def test_neighborhood_torus(self):
        assert len(neighborhood(torus(2, [5, 5]), 7, 1)) == 5

    def test_neighborhood_path_center(self):
        assert len(neighborhood(line(7), 3, 3)) == 7

    def test_bipartite_even_cycle(self):
        colors = is_bipartite(cycle(6))
        assert colors is not None
        assert colors.tolist() == [0, 1, 0, 1, 0, 1]

    def test_bipartite_triangle(self):
        assert is_bipartite(cycle(3)) is None

    def test_bipartite_torus_checkerboard(self):
        colors = is_bipartite(torus(2, [4, 4]))
        assert colors is not None
        for idx in range(16):
            assert colors[idx] == (idx // 4 + idx % 4) % 2

    @settings(deadline=None, max_examples=150)
    @given(small_graph())
    def test_bipartite_matches_odd_cycle_search(self, g):
        def has_odd_cycle():
            color = {}
            for src in range(g.n_vertices):
                if src in color:
                    continue
                color[src] = 0
                stack = [src]
                while stack:
                    u = stack.pop()
                    for w in g.neighbors(u).tolist():
                        if w not in color:
                            color[w] = 1 - color[u]
                            stack.append(w)
                        elif color[w] == color[u]:
                            return True
            return False

        assert (is_bipartite(g) is None) == has_odd_cycle()

    @settings(deadline=None, max_examples=100)
    @given(small_graph(), st.data())
    def test_split_preserves_edge_count(self, g, data):
        candidates = [v for v in range(g.n_vertices) if g.degree(v) > 0]
        if not candidates:
            return
        w = data.draw(st.lists(st.sampled_from(candidates), min_size=1,
                               max_size=len(candidates), unique=True))
        split, w_star = split_vertices(g, w)
        assert split.n_edges == g.n_edges
        assert all(split.degree(v) == 1 for v in w_star)


class TestPositiveEntropy:
    def test_triangle_absent(self):
        assert positive_entropy(cycle(3), 0) is None

    def test_star_center_absent(self):
        assert positive_entropy(star(3), 0) is None

    def test_cycle4_absent(self):
        # the opposite vertex has no distance-3 neighbor to dominate it
        assert positive_entropy(cycle(4), 0) is None

    def test_torus_certificate(self):
        g = torus(2, [8, 8])
        for v in (0, 27):
            b = positive_entropy(g, v)
            assert b is not None
            ring2 = set(neighborhood(g, v, 2).tolist()) - set(neighborhood(g, v, 1).tolist())
            ring3 = set(neighborhood(g, v, 3).tolist()) - set(neighborhood(g, v, 2).tolist())
            assert set(b) <= ring3
            for x, y in combinations(b, 2):
                assert not g.has_edge(x, y)
            for u in ring2:
                assert any(w in b for w in g.neighbors(u).tolist())

    def test_long_line_interior(self):
        g = line(9)
        b = positive_entropy(g, 4)
        assert b == [1, 7]


class TestTruncationRadius:
    def test_strict_inequality_boundary(self):
        # 1/2! equals 0.5 exactly, so strictness forces r = 3
        assert truncation_radius(1, 0.5) == 3

    def test_degree_four(self):
        r = truncation_radius(4, 1e-9)
        assert r == 24
        assert Fraction(4 ** 24, math.factorial(24)) < Fraction(1, 10 ** 9)
        assert Fraction(4 ** 23, math.factorial(23)) >= Fraction(1, 10 ** 9)

    def test_tolerance_near_one(self):
        assert truncation_radius(1, 0.999999) >= 1

    @pytest.mark.parametrize("d,tol", [(1, 0.1), (2, 1e-3), (3, 1e-6),
                                       (6, 1e-12), (10, 1e-9)])
    def test_bracketing_invariant(self, d, tol):
        r = truncation_radius(d, tol)
        tol_frac = Fraction(tol).limit_denominator(10 ** 15)
        assert Fraction(d ** r, math.factorial(r)) < tol_frac
        assert Fraction(d ** (r - 1), math.factorial(r - 1)) >= tol_frac

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            truncation_radius(0, 0.5)
        with pytest.raises(ValueError):
            truncation_radius(3, 1.5)


class TestEdgeListFormat:
    def test_roundtrip(self):
        g = cycle(5)
        g2 = parse_edge_list(format_edge_list(g))
        assert g2.n_vertices == g.n_vertices
        assert g2.edges.tolist() == g.edges.tolist()

    def test_comments_and_blanks(self):
        text = "# a cycle\n3 3\n\n0 1\n1 2  # last two\n2 0\n"
        g = parse_edge_list(text)
        assert g.n_vertices == 3 and g.n_edges == 3

    def test_bad_header(self):
        with pytest.raises(ValueError):
            parse_edge_list("3\n0 1\n")

    def test_wrong_count(self):
        with pytest.raises(ValueError):
            parse_edge_list("3 2\n0 1\n")
