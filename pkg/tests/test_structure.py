import random

import pytest

from tdmilp.linalg import Matrix
from tdmilp.structure import (CapExceededError, Graph, StructureError,
                              TdDecomposition, connected_components,
                              decomposition_for_matrix, dual_graph, primal_graph,
                              restrict_decomposition, td_compute, td_stats,
                              validate_td)
from oracles import treedepth_by_subset_dp


def path_graph(n):
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def complete_graph(n):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves):
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def random_graph(rng, n, p):
    return Graph(n, [(i, j) for i in range(n) for j in range(i + 1, n)
                     if rng.random() < p])


class TestGraphs:
    def test_primal_identity_is_edgeless(self):
        g = primal_graph(Matrix.identity(4))
        assert g.edges == frozenset()

    def test_primal_single_dense_row_is_complete(self):
        g = primal_graph(Matrix([[1, 1, 1, 1]]))
        assert g == complete_graph(4)

    def test_primal_bidiagonal_is_path(self):
        a = Matrix([[2 if i == j else (-1 if j == i + 1 else 0) for j in range(4)]
                    for i in range(4)])
        assert primal_graph(a) == path_graph(4)

    def test_dual_identity_is_edgeless(self):
        assert dual_graph(Matrix.identity(3)).edges == frozenset()

    def test_dual_single_column_is_complete(self):
        g = dual_graph(Matrix([[1], [1], [1]]))
        assert g == complete_graph(3)

    def test_dual_all_ones_row_single_vertex(self):
        g = dual_graph(Matrix([[1, 1, 1, 1, 1]]))
        assert g.vertex_count == 1 and not g.edges
        f = td_compute(g, "exact")
        assert td_stats(f).height == 1

    def test_dual_is_primal_of_transpose(self):
        rng = random.Random(2)
        for _ in range(10):
            a = Matrix([[rng.randint(-1, 1) for _ in range(4)] for _ in range(3)])
            assert dual_graph(a) == primal_graph(a.transpose())

    def test_dump_format(self):
        g = Graph(3, [(2, 1), (0, 2)])
        assert g.to_text() == "0 2\n1 2"

    def test_components(self):
        g = Graph(5, [(0, 1), (3, 4)])
        assert connected_components(g) == [[0, 1], [2], [3, 4]]


class TestTdCompute:
    def test_clique_needs_full_chain(self):
        f = td_compute(complete_graph(4), "exact")
        assert td_stats(f).height == 4
        assert validate_td(complete_graph(4), f)

    def test_star_rooted_at_center(self):
        g = star_graph(5)
        f = td_compute(g, "exact")
        assert td_stats(f).height == 2
        assert f.parent[0] is None  # center is the root

    def test_path7_height3(self):
        f = td_compute(path_graph(7), "exact")
        assert td_stats(f).height == 3  # ceil(log2(8))

    def test_errors(self):
        with pytest.raises(CapExceededError):
            td_compute(path_graph(20), "exact", exact_cap=16)
        with pytest.raises(StructureError):
            td_compute(Graph(2, []), "exact")  # disconnected

    def test_exact_matches_subset_dp(self):
        rng = random.Random(9)
        checked = 0
        while checked < 25:
            n = rng.randrange(2, 8)
            g = random_graph(rng, n, 0.45)
            if len(connected_components(g)) != 1:
                continue
            f = td_compute(g, "exact")
            assert validate_td(g, f)
            assert td_stats(f).height == treedepth_by_subset_dp(g)
            checked += 1

    def test_heuristic_valid_and_never_better_than_exact(self):
        rng = random.Random(21)
        checked = 0
        while checked < 25:
            n = rng.randrange(2, 10)
            g = random_graph(rng, n, 0.4)
            if len(connected_components(g)) != 1:
                continue
            fh = td_compute(g, "heuristic")
            fe = td_compute(g, "exact")
            assert validate_td(g, fh)
            assert td_stats(fe).height <= td_stats(fh).height
            checked += 1

    def test_exact_deterministic(self):
        g = random_graph(random.Random(33), 7, 0.5)
        if len(connected_components(g)) != 1:
            g = path_graph(7)
        assert td_compute(g, "exact") == td_compute(g, "exact")


class TestValidate:
    def test_single_path_always_valid(self):
        g = random_graph(random.Random(1), 5, 0.8)
        f = TdDecomposition([None, 0, 1, 2, 3])
        assert validate_td(g, f)

    def test_p3_star_rooted_at_middle(self):
        g = path_graph(3)
        f = TdDecomposition([1, None, 1])  # middle vertex as root
        assert validate_td(g, f)

    def test_k3_flat_star_invalid(self):
        f = TdDecomposition([None, 0, 0])
        assert not validate_td(complete_graph(3), f)

    def test_vertex_count_mismatch(self):
        from tdmilp.linalg import DimensionError
        with pytest.raises(DimensionError):
            validate_td(path_graph(3), TdDecomposition([None, 0]))


class TestTdStats:
    def test_path_of_five(self):
        f = TdDecomposition([None, 0, 1, 2, 3])
        st = td_stats(f)
        assert (st.height, st.topological_height, st.level_heights) == (5, 1, (5,))

    def test_star_three_leaves(self):
        f = TdDecomposition([None, 0, 0, 0])
        st = td_stats(f)
        assert (st.height, st.topological_height, st.level_heights) == (2, 2, (1, 1))

    def test_root_path_then_branch(self):
        # root - a - b - {two leaves}
        f = TdDecomposition([None, 0, 1, 2, 2])
        st = td_stats(f)
        assert (st.height, st.topological_height, st.level_heights) == (4, 2, (3, 1))

    def test_level_heights_sum_along_paths(self):
        rng = random.Random(17)
        for _ in range(20):
            n = rng.randrange(2, 9)
            g = random_graph(rng, n, 0.5)
            if len(connected_components(g)) != 1:
                continue
            f = td_compute(g, "exact")
            st = td_stats(f)
            assert st.topological_height <= st.height
            assert all(k >= 1 for k in st.level_heights)
            # walk each root-leaf path and re-count
            for leaf in range(n):
                if f.children(leaf):
                    continue
                path = [leaf]
                while f.parent[path[-1]] is not None:
                    path.append(f.parent[path[-1]])
                path.reverse()
                nondeg = [v for v in path if len(f.children(v)) != 1]
                ks = []
                prev = 0
                for v in nondeg:
                    idx = path.index(v) + 1
                    ks.append(idx - prev)  # k_1 counts the root, later k_i do not
                    prev = idx
                # segment counts must add up to the path length
                assert sum(ks) == len(path)


class TestRestrict:
    def test_restriction_stays_valid(self):
        rng = random.Random(8)
        for _ in range(20):
            n = rng.randrange(3, 9)
            g = random_graph(rng, n, 0.5)
            if len(connected_components(g)) != 1:
                continue
            f = td_compute(g, "exact")
            keep = sorted(rng.sample(range(n), rng.randrange(1, n)))
            sub = g.induced(keep)
            fr = restrict_decomposition(f, keep)
            assert validate_td(sub, fr)


def test_decomposition_for_matrix_handles_components():
    a = Matrix([[1, 1, 0, 0], [0, 0, 1, 1]])
    f = decomposition_for_matrix(a, "primal", "exact")
    assert len(f.roots) == 2
    assert validate_td(primal_graph(a), f)
