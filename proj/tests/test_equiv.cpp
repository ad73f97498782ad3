#include "fixtures.hpp"

#include "hgx/equiv.hpp"

#include <doctest.h>

using namespace hgx;

TEST_SUITE_BEGIN("equiv");

TEST_CASE("condition report on the named fixtures") {
    const auto t1_report = check_equivalence_conditions(fx::t1());
    CHECK(t1_report.condition1);
    CHECK(t1_report.condition2.holds);
    CHECK(t1_report.condition2.k == doctest::Approx(1.0));
    CHECK(t1_report.general_equation_holds);

    const auto r5_report = check_equivalence_conditions(fx::r5());
    CHECK_FALSE(r5_report.condition1);
    CHECK(r5_report.condition2.holds);
    CHECK(r5_report.condition2.k == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(r5_report.general_equation_holds);

    const auto cx4_report = check_equivalence_conditions(fx::cx4_hypergraph());
    CHECK_FALSE(cx4_report.condition1);
    CHECK_FALSE(cx4_report.condition2.holds);
    CHECK_FALSE(cx4_report.general_equation_holds);
}

TEST_CASE("either condition implies the general equation") {
    for (std::uint64_t seed = 0; seed < 60; ++seed) {
        const auto h =
            seed % 2 == 0 ? fx::random_condition1(seed) : fx::random_condition2(seed);
        const auto report = check_equivalence_conditions(h);
        CHECK((report.condition1 || report.condition2.holds));
        CHECK(report.general_equation_holds);
    }
}

TEST_CASE("clique weights of t1 and the triangle") {
    const Matrix wc1 = clique_graph(fx::t1()).weights;
    CHECK((wc1 - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-15);

    const Matrix wc3 = clique_graph(fx::tri()).weights;
    for (Index u = 0; u < 3; ++u) {
        CHECK(wc3(u, u) == doctest::Approx(1.0).epsilon(1e-14));
        for (Index v = 0; v < 3; ++v) {
            if (u != v) CHECK(wc3(u, v) == doctest::Approx(0.5).epsilon(1e-14));
        }
    }

    // Row-normalizing either clique graph recovers the hypergraph walk.
    for (const auto& h : {fx::t1(), fx::tri()}) {
        const Matrix via_clique = clique_walk_matrix(clique_graph(h)).P;
        CHECK((via_clique - transition_matrix(h).P).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("equivalence theorem: clique walk reproduces the hypergraph walk") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto h =
            seed % 2 == 0 ? fx::random_condition1(seed) : fx::random_condition2(seed);
        const Matrix direct = transition_matrix(h).P;
        const Matrix via_clique = clique_walk_matrix(clique_graph(h)).P;
        CHECK((direct - via_clique).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("clique graph stays symmetric with positive co-occurrence support") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto h = fx::random_condition2(seed);
        const Matrix wc = clique_graph(h).weights;
        CHECK((wc - wc.transpose()).cwiseAbs().maxCoeff() == 0.0);
        CHECK(wc.minCoeff() >= 0.0);
        // Support matches co-occurrence in some hyperedge.
        Matrix cooccur = Matrix::Zero(h.num_vertices(), h.num_vertices());
        for (Index e = 0; e < h.num_edges(); ++e) {
            const auto members = h.edge_members(e);
            for (Index a : members) {
                for (Index b : members) cooccur(a, b) = 1.0;
            }
        }
        for (Index u = 0; u < h.num_vertices(); ++u) {
            for (Index v = 0; v < h.num_vertices(); ++v) {
                CHECK((wc(u, v) > 0.0) == (cooccur(u, v) > 0.0));
            }
        }
    }
}

TEST_CASE("condition collapse: replacing Q1 by Q2 leaves the walk unchanged") {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const auto h = fx::random_condition1(seed);
        const auto collapsed = fx::with_q1_equal_q2(h);
        CHECK((transition_matrix(h).P - transition_matrix(collapsed).P).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("distinct clique weight products give distinct clique graphs") {
    const auto base = fx::with_q1_equal_q2(fx::r5());
    std::vector<Incidence> records;
    std::map<std::string, double> weights;
    for (Index e = 0; e < base.num_edges(); ++e) {
        weights[base.edge_ids()[e]] = base.edge_weights()[e];
        for (SpMatrix::InnerIterator it(base.q2(), e); it; ++it) {
            double q = it.value();
            if (e == 0 && it.row() == 0) q *= 1.25;  // perturb one entry
            records.push_back({base.vertex_ids()[it.row()], base.edge_ids()[e], q, q});
        }
    }
    hgx::BuildOptions opts;
    opts.vertex_order = base.vertex_ids();
    const auto perturbed = build_hypergraph(records, weights, base.rho(), opts);
    const Matrix wc_base = clique_graph(base).weights;
    const Matrix wc_pert = clique_graph(perturbed).weights;
    CHECK((wc_base - wc_pert).cwiseAbs().maxCoeff() > 1e-6);
}

TEST_CASE("cx4 admits no undirected clique graph") {
    CHECK_THROWS_AS(clique_graph(fx::cx4_hypergraph()), ValidationError);
}

TEST_CASE("general equation can hold with neither explicit condition") {
    // Q1 = diag(a) Q2 walks like its condition-(2) counterpart, but the
    // hypergraph itself sits outside both conditions.
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto h = fx::random_general_equation_only(seed);
        const auto report = check_equivalence_conditions(h);
        CHECK_FALSE(report.condition1);
        CHECK_FALSE(report.condition2.holds);
        CHECK(report.general_equation_holds);

        const CliqueGraph g = clique_graph(h);  // takes the general route
        CHECK((g.weights - g.weights.transpose()).cwiseAbs().maxCoeff() == 0.0);
        const Matrix direct = transition_matrix(h).P;
        const Matrix via_clique = clique_walk_matrix(g).P;
        CHECK((direct - via_clique).cwiseAbs().maxCoeff() < 1e-12);
        // The general-route weights coincide with the Q2-product weights.
        CHECK((g.weights - clique_weight_matrix(h)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("pairwise verification samples above 200 vertices") {
    fx::GeneratorOptions opts;
    opts.min_vertices = 220;
    opts.max_vertices = 240;
    const auto good = fx::random_condition2(1, opts);
    const auto report = check_equivalence_conditions(good);
    CHECK(report.condition2.holds);
    CHECK(report.general_equation_holds);

    const auto outside = fx::random_general_equation_only(1, opts);
    const auto outside_report = check_equivalence_conditions(outside);
    CHECK_FALSE(outside_report.condition2.holds);
    CHECK(outside_report.general_equation_holds);
}

TEST_CASE("clique walk on a disconnected hypergraph is block-diagonal stochastic") {
    const auto g = clique_graph(fx::two_disjoint_edges());
    const auto tm = clique_walk_matrix(g);
    for (Index u = 0; u < 4; ++u) {
        CHECK(tm.P.row(u).sum() == doctest::Approx(1.0).epsilon(1e-12));
    }
    CHECK(tm.P(0, 2) == 0.0);
    CHECK(tm.P(3, 1) == 0.0);
}

TEST_CASE("clique walk needs the isolated flag for zero rows") {
    CliqueGraph g;
    g.vertex_ids = {"a", "b"};
    g.weights = Matrix::Zero(2, 2);
    g.weights(0, 0) = 1.0;
    CHECK_THROWS_AS(clique_walk_matrix(g), ValidationError);
    const auto tm = clique_walk_matrix(g, {.allow_isolated = true});
    CHECK(tm.isolated == std::vector<Index>{1});
}

TEST_SUITE_END();
