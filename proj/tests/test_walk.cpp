#include "fixtures.hpp"

#include "hgx/walk.hpp"

#include <doctest.h>

#include <cmath>

using namespace hgx;

namespace {

/// Zhou's classical two-step walk, built straight from its own formula.
Matrix zhou_walk(const GeneralizedHypergraph& h) {
    const Index n = h.num_vertices();
    const Index m = h.num_edges();
    Vector delta = Vector::Zero(m), d = Vector::Zero(n);
    for (Index e = 0; e < m; ++e) {
        for (SpMatrix::InnerIterator it(h.q2(), e); it; ++it) delta[e] += 1.0;
    }
    for (Index e = 0; e < m; ++e) {
        for (SpMatrix::InnerIterator it(h.q1(), e); it; ++it) {
            d[it.row()] += h.edge_weights()[e];
        }
    }
    Matrix p = Matrix::Zero(n, n);
    for (Index e = 0; e < m; ++e) {
        for (SpMatrix::InnerIterator iu(h.q1(), e); iu; ++iu) {
            for (SpMatrix::InnerIterator iv(h.q2(), e); iv; ++iv) {
                p(iu.row(), iv.row()) += h.edge_weights()[e] / (d[iu.row()] * delta[e]);
            }
        }
    }
    return p;
}

}  // namespace

TEST_SUITE_BEGIN("walk");

TEST_CASE("t1 lazy walk is the half-half matrix") {
    const auto tm = transition_matrix(fx::t1());
    CHECK((tm.P - Matrix::Constant(2, 2, 0.5)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(tm.kind == WalkKind::lazy);
}

TEST_CASE("triangle walk is sigma-invariant with self-loop 1/2") {
    Matrix reference;
    for (double sigma : {-2.0, -1.0, 0.0, 1.0, 2.0}) {
        const Matrix p = transition_matrix(fx::tri(sigma)).P;
        for (Index u = 0; u < 3; ++u) {
            CHECK(p(u, u) == doctest::Approx(0.5).epsilon(1e-13));
            for (Index v = 0; v < 3; ++v) {
                if (u != v) CHECK(p(u, v) == doctest::Approx(0.25).epsilon(1e-13));
            }
        }
        if (reference.size() == 0) reference = p;
        CHECK((p - reference).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("rho has no effect when every hyperedge degree is equal") {
    // Columns of Q2 rescaled to a shared degree; different rho kinds, one P.
    std::vector<Incidence> base{{"a", "e1", 2, 1.2}, {"b", "e1", 2, 1.8},
                                {"b", "e2", 2, 0.6}, {"c", "e2", 2, 2.4},
                                {"a", "e3", 2, 1.5}, {"c", "e3", 2, 1.5}};
    Matrix reference;
    for (RhoSpec rho : {RhoSpec::power(-2.0), RhoSpec::power(1.0),
                        RhoSpec::of(RhoKind::sigmoid), RhoSpec::of(RhoKind::neg_exp),
                        RhoSpec::of(RhoKind::gaussian_pdf)}) {
        const Matrix p = transition_matrix(build_hypergraph(base, {}, rho)).P;
        if (reference.size() == 0) reference = p;
        CHECK((p - reference).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("non-lazy walks on t1 and the triangle") {
    const Matrix p1 = transition_matrix_nonlazy(fx::t1()).P;
    Matrix swap(2, 2);
    swap << 0, 1, 1, 0;
    CHECK((p1 - swap).cwiseAbs().maxCoeff() < 1e-15);

    const Matrix p3 = transition_matrix_nonlazy(fx::tri()).P;
    for (Index u = 0; u < 3; ++u) {
        CHECK(p3(u, u) == 0.0);
        for (Index v = 0; v < 3; ++v) {
            if (u != v) CHECK(p3(u, v) == doctest::Approx(0.5).epsilon(1e-14));
        }
    }
}

TEST_CASE("non-lazy diagonal is exactly zero, lazy self-loops are positive") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto h = fx::random_binary(seed);
        const Matrix lazy = transition_matrix(h).P;
        const Matrix nonlazy = transition_matrix_nonlazy(h).P;
        for (Index v = 0; v < h.num_vertices(); ++v) {
            CHECK(lazy(v, v) > 0.0);
            CHECK(nonlazy(v, v) == 0.0);
            CHECK(nonlazy.row(v).sum() == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("non-lazy walk rejects an edge whose Q2 mass sits on one vertex") {
    const auto h = build_hypergraph({{"a", "e", 1, 1}, {"a", "f", 1, 1}, {"b", "f", 1, 1}});
    CHECK_THROWS_AS(transition_matrix_nonlazy(h), ValidationError);
}

TEST_CASE("two-step oracle equals the matrix form") {
    CHECK(two_step_oracle(fx::t1(), "a", "b") == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(two_step_oracle(fx::tri(), "a", "a") == doctest::Approx(0.5).epsilon(1e-14));

    const auto r5 = fx::r5();
    const Matrix p = transition_matrix(r5).P;
    const Matrix oracle = two_step_oracle_matrix(r5);
    CHECK((p - oracle).cwiseAbs().maxCoeff() < 1e-14);
    for (Index u = 0; u < 5; ++u) CHECK(oracle.row(u).sum() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("oracle equivalence on every small random hypergraph") {
    fx::GeneratorOptions opts;
    opts.max_vertices = 8;
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
        const auto h = seed % 3 == 0   ? fx::random_condition1(seed, opts)
                       : seed % 3 == 1 ? fx::random_condition2(seed, opts)
                                       : fx::random_binary(seed, opts);
        const Matrix p = transition_matrix(h).P;
        const Matrix oracle = two_step_oracle_matrix(h);
        CHECK((p - oracle).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("zhou special case: rho = 1/x with binary weights") {
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        fx::GeneratorOptions opts;
        opts.unit_weights = seed % 2 == 0;
        auto pattern = fx::random_binary(seed, opts);
        // Rebuild with rho = x^{-1} regardless of the generator's pick.
        std::vector<Incidence> records;
        std::map<std::string, double> weights;
        for (Index e = 0; e < pattern.num_edges(); ++e) {
            weights[pattern.edge_ids()[e]] = pattern.edge_weights()[e];
            for (SpMatrix::InnerIterator it(pattern.q2(), e); it; ++it) {
                records.push_back({pattern.vertex_ids()[it.row()], pattern.edge_ids()[e], 1.0,
                                   1.0});
            }
        }
        const auto h = build_hypergraph(records, weights, RhoSpec::power(-1.0));
        CHECK((transition_matrix(h).P - zhou_walk(h)).cwiseAbs().maxCoeff() < 1e-13);
    }
}

TEST_CASE("closed-form stationary distribution on t1 and r5") {
    const auto sd = stationary_closed_form(fx::t1());
    CHECK(sd.pi[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sd.pi[1] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(sd.residual < 1e-14);

    const auto closed = stationary_closed_form(fx::r5());
    const auto power = stationary_distribution(fx::r5(), StationaryMode::power);
    CHECK((closed.pi - power.pi).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(power.method == StationaryMethod::power_iteration);
}

TEST_CASE("closed form refuses a hypergraph outside the conditions") {
    CHECK_THROWS_AS(stationary_closed_form(fx::cx4_hypergraph()), ValidationError);
}

TEST_CASE("cx4 power iteration recovers the known fixed point") {
    const auto sd = stationary_power_iteration(fx::cx4_matrix());
    CHECK((sd.pi - fx::cx4_pi()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(sd.residual < 1e-12);

    // The hypergraph from the same construction walks identically.
    const Matrix p = transition_matrix(fx::cx4_hypergraph()).P;
    CHECK((p - fx::cx4_matrix()).cwiseAbs().maxCoeff() < 1e-14);

    // The non-stochastic row-4 variant is kept for the record.
    CHECK(fx::cx4_row4_variant().sum() == doctest::Approx(7.0 / 6));
}

TEST_CASE("power iteration handles a periodic non-lazy chain") {
    const Matrix p = transition_matrix_nonlazy(fx::t1()).P;  // period two
    const auto sd = stationary_power_iteration(p);
    CHECK(sd.pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(sd.residual <= 1e-12);
}

TEST_CASE("reversibility: symmetric fixtures pass, cx4 fails at (1,2)") {
    const auto t1_tm = transition_matrix(fx::t1());
    CHECK(is_reversible(t1_tm.P, stationary_closed_form(fx::t1()).pi).reversible);

    const auto report = is_reversible(fx::cx4_matrix(), fx::cx4_pi());
    CHECK_FALSE(report.reversible);
    CHECK(report.u == 0);
    CHECK(report.v == 1);
    CHECK(report.flow_uv == doctest::Approx(1.0 / 17).epsilon(1e-12));
    CHECK(report.flow_vu == doctest::Approx(7.0 / 102).epsilon(1e-12));
    CHECK(report.worst_violation == doctest::Approx(1.0 / 102).epsilon(1e-12));
}

TEST_CASE("any Q1 = Q2 hypergraph is reversible") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const auto h = seed % 2 == 0 ? fx::random_binary(seed)
                                     : fx::random_condition2(seed, {}, /*k=*/1.0);
        const auto sd = stationary_closed_form(h);
        const auto report = is_reversible(transition_matrix(h).P, sd.pi, 1e-9);
        CHECK(report.reversible);
    }
}

TEST_CASE("is_reversible rejects a non-stationary pi") {
    Vector wrong(4);
    wrong << 0.25, 0.25, 0.25, 0.25;
    CHECK_THROWS_AS(is_reversible(fx::cx4_matrix(), wrong), ValidationError);
}

TEST_CASE("step distribution") {
    const Matrix p = transition_matrix(fx::t1()).P;
    const Vector one_step = step_distribution(p, 0, 1);
    CHECK(one_step[0] == doctest::Approx(0.5).epsilon(1e-15));

    const Vector zero_step = step_distribution(p, 1, 0);
    CHECK(zero_step[0] == 0.0);
    CHECK(zero_step[1] == 1.0);

    const Vector settled = step_distribution(fx::cx4_matrix(), 0, 50);
    CHECK((settled - fx::cx4_pi()).cwiseAbs().maxCoeff() < 1e-12);

    CHECK_THROWS_AS(step_distribution(p, 5, 1), ValidationError);
    CHECK_THROWS_AS(step_distribution(p, 0, -1), ValidationError);
}

TEST_CASE("isolated vertices demand the explicit flag") {
    const auto h = fx::t1_plus_isolated();
    CHECK_THROWS_AS(transition_matrix(h), ValidationError);
    const auto tm = transition_matrix(h, {.allow_isolated = true});
    CHECK(tm.isolated == std::vector<Index>{2});
    CHECK(tm.P.row(2).sum() == 0.0);
    CHECK_THROWS_AS(two_step_oracle(h, "c", "a"), ValidationError);
}

TEST_CASE("non-lazy stationary distribution is proportional to d_nl") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto h = fx::random_binary(seed);
        const auto p = degree_profile(h);
        const Matrix pnl = transition_matrix_nonlazy(h).P;
        Vector pi = p.d_nl / p.d_nl.sum();
        CHECK((pnl.transpose() * pi - pi).lpNorm<1>() < 1e-10);
        CHECK(is_reversible(pnl, pi, 1e-9).reversible);
    }
}

TEST_SUITE_END();
