// Shared fixtures and seeded generators used by the unit and acceptance
// suites. Everything here is deterministic for a fixed seed.
#pragma once

#include "hgx/edvw.hpp"
#include "hgx/hypergraph.hpp"
#include "hgx/models.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <string>
#include <vector>

namespace fx {

using hgx::GeneralizedHypergraph;
using hgx::Incidence;
using hgx::Index;
using hgx::Matrix;
using hgx::RhoSpec;
using hgx::SplitMix;
using hgx::Vector;

/// Two vertices joined by one unit edge; the smallest connected hypergraph.
inline GeneralizedHypergraph t1(double sigma = -1.0) {
    return hgx::build_hypergraph({{"a", "e", 1, 1}, {"b", "e", 1, 1}}, {},
                                 RhoSpec::power(sigma));
}

inline GeneralizedHypergraph t1_plus_isolated(double sigma = -1.0) {
    hgx::BuildOptions opts;
    opts.vertex_order = {"a", "b", "c"};
    return hgx::build_hypergraph({{"a", "e", 1, 1}, {"b", "e", 1, 1}}, {},
                                 RhoSpec::power(sigma), opts);
}

/// Triangle graph as a 2-uniform hypergraph.
inline GeneralizedHypergraph tri(double sigma = -1.0) {
    return hgx::build_hypergraph(
        {{"a", "ab", 1, 1}, {"b", "ab", 1, 1},
         {"b", "bc", 1, 1}, {"c", "bc", 1, 1},
         {"a", "ac", 1, 1}, {"c", "ac", 1, 1}},
        {}, RhoSpec::power(sigma));
}

/// Triangle plus one size-3 edge; breaks degree uniformity.
inline GeneralizedHypergraph tri_plus_triple(double sigma = -1.0) {
    return hgx::build_hypergraph(
        {{"a", "ab", 1, 1}, {"b", "ab", 1, 1},
         {"b", "bc", 1, 1}, {"c", "bc", 1, 1},
         {"a", "ac", 1, 1}, {"c", "ac", 1, 1},
         {"a", "abc", 1, 1}, {"b", "abc", 1, 1}, {"c", "abc", 1, 1}},
        {}, RhoSpec::power(sigma));
}

inline GeneralizedHypergraph two_disjoint_edges() {
    return hgx::build_hypergraph(
        {{"a", "e1", 1, 1}, {"b", "e1", 1, 1}, {"c", "e2", 1, 1}, {"d", "e2", 1, 1}});
}

/// Seeded 5-vertex fixture: hyperedges of sizes {3,3,4}, Q2 ~ U(0.5,1.5),
/// Q1 = 2 Q2 (condition (2) with k = 2), w = 1, rho = x^1.
inline GeneralizedHypergraph r5() {
    SplitMix rng(505);
    const std::vector<std::vector<std::string>> edges = {
        {"v1", "v2", "v3"}, {"v3", "v4", "v5"}, {"v1", "v2", "v4", "v5"}};
    std::vector<Incidence> records;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        for (const auto& v : edges[e]) {
            const double q2 = rng.uniform(0.5, 1.5);
            records.push_back({v, "e" + std::to_string(e + 1), 2.0 * q2, q2});
        }
    }
    return hgx::build_hypergraph(records, {}, RhoSpec::power(1.0));
}

/// The 4-state irreversible chain: two hyperedges {x1,x2,x3} and
/// {x2,x3,x4}, Q1 = H, edge-dependent Q2 = (1,1,1) and (2,1,1), rho = 1/x.
/// Its walk matches cx4_matrix() and admits no undirected equivalent.
inline GeneralizedHypergraph cx4_hypergraph() {
    return hgx::build_hypergraph(
        {{"x1", "e1", 1, 1}, {"x2", "e1", 1, 1}, {"x3", "e1", 1, 1},
         {"x2", "e2", 1, 2}, {"x3", "e2", 1, 1}, {"x4", "e2", 1, 1}},
        {}, RhoSpec::power(-1.0));
}

/// CX4 transition matrix with the stochastic fourth row [0,1/2,1/4,1/4],
/// the unique row consistent with cx4_hypergraph() and with pi P = pi for
/// cx4_pi(). A non-stochastic variant of the row circulates; see
/// cx4_row4_variant.
inline Matrix cx4_matrix() {
    Matrix p(4, 4);
    p << 1.0 / 3, 1.0 / 3, 1.0 / 3, 0.0,
         1.0 / 6, 5.0 / 12, 7.0 / 24, 1.0 / 8,
         1.0 / 6, 5.0 / 12, 7.0 / 24, 1.0 / 8,
         0.0, 1.0 / 2, 1.0 / 4, 1.0 / 4;
    return p;
}

/// Row-4 variant [0, 1/2, 1/3, 1/3]: sums to 7/6, so it is not a
/// distribution. Kept for the record.
inline Eigen::RowVector4d cx4_row4_variant() {
    return {0.0, 1.0 / 2, 1.0 / 3, 1.0 / 3};
}

inline Vector cx4_pi() {
    Vector pi(4);
    pi << 3.0 / 17, 7.0 / 17, 5.0 / 17, 2.0 / 17;
    return pi;
}

// ---------------------------------------------------------------------------
// Seeded random hypergraphs. All generators emit connected hypergraphs with
// every vertex covered by at least one edge.

struct GeneratorOptions {
    int min_vertices = 4;
    int max_vertices = 12;
    int min_edge_size = 2;
    int max_edge_size = 5;
    bool unit_weights = false;
};

namespace detail {

struct RandomPattern {
    int n = 0;
    std::vector<std::vector<int>> edges;  // vertex indices per edge
};

inline RandomPattern random_pattern(SplitMix& rng, const GeneratorOptions& opts) {
    RandomPattern pat;
    pat.n = rng.uniform_int(opts.min_vertices, opts.max_vertices);
    const int m = rng.uniform_int(2, std::max(3, pat.n / 2 + 1));
    std::vector<int> perm(pat.n);
    std::iota(perm.begin(), perm.end(), 0);
    auto sample_edge = [&](int size) {
        for (int i = 0; i < size; ++i) {
            std::swap(perm[i], perm[rng.uniform_int(i, pat.n - 1)]);
        }
        return std::vector<int>(perm.begin(), perm.begin() + size);
    };
    for (int e = 0; e < m; ++e) {
        pat.edges.push_back(
            sample_edge(rng.uniform_int(opts.min_edge_size, std::min(opts.max_edge_size, pat.n))));
    }
    // Cover every vertex, then bridge components until connected.
    std::vector<char> covered(pat.n, 0);
    for (const auto& edge : pat.edges) {
        for (int v : edge) covered[v] = 1;
    }
    for (int v = 0; v < pat.n; ++v) {
        if (!covered[v]) pat.edges.push_back({v, (v + 1) % pat.n});
    }
    std::vector<int> comp(pat.n);
    std::iota(comp.begin(), comp.end(), 0);
    std::function<int(int)> find = [&](int v) { return comp[v] == v ? v : comp[v] = find(comp[v]); };
    for (const auto& edge : pat.edges) {
        for (std::size_t i = 1; i < edge.size(); ++i) comp[find(edge[i])] = find(edge[0]);
    }
    for (int v = 1; v < pat.n; ++v) {
        if (find(v) != find(0)) {
            pat.edges.push_back({0, v});
            comp[find(v)] = find(0);
        }
    }
    return pat;
}

inline RhoSpec random_power_rho(SplitMix& rng) {
    const double sigmas[] = {-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0};
    return RhoSpec::power(sigmas[rng.uniform_int(0, 6)]);
}

inline GeneralizedHypergraph assemble(const RandomPattern& pat,
                                      const std::vector<std::vector<double>>& q1,
                                      const std::vector<std::vector<double>>& q2,
                                      SplitMix& rng, const GeneratorOptions& opts,
                                      const RhoSpec& rho) {
    std::vector<Incidence> records;
    std::map<std::string, double> weights;
    for (std::size_t e = 0; e < pat.edges.size(); ++e) {
        const std::string edge_id = "e" + std::to_string(e);
        weights[edge_id] = opts.unit_weights ? 1.0 : rng.uniform(0.5, 2.0);
        for (std::size_t i = 0; i < pat.edges[e].size(); ++i) {
            records.push_back(
                {"v" + std::to_string(pat.edges[e][i]), edge_id, q1[e][i], q2[e][i]});
        }
    }
    return hgx::build_hypergraph(records, weights, rho);
}

}  // namespace detail

/// Condition (2): Q1 = k Q2 with Q2 ~ U(0.5, 1.5).
inline GeneralizedHypergraph random_condition2(std::uint64_t seed, GeneratorOptions opts = {},
                                               double k = 0.0) {
    SplitMix rng(seed * 2 + 1);
    const auto pat = detail::random_pattern(rng, opts);
    if (k == 0.0) {
        const double choices[] = {0.5, 1.0, 2.0, 3.0};
        k = choices[rng.uniform_int(0, 3)];
    }
    std::vector<std::vector<double>> q1(pat.edges.size()), q2(pat.edges.size());
    for (std::size_t e = 0; e < pat.edges.size(); ++e) {
        for (std::size_t i = 0; i < pat.edges[e].size(); ++i) {
            const double value = rng.uniform(0.5, 1.5);
            q2[e].push_back(value);
            q1[e].push_back(k * value);
        }
    }
    const RhoSpec rho = detail::random_power_rho(rng);
    return detail::assemble(pat, q1, q2, rng, opts, rho);
}

/// Condition (1): per-vertex weights q1(v), q2(v) ~ U(0.5, 1.5).
inline GeneralizedHypergraph random_condition1(std::uint64_t seed, GeneratorOptions opts = {}) {
    SplitMix rng(seed * 2 + 1);
    const auto pat = detail::random_pattern(rng, opts);
    std::vector<double> vq1(pat.n), vq2(pat.n);
    for (int v = 0; v < pat.n; ++v) {
        vq1[v] = rng.uniform(0.5, 1.5);
        vq2[v] = rng.uniform(0.5, 1.5);
    }
    std::vector<std::vector<double>> q1(pat.edges.size()), q2(pat.edges.size());
    for (std::size_t e = 0; e < pat.edges.size(); ++e) {
        for (int v : pat.edges[e]) {
            q1[e].push_back(vq1[v]);
            q2[e].push_back(vq2[v]);
        }
    }
    const RhoSpec rho = detail::random_power_rho(rng);
    return detail::assemble(pat, q1, q2, rng, opts, rho);
}

/// Plain incidence weights: Q1 = Q2 = H.
inline GeneralizedHypergraph random_binary(std::uint64_t seed, GeneratorOptions opts = {}) {
    SplitMix rng(seed * 2 + 1);
    const auto pat = detail::random_pattern(rng, opts);
    std::vector<std::vector<double>> q(pat.edges.size());
    for (std::size_t e = 0; e < pat.edges.size(); ++e) {
        q[e].assign(pat.edges[e].size(), 1.0);
    }
    const RhoSpec rho = detail::random_power_rho(rng);
    return detail::assemble(pat, q, q, rng, opts, rho);
}

/// k-uniform Q = H hypergraph (every edge has exactly edge_size members).
inline GeneralizedHypergraph random_uniform_binary(std::uint64_t seed, int edge_size,
                                                   double sigma,
                                                   GeneratorOptions opts = {}) {
    opts.min_edge_size = edge_size;
    opts.max_edge_size = edge_size;
    opts.min_vertices = std::max(opts.min_vertices, edge_size + 1);
    SplitMix rng(seed * 2 + 1);
    auto pat = detail::random_pattern(rng, opts);
    // The covering/bridging edges in the pattern may be smaller; replace
    // them with size-edge_size edges containing the same pair.
    for (auto& edge : pat.edges) {
        while (static_cast<int>(edge.size()) < edge_size) {
            const int extra = rng.uniform_int(0, pat.n - 1);
            if (std::find(edge.begin(), edge.end(), extra) == edge.end()) {
                edge.push_back(extra);
            }
        }
    }
    std::vector<std::vector<double>> q(pat.edges.size());
    for (std::size_t e = 0; e < pat.edges.size(); ++e) {
        q[e].assign(pat.edges[e].size(), 1.0);
    }
    return detail::assemble(pat, q, q, rng, opts, RhoSpec::power(sigma));
}

/// Q1 = diag(a) Q2 with a non-constant positive per-vertex vector and an
/// edge-dependent Q2: neither explicit condition holds, yet the pairwise
/// reversibility equation does (the per-vertex factor cancels out of the
/// walk), so only the general clique-graph route applies.
inline GeneralizedHypergraph random_general_equation_only(std::uint64_t seed,
                                                          GeneratorOptions opts = {}) {
    SplitMix rng(seed * 2 + 1);
    const auto pat = detail::random_pattern(rng, opts);
    std::vector<double> scale(pat.n);
    for (int v = 0; v < pat.n; ++v) scale[v] = rng.uniform(0.5, 3.0);
    scale[0] = 5.0;  // guarantee a genuinely non-constant ratio
    std::vector<std::vector<double>> q1(pat.edges.size()), q2(pat.edges.size());
    for (std::size_t e = 0; e < pat.edges.size(); ++e) {
        for (int v : pat.edges[e]) {
            const double value = rng.uniform(0.5, 1.5);
            q2[e].push_back(value);
            q1[e].push_back(scale[v] * value);
        }
    }
    const RhoSpec rho = detail::random_power_rho(rng);
    return detail::assemble(pat, q1, q2, rng, opts, rho);
}

/// Rebuild with Q1 := Q2 (used by the condition-collapse property).
inline GeneralizedHypergraph with_q1_equal_q2(const GeneralizedHypergraph& h) {
    std::vector<Incidence> records;
    std::map<std::string, double> weights;
    for (Index e = 0; e < h.num_edges(); ++e) {
        weights[h.edge_ids()[e]] = h.edge_weights()[e];
        for (hgx::SpMatrix::InnerIterator it(h.q2(), e); it; ++it) {
            records.push_back(
                {h.vertex_ids()[it.row()], h.edge_ids()[e], it.value(), it.value()});
        }
    }
    hgx::BuildOptions opts;
    opts.vertex_order = h.vertex_ids();
    return hgx::build_hypergraph(records, weights, h.rho(), opts);
}

// ---------------------------------------------------------------------------
// Synthetic two-community EDVW benchmark for the learning criteria.

struct TwoBlockData {
    GeneralizedHypergraph h;
    Matrix features;
    std::vector<int> labels;
    hgx::SplitMasks masks;
    Index isolated_vertex = -1;  // set when built with an injected isolated vertex
};

/// 60 objects in two feature-space communities, within-community k-NN
/// hyperedges with Gaussian EDVW weights, 10 train / 5 val / 15 test per
/// block. With add_isolated, one extra vertex outside every hyperedge.
inline TwoBlockData two_block(std::uint64_t seed, bool add_isolated = false) {
    constexpr int kPerBlock = 30;
    constexpr int kDim = 4;
    SplitMix rng(seed ^ 0xb7e151628aed2a6bull);

    TwoBlockData data;
    hgx::FeatureTable table;
    table.features.resize(2 * kPerBlock, kDim);
    for (int block = 0; block < 2; ++block) {
        const double center = block == 0 ? 1.0 : -1.0;
        for (int i = 0; i < kPerBlock; ++i) {
            const int row = block * kPerBlock + i;
            table.ids.push_back("o" + std::to_string(row));
            for (int c = 0; c < kDim; ++c) {
                table.features(row, c) = center + rng.uniform(-0.8, 0.8);
            }
            data.labels.push_back(block);
        }
    }
    const GeneralizedHypergraph knn = hgx::knn_gaussian_hypergraph(table, 5, 1.0);

    if (!add_isolated) {
        data.h = knn;
        data.features = table.features;
    } else {
        std::vector<Incidence> records;
        std::map<std::string, double> weights;
        for (Index e = 0; e < knn.num_edges(); ++e) {
            weights[knn.edge_ids()[e]] = knn.edge_weights()[e];
            hgx::SpMatrix::InnerIterator i1(knn.q1(), e), i2(knn.q2(), e);
            for (; i1 && i2; ++i1, ++i2) {
                records.push_back({knn.vertex_ids()[i1.row()], knn.edge_ids()[e], i1.value(),
                                   i2.value()});
            }
        }
        hgx::BuildOptions opts;
        opts.vertex_order = knn.vertex_ids();
        opts.vertex_order.push_back("iso");
        data.h = hgx::build_hypergraph(records, weights, knn.rho(), opts);
        data.isolated_vertex = data.h.num_vertices() - 1;
        data.features.resize(table.features.rows() + 1, kDim);
        data.features.topRows(table.features.rows()) = table.features;
        data.features.row(table.features.rows()).setOnes();
        data.labels.push_back(0);
    }

    for (int block = 0; block < 2; ++block) {
        for (int i = 0; i < kPerBlock; ++i) {
            const Index row = block * kPerBlock + i;
            if (i < 10) data.masks.train.push_back(row);
            else if (i < 15) data.masks.val.push_back(row);
            else data.masks.test.push_back(row);
        }
    }
    return data;
}

}  // namespace fx
