#pragma once

#include "hgx/hypergraph.hpp"
#include "hgx/walk.hpp"

namespace hgx {

struct Condition2 {
    bool holds = false;
    double k = 0.0;  // scale factor with Q1 = k Q2, valid when holds
};

/// Which equivalence route (if any) the hypergraph admits. condition1 and
/// condition2 are the two explicit sufficient conditions; the general
/// equation is the pairwise reversibility identity
///   d_hat(u) d(v) F(u,v) = d_hat(v) d(u) F(v,u)
/// with F = Q1 W rho(De) Q2^T, reported separately so cases outside both
/// conditions surface.
struct ConditionReport {
    bool condition1 = false;
    Condition2 condition2;
    bool general_equation_holds = false;
    double tolerance = 1e-9;
};

/// Pairwise general-equation verification is exhaustive for |V| <= 200 and
/// samples 1000 seeded pairs above.
ConditionReport check_equivalence_conditions(const GeneralizedHypergraph& h, double tol = 1e-9);

/// Weighted undirected clique graph; symmetric, self-loops kept.
struct CliqueGraph {
    std::vector<std::string> vertex_ids;
    Matrix weights;
};

/// Clique weight matrix K = Q2 W rho(De) Q2^T, accumulated edge by edge so
/// the result is exactly symmetric.
Matrix clique_weight_matrix(const GeneralizedHypergraph& h);

/// Equivalent clique graph. Under condition (1) or (2) the weights are
/// Q2 W rho(De) Q2^T; when only the general equation holds they come from
/// omega(u,v) = d_hat(u) F(u,v) / d(u) (symmetry then checked within 1e-12).
/// Refuses when the general equation fails.
CliqueGraph clique_graph(const GeneralizedHypergraph& h);

/// Row-normalized random walk on the clique graph.
TransitionMatrix clique_walk_matrix(const CliqueGraph& g, const WalkOptions& opts = {});

}  // namespace hgx
