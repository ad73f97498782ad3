#pragma once

#include "hgx/hypergraph.hpp"

#include <vector>

namespace hgx {

enum class WalkKind { lazy, non_lazy, clique_walk };

/// Row-stochastic |V| x |V| transition matrix. Rows of isolated vertices are
/// all-zero and listed in `isolated` (only produced under allow_isolated).
struct TransitionMatrix {
    Matrix P;
    WalkKind kind = WalkKind::lazy;
    std::vector<Index> isolated;
};

struct WalkOptions {
    bool allow_isolated = false;
};

/// Lazy unified walk, P = Dv^{-1} Q1 W rho(De) Q2^T.
TransitionMatrix transition_matrix(const GeneralizedHypergraph& h, const WalkOptions& opts = {});

/// Non-lazy unified walk,
///   P(u,v) = sum_e w(e) rho(delta(e)-Q2(u,e)) Q1(u,e) Q2(v,e) / d_nl(u)
/// for u != v and exactly zero on the diagonal. Edges whose Q2 mass sits
/// entirely on one vertex are rejected.
TransitionMatrix transition_matrix_nonlazy(const GeneralizedHypergraph& h,
                                           const WalkOptions& opts = {});

/// Brute-force two-step walk probability: pick an incident hyperedge with
/// p1 proportional to w(e) delta(e) rho(delta(e)) Q1(u,e), then a member with
/// p2 = Q2(v,e)/delta(e). Independent of the matrix-form code path above.
double two_step_oracle(const GeneralizedHypergraph& h, const std::string& u,
                       const std::string& v);

/// All pairs of the oracle at once.
Matrix two_step_oracle_matrix(const GeneralizedHypergraph& h);

enum class StationaryMethod { closed_form, power_iteration };
enum class StationaryMode { auto_select, closed, power };

struct StationaryDistribution {
    Vector pi;              // sums to 1 over non-isolated vertices, 0 at isolated
    StationaryMethod method = StationaryMethod::closed_form;
    double residual = 0.0;  // ||pi P - pi||_1
    std::vector<Index> isolated;
};

struct StationaryOptions {
    double tol = 1e-12;
    int max_iters = 100000;
};

/// pi proportional to d_hat; valid only when an equivalence condition holds.
StationaryDistribution stationary_closed_form(const GeneralizedHypergraph& h);

/// Left power iteration on P with window-averaged iterates every 100 steps
/// (handles periodic non-lazy chains). Throws NumericalError when the
/// residual stays above tol for max_iters steps.
StationaryDistribution stationary_power_iteration(const Matrix& P,
                                                  const StationaryOptions& opts = {});

StationaryDistribution stationary_distribution(const GeneralizedHypergraph& h,
                                               StationaryMode mode,
                                               const StationaryOptions& opts = {});

struct ReversibilityReport {
    bool reversible = true;
    Index u = 0, v = 0;         // lexicographically first pair attaining the max
    double worst_violation = 0.0;  // max |pi(u)P(u,v) - pi(v)P(v,u)|
    double flow_uv = 0.0;          // pi(u)P(u,v) at the witness
    double flow_vu = 0.0;          // pi(v)P(v,u) at the witness
};

/// Detailed-balance test over all pairs. pi must be stationary for P within
/// tol, else ValidationError.
ReversibilityReport is_reversible(const Matrix& P, const Vector& pi, double tol = 1e-9);

/// p^(k) = f P^k with f the one-hot row vector at `source`.
Vector step_distribution(const Matrix& P, Index source, int k);

}  // namespace hgx
