#pragma once

#include "hgx/hypergraph.hpp"

#include <string>
#include <vector>

namespace hgx {

/// Normalized-cut evaluation of a vertex subset S:
///   vol(S)  = sum_{u in S} d_hat(u) / vol(V)
///   vol(dS) = (1/vol(V)) sum_{e crossing} w(e) rho(delta(e)) m(e^S) m(e^Sc)
///   c(S)    = vol(dS) (1/vol(S) + 1/vol(Sc))
/// with m(e^S) = sum_{u in e^S} Q2(u,e). Volumes are pi-masses, so
/// vol_s + vol_sc = 1.
struct CutReport {
    std::vector<std::string> subset;
    double vol_s = 0.0;
    double vol_sc = 0.0;
    double vol_boundary = 0.0;
    double objective = 0.0;
};

/// Throws on empty or full subsets. The closed-form pi requires an
/// equivalence condition; allow_power_pi falls back to power iteration
/// (no guarantee from the partition objective's derivation then).
CutReport cut_objective(const GeneralizedHypergraph& h,
                        const std::vector<std::string>& subset,
                        bool allow_power_pi = false);

struct SweepResult {
    CutReport best;
    std::vector<CutReport> prefix_cuts;  // one per prefix of the spectral order
};

/// Heuristic spectral sweep: order vertices by the entries of
/// Dhat^{-1/2} u_{lambda_H} and evaluate every prefix cut.
SweepResult cut_sweep(const GeneralizedHypergraph& h);

}  // namespace hgx
