#include "hgx/partition.hpp"

#include "hgx/equiv.hpp"
#include "hgx/spectral.hpp"
#include "hgx/walk.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hgx {

namespace {

CutReport cut_objective_indexed(const GeneralizedHypergraph& h, const std::vector<char>& in_s,
                                const Vector& pi) {
    const Index n = h.num_vertices();
    CutReport report;
    for (Index v = 0; v < n; ++v) {
        if (in_s[v]) {
            report.subset.push_back(h.vertex_ids()[v]);
            report.vol_s += pi[v];
        } else {
            report.vol_sc += pi[v];
        }
    }

    const DegreeProfile p = degree_profile(h);
    const Vector rho_delta = rho_eval(h.rho(), p.delta);
    const double vol_total = p.d_hat.sum();
    double boundary = 0.0;
    for (Index e = 0; e < h.num_edges(); ++e) {
        double mass_s = 0.0, mass_sc = 0.0;
        for (SpMatrix::InnerIterator it(h.q2(), e); it; ++it) {
            (in_s[it.row()] ? mass_s : mass_sc) += it.value();
        }
        boundary += h.edge_weights()[e] * rho_delta[e] * mass_s * mass_sc;
    }
    report.vol_boundary = boundary / vol_total;
    report.objective = report.vol_boundary * (1.0 / report.vol_s + 1.0 / report.vol_sc);
    return report;
}

Vector partition_pi(const GeneralizedHypergraph& h, bool allow_power_pi) {
    const ConditionReport cond = check_equivalence_conditions(h);
    if (cond.condition1 || cond.condition2.holds) return stationary_closed_form(h).pi;
    if (!allow_power_pi) {
        throw ValidationError(
            "cut objective needs the closed-form stationary distribution; no equivalence "
            "condition holds (allow_power_pi evaluates it from power iteration instead)");
    }
    return stationary_distribution(h, StationaryMode::power).pi;
}

}  // namespace

CutReport cut_objective(const GeneralizedHypergraph& h, const std::vector<std::string>& subset,
                        bool allow_power_pi) {
    const Index n = h.num_vertices();
    std::vector<char> in_s(n, 0);
    for (const auto& id : subset) in_s[h.vertex_index(id)] = 1;
    const Index size = std::count(in_s.begin(), in_s.end(), char(1));
    if (size == 0 || size == n) {
        throw ValidationError("cut subset must be a proper nonempty part of the vertex set");
    }
    return cut_objective_indexed(h, in_s, partition_pi(h, allow_power_pi));
}

SweepResult cut_sweep(const GeneralizedHypergraph& h) {
    const Index n = h.num_vertices();
    if (n < 2) throw ValidationError("cut sweep needs at least two vertices");
    const Vector pi = partition_pi(h, false);
    const LaplacianBundle bundle = unified_laplacian(h);
    const SpectrumReport spec = spectrum(bundle.L);

    // Eigenvector of lambda_H, mapped back through Dhat^{-1/2}.
    Index fiedler_idx = 0;
    for (Index i = 0; i < spec.eigenvalues.size(); ++i) {
        if (spec.eigenvalues[i] > 1e-10) {
            fiedler_idx = i;
            break;
        }
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(bundle.L);
    Vector order_key = solver.eigenvectors().col(fiedler_idx);
    for (Index v = 0; v < n; ++v) {
        if (bundle.d_hat[v] > 0.0) order_key[v] /= std::sqrt(bundle.d_hat[v]);
    }

    std::vector<Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return order_key[a] < order_key[b]; });

    SweepResult result;
    std::vector<char> in_s(n, 0);
    for (Index prefix = 0; prefix + 1 < n; ++prefix) {
        in_s[order[prefix]] = 1;
        CutReport report = cut_objective_indexed(h, in_s, pi);
        if (result.prefix_cuts.empty() || report.objective < result.best.objective) {
            result.best = report;
        }
        result.prefix_cuts.push_back(std::move(report));
    }
    return result;
}

}  // namespace hgx
