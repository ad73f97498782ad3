#pragma once

#include "hgx/equiv.hpp"
#include "hgx/hypergraph.hpp"
#include "hgx/walk.hpp"

#include <vector>

namespace hgx {

/// Unified Laplacian and its companions:
///   K       = Q2 W rho(De) Q2^T           (clique weights)
///   L       = I - Dhat^{-1/2} K Dhat^{-1/2}
///   T_tilde = Dtil^{-1/2} (K+I) Dtil^{-1/2},  Dtil(v,v) = sum_u (K+I)(v,u)
/// Zero degrees follow the pseudo-inverse convention: the Dhat^{-1/2} entry
/// is 0, so an isolated vertex gets L(v,v) = 1 and T_tilde row e_v.
struct LaplacianBundle {
    Matrix K;
    Matrix L;
    Matrix T_tilde;
    Vector d_hat;
};

/// With enforce_conditions, refuses hypergraphs outside conditions (1)/(2);
/// the matrix is computable regardless, so callers may override.
LaplacianBundle unified_laplacian(const GeneralizedHypergraph& h,
                                  bool enforce_conditions = true);

/// Just T_tilde; no condition check (the renormalized operator is defined
/// for any hypergraph).
Matrix renormalized_operator(const GeneralizedHypergraph& h);

/// Un-renormalized propagation operator Dhat^{-1/2} K Dhat^{-1/2}.
Matrix plain_operator(const GeneralizedHypergraph& h);

struct SpectrumReport {
    Vector eigenvalues;  // ascending
    double lambda_min = 0.0;
    double lambda_h = 0.0;  // smallest eigenvalue above the 1e-10 threshold
    double lambda_max = 0.0;
    Vector u1;  // eigenvector of lambda_min
};

/// Dense symmetric eigendecomposition. Throws ValidationError when the input
/// is asymmetric beyond 1e-9 or larger than 5000x5000.
SpectrumReport spectrum(const Matrix& m);

/// x^T M x / x^T x.
template <typename DM, typename DX>
double rayleigh_quotient(const Eigen::MatrixBase<DM>& m, const Eigen::MatrixBase<DX>& x) {
    const double norm2 = x.squaredNorm();
    if (norm2 == 0.0) throw ValidationError("Rayleigh quotient of the zero vector");
    return (x.transpose() * (m * x)).value() / norm2;
}

struct DiffusionStep {
    int k = 0;
    double l1_error = 0.0;  // ||f P^k - pi||_1
    double bound = 0.0;     // sum_j sqrt(dhat(j)/dhat(i)) (1-lambda_H)^k
    double energy = 0.0;    // N / l1_error; meaningless when energy_infinite
    bool energy_infinite = false;
    double energy_lower_bound = 0.0;  // N sqrt(dhat(i)) / ((1-lambda_H)^k sum_j sqrt(dhat(j)))
};

struct DiffusionTrace {
    std::vector<DiffusionStep> steps;  // k = 0..k_max
    double lambda_h = 0.0;
    Index source = 0;
};

/// One diffusion from `source`, recording errors, the convergence-rate bound
/// and the over-smoothing energies at every step. Requires a connected
/// hypergraph satisfying condition (1) or (2).
DiffusionTrace diffusion_trace(const GeneralizedHypergraph& h, const std::string& source,
                               int k_max);

struct ConvergenceCheck {
    DiffusionTrace trace;
    bool bound_holds = true;      // per-entry bound + 1e-9 slack at every step
    double worst_excess = 0.0;    // max over (j,k) of error - bound
};

/// Verifies |p^(k)(j) - pi(j)| <= sqrt(dhat(j)/dhat(i)) (1-lambda_H)^k + 1e-9
/// for every target j and every k <= k_max.
ConvergenceCheck convergence_bound_check(const GeneralizedHypergraph& h,
                                         const std::string& source, int k_max);

struct OversmoothingEnergy {
    double l1_error = 0.0;
    double energy = 0.0;
    bool infinite = false;  // l1_error == 0; serialized as a tag, never as inf
    double lower_bound = 0.0;
};

OversmoothingEnergy oversmoothing_energy(const GeneralizedHypergraph& h,
                                         const std::string& source, int t);

/// Random-walk Laplacian of the equivalent weighted digraph,
///   L_rw = I - (Phi^{1/2} P Phi^{-1/2} + Phi^{-1/2} P^T Phi^{1/2}) / 2,
/// defined for any stationary pair (P, pi) with pi > 0.
Matrix digraph_laplacian(const Matrix& P, const Vector& pi);

}  // namespace hgx
