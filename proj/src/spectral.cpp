#include "hgx/spectral.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <limits>

namespace hgx {

namespace {

/// Symmetric congruence d.asDiagonal() * K * d.asDiagonal(), filled entry by
/// entry so the result is exactly symmetric.
Matrix scale_symmetric(const Matrix& k, const Vector& d) {
    const Index n = k.rows();
    Matrix out(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = i; j < n; ++j) {
            const double value = d[i] * k(i, j) * d[j];
            out(i, j) = value;
            out(j, i) = value;
        }
    }
    return out;
}

Vector inverse_sqrt_or_zero(const Vector& d) {
    Vector out(d.size());
    for (Index i = 0; i < d.size(); ++i) out[i] = d[i] > 0.0 ? 1.0 / std::sqrt(d[i]) : 0.0;
    return out;
}

}  // namespace

LaplacianBundle unified_laplacian(const GeneralizedHypergraph& h, bool enforce_conditions) {
    if (enforce_conditions) {
        const ConditionReport report = check_equivalence_conditions(h);
        if (!report.condition1 && !report.condition2.holds) {
            throw ValidationError(
                "unified Laplacian requested outside the equivalence conditions; pass "
                "enforce_conditions=false to build it anyway");
        }
    }
    LaplacianBundle bundle;
    bundle.K = clique_weight_matrix(h);
    bundle.d_hat = degree_profile(h).d_hat;

    const Index n = h.num_vertices();
    bundle.L = Matrix::Identity(n, n) - scale_symmetric(bundle.K, inverse_sqrt_or_zero(bundle.d_hat));

    const Matrix k_tilde = bundle.K + Matrix::Identity(n, n);
    const Vector d_tilde = k_tilde.rowwise().sum();
    bundle.T_tilde = scale_symmetric(k_tilde, inverse_sqrt_or_zero(d_tilde));
    return bundle;
}

Matrix renormalized_operator(const GeneralizedHypergraph& h) {
    const Matrix k_tilde =
        clique_weight_matrix(h) + Matrix::Identity(h.num_vertices(), h.num_vertices());
    return scale_symmetric(k_tilde, inverse_sqrt_or_zero(k_tilde.rowwise().sum()));
}

Matrix plain_operator(const GeneralizedHypergraph& h) {
    const Matrix k = clique_weight_matrix(h);
    return scale_symmetric(k, inverse_sqrt_or_zero(degree_profile(h).d_hat));
}

SpectrumReport spectrum(const Matrix& m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw ValidationError("spectrum needs a nonempty square matrix");
    }
    if (m.rows() > kDeskScale) {
        throw ValidationError("dense eigendecomposition is limited to " +
                              std::to_string(kDeskScale) + " vertices");
    }
    const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-9) {
        throw ValidationError("matrix is asymmetric beyond tolerance (" + std::to_string(asym) +
                              ")");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
    if (solver.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");

    SpectrumReport report;
    report.eigenvalues = solver.eigenvalues();
    report.lambda_min = report.eigenvalues[0];
    report.lambda_max = report.eigenvalues[report.eigenvalues.size() - 1];
    report.lambda_h = 0.0;
    for (Index i = 0; i < report.eigenvalues.size(); ++i) {
        if (report.eigenvalues[i] > 1e-10) {
            report.lambda_h = report.eigenvalues[i];
            break;
        }
    }
    report.u1 = solver.eigenvectors().col(0);
    return report;
}

namespace {

struct DiffusionContext {
    Vector pi;
    Vector d_hat;
    double lambda_h;
    Matrix P;
    Index source;
};

DiffusionContext diffusion_context(const GeneralizedHypergraph& h, const std::string& source) {
    const StructureReport structure = validate(h);
    if (!structure.connected) throw ValidationError("diffusion requires a connected hypergraph");
    DiffusionContext ctx;
    ctx.source = h.vertex_index(source);
    ctx.pi = stationary_closed_form(h).pi;  // also enforces the equivalence conditions
    const LaplacianBundle bundle = unified_laplacian(h);
    ctx.d_hat = bundle.d_hat;
    ctx.lambda_h = spectrum(bundle.L).lambda_h;
    ctx.P = transition_matrix(h).P;
    return ctx;
}

DiffusionStep make_step(const DiffusionContext& ctx, const Vector& p, int k) {
    DiffusionStep step;
    step.k = k;
    step.l1_error = (p - ctx.pi).lpNorm<1>();
    const double n = static_cast<double>(ctx.pi.size());
    const double decay = std::pow(1.0 - ctx.lambda_h, k);
    double ratio_sum = 0.0;
    for (Index j = 0; j < ctx.d_hat.size(); ++j) {
        ratio_sum += std::sqrt(ctx.d_hat[j] / ctx.d_hat[ctx.source]);
    }
    step.bound = ratio_sum * decay;
    step.energy_infinite = step.l1_error == 0.0;
    step.energy = step.energy_infinite ? 0.0 : n / step.l1_error;
    const double phi = ctx.d_hat.cwiseSqrt().sum();
    step.energy_lower_bound = decay == 0.0
                                  ? std::numeric_limits<double>::infinity()
                                  : n * std::sqrt(ctx.d_hat[ctx.source]) / (decay * phi);
    return step;
}

}  // namespace

DiffusionTrace diffusion_trace(const GeneralizedHypergraph& h, const std::string& source,
                               int k_max) {
    if (k_max < 0) throw ValidationError("step count must be nonnegative");
    const DiffusionContext ctx = diffusion_context(h, source);
    DiffusionTrace trace;
    trace.lambda_h = ctx.lambda_h;
    trace.source = ctx.source;
    Vector p = Vector::Zero(ctx.pi.size());
    p[ctx.source] = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        trace.steps.push_back(make_step(ctx, p, k));
        if (k < k_max) p = ctx.P.transpose() * p;
    }
    return trace;
}

ConvergenceCheck convergence_bound_check(const GeneralizedHypergraph& h,
                                         const std::string& source, int k_max) {
    if (k_max < 0) throw ValidationError("step count must be nonnegative");
    const DiffusionContext ctx = diffusion_context(h, source);
    ConvergenceCheck check;
    check.trace.lambda_h = ctx.lambda_h;
    check.trace.source = ctx.source;
    check.worst_excess = -std::numeric_limits<double>::infinity();
    Vector p = Vector::Zero(ctx.pi.size());
    p[ctx.source] = 1.0;
    for (int k = 0; k <= k_max; ++k) {
        check.trace.steps.push_back(make_step(ctx, p, k));
        const double decay = std::pow(1.0 - ctx.lambda_h, k);
        for (Index j = 0; j < ctx.pi.size(); ++j) {
            const double error = std::abs(p[j] - ctx.pi[j]);
            const double bound =
                std::sqrt(ctx.d_hat[j] / ctx.d_hat[ctx.source]) * decay;
            check.worst_excess = std::max(check.worst_excess, error - bound);
        }
        if (k < k_max) p = ctx.P.transpose() * p;
    }
    check.bound_holds = check.worst_excess <= 1e-9;
    return check;
}

OversmoothingEnergy oversmoothing_energy(const GeneralizedHypergraph& h,
                                         const std::string& source, int t) {
    const DiffusionTrace trace = diffusion_trace(h, source, t);
    const DiffusionStep& step = trace.steps.back();
    return OversmoothingEnergy{step.l1_error, step.energy, step.energy_infinite,
                               step.energy_lower_bound};
}

Matrix digraph_laplacian(const Matrix& P, const Vector& pi) {
    if (P.rows() != P.cols() || pi.size() != P.rows()) {
        throw ValidationError("digraph Laplacian needs a square P and matching pi");
    }
    for (Index i = 0; i < pi.size(); ++i) {
        if (!(pi[i] > 0.0)) {
            throw ValidationError("digraph Laplacian requires strictly positive pi");
        }
    }
    const double residual = (P.transpose() * pi - pi).lpNorm<1>();
    if (residual > 1e-9) {
        throw ValidationError("pi is not stationary for P (residual " +
                              std::to_string(residual) + ")");
    }
    const Index n = P.rows();
    Matrix a(n, n);
    for (Index i = 0; i < n; ++i) {
        for (Index j = 0; j < n; ++j) {
            a(i, j) = std::sqrt(pi[i]) * P(i, j) / std::sqrt(pi[j]);
        }
    }
    return Matrix::Identity(n, n) - 0.5 * (a + Matrix(a.transpose()));
}

}  // namespace hgx
