#include "hgx/walk.hpp"

#include "hgx/equiv.hpp"

#include <cmath>
#include <deque>

namespace hgx {

namespace {

std::vector<Index> isolated_vertices(const Vector& degree) {
    std::vector<Index> out;
    for (Index v = 0; v < degree.size(); ++v) {
        if (degree[v] == 0.0) out.push_back(v);
    }
    return out;
}

/// BFS over the clique graph restricted to non-isolated vertices.
bool connected_excluding_isolated(const GeneralizedHypergraph& h, const Vector& degree) {
    const Index n = h.num_vertices();
    std::vector<std::vector<Index>> adj(n);
    for (Index e = 0; e < h.num_edges(); ++e) {
        const auto members = h.edge_members(e);
        for (Index a : members) {
            for (Index b : members) {
                if (a != b) adj[a].push_back(b);
            }
        }
    }
    Index start = -1, live = 0;
    for (Index v = 0; v < n; ++v) {
        if (degree[v] > 0.0) {
            if (start < 0) start = v;
            ++live;
        }
    }
    if (live == 0) return false;
    std::vector<bool> visited(n, false);
    std::deque<Index> queue{start};
    visited[start] = true;
    Index reached = 1;
    while (!queue.empty()) {
        const Index v = queue.front();
        queue.pop_front();
        for (Index u : adj[v]) {
            if (!visited[u]) {
                visited[u] = true;
                ++reached;
                queue.push_back(u);
            }
        }
    }
    return reached == live;
}

}  // namespace

TransitionMatrix transition_matrix(const GeneralizedHypergraph& h, const WalkOptions& opts) {
    const Index n = h.num_vertices();
    if (n > kDeskScale) {
        throw ValidationError("dense transition matrices are limited to " +
                              std::to_string(kDeskScale) + " vertices");
    }
    const DegreeProfile p = degree_profile(h);
    TransitionMatrix tm;
    tm.kind = WalkKind::lazy;
    tm.isolated = isolated_vertices(p.d);
    if (!tm.isolated.empty() && !opts.allow_isolated) {
        throw ValidationError("isolated vertex " + h.vertex_ids()[tm.isolated.front()] +
                              " has no outgoing transition (pass allow_isolated to keep a zero row)");
    }

    const Vector rho_delta = rho_eval(h.rho(), p.delta);
    Matrix num = Matrix::Zero(n, n);
    for (Index e = 0; e < h.num_edges(); ++e) {
        const double c = h.edge_weights()[e] * rho_delta[e];
        for (SpMatrix::InnerIterator iu(h.q1(), e); iu; ++iu) {
            for (SpMatrix::InnerIterator iv(h.q2(), e); iv; ++iv) {
                num(iu.row(), iv.row()) += c * iu.value() * iv.value();
            }
        }
    }
    tm.P = Matrix::Zero(n, n);
    for (Index u = 0; u < n; ++u) {
        if (p.d[u] > 0.0) tm.P.row(u) = num.row(u) / p.d[u];
    }
    return tm;
}

TransitionMatrix transition_matrix_nonlazy(const GeneralizedHypergraph& h,
                                           const WalkOptions& opts) {
    const Index n = h.num_vertices();
    const DegreeProfile p = degree_profile(h);
    for (Index e = 0; e < h.num_edges(); ++e) {
        if (h.q2().col(e).nonZeros() < 2) {
            throw ValidationError("edge " + h.edge_ids()[e] +
                                  " carries its whole Q2 mass on one vertex; the non-lazy walk "
                                  "is undefined there");
        }
    }
    TransitionMatrix tm;
    tm.kind = WalkKind::non_lazy;
    tm.isolated = isolated_vertices(p.d_nl);
    if (!tm.isolated.empty() && !opts.allow_isolated) {
        throw ValidationError("isolated vertex " + h.vertex_ids()[tm.isolated.front()] +
                              " has no outgoing non-lazy transition");
    }

    tm.P = Matrix::Zero(n, n);
    for (Index e = 0; e < h.num_edges(); ++e) {
        const double w = h.edge_weights()[e];
        SpMatrix::InnerIterator iu1(h.q1(), e), iu2(h.q2(), e);
        for (; iu1 && iu2; ++iu1, ++iu2) {
            const Index u = iu1.row();
            const double residual = p.delta[e] - iu2.value();
            const double c = w * rho_eval(h.rho(), residual) * iu1.value();
            for (SpMatrix::InnerIterator iv(h.q2(), e); iv; ++iv) {
                if (iv.row() == u) continue;
                tm.P(u, iv.row()) += c * iv.value();
            }
        }
    }
    for (Index u = 0; u < n; ++u) {
        if (p.d_nl[u] > 0.0) tm.P.row(u) /= p.d_nl[u];
        tm.P(u, u) = 0.0;
    }
    return tm;
}

double two_step_oracle(const GeneralizedHypergraph& h, const std::string& u,
                       const std::string& v) {
    const Index ui = h.vertex_index(u);
    const Index vi = h.vertex_index(v);
    const Index m = h.num_edges();

    // First-step weights per incident edge, straight from the definition.
    std::vector<double> delta(m, 0.0);
    for (Index e = 0; e < m; ++e) {
        for (SpMatrix::InnerIterator it(h.q2(), e); it; ++it) delta[e] += it.value();
    }
    std::vector<double> p1_num(m, 0.0);
    double denom = 0.0;
    for (Index e = 0; e < m; ++e) {
        double q1u = 0.0;
        for (SpMatrix::InnerIterator it(h.q1(), e); it; ++it) {
            if (it.row() == ui) q1u = it.value();
        }
        if (q1u == 0.0) continue;
        p1_num[e] = h.edge_weights()[e] * delta[e] * rho_eval(h.rho(), delta[e]) * q1u;
        denom += p1_num[e];
    }
    if (denom == 0.0) throw ValidationError("two-step oracle from isolated vertex " + u);

    double prob = 0.0;
    for (Index e = 0; e < m; ++e) {
        if (p1_num[e] == 0.0) continue;
        double q2v = 0.0;
        for (SpMatrix::InnerIterator it(h.q2(), e); it; ++it) {
            if (it.row() == vi) q2v = it.value();
        }
        if (q2v == 0.0) continue;
        prob += (p1_num[e] / denom) * (q2v / delta[e]);
    }
    return prob;
}

Matrix two_step_oracle_matrix(const GeneralizedHypergraph& h) {
    const Index n = h.num_vertices();
    Matrix P(n, n);
    for (Index u = 0; u < n; ++u) {
        for (Index v = 0; v < n; ++v) {
            P(u, v) = two_step_oracle(h, h.vertex_ids()[u], h.vertex_ids()[v]);
        }
    }
    return P;
}

StationaryDistribution stationary_closed_form(const GeneralizedHypergraph& h) {
    const ConditionReport report = check_equivalence_conditions(h);
    if (!report.condition1 && !report.condition2.holds) {
        throw ValidationError(
            "closed-form stationary distribution requires an equivalence condition; "
            "neither holds");
    }
    const DegreeProfile p = degree_profile(h);
    StationaryDistribution out;
    out.method = StationaryMethod::closed_form;
    out.isolated = isolated_vertices(p.d_hat);
    const double total = p.d_hat.sum();
    if (total == 0.0) throw ValidationError("hypergraph has no edges; stationary undefined");
    out.pi = p.d_hat / total;
    const Matrix P = transition_matrix(h, {.allow_isolated = true}).P;
    out.residual = (P.transpose() * out.pi - out.pi).lpNorm<1>();
    return out;
}

StationaryDistribution stationary_power_iteration(const Matrix& P,
                                                  const StationaryOptions& opts) {
    const Index n = P.rows();
    for (Index u = 0; u < n; ++u) {
        if (P.row(u).sum() == 0.0) {
            throw ValidationError("power iteration on a matrix with an all-zero row " +
                                  std::to_string(u));
        }
    }
    StationaryDistribution out;
    out.method = StationaryMethod::power_iteration;

    Vector x = Vector::Constant(n, 1.0 / static_cast<double>(n));
    Vector window_sum = Vector::Zero(n);
    constexpr int kWindow = 100;  // Cesaro window; handles periodic chains
    for (int iter = 1; iter <= opts.max_iters; ++iter) {
        Vector next = P.transpose() * x;
        next /= next.lpNorm<1>();
        const double residual = (next - x).lpNorm<1>();
        if (residual <= opts.tol) {
            out.pi = next;
            out.residual = (P.transpose() * next - next).lpNorm<1>();
            return out;
        }
        x = next;
        window_sum += x;
        if (iter % kWindow == 0) {
            Vector avg = window_sum / window_sum.lpNorm<1>();
            const double avg_residual = (P.transpose() * avg - avg).lpNorm<1>();
            if (avg_residual <= opts.tol) {
                out.pi = avg;
                out.residual = avg_residual;
                return out;
            }
            window_sum.setZero();
        }
    }
    throw NumericalError("power iteration did not reach tolerance " +
                         std::to_string(opts.tol) + " within " +
                         std::to_string(opts.max_iters) + " iterations");
}

StationaryDistribution stationary_distribution(const GeneralizedHypergraph& h,
                                               StationaryMode mode,
                                               const StationaryOptions& opts) {
    if (mode == StationaryMode::auto_select) {
        const ConditionReport report = check_equivalence_conditions(h);
        mode = (report.condition1 || report.condition2.holds) ? StationaryMode::closed
                                                              : StationaryMode::power;
    }
    if (mode == StationaryMode::closed) return stationary_closed_form(h);

    const DegreeProfile p = degree_profile(h);
    if (!connected_excluding_isolated(h, p.d)) {
        throw ValidationError("power iteration requires a connected hypergraph "
                              "(isolated vertices aside)");
    }
    const auto iso = isolated_vertices(p.d);
    const Matrix P = transition_matrix(h, {.allow_isolated = true}).P;
    if (iso.empty()) {
        StationaryDistribution out = stationary_power_iteration(P, opts);
        return out;
    }
    // Solve on the non-isolated sub-chain, re-embed zeros at isolated slots.
    std::vector<Index> live;
    for (Index v = 0; v < h.num_vertices(); ++v) {
        if (p.d[v] > 0.0) live.push_back(v);
    }
    Matrix sub(live.size(), live.size());
    for (std::size_t a = 0; a < live.size(); ++a) {
        for (std::size_t b = 0; b < live.size(); ++b) sub(a, b) = P(live[a], live[b]);
    }
    StationaryDistribution inner = stationary_power_iteration(sub, opts);
    StationaryDistribution out;
    out.method = StationaryMethod::power_iteration;
    out.residual = inner.residual;
    out.isolated = iso;
    out.pi = Vector::Zero(h.num_vertices());
    for (std::size_t a = 0; a < live.size(); ++a) out.pi[live[a]] = inner.pi[a];
    return out;
}

ReversibilityReport is_reversible(const Matrix& P, const Vector& pi, double tol) {
    const double stationarity = (P.transpose() * pi - pi).lpNorm<1>();
    if (stationarity > tol) {
        throw ValidationError("pi is not stationary for P (residual " +
                              std::to_string(stationarity) + ")");
    }
    const Index n = P.rows();
    ReversibilityReport report;
    double worst = 0.0;
    for (Index u = 0; u < n; ++u) {
        for (Index v = u + 1; v < n; ++v) {
            const double violation = std::abs(pi[u] * P(u, v) - pi[v] * P(v, u));
            if (violation > worst) worst = violation;
        }
    }
    report.worst_violation = worst;
    report.reversible = worst <= tol;
    // Witness: lexicographically first pair attaining the max, with a small
    // relative window so fp ties resolve deterministically.
    const double cutoff = worst * (1.0 - 1e-9) - 1e-18;
    for (Index u = 0; u < n && worst > 0.0; ++u) {
        bool done = false;
        for (Index v = u + 1; v < n; ++v) {
            const double violation = std::abs(pi[u] * P(u, v) - pi[v] * P(v, u));
            if (violation >= cutoff) {
                report.u = u;
                report.v = v;
                report.flow_uv = pi[u] * P(u, v);
                report.flow_vu = pi[v] * P(v, u);
                done = true;
                break;
            }
        }
        if (done) break;
    }
    return report;
}

Vector step_distribution(const Matrix& P, Index source, int k) {
    if (source < 0 || source >= P.rows()) {
        throw ValidationError("unknown source vertex index " + std::to_string(source));
    }
    if (k < 0) throw ValidationError("step count must be nonnegative");
    Vector p = Vector::Zero(P.rows());
    p[source] = 1.0;
    for (int i = 0; i < k; ++i) p = P.transpose() * p;
    return p;
}

}  // namespace hgx
