#include "hgx/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <set>

namespace hgx {

Index GeneralizedHypergraph::vertex_index(const std::string& id) const {
    auto it = vertex_lookup_.find(id);
    if (it == vertex_lookup_.end()) throw ValidationError("unknown vertex id: " + id);
    return it->second;
}

Index GeneralizedHypergraph::edge_index(const std::string& id) const {
    auto it = edge_lookup_.find(id);
    if (it == edge_lookup_.end()) throw ValidationError("unknown edge id: " + id);
    return it->second;
}

std::vector<Index> GeneralizedHypergraph::edge_members(Index e) const {
    std::vector<Index> members;
    for (SpMatrix::InnerIterator it(q2_, e); it; ++it) members.push_back(it.row());
    return members;
}

bool GeneralizedHypergraph::is_isolated(Index v) const {
    for (Index e = 0; e < num_edges(); ++e) {
        for (SpMatrix::InnerIterator it(q2_, e); it; ++it) {
            if (it.row() == v) return false;
        }
    }
    return true;
}

GeneralizedHypergraph build_hypergraph(const std::vector<Incidence>& records,
                                       const std::map<std::string, double>& edge_weights,
                                       const RhoSpec& rho, const BuildOptions& opts) {
    GeneralizedHypergraph h;
    h.rho_ = rho;

    if (!opts.vertex_order.empty()) {
        for (const auto& id : opts.vertex_order) {
            if (!h.vertex_lookup_.emplace(id, h.vertex_ids_.size()).second) {
                throw ValidationError("duplicate vertex id in vertex order: " + id);
            }
            h.vertex_ids_.push_back(id);
        }
    }

    std::set<std::pair<std::string, std::string>> seen;
    std::vector<Eigen::Triplet<double>> t1, t2;
    for (const auto& rec : records) {
        if (!seen.emplace(rec.vertex, rec.edge).second) {
            throw ValidationError("duplicate incidence pair (" + rec.vertex + ", " + rec.edge +
                                  ")");
        }
        if (!(rec.q1 > 0.0) || !(rec.q2 > 0.0) || !std::isfinite(rec.q1) ||
            !std::isfinite(rec.q2)) {
            throw ValidationError("nonpositive vertex weight on (" + rec.vertex + ", " +
                                  rec.edge + ")");
        }
        auto [vit, vnew] = h.vertex_lookup_.emplace(rec.vertex, h.vertex_ids_.size());
        if (vnew) {
            if (!opts.vertex_order.empty()) {
                throw ValidationError("vertex " + rec.vertex + " missing from vertex order");
            }
            h.vertex_ids_.push_back(rec.vertex);
        }
        auto [eit, enew] = h.edge_lookup_.emplace(rec.edge, h.edge_ids_.size());
        if (enew) h.edge_ids_.push_back(rec.edge);
        t1.emplace_back(vit->second, eit->second, rec.q1);
        t2.emplace_back(vit->second, eit->second, rec.q2);
    }

    const Index n = h.num_vertices();
    const Index m = h.num_edges();
    h.w_.resize(m);
    for (Index e = 0; e < m; ++e) {
        auto it = edge_weights.find(h.edge_ids_[e]);
        if (it == edge_weights.end()) {
            if (!opts.allow_default_weight) {
                throw ValidationError("missing weight for edge " + h.edge_ids_[e]);
            }
            h.w_[e] = opts.default_weight;
        } else {
            h.w_[e] = it->second;
        }
        if (!(h.w_[e] > 0.0) || !std::isfinite(h.w_[e])) {
            throw ValidationError("nonpositive weight on edge " + h.edge_ids_[e]);
        }
    }
    for (const auto& [id, unused] : edge_weights) {
        if (h.edge_lookup_.count(id) == 0) {
            throw ValidationError("weight given for unknown edge " + id);
        }
    }

    h.q1_.resize(n, m);
    h.q2_.resize(n, m);
    h.q1_.setFromTriplets(t1.begin(), t1.end());
    h.q2_.setFromTriplets(t2.begin(), t2.end());
    h.q1_.makeCompressed();
    h.q2_.makeCompressed();

    for (Index e = 0; e < m; ++e) {
        if (h.q2_.col(e).nonZeros() == 0) {
            throw ValidationError("edge " + h.edge_ids_[e] + " has no members");
        }
    }
    return h;
}

bool operator==(const GeneralizedHypergraph& a, const GeneralizedHypergraph& b) {
    if (a.vertex_ids() != b.vertex_ids() || a.edge_ids() != b.edge_ids()) return false;
    if (a.edge_weights() != b.edge_weights() || a.rho() != b.rho()) return false;
    for (const SpMatrix* qa : {&a.q1(), &a.q2()}) {
        const SpMatrix& qb = qa == &a.q1() ? b.q1() : b.q2();
        if (qa->nonZeros() != qb.nonZeros()) return false;
        for (Index e = 0; e < a.num_edges(); ++e) {
            SpMatrix::InnerIterator ia(*qa, e), ib(qb, e);
            for (; ia && ib; ++ia, ++ib) {
                if (ia.row() != ib.row() || ia.value() != ib.value()) return false;
            }
            if (ia || ib) return false;
        }
    }
    return true;
}

DegreeProfile degree_profile(const GeneralizedHypergraph& h) {
    const Index n = h.num_vertices();
    const Index m = h.num_edges();
    DegreeProfile p;
    p.delta = Vector::Zero(m);
    for (Index e = 0; e < m; ++e) {
        for (SpMatrix::InnerIterator it(h.q2(), e); it; ++it) p.delta[e] += it.value();
    }
    const Vector rho_delta = rho_eval(h.rho(), p.delta);

    p.d = Vector::Zero(n);
    p.d_hat = Vector::Zero(n);
    p.d_nl = Vector::Zero(n);
    for (Index e = 0; e < m; ++e) {
        const double coeff = h.edge_weights()[e] * p.delta[e] * rho_delta[e];
        for (SpMatrix::InnerIterator it(h.q1(), e); it; ++it) {
            p.d[it.row()] += coeff * it.value();
        }
        for (SpMatrix::InnerIterator it(h.q2(), e); it; ++it) {
            p.d_hat[it.row()] += coeff * it.value();
        }
        // Non-lazy degree pairs Q1 entries with the residual Q2 mass.
        SpMatrix::InnerIterator it1(h.q1(), e), it2(h.q2(), e);
        for (; it1 && it2; ++it1, ++it2) {
            const double residual = p.delta[e] - it2.value();
            if (residual > 0.0) {
                p.d_nl[it1.row()] +=
                    h.edge_weights()[e] * residual * rho_eval(h.rho(), residual) * it1.value();
            }
        }
    }
    return p;
}

namespace {

/// Adjacency lists of the unweighted clique graph.
std::vector<std::vector<Index>> clique_adjacency(const GeneralizedHypergraph& h) {
    std::vector<std::set<Index>> adj(h.num_vertices());
    for (Index e = 0; e < h.num_edges(); ++e) {
        const auto members = h.edge_members(e);
        for (Index a : members) {
            for (Index b : members) {
                if (a != b) adj[a].insert(b);
            }
        }
    }
    std::vector<std::vector<Index>> out(h.num_vertices());
    for (Index v = 0; v < h.num_vertices(); ++v) out[v].assign(adj[v].begin(), adj[v].end());
    return out;
}

bool row_constant(const SpMatrix& q, Index v, double rel_tol) {
    double first = 0.0;
    bool have = false;
    for (Index e = 0; e < q.cols(); ++e) {
        for (SpMatrix::InnerIterator it(q, e); it; ++it) {
            if (it.row() != v) continue;
            if (!have) {
                first = it.value();
                have = true;
            } else if (std::abs(it.value() - first) > rel_tol * std::abs(first)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

StructureReport validate(const GeneralizedHypergraph& h) {
    StructureReport r;
    const Index n = h.num_vertices();

    const auto adj = clique_adjacency(h);
    std::vector<bool> visited(n, false);
    std::deque<Index> queue;
    if (n > 0) {
        queue.push_back(0);
        visited[0] = true;
    }
    Index reached = n > 0 ? 1 : 0;
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
    r.connected = (reached == n);

    r.edge_independent_q1 = true;
    r.edge_independent_q2 = true;
    for (Index v = 0; v < n; ++v) {
        if (r.edge_independent_q1 && !row_constant(h.q1(), v, 1e-9)) {
            r.edge_independent_q1 = false;
        }
        if (r.edge_independent_q2 && !row_constant(h.q2(), v, 1e-9)) {
            r.edge_independent_q2 = false;
        }
    }

    const DegreeProfile p = degree_profile(h);
    r.uniform_degree = true;
    for (Index e = 1; e < h.num_edges(); ++e) {
        if (std::abs(p.delta[e] - p.delta[0]) > 1e-12) {
            r.uniform_degree = false;
            break;
        }
    }
    return r;
}

}  // namespace hgx
