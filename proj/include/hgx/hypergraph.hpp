#pragma once

#include "hgx/rho.hpp"
#include "hgx/types.hpp"

#include <map>
#include <string>
#include <unordered_map>
#include <vector>

namespace hgx {

/// One (vertex, edge) membership with its first-step and second-step weights.
struct Incidence {
    std::string vertex;
    std::string edge;
    double q1 = 1.0;
    double q2 = 1.0;
};

struct BuildOptions {
    /// Fill missing edge weights with default_weight instead of failing.
    bool allow_default_weight = true;
    double default_weight = 1.0;
    /// Explicit vertex order. Must contain every vertex that appears in the
    /// records; extra entries become isolated vertices. Empty = order of
    /// first appearance.
    std::vector<std::string> vertex_order;
};

/// Hypergraph with two weighted incidence matrices Q1 (first walk step) and
/// Q2 (second walk step) sharing one sparsity pattern, positive edge weights
/// and a degree-shaping function rho. Immutable after construction.
class GeneralizedHypergraph {
public:
    Index num_vertices() const { return static_cast<Index>(vertex_ids_.size()); }
    Index num_edges() const { return static_cast<Index>(edge_ids_.size()); }

    const std::vector<std::string>& vertex_ids() const { return vertex_ids_; }
    const std::vector<std::string>& edge_ids() const { return edge_ids_; }

    /// |V| x |E|, entries strictly positive where incident, structural zero
    /// elsewhere; compressed.
    const SpMatrix& q1() const { return q1_; }
    const SpMatrix& q2() const { return q2_; }

    /// Diagonal of W as a vector, one strictly positive weight per edge.
    const Vector& edge_weights() const { return w_; }

    const RhoSpec& rho() const { return rho_; }

    Index vertex_index(const std::string& id) const;
    Index edge_index(const std::string& id) const;
    bool has_vertex(const std::string& id) const { return vertex_lookup_.count(id) > 0; }

    /// Vertices members of edge e (row indices of the nonzeros in column e).
    std::vector<Index> edge_members(Index e) const;

    /// True when the vertex belongs to no hyperedge.
    bool is_isolated(Index v) const;

private:
    friend GeneralizedHypergraph build_hypergraph(const std::vector<Incidence>&,
                                                  const std::map<std::string, double>&,
                                                  const RhoSpec&, const BuildOptions&);

    std::vector<std::string> vertex_ids_;
    std::vector<std::string> edge_ids_;
    std::unordered_map<std::string, Index> vertex_lookup_;
    std::unordered_map<std::string, Index> edge_lookup_;
    SpMatrix q1_;
    SpMatrix q2_;
    Vector w_;
    RhoSpec rho_;
};

/// Validating constructor. Vertex/edge index order is the order of first
/// appearance in the records (or opts.vertex_order when given). Throws
/// ValidationError on duplicate (vertex, edge) pairs, nonpositive q or w,
/// empty edges, or missing weights when defaults are disabled.
GeneralizedHypergraph build_hypergraph(const std::vector<Incidence>& records,
                                       const std::map<std::string, double>& edge_weights = {},
                                       const RhoSpec& rho = {},
                                       const BuildOptions& opts = {});

/// Field-exact comparison: ids, weights, rho and both incidence matrices.
bool operator==(const GeneralizedHypergraph& a, const GeneralizedHypergraph& b);
inline bool operator!=(const GeneralizedHypergraph& a, const GeneralizedHypergraph& b) {
    return !(a == b);
}

/// The four degree vectors of the unified walk:
///   delta(e) = sum_v Q2(v,e)
///   d(v)     = sum_e w(e) delta(e) rho(delta(e)) Q1(v,e)
///   d_hat(v) = sum_e w(e) delta(e) rho(delta(e)) Q2(v,e)
///   d_nl(v)  = sum_e w(e) (delta(e)-Q2(v,e)) rho(delta(e)-Q2(v,e)) Q1(v,e)
/// Singleton edges contribute zero to d_nl (no non-lazy move exists there).
struct DegreeProfile {
    Vector delta;
    Vector d;
    Vector d_hat;
    Vector d_nl;
};

DegreeProfile degree_profile(const GeneralizedHypergraph& h);

struct StructureReport {
    bool connected = false;
    bool edge_independent_q1 = false;
    bool edge_independent_q2 = false;
    bool uniform_degree = false;
};

/// Connectivity is breadth-first traversal of the unweighted clique graph;
/// edge-independence is per-vertex row constancy at relative tolerance 1e-9;
/// uniform_degree requires all delta(e) equal within 1e-12.
StructureReport validate(const GeneralizedHypergraph& h);

}  // namespace hgx
