#include "hgx/edvw.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace hgx {

GeneralizedHypergraph knn_gaussian_hypergraph(const FeatureTable& features, int k, double gamma,
                                              KnnBuildInfo* info) {
    const Index n = static_cast<Index>(features.ids.size());
    if (n != features.features.rows()) {
        throw ValidationError("feature table ids and rows disagree");
    }
    if (!features.features.allFinite()) throw ValidationError("non-finite feature entries");
    if (k < 1) throw ValidationError("k must be at least 1");
    if (!(gamma > 0.0)) throw ValidationError("gamma must be positive");
    if (n < k + 1) {
        throw ValidationError("k-NN hypergraph needs at least k+1 objects, got " +
                              std::to_string(n));
    }

    Matrix dist(n, n);
    double pair_sum = 0.0;
    for (Index i = 0; i < n; ++i) {
        dist(i, i) = 0.0;
        for (Index j = i + 1; j < n; ++j) {
            const double d = (features.features.row(i) - features.features.row(j)).norm();
            dist(i, j) = d;
            dist(j, i) = d;
            pair_sum += d;
        }
    }
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
    const double dbar = pair_sum / pairs;
    const bool degenerate = dbar == 0.0;
    if (info) {
        info->mean_pairwise_distance = dbar;
        info->degenerate_scale = degenerate;
    }

    std::vector<Incidence> records;
    for (Index c = 0; c < n; ++c) {
        std::vector<Index> order(n);
        std::iota(order.begin(), order.end(), 0);
        order.erase(order.begin() + c);
        std::stable_sort(order.begin(), order.end(),
                         [&](Index a, Index b) { return dist(c, a) < dist(c, b); });
        const std::string edge_id =
            (features.modality.empty() ? std::string("knn") : features.modality) + ":" +
            features.ids[c];
        records.push_back({features.ids[c], edge_id, 1.0, 1.0});
        for (int r = 0; r < k; ++r) {
            const Index v = order[r];
            const double q =
                degenerate ? 1.0 : std::exp(-dist(c, v) / (gamma * dbar * dbar));
            records.push_back({features.ids[v], edge_id, q, q});
        }
    }
    BuildOptions opts;
    opts.vertex_order = features.ids;
    return build_hypergraph(records, {}, RhoSpec::power(-1.0), opts);
}

GeneralizedHypergraph concat_modalities(const std::vector<GeneralizedHypergraph>& hs) {
    if (hs.empty()) throw ValidationError("nothing to concatenate");
    if (hs.size() == 1) return hs.front();
    const auto& base = hs.front();
    for (const auto& h : hs) {
        if (h.vertex_ids() != base.vertex_ids()) {
            throw ValidationError("modalities must share an identical vertex id list");
        }
        if (h.rho() != base.rho()) {
            throw ValidationError("modalities must agree on rho");
        }
    }
    std::vector<Incidence> records;
    std::map<std::string, double> weights;
    for (std::size_t m = 0; m < hs.size(); ++m) {
        const auto& h = hs[m];
        const std::string prefix = "m" + std::to_string(m) + ":";
        for (Index e = 0; e < h.num_edges(); ++e) {
            const std::string edge_id = prefix + h.edge_ids()[e];
            weights[edge_id] = h.edge_weights()[e];
            SpMatrix::InnerIterator i1(h.q1(), e), i2(h.q2(), e);
            for (; i1 && i2; ++i1, ++i2) {
                records.push_back(
                    {h.vertex_ids()[i1.row()], edge_id, i1.value(), i2.value()});
            }
        }
    }
    BuildOptions opts;
    opts.vertex_order = base.vertex_ids();
    return build_hypergraph(records, weights, base.rho(), opts);
}

GeneralizedHypergraph protein_hypergraph(const ProteinChain& chain, int tau, double epsilon,
                                         double gamma) {
    const Index s = static_cast<Index>(chain.indices.size());
    if (s != chain.coords.rows() || s != static_cast<Index>(chain.aa_codes.size())) {
        throw ValidationError("protein chain fields disagree in length");
    }
    if (!chain.coords.allFinite()) throw ValidationError("non-finite residue coordinates");
    for (Index i = 1; i < s; ++i) {
        if (chain.indices[i] <= chain.indices[i - 1]) {
            throw ValidationError("residue indices must be strictly increasing");
        }
    }
    if (tau < 1) throw ValidationError("tau must be at least 1");
    if (s < tau) {
        throw ValidationError("chain shorter than the sequence window tau");
    }
    if (!(epsilon > 0.0) || !(gamma > 0.0)) {
        throw ValidationError("epsilon and gamma must be positive");
    }

    std::vector<std::string> vertex_ids(s);
    for (Index i = 0; i < s; ++i) vertex_ids[i] = "r" + std::to_string(chain.indices[i]);

    std::vector<Incidence> records;
    for (Index start = 0; start + tau <= s; ++start) {
        const std::string edge_id = "seq:" + std::to_string(chain.indices[start]);
        for (Index i = start; i < start + tau; ++i) {
            records.push_back({vertex_ids[i], edge_id, 1.0, 1.0});
        }
    }
    for (Index c = 0; c < s; ++c) {
        std::vector<Index> members;
        double dist_sum = 0.0;
        for (Index v = 0; v < s; ++v) {
            if (v == c) continue;
            const double d = (chain.coords.row(v) - chain.coords.row(c)).norm();
            if (d < epsilon) {
                members.push_back(v);
                dist_sum += d;
            }
        }
        if (members.empty()) continue;  // a lone centroid adds no structure
        const double dbar_c = dist_sum / static_cast<double>(members.size());
        const std::string edge_id = "spa:" + std::to_string(chain.indices[c]);
        records.push_back({vertex_ids[c], edge_id, 1.0, 1.0});
        for (Index v : members) {
            const double d = (chain.coords.row(v) - chain.coords.row(c)).norm();
            const double q =
                dbar_c == 0.0 ? 1.0 : std::exp(-d / (gamma * dbar_c * dbar_c));
            records.push_back({vertex_ids[v], edge_id, q, q});
        }
    }
    BuildOptions opts;
    opts.vertex_order = vertex_ids;
    return build_hypergraph(records, {}, RhoSpec::power(-1.0), opts);
}

}  // namespace hgx
