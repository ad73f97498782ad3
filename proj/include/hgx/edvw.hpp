#pragma once

#include "hgx/hypergraph.hpp"

#include <string>
#include <vector>

namespace hgx {

/// Precomputed feature vectors for a set of objects, one row per object.
struct FeatureTable {
    std::vector<std::string> ids;
    Matrix features;
    std::string modality;  // optional label, carried into edge id prefixes
};

/// Residue chain: strictly increasing sequence indices, one-letter (or any)
/// type codes and 3D coordinates in Angstrom.
struct ProteinChain {
    std::vector<int> indices;
    std::vector<std::string> aa_codes;
    Matrix coords;  // |S| x 3
};

/// One hyperedge per centroid over its k nearest neighbors (the centroid
/// included), weighted Q(v,e) = exp(-d(v,vc) / (gamma * dbar^2)) with dbar
/// the mean pairwise feature distance. Q1 = Q2, so the result satisfies
/// equivalence condition (2) with k = 1. Distance ties break toward the
/// lower object index. When all features coincide (dbar = 0) every weight
/// degenerates to 1; `degenerate_scale` reports that.
struct KnnBuildInfo {
    double mean_pairwise_distance = 0.0;
    bool degenerate_scale = false;
};

GeneralizedHypergraph knn_gaussian_hypergraph(const FeatureTable& features, int k, double gamma,
                                              KnnBuildInfo* info = nullptr);

/// Disjoint union of the edge sets over an identical vertex list; edge ids
/// get a per-modality prefix. All inputs must agree on rho.
GeneralizedHypergraph concat_modalities(const std::vector<GeneralizedHypergraph>& hs);

/// Sequence hyperedges over every window of tau consecutive residues (Q = 1)
/// plus one spatial hyperedge per residue over the residues strictly within
/// epsilon, weighted exp(-d(v,vc) / (gamma * dbar_c^2)) with dbar_c the mean
/// distance from the centroid to the other members. Spatial hyperedges with
/// no member besides the centroid are dropped. Q1 = Q2.
GeneralizedHypergraph protein_hypergraph(const ProteinChain& chain, int tau = 6,
                                         double epsilon = 8.0, double gamma = 0.25);

}  // namespace hgx
