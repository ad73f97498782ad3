#pragma once

#include "hgx/edvw.hpp"
#include "hgx/hypergraph.hpp"
#include "hgx/spectral.hpp"
#include "hgx/walk.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace hgx {

using json = nlohmann::ordered_json;

/// Hypergraph JSON:
///   {"rho":{"kind":"power","sigma":-1.0},
///    "vertices":["a",...],
///    "edges":[{"id":"e1","w":1.0,
///              "members":[{"v":"a","q1":1.0,"q2":1.0},...]},...]}
/// Field order is free on input; unknown fields are rejected. "w" defaults
/// to 1. custom_table rho carries "table":[[degree,value],...].
json hypergraph_to_json(const GeneralizedHypergraph& h);
GeneralizedHypergraph hypergraph_from_json(const json& j);

GeneralizedHypergraph load_hypergraph(const std::string& path);
void save_hypergraph(const GeneralizedHypergraph& h, const std::string& path);

json rho_to_json(const RhoSpec& rho);
RhoSpec rho_from_json(const json& j);

/// Dense: {"rows":r,"cols":c,"data":[[row 0...],...]}.
json matrix_to_json(const Matrix& m);
/// Coordinate list: {"rows":r,"cols":c,"entries":[[i,j,value],...]}.
json matrix_to_sparse_json(const Matrix& m);
Matrix matrix_from_json(const json& j);

json transition_to_json(const TransitionMatrix& tm, const std::vector<std::string>& vertex_ids,
                        bool sparse = false);

/// CSV "id,f1,...,fd"; a non-numeric first line is treated as a header.
FeatureTable load_features_csv(const std::string& path);

/// Raw binary feature block: magic "HGXF", uint32 n, uint32 d (little
/// endian), then n*d little-endian float64 row-major. Ids are row indices.
FeatureTable load_features_binary(const std::string& path);

/// CSV "index,aa_code,x,y,z"; a non-numeric first line is a header.
ProteinChain load_chain_csv(const std::string& path);

struct LabelTable {
    std::vector<std::string> ids;
    std::vector<std::string> labels;
    std::vector<std::string> splits;  // empty when the file has no split column
};

/// CSV with a mandatory "id,label" or "id,label,split" header.
LabelTable load_labels_csv(const std::string& path);

/// "k,l1_error,bound,e,e_low" rows; infinite energies print as "inf".
void write_diffusion_csv(const DiffusionTrace& trace, std::ostream& out);

/// Infinite energies carry {"infinite": true} instead of a float.
json diffusion_trace_to_json(const DiffusionTrace& trace);

/// %.17g, enough digits to round-trip a double through text.
std::string format_double(double value);

}  // namespace hgx
