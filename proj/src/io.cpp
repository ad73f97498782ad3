#include "hgx/io.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <ostream>
#include <sstream>

namespace hgx {

namespace {

void expect_fields(const json& j, std::initializer_list<const char*> allowed,
                   const std::string& where) {
    if (!j.is_object()) throw IoError(where + " must be a JSON object");
    for (const auto& [key, unused] : j.items()) {
        bool known = false;
        for (const char* name : allowed) {
            if (key == name) {
                known = true;
                break;
            }
        }
        if (!known) throw IoError("unknown field \"" + key + "\" in " + where);
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

bool parse_double(const std::string& s, double* out) {
    try {
        std::size_t pos = 0;
        *out = std::stod(s, &pos);
        return pos == s.size();
    } catch (const std::exception&) {
        return false;
    }
}

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

json rho_to_json(const RhoSpec& rho) {
    json j;
    j["kind"] = rho_kind_name(rho.kind);
    if (rho.kind == RhoKind::power) j["sigma"] = rho.sigma;
    if (rho.kind == RhoKind::custom_table) {
        json table = json::array();
        for (const auto& [key, value] : rho.table) table.push_back({key, value});
        j["table"] = table;
    }
    return j;
}

RhoSpec rho_from_json(const json& j) {
    RhoSpec rho;
    if (!j.contains("kind")) throw IoError("rho object needs a \"kind\" field");
    rho.kind = rho_kind_from_name(j.at("kind").get<std::string>());
    if (rho.kind == RhoKind::power) {
        expect_fields(j, {"kind", "sigma"}, "rho");
        rho.sigma = j.at("sigma").get<double>();
    } else if (rho.kind == RhoKind::custom_table) {
        expect_fields(j, {"kind", "table"}, "rho");
        for (const auto& entry : j.at("table")) {
            if (!entry.is_array() || entry.size() != 2) {
                throw IoError("rho table entries must be [degree, value] pairs");
            }
            rho.table.emplace_back(entry[0].get<double>(), entry[1].get<double>());
        }
    } else {
        expect_fields(j, {"kind"}, "rho");
    }
    return rho;
}

json hypergraph_to_json(const GeneralizedHypergraph& h) {
    json j;
    j["rho"] = rho_to_json(h.rho());
    j["vertices"] = h.vertex_ids();
    json edges = json::array();
    for (Index e = 0; e < h.num_edges(); ++e) {
        json edge;
        edge["id"] = h.edge_ids()[e];
        edge["w"] = h.edge_weights()[e];
        json members = json::array();
        SpMatrix::InnerIterator i1(h.q1(), e), i2(h.q2(), e);
        for (; i1 && i2; ++i1, ++i2) {
            members.push_back({{"v", h.vertex_ids()[i1.row()]},
                               {"q1", i1.value()},
                               {"q2", i2.value()}});
        }
        edge["members"] = std::move(members);
        edges.push_back(std::move(edge));
    }
    j["edges"] = std::move(edges);
    return j;
}

GeneralizedHypergraph hypergraph_from_json(const json& j) {
    expect_fields(j, {"rho", "vertices", "edges"}, "hypergraph");
    if (!j.contains("vertices") || !j.contains("edges")) {
        throw IoError("hypergraph needs \"vertices\" and \"edges\" fields");
    }
    try {
        const RhoSpec rho = j.contains("rho") ? rho_from_json(j.at("rho")) : RhoSpec{};

        BuildOptions opts;
        for (const auto& v : j.at("vertices")) opts.vertex_order.push_back(v.get<std::string>());

        std::vector<Incidence> records;
        std::map<std::string, double> weights;
        for (const auto& edge : j.at("edges")) {
            expect_fields(edge, {"id", "w", "members"}, "edge");
            const std::string id = edge.at("id").get<std::string>();
            weights[id] = edge.value("w", 1.0);
            if (!edge.contains("members") || edge.at("members").empty()) {
                throw IoError("edge " + id + " has no members");
            }
            for (const auto& member : edge.at("members")) {
                expect_fields(member, {"v", "q1", "q2"}, "edge member");
                records.push_back({member.at("v").get<std::string>(), id,
                                   member.at("q1").get<double>(),
                                   member.at("q2").get<double>()});
            }
        }
        return build_hypergraph(records, weights, rho, opts);
    } catch (const json::exception& e) {
        throw IoError(std::string("bad hypergraph JSON: ") + e.what());
    }
}

GeneralizedHypergraph load_hypergraph(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw IoError("malformed JSON in " + path + ": " + e.what());
    }
    return hypergraph_from_json(j);
}

void save_hypergraph(const GeneralizedHypergraph& h, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    out << hypergraph_to_json(h).dump(2) << "\n";
}

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

json matrix_to_sparse_json(const Matrix& m) {
    json entries = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        for (Index j = 0; j < m.cols(); ++j) {
            if (m(i, j) != 0.0) entries.push_back({i, j, m(i, j)});
        }
    }
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", std::move(entries)}};
}

Matrix matrix_from_json(const json& j) {
    const Index rows = j.at("rows").get<Index>();
    const Index cols = j.at("cols").get<Index>();
    Matrix m = Matrix::Zero(rows, cols);
    if (j.contains("data")) {
        const auto& data = j.at("data");
        for (Index i = 0; i < rows; ++i) {
            for (Index c = 0; c < cols; ++c) m(i, c) = data.at(i).at(c).get<double>();
        }
    } else if (j.contains("entries")) {
        for (const auto& entry : j.at("entries")) {
            m(entry.at(0).get<Index>(), entry.at(1).get<Index>()) = entry.at(2).get<double>();
        }
    } else {
        throw IoError("matrix JSON needs \"data\" or \"entries\"");
    }
    return m;
}

json transition_to_json(const TransitionMatrix& tm, const std::vector<std::string>& vertex_ids,
                        bool sparse) {
    json j = sparse ? matrix_to_sparse_json(tm.P) : matrix_to_json(tm.P);
    switch (tm.kind) {
        case WalkKind::lazy: j["kind"] = "lazy"; break;
        case WalkKind::non_lazy: j["kind"] = "non_lazy"; break;
        case WalkKind::clique_walk: j["kind"] = "clique_walk"; break;
    }
    j["vertices"] = vertex_ids;
    json isolated = json::array();
    for (Index v : tm.isolated) isolated.push_back(vertex_ids[v]);
    j["isolated"] = std::move(isolated);
    return j;
}

FeatureTable load_features_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw IoError("empty feature file " + path);
    FeatureTable table;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() < 2) throw IoError("feature row needs an id and at least one value");
        std::vector<double> values(fields.size() - 1);
        bool ok = true;
        for (std::size_t c = 1; c < fields.size(); ++c) {
            if (!parse_double(fields[c], &values[c - 1])) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            if (i == 0) continue;  // header line
            throw IoError("non-numeric feature value on line " + std::to_string(i + 1));
        }
        table.ids.push_back(fields[0]);
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw IoError("no feature rows in " + path);
    table.features.resize(static_cast<Index>(rows.size()), static_cast<Index>(rows[0].size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != rows[0].size()) {
            throw IoError("inconsistent feature dimension at row " + std::to_string(r + 1));
        }
        for (std::size_t c = 0; c < rows[r].size(); ++c) {
            table.features(static_cast<Index>(r), static_cast<Index>(c)) = rows[r][c];
        }
    }
    return table;
}

FeatureTable load_features_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "HGXF", 4) != 0) {
        throw IoError(path + " is not an HGXF feature block");
    }
    std::uint32_t n = 0, d = 0;
    in.read(reinterpret_cast<char*>(&n), 4);
    in.read(reinterpret_cast<char*>(&d), 4);
    if (!in || n == 0 || d == 0) throw IoError("bad HGXF dimensions in " + path);
    FeatureTable table;
    table.features.resize(n, d);
    std::vector<double> buffer(static_cast<std::size_t>(n) * d);
    in.read(reinterpret_cast<char*>(buffer.data()),
            static_cast<std::streamsize>(buffer.size() * sizeof(double)));
    if (!in) throw IoError("truncated HGXF block in " + path);
    for (std::uint32_t r = 0; r < n; ++r) {
        table.ids.push_back(std::to_string(r));
        for (std::uint32_t c = 0; c < d; ++c) {
            table.features(r, c) = buffer[static_cast<std::size_t>(r) * d + c];
        }
    }
    return table;
}

ProteinChain load_chain_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw IoError("empty chain file " + path);
    ProteinChain chain;
    std::vector<std::array<double, 3>> coords;
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != 5) {
            throw IoError("chain rows are index,aa_code,x,y,z (line " + std::to_string(i + 1) +
                          ")");
        }
        double index_value = 0.0;
        std::array<double, 3> xyz{};
        if (!parse_double(fields[0], &index_value) || !parse_double(fields[2], &xyz[0]) ||
            !parse_double(fields[3], &xyz[1]) || !parse_double(fields[4], &xyz[2])) {
            if (i == 0) continue;  // header line
            throw IoError("non-numeric chain value on line " + std::to_string(i + 1));
        }
        chain.indices.push_back(static_cast<int>(index_value));
        chain.aa_codes.push_back(fields[1]);
        coords.push_back(xyz);
    }
    if (coords.empty()) throw IoError("no residues in " + path);
    chain.coords.resize(static_cast<Index>(coords.size()), 3);
    for (std::size_t r = 0; r < coords.size(); ++r) {
        for (int c = 0; c < 3; ++c) chain.coords(static_cast<Index>(r), c) = coords[r][c];
    }
    return chain;
}

LabelTable load_labels_csv(const std::string& path) {
    const auto lines = read_lines(path);
    if (lines.empty()) throw IoError("empty label file " + path);
    const auto header = split_csv_line(lines[0]);
    const bool has_split = header.size() == 3 && header[2] == "split";
    if (!((header.size() == 2 || has_split) && header[0] == "id" && header[1] == "label")) {
        throw IoError("label files start with an \"id,label\" or \"id,label,split\" header");
    }
    LabelTable table;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto fields = split_csv_line(lines[i]);
        if (fields.size() != header.size()) {
            throw IoError("label row width mismatch on line " + std::to_string(i + 1));
        }
        table.ids.push_back(fields[0]);
        table.labels.push_back(fields[1]);
        if (has_split) table.splits.push_back(fields[2]);
    }
    return table;
}

json diffusion_trace_to_json(const DiffusionTrace& trace) {
    json steps = json::array();
    for (const auto& step : trace.steps) {
        json e = step.energy_infinite ? json{{"infinite", true}} : json(step.energy);
        json e_low = std::isinf(step.energy_lower_bound)
                         ? json{{"infinite", true}}
                         : json(step.energy_lower_bound);
        steps.push_back({{"k", step.k},
                         {"l1_error", step.l1_error},
                         {"bound", step.bound},
                         {"e", std::move(e)},
                         {"e_low", std::move(e_low)}});
    }
    return json{{"lambda_h", trace.lambda_h}, {"source", trace.source}, {"steps", std::move(steps)}};
}

void write_diffusion_csv(const DiffusionTrace& trace, std::ostream& out) {
    out << "k,l1_error,bound,e,e_low\n";
    for (const auto& step : trace.steps) {
        out << step.k << ',' << format_double(step.l1_error) << ',' << format_double(step.bound)
            << ',' << (step.energy_infinite ? "inf" : format_double(step.energy)) << ','
            << (std::isinf(step.energy_lower_bound) ? "inf"
                                                    : format_double(step.energy_lower_bound))
            << '\n';
    }
}

}  // namespace hgx
