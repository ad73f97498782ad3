// hgx: command-line front end for the hypergraph spectral toolkit.
// Machine-readable payloads go to stdout, diagnostics to stderr.
// Exit codes: 0 success, 1 validation error, 2 numerical failure, 3 I/O error.

#include "hgx/edvw.hpp"
#include "hgx/equiv.hpp"
#include "hgx/io.hpp"
#include "hgx/models.hpp"
#include "hgx/partition.hpp"
#include "hgx/spectral.hpp"
#include "hgx/walk.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <set>

namespace {

using hgx::json;

void emit(const json& payload, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << payload.dump(2) << "\n";
    } else {
        std::ofstream out(out_path);
        if (!out) throw hgx::IoError("cannot write " + out_path);
        out << payload.dump(2) << "\n";
    }
}

json stationary_json(const hgx::GeneralizedHypergraph& h, const hgx::StationaryDistribution& sd) {
    json pi = json::array();
    for (hgx::Index v = 0; v < sd.pi.size(); ++v) pi.push_back(sd.pi[v]);
    json isolated = json::array();
    for (hgx::Index v : sd.isolated) isolated.push_back(h.vertex_ids()[v]);
    return json{{"pi", std::move(pi)},
                {"method",
                 sd.method == hgx::StationaryMethod::closed_form ? "closed_form"
                                                                 : "power_iteration"},
                {"residual", sd.residual},
                {"isolated", std::move(isolated)}};
}

json cut_json(const hgx::CutReport& report) {
    return json{{"subset", report.subset},
                {"vol_s", report.vol_s},
                {"vol_sc", report.vol_sc},
                {"vol_boundary", report.vol_boundary},
                {"objective", report.objective}};
}

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(csv);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct TrainInputs {
    hgx::Matrix features;
    std::vector<int> labels;
    hgx::SplitMasks masks;
    std::vector<std::string> class_names;
};

TrainInputs assemble_training_inputs(const hgx::GeneralizedHypergraph& h,
                                     const hgx::FeatureTable& features,
                                     const hgx::LabelTable& labels, std::uint64_t seed) {
    const hgx::Index n = h.num_vertices();
    TrainInputs inputs;

    std::map<std::string, hgx::Index> feature_row;
    for (std::size_t r = 0; r < features.ids.size(); ++r) {
        feature_row[features.ids[r]] = static_cast<hgx::Index>(r);
    }
    inputs.features.resize(n, features.features.cols());
    for (hgx::Index v = 0; v < n; ++v) {
        auto it = feature_row.find(h.vertex_ids()[v]);
        if (it == feature_row.end()) {
            throw hgx::ValidationError("no feature row for vertex " + h.vertex_ids()[v]);
        }
        inputs.features.row(v) = features.features.row(it->second);
    }

    std::map<std::string, std::pair<std::string, std::string>> by_id;  // id -> (label, split)
    for (std::size_t r = 0; r < labels.ids.size(); ++r) {
        by_id[labels.ids[r]] = {labels.labels[r],
                                labels.splits.empty() ? std::string() : labels.splits[r]};
    }
    std::set<std::string> classes;
    for (hgx::Index v = 0; v < n; ++v) {
        auto it = by_id.find(h.vertex_ids()[v]);
        if (it == by_id.end()) {
            throw hgx::ValidationError("no label for vertex " + h.vertex_ids()[v]);
        }
        classes.insert(it->second.first);
    }
    inputs.class_names.assign(classes.begin(), classes.end());
    std::map<std::string, int> class_index;
    for (std::size_t c = 0; c < inputs.class_names.size(); ++c) {
        class_index[inputs.class_names[c]] = static_cast<int>(c);
    }
    inputs.labels.resize(n);
    for (hgx::Index v = 0; v < n; ++v) {
        inputs.labels[v] = class_index[by_id[h.vertex_ids()[v]].first];
    }

    if (!labels.splits.empty()) {
        for (hgx::Index v = 0; v < n; ++v) {
            const std::string& split = by_id[h.vertex_ids()[v]].second;
            if (split == "train") inputs.masks.train.push_back(v);
            else if (split == "val") inputs.masks.val.push_back(v);
            else if (split == "test") inputs.masks.test.push_back(v);
            else if (split != "none" && !split.empty()) {
                throw hgx::ValidationError("split must be train/val/test/none, got " + split);
            }
        }
        return inputs;
    }

    // No split column: seeded stratified split, 10% train / 10% val / rest test
    // (at least one vertex each per class).
    hgx::SplitMix rng(seed ^ 0xa4093822299f31d0ull);
    std::map<int, std::vector<hgx::Index>> per_class;
    for (hgx::Index v = 0; v < n; ++v) per_class[inputs.labels[v]].push_back(v);
    for (auto& [cls, members] : per_class) {
        for (std::size_t i = members.size(); i > 1; --i) {
            std::swap(members[i - 1], members[rng.uniform_int(0, static_cast<int>(i) - 1)]);
        }
        const std::size_t tenth = std::max<std::size_t>(1, members.size() / 10);
        for (std::size_t i = 0; i < members.size(); ++i) {
            if (i < tenth) inputs.masks.train.push_back(members[i]);
            else if (i < 2 * tenth) inputs.masks.val.push_back(members[i]);
            else inputs.masks.test.push_back(members[i]);
        }
    }
    return inputs;
}

int dispatch(int argc, char** argv) {
    CLI::App app{"hypergraph spectral toolkit"};
    std::string file, out_path, mode = "auto", renorm = "on", source, subset_csv;
    std::string features_path, chain_path, labels_path, variant_name = "h_gcn", curve_path;
    double tol = 1e-9, gamma = 0.25, epsilon = 8.0, alpha = 0.1, beta = 0.5;
    double lr = 0.01, wd = 5e-4, dropout = 0.0;
    int steps = 50, k = 10, tau = 6, layers = 2, hidden = 16, epochs = 300, patience = 100;
    int diffusion_steps = 10;
    std::uint64_t seed = 0;
    bool force = false, sparse = false, power_pi = false, strip_loops = false;

    auto* build = app.add_subcommand("build", "parse, validate and canonicalize a hypergraph");
    build->add_option("file", file)->required();
    build->add_option("-o,--out", out_path);

    auto* validate_cmd = app.add_subcommand("validate", "structural report");
    validate_cmd->add_option("file", file)->required();

    auto* stationary_cmd = app.add_subcommand("stationary", "stationary distribution");
    stationary_cmd->add_option("file", file)->required();
    stationary_cmd->add_option("--mode", mode)->check(CLI::IsMember({"auto", "closed", "power"}));
    double st_tol = 1e-12;
    int max_iters = 100000;
    stationary_cmd->add_option("--tol", st_tol);
    stationary_cmd->add_option("--max-iters", max_iters);

    auto* check_cmd = app.add_subcommand("check-equiv", "equivalence condition report");
    check_cmd->add_option("file", file)->required();
    check_cmd->add_option("--tol", tol);

    auto* clique_cmd = app.add_subcommand("clique", "equivalent weighted clique graph");
    clique_cmd->add_option("file", file)->required();
    clique_cmd->add_flag("--sparse", sparse);
    clique_cmd->add_flag("--strip-loops", strip_loops,
                         "zero the self-loop weights in the output (display only)");

    auto* lap_cmd = app.add_subcommand("laplacian", "unified Laplacian or renormalized operator");
    lap_cmd->add_option("file", file)->required();
    lap_cmd->add_option("--renorm", renorm)->check(CLI::IsMember({"on", "off"}));
    lap_cmd->add_flag("--force", force, "build L even when no equivalence condition holds");
    lap_cmd->add_flag("--sparse", sparse);

    auto* spec_cmd = app.add_subcommand("spectrum", "eigenvalues of the unified Laplacian");
    spec_cmd->add_option("file", file)->required();
    spec_cmd->add_flag("--force", force);

    auto* diffuse_cmd = app.add_subcommand("diffuse", "diffusion trace as CSV");
    diffuse_cmd->add_option("file", file)->required();
    diffuse_cmd->add_option("--source", source)->required();
    diffuse_cmd->add_option("--steps", steps);

    auto* knn_cmd = app.add_subcommand("knn-build", "k-NN Gaussian EDVW hypergraph");
    knn_cmd->add_option("--features", features_path)->required();
    knn_cmd->add_option("--k", k)->required();
    knn_cmd->add_option("--gamma", gamma)->required();
    knn_cmd->add_option("-o,--out", out_path);

    auto* protein_cmd = app.add_subcommand("protein-build", "protein sequence+spatial hypergraph");
    protein_cmd->add_option("--chain", chain_path)->required();
    protein_cmd->add_option("--tau", tau);
    protein_cmd->add_option("--epsilon", epsilon);
    protein_cmd->add_option("--gamma", gamma);
    protein_cmd->add_option("-o,--out", out_path);

    auto* train_cmd = app.add_subcommand("train", "train an H-GNN variant");
    train_cmd->add_option("file", file)->required();
    train_cmd->add_option("--features", features_path)->required();
    train_cmd->add_option("--labels", labels_path)->required();
    train_cmd->add_option("--variant", variant_name);
    train_cmd->add_option("--layers", layers);
    train_cmd->add_option("--steps", diffusion_steps, "diffusion steps / polynomial order");
    train_cmd->add_option("--alpha", alpha);
    train_cmd->add_option("--beta", beta);
    train_cmd->add_option("--lr", lr);
    train_cmd->add_option("--wd", wd);
    train_cmd->add_option("--dropout", dropout);
    train_cmd->add_option("--hidden", hidden);
    train_cmd->add_option("--epochs", epochs);
    train_cmd->add_option("--patience", patience);
    train_cmd->add_option("--seed", seed);
    auto* renorm_opt = train_cmd->add_option("--renorm", renorm,
                                             "defaults to on, except for hgnn_baseline");
    renorm_opt->check(CLI::IsMember({"on", "off"}));
    train_cmd->add_option("--curve", curve_path, "write the loss curve CSV here");

    auto* cut_cmd = app.add_subcommand("cut", "normalized-cut objective of a subset");
    cut_cmd->add_option("file", file)->required();
    cut_cmd->add_option("--subset", subset_csv)->required();
    cut_cmd->add_flag("--power-pi", power_pi, "allow power-iteration pi outside the conditions");

    auto* sweep_cmd = app.add_subcommand("cut-sweep", "spectral sweep over prefix cuts");
    sweep_cmd->add_option("file", file)->required();

    auto* oracle_cmd = app.add_subcommand("oracle-compare",
                                          "transition matrix vs two-step oracle");
    oracle_cmd->add_option("file", file)->required();

    app.require_subcommand(1);
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;  // help exits 0, any parse failure exits 1
    }

    if (build->parsed()) {
        emit(hgx::hypergraph_to_json(hgx::load_hypergraph(file)), out_path);
    } else if (validate_cmd->parsed()) {
        const hgx::StructureReport r = hgx::validate(hgx::load_hypergraph(file));
        emit(json{{"connected", r.connected},
                  {"edge_independent_q1", r.edge_independent_q1},
                  {"edge_independent_q2", r.edge_independent_q2},
                  {"uniform_degree", r.uniform_degree}},
             "");
    } else if (stationary_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        const auto sd = hgx::stationary_distribution(
            h,
            mode == "auto"     ? hgx::StationaryMode::auto_select
            : mode == "closed" ? hgx::StationaryMode::closed
                               : hgx::StationaryMode::power,
            {.tol = st_tol, .max_iters = max_iters});
        emit(stationary_json(h, sd), "");
    } else if (check_cmd->parsed()) {
        const auto r = hgx::check_equivalence_conditions(hgx::load_hypergraph(file), tol);
        emit(json{{"condition1", r.condition1},
                  {"condition2", json{{"holds", r.condition2.holds}, {"k", r.condition2.k}}},
                  {"general_equation_holds", r.general_equation_holds},
                  {"tolerance", r.tolerance}},
             "");
    } else if (clique_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        hgx::CliqueGraph g = hgx::clique_graph(h);
        if (strip_loops) g.weights.diagonal().setZero();
        json j = sparse ? hgx::matrix_to_sparse_json(g.weights) : hgx::matrix_to_json(g.weights);
        j["vertices"] = g.vertex_ids;
        emit(j, "");
    } else if (lap_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        json j;
        if (renorm == "on") {
            j = sparse ? hgx::matrix_to_sparse_json(hgx::renormalized_operator(h))
                       : hgx::matrix_to_json(hgx::renormalized_operator(h));
            j["operator"] = "renormalized";
        } else {
            if (force) {
                const auto cond = hgx::check_equivalence_conditions(h);
                if (!cond.condition1 && !cond.condition2.holds) {
                    std::cerr << "warning: no equivalence condition holds; L lacks its "
                                 "random-walk interpretation\n";
                }
            }
            const auto bundle = hgx::unified_laplacian(h, !force);
            j = sparse ? hgx::matrix_to_sparse_json(bundle.L) : hgx::matrix_to_json(bundle.L);
            j["operator"] = "laplacian";
        }
        j["vertices"] = h.vertex_ids();
        emit(j, "");
    } else if (spec_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        const auto bundle = hgx::unified_laplacian(h, !force);
        const auto r = hgx::spectrum(bundle.L);
        json eigenvalues = json::array(), u1 = json::array();
        for (hgx::Index i = 0; i < r.eigenvalues.size(); ++i) eigenvalues.push_back(r.eigenvalues[i]);
        for (hgx::Index i = 0; i < r.u1.size(); ++i) u1.push_back(r.u1[i]);
        emit(json{{"eigenvalues", std::move(eigenvalues)},
                  {"lambda_min", r.lambda_min},
                  {"lambda_h", r.lambda_h},
                  {"lambda_max", r.lambda_max},
                  {"u1", std::move(u1)}},
             "");
    } else if (diffuse_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        hgx::write_diffusion_csv(hgx::diffusion_trace(h, source, steps), std::cout);
    } else if (knn_cmd->parsed()) {
        const hgx::FeatureTable table = features_path.ends_with(".bin")
                                            ? hgx::load_features_binary(features_path)
                                            : hgx::load_features_csv(features_path);
        hgx::KnnBuildInfo info;
        const auto h = hgx::knn_gaussian_hypergraph(table, k, gamma, &info);
        std::cerr << "mean pairwise feature distance: "
                  << hgx::format_double(info.mean_pairwise_distance)
                  << (info.degenerate_scale ? " (degenerate, all weights 1)" : "") << "\n";
        emit(hgx::hypergraph_to_json(h), out_path);
    } else if (protein_cmd->parsed()) {
        const auto chain = hgx::load_chain_csv(chain_path);
        emit(hgx::hypergraph_to_json(hgx::protein_hypergraph(chain, tau, epsilon, gamma)),
             out_path);
    } else if (train_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        const hgx::FeatureTable table = features_path.ends_with(".bin")
                                            ? hgx::load_features_binary(features_path)
                                            : hgx::load_features_csv(features_path);
        const auto labels = hgx::load_labels_csv(labels_path);
        const TrainInputs inputs = assemble_training_inputs(h, table, labels, seed);
        const auto variant = hgx::model_variant_from_name(variant_name);
        hgx::ModelHyper hyper;
        hyper.num_layers = layers;
        hyper.diffusion_steps = diffusion_steps;
        hyper.alpha = alpha;
        hyper.beta = beta;
        hyper.dropout_rate = dropout;
        if (renorm_opt->count() == 0) {
            hyper.use_renormalization = variant != hgx::ModelVariant::hgnn_baseline;
        } else {
            hyper.use_renormalization = renorm == "on";
        }
        hgx::TrainConfig config;
        config.learning_rate = lr;
        config.weight_decay = wd;
        config.max_epochs = epochs;
        config.patience = patience;
        config.seed = seed;
        config.hidden_dim = hidden;
        const auto result =
            hgx::train(variant, h, inputs.features, inputs.labels, inputs.masks, hyper, config);
        if (!curve_path.empty()) {
            std::ofstream curve(curve_path);
            if (!curve) throw hgx::IoError("cannot write " + curve_path);
            curve << "epoch,train_loss,val_loss\n";
            for (std::size_t e = 0; e < result.metrics.train_loss_curve.size(); ++e) {
                curve << (e + 1) << ',' << hgx::format_double(result.metrics.train_loss_curve[e])
                      << ',' << hgx::format_double(result.metrics.val_loss_curve[e]) << '\n';
            }
        }
        emit(json{{"variant", variant_name},
                  {"train_accuracy", result.metrics.train_accuracy},
                  {"val_accuracy", result.metrics.val_accuracy},
                  {"test_accuracy", result.metrics.test_accuracy},
                  {"best_epoch", result.metrics.best_epoch},
                  {"epochs_run", result.metrics.epochs_run},
                  {"classes", inputs.class_names}},
             "");
    } else if (cut_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        emit(cut_json(hgx::cut_objective(h, split_list(subset_csv), power_pi)), "");
    } else if (sweep_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        const hgx::SweepResult result = hgx::cut_sweep(h);
        json objectives = json::array();
        for (const auto& report : result.prefix_cuts) objectives.push_back(report.objective);
        emit(json{{"best", cut_json(result.best)}, {"prefix_objectives", std::move(objectives)}},
             "");
    } else if (oracle_cmd->parsed()) {
        const auto h = hgx::load_hypergraph(file);
        const hgx::Matrix p = hgx::transition_matrix(h).P;
        const hgx::Matrix oracle = hgx::two_step_oracle_matrix(h);
        emit(json{{"max_abs_diff", (p - oracle).cwiseAbs().maxCoeff()}}, "");
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const hgx::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const hgx::NumericalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const hgx::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
