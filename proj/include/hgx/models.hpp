#pragma once

#include "hgx/hypergraph.hpp"

#include <vector>

namespace hgx {

enum class ModelVariant { h_gcn, h_ssgc, h_appnp, h_chebnet, h_gcnii, hgnn_baseline };

const char* model_variant_name(ModelVariant v);
ModelVariant model_variant_from_name(const std::string& name);

struct ModelHyper {
    int num_layers = 2;       // weight layers (H-GCN/HGNN/APPNP-MLP) or GCNII depth
    int diffusion_steps = 10; // K: propagation steps for H-SSGC/H-APPNP, order for H-ChebNet
    double alpha = 0.1;       // restart weight (H-APPNP, H-SSGC, H-GCNII)
    double beta = 0.5;        // GCNII identity-map strength, fixed per layer
    bool gcnii_beta_decay = false;  // use beta_l = log(beta/(l+1) + 1) instead of fixed beta
    double dropout_rate = 0.0;
    // T_tilde when on, Dhat^{-1/2} K Dhat^{-1/2} when off. The hgnn_baseline
    // variant is meant to run with this off; the flag stays caller-controlled
    // so the renormalized counterpart can be compared directly.
    bool use_renormalization = true;
};

/// Weight matrices in application order. Shapes per variant (F features,
/// H hidden, C classes, L = num_layers, K = diffusion_steps):
///   h_gcn / hgnn_baseline: L matrices chaining F -> H -> ... -> C
///   h_ssgc:                one F x C matrix
///   h_appnp:               L-matrix MLP chaining F -> H -> ... -> C
///   h_chebnet:             K+1 matrices, each F x C
///   h_gcnii:               F x H, then L of H x H, then H x C
struct ModelParams {
    ModelVariant variant = ModelVariant::h_gcn;
    ModelHyper hyper;
    std::vector<Matrix> weights;
};

struct TrainConfig {
    double learning_rate = 0.01;
    double weight_decay = 5e-4;
    int max_epochs = 300;
    int patience = 100;  // early stopping on validation loss
    std::uint64_t seed = 0;
    enum class Optimizer { adam, sgd } optimizer = Optimizer::adam;
    int hidden_dim = 16;
};

struct SplitMasks {
    std::vector<Index> train;
    std::vector<Index> val;
    std::vector<Index> test;
};

/// Glorot-uniform weights from a seeded stream.
ModelParams init_params(ModelVariant variant, const ModelHyper& hyper, int in_dim,
                        int hidden_dim, int out_dim, std::uint64_t seed);

/// Deterministic inference pass; dropout disabled, softmax left to the loss.
Matrix forward(const ModelParams& params, const Matrix& T, const Matrix& X);

/// Mean cross-entropy of row-wise softmax over the masked rows.
double cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                     const std::vector<Index>& mask);

double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<Index>& mask);

struct TrainMetrics {
    double train_accuracy = 0.0;
    double val_accuracy = 0.0;
    double test_accuracy = 0.0;
    std::vector<double> train_loss_curve;
    std::vector<double> val_loss_curve;
    int best_epoch = 0;
    int epochs_run = 0;
};

struct TrainResult {
    ModelParams params;  // best-validation-loss weights
    TrainMetrics metrics;
};

/// Full-batch training with manual gradients, Adam or SGD, and early
/// stopping on validation loss. Bit-reproducible for a fixed seed.
TrainResult train(ModelVariant variant, const GeneralizedHypergraph& h, const Matrix& X,
                  const std::vector<int>& labels, const SplitMasks& masks,
                  const ModelHyper& hyper, const TrainConfig& config);

/// Central finite differences (step 1e-5) against the manual gradients on
/// every weight entry; returns max |analytic - numeric| / max(1, |numeric|).
/// Small instances only (|V| <= 20); dropout is disabled.
double gradient_check(const ModelParams& params, const Matrix& T, const Matrix& X,
                      const std::vector<int>& labels, const std::vector<Index>& mask);

/// Arithmetic mean of member rows per graph id. Every graph id in
/// 0..max(assignment) must own at least one row.
Matrix readout_mean_pool(const Matrix& node_embeddings, const std::vector<int>& graph_assignment);

}  // namespace hgx
