#include "hgx/models.hpp"

#include "hgx/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace hgx {

const char* model_variant_name(ModelVariant v) {
    switch (v) {
        case ModelVariant::h_gcn: return "h_gcn";
        case ModelVariant::h_ssgc: return "h_ssgc";
        case ModelVariant::h_appnp: return "h_appnp";
        case ModelVariant::h_chebnet: return "h_chebnet";
        case ModelVariant::h_gcnii: return "h_gcnii";
        case ModelVariant::hgnn_baseline: return "hgnn_baseline";
    }
    return "h_gcn";
}

ModelVariant model_variant_from_name(const std::string& name) {
    if (name == "h_gcn") return ModelVariant::h_gcn;
    if (name == "h_ssgc") return ModelVariant::h_ssgc;
    if (name == "h_appnp") return ModelVariant::h_appnp;
    if (name == "h_chebnet") return ModelVariant::h_chebnet;
    if (name == "h_gcnii") return ModelVariant::h_gcnii;
    if (name == "hgnn_baseline") return ModelVariant::hgnn_baseline;
    throw ValidationError("unknown model variant: " + name);
}

namespace {

Matrix glorot(Index rows, Index cols, SplitMix& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Matrix w(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) w(i, j) = rng.uniform(-limit, limit);
    }
    return w;
}

Matrix relu(const Matrix& x) { return x.cwiseMax(0.0); }

Matrix relu_backward(const Matrix& grad, const Matrix& pre) {
    return (pre.array() > 0.0).select(grad, Matrix::Zero(grad.rows(), grad.cols()));
}

double gcnii_beta(const ModelHyper& hyper, int layer) {
    return hyper.gcnii_beta_decay ? std::log(hyper.beta / static_cast<double>(layer + 1) + 1.0)
                                  : hyper.beta;
}

/// Inverted-dropout masks recorded in application order so the backward pass
/// can replay them. A null rng (or zero rate) records identity markers.
struct DropoutTape {
    double rate = 0.0;
    SplitMix* rng = nullptr;
    std::vector<Matrix> masks;

    Matrix apply(const Matrix& x) {
        if (rng == nullptr || rate <= 0.0) {
            masks.emplace_back();
            return x;
        }
        Matrix mask(x.rows(), x.cols());
        const double keep = 1.0 - rate;
        for (Index i = 0; i < x.rows(); ++i) {
            for (Index j = 0; j < x.cols(); ++j) {
                mask(i, j) = rng->next_double() >= rate ? 1.0 / keep : 0.0;
            }
        }
        masks.push_back(mask);
        return x.cwiseProduct(masks.back());
    }

    Matrix backward(std::size_t index, const Matrix& grad) const {
        if (masks[index].size() == 0) return grad;
        return grad.cwiseProduct(masks[index]);
    }
};

/// dL/dlogits of the masked mean softmax cross-entropy, writing the loss.
Matrix cross_entropy_grad(const Matrix& logits, const std::vector<int>& labels,
                          const std::vector<Index>& mask, double* loss_out) {
    Matrix grad = Matrix::Zero(logits.rows(), logits.cols());
    double loss = 0.0;
    const double inv = 1.0 / static_cast<double>(mask.size());
    for (Index row : mask) {
        if (row < 0 || row >= logits.rows() || labels[row] < 0 ||
            labels[row] >= logits.cols()) {
            throw ValidationError("mask or label out of range at row " + std::to_string(row));
        }
        const Eigen::RowVectorXd z = logits.row(row);
        const double zmax = z.maxCoeff();
        Eigen::RowVectorXd p = (z.array() - zmax).exp();
        p /= p.sum();
        loss -= std::log(std::max(p[labels[row]], 1e-300));
        grad.row(row) = p * inv;
        grad(row, labels[row]) -= inv;
    }
    if (loss_out) *loss_out = loss * inv;
    return grad;
}

struct LossGrads {
    double loss = 0.0;
    std::vector<Matrix> grads;
};

LossGrads gcn_loss_grads(const ModelParams& params, const Matrix& T, const Matrix& X,
                         const std::vector<int>& labels, const std::vector<Index>& mask,
                         DropoutTape& drop) {
    const int layers = static_cast<int>(params.weights.size());
    std::vector<Matrix> dropped(layers), pre(layers);
    Matrix act = X;
    for (int l = 0; l < layers; ++l) {
        dropped[l] = drop.apply(T * act);
        pre[l] = dropped[l] * params.weights[l];
        act = l + 1 < layers ? relu(pre[l]) : pre[l];
    }
    LossGrads out;
    out.grads.resize(layers);
    Matrix grad = cross_entropy_grad(act, labels, mask, &out.loss);
    for (int l = layers - 1; l >= 0; --l) {
        if (l + 1 < layers) grad = relu_backward(grad, pre[l]);
        out.grads[l] = dropped[l].transpose() * grad;
        if (l > 0) {
            grad = drop.backward(l, grad * params.weights[l].transpose());
            grad = T.transpose() * grad;
        }
    }
    return out;
}

Matrix ssgc_features(const ModelHyper& hyper, const Matrix& T, const Matrix& X) {
    const int steps = hyper.diffusion_steps;
    Matrix prop = X;
    Matrix acc = Matrix::Zero(X.rows(), X.cols());
    for (int k = 0; k < steps; ++k) {
        prop = T * prop;
        acc += prop;
    }
    return (1.0 - hyper.alpha) / static_cast<double>(steps) * acc + hyper.alpha * X;
}

LossGrads ssgc_loss_grads(const ModelParams& params, const Matrix& T, const Matrix& X,
                          const std::vector<int>& labels, const std::vector<Index>& mask,
                          DropoutTape& drop) {
    const Matrix dropped = drop.apply(ssgc_features(params.hyper, T, X));
    LossGrads out;
    Matrix grad = cross_entropy_grad(dropped * params.weights[0], labels, mask, &out.loss);
    out.grads.push_back(dropped.transpose() * grad);
    return out;
}

LossGrads appnp_loss_grads(const ModelParams& params, const Matrix& T, const Matrix& X,
                           const std::vector<int>& labels, const std::vector<Index>& mask,
                           DropoutTape& drop) {
    const int layers = static_cast<int>(params.weights.size());
    const double alpha = params.hyper.alpha;
    const int steps = params.hyper.diffusion_steps;

    std::vector<Matrix> dropped(layers), pre(layers);
    Matrix act = X;
    for (int l = 0; l < layers; ++l) {
        dropped[l] = drop.apply(act);
        pre[l] = dropped[l] * params.weights[l];
        act = l + 1 < layers ? relu(pre[l]) : pre[l];
    }
    const Matrix h0 = act;
    Matrix z = h0;
    for (int k = 0; k < steps; ++k) z = (1.0 - alpha) * (T * z) + alpha * h0;

    LossGrads out;
    out.grads.resize(layers);
    Matrix grad = cross_entropy_grad(z, labels, mask, &out.loss);
    Matrix dh0 = Matrix::Zero(grad.rows(), grad.cols());
    for (int k = 0; k < steps; ++k) {
        dh0 += alpha * grad;
        grad = (1.0 - alpha) * (T.transpose() * grad);
    }
    dh0 += grad;
    for (int l = layers - 1; l >= 0; --l) {
        if (l + 1 < layers) dh0 = relu_backward(dh0, pre[l]);
        out.grads[l] = dropped[l].transpose() * dh0;
        if (l > 0) dh0 = drop.backward(l, dh0 * params.weights[l].transpose());
    }
    return out;
}

LossGrads chebnet_loss_grads(const ModelParams& params, const Matrix& T, const Matrix& X,
                             const std::vector<int>& labels, const std::vector<Index>& mask,
                             DropoutTape& drop) {
    const int terms = static_cast<int>(params.weights.size());  // K + 1
    std::vector<Matrix> dropped(terms);
    Matrix power = X;
    Matrix pre = Matrix::Zero(X.rows(), params.weights[0].cols());
    for (int k = 0; k < terms; ++k) {
        if (k > 0) power = T * power;
        dropped[k] = drop.apply(power);
        pre += dropped[k] * params.weights[k];
    }
    LossGrads out;
    out.grads.resize(terms);
    Matrix grad = cross_entropy_grad(relu(pre), labels, mask, &out.loss);
    grad = relu_backward(grad, pre);
    for (int k = 0; k < terms; ++k) out.grads[k] = dropped[k].transpose() * grad;
    return out;
}

LossGrads gcnii_loss_grads(const ModelParams& params, const Matrix& T, const Matrix& X,
                           const std::vector<int>& labels, const std::vector<Index>& mask,
                           DropoutTape& drop) {
    const int depth = static_cast<int>(params.weights.size()) - 2;
    const double alpha = params.hyper.alpha;
    const Matrix& w_in = params.weights.front();
    const Matrix& w_out = params.weights.back();

    const Matrix dropped_in = drop.apply(X);
    const Matrix pre_in = dropped_in * w_in;
    const Matrix z0 = relu(pre_in);

    std::vector<Matrix> dropped(depth), pre(depth);
    Matrix z = z0;
    for (int l = 0; l < depth; ++l) {
        const double beta = gcnii_beta(params.hyper, l);
        const Matrix u = (1.0 - alpha) * (T * z) + alpha * z0;
        dropped[l] = drop.apply(u);
        pre[l] = (1.0 - beta) * dropped[l] + beta * (dropped[l] * params.weights[1 + l]);
        z = relu(pre[l]);
    }
    const Matrix dropped_out = drop.apply(z);
    const Matrix logits = dropped_out * w_out;

    LossGrads out;
    out.grads.resize(params.weights.size());
    Matrix grad = cross_entropy_grad(logits, labels, mask, &out.loss);
    out.grads.back() = dropped_out.transpose() * grad;
    grad = drop.backward(1 + depth, grad * w_out.transpose());

    Matrix dz0 = Matrix::Zero(z0.rows(), z0.cols());
    for (int l = depth - 1; l >= 0; --l) {
        const double beta = gcnii_beta(params.hyper, l);
        grad = relu_backward(grad, pre[l]);
        out.grads[1 + l] = beta * (dropped[l].transpose() * grad);
        Matrix du = (1.0 - beta) * grad + beta * (grad * params.weights[1 + l].transpose());
        du = drop.backward(1 + l, du);
        dz0 += alpha * du;
        grad = (1.0 - alpha) * (T.transpose() * du);
    }
    dz0 += grad;  // at the bottom the propagated path also starts from z0
    dz0 = relu_backward(dz0, pre_in);
    out.grads.front() = dropped_in.transpose() * dz0;
    return out;
}

void check_dimensions(const ModelParams& params, const Matrix& T, const Matrix& X) {
    if (X.rows() != T.rows()) throw ValidationError("feature rows must match the operator size");
    if (params.weights.empty()) throw ValidationError("model has no weights");
    if (X.cols() != params.weights.front().rows()) {
        throw ValidationError("feature dimension does not match the first weight matrix");
    }
    const bool chained = params.variant == ModelVariant::h_gcn ||
                         params.variant == ModelVariant::hgnn_baseline ||
                         params.variant == ModelVariant::h_appnp;
    if (chained) {
        for (std::size_t l = 1; l < params.weights.size(); ++l) {
            if (params.weights[l - 1].cols() != params.weights[l].rows()) {
                throw ValidationError("weight shapes do not chain at layer " +
                                      std::to_string(l));
            }
        }
    }
}

LossGrads loss_and_gradients(const ModelParams& params, const Matrix& T, const Matrix& X,
                             const std::vector<int>& labels, const std::vector<Index>& mask,
                             DropoutTape& drop) {
    check_dimensions(params, T, X);
    switch (params.variant) {
        case ModelVariant::h_gcn:
        case ModelVariant::hgnn_baseline:
            return gcn_loss_grads(params, T, X, labels, mask, drop);
        case ModelVariant::h_ssgc: return ssgc_loss_grads(params, T, X, labels, mask, drop);
        case ModelVariant::h_appnp: return appnp_loss_grads(params, T, X, labels, mask, drop);
        case ModelVariant::h_chebnet:
            return chebnet_loss_grads(params, T, X, labels, mask, drop);
        case ModelVariant::h_gcnii: return gcnii_loss_grads(params, T, X, labels, mask, drop);
    }
    throw ValidationError("unhandled model variant");
}

}  // namespace

ModelParams init_params(ModelVariant variant, const ModelHyper& hyper, int in_dim,
                        int hidden_dim, int out_dim, std::uint64_t seed) {
    ModelParams params;
    params.variant = variant;
    params.hyper = hyper;
    SplitMix rng(seed ^ 0x243f6a8885a308d3ull);

    auto chain = [&](int layers) {
        for (int l = 0; l < layers; ++l) {
            const Index rows = l == 0 ? in_dim : hidden_dim;
            const Index cols = l + 1 == layers ? out_dim : hidden_dim;
            params.weights.push_back(glorot(rows, cols, rng));
        }
    };
    switch (variant) {
        case ModelVariant::h_gcn:
        case ModelVariant::hgnn_baseline:
        case ModelVariant::h_appnp: chain(std::max(1, hyper.num_layers)); break;
        case ModelVariant::h_ssgc: params.weights.push_back(glorot(in_dim, out_dim, rng)); break;
        case ModelVariant::h_chebnet:
            for (int k = 0; k <= hyper.diffusion_steps; ++k) {
                params.weights.push_back(glorot(in_dim, out_dim, rng));
            }
            break;
        case ModelVariant::h_gcnii:
            params.weights.push_back(glorot(in_dim, hidden_dim, rng));
            for (int l = 0; l < hyper.num_layers; ++l) {
                params.weights.push_back(glorot(hidden_dim, hidden_dim, rng));
            }
            params.weights.push_back(glorot(hidden_dim, out_dim, rng));
            break;
    }
    return params;
}

Matrix forward(const ModelParams& params, const Matrix& T, const Matrix& X) {
    if ((T - T.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        throw ValidationError("propagation operator must be symmetric");
    }
    check_dimensions(params, T, X);

    switch (params.variant) {
        case ModelVariant::h_gcn:
        case ModelVariant::hgnn_baseline: {
            Matrix act = X;
            const int layers = static_cast<int>(params.weights.size());
            for (int l = 0; l < layers; ++l) {
                Matrix pre = (T * act) * params.weights[l];
                act = l + 1 < layers ? relu(pre) : std::move(pre);
            }
            return act;
        }
        case ModelVariant::h_ssgc:
            return ssgc_features(params.hyper, T, X) * params.weights[0];
        case ModelVariant::h_appnp: {
            Matrix act = X;
            const int layers = static_cast<int>(params.weights.size());
            for (int l = 0; l < layers; ++l) {
                Matrix pre = act * params.weights[l];
                act = l + 1 < layers ? relu(pre) : std::move(pre);
            }
            Matrix z = act;
            for (int k = 0; k < params.hyper.diffusion_steps; ++k) {
                z = (1.0 - params.hyper.alpha) * (T * z) + params.hyper.alpha * act;
            }
            return z;
        }
        case ModelVariant::h_chebnet: {
            Matrix power = X;
            Matrix pre = Matrix::Zero(X.rows(), params.weights[0].cols());
            for (std::size_t k = 0; k < params.weights.size(); ++k) {
                if (k > 0) power = T * power;
                pre += power * params.weights[k];
            }
            return relu(pre);
        }
        case ModelVariant::h_gcnii: {
            const int depth = static_cast<int>(params.weights.size()) - 2;
            const Matrix z0 = relu(X * params.weights.front());
            Matrix z = z0;
            for (int l = 0; l < depth; ++l) {
                const double beta = gcnii_beta(params.hyper, l);
                const Matrix u = (1.0 - params.hyper.alpha) * (T * z) + params.hyper.alpha * z0;
                z = relu((1.0 - beta) * u + beta * (u * params.weights[1 + l]));
            }
            return z * params.weights.back();
        }
    }
    throw ValidationError("unhandled model variant");
}

double cross_entropy(const Matrix& logits, const std::vector<int>& labels,
                     const std::vector<Index>& mask) {
    if (mask.empty()) throw ValidationError("empty mask");
    double loss = 0.0;
    cross_entropy_grad(logits, labels, mask, &loss);
    return loss;
}

double accuracy(const Matrix& logits, const std::vector<int>& labels,
                const std::vector<Index>& mask) {
    if (mask.empty()) throw ValidationError("empty mask");
    Index correct = 0;
    for (Index row : mask) {
        Index argmax = 0;
        logits.row(row).maxCoeff(&argmax);
        if (static_cast<int>(argmax) == labels[row]) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(mask.size());
}

TrainResult train(ModelVariant variant, const GeneralizedHypergraph& h, const Matrix& X,
                  const std::vector<int>& labels, const SplitMasks& masks,
                  const ModelHyper& hyper, const TrainConfig& config) {
    if (masks.train.empty() || masks.val.empty() || masks.test.empty()) {
        throw ValidationError("every split mask must be nonempty");
    }
    if (!(config.learning_rate > 0.0) || config.weight_decay < 0.0 || config.max_epochs < 1) {
        throw ValidationError("training rates and epoch count must be positive");
    }
    if (config.patience < 0 || config.patience > config.max_epochs) {
        throw ValidationError("patience must lie in [0, max_epochs]");
    }
    if (hyper.dropout_rate < 0.0 || hyper.dropout_rate >= 1.0 || hyper.alpha < 0.0 ||
        hyper.alpha > 1.0) {
        throw ValidationError("dropout_rate must be in [0,1) and alpha in [0,1]");
    }
    std::set<Index> seen;
    for (const auto* mask : {&masks.train, &masks.val, &masks.test}) {
        for (Index v : *mask) {
            if (!seen.insert(v).second) {
                throw ValidationError("split masks overlap at vertex index " + std::to_string(v));
            }
        }
    }
    const int num_classes = *std::max_element(labels.begin(), labels.end()) + 1;
    std::set<int> train_classes;
    for (Index v : masks.train) train_classes.insert(labels[v]);
    if (static_cast<int>(train_classes.size()) < num_classes) {
        throw ValidationError("every class needs at least one training example");
    }

    const Matrix T = hyper.use_renormalization ? renormalized_operator(h) : plain_operator(h);

    ModelParams params = init_params(variant, hyper, static_cast<int>(X.cols()),
                                     config.hidden_dim, num_classes, config.seed);
    SplitMix dropout_rng(config.seed ^ 0x13198a2e03707344ull);

    std::vector<Matrix> adam_m, adam_v;
    for (const auto& w : params.weights) {
        adam_m.push_back(Matrix::Zero(w.rows(), w.cols()));
        adam_v.push_back(Matrix::Zero(w.rows(), w.cols()));
    }

    TrainResult result;
    result.params = params;
    double best_val_loss = std::numeric_limits<double>::infinity();
    int since_best = 0;
    int adam_t = 0;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        DropoutTape drop{hyper.dropout_rate, &dropout_rng, {}};
        LossGrads lg = loss_and_gradients(params, T, X, labels, masks.train, drop);
        if (!std::isfinite(lg.loss)) {
            throw NumericalError("non-finite training loss at epoch " + std::to_string(epoch));
        }

        ++adam_t;
        for (std::size_t i = 0; i < params.weights.size(); ++i) {
            Matrix g = lg.grads[i] + config.weight_decay * params.weights[i];
            if (config.optimizer == TrainConfig::Optimizer::adam) {
                adam_m[i] = 0.9 * adam_m[i] + 0.1 * g;
                adam_v[i] = 0.999 * adam_v[i] + 0.001 * g.cwiseProduct(g);
                const double mc = 1.0 - std::pow(0.9, adam_t);
                const double vc = 1.0 - std::pow(0.999, adam_t);
                params.weights[i] -=
                    (config.learning_rate / mc) *
                    (adam_m[i].array() / ((adam_v[i].array() / vc).sqrt() + 1e-8)).matrix();
            } else {
                params.weights[i] -= config.learning_rate * g;
            }
        }

        const Matrix logits = forward(params, T, X);
        const double val_loss = cross_entropy(logits, labels, masks.val);
        if (!std::isfinite(val_loss)) {
            throw NumericalError("non-finite validation loss at epoch " + std::to_string(epoch));
        }
        result.metrics.train_loss_curve.push_back(lg.loss);
        result.metrics.val_loss_curve.push_back(val_loss);
        result.metrics.epochs_run = epoch;

        if (val_loss < best_val_loss) {
            best_val_loss = val_loss;
            result.params = params;
            result.metrics.best_epoch = epoch;
            since_best = 0;
        } else if (++since_best > config.patience) {
            break;
        }
    }

    const Matrix logits = forward(result.params, T, X);
    result.metrics.train_accuracy = accuracy(logits, labels, masks.train);
    result.metrics.val_accuracy = accuracy(logits, labels, masks.val);
    result.metrics.test_accuracy = accuracy(logits, labels, masks.test);
    return result;
}

double gradient_check(const ModelParams& params, const Matrix& T, const Matrix& X,
                      const std::vector<int>& labels, const std::vector<Index>& mask) {
    if (X.rows() > 20) throw ValidationError("gradient check is limited to 20 vertices");
    DropoutTape no_drop;
    const LossGrads analytic = loss_and_gradients(params, T, X, labels, mask, no_drop);

    constexpr double step = 1e-5;
    double worst = 0.0;
    ModelParams probe = params;
    for (std::size_t i = 0; i < params.weights.size(); ++i) {
        for (Index r = 0; r < params.weights[i].rows(); ++r) {
            for (Index c = 0; c < params.weights[i].cols(); ++c) {
                const double saved = probe.weights[i](r, c);
                probe.weights[i](r, c) = saved + step;
                DropoutTape d1;
                const double plus = loss_and_gradients(probe, T, X, labels, mask, d1).loss;
                probe.weights[i](r, c) = saved - step;
                DropoutTape d2;
                const double minus = loss_and_gradients(probe, T, X, labels, mask, d2).loss;
                probe.weights[i](r, c) = saved;
                const double numeric = (plus - minus) / (2.0 * step);
                const double err = std::abs(analytic.grads[i](r, c) - numeric) /
                                   std::max(1.0, std::abs(numeric));
                worst = std::max(worst, err);
            }
        }
    }
    return worst;
}

Matrix readout_mean_pool(const Matrix& node_embeddings,
                         const std::vector<int>& graph_assignment) {
    if (static_cast<Index>(graph_assignment.size()) != node_embeddings.rows()) {
        throw ValidationError("graph assignment must cover every embedding row");
    }
    const int groups =
        *std::max_element(graph_assignment.begin(), graph_assignment.end()) + 1;
    Matrix sums = Matrix::Zero(groups, node_embeddings.cols());
    std::vector<Index> counts(groups, 0);
    for (Index row = 0; row < node_embeddings.rows(); ++row) {
        const int g = graph_assignment[row];
        if (g < 0) throw ValidationError("negative graph id in assignment");
        sums.row(g) += node_embeddings.row(row);
        ++counts[g];
    }
    for (int g = 0; g < groups; ++g) {
        if (counts[g] == 0) throw ValidationError("graph group " + std::to_string(g) + " is empty");
        sums.row(g) /= static_cast<double>(counts[g]);
    }
    return sums;
}

}  // namespace hgx
