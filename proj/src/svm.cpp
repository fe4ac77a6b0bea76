#include "sarcd/svm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "binary_io.hpp"
#include "sarcd/errors.hpp"

namespace sarcd {

namespace {

// Pegasos-style update on the equivalent normalized objective
//   (lambda/2) |w~|^2 + (1/n) sum hinge,  lambda = 1 / (C n),
// where w~ = (w, b) carries the bias as a constant-one feature.
struct Trainer {
    const SvmDataset& data;
    const std::vector<double>& mean;
    const std::vector<double>& inv_sd;
    std::vector<double> x;  // standardized scratch row

    void load_row(std::size_t i) {
        const auto r = data.row(i);
        for (std::size_t k = 0; k < data.dim; ++k) x[k] = (static_cast<double>(r[k]) - mean[k]) * inv_sd[k];
    }
};

}  // namespace

void SvmDataset::add(std::span<const double> x, int label) {
    if (count == 0 && dim == 0) dim = x.size();
    if (x.size() != dim) throw ParameterError("SvmDataset: feature dimension mismatch");
    if (label != 1 && label != -1) throw ParameterError("SvmDataset: labels must be +1 or -1");
    for (double v : x) features.push_back(static_cast<float>(v));
    labels.push_back(label);
    ++count;
}

SvmModel train_svm(const SvmDataset& data, const SvmOptions& options) {
    if (data.count < 2) throw ParameterError("train_svm needs at least two samples");
    if (data.features.size() != data.count * data.dim || data.labels.size() != data.count)
        throw ParameterError("train_svm: malformed dataset");
    if (!(options.C > 0.0) || options.epochs < 1) throw ParameterError("train_svm: C and epochs must be positive");
    const auto n_pos = std::count(data.labels.begin(), data.labels.end(), 1);
    if (n_pos == 0 || static_cast<std::size_t>(n_pos) == data.count)
        throw DegenerateTrainingError("train_svm: both classes must be present");

    const std::size_t n = data.count;
    const std::size_t d = data.dim;
    SvmModel model;
    model.mean.assign(d, 0.0);
    model.stdev.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = data.row(i);
        for (std::size_t k = 0; k < d; ++k) model.mean[k] += r[k];
    }
    for (double& m : model.mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto r = data.row(i);
        for (std::size_t k = 0; k < d; ++k) {
            const double dev = r[k] - model.mean[k];
            model.stdev[k] += dev * dev;
        }
    }
    std::vector<double> inv_sd(d, 0.0);
    for (std::size_t k = 0; k < d; ++k) {
        model.stdev[k] = std::sqrt(model.stdev[k] / static_cast<double>(n));
        if (model.stdev[k] <= 1e-12 * std::max(1.0, std::abs(model.mean[k]))) {
            model.stdev[k] = 0.0;
        } else {
            inv_sd[k] = 1.0 / model.stdev[k];
        }
    }

    const double lambda = 1.0 / (options.C * static_cast<double>(n));
    const double radius = 1.0 / std::sqrt(lambda);
    std::vector<double> w(d, 0.0);
    double b = 0.0;
    // w is kept as scale * v so the (1 - eta lambda) shrink is O(1).
    double scale = 1.0;
    std::vector<double> v(d, 0.0);
    double vb = 0.0;

    Trainer trainer{data, model.mean, inv_sd, std::vector<double>(d)};
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(options.seed);
    std::size_t t = 0;

    for (int epoch = 0; epoch < options.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t i : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            trainer.load_row(i);
            double margin = vb;
            for (std::size_t k = 0; k < d; ++k) margin += v[k] * trainer.x[k];
            margin *= scale;
            const double y = data.labels[i];
            const double shrink = 1.0 - eta * lambda;
            if (shrink <= 0.0) {
                std::fill(v.begin(), v.end(), 0.0);
                vb = 0.0;
                scale = 1.0;
            } else {
                scale *= shrink;
            }
            if (y * margin < 1.0) {
                const double step = eta * y / scale;
                for (std::size_t k = 0; k < d; ++k) v[k] += step * trainer.x[k];
                vb += step;
            }
            double norm2 = vb * vb;
            for (double c : v) norm2 += c * c;
            const double norm = std::abs(scale) * std::sqrt(norm2);
            if (norm > radius) scale *= radius / norm;
            if (scale < 1e-100 || scale > 1e100) {
                for (double& c : v) c *= scale;
                vb *= scale;
                scale = 1.0;
            }
        }
        for (std::size_t k = 0; k < d; ++k) w[k] = scale * v[k];
        b = scale * vb;
        model.weights = w;
        model.bias = b;
        model.objective_history.push_back(svm_objective(model, data, options.C));
    }
    return model;
}

std::vector<double> standardize(const SvmModel& model, std::span<const double> x) {
    if (x.size() != model.dim()) throw ParameterError("standardize: dimension mismatch");
    std::vector<double> out(x.size(), 0.0);
    for (std::size_t k = 0; k < x.size(); ++k)
        if (model.stdev[k] > 0.0) out[k] = (x[k] - model.mean[k]) / model.stdev[k];
    return out;
}

namespace {

template <typename T>
double decision_impl(const SvmModel& model, std::span<const T> x) {
    if (x.size() != model.dim())
        throw ParameterError("svm: feature dimension " + std::to_string(x.size()) + " != model dimension " +
                             std::to_string(model.dim()));
    double acc = model.bias;
    for (std::size_t k = 0; k < x.size(); ++k)
        if (model.stdev[k] > 0.0) acc += model.weights[k] * ((static_cast<double>(x[k]) - model.mean[k]) / model.stdev[k]);
    return acc;
}

}  // namespace

double decision_value(const SvmModel& model, std::span<const double> x) { return decision_impl(model, x); }
double decision_value(const SvmModel& model, std::span<const float> x) { return decision_impl(model, x); }

Prediction predict(const SvmModel& model, std::span<const double> x) {
    const double d = decision_value(model, x);
    return {d > 0.0 ? 1 : -1, d};
}

double svm_objective(const SvmModel& model, const SvmDataset& data, double C) {
    double reg = model.bias * model.bias;
    for (double c : model.weights) reg += c * c;
    double hinge = 0.0;
    for (std::size_t i = 0; i < data.count; ++i)
        hinge += std::max(0.0, 1.0 - data.labels[i] * decision_value(model, data.row(i)));
    return 0.5 * reg + C * hinge;
}

void save_svm_model(const SvmModel& model, const std::filesystem::path& path) {
    detail::ByteWriter w;
    w.magic("SARV");
    w.u32(static_cast<std::uint32_t>(model.dim()));
    w.u32(0);
    w.f32(model.bias);
    for (std::size_t k = 0; k < model.dim(); ++k) {
        w.f32(model.weights[k]);
        w.f32(model.mean[k]);
        w.f32(model.stdev[k]);
    }
    w.write(path);
}

SvmModel load_svm_model(const std::filesystem::path& path) {
    detail::ByteReader r(path);
    r.expect_magic("SARV");
    const std::size_t dim = r.u32();
    r.u32();
    SvmModel model;
    model.bias = r.f32();
    for (std::size_t k = 0; k < dim; ++k) {
        model.weights.push_back(r.f32());
        model.mean.push_back(r.f32());
        model.stdev.push_back(r.f32());
    }
    r.expect_end();
    return model;
}

}  // namespace sarcd
