#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace sarcd {

/// Row-major count x dim training matrix. Stored as float: PCANet histogram
/// counts are small integers and the matrices get large.
struct SvmDataset {
    std::size_t count = 0;
    std::size_t dim = 0;
    std::vector<float> features;
    std::vector<int> labels;  ///< +1 changed, -1 unchanged

    std::span<const float> row(std::size_t i) const { return {features.data() + i * dim, dim}; }
    void add(std::span<const double> x, int label);
};

struct SvmOptions {
    double C = 1.0;
    int epochs = 20;
    std::uint64_t seed = 0;
};

struct SvmModel {
    std::vector<double> weights;
    double bias = 0.0;
    std::vector<double> mean;
    std::vector<double> stdev;  ///< 0 marks a constant (ignored) dimension
    std::vector<double> objective_history;  ///< primal objective after each epoch

    std::size_t dim() const noexcept { return weights.size(); }
    friend bool operator==(const SvmModel&, const SvmModel&) = default;
};

/// Linear SVM, L2-regularized hinge loss, seeded stochastic subgradient descent.
/// Throws DegenerateTrainingError if only one class is present.
SvmModel train_svm(const SvmDataset& data, const SvmOptions& options);

/// Standardizes x with the training statistics.
std::vector<double> standardize(const SvmModel& model, std::span<const double> x);

/// w . x_std + b, with x standardized by the stored statistics.
double decision_value(const SvmModel& model, std::span<const double> x);
double decision_value(const SvmModel& model, std::span<const float> x);

struct Prediction {
    int label;  ///< +1 or -1; a zero decision value maps to -1
    double decision;
};

Prediction predict(const SvmModel& model, std::span<const double> x);

/// (1/2)|w|^2 + (1/2) b^2 + C * sum_i max(0, 1 - y_i (w . x_i + b)).
double svm_objective(const SvmModel& model, const SvmDataset& data, double C);

/// "SARV" | u32 dim | u32 reserved | f32 bias | dim x (f32 weight, f32 mean, f32 stdev),
/// little-endian.
void save_svm_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_svm_model(const std::filesystem::path& path);

}  // namespace sarcd
