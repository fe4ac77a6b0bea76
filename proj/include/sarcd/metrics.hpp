#pragma once

#include <cstdint>
#include <string>

#include "sarcd/raster.hpp"

namespace sarcd {

/// Confusion tallies with "changed" as the positive class.
struct ConfusionCounts {
    std::uint64_t tp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fp = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + tn + fp + fn; }
    std::uint64_t overall_errors() const noexcept { return fp + fn; }
    friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

ConfusionCounts confusion(const BinaryMap& pred, const BinaryMap& truth);

/// (tp + tn) / total
double pcc(const ConfusionCounts& c);

/// Cohen's kappa. PRE = ((tp+fp)(tp+fn) + (fn+tn)(fp+tn)) / total^2,
/// KC = (PCC - PRE) / (1 - PRE). Throws ParameterError when PRE == 1.
double kappa(const ConfusionCounts& c);

/// Nc / Nu over the ground truth. Throws ParameterError when Nu == 0.
double imbalance_ratio(const BinaryMap& truth);

struct Evaluation {
    ConfusionCounts counts;
    double pcc = 0.0;
    double kc = 0.0;
    double ir = 0.0;
};

Evaluation evaluate(const BinaryMap& pred, const BinaryMap& truth);

/// Flat JSON document {"fp", "fn", "oe", "pcc", "kc", "ir"}.
std::string metrics_json(const Evaluation& e);

}  // namespace sarcd
