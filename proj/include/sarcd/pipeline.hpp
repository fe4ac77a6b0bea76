#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sarcd/ddi.hpp"
#include "sarcd/metrics.hpp"
#include "sarcd/pcanet.hpp"
#include "sarcd/pfcmc.hpp"
#include "sarcd/raster.hpp"
#include "sarcd/svm.hpp"

namespace sarcd {

struct PipelineConfig {
    int k = 3;
    int T = 9;
    double gamma = 7.0;
    double b = 0.0;
    double delta = 0.12;
    int lambda = 5;
    int L1 = 8;
    int L2 = 8;
    double sample_fraction = 0.2;  ///< S = round(sample_fraction * NM)
    double sample_ratio = 0.5;     ///< changed share of the S samples
    double svm_C = 1.0;
    int svm_epochs = 20;
    double fcm_m = 2.0;
    double fcm_tol = 1e-5;
    int fcm_max_iter = 100;
    GaborBankConfig gabor;
    std::uint64_t seed = 0;

    DdiParams ddi_params() const { return {k, T}; }
    /// Stage seeds are seed + stage index: clustering 1, sampling 2, SVM 3.
    PfcmcConfig pfcmc_config() const;
    /// Throws ParameterError on any out-of-range field.
    void validate() const;
};

enum class PipelineStatus {
    ok,
    clustering_fallback,  ///< pseudo-labels lacked a class; map comes from clustering alone
};

struct ClassifyResult {
    BinaryMap change_map;
    PipelineStatus status = PipelineStatus::ok;
    std::optional<PcanetModel> pcanet;
    std::optional<SvmModel> svm;
    std::size_t predicted = 0;  ///< intermediate pixels labelled by the SVM
    std::size_t predicted_changed = 0;
};

struct PipelineResult {
    BinaryMap change_map;
    DdiStages ddi;
    ThreeWayMap pseudo;
    PipelineStatus status = PipelineStatus::ok;
    std::optional<PcanetModel> pcanet;
    std::optional<SvmModel> svm;
};

DdiStages stage_ddi(const Raster& i1, const Raster& i2, const PipelineConfig& config);
ThreeWayMap stage_cluster(const Raster& ddi, const PipelineConfig& config);
/// Trains PCANet + SVM on the changed/unchanged pseudo-labels and relabels the
/// intermediate pixels; the other pixels keep their pseudo-labels.
ClassifyResult stage_classify(const Raster& i1_pooled, const Raster& i2_pooled, const ThreeWayMap& pseudo,
                              const PipelineConfig& config);

/// Deep difference -> parallel FCM -> PCANet + SVM on the ambiguous pixels.
/// Throws DegenerateInputError when the difference image is constant.
PipelineResult run_pipeline(const Raster& i1, const Raster& i2, const PipelineConfig& config);

/// Reference method: raw log-ratio followed by one two-class FCM on pixel values.
BinaryMap baseline_log_ratio_fcm(const Raster& i1, const Raster& i2, const PipelineConfig& config);

struct SweepRow {
    int T = 0;
    double b = 0.0;
    std::optional<Evaluation> eval;  ///< empty when the cell failed
};

/// One pipeline run per (T, b) cell, sorted by (T, b).
std::vector<SweepRow> sweep(const Raster& i1, const Raster& i2, const BinaryMap& truth, const PipelineConfig& config,
                            std::vector<int> T_list, std::vector<double> b_list);

/// Header "T,b,fp,fn,oe,pcc,kc"; failed cells carry "nan" in every metric column.
std::string sweep_csv(const std::vector<SweepRow>& rows);

}  // namespace sarcd
