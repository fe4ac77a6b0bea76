#include "sarcd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <unordered_map>

#include "sarcd/errors.hpp"
#include "sarcd/parallel.hpp"

namespace sarcd {

namespace {

constexpr std::uint64_t kClusterStage = 1;
constexpr std::uint64_t kSampleStage = 2;
constexpr std::uint64_t kSvmStage = 3;

void require(bool ok, const char* message) {
    if (!ok) throw ParameterError(message);
}

std::string format_number(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

PfcmcConfig PipelineConfig::pfcmc_config() const {
    PfcmcConfig c;
    c.gamma = gamma;
    c.b = b;
    c.delta = delta;
    c.gabor = gabor;
    c.fcm_m = fcm_m;
    c.fcm_tol = fcm_tol;
    c.fcm_max_iter = fcm_max_iter;
    c.seed = seed + kClusterStage;
    return c;
}

void PipelineConfig::validate() const {
    require(k >= 1 && k % 2 == 1, "k must be odd and positive");
    require(T >= 1, "T must be >= 1");
    require(gamma > 0.0, "gamma must be positive");
    require(delta > 0.0, "delta must be positive");
    require(lambda >= 1 && lambda % 2 == 1, "lambda must be odd and positive");
    require(L1 >= 1 && L1 <= 2 * lambda * lambda, "L1 must lie in [1, 2*lambda^2]");
    require(L2 >= 1 && L2 <= std::min(31, 2 * lambda * lambda), "L2 must lie in [1, min(31, 2*lambda^2)]");
    require(sample_fraction > 0.0 && sample_fraction <= 1.0, "sample_fraction must lie in (0, 1]");
    require(sample_ratio > 0.0 && sample_ratio < 1.0, "sample_ratio must lie in (0, 1)");
    require(svm_C > 0.0 && svm_epochs >= 1, "svm_C and svm_epochs must be positive");
    require(fcm_m > 1.0 && fcm_tol > 0.0 && fcm_max_iter >= 1, "invalid FCM settings");
    require(gabor.scales >= 1 && gabor.orientations >= 1 && gabor.kernel_size >= 1 && gabor.kernel_size % 2 == 1,
            "invalid Gabor bank settings");
    require(gabor.f_max > 0.0 && gabor.scale_factor > 0.0, "Gabor frequencies must be positive");
}

DdiStages stage_ddi(const Raster& i1, const Raster& i2, const PipelineConfig& config) {
    config.validate();
    return deep_difference_stages(i1, i2, config.ddi_params());
}

ThreeWayMap stage_cluster(const Raster& ddi, const PipelineConfig& config) {
    config.validate();
    return pfcmc(ddi, config.pfcmc_config());
}

ClassifyResult stage_classify(const Raster& i1_pooled, const Raster& i2_pooled, const ThreeWayMap& pseudo,
                              const PipelineConfig& config) {
    config.validate();
    if (!i1_pooled.same_shape(i2_pooled) || i1_pooled.width() != pseudo.width() || i1_pooled.height() != pseudo.height())
        throw ParameterError("stage_classify: image and pseudo-label sizes differ");

    ClassifyResult out;
    const std::size_t nm = pseudo.size();
    const auto S = static_cast<std::size_t>(std::llround(config.sample_fraction * static_cast<double>(nm)));

    SampleSelection selection;
    try {
        selection = balance_sample(pseudo, std::max<std::size_t>(S, 2), config.sample_ratio, config.seed + kSampleStage);
    } catch (const DegenerateTrainingError& e) {
        warn(std::string("falling back to the clustering result: ") + e.what());
        out.change_map = pseudo.changed_only();
        out.status = PipelineStatus::clustering_fallback;
        return out;
    }

    const int lambda = config.lambda;
    auto patch_of = [&](std::size_t s) { return extract_patch(i1_pooled, i2_pooled, lambda, s); };

    PatchStack training(2 * static_cast<std::size_t>(lambda), static_cast<std::size_t>(lambda));
    training.reserve(selection.indices.size());
    for (std::size_t idx : selection.indices) training.push_back(patch_of(idx));
    PcanetModel model = train_pcanet(lambda, training, config.L1, config.L2);

    // Features once per distinct pixel; over-sampled pixels repeat in the SVM set.
    std::vector<std::size_t> unique = selection.indices;
    std::sort(unique.begin(), unique.end());
    unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
    std::vector<std::vector<double>> unique_features(unique.size());
    parallel_for(unique.size(), [&](std::size_t i) { unique_features[i] = features_for(patch_of(unique[i]), model); });
    std::unordered_map<std::size_t, std::size_t> slot;
    slot.reserve(unique.size());
    for (std::size_t i = 0; i < unique.size(); ++i) slot.emplace(unique[i], i);

    SvmDataset data;
    data.dim = model.feature_length();
    data.features.reserve(selection.indices.size() * data.dim);
    for (std::size_t i = 0; i < selection.indices.size(); ++i)
        data.add(unique_features[slot.at(selection.indices[i])],
                 selection.labels[i] == PixelClass::changed ? 1 : -1);
    unique_features.clear();

    SvmModel svm = train_svm(data, {config.svm_C, config.svm_epochs, config.seed + kSvmStage});

    std::vector<std::size_t> ambiguous;
    for (std::size_t s = 0; s < nm; ++s)
        if (pseudo[s] == PixelClass::intermediate) ambiguous.push_back(s);
    std::vector<std::uint8_t> predicted(ambiguous.size(), 0);
    parallel_for(ambiguous.size(), [&](std::size_t i) {
        predicted[i] = predict(svm, features_for(patch_of(ambiguous[i]), model)).label > 0 ? 1 : 0;
    });

    std::vector<std::uint8_t> labels(nm, 0);
    for (std::size_t s = 0; s < nm; ++s) labels[s] = pseudo[s] == PixelClass::changed ? 1 : 0;
    for (std::size_t i = 0; i < ambiguous.size(); ++i) labels[ambiguous[i]] = predicted[i];

    out.change_map = BinaryMap(pseudo.width(), pseudo.height(), std::move(labels));
    out.predicted = ambiguous.size();
    out.predicted_changed = static_cast<std::size_t>(std::count(predicted.begin(), predicted.end(), std::uint8_t{1}));
    out.pcanet = std::move(model);
    out.svm = std::move(svm);
    return out;
}

PipelineResult run_pipeline(const Raster& i1, const Raster& i2, const PipelineConfig& config) {
    if (!i1.same_shape(i2)) throw ParameterError("run_pipeline: input images differ in size");
    PipelineResult result;
    result.ddi = stage_ddi(i1, i2, config);
    result.pseudo = stage_cluster(result.ddi.ddi, config);
    ClassifyResult classified = stage_classify(result.ddi.i1_pooled, result.ddi.i2_pooled, result.pseudo, config);
    result.change_map = std::move(classified.change_map);
    result.status = classified.status;
    result.pcanet = std::move(classified.pcanet);
    result.svm = std::move(classified.svm);
    return result;
}

BinaryMap baseline_log_ratio_fcm(const Raster& i1, const Raster& i2, const PipelineConfig& config) {
    config.validate();
    const Raster di = log_ratio(i1, i2);
    const FcmResult result = fcm(scalar_features(di.values()), {config.fcm_m, config.fcm_tol, config.fcm_max_iter,
                                                                 config.seed + kClusterStage});
    return orient_labels(result, di);
}

std::vector<SweepRow> sweep(const Raster& i1, const Raster& i2, const BinaryMap& truth, const PipelineConfig& config,
                            std::vector<int> T_list, std::vector<double> b_list) {
    std::sort(T_list.begin(), T_list.end());
    std::sort(b_list.begin(), b_list.end());
    std::vector<SweepRow> rows;
    for (int T : T_list) {
        for (double b : b_list) {
            SweepRow row{T, b, std::nullopt};
            PipelineConfig cell = config;
            cell.T = T;
            cell.b = b;
            try {
                const PipelineResult r = run_pipeline(i1, i2, cell);
                row.eval = evaluate(r.change_map, truth);
            } catch (const Error& e) {
                warn("sweep cell T=" + std::to_string(T) + " b=" + format_number(b) + " failed: " + e.what());
            }
            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream out;
    out << "T,b,fp,fn,oe,pcc,kc\n";
    for (const auto& r : rows) {
        out << r.T << ',' << format_number(r.b) << ',';
        if (r.eval) {
            const auto& c = r.eval->counts;
            out << c.fp << ',' << c.fn << ',' << c.overall_errors() << ',' << format_number(r.eval->pcc) << ','
                << format_number(r.eval->kc) << '\n';
        } else {
            out << "nan,nan,nan,nan,nan\n";
        }
    }
    return out.str();
}

}  // namespace sarcd
