#include "sarcd/pcanet.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "binary_io.hpp"
#include "sarcd/errors.hpp"
#include "sarcd/parallel.hpp"

namespace sarcd {

namespace {

// k distinct picks when the pool suffices, otherwise the whole pool plus
// k - |pool| picks with replacement.
void draw_from(const std::vector<std::size_t>& pool, std::size_t k, std::mt19937_64& rng,
               std::vector<std::size_t>& out) {
    if (k == 0) return;
    if (k <= pool.size()) {
        std::vector<std::size_t> scratch = pool;
        for (std::size_t i = 0; i < k; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, scratch.size() - 1);
            std::swap(scratch[i], scratch[pick(rng)]);
            out.push_back(scratch[i]);
        }
        return;
    }
    out.insert(out.end(), pool.begin(), pool.end());
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    for (std::size_t i = pool.size(); i < k; ++i) out.push_back(pool[pick(rng)]);
}

}  // namespace

void PatchStack::push_back(std::span<const double> matrix) {
    if (matrix.size() != area()) throw ParameterError("patch size mismatch");
    data_.insert(data_.end(), matrix.begin(), matrix.end());
}

std::vector<double> extract_patch(const Raster& i1p, const Raster& i2p, int lambda, std::size_t s) {
    const auto lam = static_cast<std::size_t>(lambda);
    const auto r = static_cast<std::ptrdiff_t>(lambda / 2);
    const auto n = static_cast<std::ptrdiff_t>(s / i1p.width());
    const auto m = static_cast<std::ptrdiff_t>(s % i1p.width());
    std::vector<double> patch(2 * lam * lam);
    for (std::size_t i = 0; i < lam; ++i) {
        for (std::size_t j = 0; j < lam; ++j) {
            const auto row = n + static_cast<std::ptrdiff_t>(i) - r;
            const auto col = m + static_cast<std::ptrdiff_t>(j) - r;
            patch[i * lam + j] = i1p.clamped(row, col);
            patch[(i + lam) * lam + j] = i2p.clamped(row, col);
        }
    }
    return patch;
}

PatchSet extract_patches(const Raster& i1p, const Raster& i2p, int lambda) {
    if (!i1p.same_shape(i2p)) throw ParameterError("extract_patches: image dimensions differ");
    if (lambda < 1 || lambda % 2 == 0) throw ParameterError("patch size lambda must be odd and positive");
    if (static_cast<std::size_t>(lambda) > std::min(i1p.width(), i1p.height()))
        throw ParameterError("patch size lambda exceeds image dimensions");
    PatchSet set;
    set.lambda = lambda;
    set.width = i1p.width();
    set.height = i1p.height();
    set.patches = PatchStack(2 * static_cast<std::size_t>(lambda), static_cast<std::size_t>(lambda));
    set.patches.resize(i1p.size());
    parallel_for(i1p.size(), [&](std::size_t s) {
        const auto patch = extract_patch(i1p, i2p, lambda, s);
        std::copy(patch.begin(), patch.end(), set.patches[s].begin());
    });
    return set;
}

SampleSelection balance_sample(const ThreeWayMap& map, std::size_t S, double ratio, std::uint64_t seed) {
    if (!(ratio > 0.0 && ratio <= 1.0)) throw ParameterError("sample ratio must lie in (0, 1]");
    std::vector<std::size_t> changed;
    std::vector<std::size_t> unchanged;
    for (std::size_t s = 0; s < map.size(); ++s) {
        if (map[s] == PixelClass::changed) changed.push_back(s);
        if (map[s] == PixelClass::unchanged) unchanged.push_back(s);
    }
    if (changed.empty() || unchanged.empty())
        throw DegenerateTrainingError("pseudo-labels contain " + std::to_string(changed.size()) + " changed and " +
                                      std::to_string(unchanged.size()) + " unchanged pixels; need both");
    const auto n_changed = static_cast<std::size_t>(std::llround(static_cast<double>(S) * ratio));
    const std::size_t n_unchanged = S - std::min(S, n_changed);

    std::mt19937_64 rng(seed);
    SampleSelection sel;
    sel.indices.reserve(S);
    draw_from(changed, n_changed, rng, sel.indices);
    sel.labels.assign(sel.indices.size(), PixelClass::changed);
    draw_from(unchanged, n_unchanged, rng, sel.indices);
    sel.labels.resize(sel.indices.size(), PixelClass::unchanged);
    return sel;
}

FilterBank learn_pca_filters(const PatchStack& patches, int L) {
    const std::size_t d = patches.area();
    if (L < 1) throw ParameterError("filter count must be positive");
    if (static_cast<std::size_t>(L) > d) throw ParameterError("filter count exceeds patch dimension");
    if (patches.count() < static_cast<std::size_t>(L))
        throw ParameterError("need at least " + std::to_string(L) + " patches, got " + std::to_string(patches.count()));

    Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
    Eigen::VectorXd v(static_cast<Eigen::Index>(d));
    for (std::size_t s = 0; s < patches.count(); ++s) {
        const auto p = patches[s];
        const double mean = std::accumulate(p.begin(), p.end(), 0.0) / static_cast<double>(d);
        for (std::size_t i = 0; i < d; ++i) v[static_cast<Eigen::Index>(i)] = p[i] - mean;
        scatter.selfadjointView<Eigen::Lower>().rankUpdate(v);
    }
    scatter = scatter.selfadjointView<Eigen::Lower>();

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(scatter);
    if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");

    FilterBank bank;
    bank.rows = patches.rows();
    bank.cols = patches.cols();
    bank.filters = PatchStack(bank.rows, bank.cols);
    bank.filters.resize(static_cast<std::size_t>(L));
    const auto last = static_cast<Eigen::Index>(d) - 1;
    for (int l = 0; l < L; ++l) {
        const Eigen::Index col = last - l;
        Eigen::VectorXd e = solver.eigenvectors().col(col);
        Eigen::Index arg = 0;
        e.cwiseAbs().maxCoeff(&arg);
        if (e[arg] < 0.0) e = -e;
        auto dst = bank.filters[static_cast<std::size_t>(l)];
        for (std::size_t i = 0; i < d; ++i) dst[i] = e[static_cast<Eigen::Index>(i)];
        bank.eigenvalues.push_back(solver.eigenvalues()[col]);
    }
    return bank;
}

PatchStack stage_forward(std::span<const double> input, std::size_t rows, std::size_t cols, const FilterBank& bank) {
    if (input.size() != rows * cols || bank.rows != rows || bank.cols != cols)
        throw ParameterError("stage_forward: input and filter shapes differ");
    const auto ar = static_cast<std::ptrdiff_t>(rows / 2);
    const auto ac = static_cast<std::ptrdiff_t>(cols / 2);
    const auto R = static_cast<std::ptrdiff_t>(rows);
    const auto C = static_cast<std::ptrdiff_t>(cols);
    PatchStack out(rows, cols);
    out.resize(bank.size());
    for (std::size_t l = 0; l < bank.size(); ++l) {
        const auto f = bank.filters[l];
        auto o = out[l];
        for (std::ptrdiff_t r = 0; r < R; ++r) {
            for (std::ptrdiff_t c = 0; c < C; ++c) {
                double acc = 0.0;
                const std::ptrdiff_t i0 = std::max<std::ptrdiff_t>(0, ar - r);
                const std::ptrdiff_t i1 = std::min<std::ptrdiff_t>(R, R + ar - r);
                const std::ptrdiff_t j0 = std::max<std::ptrdiff_t>(0, ac - c);
                const std::ptrdiff_t j1 = std::min<std::ptrdiff_t>(C, C + ac - c);
                for (std::ptrdiff_t i = i0; i < i1; ++i)
                    for (std::ptrdiff_t j = j0; j < j1; ++j)
                        acc += f[static_cast<std::size_t>(i * C + j)] *
                               input[static_cast<std::size_t>((r + i - ar) * C + (c + j - ac))];
                o[static_cast<std::size_t>(r * C + c)] = acc;
            }
        }
    }
    return out;
}

std::vector<std::uint32_t> binarize_encode(const PatchStack& maps) {
    if (maps.count() > 31) throw ParameterError("binarize_encode supports at most 31 maps");
    std::vector<std::uint32_t> code(maps.area(), 0);
    for (std::size_t l = 0; l < maps.count(); ++l) {
        const auto z = maps[l];
        for (std::size_t i = 0; i < code.size(); ++i)
            if (z[i] > 0.0) code[i] |= (1u << l);
    }
    return code;
}

std::vector<double> histogram_feature(std::span<const std::vector<std::uint32_t>> int_maps, int L2) {
    if (L2 < 1 || L2 > 31) throw ParameterError("L2 must lie in [1, 31]");
    const std::size_t bins = std::size_t{1} << L2;
    std::vector<double> feature(int_maps.size() * bins, 0.0);
    for (std::size_t b = 0; b < int_maps.size(); ++b) {
        for (std::uint32_t v : int_maps[b]) {
            if (v >= bins) throw Error("histogram_feature: code " + std::to_string(v) + " out of range");
            feature[b * bins + v] += 1.0;
        }
    }
    return feature;
}

PcanetModel train_pcanet(int lambda, const PatchStack& training, int L1, int L2) {
    if (L2 > 31) throw ParameterError("L2 must be at most 31");
    PcanetModel model;
    model.lambda = lambda;
    model.L1 = L1;
    model.L2 = L2;
    model.stage1 = learn_pca_filters(training, L1);

    const std::size_t n = training.count();
    std::vector<PatchStack> responses(static_cast<std::size_t>(L1), PatchStack(training.rows(), training.cols()));
    for (auto& r : responses) r.resize(n);
    parallel_for(n, [&](std::size_t s) {
        const PatchStack out = stage_forward(training[s], training.rows(), training.cols(), model.stage1);
        for (std::size_t l = 0; l < out.count(); ++l) std::copy(out[l].begin(), out[l].end(), responses[l][s].begin());
    });
    model.stage2.resize(static_cast<std::size_t>(L1));
    parallel_for(static_cast<std::size_t>(L1),
                 [&](std::size_t l) { model.stage2[l] = learn_pca_filters(responses[l], L2); });
    return model;
}

PcanetModel train_pcanet(const PatchSet& patches, const SampleSelection& selection, int L1, int L2) {
    if (selection.indices.size() != selection.labels.size()) throw ParameterError("selection indices/labels mismatch");
    PatchStack training(patches.patches.rows(), patches.patches.cols());
    training.reserve(selection.indices.size());
    for (std::size_t idx : selection.indices) {
        if (idx >= patches.patches.count()) throw ParameterError("selection index out of range");
        training.push_back(patches.patches[idx]);
    }
    return train_pcanet(patches.lambda, training, L1, L2);
}

std::vector<double> features_for(std::span<const double> patch, const PcanetModel& model) {
    const auto lam = static_cast<std::size_t>(model.lambda);
    const std::size_t rows = 2 * lam;
    const std::size_t cols = lam;
    if (patch.size() != rows * cols) throw ParameterError("features_for: patch shape does not match model");
    const PatchStack first = stage_forward(patch, rows, cols, model.stage1);
    std::vector<std::vector<std::uint32_t>> codes;
    codes.reserve(first.count());
    for (std::size_t l = 0; l < first.count(); ++l)
        codes.push_back(binarize_encode(stage_forward(first[l], rows, cols, model.stage2[l])));
    return histogram_feature(codes, model.L2);
}

void save_pcanet_model(const PcanetModel& model, const std::filesystem::path& path) {
    detail::ByteWriter w;
    w.magic("SARP");
    w.u32(static_cast<std::uint32_t>(model.lambda));
    w.u32(static_cast<std::uint32_t>(model.L1));
    w.u32(static_cast<std::uint32_t>(model.L2));
    auto put_bank = [&](const FilterBank& bank) {
        for (std::size_t l = 0; l < bank.size(); ++l) {
            w.f32(bank.eigenvalues[l]);
            for (double v : bank.filters[l]) w.f32(v);
        }
    };
    put_bank(model.stage1);
    for (const auto& bank : model.stage2) put_bank(bank);
    w.write(path);
}

PcanetModel load_pcanet_model(const std::filesystem::path& path) {
    detail::ByteReader r(path);
    r.expect_magic("SARP");
    PcanetModel model;
    model.lambda = static_cast<int>(r.u32());
    model.L1 = static_cast<int>(r.u32());
    model.L2 = static_cast<int>(r.u32());
    if (model.lambda < 1 || model.lambda % 2 == 0 || model.L1 < 1 || model.L2 < 1 || model.L2 > 31)
        throw ParseError("invalid PCANet model header", 4);
    const auto lam = static_cast<std::size_t>(model.lambda);
    auto get_bank = [&](int count) {
        FilterBank bank;
        bank.rows = 2 * lam;
        bank.cols = lam;
        bank.filters = PatchStack(bank.rows, bank.cols);
        bank.filters.resize(static_cast<std::size_t>(count));
        for (std::size_t l = 0; l < static_cast<std::size_t>(count); ++l) {
            bank.eigenvalues.push_back(r.f32());
            for (double& v : bank.filters[l]) v = r.f32();
        }
        return bank;
    };
    model.stage1 = get_bank(model.L1);
    for (int l = 0; l < model.L1; ++l) model.stage2.push_back(get_bank(model.L2));
    r.expect_end();
    return model;
}

}  // namespace sarcd
