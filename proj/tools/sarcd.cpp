// Command-line front end for the change-detection pipeline.
//
//   sarcd synth   --out DIR [--config scene.json] [--seed N]
//   sarcd ddi     --i1 A --i2 B --out DIR [--config cfg.json]
//   sarcd cluster --out DIR [--ddi FILE] [--config cfg.json]
//   sarcd detect  --i1 A --i2 B --out DIR [--truth GT] [--config cfg.json] [--resume]
//   sarcd eval    --pred MAP --truth GT [--out DIR]
//   sarcd sweep   --i1 A --i2 B --truth GT --out DIR --T 1,5,9 --b -0.1,0,0.1
//
// Exit codes: 0 ok, 1 error, 2 degenerate input, 3 fell back to clustering.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sarcd/config.hpp"
#include "sarcd/errors.hpp"
#include "sarcd/pipeline.hpp"
#include "sarcd/synth.hpp"

namespace fs = std::filesystem;
using namespace sarcd;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitDegenerateInput = 2;
constexpr int kExitFallback = 3;

struct Options {
    std::string config;
    std::string i1;
    std::string i2;
    std::string truth;
    std::string out = ".";
    std::string ddi;
    std::string pred;
    std::optional<std::uint64_t> seed;
    bool resume = false;
    std::vector<int> T_list;
    std::vector<double> b_list;
};

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

PipelineConfig pipeline_config(const Options& o) {
    PipelineConfig c = o.config.empty() ? PipelineConfig{} : load_pipeline_config(o.config);
    if (o.seed) c.seed = *o.seed;
    c.validate();
    return c;
}

fs::path out_dir(const Options& o) {
    fs::create_directories(o.out);
    return o.out;
}

int run_synth(const Options& o) {
    SceneSpec spec = o.config.empty() ? default_scene() : load_scene_spec(o.config);
    if (o.seed) spec.seed = *o.seed;
    const SyntheticPair pair = generate_pair(spec);
    const fs::path dir = out_dir(o);
    save_f32(pair.i1, dir / "i1.sarf");
    save_f32(pair.i2, dir / "i2.sarf");
    save_pgm(pair.i1, dir / "i1.pgm");
    save_pgm(pair.i2, dir / "i2.pgm");
    save_binary_pgm(pair.truth, dir / "truth.pgm");
    write_text(dir / "scene.json", scene_spec_json(spec));
    std::cout << "wrote " << spec.width << "x" << spec.height << " pair with " << pair.truth.count_changed()
              << " changed pixels to " << dir << '\n';
    return kExitOk;
}

void save_ddi_stages(const DdiStages& s, const fs::path& dir) {
    save_f32(s.i1_pooled, dir / "i1_wp.sarf");
    save_f32(s.i2_pooled, dir / "i2_wp.sarf");
    save_f32(s.log_ratio, dir / "log_ratio.sarf");
    save_f32(s.ddi, dir / "ddi.sarf");
    save_pgm(rescale_unit(s.ddi), dir / "ddi.pgm");
}

int run_ddi(const Options& o) {
    const PipelineConfig cfg = pipeline_config(o);
    const DdiStages stages = stage_ddi(load_image(o.i1), load_image(o.i2), cfg);
    save_ddi_stages(stages, out_dir(o));
    return kExitOk;
}

int run_cluster(const Options& o) {
    const PipelineConfig cfg = pipeline_config(o);
    const fs::path dir = out_dir(o);
    const fs::path ddi_path = o.ddi.empty() ? dir / "ddi.sarf" : fs::path(o.ddi);
    const ThreeWayMap pseudo = stage_cluster(load_image(ddi_path), cfg);
    save_three_way_pgm(pseudo, dir / "pseudo.pgm");
    std::cout << "changed " << pseudo.count(PixelClass::changed) << ", unchanged " << pseudo.count(PixelClass::unchanged)
              << ", intermediate " << pseudo.count(PixelClass::intermediate) << '\n';
    return kExitOk;
}

int run_detect(const Options& o) {
    const PipelineConfig cfg = pipeline_config(o);
    const fs::path dir = out_dir(o);
    write_text(dir / "config.json", pipeline_config_json(cfg));

    Raster i1_pooled;
    Raster i2_pooled;
    if (o.resume && fs::exists(dir / "i1_wp.sarf") && fs::exists(dir / "i2_wp.sarf") && fs::exists(dir / "ddi.sarf")) {
        i1_pooled = load_f32(dir / "i1_wp.sarf");
        i2_pooled = load_f32(dir / "i2_wp.sarf");
    } else {
        if (o.i1.empty() || o.i2.empty()) throw ParameterError("detect needs --i1 and --i2");
        const DdiStages stages = stage_ddi(load_image(o.i1), load_image(o.i2), cfg);
        save_ddi_stages(stages, dir);
        i1_pooled = stages.i1_pooled;
        i2_pooled = stages.i2_pooled;
    }

    ThreeWayMap pseudo;
    if (o.resume && fs::exists(dir / "pseudo.pgm")) {
        pseudo = load_three_way_pgm(dir / "pseudo.pgm");
    } else {
        pseudo = stage_cluster(load_f32(dir / "ddi.sarf"), cfg);
        save_three_way_pgm(pseudo, dir / "pseudo.pgm");
    }

    const ClassifyResult result = stage_classify(i1_pooled, i2_pooled, pseudo, cfg);
    save_binary_pgm(result.change_map, dir / "change_map.pgm");
    if (result.pcanet) save_pcanet_model(*result.pcanet, dir / "pcanet.model");
    if (result.svm) save_svm_model(*result.svm, dir / "svm.model");
    if (!o.truth.empty()) {
        const std::string metrics = metrics_json(evaluate(result.change_map, load_binary_pgm(o.truth)));
        write_text(dir / "metrics.json", metrics);
        std::cout << metrics;
    }
    if (result.status == PipelineStatus::clustering_fallback) return kExitFallback;
    return kExitOk;
}

int run_eval(const Options& o) {
    const std::string metrics = metrics_json(evaluate(load_binary_pgm(o.pred), load_binary_pgm(o.truth)));
    std::cout << metrics;
    if (!o.out.empty() && o.out != ".") write_text(out_dir(o) / "metrics.json", metrics);
    return kExitOk;
}

int run_sweep(const Options& o) {
    const PipelineConfig cfg = pipeline_config(o);
    const auto rows = sweep(load_image(o.i1), load_image(o.i2), load_binary_pgm(o.truth), cfg, o.T_list, o.b_list);
    const std::string csv = sweep_csv(rows);
    write_text(out_dir(o) / "sweep.csv", csv);
    std::cout << csv;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"SAR change detection: deep difference image, parallel FCM pseudo-labels, PCANet + linear SVM"};
    app.require_subcommand(1);
    Options o;

    auto add_seed = [&](CLI::App* sub) { sub->add_option("--seed", o.seed, "override the RNG seed"); };

    auto* synth = app.add_subcommand("synth", "generate a synthetic speckled image pair with ground truth");
    synth->add_option("--config", o.config, "scene JSON");
    synth->add_option("--out", o.out, "output directory")->required();
    add_seed(synth);

    auto* ddi = app.add_subcommand("ddi", "compute the deep difference image");
    ddi->add_option("--i1", o.i1, "first-date image (PGM or SARF)")->required();
    ddi->add_option("--i2", o.i2, "second-date image (PGM or SARF)")->required();
    ddi->add_option("--config", o.config, "pipeline JSON");
    ddi->add_option("--out", o.out, "run directory")->required();

    auto* cluster = app.add_subcommand("cluster", "parallel FCM pseudo-labelling of a DDI");
    cluster->add_option("--ddi", o.ddi, "DDI file (default: <out>/ddi.sarf)");
    cluster->add_option("--config", o.config, "pipeline JSON");
    cluster->add_option("--out", o.out, "run directory")->required();
    add_seed(cluster);

    auto* detect = app.add_subcommand("detect", "run the full pipeline");
    detect->add_option("--i1", o.i1, "first-date image (PGM or SARF)");
    detect->add_option("--i2", o.i2, "second-date image (PGM or SARF)");
    detect->add_option("--truth", o.truth, "ground-truth PGM; enables metrics.json");
    detect->add_option("--config", o.config, "pipeline JSON");
    detect->add_option("--out", o.out, "run directory")->required();
    detect->add_flag("--resume", o.resume, "reuse stage outputs already present in the run directory");
    add_seed(detect);

    auto* eval = app.add_subcommand("eval", "score a change map against ground truth");
    eval->add_option("--pred", o.pred, "predicted change map PGM")->required();
    eval->add_option("--truth", o.truth, "ground-truth PGM")->required();
    eval->add_option("--out", o.out, "directory for metrics.json");

    auto* sw = app.add_subcommand("sweep", "grid over accumulation count T and centre bias b");
    sw->add_option("--i1", o.i1, "first-date image")->required();
    sw->add_option("--i2", o.i2, "second-date image")->required();
    sw->add_option("--truth", o.truth, "ground-truth PGM")->required();
    sw->add_option("--config", o.config, "pipeline JSON");
    sw->add_option("--out", o.out, "output directory")->required();
    sw->add_option("--T", o.T_list, "accumulation counts")->delimiter(',')->required();
    sw->add_option("--b", o.b_list, "centre biases")->delimiter(',')->required();
    add_seed(sw);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*synth) return run_synth(o);
        if (*ddi) return run_ddi(o);
        if (*cluster) return run_cluster(o);
        if (*detect) return run_detect(o);
        if (*eval) return run_eval(o);
        if (*sw) return run_sweep(o);
    } catch (const DegenerateInputError& e) {
        std::cerr << "error: degenerate input: " << e.what() << '\n';
        return kExitDegenerateInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
    return kExitError;
}
