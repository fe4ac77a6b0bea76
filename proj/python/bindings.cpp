#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "sarcd/config.hpp"
#include "sarcd/ddi.hpp"
#include "sarcd/errors.hpp"
#include "sarcd/metrics.hpp"
#include "sarcd/pfcmc.hpp"
#include "sarcd/pipeline.hpp"
#include "sarcd/synth.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace sarcd;

namespace {

using Image = py::array_t<double, py::array::c_style | py::array::forcecast>;
using Labels = py::array_t<std::uint8_t, py::array::c_style | py::array::forcecast>;

Raster to_raster(const Image& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    const auto h = static_cast<std::size_t>(a.shape(0));
    const auto w = static_cast<std::size_t>(a.shape(1));
    return Raster(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

py::array_t<double> to_array(const Raster& r) {
    py::array_t<double> out({r.height(), r.width()});
    std::copy(r.values().begin(), r.values().end(), out.mutable_data());
    return out;
}

BinaryMap to_binary(const Labels& a) {
    if (a.ndim() != 2) throw py::value_error("expected a 2-D array");
    return BinaryMap(static_cast<std::size_t>(a.shape(1)), static_cast<std::size_t>(a.shape(0)),
                     std::vector<std::uint8_t>(a.data(), a.data() + a.size()));
}

py::array_t<std::uint8_t> to_array(const BinaryMap& m) {
    py::array_t<std::uint8_t> out({m.height(), m.width()});
    std::copy(m.labels().begin(), m.labels().end(), out.mutable_data());
    return out;
}

py::array_t<std::uint8_t> to_array(const ThreeWayMap& m) {
    py::array_t<std::uint8_t> out({m.height(), m.width()});
    auto* dst = out.mutable_data();
    for (std::size_t i = 0; i < m.size(); ++i) dst[i] = static_cast<std::uint8_t>(m[i]);
    return out;
}

py::dict to_dict(const Evaluation& e) {
    return py::dict("tp"_a = e.counts.tp, "tn"_a = e.counts.tn, "fp"_a = e.counts.fp, "fn"_a = e.counts.fn,
                    "oe"_a = e.counts.overall_errors(), "pcc"_a = e.pcc, "kc"_a = e.kc, "ir"_a = e.ir);
}

}  // namespace

PYBIND11_MODULE(_sarcd, m) {
    m.doc() = "SAR change detection: deep difference image, parallel FCM, PCANet + linear SVM";

    py::register_exception<Error>(m, "SarcdError", PyExc_RuntimeError);
    py::register_exception<DegenerateInputError>(m, "DegenerateInputError", PyExc_RuntimeError);
    py::register_exception<DegenerateTrainingError>(m, "DegenerateTrainingError", PyExc_RuntimeError);
    py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_static("from_json", [](const std::string& s) { return parse_pipeline_config(s); })
        .def("to_json", [](const PipelineConfig& c) { return pipeline_config_json(c); })
        .def_readwrite("k", &PipelineConfig::k)
        .def_readwrite("T", &PipelineConfig::T)
        .def_readwrite("gamma", &PipelineConfig::gamma)
        .def_readwrite("b", &PipelineConfig::b)
        .def_readwrite("delta", &PipelineConfig::delta)
        .def_readwrite("lambda_", &PipelineConfig::lambda)
        .def_readwrite("L1", &PipelineConfig::L1)
        .def_readwrite("L2", &PipelineConfig::L2)
        .def_readwrite("sample_fraction", &PipelineConfig::sample_fraction)
        .def_readwrite("sample_ratio", &PipelineConfig::sample_ratio)
        .def_readwrite("svm_C", &PipelineConfig::svm_C)
        .def_readwrite("svm_epochs", &PipelineConfig::svm_epochs)
        .def_readwrite("seed", &PipelineConfig::seed);

    m.def("pool_kernel", [](int k) {
        const PoolKernel kernel(k);
        py::array_t<double> out({k, k});
        std::copy(kernel.weights().begin(), kernel.weights().end(), out.mutable_data());
        return out;
    }, "k"_a);
    m.def("kernel_mean", [](int k) { return PoolKernel(k).mean(); }, "k"_a);
    m.def("weighted_pool", [](const Image& img, int k) { return to_array(weighted_pool(to_raster(img), PoolKernel(k))); },
          "image"_a, "k"_a);
    m.def("log_ratio", [](const Image& a, const Image& b) { return to_array(log_ratio(to_raster(a), to_raster(b))); },
          "i1p"_a, "i2p"_a);
    m.def("deep_difference", [](const Image& a, const Image& b, int k, int T) {
        return to_array(deep_difference(to_raster(a), to_raster(b), {k, T}));
    }, "i1"_a, "i2"_a, "k"_a = 3, "T"_a = 9);
    m.def("normalize_center", [](const Image& img) { return to_array(normalize_center(to_raster(img))); }, "image"_a);
    m.def("sigmoid_map", [](const Image& img, double gamma, double mu) {
        return to_array(sigmoid_map(to_raster(img), {gamma, mu}));
    }, "image"_a, "gamma"_a, "mu"_a);
    m.def("pfcmc", [](const Image& ddi, const PipelineConfig& cfg) {
        const Raster input = to_raster(ddi);
        ThreeWayMap map;
        {
            py::gil_scoped_release release;
            map = pfcmc(input, cfg.pfcmc_config());
        }
        return to_array(map);
    }, "ddi"_a, "config"_a = PipelineConfig{},
          "Pseudo-labels per pixel: 0 unchanged, 1 changed, 2 intermediate.");

    m.def("pcc", [](std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
        return pcc({tp, tn, fp, fn});
    }, "tp"_a, "tn"_a, "fp"_a, "fn"_a);
    m.def("kappa", [](std::uint64_t tp, std::uint64_t tn, std::uint64_t fp, std::uint64_t fn) {
        return kappa({tp, tn, fp, fn});
    }, "tp"_a, "tn"_a, "fp"_a, "fn"_a);
    m.def("evaluate", [](const Labels& pred, const Labels& truth) { return to_dict(evaluate(to_binary(pred), to_binary(truth))); },
          "pred"_a, "truth"_a);

    m.def("generate_pair", [](const std::string& scene_json) {
        const SceneSpec spec = scene_json.empty() ? default_scene() : parse_scene_spec(scene_json);
        const SyntheticPair pair = generate_pair(spec);
        return py::make_tuple(to_array(pair.i1), to_array(pair.i2), to_array(pair.truth));
    }, "scene_json"_a = std::string{}, "Returns (i1, i2, truth) for a JSON scene description (defaults when empty).");

    m.def("run_pipeline", [](const Image& i1, const Image& i2, const PipelineConfig& cfg) {
        const Raster a = to_raster(i1);
        const Raster b = to_raster(i2);
        PipelineResult r;
        {
            py::gil_scoped_release release;
            r = run_pipeline(a, b, cfg);
        }
        return py::dict("change_map"_a = to_array(r.change_map), "ddi"_a = to_array(r.ddi.ddi),
                        "pseudo"_a = to_array(r.pseudo),
                        "fallback"_a = r.status == PipelineStatus::clustering_fallback);
    }, "i1"_a, "i2"_a, "config"_a = PipelineConfig{});
    m.def("baseline", [](const Image& i1, const Image& i2, const PipelineConfig& cfg) {
        return to_array(baseline_log_ratio_fcm(to_raster(i1), to_raster(i2), cfg));
    }, "i1"_a, "i2"_a, "config"_a = PipelineConfig{});
    m.def("sweep", [](const Image& i1, const Image& i2, const Labels& truth, const PipelineConfig& cfg,
                      std::vector<int> T_list, std::vector<double> b_list) {
        const Raster a = to_raster(i1);
        const Raster b = to_raster(i2);
        const BinaryMap t = to_binary(truth);
        py::gil_scoped_release release;
        return sweep_csv(sweep(a, b, t, cfg, std::move(T_list), std::move(b_list)));
    }, "i1"_a, "i2"_a, "truth"_a, "config"_a, "T_list"_a, "b_list"_a, "CSV text with header T,b,fp,fn,oe,pcc,kc.");
}
