#include "sarcd/metrics.hpp"

#include <json.hpp>

#include "sarcd/errors.hpp"

namespace sarcd {

ConfusionCounts confusion(const BinaryMap& pred, const BinaryMap& truth) {
    if (!pred.same_shape(truth)) throw ParameterError("confusion: prediction and truth differ in size");
    ConfusionCounts c;
    const auto p = pred.labels();
    const auto t = truth.labels();
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] && t[i]) ++c.tp;
        else if (p[i]) ++c.fp;
        else if (t[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double pcc(const ConfusionCounts& c) {
    if (c.total() == 0) throw ParameterError("pcc: empty confusion counts");
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

double kappa(const ConfusionCounts& c) {
    if (c.total() == 0) throw ParameterError("kappa: empty confusion counts");
    const double tp = static_cast<double>(c.tp);
    const double tn = static_cast<double>(c.tn);
    const double fp = static_cast<double>(c.fp);
    const double fn = static_cast<double>(c.fn);
    const double total = static_cast<double>(c.total());
    const double pre = ((tp + fp) * (tp + fn) + (fn + tn) * (fp + tn)) / (total * total);
    if (pre == 1.0) throw ParameterError("kappa undefined: both maps contain a single identical class");
    return (pcc(c) - pre) / (1.0 - pre);
}

double imbalance_ratio(const BinaryMap& truth) {
    const std::size_t nc = truth.count_changed();
    const std::size_t nu = truth.size() - nc;
    if (nu == 0) throw ParameterError("imbalance ratio undefined: no unchanged pixels");
    return static_cast<double>(nc) / static_cast<double>(nu);
}

Evaluation evaluate(const BinaryMap& pred, const BinaryMap& truth) {
    Evaluation e;
    e.counts = confusion(pred, truth);
    e.pcc = pcc(e.counts);
    e.kc = kappa(e.counts);
    e.ir = imbalance_ratio(truth);
    return e;
}

std::string metrics_json(const Evaluation& e) {
    nlohmann::ordered_json j;
    j["fp"] = e.counts.fp;
    j["fn"] = e.counts.fn;
    j["oe"] = e.counts.overall_errors();
    j["pcc"] = e.pcc;
    j["kc"] = e.kc;
    j["ir"] = e.ir;
    return j.dump(2) + "\n";
}

}  // namespace sarcd
