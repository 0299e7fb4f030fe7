#include "briervar/result.hpp"

#include <cstdio>

namespace briervar {
namespace {

using json = nlohmann::ordered_json;

json decomposition_to_json(const Decomposition& d) {
    json j{{"reliability", d.reliability},
           {"resolution", d.resolution},
           {"uncertainty", d.uncertainty}};
    if (d.gamma) j["gamma"] = *d.gamma;
    return j;
}

Decomposition decomposition_from_json(const json& j, EstimatorFamily family) {
    Decomposition d;
    d.reliability = j.at("reliability").get<double>();
    d.resolution = j.at("resolution").get<double>();
    d.uncertainty = j.at("uncertainty").get<double>();
    d.family = family;
    if (j.contains("gamma")) d.gamma = j.at("gamma").get<double>();
    return d;
}

json optional_to_json(const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
}

std::optional<double> optional_from_json(const json& j) {
    if (j.is_null()) return std::nullopt;
    return j.get<double>();
}

}  // namespace

ResultDocument make_result_document(const ForecastSeries& series, const BinningScheme& scheme) {
    const CountSummary counts = summarize(series, scheme);
    ResultDocument doc;
    doc.n = counts.n;
    doc.bins = counts.bins();
    doc.edges.assign(scheme.edges().begin(), scheme.edges().end());
    doc.count = counts.count;
    doc.events = counts.events;
    doc.prob_sum = counts.prob_sum;
    doc.brier = empirical_brier(series);
    doc.traditional = decompose_traditional(counts);
    if (counts.n >= 2) {
        doc.bias_corrected = decompose_bias_corrected(counts);
        doc.consistency_corrected = consistency_correct(counts);
    }
    doc.variances = variance_estimates(counts);
    doc.clamped_variances = doc.variances.clamped;
    return doc;
}

nlohmann::ordered_json to_json(const ResultDocument& doc) {
    json j;
    j["schema_version"] = doc.schema_version;
    j["input"] = json{{"n", doc.n}, {"bins", doc.bins}, {"edges", doc.edges}};
    j["per_bin"] = json{{"count", doc.count}, {"events", doc.events}, {"prob_sum", doc.prob_sum}};
    j["brier"] = json{{"score", doc.brier.score},
                      {"standard_error", optional_to_json(doc.brier.standard_error)}};
    json families;
    families["traditional"] = decomposition_to_json(doc.traditional);
    families["bias_corrected"] =
        doc.bias_corrected ? decomposition_to_json(*doc.bias_corrected) : json(nullptr);
    families["consistency_corrected"] = doc.consistency_corrected
                                            ? decomposition_to_json(*doc.consistency_corrected)
                                            : json(nullptr);
    j["decomposition"] = families;
    j["variance"] = json{{"reliability", doc.variances.reliability},
                         {"resolution", doc.variances.resolution},
                         {"uncertainty", doc.variances.uncertainty},
                         {"reliability_bc", optional_to_json(doc.variances.reliability_bc)},
                         {"resolution_bc", optional_to_json(doc.variances.resolution_bc)},
                         {"uncertainty_bc", optional_to_json(doc.variances.uncertainty_bc)}};
    j["diagnostics"] =
        json{{"clamped_variances", doc.clamped_variances}, {"skipped_rows", doc.skipped_rows}};
    return j;
}

ResultDocument result_from_json(const nlohmann::ordered_json& j) {
    ResultDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    doc.n = j.at("input").at("n").get<std::int64_t>();
    doc.bins = j.at("input").at("bins").get<std::size_t>();
    doc.edges = j.at("input").at("edges").get<std::vector<double>>();
    doc.count = j.at("per_bin").at("count").get<std::vector<std::int64_t>>();
    doc.events = j.at("per_bin").at("events").get<std::vector<std::int64_t>>();
    doc.prob_sum = j.at("per_bin").at("prob_sum").get<std::vector<double>>();
    doc.brier.score = j.at("brier").at("score").get<double>();
    doc.brier.standard_error = optional_from_json(j.at("brier").at("standard_error"));
    const auto& fam = j.at("decomposition");
    doc.traditional =
        decomposition_from_json(fam.at("traditional"), EstimatorFamily::traditional);
    if (!fam.at("bias_corrected").is_null())
        doc.bias_corrected =
            decomposition_from_json(fam.at("bias_corrected"), EstimatorFamily::bias_corrected);
    if (!fam.at("consistency_corrected").is_null())
        doc.consistency_corrected = decomposition_from_json(
            fam.at("consistency_corrected"), EstimatorFamily::consistency_corrected);
    const auto& var = j.at("variance");
    doc.variances.reliability = var.at("reliability").get<double>();
    doc.variances.resolution = var.at("resolution").get<double>();
    doc.variances.uncertainty = var.at("uncertainty").get<double>();
    doc.variances.reliability_bc = optional_from_json(var.at("reliability_bc"));
    doc.variances.resolution_bc = optional_from_json(var.at("resolution_bc"));
    doc.variances.uncertainty_bc = optional_from_json(var.at("uncertainty_bc"));
    doc.clamped_variances = j.at("diagnostics").at("clamped_variances").get<int>();
    doc.skipped_rows = j.at("diagnostics").at("skipped_rows").get<std::size_t>();
    return doc;
}

std::string format_full(double value) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

std::string to_csv(const ResultDocument& doc) {
    std::string header = "n,bins,brier,brier_se,rel,res,unc";
    std::string row = std::to_string(doc.n) + "," + std::to_string(doc.bins) + "," +
                      format_full(doc.brier.score) + "," +
                      (doc.brier.standard_error ? format_full(*doc.brier.standard_error) : "") +
                      "," + format_full(doc.traditional.reliability) + "," +
                      format_full(doc.traditional.resolution) + "," +
                      format_full(doc.traditional.uncertainty);
    header += ",rel_bc,res_bc,unc_bc,rel_cc,res_cc,unc_cc,gamma";
    if (doc.bias_corrected) {
        row += "," + format_full(doc.bias_corrected->reliability) + "," +
               format_full(doc.bias_corrected->resolution) + "," +
               format_full(doc.bias_corrected->uncertainty);
        row += "," + format_full(doc.consistency_corrected->reliability) + "," +
               format_full(doc.consistency_corrected->resolution) + "," +
               format_full(doc.consistency_corrected->uncertainty) + "," +
               format_full(*doc.consistency_corrected->gamma);
    } else {
        row += ",,,,,,,";
    }
    header += ",var_rel,var_res,var_unc,var_rel_bc,var_res_bc,var_unc_bc";
    row += "," + format_full(doc.variances.reliability) + "," +
           format_full(doc.variances.resolution) + "," + format_full(doc.variances.uncertainty);
    for (const auto& v :
         {doc.variances.reliability_bc, doc.variances.resolution_bc, doc.variances.uncertainty_bc})
        row += "," + (v ? format_full(*v) : std::string());
    header += ",clamped_variances,skipped_rows";
    row += "," + std::to_string(doc.clamped_variances) + "," + std::to_string(doc.skipped_rows);
    return header + "\n" + row + "\n";
}

}  // namespace briervar
