#include "zlab/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace zlab {

using nlohmann::json;

json instance_to_json(const Instance& inst) {
    json j;
    j["k"] = inst.k;
    j["classes"] = inst.classes;
    j["edges"] = inst.edges;
    return j;
}

Instance instance_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("instance JSON must be an object");
    if (!j.contains("k") || !j.contains("classes") || !j.contains("edges"))
        throw std::invalid_argument("instance JSON requires k, classes, edges");
    const int k = j.at("k").get<int>();
    auto classes = j.at("classes").get<ClassList>();
    auto edges = j.at("edges").get<std::vector<Edge>>();
    return make_instance(k, std::move(classes), std::move(edges));
}

json witness_to_json(const RegularityWitness& w) {
    json j;
    j["delta"] = w.delta;
    j["lambda"] = w.tuple.lambda;
    j["c"] = w.tuple.c;
    j["parts"] = w.parts;
    j["sigma"] = w.sigma;
    return j;
}

RegularityWitness witness_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("witness JSON must be an object");
    for (const char* key : {"delta", "lambda", "c", "parts", "sigma"})
        if (!j.contains(key)) throw std::invalid_argument(std::string("witness JSON requires ") + key);
    RegularityWitness w;
    w.delta = j.at("delta").get<double>();
    w.tuple.lambda = j.at("lambda").get<double>();
    w.tuple.c = j.at("c").get<std::vector<double>>();
    w.parts = j.at("parts").get<std::vector<std::vector<std::vector<std::int32_t>>>>();
    w.sigma = j.at("sigma").get<std::vector<Edge>>();
    return w;
}

json outcome_to_json(const VerificationOutcome& out) {
    json j;
    j["passed"] = out.passed;
    j["structurally_valid"] = out.structurally_valid;
    j["structural_errors"] = out.structural_errors;
    j["mode"] = out.strong_requested ? "strong" : "weak";
    j["meagre_mass"] = out.meagre_mass;
    j["bad_mass"] = out.bad_mass;
    j["max_size_ratio"] = out.max_size_ratio;
    j["offending_cells"] = out.offending_cells;
    j["equipartition_slack"] = out.equipartition_slack;
    return j;
}

json report_to_json(const BoundReport& rep) {
    json j;
    j["n"] = rep.n;
    j["epsilon"] = rep.epsilon;
    j["exact_edges"] = rep.exact_edges;
    j["f_value"] = rep.f_value;
    j["e_value"] = rep.e_value;
    j["kst_exponent"] = rep.kst_exponent;
    j["erdos_exponent"] = rep.erdos_exponent;
    j["gamma"] = rep.gamma;
    return j;
}

json estimate_to_json(const TupleEstimate& est) {
    json j;
    j["c_hat"] = est.c_hat;
    j["lambda_hat"] = est.lambda_hat;
    j["fit_valid"] = est.fit_valid;
    j["budget_exhausted"] = est.budget_exhausted;
    j["residuals"] = est.residuals;
    j["points"] = json::array();
    for (const auto& p : est.points) {
        json pj;
        pj["delta"] = p.delta;
        pj["found"] = p.found;
        pj["block_counts"] = p.block_counts;
        pj["bad_fraction"] = p.bad_fraction;
        pj["evaluations"] = p.evaluations;
        j["points"].push_back(std::move(pj));
    }
    return j;
}

json audit_to_json(const DecompositionAudit& audit) {
    json j;
    j["i1"] = audit.i1;
    j["i2"] = audit.i2;
    j["sigma_count"] = audit.sigma_count;
    j["sigma_cap"] = audit.sigma_cap;
    j["near_equal_blocks"] = audit.near_equal_blocks;
    j["per_class_block_edges"] = audit.per_class_block_edges;
    return j;
}

json refine_to_json(const RefineResult& res) {
    json j;
    j["witness"] = witness_to_json(res.witness);
    json s;
    s["piece_size"] = res.stats.piece_size;
    s["full_blocks"] = res.stats.full_blocks;
    s["remainder_blocks"] = res.stats.remainder_blocks;
    s["remainder_mass"] = res.stats.remainder_mass;
    s["bad_mass"] = res.stats.bad_mass;
    j["stats"] = std::move(s);
    return j;
}

json sweep_rows_to_json(const std::vector<SweepRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["family"] = r.family;
        j["params"] = r.params;
        j["k"] = r.k;
        j["u"] = r.u;
        j["n"] = r.n;
        j["edges"] = r.edges;
        j["free"] = r.free_flag;
        j["f_value"] = r.f_value;
        j["e_value"] = r.e_value;
        j["kst_exp"] = r.kst_exp;
        j["erdos_exp"] = r.erdos_exp;
        j["ratio"] = r.ratio;
        arr.push_back(std::move(j));
    }
    return arr;
}

json incidence_rows_to_json(const std::vector<IncidenceRow>& rows) {
    json arr = json::array();
    for (const auto& r : rows) {
        json j;
        j["q"] = r.q;
        j["points"] = r.points;
        j["lines"] = r.lines;
        j["incidences"] = r.incidences;
        j["k22_free"] = r.k22_free;
        arr.push_back(std::move(j));
    }
    return arr;
}

FamilySpec family_spec_from_json(const json& j) {
    if (!j.is_object() || !j.contains("name")) throw std::invalid_argument("family spec requires a name");
    FamilySpec spec;
    spec.name = j.at("name").get<std::string>();
    if (j.contains("params")) spec.params = j.at("params").get<std::map<std::string, double>>();
    if (j.contains("residues")) spec.residues = j.at("residues").get<std::vector<std::int64_t>>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    return spec;
}

SweepConfig sweep_config_from_json(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("sweep config must be a JSON object");
    SweepConfig config;
    if (!j.contains("family")) throw std::invalid_argument("sweep config requires family");
    config.family = family_spec_from_json(j.at("family"));
    if (j.contains("grid_param")) config.grid_param = j.at("grid_param").get<std::string>();
    if (j.contains("grid")) config.grid = j.at("grid").get<std::vector<std::int64_t>>();
    if (j.contains("u")) config.u = j.at("u").get<int>();
    if (j.contains("c")) config.tuple.c = j.at("c").get<std::vector<double>>();
    if (j.contains("lambda")) config.tuple.lambda = j.at("lambda").get<double>();
    if (j.contains("epsilon")) config.epsilon = j.at("epsilon").get<double>();
    if (j.contains("out")) config.out_path = j.at("out").get<std::string>();
    if (j.contains("format")) config.format = j.at("format").get<std::string>();
    if (j.contains("seed")) config.seed = j.at("seed").get<std::uint64_t>();
    return config;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    json j;
    in >> j;
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
    out << text;
}

} // namespace zlab
