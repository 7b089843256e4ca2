#include "inma/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace inma {

namespace {

using nlohmann::json;

InnovationSpec innovation_from_json(const json& j) {
    const std::string type = j.at("type").get<std::string>();
    if (type == "poisson") return Poisson{j.at("mu").get<double>()};
    if (type == "negbin") return NegBin{j.at("n").get<double>(), j.at("pi").get<double>()};
    if (type == "deterministic") return Deterministic{j.at("c").get<std::uint64_t>()};
    throw std::invalid_argument("unknown innovation type '" + type +
                                "' (expected poisson, negbin or deterministic)");
}

json innovation_to_json(const InnovationSpec& spec) {
    json j;
    j["type"] = innovation_name(spec);
    if (const auto* p = std::get_if<Poisson>(&spec)) {
        j["mu"] = p->mu;
    } else if (const auto* nb = std::get_if<NegBin>(&spec)) {
        j["n"] = nb->n;
        j["pi"] = nb->pi;
    } else {
        j["c"] = std::get<Deterministic>(spec).c;
    }
    return j;
}

CrossDependence crossdep_from_string(const std::string& name) {
    if (name == "independence") return CrossDependence::kIndependence;
    if (name == "spread") return CrossDependence::kSpread;
    throw std::invalid_argument("unknown cross_dependence '" + name +
                                "' (expected independence or spread)");
}

}  // namespace

InmaModel RunConfig::build_model() const {
    if (multilateral()) {
        throw std::invalid_argument("config declares a multilateral model; "
                                    "this operation needs a unilateral one");
    }
    return InmaModel{BetaMatrix::from_rows(beta_rows), innovation, crossdep};
}

MultilateralModel RunConfig::build_multilateral_model() const {
    std::vector<double> flat;
    for (const auto& row : beta_rows) flat.insert(flat.end(), row.begin(), row.end());
    return MultilateralModel(p1, p2, q1, q2, flat, innovation, crossdep);
}

std::string RunConfig::to_json() const {
    json j;
    j["model"]["order"] = {q1, q2};
    if (multilateral()) j["model"]["lead_order"] = {p1, p2};
    j["model"]["beta"] = beta_rows;
    j["model"]["innovation"] = innovation_to_json(innovation);
    j["model"]["cross_dependence"] = cross_dependence_name(crossdep);
    j["run"] = {{"n1", n1},           {"n2", n2},
                {"seed", seed},       {"workers", workers},
                {"output_dir", output_dir}};
    j["analysis"] = {{"lag_box", {lag_box_k, lag_box_l}},
                     {"u_grid", u_grid},
                     {"z_threshold", z_threshold},
                     {"replications", replications},
                     {"bootstrap_resamples", bootstrap_resamples}};
    j["oracle"] = {{"mass_bound", oracle_mass_bound}, {"state_limit", oracle_state_limit}};
    return j.dump(2);
}

RunConfig RunConfig::from_json_text(const std::string& text) {
    const json j = json::parse(text);
    RunConfig cfg;

    const json& model = j.at("model");
    const auto order = model.at("order");
    if (!order.is_array() || order.size() != 2) {
        throw std::invalid_argument("model.order must be [q1, q2]");
    }
    cfg.q1 = order[0].get<int>();
    cfg.q2 = order[1].get<int>();
    if (model.contains("lead_order")) {
        const auto lead = model.at("lead_order");
        if (!lead.is_array() || lead.size() != 2) {
            throw std::invalid_argument("model.lead_order must be [p1, p2]");
        }
        cfg.p1 = lead[0].get<int>();
        cfg.p2 = lead[1].get<int>();
    }
    cfg.beta_rows = model.at("beta").get<std::vector<std::vector<double>>>();
    const std::size_t expected_rows = static_cast<std::size_t>(cfg.p1 + cfg.q1 + 1);
    const std::size_t expected_cols = static_cast<std::size_t>(cfg.p2 + cfg.q2 + 1);
    if (cfg.beta_rows.size() != expected_rows) {
        throw std::invalid_argument("model.beta has " + std::to_string(cfg.beta_rows.size()) +
                                    " rows, order requires " + std::to_string(expected_rows));
    }
    for (const auto& row : cfg.beta_rows) {
        if (row.size() != expected_cols) {
            throw std::invalid_argument("model.beta has a row of length " +
                                        std::to_string(row.size()) + ", order requires " +
                                        std::to_string(expected_cols));
        }
    }
    cfg.innovation = innovation_from_json(model.at("innovation"));
    cfg.crossdep = crossdep_from_string(model.at("cross_dependence").get<std::string>());

    if (j.contains("run")) {
        const json& run = j.at("run");
        cfg.n1 = run.value("n1", cfg.n1);
        cfg.n2 = run.value("n2", cfg.n2);
        cfg.seed = run.value("seed", cfg.seed);
        cfg.workers = run.value("workers", cfg.workers);
        cfg.output_dir = run.value("output_dir", cfg.output_dir);
    }
    if (j.contains("analysis")) {
        const json& analysis = j.at("analysis");
        if (analysis.contains("lag_box")) {
            cfg.lag_box_k = analysis.at("lag_box")[0].get<int>();
            cfg.lag_box_l = analysis.at("lag_box")[1].get<int>();
        }
        cfg.u_grid = analysis.value("u_grid", cfg.u_grid);
        cfg.z_threshold = analysis.value("z_threshold", cfg.z_threshold);
        cfg.replications = analysis.value("replications", cfg.replications);
        cfg.bootstrap_resamples = analysis.value("bootstrap_resamples", cfg.bootstrap_resamples);
    }
    if (j.contains("oracle")) {
        const json& oracle = j.at("oracle");
        cfg.oracle_mass_bound = oracle.value("mass_bound", cfg.oracle_mass_bound);
        cfg.oracle_state_limit = oracle.value("state_limit", cfg.oracle_state_limit);
    }
    return cfg;
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return from_json_text(text);
}

void RunConfig::save(const std::filesystem::path& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
    out << to_json() << '\n';
}

}  // namespace inma
