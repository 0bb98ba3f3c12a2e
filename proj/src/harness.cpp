#include "pltl/harness.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "pltl/benchmarks.hpp"
#include "pltl/formula.hpp"
#include "pltl/graph.hpp"
#include "pltl/reward.hpp"

namespace pltl {
namespace {

using nlohmann::json;

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ModelError("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

const char* outcome_name(Outcome o) {
    switch (o) {
        case Outcome::success: return "success";
        case Outcome::failure: return "failure";
        case Outcome::dead_end: return "dead_end";
        case Outcome::budget_exhausted: return "budget_exhausted";
    }
    return "?";
}

std::vector<std::string> support_names(const Support& t, const Pomdp& m) {
    std::vector<std::string> out;
    for (int s : t) out.push_back(m.states[s]);
    return out;
}

std::string support_key(const Support& t, const Pomdp& m) {
    std::string out = "[";
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) out += ", ";
        out += "'" + m.states[t[i]] + "'";
    }
    return out + "]";
}

json config_json(const ExperimentConfig& cfg) {
    return {{"family", cfg.family},
            {"n", cfg.n},
            {"model", cfg.model_path},
            {"formula", cfg.formula},
            {"hoa", cfg.hoa_path},
            {"episodes", cfg.episodes},
            {"seed", cfg.seed},
            {"jobs", cfg.jobs},
            {"planner",
             {{"simulations", cfg.planner.simulations},
              {"max_depth", cfg.planner.max_depth},
              {"particles", cfg.planner.particles},
              {"ucb", cfg.planner.ucb},
              {"step_budget", cfg.planner.step_budget}}}};
}

std::string model_name(const ExperimentConfig& cfg) {
    if (!cfg.family.empty())
        return cfg.n > 0 ? cfg.family + "(" + std::to_string(cfg.n) + ")"
                         : cfg.family;
    return cfg.model_path;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
    ExperimentConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto b = s.find_first_not_of(" \t\r");
        const auto e = s.find_last_not_of(" \t\r");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ModelError("config line " + std::to_string(lineno) +
                             ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "family") cfg.family = value;
            else if (key == "n") cfg.n = std::stoi(value);
            else if (key == "model") cfg.model_path = value;
            else if (key == "formula") cfg.formula = value;
            else if (key == "hoa") cfg.hoa_path = value;
            else if (key == "episodes") cfg.episodes = std::stoi(value);
            else if (key == "seed") cfg.seed = std::stoull(value);
            else if (key == "jobs") cfg.jobs = std::stoi(value);
            else if (key == "simulations") cfg.planner.simulations = std::stoi(value);
            else if (key == "max_depth") cfg.planner.max_depth = std::stoi(value);
            else if (key == "particles") cfg.planner.particles = std::stoi(value);
            else if (key == "ucb") cfg.planner.ucb = std::stod(value);
            else if (key == "step_budget") cfg.planner.step_budget = std::stoi(value);
            else if (key == "json_out") cfg.json_out = value;
            else if (key == "csv_out") cfg.csv_out = value;
            else
                throw ModelError("config line " + std::to_string(lineno) +
                                 ": unknown key '" + key + "'");
        } catch (const std::invalid_argument&) {
            throw ModelError("config line " + std::to_string(lineno) +
                             ": bad value '" + value + "' for '" + key + "'");
        }
    }
    if (cfg.episodes < 1) throw ModelError("episode count must be at least 1");
    if (cfg.jobs < 1) throw ModelError("job count must be at least 1");
    if (cfg.family.empty() && cfg.model_path.empty())
        throw ModelError("config needs a model family or file");
    if (cfg.formula.empty() && cfg.hoa_path.empty())
        throw ModelError("config needs a formula or an automaton file");
    return cfg;
}

std::pair<double, double> wilson_interval(int successes, int trials) {
    if (trials <= 0) return {0.0, 1.0};
    const double z = 1.959963984540054;  // 97.5th normal percentile
    const double n = trials;
    const double p = successes / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = p + z2 / (2.0 * n);
    const double spread =
        z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
    return {std::max(0.0, (centre - spread) / denom),
            std::min(1.0, (centre + spread) / denom)};
}

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

Pipeline build_pipeline(const ExperimentConfig& cfg) {
    Pipeline pl;
    pl.model = cfg.family.empty() ? parse_pomdp(read_file(cfg.model_path))
                                  : make_benchmark(cfg.family, cfg.n);
    if (!cfg.hoa_path.empty()) {
        pl.automaton = import_hoa(read_file(cfg.hoa_path));
    } else {
        std::string text = cfg.formula;
        for (const auto& f : benchmark_formulas())
            if (f.name == cfg.formula) text = f.text;
        Alphabet sigma;
        sigma.ap = pl.model.ap;
        std::set<std::string> names(sigma.ap.begin(), sigma.ap.end());
        pl.automaton = ltl_to_ldba(parse_ltl(text, names), sigma);
    }
    const auto t0 = std::chrono::steady_clock::now();
    pl.product = build_product(pl.model, pl.automaton);
    pl.state_winning = almost_sure_buchi_winning(underlying_mdp(pl.product));
    pl.bsmdp = build_sub_bsmdp(pl.product, pl.state_winning);
    pl.certified = derive_certified_structure(
        pl.bsmdp,
        certify_bs_amecs(bs_mec_decomposition(pl.bsmdp), pl.bsmdp, pl.product));
    pl.certification_seconds = seconds_since(t0);
    return pl;
}

ResultRecord run_experiment(const ExperimentConfig& cfg) {
    ExperimentConfig effective = cfg;
    if (const char* env = std::getenv("POMDP_LTL_SEED"))
        effective.seed = std::strtoull(env, nullptr, 10);

    Pipeline pl = build_pipeline(effective);
    ResultRecord r;
    r.product_states = pl.product.pomdp.state_count();
    r.product_observations = pl.product.reported_observations();
    r.product_entries = pl.product.pomdp.transition_entries();
    r.sr_seconds = pl.certification_seconds;
    r.seed = effective.seed;
    r.episodes = effective.episodes;

    const auto t0 = std::chrono::steady_clock::now();
    Planner planner(pl.product, pl.bsmdp, pl.certified, effective.planner);
    std::vector<EpisodeResult> results(effective.episodes);
    auto worker = [&](int offset) {
        for (int e = offset; e < effective.episodes; e += effective.jobs)
            results[e] = planner.run_episode(effective.seed, e);
    };
    if (effective.jobs == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < effective.jobs; ++j) pool.emplace_back(worker, j);
        for (auto& t : pool) t.join();
    }
    r.pomcp_seconds = seconds_since(t0);

    double bound_sum = 0.0;
    for (const auto& er : results) {
        r.outcomes.push_back(er.outcome);
        r.episode_switched.push_back(er.switched ? 1 : 0);
        if (er.outcome == Outcome::success) ++r.successes;
        if (er.switched) {
            ++r.switched;
            bound_sum += er.certified_bound;
        }
    }
    r.pr_hat = static_cast<double>(r.successes) / r.episodes;
    std::tie(r.ci_low, r.ci_high) = wilson_interval(r.successes, r.episodes);
    r.mean_certified_bound = r.switched ? bound_sum / r.switched : 0.0;

    if (!effective.json_out.empty()) {
        std::ofstream out(effective.json_out);
        out << result_json(r, effective);
    }
    if (!effective.csv_out.empty()) {
        std::ifstream probe(effective.csv_out);
        const bool fresh = !probe.good() || probe.peek() == EOF;
        probe.close();
        std::ofstream out(effective.csv_out, std::ios::app);
        if (fresh) out << result_csv_header();
        out << result_csv_row(r, effective);
    }
    return r;
}

std::string result_json(const ResultRecord& r, const ExperimentConfig& cfg) {
    json outcomes = json::array();
    for (Outcome o : r.outcomes) outcomes.push_back(outcome_name(o));
    json switched = json::array();
    for (char s : r.episode_switched) switched.push_back(s != 0);
    json doc = {
        {"config", config_json(cfg)},
        {"product",
         {{"states", r.product_states},
          {"observations", r.product_observations},
          {"transitions", r.product_entries}}},
        {"results",
         {{"episodes", r.episodes},
          {"successes", r.successes},
          {"pr_hat", r.pr_hat},
          {"ci_low", r.ci_low},
          {"ci_high", r.ci_high},
          {"switched", r.switched},
          {"mean_certified_bound", r.mean_certified_bound},
          {"seed", r.seed},
          {"outcomes", outcomes},
          {"episode_switched", switched}}},
        {"timing",
         {{"sr_seconds", r.sr_seconds}, {"pomcp_seconds", r.pomcp_seconds}}}};
    return doc.dump(2) + "\n";
}

std::string result_csv_header() {
    return "model,formula,product_states,product_observations,"
           "product_transitions,sr_seconds,pomcp_seconds,episodes,pr_hat,"
           "ci_low,ci_high,seed\n";
}

std::string result_csv_row(const ResultRecord& r, const ExperimentConfig& cfg) {
    std::string row = model_name(cfg) + "," +
                      (cfg.hoa_path.empty() ? cfg.formula : cfg.hoa_path);
    row += "," + std::to_string(r.product_states);
    row += "," + std::to_string(r.product_observations);
    row += "," + std::to_string(r.product_entries);
    row += "," + format_double(r.sr_seconds);
    row += "," + format_double(r.pomcp_seconds);
    row += "," + std::to_string(r.episodes);
    row += "," + format_double(r.pr_hat);
    row += "," + format_double(r.ci_low);
    row += "," + format_double(r.ci_high);
    row += "," + std::to_string(r.seed);
    return row + "\n";
}

std::string certification_report_json(const Product& p, const Bsmdp& b,
                                      const CertifiedStructure& c) {
    const Pomdp& m = p.pomdp;
    json winning = json::array();
    for (const Support& t : c.winning()) winning.push_back(support_names(t, m));
    json components = json::array();
    for (const auto& comp : c.components()) {
        json supports = json::array();
        json actions = json::array();
        for (std::size_t i = 0; i < comp.supports.size(); ++i) {
            supports.push_back(support_names(comp.supports[i], m));
            json acts = json::array();
            for (int a : comp.actions[i]) acts.push_back(m.actions[a]);
            actions.push_back(acts);
        }
        components.push_back({{"supports", supports}, {"actions", actions}});
    }
    json partially = json::object();
    for (const Support& t : b.supports) {
        if (t.empty() || !c.is_partially_winning(t)) continue;
        json contained = json::array();
        for (const Support& w : c.contained_winning(t))
            contained.push_back(support_names(w, m));
        partially[support_key(t, m)] = contained;
    }
    json doc = {{"winning_supports", winning},
                {"components", components},
                {"partially_winning", partially}};
    return doc.dump(2) + "\n";
}

}  // namespace pltl
