// Command-line front end: translate objectives, build products, analyse and
// certify models, evaluate rewards, plan episodes, generate benchmark
// models, and run full experiments.

#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "pltl/automata.hpp"
#include "pltl/benchmarks.hpp"
#include "pltl/formula.hpp"
#include "pltl/graph.hpp"
#include "pltl/harness.hpp"
#include "pltl/planner.hpp"
#include "pltl/product.hpp"
#include "pltl/reward.hpp"

using namespace pltl;
using nlohmann::json;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in.good()) throw ModelError("cannot open '" + path + "'");
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(out_path);
        if (!out.good()) throw ModelError("cannot write '" + out_path + "'");
        out << text;
    }
}

// Model/objective flags shared by the pipeline-driven subcommands.
void add_source_options(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--family", cfg.family,
                    "builtin model family (toy, motivating, grid, rocksample, "
                    "hallway)");
    cmd->add_option("--n", cfg.n, "family size parameter");
    cmd->add_option("--model", cfg.model_path, "model file");
    cmd->add_option("--formula", cfg.formula,
                    "objective: a named benchmark formula or an LTL string");
    cmd->add_option("--hoa", cfg.hoa_path, "objective automaton in HOA form");
}

void add_planner_options(CLI::App* cmd, PlannerConfig& p) {
    cmd->add_option("--simulations", p.simulations, "tree searches per step");
    cmd->add_option("--max-depth", p.max_depth, "search depth cap");
    cmd->add_option("--particles", p.particles, "root particle count");
    cmd->add_option("--ucb", p.ucb, "exploration constant");
    cmd->add_option("--step-budget", p.step_budget,
                    "episode step cap (0 = ten times the depth)");
}

LDBA objective_of(const ExperimentConfig& cfg, const Pomdp& m) {
    if (!cfg.hoa_path.empty()) return import_hoa(read_file(cfg.hoa_path));
    std::string text = cfg.formula;
    for (const auto& f : benchmark_formulas())
        if (f.name == cfg.formula) text = f.text;
    Alphabet sigma;
    sigma.ap = m.ap;
    std::set<std::string> names(sigma.ap.begin(), sigma.ap.end());
    return ltl_to_ldba(parse_ltl(text, names), sigma);
}

int run(int argc, char** argv) {
    CLI::App app{"Belief-support policy synthesis and certification for "
                 "POMDPs with temporal-logic objectives"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string out_path, config_path, ltl_text, ap_list, belief_text;
    std::uint64_t episode_index = 0;

    auto* translate = app.add_subcommand(
        "translate", "Translate an LTL formula to an automaton (HOA)");
    translate->add_option("--ltl", ltl_text, "LTL formula")->required();
    translate->add_option("--ap", ap_list,
                          "comma-separated atomic propositions")
        ->required();
    translate->add_option("--out", out_path, "output file (default stdout)");

    auto* product = app.add_subcommand(
        "product", "Build the model-automaton product and print it");
    add_source_options(product, cfg);
    product->add_option("--out", out_path, "output file (default stdout)");

    auto* analyze = app.add_subcommand(
        "analyze", "Summarise the product's end components and winning states");
    add_source_options(analyze, cfg);
    analyze->add_option("--out", out_path, "output file (default stdout)");

    auto* certify = app.add_subcommand(
        "certify", "Certify winning belief supports and print the report");
    add_source_options(certify, cfg);
    certify->add_option("--out", out_path, "output file (default stdout)");

    auto* reward = app.add_subcommand(
        "reward", "Evaluate the certified terminal reward of a belief");
    add_source_options(reward, cfg);
    reward->add_option("--belief", belief_text,
                       "belief as 'state:prob,state:prob,...' over product "
                       "states")
        ->required();
    reward->add_option("--out", out_path, "output file (default stdout)");

    auto* plan = app.add_subcommand("plan", "Run one planning episode");
    add_source_options(plan, cfg);
    add_planner_options(plan, cfg.planner);
    plan->add_option("--seed", cfg.seed, "random seed");
    plan->add_option("--episode", episode_index, "episode stream index");
    plan->add_option("--out", out_path, "output file (default stdout)");

    auto* bench = app.add_subcommand("bench", "Benchmark model utilities");
    bench->require_subcommand(1);
    auto* generate =
        bench->add_subcommand("generate", "Generate a benchmark model file");
    generate->add_option("--family", cfg.family, "model family")->required();
    generate->add_option("--n", cfg.n, "family size parameter");
    generate->add_option("--out", out_path, "output file (default stdout)");

    auto* experiment = app.add_subcommand(
        "experiment", "Run a full certification + planning experiment");
    experiment->add_option("--config", config_path, "flat key = value file")
        ->required();
    std::string json_override, csv_override;
    experiment->add_option("--json-out", json_override, "override JSON output");
    experiment->add_option("--csv-out", csv_override, "override CSV output");

    CLI11_PARSE(app, argc, argv);

    if (translate->parsed()) {
        Alphabet sigma;
        std::string item;
        std::istringstream in(ap_list);
        while (std::getline(in, item, ',')) sigma.ap.push_back(item);
        std::set<std::string> names(sigma.ap.begin(), sigma.ap.end());
        LDBA aut = ltl_to_ldba(parse_ltl(ltl_text, names), sigma);
        emit(export_hoa(aut, ltl_text), out_path);
        return 0;
    }
    if (product->parsed()) {
        Pomdp m = cfg.family.empty() ? parse_pomdp(read_file(cfg.model_path))
                                     : make_benchmark(cfg.family, cfg.n);
        emit(format_product(build_product(m, objective_of(cfg, m))), out_path);
        return 0;
    }
    if (analyze->parsed()) {
        Pipeline pl = build_pipeline(cfg);
        ExplicitMDP mdp = underlying_mdp(pl.product);
        const auto mecs = mec_decomposition(mdp);
        int accepting_mecs = 0;
        for (const auto& ec : mecs) {
            bool acc = false;
            for (int s : ec.states) acc = acc || mdp.accepting[s];
            accepting_mecs += acc;
        }
        int winning = 0;
        for (char w : pl.state_winning) winning += w;
        json doc = {{"product",
                     {{"states", pl.product.pomdp.state_count()},
                      {"observations", pl.product.reported_observations()},
                      {"transitions", pl.product.pomdp.transition_entries()}}},
                    {"end_components", mecs.size()},
                    {"accepting_end_components", accepting_mecs},
                    {"winning_states", winning},
                    {"explored_supports", pl.bsmdp.supports.size()},
                    {"winning_supports", pl.certified.winning().size()}};
        emit(doc.dump(2) + "\n", out_path);
        return 0;
    }
    if (certify->parsed()) {
        Pipeline pl = build_pipeline(cfg);
        emit(certification_report_json(pl.product, pl.bsmdp, pl.certified),
             out_path);
        return 0;
    }
    if (reward->parsed()) {
        Pipeline pl = build_pipeline(cfg);
        Belief b;
        std::string item;
        std::istringstream in(belief_text);
        while (std::getline(in, item, ',')) {
            const auto colon = item.rfind(':');
            if (colon == std::string::npos)
                throw ModelError("belief entry '" + item +
                                 "' is not 'state:prob'");
            b.emplace_back(pl.product.pomdp.state_id(item.substr(0, colon)),
                           std::stod(item.substr(colon + 1)));
        }
        std::sort(b.begin(), b.end());
        RewardResult res = sound_reward(b, pl.certified);
        json argmax = json::array();
        for (int s : res.argmax) argmax.push_back(pl.product.pomdp.states[s]);
        json doc = {{"value", res.value}, {"argmax", argmax}};
        emit(doc.dump(2) + "\n", out_path);
        return 0;
    }
    if (plan->parsed()) {
        if (const char* env = std::getenv("POMDP_LTL_SEED"))
            cfg.seed = std::strtoull(env, nullptr, 10);
        Pipeline pl = build_pipeline(cfg);
        Planner planner(pl.product, pl.bsmdp, pl.certified, cfg.planner);
        EpisodeResult er = planner.run_episode(cfg.seed, episode_index);
        json steps = json::array();
        for (const auto& st : er.steps) {
            json rec = {{"value", st.value}};
            if (st.action >= 0) {
                rec["action"] = pl.product.pomdp.actions[st.action];
                if (st.observation >= 0)
                    rec["observation"] =
                        pl.product.pomdp.observations[st.observation];
            } else {
                json target = json::array();
                for (int s : st.terminal_target)
                    target.push_back(pl.product.pomdp.states[s]);
                rec["terminal_target"] = target;
            }
            steps.push_back(rec);
        }
        const char* names[] = {"success", "failure", "dead_end",
                               "budget_exhausted"};
        json doc = {{"outcome", names[static_cast<int>(er.outcome)]},
                    {"switched", er.switched},
                    {"certified_bound", er.certified_bound},
                    {"steps", steps}};
        emit(doc.dump(2) + "\n", out_path);
        return 0;
    }
    if (generate->parsed()) {
        emit(format_pomdp(make_benchmark(cfg.family, cfg.n)), out_path);
        return 0;
    }
    if (experiment->parsed()) {
        ExperimentConfig ec = parse_experiment_config(read_file(config_path));
        if (!json_override.empty()) ec.json_out = json_override;
        if (!csv_override.empty()) ec.csv_out = csv_override;
        ResultRecord r = run_experiment(ec);
        std::cout << "episodes=" << r.episodes << " successes=" << r.successes
                  << " pr_hat=" << format_double(r.pr_hat) << " ci=["
                  << format_double(r.ci_low) << ", "
                  << format_double(r.ci_high) << "]"
                  << " sr_seconds=" << format_double(r.sr_seconds)
                  << " pomcp_seconds=" << format_double(r.pomcp_seconds)
                  << "\n";
        return 0;
    }
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
