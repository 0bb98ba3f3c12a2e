#pragma once
// End-to-end experiment driver: build a model and objective, construct the
// product, certify the winning structure, run planning episodes, and emit
// machine-readable result records.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "pltl/automata.hpp"
#include "pltl/belief_support.hpp"
#include "pltl/planner.hpp"
#include "pltl/pomdp.hpp"
#include "pltl/product.hpp"

namespace pltl {

struct ExperimentConfig {
    // Model source: a generator family (with size parameter) or a file.
    std::string family;
    int n = 0;
    std::string model_path;
    // Objective source: a named benchmark formula, a raw LTL string over
    // the model's atomic propositions, or an automaton file.
    std::string formula;
    std::string hoa_path;

    PlannerConfig planner;
    int episodes = 100;
    std::uint64_t seed = 1;
    int jobs = 1;
    std::string json_out;
    std::string csv_out;
};

// Flat `key = value` document with '#' comments. Unknown keys are errors.
ExperimentConfig parse_experiment_config(const std::string& text);

// 95% Wilson score interval for `successes` out of `trials`.
std::pair<double, double> wilson_interval(int successes, int trials);

// Shortest decimal representation that round-trips.
std::string format_double(double x);

// Everything upstream of episode execution, shared by the subcommands.
struct Pipeline {
    Pomdp model;
    LDBA automaton;
    Product product;
    std::vector<int> state_winning;  // almost-sure product states (0/1)
    Bsmdp bsmdp;
    CertifiedStructure certified;
    double certification_seconds = 0.0;
};
Pipeline build_pipeline(const ExperimentConfig& cfg);

struct ResultRecord {
    int product_states = 0;
    int product_observations = 0;
    long product_entries = 0;
    double sr_seconds = 0.0;     // certification wall time
    double pomcp_seconds = 0.0;  // planning wall time
    int episodes = 0;
    int successes = 0;
    double pr_hat = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double mean_certified_bound = 0.0;  // over episodes that switched
    int switched = 0;
    std::uint64_t seed = 0;
    std::vector<Outcome> outcomes;     // per episode, in episode order
    std::vector<char> episode_switched;
};

// Runs the full pipeline plus `episodes` planning episodes. The env var
// POMDP_LTL_SEED, when set, overrides the configured seed. Writes the JSON
// and CSV outputs when configured.
ResultRecord run_experiment(const ExperimentConfig& cfg);

// Serialisations. The JSON places wall-clock times under a separate
// "timing" key so determinism checks can ignore them.
std::string result_json(const ResultRecord& r, const ExperimentConfig& cfg);
std::string result_csv_header();
std::string result_csv_row(const ResultRecord& r, const ExperimentConfig& cfg);

// Certification report: winning supports as state-name lists, the
// partially-winning supports of the explored universe with their certified
// contained supports, and per-component action restrictions.
std::string certification_report_json(const Product& p, const Bsmdp& b,
                                      const CertifiedStructure& c);

}  // namespace pltl
