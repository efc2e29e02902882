#ifndef SHADOWSIM_CONFIG_HPP
#define SHADOWSIM_CONFIG_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "shadowsim/simulate.hpp"

namespace shadowsim {

// Invalid or unknown configuration input; maps to exit code 1.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Metric { laplace, coverage, throughput, delay };

struct SweepSpec {
    // "none", "delta" (grid spacing), "lambda_d" (daughters per mother with
    // lambda_m * lambda_d held fixed), or "obstacles" ([lambda_b, length] pairs).
    std::string variable = "none";
    std::vector<std::vector<double>> values;
};

struct ExperimentConfig {
    std::string name;
    Metric metric = Metric::coverage;
    Scenario scenario;  // mode field is ignored; both modes are always run
    std::vector<double> theta_db;
    std::vector<double> s_grid;  // laplace metric only
    SweepSpec sweep;
    int delay_n_max = 100;
    std::size_t reps = 100000;
    std::uint64_t seed = 1;
    std::string out;

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_json_text(const std::string& text, const std::string& origin);

    // One (label, scenario) pair per sweep value, mode left unset.
    std::vector<std::pair<std::string, Scenario>> expand_sweep() const;
};

} // namespace shadowsim

#endif
