#pragma once

#include <cstdint>
#include <string>

#include "retsurv/model.hpp"

namespace retsurv {

struct SolverConfig {
    int n_s = 200;
    int n_x = 200;
    int n_q = 21;
    int n_quad = 64;
};

struct SimulateConfig {
    std::uint64_t n_paths = 100000;
    std::uint64_t seed = 1;
    State init{0.0, 2.0, 0.0};
    std::string policy = "constant:1";  // "constant:<q>" or "table:<csv path>"
};

struct OutputConfig {
    std::string dir = ".";
    std::string format = "csv";
};

struct RunConfig {
    ModelParams model;
    SolverConfig solver;
    SimulateConfig simulate;
    OutputConfig output;

    // Normalized sorted key=value rendering; equal configs hash equal.
    std::string canonical() const;
    std::uint64_t config_hash() const;
};

// Sectioned key=value text ([model], [solver], [simulate], [output]).
// Unknown sections, unknown keys, duplicates, malformed numbers, and
// constraint violations all throw std::runtime_error naming the line
// and key. The [model] section is required in full; everything else
// has the documented defaults above.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

// "constant_rate:R" | "erlang:K,R" | "weibull:SHAPE,SCALE"
HazardModel parse_hazard_spec(const std::string& spec);
// "exponential:MEAN" | "gamma:SHAPE,SCALE" | "lognormal:MEANLOG,SDLOG"
ClaimDistribution parse_claims_spec(const std::string& spec);

std::string hazard_spec_string(const HazardModel& model);
std::string claims_spec_string(const ClaimDistribution& dist);

}  // namespace retsurv
