#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "retsurv/model.hpp"
#include "retsurv/rng.hpp"

namespace retsurv {

// Randomness feed for one path: inter-arrival times (conditioned on the
// elapsed time w at the segment start) and claim sizes. Tests substitute
// forced sequences.
class EventSource {
public:
    virtual ~EventSource() = default;
    virtual double interarrival(double w) = 0;
    virtual double claim() = 0;
};

class RandomEventSource : public EventSource {
public:
    RandomEventSource(const ModelParams& params, std::uint64_t seed,
                      std::uint64_t path_index);
    double interarrival(double w) override;
    double claim() override;

private:
    const ModelParams* params_;
    PathStream stream_;
};

struct PathEvent {
    double time;           // claim arrival
    double claim;          // gross claim size
    double retention;      // q in force at the arrival
    double surplus_after;  // post-jump surplus
};

struct PathRecord {
    bool ruined = false;
    std::optional<double> ruin_time;
    std::uint64_t n_claims = 0;
    State final_state{};  // at min(t_end, ruin time)
    std::vector<PathEvent> events;
};

// Evolves the controlled surplus exactly between claims. Constant policies
// flow each inter-claim segment in closed form; table policies freeze q over
// sub-steps of length min(grid ds, gap/20). Drift-induced crossings of 0 are
// located analytically. Runs until t_end or ruin.
PathRecord simulate_path(const ModelParams& params, const Policy& policy,
                         const State& start, EventSource& source,
                         double t_end, bool record_events = false);

struct EstimateCI {
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t n_paths = 0;
    std::uint64_t seed = 0;
};

// Survival probability to the horizon under the policy; one counter-based
// stream per path index, so results do not depend on the worker count.
EstimateCI estimate_survival(const ModelParams& params, const Policy& policy,
                             const State& start, std::uint64_t n_paths,
                             std::uint64_t seed);

// Mean of value(stopped state) with stopping time min(s + h, ruin, T);
// ruined paths contribute 0. Used by the dynamic-programming check.
// Averaging uses fixed 4096-path blocks combined in index order, so the
// result is byte-identical for any worker count.
EstimateCI estimate_stopped_value(
    const ModelParams& params, const Policy& policy, const State& start,
    double h, const std::vector<double>& value, const GridSpec& grid,
    std::uint64_t n_paths, std::uint64_t seed);

}  // namespace retsurv
