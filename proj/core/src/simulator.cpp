#include "retsurv/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>

#include "retsurv/distributions.hpp"
#include "retsurv/parallel.hpp"

namespace retsurv {

namespace {

double drift(const ModelParams& params, double q) {
    return params.p * (q * (1.0 + params.eta) - params.eta);
}

}  // namespace

RandomEventSource::RandomEventSource(const ModelParams& params,
                                     std::uint64_t seed,
                                     std::uint64_t path_index)
    : params_(&params), stream_(seed, path_index) {}

double RandomEventSource::interarrival(double w) {
    return sample_interarrival(params_->hazard, w, stream_.next_uniform());
}

double RandomEventSource::claim() {
    return claim_sample(params_->claims, stream_.next_uniform());
}

PathRecord simulate_path(const ModelParams& params, const Policy& policy,
                         const State& start, EventSource& source,
                         double t_end, bool record_events) {
    if (!(t_end >= start.s) || !std::isfinite(t_end))
        throw std::domain_error("t_end must be finite and >= start.s");
    const auto* table = std::get_if<TablePolicy>(&policy);

    PathRecord rec;
    double t = start.s;
    double x = start.x;
    double w = start.w;

    auto ruin_at = [&](double when) {
        rec.ruined = true;
        rec.ruin_time = when;
        t = when;
    };

    if (x < 0.0) ruin_at(t);
    while (!rec.ruined && t < t_end) {
        const double gap = source.interarrival(w);
        const double tc = t + gap;
        const double seg_end = std::min(tc, t_end);

        if (table == nullptr) {
            // q is constant along the flow: one exact affine segment.
            const double q = evaluate_policy(policy, {t, x, w});
            const double slope = drift(params, q);
            const double span = seg_end - t;
            if (slope < 0.0 && x + slope * span < 0.0) {
                ruin_at(t + x / -slope);
                break;
            }
            x += slope * span;
            w += span;
            t = seg_end;
        } else {
            // Freeze q over short sub-steps; the flow is exact per sub-step.
            while (t < seg_end) {
                const double left = seg_end - t;
                const double h = std::min({table->grid.ds, gap / 20.0, left});
                const double q = evaluate_policy(policy, {t, x, w});
                const double slope = drift(params, q);
                if (slope < 0.0 && x + slope * h < 0.0) {
                    ruin_at(t + x / -slope);
                    break;
                }
                x += slope * h;
                w += h;
                if (h == left)
                    t = seg_end;
                else
                    t += h;
            }
            if (rec.ruined) break;
        }

        if (tc >= t_end) break;

        const double q = evaluate_policy(policy, {tc, x, w});
        const double u = source.claim();
        x -= q * u;
        w = 0.0;
        rec.n_claims += 1;
        if (record_events) rec.events.push_back({tc, u, q, x});
        if (x < 0.0) ruin_at(tc);
    }

    rec.final_state = {std::min(t, t_end), x, w};
    return rec;
}

EstimateCI estimate_survival(const ModelParams& params, const Policy& policy,
                             const State& start, std::uint64_t n_paths,
                             std::uint64_t seed) {
    if (n_paths == 0) throw std::domain_error("n_paths must be >= 1");
    std::atomic<std::uint64_t> survived{0};
    parallel_for(0, n_paths, [&](std::size_t lo, std::size_t hi) {
        std::uint64_t count = 0;
        for (std::size_t path = lo; path < hi; ++path) {
            RandomEventSource source(params, seed, path);
            const PathRecord rec =
                simulate_path(params, policy, start, source, params.T);
            count += rec.ruined ? 0 : 1;
        }
        survived.fetch_add(count, std::memory_order_relaxed);
    });
    EstimateCI out;
    out.n_paths = n_paths;
    out.seed = seed;
    out.mean = static_cast<double>(survived.load()) / n_paths;
    out.std_error = std::sqrt(out.mean * (1.0 - out.mean) / n_paths);
    return out;
}

EstimateCI estimate_stopped_value(
    const ModelParams& params, const Policy& policy, const State& start,
    double h, const std::vector<double>& value, const GridSpec& grid,
    std::uint64_t n_paths, std::uint64_t seed) {
    if (n_paths == 0) throw std::domain_error("n_paths must be >= 1");
    if (!(h >= 0.0) || !std::isfinite(h))
        throw std::domain_error("h must be finite and >= 0");
    const double t_stop = std::min(start.s + h, params.T);
    const double eta_p = params.eta * params.p;

    constexpr std::uint64_t kBlock = 4096;
    const std::uint64_t n_blocks = (n_paths + kBlock - 1) / kBlock;
    std::vector<double> block_sum(n_blocks, 0.0);
    std::vector<double> block_sq(n_blocks, 0.0);
    parallel_for(0, n_blocks, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t b = lo; b < hi; ++b) {
            const std::uint64_t first = b * kBlock;
            const std::uint64_t last = std::min(first + kBlock, n_paths);
            double acc = 0.0;
            double acc2 = 0.0;
            for (std::uint64_t path = first; path < last; ++path) {
                RandomEventSource source(params, seed, path);
                const PathRecord rec =
                    simulate_path(params, policy, start, source, t_stop);
                const double v =
                    rec.ruined ? 0.0
                               : interpolate_field(grid, eta_p, value,
                                                   rec.final_state);
                acc += v;
                acc2 += v * v;
            }
            block_sum[b] = acc;
            block_sq[b] = acc2;
        }
    });

    double total = 0.0;
    double total_sq = 0.0;
    for (std::uint64_t b = 0; b < n_blocks; ++b) {
        total += block_sum[b];
        total_sq += block_sq[b];
    }
    EstimateCI out;
    out.n_paths = n_paths;
    out.seed = seed;
    out.mean = total / n_paths;
    const double var = std::max(total_sq / n_paths - out.mean * out.mean, 0.0);
    out.std_error = std::sqrt(var / n_paths);
    return out;
}

}  // namespace retsurv
