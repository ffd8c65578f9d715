#include "retsurv/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

namespace retsurv {

namespace {

void require_elapsed(double w) {
    if (!std::isfinite(w) || w < 0.0)
        throw std::domain_error("elapsed time must be finite and >= 0");
}

void require_open_unit(double u) {
    if (!(u > 0.0 && u < 1.0))
        throw std::domain_error("uniform draw must lie in (0,1)");
}

// ln of the truncated exponential series sum_{n<k} (rho t)^n / n!,
// evaluated in log space so large rho*t cannot overflow.
double log_erlang_series(int k, double rho_t) {
    if (rho_t == 0.0) return 0.0;
    const double l = std::log(rho_t);
    double lmax = 0.0;
    for (int n = 1; n < k; ++n)
        lmax = std::max(lmax, n * l - std::lgamma(n + 1.0));
    double acc = 0.0;
    for (int n = 0; n < k; ++n)
        acc += std::exp(n * l - std::lgamma(n + 1.0) - lmax);
    return lmax + std::log(acc);
}

// Generic inverse of t -> Lambda(w+t) - Lambda(w) at a given target:
// doubling bracket followed by bisection to relative tolerance 1e-12.
double invert_hazard_increment(const HazardModel& model, double w,
                               double target) {
    double hi = 1.0;
    int doublings = 0;
    while (cumulative_hazard_between(model, w, hi) < target) {
        hi *= 2.0;
        if (++doublings > 1100)
            throw std::runtime_error(
                "sample_interarrival: bracket expansion failed");
    }
    double lo = 0.0;
    for (int it = 0; it < 500; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (cumulative_hazard_between(model, w, mid) < target)
            lo = mid;
        else
            hi = mid;
        if (hi - lo <= 1e-12 * hi) return hi;
    }
    throw std::runtime_error("sample_interarrival: bisection did not converge");
}

}  // namespace

double hazard(const HazardModel& model, double w) {
    require_elapsed(w);
    return std::visit(
        [w](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ConstantRate>) {
                return m.rate;
            } else if constexpr (std::is_same_v<M, Erlang>) {
                if (m.k == 1) return m.rate;
                if (w == 0.0) return 0.0;
                const double rho_t = m.rate * w;
                const double lnum = std::log(m.rate) +
                                    (m.k - 1) * std::log(rho_t) -
                                    std::lgamma(static_cast<double>(m.k));
                return std::exp(lnum - log_erlang_series(m.k, rho_t));
            } else {
                return (m.shape / m.scale) *
                       std::pow(w / m.scale, m.shape - 1.0);
            }
        },
        model);
}

double cumulative_hazard(const HazardModel& model, double w) {
    require_elapsed(w);
    return std::visit(
        [w](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ConstantRate>) {
                return m.rate * w;
            } else if constexpr (std::is_same_v<M, Erlang>) {
                return m.rate * w - log_erlang_series(m.k, m.rate * w);
            } else {
                return std::pow(w / m.scale, m.shape);
            }
        },
        model);
}

double cumulative_hazard_between(const HazardModel& model, double w,
                                 double dt) {
    require_elapsed(w);
    require_elapsed(dt);
    if (const auto* c = std::get_if<ConstantRate>(&model))
        return c->rate * dt;
    return cumulative_hazard(model, w + dt) - cumulative_hazard(model, w);
}

double sample_interarrival(const HazardModel& model, double w, double u) {
    require_elapsed(w);
    require_open_unit(u);
    const double target = -std::log(u);
    return std::visit(
        [&](const auto& m) -> double {
            using M = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<M, ConstantRate>) {
                return target / m.rate;
            } else if constexpr (std::is_same_v<M, WeibullHazard>) {
                const double lw = std::pow(w / m.scale, m.shape);
                return m.scale * std::pow(lw + target, 1.0 / m.shape) - w;
            } else {
                if (m.k == 1) return target / m.rate;
                return invert_hazard_increment(model, w, target);
            }
        },
        model);
}

double claim_cdf(const ClaimDistribution& dist, double y) {
    if (!std::isfinite(y) || y < 0.0)
        throw std::domain_error("claim size must be finite and >= 0");
    return std::visit(
        [y](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, ExponentialClaim>) {
                return -std::expm1(-y / d.mean);
            } else if constexpr (std::is_same_v<D, GammaClaim>) {
                return boost::math::gamma_p(d.shape, y / d.scale);
            } else {
                if (y == 0.0) return 0.0;
                const double z = (std::log(y) - d.meanlog) / d.sdlog;
                return 0.5 * std::erfc(-z / std::sqrt(2.0));
            }
        },
        dist);
}

double claim_quantile(const ClaimDistribution& dist, double u) {
    require_open_unit(u);
    return std::visit(
        [u](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, ExponentialClaim>) {
                return -d.mean * std::log1p(-u);
            } else if constexpr (std::is_same_v<D, GammaClaim>) {
                return d.scale * boost::math::gamma_p_inv(d.shape, u);
            } else {
                const double z = boost::math::erf_inv(2.0 * u - 1.0);
                return std::exp(d.meanlog + d.sdlog * std::sqrt(2.0) * z);
            }
        },
        dist);
}

double claim_sample(const ClaimDistribution& dist, double u) {
    return claim_quantile(dist, u);
}

}  // namespace retsurv
