#pragma once

#include <variant>

namespace retsurv {

// Inter-arrival laws, parametrized by their hazard rate lambda(w).
struct ConstantRate {
    double rate;  // lambda(w) = rate
};

struct Erlang {
    int k;        // shape (number of exponential stages)
    double rate;  // stage rate rho
};

struct WeibullHazard {
    double shape;  // a; a > 1 gives increasing hazard with lambda(0) = 0
    double scale;  // b
};

using HazardModel = std::variant<ConstantRate, Erlang, WeibullHazard>;

// lambda(w) = f(w) / (1 - F(w)).
double hazard(const HazardModel& model, double w);

// Lambda(w) = integral of the hazard over [0, w].
double cumulative_hazard(const HazardModel& model, double w);

// Lambda(w + dt) - Lambda(w), computed without cancellation where the
// variant allows (constant rate gives exactly rate * dt for every w).
double cumulative_hazard_between(const HazardModel& model, double w, double dt);

// Waiting time t to the next claim given elapsed time w, i.e. the solution
// of Lambda(w + t) - Lambda(w) = -ln(u). Closed form where available,
// otherwise a doubling bracket plus bisection to relative tolerance 1e-12.
double sample_interarrival(const HazardModel& model, double w, double u);

// Claim-size laws.
struct ExponentialClaim {
    double mean;  // mu; G(y) = 1 - exp(-y/mu)
};

struct GammaClaim {
    double shape;
    double scale;
};

struct LogNormalClaim {
    double meanlog;  // mean of ln(U)
    double sdlog;    // standard deviation of ln(U)
};

using ClaimDistribution =
    std::variant<ExponentialClaim, GammaClaim, LogNormalClaim>;

double claim_cdf(const ClaimDistribution& dist, double y);
double claim_quantile(const ClaimDistribution& dist, double u);
double claim_sample(const ClaimDistribution& dist, double u);

}  // namespace retsurv
