#include "retsurv/config.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace retsurv {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

[[noreturn]] void fail_at(int line, const std::string& what) {
    throw std::runtime_error("config line " + std::to_string(line) + ": " +
                             what);
}

double parse_number(const std::string& text, int line,
                    const std::string& key) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        fail_at(line, "value of '" + key + "' is not a number: '" + text +
                          "'");
    }
    if (pos != text.size())
        fail_at(line, "trailing characters in value of '" + key + "': '" +
                          text + "'");
    return v;
}

std::int64_t parse_integer(const std::string& text, int line,
                           const std::string& key) {
    const double v = parse_number(text, line, key);
    if (v != std::floor(v) || std::abs(v) > 9.0e15)
        fail_at(line, "value of '" + key + "' must be an integer");
    return static_cast<std::int64_t>(v);
}

std::vector<double> spec_args(const std::string& args, std::size_t want,
                              const std::string& name) {
    std::vector<double> out;
    std::stringstream ss(args);
    std::string part;
    while (std::getline(ss, part, ',')) {
        part = trim(part);
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(part, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != part.size())
            throw std::runtime_error("bad argument '" + part + "' in " +
                                     name + " spec");
        out.push_back(v);
    }
    if (out.size() != want)
        throw std::runtime_error(name + " spec needs " +
                                 std::to_string(want) + " argument(s)");
    return out;
}

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

HazardModel parse_hazard_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = trim(spec.substr(0, colon));
    const std::string args =
        colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "constant_rate") {
        const auto a = spec_args(args, 1, "constant_rate");
        return ConstantRate{a[0]};
    }
    if (name == "erlang") {
        const auto a = spec_args(args, 2, "erlang");
        if (a[0] != std::floor(a[0]) || a[0] < 1.0)
            throw std::runtime_error("erlang k must be an integer >= 1");
        return Erlang{static_cast<int>(a[0]), a[1]};
    }
    if (name == "weibull") {
        const auto a = spec_args(args, 2, "weibull");
        return WeibullHazard{a[0], a[1]};
    }
    throw std::runtime_error("unknown hazard '" + name + "'");
}

ClaimDistribution parse_claims_spec(const std::string& spec) {
    const std::size_t colon = spec.find(':');
    const std::string name = trim(spec.substr(0, colon));
    const std::string args =
        colon == std::string::npos ? "" : spec.substr(colon + 1);
    if (name == "exponential") {
        const auto a = spec_args(args, 1, "exponential");
        return ExponentialClaim{a[0]};
    }
    if (name == "gamma") {
        const auto a = spec_args(args, 2, "gamma");
        return GammaClaim{a[0], a[1]};
    }
    if (name == "lognormal") {
        const auto a = spec_args(args, 2, "lognormal");
        return LogNormalClaim{a[0], a[1]};
    }
    throw std::runtime_error("unknown claim distribution '" + name + "'");
}

std::string hazard_spec_string(const HazardModel& model) {
    if (const auto* c = std::get_if<ConstantRate>(&model))
        return "constant_rate:" + fmt(c->rate);
    if (const auto* e = std::get_if<Erlang>(&model))
        return "erlang:" + std::to_string(e->k) + "," + fmt(e->rate);
    const auto& w = std::get<WeibullHazard>(model);
    return "weibull:" + fmt(w.shape) + "," + fmt(w.scale);
}

std::string claims_spec_string(const ClaimDistribution& dist) {
    if (const auto* e = std::get_if<ExponentialClaim>(&dist))
        return "exponential:" + fmt(e->mean);
    if (const auto* g = std::get_if<GammaClaim>(&dist))
        return "gamma:" + fmt(g->shape) + "," + fmt(g->scale);
    const auto& l = std::get<LogNormalClaim>(dist);
    return "lognormal:" + fmt(l.meanlog) + "," + fmt(l.sdlog);
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    bool have_p = false, have_eta = false, have_T = false;
    bool have_hazard = false, have_claims = false;

    std::istringstream in(text);
    std::string raw;
    std::string section;
    std::vector<std::string> seen;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string s = trim(raw);
        if (s.empty() || s[0] == ';') continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail_at(line, "unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (section != "model" && section != "solver" &&
                section != "simulate" && section != "output")
                fail_at(line, "unknown section '" + section + "'");
            continue;
        }
        const std::size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail_at(line, "expected key=value, got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (section.empty())
            fail_at(line, "key '" + key + "' outside any section");
        const std::string qualified = section + "." + key;
        for (const std::string& prior : seen)
            if (prior == qualified)
                fail_at(line, "duplicate key '" + key + "' in [" + section +
                                  "]");
        seen.push_back(qualified);

        try {
            if (section == "model") {
                if (key == "p") {
                    cfg.model.p = parse_number(value, line, key);
                    have_p = true;
                } else if (key == "eta") {
                    cfg.model.eta = parse_number(value, line, key);
                    have_eta = true;
                } else if (key == "T") {
                    cfg.model.T = parse_number(value, line, key);
                    have_T = true;
                } else if (key == "hazard") {
                    cfg.model.hazard = parse_hazard_spec(value);
                    have_hazard = true;
                } else if (key == "claims") {
                    cfg.model.claims = parse_claims_spec(value);
                    have_claims = true;
                } else {
                    fail_at(line, "unknown key '" + key + "' in [model]");
                }
            } else if (section == "solver") {
                if (key == "n_s")
                    cfg.solver.n_s =
                        static_cast<int>(parse_integer(value, line, key));
                else if (key == "n_x")
                    cfg.solver.n_x =
                        static_cast<int>(parse_integer(value, line, key));
                else if (key == "n_q")
                    cfg.solver.n_q =
                        static_cast<int>(parse_integer(value, line, key));
                else if (key == "n_quad")
                    cfg.solver.n_quad =
                        static_cast<int>(parse_integer(value, line, key));
                else
                    fail_at(line, "unknown key '" + key + "' in [solver]");
            } else if (section == "simulate") {
                if (key == "n_paths")
                    cfg.simulate.n_paths = static_cast<std::uint64_t>(
                        parse_integer(value, line, key));
                else if (key == "seed")
                    cfg.simulate.seed = static_cast<std::uint64_t>(
                        parse_integer(value, line, key));
                else if (key == "s")
                    cfg.simulate.init.s = parse_number(value, line, key);
                else if (key == "x")
                    cfg.simulate.init.x = parse_number(value, line, key);
                else if (key == "w")
                    cfg.simulate.init.w = parse_number(value, line, key);
                else if (key == "policy")
                    cfg.simulate.policy = value;
                else
                    fail_at(line, "unknown key '" + key + "' in [simulate]");
            } else {
                if (key == "dir")
                    cfg.output.dir = value;
                else if (key == "format") {
                    if (value != "csv")
                        fail_at(line, "unsupported format '" + value + "'");
                    cfg.output.format = value;
                } else {
                    fail_at(line, "unknown key '" + key + "' in [output]");
                }
            }
        } catch (const std::runtime_error&) {
            throw;
        } catch (const std::exception& e) {
            fail_at(line, e.what());
        }
    }

    if (!have_p) throw std::runtime_error("config: [model] p is required");
    if (!have_eta) throw std::runtime_error("config: [model] eta is required");
    if (!have_T) throw std::runtime_error("config: [model] T is required");
    if (!have_hazard)
        throw std::runtime_error("config: [model] hazard is required");
    if (!have_claims)
        throw std::runtime_error("config: [model] claims is required");

    cfg.model.validate();
    if (cfg.solver.n_s < 2 || cfg.solver.n_x < 2)
        throw std::runtime_error("config: n_s and n_x must be >= 2");
    if (cfg.solver.n_q < 2)
        throw std::runtime_error("config: n_q must be >= 2");
    if (cfg.solver.n_quad < 2)
        throw std::runtime_error("config: n_quad must be >= 2");
    if (cfg.simulate.n_paths < 1)
        throw std::runtime_error("config: n_paths must be >= 1");
    const State& init = cfg.simulate.init;
    if (!(init.s >= 0.0) || init.s > cfg.model.T)
        throw std::runtime_error("config: s must lie in [0, T]");
    if (!(init.x >= 0.0) || !std::isfinite(init.x))
        throw std::runtime_error("config: x must be >= 0");
    if (!(init.w >= 0.0) || init.w > init.s)
        throw std::runtime_error("config: w must lie in [0, s]");
    if (cfg.simulate.policy.rfind("constant:", 0) == 0) {
        const std::string q = cfg.simulate.policy.substr(9);
        std::size_t pos = 0;
        double qv = -1.0;
        try {
            qv = std::stod(q, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != q.size() || !(qv >= 0.0 && qv <= 1.0))
            throw std::runtime_error(
                "config: constant policy needs q in [0,1]");
    } else if (cfg.simulate.policy.rfind("table:", 0) == 0) {
        if (cfg.simulate.policy.size() == 6)
            throw std::runtime_error("config: table policy needs a path");
    } else {
        throw std::runtime_error("config: policy must be 'constant:<q>' or "
                                 "'table:<path>'");
    }
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string RunConfig::canonical() const {
    std::string out;
    out += "[model]\n";
    out += "T=" + fmt(model.T) + "\n";
    out += "claims=" + claims_spec_string(model.claims) + "\n";
    out += "eta=" + fmt(model.eta) + "\n";
    out += "hazard=" + hazard_spec_string(model.hazard) + "\n";
    out += "p=" + fmt(model.p) + "\n";
    out += "[output]\n";
    out += "dir=" + output.dir + "\n";
    out += "format=" + output.format + "\n";
    out += "[simulate]\n";
    out += "n_paths=" + std::to_string(simulate.n_paths) + "\n";
    out += "policy=" + simulate.policy + "\n";
    out += "s=" + fmt(simulate.init.s) + "\n";
    out += "seed=" + std::to_string(simulate.seed) + "\n";
    out += "w=" + fmt(simulate.init.w) + "\n";
    out += "x=" + fmt(simulate.init.x) + "\n";
    out += "[solver]\n";
    out += "n_q=" + std::to_string(solver.n_q) + "\n";
    out += "n_quad=" + std::to_string(solver.n_quad) + "\n";
    out += "n_s=" + std::to_string(solver.n_s) + "\n";
    out += "n_x=" + std::to_string(solver.n_x) + "\n";
    return out;
}

std::uint64_t RunConfig::config_hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

}  // namespace retsurv
