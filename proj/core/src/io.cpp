#include "retsurv/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <stdexcept>

namespace retsurv {

namespace {

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f != nullptr) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

FilePtr open_for_write(const std::string& path) {
    FilePtr f(std::fopen(path.c_str(), "w"));
    if (!f) throw std::runtime_error("cannot write file: " + path);
    return f;
}

void write_stamp(std::FILE* f, const FileStamp& stamp) {
    std::fprintf(f, "# retsurv %s config=%016" PRIx64 "\n",
                 stamp.version.c_str(), stamp.config_hash);
}

void write_field_rows(std::FILE* f, const SolveResult& result) {
    const GridSpec& g = result.grid;
    std::fprintf(f,
                 "# grid n_s=%d n_x=%d T=%.17g x_max=%.17g eta_p=%.17g\n",
                 g.n_s, g.n_x, g.T, g.x_max, result.eta_p);
    std::fprintf(f, "s,x,w,V,q_star\n");
    for (int i = 0; i <= g.n_s; ++i)
        for (int j = 0; j <= g.n_x; ++j)
            for (int k = 0; k <= i; ++k) {
                const std::size_t at = g.index(i, j, k);
                std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", g.s_at(i),
                             g.x_at(j), g.w_at(k), result.value[at],
                             result.q_star[at]);
            }
}

}  // namespace

std::uint64_t fnv1a64(std::string_view text) {
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

void write_value_csv(const std::string& path, const SolveResult& result,
                     const FileStamp& stamp) {
    FilePtr f = open_for_write(path);
    write_stamp(f.get(), stamp);
    write_field_rows(f.get(), result);
}

void write_checkpoint_csv(const std::string& path, const SolveResult& result,
                          int resume_from, const FileStamp& stamp) {
    FilePtr f = open_for_write(path);
    write_stamp(f.get(), stamp);
    std::fprintf(f.get(), "# resume from_slice=%d\n", resume_from);
    write_field_rows(f.get(), result);
}

SolveResult read_value_csv(const std::string& path, int* resume_from) {
    FilePtr f(std::fopen(path.c_str(), "r"));
    if (!f) throw std::runtime_error("cannot open file: " + path);
    if (resume_from != nullptr) *resume_from = -1;

    SolveResult out;
    bool have_grid = false;
    bool have_header = false;
    char line[512];
    int lineno = 0;
    std::size_t filled = 0;
    int i = 0, j = 0, k = 0;

    auto bad = [&](const std::string& what) -> std::runtime_error {
        return std::runtime_error(path + " line " + std::to_string(lineno) +
                                  ": " + what);
    };

    while (std::fgets(line, sizeof line, f.get()) != nullptr) {
        ++lineno;
        if (line[0] == '#') {
            int ns = 0, nx = 0, resume = 0;
            double T = 0.0, xmax = 0.0, etap = 0.0;
            if (std::sscanf(line,
                            "# grid n_s=%d n_x=%d T=%lg x_max=%lg eta_p=%lg",
                            &ns, &nx, &T, &xmax, &etap) == 5) {
                out.grid.n_s = ns;
                out.grid.n_x = nx;
                out.grid.T = T;
                out.grid.x_max = xmax;
                out.grid.ds = T / ns;
                out.grid.dx = xmax / nx;
                out.eta_p = etap;
                if (ns < 1 || nx < 1) throw bad("bad grid dimensions");
                out.value.assign(out.grid.node_count(), 0.0);
                out.q_star.assign(out.grid.node_count(), 0.0);
                have_grid = true;
            } else if (std::sscanf(line, "# resume from_slice=%d", &resume) ==
                       1) {
                if (resume_from != nullptr) *resume_from = resume;
            }
            continue;
        }
        if (!have_header) {
            if (std::strncmp(line, "s,x,w,V,q_star", 14) != 0)
                throw bad("expected column header s,x,w,V,q_star");
            if (!have_grid) throw bad("missing grid comment before data");
            have_header = true;
            continue;
        }
        // Skip the three coordinate fields, then read V and q_star.
        const char* p = line;
        for (int field = 0; field < 3; ++field) {
            p = std::strchr(p, ',');
            if (p == nullptr) throw bad("short row");
            ++p;
        }
        char* end = nullptr;
        const double v = std::strtod(p, &end);
        if (end == p || *end != ',') throw bad("malformed V field");
        p = end + 1;
        const double q = std::strtod(p, &end);
        if (end == p) throw bad("malformed q_star field");

        if (i > out.grid.n_s) throw bad("more rows than grid nodes");
        const std::size_t at = out.grid.index(i, j, k);
        out.value[at] = v;
        out.q_star[at] = q;
        ++filled;
        if (++k > i) {
            k = 0;
            if (++j > out.grid.n_x) {
                j = 0;
                ++i;
            }
        }
    }
    if (!have_grid) throw std::runtime_error(path + ": no grid comment");
    if (filled != out.grid.node_count())
        throw std::runtime_error(path + ": row count mismatch");
    out.diagnostics.node_count = filled;
    return out;
}

void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows,
                       const FileStamp& stamp) {
    FilePtr f = open_for_write(path);
    write_stamp(f.get(), stamp);
    std::fprintf(f.get(), "s,x,w,policy,mean,std_error,n_paths,seed\n");
    for (const SummaryRow& r : rows)
        std::fprintf(f.get(),
                     "%.17g,%.17g,%.17g,%s,%.17g,%.17g,%" PRIu64 ",%" PRIu64
                     "\n",
                     r.init.s, r.init.x, r.init.w, r.policy.c_str(),
                     r.estimate.mean, r.estimate.std_error,
                     r.estimate.n_paths, r.estimate.seed);
}

void write_paths_csv(const std::string& path,
                     const std::vector<PathRecord>& paths,
                     const FileStamp& stamp) {
    FilePtr f = open_for_write(path);
    write_stamp(f.get(), stamp);
    std::fprintf(f.get(),
                 "path,ruined,ruin_time,n_claims,final_s,final_x,final_w\n");
    for (std::size_t n = 0; n < paths.size(); ++n) {
        const PathRecord& r = paths[n];
        std::fprintf(f.get(), "%zu,%d,", n, r.ruined ? 1 : 0);
        if (r.ruin_time.has_value())
            std::fprintf(f.get(), "%.17g", *r.ruin_time);
        std::fprintf(f.get(), ",%" PRIu64 ",%.17g,%.17g,%.17g\n", r.n_claims,
                     r.final_state.s, r.final_state.x, r.final_state.w);
    }
}

void write_events_csv(const std::string& path,
                      const std::vector<PathRecord>& paths,
                      const FileStamp& stamp) {
    FilePtr f = open_for_write(path);
    write_stamp(f.get(), stamp);
    std::fprintf(f.get(), "path,time,claim,retention,surplus_after\n");
    for (std::size_t n = 0; n < paths.size(); ++n)
        for (const PathEvent& e : paths[n].events)
            std::fprintf(f.get(), "%zu,%.17g,%.17g,%.17g,%.17g\n", n, e.time,
                         e.claim, e.retention, e.surplus_after);
}

}  // namespace retsurv
