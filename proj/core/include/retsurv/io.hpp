#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "retsurv/hjb.hpp"
#include "retsurv/simulator.hpp"

namespace retsurv {

std::uint64_t fnv1a64(std::string_view text);

// First line of every output file: "# retsurv <version> config=<16 hex>".
struct FileStamp {
    std::string version;
    std::uint64_t config_hash = 0;
};

// Columns s,x,w,V,q_star in lexicographic (i,j,k) node order, 17
// significant digits; a grid comment line makes the file self-describing
// and the round-trip exact.
void write_value_csv(const std::string& path, const SolveResult& result,
                     const FileStamp& stamp);

// Rebuilds grid, values, and policy from write_value_csv output. If
// resume_from is non-null, also recovers the checkpoint marker: the
// lowest completed slice index, or -1 when the file is a completed solve.
SolveResult read_value_csv(const std::string& path,
                           int* resume_from = nullptr);

// Partial solve for restarts: identical format plus a
// "# resume from_slice=<i>" marker, i being the lowest completed slice.
void write_checkpoint_csv(const std::string& path, const SolveResult& result,
                          int resume_from, const FileStamp& stamp);

struct SummaryRow {
    State init{};
    std::string policy;
    EstimateCI estimate{};
};

// Columns s,x,w,policy,mean,std_error,n_paths,seed.
void write_summary_csv(const std::string& path,
                       const std::vector<SummaryRow>& rows,
                       const FileStamp& stamp);

// One row per path: path,ruined,ruin_time,n_claims,final_s,final_x,final_w.
void write_paths_csv(const std::string& path,
                     const std::vector<PathRecord>& paths,
                     const FileStamp& stamp);

// One row per claim event: path,time,claim,retention,surplus_after.
void write_events_csv(const std::string& path,
                      const std::vector<PathRecord>& paths,
                      const FileStamp& stamp);

}  // namespace retsurv
