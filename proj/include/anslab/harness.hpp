#pragma once

#include "anslab/config.hpp"
#include "anslab/snapshot.hpp"

#include <string>
#include <vector>

namespace anslab {

/// Persistent outcome of one executed plan point, mirrored to record.json
/// inside the run directory.
struct RunRecord {
    std::uint64_t config_hash = 0;
    std::string verdict;
    Real sweep_value = 0;
    Real psi0 = 0, sup_psi = 0, sup_xy = 0;
    Real theta_final = 0, radius_final = 0, largeness = 0;
    Real alpha = 1.0;  // guard reference for the radius criterion
    std::string dir;
    std::string trace_path;
    std::vector<std::string> snapshot_paths;
    bool resumed = false;  // not persisted; true when loaded instead of run
};

struct ExecuteResult {
    std::vector<RunRecord> records;
    std::string summary_path;  // empty for plan kinds without a summary CSV
};

/// Worker pool size: ANSLAB_WORKERS if set, else hardware concurrency.
int worker_count();

/// Runs every plan point under <plan.output>/, one directory per point
/// named by the point's config-hash prefix. Completed points (record.json
/// with matching hash and a terminal verdict) are skipped; unreadable
/// records quarantine the directory and the point reruns.
ExecuteResult execute(const FullConfig& plan);

inline constexpr const char* kTraceCsvHeader =
    "t,radius,theta,energy,div_residual,Bh_main,Bn_main,L1_accum,cross_accum,X,Y,Psi";
inline constexpr const char* kSummaryCsvHeader =
    "sweep_value,Psi0,sup_Psi,sup_XY,theta_final,radius_final,largeness,verdict";

void write_trace_csv(const std::string& path, const DiagnosticTrace& trace);
void write_summary_csv(const std::string& path, const std::vector<RunRecord>& records);

void write_run_record(const std::string& path, const RunRecord& record);
RunRecord read_run_record(const std::string& path);

/// Loads every record.json under a plan output directory.
std::vector<RunRecord> load_run_records(const std::string& output_dir);

struct AcceptanceReport {
    struct Item {
        std::string name;
        bool pass = false;
        std::string detail;
    };
    std::vector<Item> items;
    bool incomplete = false;

    bool all_pass() const;
    /// 0 pass, 1 criterion failure or incomplete coverage.
    int exit_code() const;
    std::string to_json() const;
};

/// Judges the sweep-level shadows (uniformity, guard, largeness law) from
/// persisted records; empty or partial coverage reports "incomplete".
AcceptanceReport evaluate_acceptance(const std::vector<RunRecord>& records);

/// sup_t sqrt(t) ||e^{t Laplace} u0||_inf over a fixed geometric sample set.
Real standard_largeness(const VectorField& u0);

}  // namespace anslab
