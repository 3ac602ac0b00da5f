#include "anslab/harness.hpp"

#include "anslab/paraproduct.hpp"

#include "json.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

namespace fs = std::filesystem;
using nlohmann::json;

namespace anslab {
namespace {

std::string fmt(Real x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string hash_prefix(std::uint64_t h) {
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf).substr(0, 12);
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + path + " for writing");
    os << text;
    if (!os) throw std::runtime_error("write failed for " + path);
}

struct PlanPoint {
    FullConfig cfg;
    Real sweep_value = 0;
    bool largeness_only = false;
};

std::vector<PlanPoint> expand_plan(const FullConfig& plan) {
    std::vector<PlanPoint> pts;
    const auto& kind = plan.plan.kind;
    if (kind == "single_run") {
        pts.push_back({plan, plan.solver.eps, false});
    } else if (kind == "eps_sweep" || kind == "largeness_sweep") {
        for (Real v : plan.plan.values.empty() && kind == "largeness_sweep"
                          ? std::vector<Real>{1.0, 0.5, 0.25}
                          : plan.plan.values) {
            PlanPoint pt{plan, v, kind == "largeness_sweep"};
            pt.cfg.solver.eps = v;
            pts.push_back(std::move(pt));
        }
    } else if (kind == "lambda_sweep") {
        for (Real v : plan.plan.values) {
            PlanPoint pt{plan, v, false};
            pt.cfg.solver.lambda = v;
            pts.push_back(std::move(pt));
        }
    } else if (kind == "amplitude_sweep") {
        for (Real v : plan.plan.values) {
            PlanPoint pt{plan, v, false};
            pt.cfg.solver.eta = v;
            pts.push_back(std::move(pt));
        }
    } else {
        throw std::invalid_argument("expand_plan: kind '" + kind + "' has no sweep points");
    }
    for (auto& pt : pts) pt.cfg.solver.validate();
    return pts;
}

Real family_largeness(const SolverConfig& sc) {
    auto grid = std::make_shared<Grid>(sc.effective_grid());
    VectorField profile = make_profile(sc.profile, grid, sc.eta);
    profile = leray_project(profile);
    dealias(profile);
    remove_excluded_planes(profile);
    const VectorField u0 = make_initial_family(profile, sc.eps, sc.vertical_cap);
    return standard_largeness(u0);
}

RunRecord run_point(const PlanPoint& pt, const std::string& dir) {
    fs::create_directories(dir);
    RunRecord rec;
    rec.config_hash = config_hash(pt.cfg);
    rec.sweep_value = pt.sweep_value;
    rec.dir = dir;
    rec.alpha = pt.cfg.solver.alpha;
    write_text(dir + "/config.txt", echo_config(pt.cfg));

    rec.largeness = family_largeness(pt.cfg.solver);
    if (pt.largeness_only) {
        rec.verdict = "completed";
        rec.radius_final = pt.cfg.solver.alpha;
        write_run_record(dir + "/record.json", rec);
        return rec;
    }

    const RunResult result = run(pt.cfg.solver);
    rec.verdict = to_string(result.verdict);
    const auto& recs = result.trace.records;
    if (!recs.empty()) {
        rec.psi0 = recs.front().psi;
        rec.theta_final = recs.back().theta;
        rec.radius_final = recs.back().radius;
    }
    rec.sup_psi = result.trace.sup_psi();
    rec.sup_xy = result.trace.sup_xy();

    rec.trace_path = dir + "/trace.csv";
    write_trace_csv(rec.trace_path, result.trace);
    for (std::size_t i = 0; i < result.trace.snapshots.size(); ++i) {
        const auto& snap = result.trace.snapshots[i];
        char name[32];
        std::snprintf(name, sizeof(name), "/snap_%04zu.bin", i);
        const std::string path = dir + name;
        SnapshotHeader header;
        header.sizes = snap.v.grid().points();
        header.lengths = snap.v.grid().lengths();
        header.t = snap.t;
        header.eps = pt.cfg.solver.eps;
        header.s = pt.cfg.solver.s;
        header.radius = snap.radius;
        header.theta = snap.theta;
        write_snapshot(path, header, snap.v);
        rec.snapshot_paths.push_back(path);
    }
    write_run_record(dir + "/record.json", rec);
    return rec;
}

ExecuteResult execute_corpus(const FullConfig& plan) {
    const auto& sc = plan.solver;
    sc.validate();
    auto grid = std::make_shared<Grid>(sc.effective_grid());
    DyadicPartition part(grid);
    std::mt19937_64 rng(plan.plan.seed);
    const Real limit = (sc.n - 1) / sc.p;
    const Real sigma = 0.75 * limit;

    const std::string dir =
        plan.plan.output + "/" + hash_prefix(config_hash(plan)) + "-corpus";
    RunRecord rec;
    rec.config_hash = config_hash(plan);
    rec.sweep_value = plan.plan.count;
    rec.dir = dir;
    rec.alpha = sc.alpha;
    const std::string record_path = dir + "/record.json";
    if (fs::exists(record_path)) {
        try {
            RunRecord old = read_run_record(record_path);
            if (old.config_hash == rec.config_hash && old.verdict == "completed") {
                old.resumed = true;
                return {{old}, ""};
            }
        } catch (const std::exception&) {
            // fall through and regenerate
        }
    }
    fs::create_directories(dir);
    write_text(dir + "/config.txt", echo_config(plan));

    std::string csv = "index,sigma1,sigma2,ratio\n";
    Real max_ratio = 0;
    for (int i = 0; i < plan.plan.count; ++i) {
        const SpectralField f = make_corpus_field(grid, rng, part, sc.p);
        const SpectralField g = make_corpus_field(grid, rng, part, sc.p);
        const Real ratio = product_law_ratio(f, g, sigma, sigma, sc.p, part);
        max_ratio = std::max(max_ratio, ratio);
        csv += std::to_string(i) + "," + fmt(sigma) + "," + fmt(sigma) + "," + fmt(ratio) + "\n";
    }
    write_text(dir + "/corpus.csv", csv);
    rec.verdict = "completed";
    rec.largeness = max_ratio;  // measured product-law constant for this corpus
    write_run_record(record_path, rec);
    return {{rec}, ""};
}

}  // namespace

int worker_count() {
    if (const char* env = std::getenv("ANSLAB_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void write_trace_csv(const std::string& path, const DiagnosticTrace& trace) {
    std::string out = std::string(kTraceCsvHeader) + "\n";
    for (const auto& r : trace.records) {
        out += fmt(r.t) + "," + fmt(r.radius) + "," + fmt(r.theta) + "," + fmt(r.energy) + "," +
               fmt(r.div_residual) + "," + fmt(r.bh_main) + "," + fmt(r.bn_main) + "," +
               fmt(r.l1_accum) + "," + fmt(r.cross_accum) + "," + fmt(r.x) + "," + fmt(r.y) +
               "," + fmt(r.psi) + "\n";
    }
    write_text(path, out);
}

void write_summary_csv(const std::string& path, const std::vector<RunRecord>& records) {
    std::string out = std::string(kSummaryCsvHeader) + "\n";
    for (const auto& r : records) {
        out += fmt(r.sweep_value) + "," + fmt(r.psi0) + "," + fmt(r.sup_psi) + "," +
               fmt(r.sup_xy) + "," + fmt(r.theta_final) + "," + fmt(r.radius_final) + "," +
               fmt(r.largeness) + "," + r.verdict + "\n";
    }
    write_text(path, out);
}

void write_run_record(const std::string& path, const RunRecord& record) {
    json j;
    j["config_hash"] = hash_prefix(record.config_hash);
    j["config_hash_full"] = record.config_hash;
    j["verdict"] = record.verdict;
    j["sweep_value"] = record.sweep_value;
    j["psi0"] = record.psi0;
    j["sup_psi"] = record.sup_psi;
    j["sup_xy"] = record.sup_xy;
    j["theta_final"] = record.theta_final;
    j["radius_final"] = record.radius_final;
    j["largeness"] = record.largeness;
    j["alpha"] = record.alpha;
    j["trace_path"] = record.trace_path;
    j["snapshot_paths"] = record.snapshot_paths;
    write_text(path, j.dump(2) + "\n");
}

RunRecord read_run_record(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path);
    json j = json::parse(is);  // throws json::parse_error on corruption
    RunRecord r;
    r.config_hash = j.at("config_hash_full").get<std::uint64_t>();
    r.verdict = j.at("verdict").get<std::string>();
    r.sweep_value = j.at("sweep_value").get<Real>();
    r.psi0 = j.at("psi0").get<Real>();
    r.sup_psi = j.at("sup_psi").get<Real>();
    r.sup_xy = j.at("sup_xy").get<Real>();
    r.theta_final = j.at("theta_final").get<Real>();
    r.radius_final = j.at("radius_final").get<Real>();
    r.largeness = j.at("largeness").get<Real>();
    r.alpha = j.at("alpha").get<Real>();
    r.trace_path = j.at("trace_path").get<std::string>();
    r.snapshot_paths = j.at("snapshot_paths").get<std::vector<std::string>>();
    r.dir = fs::path(path).parent_path().string();
    return r;
}

std::vector<RunRecord> load_run_records(const std::string& output_dir) {
    std::vector<RunRecord> out;
    if (!fs::is_directory(output_dir)) return out;
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator(output_dir))
        if (entry.is_directory() && entry.path().filename().string().find("quarantine") ==
                                        std::string::npos)
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    for (const auto& d : dirs) {
        const fs::path record = d / "record.json";
        if (!fs::exists(record)) continue;
        out.push_back(read_run_record(record.string()));
    }
    std::sort(out.begin(), out.end(),
              [](const RunRecord& a, const RunRecord& b) { return a.sweep_value < b.sweep_value; });
    return out;
}

ExecuteResult execute(const FullConfig& plan) {
    plan.plan.validate();
    if (plan.plan.kind == "product_law_corpus") return execute_corpus(plan);

    const std::vector<PlanPoint> pts = expand_plan(plan);
    fs::create_directories(plan.plan.output);

    std::vector<RunRecord> records(pts.size());
    std::vector<std::exception_ptr> errors(pts.size());
    std::atomic<std::size_t> next{0};
    const int workers =
        std::max(1, std::min<int>(worker_count(), static_cast<int>(pts.size())));

    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= pts.size()) return;
            try {
                const std::uint64_t h = config_hash(pts[i].cfg);
                const std::string dir = plan.plan.output + "/" + hash_prefix(h);
                const std::string record_path = dir + "/record.json";
                bool fresh = true;
                if (fs::exists(record_path)) {
                    try {
                        RunRecord old = read_run_record(record_path);
                        if (old.config_hash == h && old.verdict == "completed") {
                            old.resumed = true;
                            records[i] = std::move(old);
                            fresh = false;
                        }
                    } catch (const std::exception&) {
                        // Corrupt record: quarantine the directory and rerun.
                        fs::path q = dir + ".quarantine";
                        for (int k = 1; fs::exists(q); ++k)
                            q = dir + ".quarantine-" + std::to_string(k);
                        fs::rename(dir, q);
                    }
                }
                if (fresh) records[i] = run_point(pts[i], plan.plan.output + "/" +
                                                              hash_prefix(h));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    ExecuteResult result;
    result.records = std::move(records);
    if (plan.plan.kind != "single_run") {
        result.summary_path = plan.plan.output + "/summary.csv";
        write_summary_csv(result.summary_path, result.records);
    }
    return result;
}

bool AcceptanceReport::all_pass() const {
    for (const auto& item : items)
        if (!item.pass) return false;
    return true;
}

int AcceptanceReport::exit_code() const { return (incomplete || !all_pass()) ? 1 : 0; }

std::string AcceptanceReport::to_json() const {
    json j;
    j["incomplete"] = incomplete;
    j["pass"] = !incomplete && all_pass();
    j["items"] = json::array();
    for (const auto& item : items)
        j["items"].push_back({{"name", item.name}, {"pass", item.pass}, {"detail", item.detail}});
    return j.dump(2) + "\n";
}

AcceptanceReport evaluate_acceptance(const std::vector<RunRecord>& records) {
    AcceptanceReport report;
    if (records.size() < 2) {
        report.incomplete = true;
        report.items.push_back({"coverage", false,
                                "need at least two run records, have " +
                                    std::to_string(records.size())});
        return report;
    }

    bool all_completed = true;
    std::string bad;
    for (const auto& r : records)
        if (r.verdict != "completed") {
            all_completed = false;
            bad = r.verdict;
        }
    report.items.push_back({"all_completed", all_completed,
                            all_completed ? "every point completed"
                                          : "non-completed verdict: " + bad});

    Real psi_lo = kInf, psi_hi = 0;
    for (const auto& r : records) {
        psi_lo = std::min(psi_lo, r.sup_psi);
        psi_hi = std::max(psi_hi, r.sup_psi);
    }
    const bool psi_ok = psi_lo > 0 && psi_hi / psi_lo < 2.0;
    report.items.push_back({"psi_spread", psi_ok,
                            "sup_Psi spread factor = " +
                                (psi_lo > 0 ? fmt(psi_hi / psi_lo) : std::string("inf"))});

    bool radius_ok = true;
    for (const auto& r : records)
        if (r.radius_final < 0.5 * r.alpha) radius_ok = false;
    report.items.push_back({"radius_guard", radius_ok,
                            radius_ok ? "radius stayed at or above alpha/2"
                                      : "radius fell below alpha/2"});

    // 1/eps growth of the largeness meter, measured against the largest
    // sweep value (the unsqueezed datum).
    const RunRecord* base = &records.front();
    for (const auto& r : records)
        if (r.sweep_value > base->sweep_value) base = &r;
    bool law_ok = base->largeness > 0;
    Real worst = 1;
    for (const auto& r : records) {
        if (r.sweep_value <= 0 || base->largeness <= 0) {
            law_ok = false;
            break;
        }
        const Real expected = base->largeness * base->sweep_value / r.sweep_value;
        const Real ratio = r.largeness / expected;
        worst = std::max(worst, std::max(ratio, 1 / ratio));
        if (ratio < 0.75 || ratio > 1.25) law_ok = false;
    }
    report.items.push_back({"largeness_law", law_ok,
                            "worst deviation factor from the 1/eps law = " + fmt(worst)});
    return report;
}

Real standard_largeness(const VectorField& u0) {
    std::vector<Real> ts;
    for (int i = 0; i < 25; ++i) ts.push_back(1e-3 * std::pow(1000.0, i / 24.0));
    return largeness_meter(u0, ts);
}

}  // namespace anslab
