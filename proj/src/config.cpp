#include "anslab/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace anslab {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

[[noreturn]] void fail(int line, const std::string& msg) {
    throw std::invalid_argument("config line " + std::to_string(line) + ": " + msg);
}

Real parse_real(const std::string& v, int line) {
    try {
        std::size_t pos = 0;
        const Real x = std::stod(v, &pos);
        if (pos != v.size()) fail(line, "trailing characters in number '" + v + "'");
        return x;
    } catch (const std::invalid_argument&) {
        fail(line, "expected a number, got '" + v + "'");
    } catch (const std::out_of_range&) {
        fail(line, "number out of range: '" + v + "'");
    }
}

long parse_int(const std::string& v, int line) {
    long x = 0;
    const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
    if (res.ec != std::errc() || res.ptr != v.data() + v.size())
        fail(line, "expected an integer, got '" + v + "'");
    return x;
}

std::vector<Real> parse_real_list(const std::string& v, int line) {
    std::vector<Real> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) fail(line, "empty entry in list '" + v + "'");
        out.push_back(parse_real(item, line));
    }
    if (out.empty()) fail(line, "empty list");
    return out;
}

const std::vector<std::string> kPlanKinds = {
    "single_run",     "eps_sweep",          "lambda_sweep",
    "amplitude_sweep", "product_law_corpus", "largeness_sweep"};

}  // namespace

void PlanConfig::validate() const {
    if (std::find(kPlanKinds.begin(), kPlanKinds.end(), kind) == kPlanKinds.end())
        throw std::invalid_argument("plan: unknown kind '" + kind + "'");
    if (kind.ends_with("_sweep") && kind != "largeness_sweep" && values.empty())
        throw std::invalid_argument("plan: kind '" + kind + "' needs a values list");
    if (kind == "product_law_corpus" && count <= 0)
        throw std::invalid_argument("plan: product_law_corpus needs count > 0");
    if (output.empty()) throw std::invalid_argument("plan: output must be nonempty");
}

FullConfig parse_config(const std::string& text) {
    FullConfig cfg;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail(line, "unterminated section header");
            section = s.substr(1, s.size() - 2);
            if (section != "solver" && section != "weight" && section != "plan")
                fail(line, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(line, "expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (key.empty()) fail(line, "empty key");
        if (val.empty()) fail(line, "empty value for '" + key + "'");
        if (section.empty()) fail(line, "key '" + key + "' before any section header");

        if (section == "solver") {
            auto& sc = cfg.solver;
            if (key == "n") sc.n = static_cast<int>(parse_int(val, line));
            else if (key == "grid") {
                sc.grid_sizes.clear();
                for (Real x : parse_real_list(val, line)) {
                    if (x != std::floor(x)) fail(line, "grid sizes must be integers");
                    sc.grid_sizes.push_back(static_cast<int>(x));
                }
            }
            else if (key == "s") sc.s = parse_real(val, line);
            else if (key == "p") sc.p = parse_real(val, line);
            else if (key == "eps") sc.eps = parse_real(val, line);
            else if (key == "dt") sc.dt = parse_real(val, line);
            else if (key == "t_end") sc.t_end = parse_real(val, line);
            else if (key == "eta") sc.eta = parse_real(val, line);
            else if (key == "profile") sc.profile = val;
            else if (key == "eta1") sc.eta1 = parse_real(val, line);
            else if (key == "snapshot_every")
                sc.snapshot_every = static_cast<int>(parse_int(val, line));
            else if (key == "vertical_cap")
                sc.vertical_cap = static_cast<int>(parse_int(val, line));
            else fail(line, "unknown key '" + key + "' in [solver]");
        } else if (section == "weight") {
            if (key == "alpha") cfg.solver.alpha = parse_real(val, line);
            else if (key == "lambda") cfg.solver.lambda = parse_real(val, line);
            else fail(line, "unknown key '" + key + "' in [weight]");
        } else {
            auto& pc = cfg.plan;
            if (key == "kind") pc.kind = val;
            else if (key == "values") pc.values = parse_real_list(val, line);
            else if (key == "seed") pc.seed = static_cast<std::uint64_t>(parse_int(val, line));
            else if (key == "count") pc.count = static_cast<int>(parse_int(val, line));
            else if (key == "output") pc.output = val;
            else fail(line, "unknown key '" + key + "' in [plan]");
        }
    }
    try {
        cfg.solver.validate();
        cfg.plan.validate();
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

FullConfig parse_config_file(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

std::string echo_config(const FullConfig& cfg) {
    std::ostringstream os;
    os.precision(17);
    const auto& sc = cfg.solver;
    os << "[solver]\n";
    os << "n = " << sc.n << "\n";
    os << "grid = ";
    const auto grid = sc.effective_grid();
    for (std::size_t i = 0; i < grid.size(); ++i) os << (i ? "," : "") << grid[i];
    os << "\n";
    os << "s = " << sc.s << "\n";
    os << "p = " << sc.p << "\n";
    os << "eps = " << sc.eps << "\n";
    os << "dt = " << sc.dt << "\n";
    os << "t_end = " << sc.t_end << "\n";
    os << "eta = " << sc.eta << "\n";
    os << "profile = " << sc.profile << "\n";
    os << "eta1 = " << sc.eta1 << "\n";
    os << "snapshot_every = " << sc.snapshot_every << "\n";
    os << "vertical_cap = " << sc.vertical_cap << "\n";
    os << "[weight]\n";
    os << "alpha = " << sc.alpha << "\n";
    os << "lambda = " << sc.lambda << "\n";
    os << "[plan]\n";
    os << "kind = " << cfg.plan.kind << "\n";
    if (!cfg.plan.values.empty()) {
        os << "values = ";
        for (std::size_t i = 0; i < cfg.plan.values.size(); ++i)
            os << (i ? "," : "") << cfg.plan.values[i];
        os << "\n";
    }
    os << "seed = " << cfg.plan.seed << "\n";
    os << "count = " << cfg.plan.count << "\n";
    os << "output = " << cfg.plan.output << "\n";
    return os.str();
}

std::uint64_t fnv1a64(const std::string& data) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t config_hash(const FullConfig& cfg) { return fnv1a64(echo_config(cfg)); }

}  // namespace anslab
