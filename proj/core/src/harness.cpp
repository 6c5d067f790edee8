#include "eisen/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "eisen/eisenstein.hpp"
#include "eisen/geometry.hpp"

#include <json.hpp>

namespace eisen::harness {

namespace geom = eisen::geometry;
namespace eis = eisen::eisenstein;

void SweepSpec::validate() const {
    for (long long q : levels)
        if (!geom::is_squarefree(q)) throw ConfigError("sweep.levels: levels must be squarefree");
    for (int n : weights)
        if (n % 2 != 0) throw ConfigError("sweep.weights: weights must be even");
    if (!(epsilon > 0.0 && epsilon < 0.5)) throw ConfigError("sweep.epsilon: need 0 < epsilon < 1/2");
    if (point_count < 1) throw ConfigError("sweep.points: need at least one point");
    if (!(y_max > y_min)) throw ConfigError("sweep.y_max: must exceed y_min");
}

namespace {

std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (std::isspace((unsigned char)c) || c == ',') {
            if (!cur.empty()) out.push_back(cur), cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r\n");
    size_t e = s.find_last_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

}  // namespace

HarnessConfig default_config() { return HarnessConfig{}; }

HarnessConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    HarnessConfig cfg;
    cfg.raw_text = buf.str();

    std::istringstream lines(cfg.raw_text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(lines, line)) {
        ++lineno;
        std::string l = trim(line);
        if (l.empty() || l[0] == '#' || l[0] == ';') continue;
        if (l.front() == '[') {
            if (l.back() != ']') throw ConfigError("config: malformed section at line " + std::to_string(lineno));
            section = trim(l.substr(1, l.size() - 2));
            continue;
        }
        size_t eq = l.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config: expected key = value at line " + std::to_string(lineno));
        std::string key = trim(l.substr(0, eq));
        std::string val = trim(l.substr(eq + 1));
        try {
            if (section == "sweep") {
                if (key == "levels") {
                    cfg.sweep.levels.clear();
                    for (auto& v : split_ws(val)) cfg.sweep.levels.push_back(std::stoll(v));
                } else if (key == "weights") {
                    cfg.sweep.weights.clear();
                    for (auto& v : split_ws(val)) cfg.sweep.weights.push_back(std::stoi(v));
                } else if (key == "types") {
                    cfg.sweep.types.clear();
                    for (auto& v : split_ws(val)) cfg.sweep.types.push_back(std::stod(v));
                } else if (key == "points") {
                    cfg.sweep.point_count = std::stoi(val);
                } else if (key == "y_max") {
                    cfg.sweep.y_max = std::stod(val);
                } else if (key == "seed") {
                    cfg.sweep.seed = std::stoull(val);
                } else if (key == "epsilon") {
                    cfg.sweep.epsilon = std::stod(val);
                } else {
                    throw ConfigError("config: unknown key sweep." + key);
                }
            } else if (section == "run" || section.empty()) {
                if (key == "tol") cfg.tol = std::stod(val);
                else if (key == "workers") cfg.workers = std::stoi(val);
                else if (key == "seed") cfg.sweep.seed = std::stoull(val);
                else if (key == "fault_injection") {
                    if (val == "none") cfg.psi_perturbation = 0.0;
                    else if (val == "psi_perturb") cfg.psi_perturbation = 1e-3;
                    else throw ConfigError("config: unknown fault_injection mode '" + val + "'");
                } else throw ConfigError("config: unknown key run." + key);
            } else {
                throw ConfigError("config: unknown section [" + section + "]");
            }
        } catch (const std::invalid_argument&) {
            throw ConfigError("config: bad value for " + key + " at line " + std::to_string(lineno));
        } catch (const std::out_of_range&) {
            throw ConfigError("config: value out of range for " + key);
        }
    }
    cfg.sweep.validate();
    if (cfg.workers < 1) throw ConfigError("config: workers must be >= 1");
    if (!(cfg.tol > 0)) throw ConfigError("config: tol must be positive");
    return cfg;
}

std::string csv_header() {
    return "q,cusp,n,t,x,y,theta,value_re,value_im,abs_error,bound_denominator,ratio";
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
}  // namespace

std::string csv_row(const ResultRecord& r) {
    std::ostringstream os;
    os << r.q << ',' << r.cusp << ',' << r.n << ',' << fmt17(r.t) << ',' << fmt17(r.x) << ','
       << fmt17(r.y) << ',' << fmt17(r.theta) << ',' << fmt17(r.value_re) << ','
       << fmt17(r.value_im) << ',' << fmt17(r.abs_error) << ',' << fmt17(r.bound_denominator)
       << ',' << fmt17(r.ratio);
    return os.str();
}

std::vector<ResultRecord> read_records_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open records file: " + path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<ResultRecord> out;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        std::vector<std::string> f;
        std::string cur;
        for (char c : line) {
            if (c == ',') f.push_back(cur), cur.clear();
            else cur += c;
        }
        f.push_back(cur);
        if (f.size() != 12) throw ConfigError("records: malformed row");
        ResultRecord r;
        r.q = std::stoll(f[0]); r.cusp = std::stoll(f[1]); r.n = std::stoi(f[2]);
        r.t = std::stod(f[3]); r.x = std::stod(f[4]); r.y = std::stod(f[5]);
        r.theta = std::stod(f[6]); r.value_re = std::stod(f[7]); r.value_im = std::stod(f[8]);
        r.abs_error = std::stod(f[9]); r.bound_denominator = std::stod(f[10]);
        r.ratio = std::stod(f[11]);
        out.push_back(r);
    }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string RunManifest::to_json() const {
    nlohmann::json j;
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["started_at"] = started_at;
    j["finished_at"] = finished_at;
    j["suite_pass"] = suite_pass;
    return j.dump(2);
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

double halton(std::uint64_t i, std::uint64_t base) {
    double f = 1.0, r = 0.0;
    while (i > 0) {
        f /= double(base);
        r += f * double(i % base);
        i /= base;
    }
    return r;
}

}  // namespace

std::vector<SamplePoint> sample_points(const SweepSpec& spec) {
    std::uint64_t st = spec.seed;
    double rot_x = double(splitmix64(st) >> 11) * 0x1p-53;
    double rot_y = double(splitmix64(st) >> 11) * 0x1p-53;
    double rot_th = double(splitmix64(st) >> 11) * 0x1p-53;
    std::vector<SamplePoint> pts;
    pts.reserve(spec.point_count);
    double ly0 = std::log(spec.y_min), ly1 = std::log(spec.y_max);
    for (int i = 0; i < spec.point_count; ++i) {
        double u = std::fmod(halton(i + 1, 2) + rot_x, 1.0);
        double v = std::fmod(halton(i + 1, 3) + rot_y, 1.0);
        double w = std::fmod(halton(i + 1, 5) + rot_th, 1.0);
        double x = u - 0.5;
        double y = std::exp(ly0 + v * (ly1 - ly0));
        if (x * x + y * y < 1.0) {
            // fold into the fundamental domain so y stays the FD height
            geom::ReductionResult red =
                geom::reduce_to_fundamental_domain(geom::iwasawa_compose({x, y, 0.0}));
            geom::IwasawaCoordinates ic = geom::iwasawa_decompose(red.reduced);
            x = ic.x;
            y = ic.y;
        }
        pts.push_back({x, y, w * 2.0 * kPi});
    }
    return pts;
}

SweepSummary run_supnorm_sweep(const HarnessConfig& cfg, const std::string& out_dir) {
    cfg.sweep.validate();
    std::filesystem::create_directories(out_dir);
    auto pts = sample_points(cfg.sweep);

    struct Task {
        long long q, cusp;
        int n;
        double t;
        int pt;
    };
    std::vector<Task> tasks;
    for (long long q : cfg.sweep.levels)
        for (const auto& c : geom::cusps_of_level(q))
            for (int n : cfg.sweep.weights)
                for (double t : cfg.sweep.types)
                    for (int i = 0; i < cfg.sweep.point_count; ++i)
                        tasks.push_back({q, c.divisor, n, t, i});

    std::vector<ResultRecord> rows(tasks.size());
    double eps = cfg.sweep.epsilon;
    eis::EvaluatorConfig ecfg;
    ecfg.tol = cfg.tol;

    auto work = [&](size_t lo, size_t hi) {
        for (size_t k = lo; k < hi; ++k) {
            const Task& tk = tasks[k];
            const SamplePoint& p = pts[tk.pt];
            ResultRecord r{};
            r.q = tk.q; r.cusp = tk.cusp; r.n = tk.n; r.t = tk.t;
            r.x = p.x; r.y = p.y; r.theta = p.theta;
            double denom = (1.0 + std::pow(std::abs(double(tk.n)), 0.5 + eps) +
                            std::pow(std::abs(tk.t), 0.5 + eps)) *
                           std::sqrt(p.y + 1.0 / p.y);
            r.bound_denominator = denom;
            try {
                eis::EvalResult e = eis::eval_levelq(
                    tk.q, geom::cusp_for_divisor(tk.q, tk.cusp), {p.x, p.y, p.theta}, tk.n, tk.t, ecfg);
                r.value_re = e.value.real();
                r.value_im = e.value.imag();
                r.abs_error = e.abs_error;
                r.ratio = std::abs(e.value) / denom;
            } catch (const AccuracyError&) {
                r.value_re = r.value_im = std::nan("");
                r.abs_error = std::numeric_limits<double>::infinity();
                r.ratio = std::nan("");
            }
            rows[k] = r;
        }
    };

    int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        work(0, tasks.size());
    } else {
        std::vector<std::thread> th;
        size_t chunk = (tasks.size() + workers - 1) / workers;
        for (int w = 0; w < workers; ++w) {
            size_t lo = w * chunk, hi = std::min(tasks.size(), lo + chunk);
            if (lo < hi) th.emplace_back(work, lo, hi);
        }
        for (auto& x : th) x.join();
    }

    std::ofstream out(out_dir + "/sweep_records.csv");
    out << csv_header() << '\n';
    for (const auto& r : rows) out << csv_row(r) << '\n';
    out.close();

    SweepSummary sum;
    sum.rows = (long long)rows.size();
    for (const auto& r : rows) {
        if (std::isnan(r.ratio)) {
            ++sum.accuracy_failures;
            continue;
        }
        double B = std::abs(double(r.n)) + std::abs(r.t);
        int block = (B < 1.0) ? 0 : int(std::floor(std::log2(B))) + 1;
        sum.block_max[block] = std::max(sum.block_max[block], r.ratio);
        auto it = sum.fitted_by_q.find(r.q);
        if (it == sum.fitted_by_q.end()) sum.fitted_by_q[r.q] = r.ratio;
        else it->second = std::max(it->second, r.ratio);
        sum.max_ratio = std::max(sum.max_ratio, r.ratio);
    }
    double prev = -1.0;
    for (auto& [blk, mx] : sum.block_max) {
        if (prev > 0 && mx > prev * 1.2) sum.block_growth_ok = false;
        prev = std::max(prev, mx);
    }
    double qmin = 1e300, qmax = 0;
    for (auto& [q, c] : sum.fitted_by_q) {
        qmin = std::min(qmin, c);
        qmax = std::max(qmax, c);
    }
    sum.q_spread = (qmin > 0) ? qmax / qmin : 1.0;

    std::ofstream sj(out_dir + "/sweep_summary.json");
    nlohmann::json j;
    j["rows"] = sum.rows;
    j["accuracy_failures"] = sum.accuracy_failures;
    j["max_ratio"] = sum.max_ratio;
    j["block_growth_ok"] = sum.block_growth_ok;
    j["q_spread"] = sum.q_spread;
    for (auto& [blk, mx] : sum.block_max) j["block_max"][std::to_string(blk)] = mx;
    for (auto& [q, c] : sum.fitted_by_q) j["fitted_by_q"][std::to_string(q)] = c;
    sj << j.dump(2) << '\n';
    return sum;
}

void emit_plot_data(const std::vector<ResultRecord>& records, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    {
        std::map<int, double> by_n;
        for (const auto& r : records)
            if (!std::isnan(r.ratio)) by_n[std::abs(r.n)] = std::max(by_n[std::abs(r.n)], r.ratio);
        std::ofstream f(out_dir + "/ratio_vs_n.csv");
        f << "abs_n,max_ratio\n";
        for (auto& [n, v] : by_n) f << n << ',' << fmt17(v) << '\n';
    }
    {
        std::map<double, double> by_t;
        for (const auto& r : records)
            if (!std::isnan(r.ratio)) by_t[std::abs(r.t)] = std::max(by_t[std::abs(r.t)], r.ratio);
        std::ofstream f(out_dir + "/ratio_vs_t.csv");
        f << "abs_t,max_ratio\n";
        for (auto& [t, v] : by_t) f << fmt17(t) << ',' << fmt17(v) << '\n';
    }
    {
        // dyadic y bins
        std::map<int, double> by_y;
        for (const auto& r : records)
            if (!std::isnan(r.ratio)) {
                int bin = int(std::floor(std::log2(std::max(0.5, r.y))));
                by_y[bin] = std::max(by_y[bin], r.ratio);
            }
        std::ofstream f(out_dir + "/ratio_vs_y.csv");
        f << "log2_y_bin,max_ratio\n";
        for (auto& [b, v] : by_y) f << b << ',' << fmt17(v) << '\n';
    }
}

}  // namespace eisen::harness
