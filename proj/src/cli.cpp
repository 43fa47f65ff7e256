#include "qw/cli.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <regex>
#include <set>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "qw/errors.hpp"
#include "qw/evolution.hpp"
#include "qw/limits.hpp"

namespace qw::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kNormTolerance = 1e-9;
constexpr double kGridEpsilon = 1e-6;
constexpr std::size_t kMaxSweepEntries = 10'000;

double parse_number(const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + text + "'");
    }
    if (used != text.size() || !std::isfinite(v)) throw ConfigError("not a number: '" + text + "'");
    return v;
}

// Output written to a temporary name and renamed into place on success.
class AtomicFile {
public:
    explicit AtomicFile(std::string path) : path_(std::move(path)), tmp_(path_ + ".tmp") {
        stream_.open(tmp_, std::ios::out | std::ios::trunc | std::ios::binary);
        if (!stream_) throw ConfigError("cannot open '" + path_ + "' for writing");
    }
    AtomicFile(const AtomicFile&) = delete;
    AtomicFile& operator=(const AtomicFile&) = delete;
    ~AtomicFile() {
        if (!committed_) {
            stream_.close();
            std::error_code ec;
            fs::remove(tmp_, ec);
        }
    }
    std::ostream& stream() { return stream_; }
    void commit() {
        stream_.close();
        if (!stream_) throw ConfigError("failed writing '" + path_ + "'");
        fs::rename(tmp_, path_);
        committed_ = true;
    }

private:
    std::string path_;
    std::string tmp_;
    std::ofstream stream_;
    bool committed_ = false;
};

// Column-oriented table emitted as CSV or as a JSON object of arrays.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void write(std::ostream& os, Format format) const {
        if (format == Format::csv) {
            for (std::size_t j = 0; j < columns.size(); ++j) os << (j ? "," : "") << columns[j];
            os << '\n';
            for (const auto& row : rows) {
                for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_double(row[j]);
                os << '\n';
            }
            return;
        }
        json doc = json::object();
        for (std::size_t j = 0; j < columns.size(); ++j) {
            json col = json::array();
            for (const auto& row : rows) col.push_back(row[j]);
            doc[columns[j]] = std::move(col);
        }
        os << doc.dump(2) << '\n';
    }
};

void write_table(const Table& table, const std::string& path, Format format) {
    AtomicFile file(path);
    table.write(file.stream(), format);
    file.commit();
}

void write_json(const json& doc, const std::string& path) {
    AtomicFile file(path);
    file.stream() << doc.dump(2) << '\n';
    file.commit();
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_angle(const std::string& text) {
    static const std::regex pattern(
        R"(^\s*([+-]?)\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)?\s*\*?\s*(pi)?\s*(?:/\s*((?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?))?\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern) || (!m[2].matched && !m[3].matched)) {
        throw ConfigError("cannot parse angle '" + text + "'");
    }
    double value = m[2].matched ? parse_number(m[2].str()) : 1.0;
    if (m[3].matched) value *= kPi;
    if (m[4].matched) {
        const double denom = parse_number(m[4].str());
        if (denom == 0.0) throw ConfigError("zero denominator in angle '" + text + "'");
        value /= denom;
    }
    return m[1].str() == "-" ? -value : value;
}

CoinParameters coin_parameters(const RunConfig& config) {
    return CoinParameters(parse_angle(config.sigma_plus), parse_angle(config.sigma_minus));
}

InitialState initial_state(const RunConfig& config) {
    const complex alpha(config.alpha_re, config.alpha_im);
    const complex beta(config.beta_re, config.beta_im);
    const double norm2 = std::norm(alpha) + std::norm(beta);
    if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kNormTolerance) {
        throw ConfigError("initial state must satisfy |alpha|^2 + |beta|^2 = 1 within 1e-9 (got " +
                          format_double(norm2) + ")");
    }
    return make_initial_state(alpha, beta);
}

long max_time_from_env() {
    const char* raw = std::getenv("QW_MAX_T");
    if (raw == nullptr || *raw == '\0') return kDefaultMaxTime;
    const std::string text(raw);
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("QW_MAX_T is not an integer: '" + text + "'");
    }
    if (used != text.size() || v < 0) throw ConfigError("QW_MAX_T must be a nonnegative integer");
    return v;
}

void write_simulate(const RunConfig& config, const std::string& path, long max_time) {
    const CoinParameters params = coin_parameters(config);
    const InitialState init = initial_state(config);
    if (config.t < 0) throw ConfigError("--t must be nonnegative");
    if (config.t > max_time) {
        throw ResourceError("t = " + std::to_string(config.t) + " exceeds the cap " + std::to_string(max_time));
    }
    const Distribution dist = distribution(evolve(params, init, config.t, max_time));
    const std::vector<DensityBin> bins = binned_density(dist, config.bin_width);
    const long half = bin_count_half(config.bin_width);

    Table table{{"x", "x_over_t", "prob", "t_prob", "binned_density"}, {}};
    for (long x = -config.t; x <= config.t; x += 2) {
        const double v = scaled_position(x, config.t);
        const long idx = std::clamp(bin_index(v, config.bin_width), -half, half);
        const double p = dist.prob(x);
        table.rows.push_back({static_cast<double>(x), v, p, static_cast<double>(config.t) * p,
                              bins[static_cast<std::size_t>(idx + half)].density});
    }
    write_table(table, path, config.format);
}

std::string sidecar_path(const std::string& path, Format format) {
    fs::path p(path);
    if (format == Format::json || p.extension() == ".json") {
        p.replace_extension();
        return p.string() + ".sidecar.json";
    }
    p.replace_extension(".json");
    return p.string();
}

void write_density(const RunConfig& config, const std::string& path) {
    const CoinParameters params = coin_parameters(config);
    const InitialState init = initial_state(config);
    if (config.grid_points < 3) throw ConfigError("--grid-points must be at least 3");
    const long n = config.grid_points;
    const double lo = -kSupportEdge + kGridEpsilon;
    const double hi = kSupportEdge - kGridEpsilon;

    Table table{{"x", "w", "f_k", "density"}, {}};
    table.rows.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
        const double w = weight(x, params, init);
        const double fk = konno_density(x, kSupportEdge);
        table.rows.push_back({x, w, fk, w * fk});
    }
    const double C = loc_mass(params, init);
    const double ac = ac_mass(params, init);
    const json sidecar = {{"C", C}, {"ac_mass", ac}, {"sum", C + ac}};

    const std::string side = sidecar_path(path, config.format);
    write_table(table, path, config.format);
    try {
        write_json(sidecar, side);
    } catch (...) {
        std::error_code ec;
        fs::remove(path, ec);
        throw;
    }
}

void write_timeavg(const RunConfig& config, const std::string& path) {
    const CoinParameters params = coin_parameters(config);
    const InitialState init = initial_state(config);
    if (config.xmax < 0) throw ConfigError("--xmax must be nonnegative");
    Table table{{"x", "mu_bar"}, {}};
    for (long x = -config.xmax; x <= config.xmax; ++x) {
        table.rows.push_back({static_cast<double>(x), time_averaged_measure(x, params, init)});
    }
    write_table(table, path, config.format);
}

std::vector<ParameterTuple> load_tuples(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read tuple file '" + path + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("tuple file '" + path + "': " + e.what());
    }
    if (!doc.is_array()) throw ConfigError("tuple file must hold a JSON list");
    std::vector<ParameterTuple> out;
    for (const json& entry : doc) {
        try {
            const CoinParameters params(entry.at("sigma_plus").get<double>(), entry.at("sigma_minus").get<double>());
            const complex alpha(entry.at("alpha_re").get<double>(), entry.at("alpha_im").get<double>());
            const complex beta(entry.at("beta_re").get<double>(), entry.at("beta_im").get<double>());
            out.push_back({params, make_initial_state(alpha, beta)});
        } catch (const json::exception& e) {
            throw ConfigError("tuple file '" + path + "': " + e.what());
        } catch (const DomainError& e) {
            throw ConfigError("tuple file '" + path + "': " + e.what());
        }
    }
    return out;
}

namespace {

struct SweepEntry {
    RunConfig config;
    bool simulate = false;
    fs::path dir;
};

std::string angle_field(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number()) return format_double(v.get<double>());
    throw ConfigError("angles must be numbers or strings");
}

SweepEntry parse_entry(const json& e, std::size_t index, const fs::path& root) {
    if (!e.is_object()) throw ConfigError("sweep entry " + std::to_string(index) + " is not an object");
    static const std::set<std::string> known = {"sigma_plus", "sigma_minus", "alpha_re", "alpha_im", "beta_re",
                                                "beta_im",    "t",           "grid_points", "bin_width", "xmax",
                                                "out"};
    SweepEntry out;
    char name[32];
    std::snprintf(name, sizeof name, "entry_%05zu", index);
    std::string rel = name;
    try {
        for (const auto& [key, value] : e.items()) {
            if (!known.count(key)) throw ConfigError("unknown field '" + key + "'");
            if (key == "sigma_plus") out.config.sigma_plus = angle_field(value);
            else if (key == "sigma_minus") out.config.sigma_minus = angle_field(value);
            else if (key == "alpha_re") out.config.alpha_re = value.get<double>();
            else if (key == "alpha_im") out.config.alpha_im = value.get<double>();
            else if (key == "beta_re") out.config.beta_re = value.get<double>();
            else if (key == "beta_im") out.config.beta_im = value.get<double>();
            else if (key == "t") {
                out.config.t = value.get<long>();
                out.simulate = true;
            } else if (key == "grid_points") out.config.grid_points = value.get<long>();
            else if (key == "bin_width") out.config.bin_width = value.get<double>();
            else if (key == "xmax") out.config.xmax = value.get<long>();
            else if (key == "out") rel = value.get<std::string>();
        }
        // Validate up front so nothing is written for a bad list.
        coin_parameters(out.config);
        initial_state(out.config);
    } catch (const json::exception& ex) {
        throw ConfigError("sweep entry " + std::to_string(index) + ": " + ex.what());
    } catch (const ConfigError& ex) {
        throw ConfigError("sweep entry " + std::to_string(index) + ": " + ex.what());
    }
    if (rel.empty() || fs::path(rel).is_absolute()) {
        throw ConfigError("sweep entry " + std::to_string(index) + ": out must be a relative path");
    }
    out.dir = (root / rel).lexically_normal();
    if (!out.dir.has_filename()) out.dir = out.dir.parent_path();
    return out;
}

}  // namespace

std::vector<SweepSummaryRow> run_sweep(const std::string& params_file, const std::string& out_dir, long max_time) {
    std::ifstream in(params_file);
    if (!in) throw ConfigError("cannot read sweep file '" + params_file + "'");
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::exception& e) {
        throw ConfigError("sweep file: " + std::string(e.what()));
    }
    if (!doc.is_array()) throw ConfigError("sweep file must hold a JSON list");
    if (doc.size() > kMaxSweepEntries) throw ConfigError("sweep file holds more than 10000 entries");

    const fs::path root = fs::path(out_dir).lexically_normal();
    std::vector<SweepEntry> entries;
    std::set<fs::path> seen;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        entries.push_back(parse_entry(doc[i], i, root));
        if (!seen.insert(entries.back().dir).second) {
            throw ConfigError("duplicate output path '" + entries.back().dir.string() + "'");
        }
        if (entries.back().simulate && entries.back().config.t > max_time) {
            throw ResourceError("sweep entry " + std::to_string(i) + " exceeds the time cap");
        }
    }

    // Everything this run creates, so a failure can be rolled back.
    std::mutex created_mutex;
    std::vector<fs::path> created;
    auto make_dir = [&](const fs::path& dir) {
        std::vector<fs::path> fresh;
        for (fs::path p = dir; !p.empty() && !fs::exists(p); p = p.parent_path()) fresh.push_back(p);
        fs::create_directories(dir);
        std::lock_guard lock(created_mutex);
        created.insert(created.end(), fresh.begin(), fresh.end());
    };
    auto note_file = [&](const fs::path& p) {
        std::lock_guard lock(created_mutex);
        created.push_back(p);
    };
    auto rollback = [&] {
        std::error_code ec;
        // Files first, then directories deepest first.
        std::sort(created.begin(), created.end(),
                  [](const fs::path& a, const fs::path& b) { return a.string().size() > b.string().size(); });
        for (const auto& p : created) {
            if (fs::is_directory(p, ec)) fs::remove(p, ec);  // only if empty
            else fs::remove(p, ec);
        }
    };

    std::vector<SweepSummaryRow> rows(entries.size());
    try {
        make_dir(root);
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        auto worker = [&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= entries.size()) return;
                {
                    std::lock_guard lock(failure_mutex);
                    if (failure) return;
                }
                try {
                    const SweepEntry& e = entries[i];
                    make_dir(e.dir);
                    const std::string density = (e.dir / "density.csv").string();
                    note_file(density);
                    note_file(sidecar_path(density, Format::csv));
                    write_density(e.config, density);
                    note_file(e.dir / "timeavg.csv");
                    write_timeavg(e.config, (e.dir / "timeavg.csv").string());
                    if (e.simulate) {
                        note_file(e.dir / "simulate.csv");
                        write_simulate(e.config, (e.dir / "simulate.csv").string(), max_time);
                    }
                    const MassCheck m = mass_check(coin_parameters(e.config), initial_state(e.config));
                    rows[i] = {fs::relative(e.dir, root).string(), m.C, m.ac_mass,
                               std::abs(m.sum() - 1.0) <= kMassTolerance};
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        };
        const std::size_t n_workers =
            std::max<std::size_t>(1, std::min<std::size_t>(entries.size(), std::thread::hardware_concurrency()));
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);

        AtomicFile file((root / "summary.csv").string());
        note_file(root / "summary.csv");
        file.stream() << "index,out,C,ac_mass,sum,mass_check\n";
        for (std::size_t i = 0; i < rows.size(); ++i) {
            file.stream() << i << ',' << rows[i].out << ',' << format_double(rows[i].C) << ','
                          << format_double(rows[i].ac_mass) << ',' << format_double(rows[i].C + rows[i].ac_mass)
                          << ',' << (rows[i].mass_ok ? "pass" : "fail") << '\n';
        }
        file.commit();
    } catch (...) {
        rollback();
        throw;
    }
    return rows;
}

namespace {

json report_json(const std::string& suite, const std::vector<CheckRecord>& checks) {
    json list = json::array();
    std::size_t failed = 0;
    for (const CheckRecord& c : checks) {
        if (!c.passed) ++failed;
        list.push_back({{"name", c.name},
                        {"status", c.passed ? "pass" : "fail"},
                        {"value", c.value},
                        {"tolerance", c.tolerance},
                        {"detail", c.detail}});
    }
    return {{"suite", suite},
            {"passed", failed == 0},
            {"total", checks.size()},
            {"failed", failed},
            {"checks", std::move(list)}};
}

std::vector<CheckRecord> run_suite(const std::string& suite, const RunConfig& config,
                                   const std::string& seed_file, const std::vector<long>& ts, long max_time) {
    std::vector<ParameterTuple> tuples = {{coin_parameters(config), initial_state(config)}};
    if (!seed_file.empty()) {
        const auto extra = load_tuples(seed_file);
        tuples.insert(tuples.end(), extra.begin(), extra.end());
    }
    std::vector<CheckRecord> out;
    auto append = [&out](std::vector<CheckRecord> more) {
        out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    };
    const bool all = suite == "all";
    if (all || suite == "mass") append(run_mass_suite(tuples));
    if (all || suite == "gf") append(run_gf_suite(tuples));
    if (all || suite == "residue") {
        // The assembly check covers the leading tuple and up to 20 sweep tuples.
        const std::size_t n = std::min<std::size_t>(tuples.size(), 21);
        append(run_residue_suite(std::vector<ParameterTuple>(tuples.begin(), tuples.begin() + static_cast<long>(n))));
    }
    if (all || suite == "converge") {
        for (const long t : ts) {
            if (t > max_time) throw ResourceError("t = " + std::to_string(t) + " exceeds the time cap");
        }
        try {
            append(run_converge_suite(tuples.front(), ts));
        } catch (const DomainError& e) {
            throw ConfigError(e.what());
        }
    }
    return out;
}

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw ConfigError("--format must be csv or json");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    RunConfig config;
    std::string format = "csv";
    std::string out_path;
    std::string suite = "all";
    std::string seed_file;
    std::string params_file;
    std::vector<long> ts = {100, 1000, 10000};

    CLI::App app{"Two-phase quantum walk with one defect: simulation, limit measures and cross-checks", "qwalk"};
    app.require_subcommand(1);

    auto add_walk_options = [&](CLI::App* sub) {
        sub->add_option("--sigma-plus", config.sigma_plus, "coin phase for x >= 1 (e.g. 3pi/2)")
            ->capture_default_str();
        sub->add_option("--sigma-minus", config.sigma_minus, "coin phase for x <= -1 (e.g. pi)")
            ->capture_default_str();
        sub->add_option("--alpha-re", config.alpha_re, "Re alpha")->capture_default_str();
        sub->add_option("--alpha-im", config.alpha_im, "Im alpha")->capture_default_str();
        sub->add_option("--beta-re", config.beta_re, "Re beta")->capture_default_str();
        sub->add_option("--beta-im", config.beta_im, "Im beta")->capture_default_str();
    };
    auto add_format = [&](CLI::App* sub) {
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    };

    CLI::App* simulate = app.add_subcommand("simulate", "evolve the walk and write the distribution at time t");
    add_walk_options(simulate);
    simulate->add_option("--t", config.t, "time")->capture_default_str();
    simulate->add_option("--bin-width", config.bin_width, "histogram bin width in x/t")->capture_default_str();
    simulate->add_option("--out", out_path, "output file")->required();
    add_format(simulate);

    CLI::App* density = app.add_subcommand("density", "write w, f_K and the limit density on a grid");
    add_walk_options(density);
    density->add_option("--grid-points", config.grid_points, "grid size")->capture_default_str();
    density->add_option("--out", out_path, "output file; scalars go to a .json sidecar")->required();
    add_format(density);

    CLI::App* timeavg = app.add_subcommand("timeavg", "write the time-averaged limit measure on -xmax..xmax");
    add_walk_options(timeavg);
    timeavg->add_option("--xmax", config.xmax, "largest |x|")->capture_default_str();
    timeavg->add_option("--out", out_path, "output file")->required();
    add_format(timeavg);

    CLI::App* verify = app.add_subcommand("verify", "run a verification suite and write a JSON report");
    add_walk_options(verify);
    verify->add_option("--suite", suite, "mass, gf, residue, converge or all")
        ->check(CLI::IsMember({"mass", "gf", "residue", "converge", "all"}))
        ->capture_default_str();
    verify->add_option("--seed-file", seed_file, "JSON list of extra parameter tuples");
    verify->add_option("--t", ts, "times for the convergence suite")->capture_default_str();
    verify->add_option("--out", out_path, "report file (stdout when omitted)");

    CLI::App* sweep = app.add_subcommand("sweep", "run density, timeavg (and simulate) for a list of configs");
    sweep->add_option("params", params_file, "JSON list of run configs")->required();
    sweep->add_option("--out", out_path, "output directory")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }

    try {
        config.format = parse_format(format);
        const long max_time = max_time_from_env();
        if (*simulate) {
            write_simulate(config, out_path, max_time);
        } else if (*density) {
            write_density(config, out_path);
        } else if (*timeavg) {
            write_timeavg(config, out_path);
        } else if (*verify) {
            const std::vector<CheckRecord> checks = run_suite(suite, config, seed_file, ts, max_time);
            const json report = report_json(suite, checks);
            if (out_path.empty()) {
                out << report.dump(2) << '\n';
            } else {
                write_json(report, out_path);
            }
            for (const CheckRecord& c : checks) {
                if (!c.passed) err << "FAIL " << c.name << ": " << format_double(c.value) << " > "
                                   << format_double(c.tolerance) << (c.detail.empty() ? "" : " (" + c.detail + ")")
                                   << '\n';
            }
            return report.at("passed").get<bool>() ? kOk : kCheckFailed;
        } else if (*sweep) {
            const auto rows = run_sweep(params_file, out_path, max_time);
            const bool ok = std::all_of(rows.begin(), rows.end(), [](const SweepSummaryRow& r) { return r.mass_ok; });
            return ok ? kOk : kCheckFailed;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const ResourceError& e) {
        err << "error: " << e.what() << '\n';
        return kResource;
    } catch (const Error& e) {
        // Library precondition failures are bad input from the user's side.
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const fs::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    }
    return kOk;
}

}  // namespace qw::cli
