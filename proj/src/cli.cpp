#include "qozcp/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "qozcp/solver.hpp"
#include "qozcp/waveform.hpp"

namespace qozcp::cli {
namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

json encode_sequence(const ComplexSequence& s) {
    json arr = json::array();
    for (const auto& v : s) arr.push_back(json::array({v.real(), v.imag()}));
    return arr;
}

ComplexSequence decode_sequence(const json& arr) {
    if (!arr.is_array()) throw UsageError("archive: sequence must be an array of [re, im] pairs");
    ComplexVector v;
    v.reserve(arr.size());
    for (const auto& e : arr) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
            throw UsageError("archive: sequence entries must be [re, im] number pairs");
        }
        v.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return ComplexSequence(std::move(v));
}

json correlation_metrics(const SequencePair& pair, std::size_t zone) {
    const auto Z = static_cast<std::ptrdiff_t>(zone);
    return json{
        {"max_complementary_sidelobe_in_zone", max_modulus(complementary_sum(pair), 1, Z - 1)},
        {"max_cross_correlation_in_zone", max_modulus(cross_correlation(pair.x(), pair.y()), 0, Z - 1)},
        {"papr_x", papr(pair.x())},
        {"papr_y", papr(pair.y())},
    };
}

json metrics_json(const MetricsReport& m) {
    return json{
        {"max_complementary_sidelobe_in_zone", m.max_complementary_sidelobe_in_zone},
        {"max_cross_correlation_in_zone", m.max_cross_correlation_in_zone},
        {"max_aaf_sidelobe_omega1", m.max_aaf_sidelobe_omega1},
        {"max_aaf_sidelobe_omega1_normalized", m.max_aaf_sidelobe_omega1_normalized()},
        {"max_caf_omega2", m.max_caf_omega2},
        {"peak_value", m.peak_value},
    };
}

// Writes every file only after all contents exist, via temp-then-rename.
void commit_files(const std::vector<std::pair<fs::path, std::string>>& files) {
    std::vector<fs::path> temps;
    for (const auto& [path, content] : files) {
        if (path.has_parent_path()) fs::create_directories(path.parent_path());
        fs::path tmp = path;
        tmp += ".tmp";
        std::ofstream os(tmp, std::ios::binary);
        os << content;
        if (!os) {
            for (const auto& t : temps) fs::remove(t);
            fs::remove(tmp);
            throw std::runtime_error("failed to write " + path.string());
        }
        temps.push_back(tmp);
    }
    for (std::size_t i = 0; i < files.size(); ++i) fs::rename(temps[i], files[i].first);
}

fs::path resolve_output(const std::string& given, const std::string& fallback_name) {
    if (!given.empty()) return fs::path(given);
    return default_output_dir() / fallback_name;
}

std::string sci(double v) {
    std::ostringstream os;
    os << std::scientific << std::setprecision(3) << v;
    return os.str();
}

struct DesignFlags {
    std::size_t length = 64;
    std::size_t zone = 30;
    std::string mode = "papr";
    double papr_cap = 5.0;
    double alpha = 0.5;
    std::uint64_t seed = 0;
    std::size_t restarts = 1;
    std::size_t max_iter = 200000;
    double tol = 1e-14;
    std::size_t workers = 0;
    std::string out;
};

int cmd_design(const DesignFlags& f, bool papr_given, std::ostream& out) {
    SolverConfig c;
    c.length = f.length;
    c.zone = f.zone;
    c.alpha = f.alpha;
    c.mode = parse_constraint_mode(f.mode);
    if (papr_given && c.mode == ConstraintMode::Unimodular) {
        throw UsageError("--papr only applies to --mode papr");
    }
    c.papr_cap = f.papr_cap;
    c.max_iterations = f.max_iter;
    c.tolerance = f.tol;
    c.seed = f.seed;
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    auto result = solve_best_of(c, f.restarts, f.workers);
    PairArchive archive{
        kFormatVersion,
        c.zone,
        to_string(c.mode),
        json{{"length", c.length},
             {"zone", c.zone},
             {"mode", to_string(c.mode)},
             {"alpha", c.alpha},
             {"energy", c.energy_budget()},
             {"papr_cap", c.mode == ConstraintMode::PaprConstrained ? json(c.papr_cap) : json(nullptr)},
             {"seed", c.seed},
             {"restarts", f.restarts},
             {"max_iter", c.max_iterations},
             {"tol", c.tolerance}},
        result.pair,
        result.state.objective_history,
        correlation_metrics(result.pair, c.zone),
    };
    archive.metrics["objective"] = result.state.objective_history.back();
    archive.metrics["iterations"] = result.state.iteration;
    archive.metrics["best_seed"] = std::stoull(result.pair.meta().at("seed"));

    const auto path = resolve_output(f.out, "qozcp_L" + std::to_string(c.length) + "_Z" + std::to_string(c.zone) + ".json");
    commit_files({{path, serialize_archive(archive)}});

    out << "wrote " << path.string() << "\n"
        << "best seed                      " << archive.metrics["best_seed"].get<std::uint64_t>() << "\n"
        << "iterations                     " << result.state.iteration << "\n"
        << "objective                      " << sci(result.state.objective_history.back()) << "\n"
        << "max complementary sidelobe     " << sci(archive.metrics["max_complementary_sidelobe_in_zone"].get<double>())
        << "\n"
        << "max cross-correlation          " << sci(archive.metrics["max_cross_correlation_in_zone"].get<double>())
        << "\n";
    return kOk;
}

struct EvaluateFlags {
    std::string pair;
    std::string schedule = "ptm-a";
    std::size_t pri = 8;
    double doppler_max = 3.0;
    std::size_t doppler_samples = 512;
    std::optional<std::size_t> zone;
    std::string out_prefix;
};

std::size_t resolve_zone(const LoadedPair& p, std::optional<std::size_t> flag) {
    const std::size_t z = flag ? *flag : p.zone.value_or(p.pair.length());
    if (z < 1 || z > p.pair.length()) throw UsageError("zone must lie in [1, L]");
    return z;
}

TransmitSchedule make_schedule(const std::string& kind, const SequencePair& pair, std::size_t pri) {
    try {
        if (kind == "ptm-a") return ptm_a_schedule(pair, pri);
        if (kind == "ptm-siso") return siso_schedule(pair, pri);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    throw UsageError("unknown schedule '" + kind + "' (expected ptm-siso or ptm-a)");
}

int cmd_evaluate(const EvaluateFlags& f, std::ostream& out) {
    const auto loaded = load_pair(f.pair);
    const std::size_t zone = resolve_zone(loaded, f.zone);
    const auto schedule = make_schedule(f.schedule, loaded.pair, f.pri);
    if (f.doppler_samples == 0 || !(f.doppler_max >= 0.0)) {
        throw UsageError("--doppler-samples must be positive and --doppler-max nonnegative");
    }

    const auto K = static_cast<std::ptrdiff_t>(zone) - 1;
    const auto grid = DelayDopplerGrid::uniform(K, f.doppler_max, f.doppler_samples);
    MetricsOptions opts;
    opts.pri_count = f.pri;
    const auto omega1 = DelayDopplerGrid::uniform(K, opts.omega1_theta_max, opts.omega1_samples);
    const auto omega2 = DelayDopplerGrid::uniform(K, opts.omega2_theta_max, opts.omega2_samples);
    const auto report = zone_metrics(loaded.pair, zone, schedule, omega1, omega2);

    const std::string prefix =
        f.out_prefix.empty() ? (default_output_dir() / "qozcp_eval").string() : f.out_prefix;
    std::vector<std::pair<fs::path, std::string>> files;

    const auto aaf = ambiguity_surface(schedule, 0, 0, grid);
    std::ostringstream aaf_csv;
    write_surface_table(aaf_csv, aaf);
    files.emplace_back(prefix + "_aaf.csv", aaf_csv.str());

    json metrics{{"pair", loaded.label},
                 {"length", loaded.pair.length()},
                 {"zone", zone},
                 {"schedule", f.schedule},
                 {"pri", f.pri},
                 {"metrics", metrics_json(report)},
                 {"surface_aaf_max_sidelobe", aaf.max_modulus(true)}};
    if (schedule.rows() > 1) {
        const auto caf = ambiguity_surface(schedule, 0, 1, grid);
        std::ostringstream caf_csv;
        write_surface_table(caf_csv, caf);
        files.emplace_back(prefix + "_caf.csv", caf_csv.str());
        metrics["surface_caf_max"] = caf.max_modulus(false);
    }
    files.emplace_back(prefix + "_metrics.json", metrics.dump(2) + "\n");
    commit_files(files);

    for (const auto& [path, _] : files) out << "wrote " << path.string() << "\n";
    out << "max complementary sidelobe (zone)   " << sci(report.max_complementary_sidelobe_in_zone) << "\n"
        << "max cross-correlation (zone)        " << sci(report.max_cross_correlation_in_zone) << "\n"
        << "max AAF sidelobe over Omega1        " << sci(report.max_aaf_sidelobe_omega1) << "\n"
        << "max CAF over Omega2                 " << sci(report.max_caf_omega2) << "\n";
    return kOk;
}

struct CompareFlags {
    std::vector<std::string> pairs;
    std::optional<std::size_t> zone;
    std::size_t pri = 8;
    std::string out;
};

int cmd_compare(const CompareFlags& f, std::ostream& out) {
    if (f.pairs.size() != 2) throw UsageError("compare needs exactly two --pair inputs");
    const auto a = load_pair(f.pairs[0]);
    const auto b = load_pair(f.pairs[1]);
    if (a.pair.length() != b.pair.length()) throw UsageError("compare: pair lengths differ");
    if (a.zone && b.zone && *a.zone != *b.zone) throw UsageError("compare: pair zones differ");
    std::optional<std::size_t> zone = f.zone;
    if (!zone) zone = a.zone ? a.zone : b.zone;
    const std::size_t Z = resolve_zone(a, zone);

    MetricsOptions opts;
    opts.pri_count = f.pri;
    const MetricsReport ma = zone_metrics(a.pair, Z, opts);
    const MetricsReport mb = zone_metrics(b.pair, Z, opts);

    std::ostringstream table;
    table << "L=" << a.pair.length() << " Z=" << Z << " N=" << f.pri << "\n";
    table << std::left << std::setw(34) << "metric" << std::setw(16) << a.label << std::setw(16) << b.label << "\n";
    auto row = [&](const char* name, double va, double vb) {
        table << std::left << std::setw(34) << name << std::setw(16) << sci(va) << std::setw(16) << sci(vb) << "\n";
    };
    row("max complementary sidelobe", ma.max_complementary_sidelobe_in_zone, mb.max_complementary_sidelobe_in_zone);
    row("max cross-correlation", ma.max_cross_correlation_in_zone, mb.max_cross_correlation_in_zone);
    row("max AAF sidelobe (Omega1)", ma.max_aaf_sidelobe_omega1, mb.max_aaf_sidelobe_omega1);
    row("max CAF (Omega2)", ma.max_caf_omega2, mb.max_caf_omega2);

    if (!f.out.empty()) {
        json report{{"length", a.pair.length()},
                    {"zone", Z},
                    {"pri", f.pri},
                    {"pairs", json::array({json{{"label", a.label}, {"metrics", metrics_json(ma)}},
                                           json{{"label", b.label}, {"metrics", metrics_json(mb)}}})}};
        commit_files({{fs::path(f.out), report.dump(2) + "\n"}});
    }
    out << table.str();
    return kOk;
}

}  // namespace

std::string serialize_archive(const PairArchive& archive) {
    json j;
    j["format_version"] = archive.format_version;
    j["length"] = archive.pair.length();
    j["zone"] = archive.zone;
    j["mode"] = archive.mode;
    j["config"] = archive.config;
    j["x"] = encode_sequence(archive.pair.x());
    j["y"] = encode_sequence(archive.pair.y());
    json meta = json::object();
    for (const auto& [k, v] : archive.pair.meta()) meta[k] = v;
    j["meta"] = meta;
    j["objective_history"] = archive.objective_history;
    j["metrics"] = archive.metrics;
    return j.dump(2) + "\n";
}

PairArchive parse_archive(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError(std::string("archive is not valid JSON: ") + e.what());
    }
    try {
        const int version = j.at("format_version").get<int>();
        if (version != kFormatVersion) {
            throw UsageError("unsupported archive format_version " + std::to_string(version));
        }
        std::map<std::string, std::string> meta;
        if (j.contains("meta")) {
            for (const auto& [k, v] : j.at("meta").items()) meta[k] = v.get<std::string>();
        }
        SequencePair pair(decode_sequence(j.at("x")), decode_sequence(j.at("y")), std::move(meta));
        if (j.at("length").get<std::size_t>() != pair.length()) {
            throw UsageError("archive length field disagrees with sequence data");
        }
        PairArchive a{version,
                      j.at("zone").get<std::size_t>(),
                      j.at("mode").get<std::string>(),
                      j.value("config", json::object()),
                      std::move(pair),
                      j.value("objective_history", std::vector<double>{}),
                      j.value("metrics", json::object())};
        if (a.zone < 1 || a.zone > a.pair.length()) throw UsageError("archive zone outside [1, L]");
        return a;
    } catch (const json::exception& e) {
        throw UsageError(std::string("archive is missing or has malformed fields: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("archive holds an invalid pair: ") + e.what());
    }
}

PairArchive read_archive(const fs::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw UsageError("cannot open archive " + path.string());
    std::ostringstream ss;
    ss << is.rdbuf();
    return parse_archive(ss.str());
}

void write_surface_table(std::ostream& os, const AmbiguitySurface& surface) {
    const auto& g = surface.grid();
    os << "k,theta,re,im,modulus\n";
    os << std::setprecision(17);
    for (std::ptrdiff_t k = -g.max_delay; k <= g.max_delay; ++k) {
        for (std::size_t j = 0; j < g.dopplers.size(); ++j) {
            const auto v = surface.at(k, j);
            os << k << ',' << g.dopplers[j] << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
        }
    }
}

LoadedPair load_pair(const std::string& spec) {
    constexpr std::string_view golay = "golay:";
    if (spec.rfind(golay, 0) == 0) {
        std::size_t length = 0;
        try {
            std::size_t pos = 0;
            length = std::stoul(spec.substr(golay.size()), &pos);
            if (pos != spec.size() - golay.size()) throw std::invalid_argument("trailing characters");
            return LoadedPair{golay_pair(length), std::nullopt, spec};
        } catch (const std::exception& e) {
            throw UsageError("bad pair spec '" + spec + "': " + e.what());
        }
    }
    auto archive = read_archive(spec);
    return LoadedPair{std::move(archive.pair), archive.zone, fs::path(spec).stem().string()};
}

fs::path default_output_dir() {
    if (const char* dir = std::getenv("QOZCP_OUTPUT_DIR"); dir != nullptr && *dir != '\0') return fs::path(dir);
    return fs::path(".");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Design and evaluate quasi-orthogonal Z-complementary pairs", "qozcp"};
    app.require_subcommand(1);

    DesignFlags df;
    auto* design = app.add_subcommand("design", "Design a pair with the accelerated MM solver");
    design->add_option("--length", df.length, "Sequence length L")->capture_default_str();
    design->add_option("--zone", df.zone, "Zone width Z")->capture_default_str();
    design->add_option("--mode", df.mode, "Constraint set")
        ->check(CLI::IsMember({"papr", "unimodular"}))
        ->capture_default_str();
    auto* papr_opt = design->add_option("--papr", df.papr_cap, "PAPR cap p_r (papr mode)")->capture_default_str();
    design->add_option("--alpha", df.alpha, "Mixing scalar between the two objective terms")->capture_default_str();
    design->add_option("--seed", df.seed, "Seed of the first restart")->capture_default_str();
    design->add_option("--restarts", df.restarts, "Number of seeded restarts (seed, seed+1, ...)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    design->add_option("--max-iter", df.max_iter, "Iteration cap per restart")->capture_default_str();
    design->add_option("--tol", df.tol, "Relative objective decrease tolerance")->capture_default_str();
    design->add_option("--workers", df.workers, "Parallel restart workers (0 = hardware threads)");
    design->add_option("--out", df.out, "Archive path (default $QOZCP_OUTPUT_DIR/qozcp_L<L>_Z<Z>.json)");

    EvaluateFlags ef;
    std::size_t eval_zone = 0;
    auto* evaluate = app.add_subcommand("evaluate", "Write ambiguity surfaces and zone metrics for a pair");
    evaluate->add_option("--pair", ef.pair, "Archive path or golay:L")->required();
    evaluate->add_option("--schedule", ef.schedule, "Transmit schedule")
        ->check(CLI::IsMember({"ptm-siso", "ptm-a"}))
        ->capture_default_str();
    evaluate->add_option("--pri", ef.pri, "Number of PRIs N")->check(CLI::PositiveNumber)->capture_default_str();
    evaluate->add_option("--doppler-max", ef.doppler_max, "Largest Doppler phase of the surface grid")
        ->capture_default_str();
    evaluate->add_option("--doppler-samples", ef.doppler_samples, "Doppler samples of the surface grid")
        ->capture_default_str();
    auto* eval_zone_opt = evaluate->add_option("--zone", eval_zone, "Zone width (default: archive's, or L)");
    evaluate->add_option("--out-prefix", ef.out_prefix, "Output prefix (default $QOZCP_OUTPUT_DIR/qozcp_eval)");

    CompareFlags cf;
    std::size_t cmp_zone = 0;
    auto* compare = app.add_subcommand("compare", "Side-by-side zone metrics of two pairs");
    compare->add_option("--pair", cf.pairs, "Archive path or golay:L (give twice)")->required()->expected(1, 2);
    auto* cmp_zone_opt = compare->add_option("--zone", cmp_zone, "Zone width (default: from the archives)");
    compare->add_option("--pri", cf.pri, "Number of PRIs N")->check(CLI::PositiveNumber)->capture_default_str();
    compare->add_option("--out", cf.out, "Optional JSON report path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    }

    try {
        if (design->parsed()) return cmd_design(df, papr_opt->count() > 0, out);
        if (evaluate->parsed()) {
            if (eval_zone_opt->count() > 0) ef.zone = eval_zone;
            return cmd_evaluate(ef, out);
        }
        if (compare->parsed()) {
            if (cmp_zone_opt->count() > 0) cf.zone = cmp_zone;
            return cmd_compare(cf, out);
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
    return kUsageError;
}

}  // namespace qozcp::cli
