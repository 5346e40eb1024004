#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "noma/acceptance.hpp"
#include "noma/gamma_search.hpp"
#include "noma/lmmse.hpp"
#include "noma/track.hpp"

namespace {

constexpr const char* kToolVersion = "1.0.0";
constexpr int kExitOk = 0;
constexpr int kExitFailedVerdict = 2;
constexpr int kExitInvalidConfig = 3;

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalOptions {
    double tol = 1e-8;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string output_path;
    bool bits = false;
};

double emit_scale(const GlobalOptions& g) {
    return g.bits ? 1.0 / std::log(2.0) : 1.0;
}

std::string log_base(const GlobalOptions& g) {
    return g.bits ? "bits" : "nats";
}

std::uint64_t fnv1a(const std::string& s) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string config_hash(const json& cfg) {
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << fnv1a(cfg.dump());
    return os.str();
}

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot open config file: " + path);
    }
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
}

void reject_unknown_keys(const json& obj, const std::string& where,
                         const std::vector<std::string>& allowed) {
    if (!obj.is_object()) {
        throw ConfigError(where + ": expected an object");
    }
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end()) {
            throw ConfigError(where + ": unknown key \"" + it.key() + "\"");
        }
    }
}

noma::SystemModel system_from(const json& cfg) {
    if (!cfg.contains("system")) {
        throw ConfigError("config: missing \"system\" block");
    }
    try {
        return noma::build_system(cfg.at("system"));
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
}

noma::RVector vector_field(const json& cfg, const std::string& key, int expected) {
    const json& arr = cfg.at(key);
    if (!arr.is_array() || static_cast<int>(arr.size()) != expected) {
        throw ConfigError("config." + key + ": expected an array of length " +
                          std::to_string(expected));
    }
    noma::RVector v(expected);
    for (int i = 0; i < expected; ++i) {
        if (!arr[i].is_number()) {
            throw ConfigError("config." + key + ": entry " + std::to_string(i) +
                              " is not a number");
        }
        v[i] = arr[i].get<double>();
    }
    return v;
}

noma::GammaVector gamma_field(const json& cfg, int nu) {
    const noma::RVector g = vector_field(cfg, "gamma", nu);
    for (int i = 0; i < nu; ++i) {
        if (!(g[i] > 0.0)) {
            throw ConfigError("config.gamma: entry " + std::to_string(i) + " must be positive");
        }
    }
    if (g[0] != 1.0) {
        throw ConfigError("config.gamma: gamma_1 must equal 1 (anchored gauge)");
    }
    return noma::GammaVector(g);
}

json meta_block(const json& cfg, const GlobalOptions& g) {
    return json{{"tool_version", kToolVersion},
                {"log_base", log_base(g)},
                {"config_hash", config_hash(cfg)}};
}

std::string csv_header(const json& cfg, const GlobalOptions& g) {
    std::ostringstream os;
    os << "# tool_version=" << kToolVersion << "\n"
       << "# log_base=" << log_base(g) << "\n"
       << "# config_hash=" << config_hash(cfg) << "\n";
    return os.str();
}

void emit(const GlobalOptions& g, const std::string& text) {
    if (g.output_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(g.output_path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot open output file: " + g.output_path);
    }
    out << text;
}

json rates_json(const noma::RatePoint& p, double scale) {
    json arr = json::array();
    for (int i = 0; i < p.rates.size(); ++i) {
        arr.push_back(p.rates[i] * scale);
    }
    return json{{"rates", arr}, {"sum", p.sum * scale}};
}

std::string format_double(double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
}

int cmd_capacity(const json& cfg, const GlobalOptions& g) {
    reject_unknown_keys(cfg, "config", {"system", "targets", "output"});
    const noma::SystemModel sys = system_from(cfg);
    const int nu = sys.num_users();
    if (nu > 7) {
        throw ConfigError("capacity: factorial enumeration guard, N_u must be <= 7");
    }
    const double scale = emit_scale(g);

    json report;
    report["meta"] = meta_block(cfg, g);
    report["sum_capacity"] = noma::sum_capacity(sys) * scale;

    json extremes = json::array();
    noma::UserPermutation perm(nu);
    for (int i = 0; i < nu; ++i) perm[i] = i;
    do {
        json one;
        one["decoding_order"] = perm;
        one["point"] = rates_json(noma::extreme_point(sys, perm), scale);
        extremes.push_back(std::move(one));
    } while (std::next_permutation(perm.begin(), perm.end()));
    report["extreme_points"] = std::move(extremes);

    bool verdict_ok = true;
    if (cfg.contains("targets")) {
        const noma::RVector t = vector_field(cfg, "targets", nu) / scale;
        const noma::MembershipResult mem =
            noma::region_contains(sys, noma::RatePoint::from_rates(t), g.tol);
        report["membership"] = json{{"contained", mem.contained},
                                    {"violated_subsets", mem.violated}};
        verdict_ok = mem.contained;
    }

    emit(g, report.dump(2) + "\n");
    return verdict_ok ? kExitOk : kExitFailedVerdict;
}

int cmd_rates(const json& cfg, const GlobalOptions& g, bool cross_check) {
    reject_unknown_keys(cfg, "config", {"system", "gamma", "sweep", "output"});
    const noma::SystemModel sys = system_from(cfg);
    const int nu = sys.num_users();
    const double scale = emit_scale(g);

    std::vector<noma::RVector> gammas;
    if (cfg.contains("sweep")) {
        reject_unknown_keys(cfg.at("sweep"), "config.sweep", {"user", "lo", "hi", "points"});
        const json& sw = cfg.at("sweep");
        const int user = sw.value("user", nu - 1);
        if (user < 1 || user >= nu) {
            throw ConfigError("config.sweep.user: must be in [1, N_u - 1] (user 0 is anchored)");
        }
        const double lo = sw.value("lo", 1e-6);
        const double hi = sw.value("hi", 1e6);
        const int points = sw.value("points", 60);
        if (!(lo > 0.0) || !(hi > lo) || points < 2) {
            throw ConfigError("config.sweep: need 0 < lo < hi and points >= 2");
        }
        noma::RVector base = cfg.contains("gamma") ? gamma_field(cfg, nu).gammas
                                                   : noma::RVector::Ones(nu);
        for (int k = 0; k < points; ++k) {
            noma::RVector gk = base;
            gk[user] = lo * std::pow(hi / lo, static_cast<double>(k) / (points - 1));
            gammas.push_back(std::move(gk));
        }
    } else if (cfg.contains("gamma")) {
        gammas.push_back(gamma_field(cfg, nu).gammas);
    } else {
        throw ConfigError("rates: config needs \"gamma\" or \"sweep\"");
    }

    std::ostringstream os;
    os << csv_header(cfg, g);
    os << "# columns: gamma_1..gamma_" << nu << ", R_1..R_" << nu << ", sum";
    if (cross_check) {
        os << ", max_quadrature_dev, max_decoder_dev";
    }
    os << "\n";
    for (const noma::RVector& gk : gammas) {
        const noma::GammaVector gv(gk);
        const noma::RatePoint r = noma::rates_closed_form(sys, gv);
        for (int i = 0; i < nu; ++i) os << format_double(gk[i]) << ",";
        for (int i = 0; i < nu; ++i) os << format_double(r.rates[i] * scale) << ",";
        os << format_double(r.sum * scale);
        if (cross_check) {
            double dq = 0.0, dd = 0.0;
            for (int i = 0; i < nu; ++i) {
                dq = std::max(dq, std::abs(noma::rate_quadrature(sys, i, gv, 1e-10) - r.rates[i]));
                dd = std::max(
                    dd, std::abs(noma::rate_from_decoder_transfer(sys, i, gv, 1e-8) - r.rates[i]));
            }
            os << "," << format_double(dq * scale) << "," << format_double(dd * scale);
        }
        os << "\n";
    }
    emit(g, os.str());
    return kExitOk;
}

int cmd_search(const json& cfg, const GlobalOptions& g) {
    reject_unknown_keys(cfg, "config", {"system", "targets", "search", "output"});
    const noma::SystemModel sys = system_from(cfg);
    const int nu = sys.num_users();
    const double scale = emit_scale(g);
    if (!cfg.contains("targets")) {
        throw ConfigError("search: config needs \"targets\"");
    }
    const noma::RVector targets = vector_field(cfg, "targets", nu) / scale;

    noma::SearchConfig sc;
    sc.epsilon = g.tol > 0.0 ? std::max(g.tol, 1e-12) : 1e-4;
    if (cfg.contains("search")) {
        reject_unknown_keys(cfg.at("search"), "config.search", {"epsilon", "max_outer_iters"});
        sc.epsilon = cfg.at("search").value("epsilon", sc.epsilon);
        sc.max_outer_iters = cfg.at("search").value("max_outer_iters", sc.max_outer_iters);
    }

    const noma::SearchResult res =
        noma::search_gamma(sys, noma::RatePoint::from_rates(targets), sc);

    json report;
    report["meta"] = meta_block(cfg, g);
    const char* status = "max_iterations";
    switch (res.status) {
        case noma::SearchStatus::Converged: status = "converged"; break;
        case noma::SearchStatus::ConvergedProjected: status = "converged_projected"; break;
        case noma::SearchStatus::Infeasible: status = "infeasible"; break;
        case noma::SearchStatus::MaxIterations: status = "max_iterations"; break;
    }
    report["status"] = status;
    report["iterations"] = res.iterations;
    if (res.status == noma::SearchStatus::Infeasible) {
        report["violated_subsets"] = res.violated;
    } else {
        json gam = json::array();
        for (int i = 0; i < res.gamma.size(); ++i) gam.push_back(res.gamma[i]);
        report["gamma"] = std::move(gam);
        report["achieved"] = rates_json(res.achieved, scale);
        report["effective_target"] = rates_json(res.effective_target, scale);
        report["projected"] = res.projected;
        report["l1_error"] = res.l1_error * scale;
        json trace = json::array();
        for (const auto& [outer, l1] : res.trace) {
            trace.push_back(json{{"outer", outer}, {"l1", l1 * scale}});
        }
        report["trace"] = std::move(trace);
    }
    emit(g, report.dump(2) + "\n");
    const bool ok = res.status == noma::SearchStatus::Converged ||
                    res.status == noma::SearchStatus::ConvergedProjected;
    return ok ? kExitOk : kExitFailedVerdict;
}

int cmd_track(const json& cfg, const GlobalOptions& g) {
    reject_unknown_keys(cfg, "config", {"system", "gamma", "track", "output"});
    const noma::SystemModel sys = system_from(cfg);
    const int nu = sys.num_users();
    if (!cfg.contains("gamma")) {
        throw ConfigError("track: config needs \"gamma\"");
    }
    const noma::GammaVector gv = gamma_field(cfg, nu);

    double margin = 0.05;
    int max_iter = 10000;
    double tol = 1e-6;
    std::string family = "matched";
    if (cfg.contains("track")) {
        reject_unknown_keys(cfg.at("track"), "config.track",
                            {"margin", "max_iter", "tol", "family"});
        const json& t = cfg.at("track");
        margin = t.value("margin", margin);
        max_iter = t.value("max_iter", max_iter);
        tol = t.value("tol", tol);
        family = t.value("family", family);
    }
    if (margin < 0.0) {
        throw ConfigError("config.track.margin: must be >= 0");
    }
    if (family != "matched" && family != "genie") {
        throw ConfigError("config.track.family: must be \"matched\" or \"genie\"");
    }

    const noma::DecoderFamily dec = family == "genie" ? noma::DecoderFamily::genie()
                                                      : noma::DecoderFamily::matched(margin);
    const noma::VarianceTrack track = noma::simulate_track(sys, gv, dec, max_iter, tol);

    std::ostringstream os;
    os << csv_header(cfg, g);
    os << "# decodable=" << (track.decodable ? "true" : "false") << "\n";
    os << "# columns: iteration, v_1..v_" << nu << ", rho_1..rho_" << nu << "\n";
    for (const noma::TrackStep& step : track.steps) {
        os << step.iteration;
        for (int i = 0; i < nu; ++i) os << "," << format_double(step.v[i]);
        for (int i = 0; i < nu; ++i) os << "," << format_double(step.rho[i]);
        os << "\n";
    }
    emit(g, os.str());
    return kExitOk;
}

int cmd_validate_ese(const json& cfg, const GlobalOptions& g) {
    reject_unknown_keys(cfg, "config", {"system", "validate", "output"});
    const noma::SystemModel sys = system_from(cfg);
    const int nu = sys.num_users();
    if (!cfg.contains("validate")) {
        throw ConfigError("validate-ese: config needs \"validate\" block");
    }
    reject_unknown_keys(cfg.at("validate"), "config.validate",
                        {"v", "trials", "max_relative_error"});
    const json& vb = cfg.at("validate");
    const noma::RVector v = vector_field(vb, "v", nu);
    for (int i = 0; i < nu; ++i) {
        if (!(v[i] > 0.0) || v[i] > 1.0) {
            throw ConfigError("config.validate.v: entries must lie in (0, 1]");
        }
    }
    const std::uint64_t trials = vb.value("trials", std::uint64_t{100000});
    const double max_rel = vb.value("max_relative_error", 0.03);
    if (trials < 1) {
        throw ConfigError("config.validate.trials: must be >= 1");
    }

    const noma::RVector predicted = noma::phi(sys, v);
    const noma::EseValidation emp =
        noma::validate_awgn_model(sys, v, trials, g.seed, g.threads);
    const double corr_limit = 3.0 / std::sqrt(static_cast<double>(trials));

    json report;
    report["meta"] = meta_block(cfg, g);
    report["trials"] = trials;
    report["seed"] = g.seed;
    json users = json::array();
    bool ok = true;
    for (int i = 0; i < nu; ++i) {
        const double rel = std::abs(emp.empirical_snr[i] - predicted[i]) / predicted[i];
        ok = ok && rel <= max_rel && emp.error_signal_corr[i] <= corr_limit;
        users.push_back(json{{"user", i},
                             {"predicted_snr", predicted[i]},
                             {"empirical_snr", emp.empirical_snr[i]},
                             {"relative_error", rel},
                             {"error_signal_corr", emp.error_signal_corr[i]}});
    }
    report["users"] = std::move(users);
    report["max_relative_error_allowed"] = max_rel;
    report["corr_limit"] = corr_limit;
    report["passed"] = ok;
    emit(g, report.dump(2) + "\n");
    return ok ? kExitOk : kExitFailedVerdict;
}

int cmd_selftest(const GlobalOptions& g, bool list_only) {
    std::ostringstream os;
    const int failures = noma::run_acceptance(os, list_only);
    emit(g, os.str());
    return (failures == 0) ? kExitOk : kExitFailedVerdict;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Capacity regions and iterative-LMMSE rates for uplink multi-user systems"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    GlobalOptions g;
    app.add_option("--tol", g.tol, "Verdict tolerance (membership slack, search epsilon)");
    app.add_option("--seed", g.seed, "Base RNG seed for Monte Carlo commands");
    app.add_option("--threads", g.threads, "Worker threads for Monte Carlo commands")
        ->check(CLI::PositiveNumber);
    app.add_option("--output", g.output_path, "Write the report to this file instead of stdout");
    app.add_flag("--bits", g.bits, "Emit rates in bits instead of nats");

    std::string config_path;
    bool cross_check = false;
    bool list_only = false;

    CLI::App* capacity = app.add_subcommand(
        "capacity", "Sum capacity, extreme points, optional membership test");
    capacity->add_option("config", config_path, "JSON config file")->required();

    CLI::App* rates = app.add_subcommand("rates", "Per-user rates for a gamma or a gamma sweep");
    rates->add_option("config", config_path, "JSON config file")->required();
    rates->add_flag("--check", cross_check,
                    "Cross-check against quadrature and decoder-side integrals");

    CLI::App* search =
        app.add_subcommand("search", "Search gamma achieving a target rate tuple");
    search->add_option("config", config_path, "JSON config file")->required();

    CLI::App* track = app.add_subcommand("track", "Variance-track fixed-point simulation");
    track->add_option("config", config_path, "JSON config file")->required();

    CLI::App* validate =
        app.add_subcommand("validate-ese", "Monte Carlo check of the extrinsic AWGN model");
    validate->add_option("config", config_path, "JSON config file")->required();

    CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in verification suite");
    selftest->add_flag("--list", list_only, "List criteria without running them");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    try {
        if (selftest->parsed()) {
            return cmd_selftest(g, list_only);
        }
        const json cfg = load_config(config_path);
        if (cfg.contains("output")) {
            reject_unknown_keys(cfg.at("output"), "config.output", {"path", "format"});
            if (g.output_path.empty()) {
                g.output_path = cfg.at("output").value("path", std::string());
            }
        }
        if (capacity->parsed()) return cmd_capacity(cfg, g);
        if (rates->parsed()) return cmd_rates(cfg, g, cross_check);
        if (search->parsed()) return cmd_search(cfg, g);
        if (track->parsed()) return cmd_track(cfg, g);
        if (validate->parsed()) return cmd_validate_ese(cfg, g);
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalidConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailedVerdict;
    }
    return kExitInvalidConfig;
}
