#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "pairedk/error.hpp"
#include "pairedk/kernels.hpp"
#include "pairedk/symbol_json.hpp"

namespace pairedk::cli {

using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string a, b, g, f, type = "paired";
    std::optional<int> N;
    std::optional<double> tol;
    std::optional<int> trials;
    std::uint64_t seed = 0;
    std::string config, out, report_path;
    std::vector<std::string> properties;
    bool all = false, wh = false, human = false, quiet = false;
};

void malformed(const std::string& key, const std::string& why) {
    throw Error(ErrorCode::MalformedConfig, "\"" + key + "\" " + why);
}

double positive_real(const json& v, const std::string& key) {
    if (!v.is_number() || !std::isfinite(v.get<double>()) || v.get<double>() <= 0.0) malformed(key, "must be a positive number");
    return v.get<double>();
}

int positive_int(const json& v, const std::string& key) {
    if (!v.is_number_integer() || v.get<long long>() <= 0 || v.get<long long>() > 1'000'000) malformed(key, "must be a positive integer");
    return v.get<int>();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) return {};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Rational symbol_arg(const std::string& text, const char* flag) {
    if (text.empty()) throw UsageError(std::string(flag) + " is required");
    const auto first = text.find_first_not_of(" \t\n");
    std::string body = text;
    if (first == std::string::npos || text[first] != '{') {
        body = slurp(text);
        if (body.empty()) throw UsageError(std::string(flag) + ": not inline JSON and not a readable file: " + text);
    }
    try {
        return symbol_from_json(json::parse(body));
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedSymbol, std::string(flag) + ": " + e.what());
    } catch (const Error& e) {
        throw Error(e.code(), std::string(flag) + ": " + e.what());
    }
}

// JSON has no infinity; an exactly zero tail makes the gap infinite.
json number(double x) { return std::isfinite(x) ? json(x) : json(x > 0 ? "inf" : "-inf"); }

bool uses_pair(const std::string& type) { return type == "paired" || type == "transposed"; }

Op operator_arg(const Options& o) {
    if (uses_pair(o.type)) {
        const SymbolPair p = make_pair(symbol_arg(o.a, "--a"), symbol_arg(o.b, "--b"));
        return o.type == "paired" ? paired(p.a, p.b) : transposed(p.a, p.b);
    }
    const Rational g = symbol_arg(o.g, "--g");
    return o.type == "toeplitz" ? toeplitz(g) : hankel(g);
}

// Indeterminate at N escalates once to 2N.
json oracle_block(const Op& x, const std::vector<Rational>& exact, int N, double tol) {
    for (const int n : {N, 2 * N}) {
        try {
            const OracleResult r = kernel_oracle(x, n, tol);
            json j{{"N", n}, {"dimension", r.dim_estimate}, {"gap", number(r.gap)}, {"stable", r.stable}};
            if (!exact.empty()) j["principal_angle"] = principal_angle(exact, r);
            return j;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::Indeterminate) throw;
        }
    }
    return {{"N", 2 * N}, {"error", "Indeterminate"}};
}

bool in_toeplitz_kernel(const Rational& g, const Rational& f) {
    const double scale = sup_norm(g) * probe_max(f, 256);
    return probe_max(apply_exact(toeplitz(g), f), 256) <= tolerances().eps_eq * std::max(scale, 1e-300);
}

int cmd_kernel(const Options& o, const Config& cfg, json& result) {
    KernelBasis k;
    std::vector<bool> checks;
    if (uses_pair(o.type)) {
        const SymbolPair p = make_pair(symbol_arg(o.a, "--a"), symbol_arg(o.b, "--b"));
        const bool s = o.type == "paired";
        k = s ? paired_kernel(p) : transposed_kernel(p);
        for (const Rational& e : k.elements) checks.push_back(s ? member_S(e, p) : member_Sigma(e, p));
    } else if (o.type == "toeplitz") {
        const Rational g = symbol_arg(o.g, "--g");
        k = toeplitz_kernel(g);
        for (const Rational& e : k.elements) checks.push_back(in_toeplitz_kernel(g, e));
    } else {
        symbol_arg(o.g, "--g");
        k.status = KernelStatus::NeedsOracle;
        k.certificate = "Hankel kernels are reported by the truncation oracle only";
    }
    result = to_json(k, checks);
    if (o.N || k.status == KernelStatus::NeedsOracle)
        result["oracle"] = oracle_block(operator_arg(o), k.elements, cfg.run.oracle_N, cfg.tol.rank_tol);
    return std::ranges::all_of(checks, [](bool c) { return c; }) ? 0 : 1;
}

int cmd_apply(const Options& o, const Config&, json& result) {
    result = {{"image", symbol_to_json(apply_exact(operator_arg(o), symbol_arg(o.f, "--f")))}};
    return 0;
}

int cmd_factor(const Options& o, const Config&, json& result) {
    const Rational g = symbol_arg(o.g, "--g");
    if (o.wh) {
        result = to_json(wiener_hopf(g));
        return 0;
    }
    const Side side = !membership(g, SpaceTag::H2plus) && membership(g, SpaceTag::H2minus) ? Side::Minus : Side::Plus;
    result = to_json(inner_outer(g, side));
    return 0;
}

int cmd_norm(const Options& o, const Config& cfg, json& result) {
    const int N = cfg.run.oracle_N;
    result = {{"N", N}, {"norm_lower_bound", operator_norm(operator_arg(o), N)}};
    if (uses_pair(o.type)) {
        const double sa = sup_norm(symbol_arg(o.a, "--a")), sb = sup_norm(symbol_arg(o.b, "--b"));
        const double m = std::max(sa, sb);
        result["m"] = m;
        result["upper"] = std::min(sa + sb, std::numbers::sqrt2 * m);
    }
    return 0;
}

int cmd_commutator(const Options& o, const Config& cfg, json& result) {
    const Rational eta = o.g.empty() || !uses_pair(o.type) ? Rational::z() : symbol_arg(o.g, "--g");
    const Op c = commutator(operator_arg(o), mult(eta));
    const int N = cfg.run.oracle_N;
    const RankResult r = numerical_rank(truncate(c, N), cfg.tol.rank_tol);
    result = {{"N", N}, {"multiplier", symbol_to_json(eta)}, {"rank", r.rank}, {"gap", number(r.gap)}, {"determinate", r.determinate}};
    if (!o.f.empty()) result["image"] = symbol_to_json(apply_exact(c, symbol_arg(o.f, "--f")));
    return 0;
}

bool report_passes(const json& p) { return p.value("passes", -1) == p.value("trials", -2); }

void summarize(const json& report, std::ostream& out) {
    const json props = report.contains("properties") ? report["properties"] : json::array({report});
    for (const json& p : props) {
        out << std::left << std::setw(16) << p.value("property", "?") << std::right << std::setw(6) << p.value("passes", 0) << " / "
            << std::left << std::setw(6) << p.value("trials", 0) << (report_passes(p) ? "pass" : "FAIL");
        if (p.contains("stats"))
            for (const auto& [k, v] : p["stats"].items()) out << "  " << k << "=" << v.dump();
        out << "\n";
    }
}

int cmd_verify(const Options& o, const Config& cfg, json& result, std::ostream& err) {
    std::vector<std::string> ids = o.all ? property_ids() : o.properties;
    if (ids.empty()) throw UsageError("verify needs --all or --property");
    SuiteReport suite;
    std::vector<double> times;
    for (const std::string& id : ids) {
        PropertyReport r = run_property(id, cfg.trials, o.seed, cfg.run);
        if (!o.quiet) err << id << ": " << r.passes << "/" << r.trials << " (" << std::fixed << std::setprecision(2) << r.wall_time << " s)\n";
        suite.all_pass = suite.all_pass && r.passes == r.trials;
        times.push_back(r.wall_time);
        suite.reports.push_back(std::move(r));
    }
    result = to_json(suite);
    result["seed"] = o.seed;
    for (std::size_t i = 0; i < times.size(); ++i) result["properties"][i]["wall_time"] = times[i];
    return suite.all_pass ? 0 : 1;
}

int cmd_report(const Options& o, json& result) {
    const std::string text = slurp(o.report_path);
    if (text.empty()) throw UsageError("report: cannot read " + o.report_path);
    try {
        result = json::parse(text);
    } catch (const json::exception& e) {
        throw UsageError("report: " + std::string(e.what()));
    }
    if (!result.is_object() || (!result.contains("properties") && !result.contains("property")))
        throw UsageError("report: not a property or suite report");
    const json props = result.contains("properties") ? result["properties"] : json::array({result});
    return std::ranges::all_of(props, report_passes) ? 0 : 1;
}

void human_summary(const std::string& cmd, const json& r, std::ostream& out) {
    if (cmd == "verify" || cmd == "report") {
        summarize(r, out);
    } else if (cmd == "kernel") {
        out << "status " << r["status"].get<std::string>() << ", dimension " << r["dimension"] << "\n";
        if (r.contains("certificate")) out << r["certificate"].get<std::string>() << "\n";
    } else if (cmd == "factor" && r.contains("kappa")) {
        out << "kappa " << r["kappa"] << "\n";
    } else if (cmd == "norm") {
        out << "norm >= " << r["norm_lower_bound"] << " at N = " << r["N"] << "\n";
    } else if (cmd == "commutator") {
        out << "rank " << r["rank"] << " (gap " << r["gap"].dump() << ")\n";
    }
}

}  // namespace

Config config_from_json(const json& j, Config base) {
    if (!j.is_object()) throw Error(ErrorCode::MalformedConfig, "config must be a JSON object");
    for (const auto& [key, v] : j.items()) {
        if (key == "eps_eq") base.tol.eps_eq = positive_real(v, key);
        else if (key == "eps_circle") base.tol.eps_circle = positive_real(v, key);
        else if (key == "eps_cluster") base.tol.eps_cluster = positive_real(v, key);
        else if (key == "rank_tol") base.tol.rank_tol = positive_real(v, key);
        else if (key == "oracle_N") base.run.oracle_N = positive_int(v, key);
        else if (key == "trials") base.trials = positive_int(v, key);
        else if (key == "parallelism") base.run.parallelism = positive_int(v, key);
        else malformed(key, "is not a config key");
    }
    return base;
}

Config load_config(const std::string& path, Config base) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::MalformedConfig, "cannot read config file " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::MalformedConfig, path + ": " + e.what());
    }
    return config_from_json(j, base);
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Paired and transposed paired operators with rational symbols"};
    app.require_subcommand(1, 1);
    Options o;

    const auto common = [&](CLI::App* s) {
        s->add_option("--config", o.config, "JSON config file (default: $PAIREDK_CONFIG)");
        s->add_option("--out", o.out, "write JSON here instead of stdout");
        s->add_flag("--human", o.human, "append a readable summary");
        s->add_flag("--quiet", o.quiet, "suppress progress output");
    };
    const auto symbols = [&](CLI::App* s) {
        s->add_option("--type", o.type, "paired|transposed|toeplitz|hankel")
            ->check(CLI::IsMember({"paired", "transposed", "toeplitz", "hankel"}));
        s->add_option("--a", o.a, "symbol a (inline JSON or file)");
        s->add_option("--b", o.b, "symbol b (inline JSON or file)");
        s->add_option("--g", o.g, "symbol g (inline JSON or file)");
    };
    const auto numeric = [&](CLI::App* s) {
        s->add_option("--N", o.N, "truncation size")->check(CLI::PositiveNumber);
        s->add_option("--tol", o.tol, "relative rank tolerance")->check(CLI::PositiveNumber);
    };

    CLI::App* kernel = app.add_subcommand("kernel", "kernel basis with witness checks");
    symbols(kernel), numeric(kernel), common(kernel);
    CLI::App* apply = app.add_subcommand("apply", "exact image of --f");
    symbols(apply), common(apply);
    apply->add_option("--f", o.f, "function (inline JSON or file)")->required();
    CLI::App* factor = app.add_subcommand("factor", "inner-outer, or Wiener-Hopf with --wh");
    factor->add_option("--g", o.g, "symbol g (inline JSON or file)")->required();
    factor->add_flag("--wh", o.wh, "Wiener-Hopf factorization");
    common(factor);
    CLI::App* norm = app.add_subcommand("norm", "truncated operator norm");
    symbols(norm), numeric(norm), common(norm);
    CLI::App* comm = app.add_subcommand("commutator", "rank of [X, M_g] (g defaults to z)");
    symbols(comm), numeric(comm), common(comm);
    comm->add_option("--f", o.f, "also apply the commutator to this function");
    CLI::App* verify = app.add_subcommand("verify", "run registered properties");
    verify->add_flag("--all", o.all, "every registered property");
    verify->add_option("--property", o.properties, "property id (repeatable)");
    verify->add_option("--trials", o.trials, "trials per property")->check(CLI::PositiveNumber);
    verify->add_option("--seed", o.seed, "master seed");
    numeric(verify), common(verify);
    CLI::App* report = app.add_subcommand("report", "re-render a stored report");
    report->add_option("file", o.report_path, "report JSON")->required();
    common(report);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }
    if (o.all && !o.properties.empty()) {
        err << "usage error: --all and --property are exclusive\n";
        return 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        Config cfg;
        std::string path = o.config;
        if (path.empty())
            if (const char* env = std::getenv("PAIREDK_CONFIG")) path = env;
        if (!path.empty()) cfg = load_config(path, cfg);
        if (o.N) cfg.run.oracle_N = *o.N;
        if (o.tol) cfg.tol.rank_tol = *o.tol;
        if (o.trials) cfg.trials = *o.trials;
        Tolerances t = tolerances();
        t.eps_eq = cfg.tol.eps_eq;
        t.eps_circle = cfg.tol.eps_circle;
        t.eps_cluster = cfg.tol.eps_cluster;
        t.rank_tol = cfg.tol.rank_tol;
        set_tolerances(t);

        json result;
        int code = 0;
        if (cmd == "kernel") code = cmd_kernel(o, cfg, result);
        else if (cmd == "apply") code = cmd_apply(o, cfg, result);
        else if (cmd == "factor") code = cmd_factor(o, cfg, result);
        else if (cmd == "norm") code = cmd_norm(o, cfg, result);
        else if (cmd == "commutator") code = cmd_commutator(o, cfg, result);
        else if (cmd == "verify") code = cmd_verify(o, cfg, result, err);
        else code = cmd_report(o, result);

        if (o.out.empty()) {
            out << result.dump(2) << "\n";
        } else {
            std::ofstream file(o.out);
            if (!file) throw UsageError("--out: cannot write " + o.out);
            file << result.dump(2) << "\n";
        }
        if (o.human) human_summary(cmd, result, out);
        return code;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
    } catch (const Error& e) {
        err << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
    }
    return 2;
}

}  // namespace pairedk::cli
