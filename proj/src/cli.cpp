#include "bks/cli.hpp"

#include <CLI11.hpp>
#include <charconv>

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "bks/chsh.hpp"
#include "bks/dsl.hpp"
#include "bks/error.hpp"
#include "bks/format.hpp"
#include "bks/report.hpp"
#include "bks/sampler.hpp"

namespace bks {

namespace {

struct Loaded {
    Scenario scenario;
    Provenance provenance;
};

// Input problems the user can fix; reported on stderr with exit status 2.
struct InputError {
    std::string message;
};

std::optional<Scenario> builtin(const std::string& name) {
    if (name == "hardy") return builtin_hardy();
    if (name == "mermin") return builtin_mermin();
    if (name == "chsh") return builtin_chsh();
    return std::nullopt;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError{"cannot read '" + path + "'"};
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Loaded load(const std::string& name, std::ostream& err) {
    if (auto b = builtin(name)) {
        const std::string text = serialize(*b);
        return {std::move(*b), {"builtin:" + name, sha256_hex(text)}};
    }
    std::ifstream probe(name, std::ios::binary);
    if (!probe) throw InputError{"unknown scenario '" + name + "' (not a builtin and no such file)"};
    const std::string text = read_file(name);
    auto parsed = parse_scenario(text);
    for (const auto& d : parsed.diagnostics) err << name << ":" << d.str() << "\n";
    if (!parsed.ok()) throw InputError{"failed to parse '" + name + "'"};
    return {std::move(*parsed.scenario), {name, sha256_hex(text)}};
}

void emit(const std::string& body, const std::string& out_path, std::ostream& out) {
    if (out_path.empty()) {
        out << body;
        return;
    }
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw InputError{"cannot write '" + out_path + "'"};
    f << body;
}

Context parse_context(const Scenario& sc, const std::string& spec) {
    std::string s = spec;
    if (!s.empty() && s.front() == '(') s.erase(0, 1);
    if (!s.empty() && s.back() == ')') s.pop_back();
    if (!s.empty() && s.find_first_not_of("0123456789") == std::string::npos) {
        std::size_t idx = 0;
        const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), idx);
        if (ec != std::errc{} || idx >= sc.contexts().size()) {
            throw InputError{"context index " + s + " out of range"};
        }
        return sc.contexts()[idx];
    }
    std::vector<ObservableId> ids;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (!sc.observables().contains(item)) throw InputError{"unknown observable '" + item + "' in context"};
        ids.push_back(item);
    }
    try {
        return Context::make(sc.observables(), std::move(ids), sc.tolerance());
    } catch (const Error& e) {
        throw InputError{e.what()};
    }
}

std::string optimize_report(const OptimizationResult& res, bool tied, const std::string& format) {
    const auto& ang = res.angles;
    const Scenario sc = builtin_chsh(ang.a, ang.a_prime, ang.b, ang.b_prime);
    const auto& reg = sc.observables();
    const auto vars = sc.variables();
    const auto vertices = enumerate_assignments(vars);
    const auto [lo, hi] = functional_bounds(vars, vertices, sc.functionals().front().terms);
    const bool derived_ok = check_derived_inequality(vars, vertices, {"X1", "X2", "Y1", "Y2"});

    auto p_equal = [&](const char* x, const char* y) {
        return joint_probability(sc.state(), Event({{x, 1}, {y, 1}}), reg) +
               joint_probability(sc.state(), Event({{x, -1}, {y, -1}}), reg);
    };
    const std::pair<const char*, const char*> pairs[] = {{"X1", "Y1"}, {"X1", "Y2"}, {"X2", "Y1"}, {"X2", "Y2"}};
    double identity_gap = 0.0;
    for (const auto& [x, y] : pairs) {
        const double corr = correlation(sc.state(), reg.at(x), reg.at(y));
        identity_gap = std::max(identity_gap, std::abs(corr - (2.0 * p_equal(x, y) - 1.0)));
    }
    const double p11 = p_equal("X1", "Y1");
    const double p12 = p_equal("X1", "Y2");
    const double p21 = p_equal("X2", "Y1");
    const std::vector<ObservableId> lhs_ids{"X1", "X2", "Y2"};
    const bool lhs_incompatible = !mutually_compatible(reg, lhs_ids, sc.tolerance());
    const double magnitude = std::abs(res.value);
    const bool exceeds = magnitude > hi + sc.tolerance();

    if (format == "json") {
        nlohmann::ordered_json j;
        j["schema_version"] = kSchemaVersion;
        j["tie_a_prime_to_a"] = tied;
        j["value"] = res.value;
        j["magnitude"] = magnitude;
        j["tsirelson"] = 2.0 * std::numbers::sqrt2;
        j["angles_rad"] = {ang.a, ang.a_prime, ang.b, ang.b_prime};
        j["classical_bounds"] = {lo, hi};
        j["exceeds_classical"] = exceeds;
        j["grid_evaluations"] = res.grid_evaluations;
        j["refinement_evaluations"] = res.refinement_evaluations;
        j["correlation_identity_max_gap"] = identity_gap;
        j["derived_inequality"] = {{"holds_on_all_vertices", derived_ok},
                                   {"p_x1_eq_y1", p11},
                                   {"p_x1_eq_y2", p12},
                                   {"p_x2_eq_y1", p21},
                                   {"lhs_event", "P(X1=X2=Y2)"},
                                   {"lhs_quantum", lhs_incompatible ? "INCOMPATIBLE" : "COMPATIBLE"}};
        return j.dump(2) + "\n";
    }
    std::string s;
    s += "CHSH maximization over in-plane angles (singlet)" + std::string(tied ? ", a' = a" : "") + "\n";
    s += "  value: " + format_number(res.value) + "  |S| = " + format_number(magnitude) + "\n";
    s += "  tsirelson 2*sqrt(2): " + format_number(2.0 * std::numbers::sqrt2) + "\n";
    s += "  angles (rad): a=" + format_number(ang.a) + " a'=" + format_number(ang.a_prime) +
         " b=" + format_number(ang.b) + " b'=" + format_number(ang.b_prime) + "\n";
    s += "  classical vertex bounds: [" + format_number(lo) + ", " + format_number(hi) + "]  exceeded: " +
         (exceeds ? "yes" : "no") + "\n";
    s += "  max |<XY> - (2P(X=Y)-1)|: " + format_number(identity_gap) + "\n";
    s += "  derived inequality P(X1=X2=Y2) <= P(X1=Y1)+P(X1=Y2)+P(X2=Y1): holds on all 16 vertices: " +
         std::string(derived_ok ? "yes" : "no") + "\n";
    s += "    P(X1=Y1)=" + format_number(p11) + " P(X1=Y2)=" + format_number(p12) + " P(X2=Y1)=" + format_number(p21) +
         "\n";
    s += "    P(X1=X2=Y2): " + std::string(lhs_incompatible ? "INCOMPATIBLE (X1 and X2 do not commute)" : "compatible") +
         "\n";
    s += "  evaluations: grid=" + std::to_string(res.grid_evaluations) +
         " refinement=" + std::to_string(res.refinement_evaluations) + "\n";
    return s;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bell-Kochen-Specker scenario checker", kToolName};
    app.require_subcommand(1);

    std::string scenario_name, format = "text", out_path, context_spec, file;
    double tolerance = 0.0;
    std::size_t witness_arity = 6;
    std::uint64_t shots = 1000, seed = 0;
    double grid_deg = 2.0;
    bool tie = false;

    auto* check = app.add_subcommand("check", "Analyze a builtin scenario or a .ksl file");
    check->add_option("scenario", scenario_name, "hardy | mermin | chsh | path.ksl")->required();
    check->add_option("--tolerance", tolerance, "Numeric tolerance (default: the scenario's, 1e-9)")
        ->check(CLI::PositiveNumber);
    check->add_option("--witness-arity", witness_arity, "Largest witness event arity")->check(CLI::Range(1, 20));
    check->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
    check->add_option("--out", out_path, "Write the report to this file");

    auto* samp = app.add_subcommand("sample", "Sample measurement records for one context");
    samp->add_option("scenario", scenario_name, "hardy | mermin | chsh | path.ksl")->required();
    samp->add_option("context", context_spec, "Context index or comma-separated ids, e.g. P1,P2")->required();
    samp->add_option("--shots", shots, "Number of shots")->check(CLI::PositiveNumber);
    samp->add_option("--seed", seed, "Generator seed");
    samp->add_option("--format", format, "csv | json (default csv)")->check(CLI::IsMember({"csv", "json"}));
    samp->add_option("--out", out_path, "Write the counts to this file");

    auto* opt = app.add_subcommand("optimize", "Maximize the CHSH value over measurement angles");
    opt->add_option("--grid-deg", grid_deg, "Coarse grid step in degrees")->check(CLI::Range(0.1, 180.0));
    opt->add_flag("--tie", tie, "Pin a' = a (compatible Alice settings)");
    opt->add_option("--format", format, "text | json")->check(CLI::IsMember({"text", "json"}));
    opt->add_option("--out", out_path, "Write the result to this file");

    auto* parse = app.add_subcommand("parse", "Check a .ksl file and print diagnostics");
    parse->add_option("file", file, "Scenario file")->required();

    auto* list = app.add_subcommand("list", "List builtin scenarios");

    auto* dump = app.add_subcommand("dump", "Print a scenario in canonical .ksl form");
    dump->add_option("scenario", scenario_name, "hardy | mermin | chsh | path.ksl")->required();

    std::vector<std::string> argv_store{kToolName};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    try {
        if (*list) {
            out << "hardy   five-box Hardy-like proof on a qutrit\n";
            out << "mermin  ten-observable three-qubit star\n";
            out << "chsh    CHSH functional on the singlet\n";
            return kExitOk;
        }
        if (*parse) {
            const std::string text = read_file(file);
            const auto res = parse_scenario(text);
            for (const auto& d : res.diagnostics) err << file << ":" << d.str() << "\n";
            if (!res.ok()) return kExitInputError;
            const auto& sc = *res.scenario;
            out << "ok: scenario \"" << sc.name() << "\" dim " << sc.dim() << ", " << sc.observables().size()
                << " observables, " << sc.contexts().size() << " contexts, " << sc.constraints().size()
                << " constraints, " << sc.queries().size() + sc.product_queries().size() << " queries\n";
            return kExitOk;
        }
        if (*dump) {
            out << serialize(load(scenario_name, err).scenario);
            return kExitOk;
        }
        if (*opt) {
            OptimizerOptions o;
            o.grid_deg = grid_deg;
            o.tie_a_prime_to_a = tie;
            emit(optimize_report(maximize(o), tie, format), out_path, out);
            return kExitOk;
        }
        if (*samp) {
            auto loaded = load(scenario_name, err);
            const auto ctx = parse_context(loaded.scenario, context_spec);
            const auto run = sample(loaded.scenario, ctx, shots, seed);
            emit(format == "json" ? run.json() : run.csv(), out_path, out);
            return kExitOk;
        }
        if (*check) {
            auto loaded = load(scenario_name, err);
            if (tolerance > 0.0) loaded.scenario.set_tolerance(tolerance);
            AnalysisOptions options;
            options.witness_arity = witness_arity;
            const auto report = analyze(loaded.scenario, options);
            const std::string body = format == "json" ? report_json(report, loaded.provenance).dump(2) + "\n"
                                                      : report_text(report, loaded.provenance);
            emit(body, out_path, out);
            return kExitOk;
        }
    } catch (const InputError& e) {
        err << "error: " << e.message << "\n";
        return kExitInputError;
    } catch (const Error& e) {
        err << "error: " << to_string(e.code()) << ": " << e.what() << "\n";
        return e.code() == ErrorCode::InternalConsistency ? kExitInternalError : kExitInputError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternalError;
    }
    return kExitInputError;
}

}  // namespace bks
