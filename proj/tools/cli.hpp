#pragma once

// Command-line driver. `run` is the whole program minus process plumbing, so
// tests can call it with captured streams.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "fgerm/diffeo.hpp"
#include "fgerm/error.hpp"
#include "fgerm/families/fixture.hpp"
#include "fgerm/families/h0.hpp"
#include "fgerm/families/intro.hpp"
#include "fgerm/families/nilpotent.hpp"
#include "fgerm/families/report.hpp"
#include "fgerm/families/solvable.hpp"
#include "fgerm/generic_rank.hpp"
#include "fgerm/jordan_chevalley.hpp"
#include "fgerm/lie_span.hpp"
#include "fgerm/parallel.hpp"
#include "fgerm/parser.hpp"

#ifndef FGERM_DATA_DIR
#define FGERM_DATA_DIR "data"
#endif

namespace fgerm::cli
{

enum ExitCode : int {
    exit_ok = 0,
    exit_failed = 1,
    exit_parse = 2,
    exit_precondition = 3,
    exit_budget = 4,
    exit_usage = 64,
    exit_internal = 70,
};

struct CliConfig {
    std::size_t dim = 1;
    std::optional<int> order;
    std::string mode;   ///< "jet", "exact" or empty (jet iff an order is given)
    std::string format; ///< "text" or "json"
    std::uint64_t seed = 1;
    std::size_t budget = 64;
    std::size_t jobs = 1;
    bool heavy = false;
    bool timings = false;
    std::string fixtures = FGERM_DATA_DIR;
};

class usage_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail
{

inline TruncationOrder need_order(const CliConfig &cfg)
{
    if (!cfg.order) {
        throw usage_error("this command needs --order");
    }
    return TruncationOrder(*cfg.order);
}

inline SpanMode span_mode(const CliConfig &cfg)
{
    const std::string mode = cfg.mode.empty() ? (cfg.order ? "jet" : "exact") : cfg.mode;
    if (mode == "jet") {
        return JetMode{need_order(cfg)};
    }
    return ExactMode{cfg.budget};
}

inline bool json(const CliConfig &cfg)
{
    return cfg.format == "json";
}

/// Emits a single textual result.
inline void emit(const CliConfig &cfg, std::ostream &out, const std::string &command, const nlohmann::json &result)
{
    if (json(cfg)) {
        out << nlohmann::json{{"command", command}, {"result", result}}.dump(2) << "\n";
    } else if (result.is_string()) {
        out << result.get<std::string>() << "\n";
    } else {
        out << result.dump() << "\n";
    }
}

inline std::string read_file(const std::string &path)
{
    std::ifstream in(path);
    if (!in) {
        throw precondition_violation("cannot open " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline LieAlgebraSpan algebra_input(const CliConfig &cfg, const std::string &gens, const std::string &span_file)
{
    if (!span_file.empty()) {
        return parse::parse_span(read_file(span_file));
    }
    if (gens.empty()) {
        throw usage_error("give generators with --gens or a span export with --span");
    }
    const auto fields = parse::parse_field_list(gens, cfg.dim);
    return bracket_closure(fields, cfg.dim, span_mode(cfg));
}

inline nlohmann::json optional_count(const std::optional<std::size_t> &v)
{
    return v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

inline int emit_series(const CliConfig &cfg, std::ostream &out, const std::string &command, const LieSeries &s,
                       bool show_terms)
{
    std::vector<std::size_t> dims;
    for (const auto &t : s.terms) {
        dims.push_back(t.size());
    }
    if (json(cfg)) {
        nlohmann::json j{{"command", command},
                         {"dimensions", dims},
                         {"terminates", s.terminates},
                         {"length", optional_count(s.length())}};
        if (show_terms) {
            std::vector<std::string> terms;
            for (const auto &t : s.terms) {
                terms.push_back(to_string(t));
            }
            j["terms"] = terms;
        }
        out << j.dump(2) << "\n";
    } else {
        out << "dimensions: " << nlohmann::json(dims).dump() << "\n";
        out << "terminates: " << (s.terminates ? "yes" : "no") << "\n";
        if (s.length()) {
            out << "length: " << *s.length() << "\n";
        }
        if (show_terms) {
            for (std::size_t i = 0; i < s.terms.size(); ++i) {
                out << "## term " << i << "\n" << to_string(s.terms[i]) << "\n";
            }
        }
    }
    return s.terminates ? exit_ok : exit_failed;
}

struct VerifyArgs {
    std::string target;
    std::vector<std::size_t> n;
    std::vector<int> k;
    std::size_t samples = 12;
};

inline families::GroupWitness load_fixture(const CliConfig &cfg, std::size_t n)
{
    const auto path = std::filesystem::path(cfg.fixtures) / ("group_witness_n" + std::to_string(n) + ".txt");
    return families::read_group_witness(path);
}

using Task = std::function<std::vector<families::VerificationReport>()>;

inline void add_tasks(const CliConfig &cfg, const VerifyArgs &v, const std::string &target, std::vector<Task> &tasks)
{
    using namespace families;
    if (target == "intro") {
        const std::vector<int> ks = v.k.empty() ? std::vector<int>{3, 4, 5} : v.k;
        for (int k : ks) {
            const int order = cfg.order.value_or(k + 3);
            const IntroOptions opts{v.samples, cfg.seed};
            tasks.push_back([=] { return verify_intro_nilpotency(k, TruncationOrder(order), opts); });
        }
    } else if (target == "solvable") {
        std::vector<std::size_t> ns = v.n;
        if (ns.empty()) {
            ns = cfg.heavy ? std::vector<std::size_t>{1, 2, 3} : std::vector<std::size_t>{1, 2};
        }
        for (std::size_t n : ns) {
            const int order = cfg.order.value_or(default_solvable_order(n));
            const SolvableOptions opts{1, cfg.heavy};
            tasks.push_back([=] { return verify_solvable_family(n, TruncationOrder(order), opts); });
        }
    } else if (target == "nilpotent") {
        const std::vector<std::size_t> ns = v.n.empty() ? std::vector<std::size_t>{2, 3, 4, 5} : v.n;
        for (std::size_t n : ns) {
            tasks.push_back([=] { return verify_nilpotent_example(n); });
        }
    } else if (target == "group") {
        const std::vector<std::size_t> ns = v.n.empty() ? std::vector<std::size_t>{1, 2} : v.n;
        for (std::size_t n : ns) {
            const GroupWitness w = load_fixture(cfg, n);
            tasks.push_back([=] { return verify_group_fixture(w); });
        }
    } else if (target == "all") {
        const VerifyArgs defaults{"", {}, {}, v.samples};
        for (const char *t : {"intro", "solvable", "nilpotent", "group"}) {
            add_tasks(cfg, defaults, t, tasks);
        }
    } else {
        throw usage_error("unknown verify target '" + target + "'");
    }
}

inline int run_verify(const CliConfig &cfg, const VerifyArgs &v, std::ostream &out)
{
    std::vector<Task> tasks;
    add_tasks(cfg, v, v.target, tasks);
    auto batches = parallel_map<std::vector<families::VerificationReport>>(
        tasks.size(), cfg.jobs, [&](std::size_t i) { return tasks[i](); });
    std::vector<families::VerificationReport> reports;
    for (auto &b : batches) {
        reports.insert(reports.end(), b.begin(), b.end());
    }
    families::canonical_order(reports);
    const bool ok = families::all_passed(reports);
    const auto passed = std::count_if(reports.begin(), reports.end(), [](const auto &r) { return r.passed(); });
    if (json(cfg)) {
        nlohmann::json j;
        j["schema_version"] = families::report_schema_version;
        j["target"] = v.target;
        j["status"] = ok ? "pass" : "fail";
        j["reports"] = nlohmann::json::array();
        for (const auto &r : reports) {
            j["reports"].push_back(families::to_json(r, cfg.timings));
        }
        out << j.dump(2) << "\n";
    } else {
        for (const auto &r : reports) {
            out << families::to_text(r, cfg.timings) << "\n";
        }
        out << passed << "/" << reports.size() << " claims pass\n";
    }
    return ok ? exit_ok : exit_failed;
}

} // namespace detail

inline int run(std::vector<std::string> args, std::ostream &out, std::ostream &err)
{
    CliConfig cfg;
    if (const char *f = std::getenv("FGERM_FORMAT")) {
        cfg.format = f;
    }
    if (cfg.format != "json") {
        cfg.format = "text";
    }

    CLI::App app{"Exact computations with formal vector fields and diffeomorphism jets", "fgerm"};
    app.fallthrough();
    app.require_subcommand(1);
    int order = 0;
    app.add_option("--dim", cfg.dim, "number of variables")->check(CLI::PositiveNumber);
    auto *order_opt = app.add_option("--order", order, "jet order k")->check(CLI::PositiveNumber);
    app.add_option("--mode", cfg.mode, "span arithmetic for Lie algebra commands")
        ->check(CLI::IsMember({"jet", "exact"}));
    app.add_option("--format", cfg.format, "output format (default from FGERM_FORMAT)")
        ->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", cfg.seed, "seed for sampled checks and searches");
    app.add_option("--budget", cfg.budget, "degree budget in exact mode")->check(CLI::PositiveNumber);
    app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_flag("--heavy", cfg.heavy, "allow the slow n = 3 solvable run");
    app.add_flag("--timings", cfg.timings, "include elapsed times in reports");
    app.add_option("--fixtures", cfg.fixtures, "directory with witness fixtures");

    std::function<int()> action;
    auto sub = [&](const std::string &name, const std::string &help) {
        CLI::App *s = app.add_subcommand(name, help);
        s->fallthrough();
        return s;
    };

    std::string a;
    std::string b;
    std::string time = "1";
    {
        auto *s = sub("exp", "exponential exp(tX) of a field, as a jet");
        s->add_option("field", a)->required();
        s->add_option("--time", time, "flow time t");
        s->callback([&] {
            action = [&] {
                const auto x = parse::parse_field(a, cfg.dim);
                const auto phi = exp_field(x, parse::parse_scalar(time), detail::need_order(cfg));
                detail::emit(cfg, out, "exp", to_string(phi));
                return int(exit_ok);
            };
        });
    }
    {
        auto *s = sub("log", "infinitesimal generator of a unipotent jet");
        s->add_option("diffeo", a)->required();
        s->callback([&] {
            action = [&] {
                const auto phi = parse::parse_diffeo(a, cfg.dim, detail::need_order(cfg));
                detail::emit(cfg, out, "log", to_string(log_diffeo(phi)));
                return int(exit_ok);
            };
        });
    }
    {
        auto *s = sub("bracket", "Lie bracket [X, Y]");
        s->add_option("x", a)->required();
        s->add_option("y", b)->required();
        s->callback([&] {
            action = [&] {
                const auto x = parse::parse_field(a, cfg.dim);
                const auto y = parse::parse_field(b, cfg.dim);
                std::optional<TruncationOrder> k;
                if (cfg.order) {
                    k = TruncationOrder(*cfg.order);
                }
                detail::emit(cfg, out, "bracket", to_string(bracket(x, y, k)));
                return int(exit_ok);
            };
        });
    }
    auto two_diffeos = [&](const std::string &name, const std::string &help,
                           std::function<FormalDiffeo(const FormalDiffeo &, const FormalDiffeo &)> fn) {
        auto *s = sub(name, help);
        s->add_option("phi", a)->required();
        s->add_option("psi", b)->required();
        s->callback([&, name, fn] {
            action = [&, name, fn] {
                const auto k = detail::need_order(cfg);
                const auto phi = parse::parse_diffeo(a, cfg.dim, k);
                const auto psi = parse::parse_diffeo(b, cfg.dim, k);
                detail::emit(cfg, out, name, to_string(fn(phi, psi)));
                return int(exit_ok);
            };
        });
    };
    two_diffeos("compose", "composition phi o psi", [](const auto &p, const auto &q) { return compose(p, q); });
    two_diffeos("commutator", "group commutator phi psi phi^-1 psi^-1",
                [](const auto &p, const auto &q) { return group_commutator(p, q); });
    {
        auto *s = sub("invert", "compositional inverse");
        s->add_option("phi", a)->required();
        s->callback([&] {
            action = [&] {
                const auto phi = parse::parse_diffeo(a, cfg.dim, detail::need_order(cfg));
                detail::emit(cfg, out, "invert", to_string(invert(phi)));
                return int(exit_ok);
            };
        });
    }
    bool as_field = false;
    {
        auto *s = sub("jet-matrix", "matrix of the action on the jet basis");
        s->add_option("input", a)->required();
        s->add_flag("--field", as_field, "input is a vector field (derivation matrix)");
        s->callback([&] {
            action = [&] {
                const auto k = detail::need_order(cfg);
                const JetMatrix m = as_field ? field_to_jet_matrix(parse::parse_field(a, cfg.dim), k)
                                             : to_jet_matrix(parse::parse_diffeo(a, cfg.dim, k));
                detail::emit(cfg, out, "jet-matrix", to_string(m));
                return int(exit_ok);
            };
        });
    }
    {
        auto *s = sub("jordan-chevalley", "semisimple and unipotent parts of a jet matrix");
        s->add_option("phi", a)->required();
        s->callback([&] {
            action = [&] {
                const auto jm = to_jet_matrix(parse::parse_diffeo(a, cfg.dim, detail::need_order(cfg)));
                const auto jc = jordan_chevalley(jm);
                if (detail::json(cfg)) {
                    detail::emit(cfg, out, "jordan-chevalley",
                                 nlohmann::json{{"s", to_string(jc.s)}, {"u", to_string(jc.u)}});
                } else {
                    out << "# s\n" << to_string(jc.s) << "\n# u\n" << to_string(jc.u) << "\n";
                }
                return int(exit_ok);
            };
        });
    }

    std::string gens;
    std::string span_file;
    bool show_terms = false;
    auto algebra = [&](const std::string &name, const std::string &help) {
        auto *s = sub(name, help);
        s->add_option("--gens", gens, "';'-separated generators");
        s->add_option("--span", span_file, "span export file instead of --gens");
        return s;
    };
    {
        auto *s = algebra("derived-series", "derived series g, [g,g], ...");
        s->add_flag("--terms", show_terms, "print every term");
        s->callback([&] {
            action = [&] {
                const auto g = detail::algebra_input(cfg, gens, span_file);
                return detail::emit_series(cfg, out, "derived-series", derived_series(g, cfg.jobs), show_terms);
            };
        });
    }
    {
        auto *s = algebra("central-series", "lower central series g, [g,g], [g,[g,g]], ...");
        s->add_flag("--terms", show_terms, "print every term");
        s->callback([&] {
            action = [&] {
                const auto g = detail::algebra_input(cfg, gens, span_file);
                return detail::emit_series(cfg, out, "central-series", central_series(g, cfg.jobs), show_terms);
            };
        });
    }
    {
        auto *s = algebra("kappa", "generic ranks along the derived series");
        s->callback([&] {
            action = [&] {
                const auto g = detail::algebra_input(cfg, gens, span_file);
                const auto kappa = kappa_sequence(derived_series(g, cfg.jobs));
                detail::emit(cfg, out, "kappa",
                             detail::json(cfg) ? nlohmann::json(kappa.values) : nlohmann::json(to_string(kappa)));
                return int(exit_ok);
            };
        });
    }
    auto count_command = [&](const std::string &name, const std::string &help,
                             std::function<std::optional<std::size_t>(const LieAlgebraSpan &)> fn) {
        auto *s = algebra(name, help);
        s->callback([&, name, fn] {
            action = [&, name, fn] {
                const auto v = fn(detail::algebra_input(cfg, gens, span_file));
                detail::emit(cfg, out, name, v ? nlohmann::json(*v) : nlohmann::json("non-terminating"));
                return v ? int(exit_ok) : int(exit_failed);
            };
        });
    };
    count_command("soluble-length", "length of the derived series",
                  [&](const LieAlgebraSpan &g) { return soluble_length(g, cfg.jobs); });
    count_command("nilpotency-class", "length of the lower central series",
                  [&](const LieAlgebraSpan &g) { return nilpotency_class(g, cfg.jobs); });

    detail::VerifyArgs verify;
    {
        auto *s = sub("verify", "check the example families: intro, solvable, nilpotent, group or all");
        s->add_option("target", verify.target)->required()->check(
            CLI::IsMember({"intro", "solvable", "nilpotent", "group", "all"}));
        s->add_option("--n", verify.n, "family dimensions");
        s->add_option("--k", verify.k, "intro family parameters");
        s->add_option("--samples", verify.samples, "samples per commutator depth (intro)");
        s->callback([&] { action = [&] { return detail::run_verify(cfg, verify, out); }; });
    }
    std::size_t depth = 1;
    std::size_t generators = 4;
    {
        auto *s = sub("search-witness", "randomized search for a nontrivial balanced commutator word");
        s->add_option("--depth", depth, "commutator depth")->required();
        s->add_option("--generators", generators, "number of generators")->check(CLI::PositiveNumber);
        s->callback([&] {
            action = [&] {
                const auto k = detail::need_order(cfg);
                const auto w = families::search_length_witness(cfg.dim, depth, k, cfg.seed, generators);
                if (!w) {
                    err << "no witness found\n";
                    return int(exit_failed);
                }
                out << "# fgerm --dim " << cfg.dim << " --order " << k.value() << " --seed " << cfg.seed
                    << " search-witness --depth " << depth << " --generators " << generators << "\n";
                out << families::to_fixture_text(*w);
                return int(exit_ok);
            };
        });
    }

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp &) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "usage: " << e.what() << "\n";
        return exit_usage;
    }
    if (order_opt->count() > 0) {
        cfg.order = order;
    }
    try {
        if (!action) {
            throw usage_error("no subcommand");
        }
        return action();
    } catch (const usage_error &e) {
        err << "usage: " << e.what() << "\n";
        return exit_usage;
    } catch (const parse_error &e) {
        err << "parse error: " << e.what() << "\n";
        return exit_parse;
    } catch (const budget_exceeded &e) {
        err << "budget exceeded: " << e.what() << "\n";
        return exit_budget;
    } catch (const dimension_mismatch &e) {
        err << "dimension mismatch: " << e.what() << "\n";
        return exit_precondition;
    } catch (const error &e) {
        err << "error: " << e.what() << "\n";
        return exit_precondition;
    } catch (const std::exception &e) {
        err << "internal error: " << e.what() << "\n";
        return exit_internal;
    }
}

} // namespace fgerm::cli
