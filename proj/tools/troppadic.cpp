#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "troppadic/io.hpp"
#include "troppadic/svg.hpp"

using namespace troppadic;
using io::Json;

namespace {

enum Exit { kOk = 0, kOther = 1, kInput = 2, kPrecision = 3, kGenericity = 4 };

struct JobConfig {
    long prime = 0;  // 0: take the prime from the input files
    long precision = 12;
    long degree = 10;
    std::string domain;
    std::optional<unsigned long long> seed;
    std::string svg;
    int jobs = 1;
    std::string normalization = "coefficient";
    std::string output;
};

std::vector<DomainBound> parse_domain(const std::string& s, int n) {
    std::vector<DomainBound> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(' '));
        item.erase(item.find_last_not_of(' ') + 1);
        if (item == "-inf") out.push_back(std::nullopt);
        else out.push_back(io::parse_rational(Json(item), "--domain"));
    }
    if (static_cast<int>(out.size()) != n)
        throw InputError("--domain needs " + std::to_string(n) + " comma-separated bounds");
    return out;
}

io::SeriesFile load_series(const std::string& path, const JobConfig& cfg) {
    io::SeriesFile f = io::read_series(path);
    if (cfg.prime && f.series.prime() != cfg.prime)
        throw InputError(path + ": prime " + std::to_string(f.series.prime()) + " differs from --prime " +
                         std::to_string(cfg.prime));
    if (!cfg.domain.empty()) {
        int n = f.series.nvars() - f.nparams;
        auto d = parse_domain(cfg.domain, n);
        std::vector<DomainBound> full = f.series.domain();
        std::copy(d.begin(), d.end(), full.begin());
        f.series.set_domain(full);
    }
    return f;
}

void emit(const Json& j, const JobConfig& cfg) {
    std::string text = io::dump(j);
    if (cfg.output.empty()) std::cout << text;
    else io::write_text_atomic(cfg.output, text);
}

int cmd_trop(const std::string& path, const JobConfig& cfg) {
    io::SeriesFile f = load_series(path, cfg);
    if (f.nparams) throw InputError("trop expects a series without parameters");
    TropicalData d = trop_complex(f.series);
    emit(io::trop_report(d), cfg);
    if (!cfg.svg.empty()) {
        if (d.cells.empty()) std::cerr << "trop: empty complex, no SVG written\n";
        else io::write_text_atomic(cfg.svg, svg::render(d));
    }
    return kOk;
}

int cmd_bound_system(const std::vector<std::string>& paths, const std::vector<std::string>& wbounds,
                     const JobConfig& cfg) {
    if (!cfg.seed) throw InputError("bound-system needs --seed or TROPPADIC_SEED");
    if (cfg.normalization != "coefficient")
        throw InputError("bound-system always uses coefficient normalization");
    std::vector<ParamSeries> sys;
    for (const auto& p : paths) sys.push_back(load_series(p, cfg).param());
    WBoundOracle oracle;
    for (const auto& w : wbounds) {
        auto eq = w.find('=');
        if (eq == std::string::npos) throw InputError("--wbound expects id=d");
        long d;
        try {
            d = std::stol(w.substr(eq + 1));
        } catch (const std::exception&) {
            throw InputError("--wbound expects id=d");
        }
        oracle.register_bound(w.substr(0, eq), d);
    }
    BoundOptions opt;
    opt.seed = *cfg.seed;
    opt.precision = cfg.precision;
    opt.jobs = cfg.jobs;
    BoundReport r = system_root_bound(sys, oracle, opt);
    emit(io::bound_report_json(r, oracle), cfg);
    return kOk;
}

int cmd_strassmann(const std::string& path, const JobConfig& cfg) {
    io::SeriesFile f = load_series(path, cfg);
    Json j = io::header("strassmann");
    j["prime"] = f.series.prime();
    j["count"] = strassmann_count(f.series);
    emit(j, cfg);
    return kOk;
}

int cmd_wdiv(const std::string& fpath, const std::string& gpath, const JobConfig& cfg) {
    io::SeriesFile f = load_series(fpath, cfg), g = load_series(gpath, cfg);
    Budget b{cfg.precision, cfg.degree};
    WeierstrassDivision w = weierstrass_divide(f.series, g.series, b);
    Json j = io::header("wdiv");
    j["prime"] = f.series.prime();
    j["precision"] = b.precision;
    j["degree"] = b.degree;
    j["order"] = w.order;
    j["Q"] = io::series_json(w.Q);
    Json a = Json::array();
    for (const auto& x : w.A) a.push_back(io::series_json(x));
    j["A"] = a;
    j["residue_valuation"] = io::v_str(weierstrass_residue(f.series, g.series, w, b.degree));
    emit(j, cfg);
    return kOk;
}

int cmd_mixed_volume(const std::string& path, const JobConfig& cfg) {
    auto ps = io::parse_polytope_family(io::read_json(path));
    Normalization mode;
    if (cfg.normalization == "coefficient") mode = Normalization::Coefficient;
    else if (cfg.normalization == "normalized") mode = Normalization::Normalized;
    else throw InputError("--normalization must be coefficient or normalized");
    if (static_cast<int>(ps.size()) != ps[0].ambient())
        throw InputError("mixed volume needs as many polytopes as the ambient dimension");
    Json j = io::header("mixed_volume");
    j["dim"] = ps[0].ambient();
    j["normalization"] = cfg.normalization;
    j["mixed_volume"] = io::q_str(mixed_volume(ps, mode));
    emit(j, cfg);
    return kOk;
}

int cmd_term_deriv(const std::string& text, const std::string& var, long order, bool realize_it,
                   const JobConfig& cfg) {
    long p = cfg.prime ? cfg.prime : 5;
    SymbolTable sym = SymbolTable::standard(p);
    Term t = parse_term(text, &sym);
    Term d = derive_term(t, var, order, sym);
    Json j = io::header("term_deriv");
    j["prime"] = p;
    j["term"] = t.str();
    j["variable"] = var;
    j["order"] = order;
    j["derivative"] = d.str();
    if (realize_it) {
        auto vs = variables(t);
        vs.insert(var);
        std::vector<std::string> vars(vs.begin(), vs.end());
        j["variables"] = vars;
        j["realization"] = io::series_json(realize(d, vars, p, sym, Budget{cfg.precision, cfg.degree}));
    }
    emit(j, cfg);
    return kOk;
}

int exit_code(const std::exception& e) {
    if (dynamic_cast<const GenericityFailure*>(&e)) return kGenericity;
    if (dynamic_cast<const PrecisionExhausted*>(&e) || dynamic_cast<const BudgetExceeded*>(&e)) return kPrecision;
    if (dynamic_cast<const Error*>(&e)) return kInput;
    if (dynamic_cast<const nlohmann::json::exception*>(&e)) return kInput;
    return kOther;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"troppadic: p-adic series, tropicalization and root-count bounds"};
    app.require_subcommand(1);
    app.fallthrough();
    JobConfig cfg;
    unsigned long long seed = 0;
    app.add_option("--prime", cfg.prime, "prime p (checked against input files)")->check(CLI::PositiveNumber);
    app.add_option("--prec", cfg.precision, "precision N (p^N)")->check(CLI::PositiveNumber);
    app.add_option("--deg", cfg.degree, "degree budget D")->check(CLI::PositiveNumber);
    app.add_option("--domain", cfg.domain, "valuation domain bounds r_1,...,r_n (-inf allowed)");
    auto* seed_opt = app.add_option("--seed", seed, "random seed (fallback: TROPPADIC_SEED)");
    app.add_option("--svg", cfg.svg, "SVG output path (trop, n = 2)");
    app.add_option("--jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
    app.add_option("--normalization", cfg.normalization, "mixed volume mode")
        ->check(CLI::IsMember({"coefficient", "normalized"}));
    app.add_option("-o,--output", cfg.output, "write the JSON report here instead of stdout");

    std::string trop_in, strass_in, f_in, g_in, mv_in, term_text, var = "x";
    std::vector<std::string> sys_in, wbounds;
    long order = 1;
    bool realize_it = false;
    auto* trop = app.add_subcommand("trop", "tropicalization and Newton complex of a series");
    trop->add_option("series", trop_in, "series file")->required();
    auto* bound = app.add_subcommand("bound-system", "uniform root-count bound of a system");
    bound->add_option("series", sys_in, "one series file per equation")->required();
    bound->add_option("--wbound", wbounds, "registered Weierstrass bound id=d (ids f1, f2, ...)");
    auto* strass = app.add_subcommand("strassmann", "Strassmann zero count on the domain ball");
    strass->add_option("series", strass_in, "univariate series file")->required();
    auto* wdiv = app.add_subcommand("wdiv", "Weierstrass division g = Q f + sum A_j Y^j");
    wdiv->add_option("f", f_in, "divisor series file")->required();
    wdiv->add_option("g", g_in, "dividend series file")->required();
    auto* mv = app.add_subcommand("mixed-volume", "mixed volume of a polytope family");
    mv->add_option("polytopes", mv_in, "polytope family file")->required();
    auto* td = app.add_subcommand("term-deriv", "derivative of a term");
    td->add_option("term", term_text, "term, e.g. \"Ep(x)*Ep(y) + 3*x\"")->required();
    td->add_option("--var", var, "variable to differentiate in");
    td->add_option("--order", order, "derivative order")->check(CLI::NonNegativeNumber);
    td->add_flag("--realize", realize_it, "also realize the derivative as a series (--prec, --deg)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInput;
    }
    try {
        if (seed_opt->count()) {
            cfg.seed = seed;
        } else if (const char* env = std::getenv("TROPPADIC_SEED")) {
            try {
                std::size_t used = 0;
                cfg.seed = std::stoull(env, &used);
                if (used != std::string(env).size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw InputError("TROPPADIC_SEED must be a nonnegative integer");
            }
        }
        if (*trop) return cmd_trop(trop_in, cfg);
        if (*bound) return cmd_bound_system(sys_in, wbounds, cfg);
        if (*strass) return cmd_strassmann(strass_in, cfg);
        if (*wdiv) return cmd_wdiv(f_in, g_in, cfg);
        if (*mv) return cmd_mixed_volume(mv_in, cfg);
        if (*td) return cmd_term_deriv(term_text, var, order, realize_it, cfg);
    } catch (const std::exception& e) {
        std::cerr << "troppadic: " << e.what() << "\n";
        return exit_code(e);
    }
    return kOther;
}
