#include "focklab/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "focklab/covering.hpp"
#include "focklab/embedding.hpp"
#include "focklab/errors.hpp"
#include "focklab/littlewood_paley.hpp"
#include "focklab/numerics.hpp"
#include "focklab/operators.hpp"
#include "focklab/weights.hpp"

namespace focklab::cli {

const char* const kVersion = "0.1.0";

namespace {

using nlohmann::json;

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (n - 1);
    return g;
}

std::vector<double> logspace(double lo, double hi, int n) {
    std::vector<double> g(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        g[static_cast<std::size_t>(i)] =
            lo * std::pow(hi / lo, static_cast<double>(i) / (n - 1));
    return g;
}

// doubleexp criteria grids must stop before phi' leaves double range
double default_grid_max(const RadialWeight& w) {
    return w.family() == WeightFamily::DoubleExponential ? 6.0 : 40.0;
}

void emit_json(const json& report, const std::string& path) {
    const std::string text = report.dump(2) + "\n";
    if (path.empty()) {
        std::cout << text;
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) raise("IoError", "cannot write report to '" + path + "'");
        out << text;
    }
}

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void emit_csv(const std::string& path, const std::string& header,
              const std::vector<std::vector<double>>& rows) {
    if (path.empty()) return;
    std::ofstream out(path, std::ios::binary);
    if (!out) raise("IoError", "cannot write CSV to '" + path + "'");
    out << header << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out << (i ? "," : "") << fmt_double(row[i]);
        out << "\n";
    }
}

struct Options {
    std::string out_path, csv_path;
    std::uint64_t seed = 1;
    double tol = 1e-9;

    std::string weight_spec;
    std::vector<std::string> fn_specs;
    std::string symbol_spec;
    std::string measure_path;
    double p = 2.0, q = 2.0;
    double delta = 0.0;
    double r_min = 1.0, r_max = 0.0;
    int grid_n = 0;
    double grid_step = 0.0;
    int threads = 1;
    int n_max = 200;
    int m_step = 2;
    std::string sizes_text = "50,100,200";
};

json config_echo(const Options& o, const std::string& subcommand) {
    json cfg{{"subcommand", subcommand}, {"seed", o.seed}, {"tol", o.tol}};
    if (!o.weight_spec.empty()) cfg["weight"] = o.weight_spec;
    if (!o.fn_specs.empty()) cfg["functions"] = o.fn_specs;
    if (!o.symbol_spec.empty()) cfg["symbol"] = o.symbol_spec;
    if (!o.measure_path.empty()) cfg["measure"] = o.measure_path;
    cfg["p"] = o.p;
    cfg["q"] = o.q;
    if (o.delta > 0) cfg["delta"] = o.delta;
    if (o.r_max > 0) cfg["grid"] = json{{"r_min", o.r_min}, {"r_max", o.r_max}, {"n", o.grid_n}};
    return cfg;
}

json wrap_report(const Options& o, const std::string& subcommand, json results) {
    return json{{"tool", {{"name", "focklab"}, {"version", kVersion}}},
                {"config", config_echo(o, subcommand)},
                {"results", std::move(results)}};
}

// ---------------------------------------------------------------- weight-info

json run_weight_info(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    const double hi = o.r_max > 0 ? o.r_max : std::min(default_grid_max(w), 50.0);
    const int n = o.grid_n > 0 ? o.grid_n : 120;
    const auto rep = class_I_report(w, linspace(std::max(o.r_min, 1e-3), hi, n));

    json profile = json::array();
    for (double r : logspace(0.5, hi, 9)) {
        profile.push_back(json{{"r", r},
                               {"phi", w.phi(r)},
                               {"dphi", w.dphi(r)},
                               {"log_laplacian", w.log_laplacian(r)},
                               {"log_tau", w.log_tau(r)},
                               {"rel_err", 0.0}});
    }
    return json{{"weight", w.spec_string()},
                {"class_I",
                 {{"laplacian_positive", rep.laplacian_positive},
                  {"tau_decreasing", rep.tau_decreasing},
                  {"tau_prime_vanishing", rep.tau_prime_vanishing},
                  {"side_condition_A", rep.side_condition_A},
                  {"side_condition_B", rep.side_condition_B},
                  {"fitted_C", rep.fitted_C},
                  {"tau_prime_at_rmax", rep.tau_prime_at_rmax},
                  {"in_class_I", rep.in_class_I}}},
                {"profile", profile}};
}

// ------------------------------------------------------------------------- lp

json run_lp(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    if (o.fn_specs.empty()) raise("InvalidArgument", "lp needs at least one --fn");
    std::vector<EntireFunction> fns;
    for (const auto& spec : o.fn_specs) fns.push_back(EntireFunction::parse(spec));

    const auto sweep = lp::lp_ratio_sweep(fns, w, o.p, o.q, o.tol);

    json ratios = json::array();
    for (std::size_t i = 0; i < fns.size(); ++i) {
        const auto& c = sweep.items[i];
        ratios.push_back(json{{"function", o.fn_specs[i]},
                              {"lhs", c.lhs},
                              {"rhs", c.rhs},
                              {"ratio", c.ratio},
                              {"defined", c.defined},
                              {"rel_err", c.rel_err}});
    }

    const double grid_max =
        std::min(default_grid_max(w), w.radius_with_neg_log_density_below(o.p, 600.0));
    const auto prof = lp::distortion_profile(w, o.p, linspace(0.0, grid_max, 81), 1e-10);
    json psi_profile = json::array();
    std::vector<std::vector<double>> csv_rows;
    for (const auto& pt : prof.points) {
        psi_profile.push_back(json{
            {"r", pt.r}, {"psi", pt.psi}, {"psi_dphi", pt.psi_dphi}, {"rel_err", pt.rel_err}});
        csv_rows.push_back({pt.r, pt.psi, pt.psi_dphi});
    }
    emit_csv(o.csv_path, "r,psi,psi_dphi", csv_rows);

    return json{{"weight", w.spec_string()},
                {"p", o.p},
                {"q", o.q},
                {"functions", o.fn_specs},
                {"ratios", ratios},
                {"min_ratio", sweep.min_ratio},
                {"max_ratio", sweep.max_ratio},
                {"psi_profile", psi_profile}};
}

// ---------------------------------------------------------------------- cover

json run_cover(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    if (!(o.r_max > 0)) raise("InvalidArgument", "cover needs --rmax > 0");
    auto cfg = covering::make_config(w, o.r_max, o.delta, o.grid_step);
    auto result = covering::build_covering(w, cfg);
    auto rep = covering::verify_covering(result, w, cfg, o.threads, o.seed);
    result.multiplicity_max = rep.multiplicity_max;
    result.multiplicity_histogram = rep.multiplicity_histogram;

    std::vector<std::vector<double>> rows;
    rows.reserve(result.centers.size());
    for (std::size_t j = 0; j < result.centers.size(); ++j)
        rows.push_back({result.centers[j].real(), result.centers[j].imag(), result.radii[j]});
    emit_csv(o.csv_path, "x,y,radius", rows);

    return json{{"weight", w.spec_string()},
                {"covering_config",
                 {{"r_max", cfg.r_max},
                  {"grid_step", cfg.grid_step},
                  {"delta", cfg.delta},
                  {"c1_estimate", cfg.c1_estimate},
                  {"m_tau", cfg.m_tau}}},
                {"n_centers", result.centers.size()},
                {"verification",
                 {{"separation_ok", rep.separation_ok},
                  {"coverage_ok", rep.coverage_ok},
                  {"triple_inclusion_ok", rep.triple_inclusion_ok},
                  {"multiplicity_max", rep.multiplicity_max},
                  {"multiplicity_histogram", rep.multiplicity_histogram},
                  {"uncovered_interior_points", rep.uncovered_interior_points},
                  {"separation_violations", rep.separation_violations},
                  {"samples_checked", rep.samples_checked}}}};
}

// ------------------------------------------------------------------- carleson

json run_carleson(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    const auto mu = embedding::DiscreteMeasure::from_csv_file(o.measure_path);
    const auto cov_cfg = covering::make_config(w, std::max(mu.max_radius(), 2.0));
    const double delta = o.delta > 0 ? o.delta : cov_cfg.m_tau / 2.0;

    json results{{"weight", w.spec_string()},
                 {"p", o.p},
                 {"q", o.q},
                 {"delta", delta},
                 {"n_atoms", mu.atoms.size()},
                 {"total_mass", mu.total_mass()}};

    if (o.p <= o.q) {
        embedding::CarlesonReport rep;
        if (o.r_max > 0 && o.grid_n > 0)
            rep = embedding::carleson_sup(mu, w, o.p, o.q, delta, {o.r_max, o.grid_n});
        else
            rep = embedding::carleson_sup_default_grid(mu, w, o.p, o.q, delta);

        std::vector<double> shells = linspace(0.0, mu.max_radius() + 2.0, 9);
        const auto trend = embedding::carleson_vanishing(mu, w, o.p, o.q, delta, shells);
        json shells_json = json::array();
        for (std::size_t k = 0; k < trend.shell_radius.size(); ++k)
            shells_json.push_back(
                json{{"r", trend.shell_radius[k]}, {"log_max", trend.shell_log_max[k]}});

        results["k_value"] = rep.k_value;
        results["log_k_value"] = rep.log_k_value;
        results["argmax_center"] = {rep.argmax_center.real(), rep.argmax_center.imag()};
        results["rel_err"] = 0.0; // sums of exact atom terms
        results["vanishing_trend"] = shells_json;
        results["vanish_radius"] = trend.vanish_radius;
        results["verdict"] = trend.verdict == embedding::EmbeddingVerdict::CompactEvidence
                                 ? "CompactEvidence"
                                 : "Inconclusive";
    } else {
        auto grid = embedding::qlp_default_grid(mu, w, delta);
        if (o.r_max > 0 && o.grid_n > 0) grid = {o.r_max, o.grid_n};
        const auto qlp = embedding::carleson_qlp(mu, w, o.p, o.q, delta, grid);
        results["qlp_norm"] = qlp.norm;
        results["qlp_log_norm"] = qlp.log_norm;
        results["qlp_exponent"] = qlp.exponent;
        results["rel_err"] = 0.05; // midpoint-grid resolution
        results["verdict"] = "BoundedEvidence";
    }
    return results;
}

// ------------------------------------------------------------------- tg-check

json run_tg_check(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    const auto g = EntireFunction::parse(o.symbol_spec);
    const auto env = operators::derivative_envelope(g);

    json results{{"weight", w.spec_string()}, {"symbol", o.symbol_spec}, {"p", o.p}, {"q", o.q}};

    if (o.p <= o.q) {
        const double hi = o.r_max > 0 ? o.r_max : default_grid_max(w);
        const int n = o.grid_n > 0 ? o.grid_n : 80;
        const auto rep =
            operators::tg_bounded_criterion(env, w, o.p, o.q, logspace(o.r_min, hi, n));
        json values = json::array();
        for (std::size_t i = 0; i < rep.r_grid.size(); ++i)
            values.push_back(json{{"r", rep.r_grid[i]}, {"log_value", rep.log_values[i]}});
        results["quantity"] = rep.quantity_name;
        results["log_sup_estimate"] = rep.log_sup_estimate;
        results["loglog_slope_tail"] = rep.loglog_slope_tail;
        results["rel_err"] = 1e-10;
        results["verdict"] = operators::verdict_name(rep.verdict);
        results["values"] = values;
    } else {
        const auto rep = operators::tg_qlp_criterion(env, w, o.p, o.q,
                                                     o.r_max > 0 ? o.r_max : default_grid_max(w));
        results["quantity"] = "||g'/(1+phi')||_{L^r(dm)}, r = pq/(p-q)";
        results["log_integral"] = rep.log_integral;
        results["log_norm"] = rep.log_norm;
        results["tail_slope"] = rep.tail_slope;
        results["rel_err"] = 1e-10;
        results["verdict"] = operators::tail_verdict_name(rep.verdict);
    }

    try {
        const auto closed = operators::degree_threshold(w, o.p, o.q, std::max(g.degree(), 0));
        json cf;
        if (closed.bounded) cf["bounded"] = *closed.bounded;
        if (closed.compact) cf["compact"] = *closed.compact;
        if (!closed.sup_condition.empty()) cf["sup_condition"] = closed.sup_condition;
        results["closed_form"] = cf;
    } catch (const Error&) {
        // no closed form for this weight family
    }
    return results;
}

// ------------------------------------------------------------------- schatten

json run_schatten(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    const auto g = EntireFunction::parse(o.symbol_spec);

    std::vector<int> sizes;
    std::stringstream ss(o.sizes_text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            sizes.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            raise("ParseError", "bad truncation size '" + tok + "'");
        }
    }

    const auto tail = operators::schatten_tail(g, w, sizes, o.p);
    const auto integral =
        operators::schatten_integral_criterion(operators::derivative_envelope(g), w, o.p);

    std::vector<std::vector<double>> rows;
    json table = json::array();
    for (std::size_t i = 0; i < tail.sizes.size(); ++i) {
        rows.push_back(
            {static_cast<double>(tail.sizes[i]), tail.partial_sums[i], tail.norms[i]});
        table.push_back(json{{"n", tail.sizes[i]},
                             {"partial_sum", tail.partial_sums[i]},
                             {"norm", tail.norms[i]}});
    }
    emit_csv(o.csv_path, "n,partial_sum,norm", rows);

    return json{{"weight", w.spec_string()},
                {"symbol", o.symbol_spec},
                {"p", o.p},
                {"partial_sums", table},
                {"rel_err", 1e-8},
                {"convergent", tail.convergent},
                {"integral_criterion",
                 {{"log_integral", integral.log_integral},
                  {"tail_slope", integral.tail_slope},
                  {"cw5_sup", integral.cw5_sup},
                  {"verdict", operators::tail_verdict_name(integral.verdict)}}}};
}

// ---------------------------------------------------------------------- shift

json run_shift(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    const auto omega = operators::volterra_weights(w, o.n_max);
    const auto mono = operators::shift_monotonicity(omega);

    std::vector<std::vector<double>> rows;
    for (std::size_t n = 0; n < omega.size(); ++n)
        rows.push_back({static_cast<double>(n), omega[n]});
    emit_csv(o.csv_path, "n,omega", rows);

    return json{{"weight", w.spec_string()},
                {"n_max", o.n_max},
                {"omega", omega},
                {"rel_err", 1e-8},
                {"monotonicity",
                 {{"eventually_decreasing", mono.eventually_decreasing}, {"n0", mono.n0}}}};
}

// -------------------------------------------------------------------- density

json run_density(const Options& o) {
    const auto w = RadialWeight::parse(o.weight_spec);
    if (o.fn_specs.size() != 1) raise("InvalidArgument", "density needs exactly one --fn");
    const auto f = EntireFunction::parse(o.fn_specs[0]);
    if (f.degree() < 1) raise("InvalidArgument", "density needs a nonconstant function");

    std::vector<std::vector<double>> rows;
    json table = json::array();
    for (int m = o.m_step; m < f.degree(); m += o.m_step) {
        const double norm = operators::taylor_tail_norm(f, w, o.p, m, 1e-10);
        rows.push_back({static_cast<double>(m), norm});
        table.push_back(json{{"m", m}, {"tail_norm", norm}, {"rel_err", 1e-9}});
    }
    emit_csv(o.csv_path, "m,tail_norm", rows);

    return json{{"weight", w.spec_string()},
                {"function", o.fn_specs[0]},
                {"p", o.p},
                {"tail_norms", table}};
}

} // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"focklab: numerical laboratory for weighted Fock spaces"};
    app.require_subcommand(1);
    app.set_config("--config");

    Options o;
    app.add_option("--out", o.out_path, "write the JSON report here (default: stdout)");
    app.add_option("--csv", o.csv_path, "write the tabular side output here");
    app.add_option("--seed", o.seed, "seed for sampled checks");
    app.add_option("--tol", o.tol, "quadrature tolerance");

    auto add_weight = [&](CLI::App* sub) {
        sub->add_option("--weight", o.weight_spec,
                        "weight spec: power:A | exp:B | doubleexp | gauss | log:A")
            ->required();
    };

    auto* info = app.add_subcommand("weight-info", "weight family diagnostics");
    add_weight(info);
    info->add_option("--r-min", o.r_min, "grid start");
    info->add_option("--r-max", o.r_max, "grid end");
    info->add_option("--n", o.grid_n, "grid points");

    auto* lp_cmd = app.add_subcommand("lp", "derivative-norm comparison sweep");
    add_weight(lp_cmd);
    lp_cmd->add_option("--p", o.p)->required();
    lp_cmd->add_option("--q", o.q)->required();
    lp_cmd->add_option("--fn", o.fn_specs, "function spec (repeatable)")->required();

    auto* cover = app.add_subcommand("cover", "greedy disc covering + verification");
    add_weight(cover);
    cover->add_option("--rmax", o.r_max, "domain radius")->required();
    cover->add_option("--delta", o.delta, "scale factor (default m_tau)");
    cover->add_option("--step", o.grid_step, "grid step override");
    cover->add_option("--threads", o.threads, "verification threads");

    auto* carleson = app.add_subcommand("carleson", "discrete-measure embedding quantities");
    add_weight(carleson);
    carleson->add_option("--measure", o.measure_path, "CSV with columns x,y,mass")->required();
    carleson->add_option("--p", o.p)->required();
    carleson->add_option("--q", o.q)->required();
    carleson->add_option("--delta", o.delta, "disc scale (default m_tau/2)");
    carleson->add_option("--grid-r", o.r_max, "candidate grid radius");
    carleson->add_option("--grid-n", o.grid_n, "candidate grid side count");

    auto* tg = app.add_subcommand("tg-check", "integration-operator criterion");
    add_weight(tg);
    tg->add_option("--symbol", o.symbol_spec, "symbol g")->required();
    tg->add_option("--p", o.p)->required();
    tg->add_option("--q", o.q)->required();
    tg->add_option("--r-min", o.r_min);
    tg->add_option("--r-max", o.r_max);
    tg->add_option("--n", o.grid_n);

    auto* schatten = app.add_subcommand("schatten", "Schatten-class truncation study");
    add_weight(schatten);
    schatten->add_option("--symbol", o.symbol_spec)->required();
    schatten->add_option("--p", o.p)->required();
    schatten->add_option("--sizes", o.sizes_text, "truncation sizes (default 50,100,200)");

    auto* shift = app.add_subcommand("shift", "Volterra shift weights");
    add_weight(shift);
    shift->add_option("--n", o.n_max, "number of weights (default 200)");

    auto* density = app.add_subcommand("density", "Taylor tail norms");
    add_weight(density);
    density->add_option("--fn", o.fn_specs, "function spec")->required();
    density->add_option("--p", o.p)->required();
    density->add_option("--m-step", o.m_step, "truncation stride (default 2)");

    // root options (--out, --seed, ...) may appear after the subcommand name
    for (auto* sub : app.get_subcommands({})) sub->fallthrough();

    std::vector<std::string> argv_copy(args);
    try {
        std::vector<const char*> argv;
        argv.push_back("focklab");
        for (const auto& a : argv_copy) argv.push_back(a.c_str());
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        json results;
        std::string name;
        if (info->parsed()) { name = "weight-info"; results = run_weight_info(o); }
        else if (lp_cmd->parsed()) { name = "lp"; results = run_lp(o); }
        else if (cover->parsed()) { name = "cover"; results = run_cover(o); }
        else if (carleson->parsed()) { name = "carleson"; results = run_carleson(o); }
        else if (tg->parsed()) { name = "tg-check"; results = run_tg_check(o); }
        else if (schatten->parsed()) { name = "schatten"; results = run_schatten(o); }
        else if (shift->parsed()) { name = "shift"; results = run_shift(o); }
        else if (density->parsed()) { name = "density"; results = run_density(o); }
        emit_json(wrap_report(o, name, std::move(results)), o.out_path);
        return 0;
    } catch (const Error& e) {
        std::cerr << e.name() << ": " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run(args);
}

} // namespace focklab::cli
