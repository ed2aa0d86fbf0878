#include <omp.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <nlohmann/json.hpp>
#include <random>
#include <sstream>

#include <fftw3.h>

#include "muskat/fields.hpp"
#include "muskat/multipliers.hpp"
#include "muskat/runner.hpp"
#include "muskat/spectral.hpp"

#ifndef MUSKAT_VERSION
#define MUSKAT_VERSION "unknown"
#endif

namespace muskat {

namespace fs = std::filesystem;

RefinementVerdict judge_refinement(double coarse, double fine, double scale, double min_order, double floor) {
    RefinementVerdict v;
    v.at_floor = fine <= floor * scale;
    if (fine > 0.0 && coarse > 0.0) v.order = std::log2(coarse / fine);
    else v.order = fine == 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
    v.pass = v.at_floor || v.order >= min_order;
    return v;
}

bool ValidationReport::passed() const {
    for (const auto& r : rows) {
        if (!r.pass) return false;
    }
    return !rows.empty();
}

std::vector<std::string> validation_suites() {
    return {"adjoint", "gradient-identity", "chain-rule", "wow", "symbols", "resolvent", "rellich"};
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// One resolution of the validation cell.
struct Level {
    GridSpec grid;
    ScalarField f;
    ScalarField beta;
    ScalarField gamma;
    InterfaceGeometry geom;

    Level(const SimConfig& config, const GridSpec& g)
        : grid(g),
          f(initial_field(config, g)),
          beta(random_smooth_field(g, config.seed)),
          gamma(random_smooth_field(g, config.seed + 1)),
          geom(f) {}
};

using Levels = std::array<const Level*, 2>;

void push_pair(ValidationReport& report, const std::string& suite, const std::string& check, const Levels& levels,
               double coarse, double fine, double scale) {
    const RefinementVerdict v = judge_refinement(coarse, fine, scale);
    report.rows.push_back({suite, check, levels[0]->grid.points, coarse, 0.0, kNaN, true});
    report.rows.push_back({suite, check, levels[1]->grid.points, fine, 0.0, v.order, v.pass});
}

void suite_adjoint(ValidationReport& report, const Levels& levels) {
    for (const Level* L : levels) {
        const ScalarField d_beta = apply_D(L->geom, L->beta);
        const ScalarField ds_gamma = apply_D_star(L->geom, L->gamma);
        const double lhs = inner(d_beta, L->gamma);
        const double rhs = inner(L->beta, ds_gamma);
        const double scale = l2_norm(d_beta) * l2_norm(L->gamma) + l2_norm(L->beta) * l2_norm(ds_gamma);
        const double rel = scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
        report.rows.push_back({"adjoint", "<D b,g> - <b,D* g>", L->grid.points, rel, 1e-12, kNaN, rel <= 1e-12});
    }
}

void suite_gradient(ValidationReport& report, const Levels& levels) {
    const double coarse = gradient_identity_residual(levels[0]->geom, levels[0]->beta);
    const double fine = gradient_identity_residual(levels[1]->geom, levels[1]->beta);
    push_pair(report, "gradient-identity", "grad D b - A grad b", levels, coarse, fine,
              l2_norm(gradient(levels[1]->beta)));
}

void suite_chain(ValidationReport& report, const Levels& levels) {
    std::array<double, 2> r{};
    for (int i = 0; i < 2; ++i) {
        const Level& L = *levels[i];
        const OperatorSpec spec{base_profile(L.grid.dim), 1, MultiIndex{}};
        r[i] = chain_rule_residual(spec, L.f, {L.f}, L.beta);
    }
    push_pair(report, "chain-rule", "d_j B_1[f, b]", levels, r[0], r[1], l2_norm(gradient(levels[1]->beta)));
}

void suite_wow(ValidationReport& report, const Levels& levels, const SolveOptions& solver) {
    for (double a_mu : {0.0, 0.5, -0.8}) {
        std::array<double, 2> r{};
        for (int i = 0; i < 2; ++i) {
            const Level& L = *levels[i];
            const PhiTilde phi = compute_phi_tilde(L.f, a_mu, solver);
            r[i] = wow_residual(L.geom, phi.beta, phi.value, a_mu);
        }
        std::ostringstream check;
        check << "a_mu=" << a_mu;
        push_pair(report, "wow", check.str(), levels, r[0], r[1], std::sqrt(levels[1]->grid.cell_volume() *
                                                                           static_cast<double>(levels[1]->grid.size())));
    }
}

void suite_symbols(ValidationReport& report, const Levels& levels, std::uint64_t seed) {
    const int dim = levels[0]->grid.dim;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    std::vector<std::vector<double>> zs(100, std::vector<double>(static_cast<std::size_t>(dim)));
    for (auto& z : zs) {
        for (double& c : z) c = normal(rng);
    }
    const std::vector<double> zero_slope(static_cast<std::size_t>(dim), 0.0);
    const MultiplierSpec riesz{OperatorSpec{base_profile(dim), 0, unit_index(0)}, zero_slope};
    double riesz_err = 0.0;
    double t_err = 0.0;
    for (const auto& z : zs) {
        double norm = 0.0;
        for (double c : z) norm += c * c;
        norm = std::sqrt(norm);
        const std::complex<double> expected(0.0, -0.5 * z[0] / norm);
        riesz_err = std::max(riesz_err, std::abs(symbol_D(riesz, z) - expected));
        t_err = std::max(t_err, std::abs(symbol_T(zero_slope, z) - 0.5 * norm));
    }
    report.rows.push_back({"symbols", "riesz i m(z) = -i z_1/(2|z|)", 0, riesz_err, 1e-8, kNaN, riesz_err <= 1e-8});
    report.rows.push_back({"symbols", "m_T(0, z) = |z|/2", 0, t_err, 1e-8, kNaN, t_err <= 1e-8});

    // Lattice operator against the symbol on plane waves |k| <= M/8.
    for (const Level* L : levels) {
        const GridSpec& g = L->grid;
        const ScalarField flat(g);
        const OperatorSpec spec{base_profile(dim), 0, unit_index(0)};
        double worst = 0.0;
        const int kmax = g.points / 8;
        for (int k = 1; k <= kmax; k *= 2) {
            FieldRecipe wave;
            wave.kind = FieldKind::mode;
            wave.wave.assign(static_cast<std::size_t>(dim), 0);
            wave.wave[0] = k;
            if (dim > 1) wave.wave[1] = k / 2;
            const ScalarField u = make_field(g, wave);
            const ScalarField out = apply_B(spec, {flat}, {}, u);
            double kn = 0.0;
            for (int c : wave.wave) kn += static_cast<double>(c) * c;
            const double m = -0.5 * k / std::sqrt(kn);
            // i m applied to cos gives -m sin.
            std::vector<double> expected(g.size());
            const double two_pi = 2.0 * std::acos(-1.0);
            for (std::size_t s = 0; s < g.size(); ++s) {
                const auto x = g.position(s);
                double phase = 0.0;
                for (int d = 0; d < dim; ++d) phase += two_pi * wave.wave[static_cast<std::size_t>(d)] * x[d] / g.extent;
                expected[s] = -m * std::sin(phase);
            }
            const ScalarField ref(g, std::move(expected));
            worst = std::max(worst, l2_norm(out - ref) / l2_norm(ref));
        }
        report.rows.push_back({"symbols", "lattice Riesz on plane waves", g.points, worst, 1e-2, kNaN, worst <= 1e-2});
    }
}

void suite_resolvent(ValidationReport& report, const Levels& levels, const SolveOptions& solver) {
    for (double a_mu : {0.9, -0.9}) {
        for (const Level* L : levels) {
            std::ostringstream check;
            check << "a_mu=" << a_mu;
            ValidationRow row{"resolvent", "", L->grid.points, 0.0, solver.tol, kNaN, false};
            try {
                const DensitySolution sol = solve_beta(L->geom, a_mu, solver);
                check << " iters=" << sol.report.iterations;
                row.residual = sol.report.residual;
                row.pass = sol.report.iterations <= 50 && sol.report.residual <= solver.tol;
            } catch (const SolverError& e) {
                check << " iters=" << e.report().iterations << " (no convergence)";
                row.residual = e.report().residual;
            }
            row.check = check.str();
            report.rows.push_back(row);
        }
    }
}

void suite_rellich(ValidationReport& report, const Levels& levels) {
    for (int sign : {1, -1}) {
        const double coarse = rellich_residual(levels[0]->geom, levels[0]->beta, sign);
        const double fine = rellich_residual(levels[1]->geom, levels[1]->beta, sign);
        const double scale = l2_norm(gradient(levels[1]->beta)) * l2_norm(levels[1]->beta) + 1.0;
        push_pair(report, "rellich", sign > 0 ? "upper side" : "lower side", levels, coarse, fine, scale);
    }
}

std::string format_double(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory " + dir + ": " + ec.message());
}

std::string to_string(Scheme s) { return s == Scheme::euler ? "euler" : "ssp_rk2"; }

std::string to_string(FieldKind k) {
    switch (k) {
        case FieldKind::gaussian_bump: return "gaussian_bump";
        case FieldKind::mode: return "mode";
        case FieldKind::zero: return "zero";
    }
    return "zero";
}

std::vector<std::vector<double>> read_probe_rows(const std::string& path, int width) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open probes file " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        if (line.empty() || line[0] == '#') continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        bool numeric = true;
        while (std::getline(cells, cell, ',')) {
            try {
                std::size_t used = 0;
                row.push_back(std::stod(cell, &used));
                if (cell.find_first_not_of(" \t\r", used) != std::string::npos) numeric = false;
            } catch (const std::exception&) {
                numeric = false;
            }
        }
        if (!numeric) {
            if (rows.empty() && number == 1) continue;  // header
            throw ConfigError(path + ":" + std::to_string(number) + ": non-numeric probe row");
        }
        if (static_cast<int>(row.size()) != width)
            throw ConfigError(path + ":" + std::to_string(number) + ": expected " + std::to_string(width) +
                              " columns (x..., y)");
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace

ValidationReport run_validation(const SimConfig& config, const std::vector<std::string>& suites) {
    std::vector<std::string> selected;
    for (const auto& s : suites) {
        if (s == "all") {
            for (const auto& name : validation_suites()) selected.push_back(name);
            continue;
        }
        const auto known = validation_suites();
        if (std::find(known.begin(), known.end(), s) == known.end()) throw ConfigError("unknown suite '" + s + "'");
        selected.push_back(s);
    }
    const GridSpec fine_grid(config.grid.dim, 2 * config.grid.points, config.grid.extent);
    const Level coarse(config, config.grid);
    const Level fine(config, fine_grid);
    const Levels levels{&coarse, &fine};
    const SolveOptions& solver = config.stepper.solver;

    ValidationReport report;
    for (const auto& name : selected) {
        if (name == "adjoint") suite_adjoint(report, levels);
        else if (name == "gradient-identity") suite_gradient(report, levels);
        else if (name == "chain-rule") suite_chain(report, levels);
        else if (name == "wow") suite_wow(report, levels, solver);
        else if (name == "symbols") suite_symbols(report, levels, config.seed);
        else if (name == "resolvent") suite_resolvent(report, levels, solver);
        else if (name == "rellich") suite_rellich(report, levels);
    }
    return report;
}

void write_validation_csv(std::ostream& out, const ValidationReport& report) {
    out << "suite,check,points,residual,tolerance,order,pass\n";
    for (const auto& r : report.rows) {
        out << r.suite << ',' << '"' << r.check << '"' << ',' << r.points << ',' << format_double(r.residual) << ','
            << format_double(r.tolerance) << ',' << format_double(r.order) << ',' << (r.pass ? "PASS" : "FAIL")
            << '\n';
    }
}

void print_validation_table(std::ostream& out, const ValidationReport& report) {
    out << std::left << std::setw(18) << "suite" << std::setw(34) << "check" << std::right << std::setw(7) << "M"
        << std::setw(13) << "residual" << std::setw(9) << "order" << "  result\n";
    for (const auto& r : report.rows) {
        out << std::left << std::setw(18) << r.suite << std::setw(34) << r.check << std::right << std::setw(7)
            << r.points << std::setw(13) << std::setprecision(3) << std::scientific << r.residual << std::setw(9)
            << std::fixed << std::setprecision(2) << r.order << "  " << (r.pass ? "PASS" : "FAIL") << '\n';
        out.unsetf(std::ios::floatfield);
    }
    out << (report.passed() ? "all checks passed\n" : "validation FAILED\n");
}

void write_symbol_csv(std::ostream& out, const SymbolRequest& request) {
    int dim = static_cast<int>(request.slope.size());
    if (!request.ray.empty()) dim = dim ? dim : static_cast<int>(request.ray.size());
    if (dim < 1 || dim > kMaxDim) throw ConfigError("symbol: --A must give 1 to 3 slope components");
    if (!request.ray.empty() && static_cast<int>(request.ray.size()) != dim)
        throw ConfigError("symbol: --ray must have as many components as --A");
    if (!(request.kmax > 0.0) || request.count < 1) throw ConfigError("symbol: need kmax > 0 and count >= 1");

    std::function<std::complex<double>(std::span<const double>)> fn;
    if (request.symbol == "T") {
        fn = [&](std::span<const double> z) { return std::complex<double>(symbol_T(request.slope, z), 0.0); };
    } else if (request.symbol == "D") {
        MultiIndex nu{};
        if (static_cast<int>(request.nu.size()) > dim) throw ConfigError("symbol: --nu has more entries than axes");
        for (std::size_t i = 0; i < request.nu.size(); ++i) nu[i] = request.nu[i];
        ProfilePtr profile;
        if (request.profile == "base") profile = base_profile(dim);
        else if (request.profile == "constant") profile = constant_profile(1);
        else throw ConfigError("symbol: --profile must be base or constant");
        MultiplierSpec spec{OperatorSpec{profile, request.n, nu}, request.slope};
        try {
            spec.op.validate(dim);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("symbol: ") + e.what());
        }
        fn = [spec](std::span<const double> z) { return symbol_D(spec, z); };
    } else {
        throw ConfigError("symbol: --symbol must be D or T");
    }

    for (int d = 0; d < dim; ++d) out << 'z' << d << ',';
    out << "re,im\n";
    out.precision(17);
    auto emit = [&](const std::vector<double>& z) {
        const std::complex<double> v = fn(z);
        for (double c : z) out << c << ',';
        out << v.real() << ',' << v.imag() << '\n';
    };
    if (!request.ray.empty()) {
        double norm = 0.0;
        for (double c : request.ray) norm += c * c;
        norm = std::sqrt(norm);
        if (norm == 0.0) throw ConfigError("symbol: --ray must be non-zero");
        for (int q = 1; q <= request.count; ++q) {
            const double t = request.kmax * q / request.count;
            std::vector<double> z(request.ray);
            for (double& c : z) c *= t / norm;
            emit(z);
        }
        return;
    }
    const int kmax = static_cast<int>(request.kmax);
    const int side = 2 * kmax + 1;
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(side);
    for (std::size_t linear = 0; linear < total; ++linear) {
        std::vector<double> z(static_cast<std::size_t>(dim));
        std::size_t rest = linear;
        bool origin = true;
        for (int d = dim - 1; d >= 0; --d) {
            z[static_cast<std::size_t>(d)] = static_cast<double>(static_cast<int>(rest % side) - kmax);
            rest /= side;
            origin = origin && z[static_cast<std::size_t>(d)] == 0.0;
        }
        if (!origin) emit(z);
    }
}

void write_manifest(const SimConfig& config, const std::string& command, const std::string& dir) {
    using nlohmann::ordered_json;
    ordered_json m;
    m["command"] = command;
    m["config"] = config.entries;
    ordered_json resolved;
    resolved["grid"] = {{"dim", config.grid.dim}, {"points", config.grid.points}, {"extent", config.grid.extent}};
    resolved["params"] = {{"Lambda", config.params.Lambda}, {"a_mu", config.params.a_mu}};
    ordered_json initial;
    if (!config.initial_path.empty()) {
        initial = {{"kind", "snapshot"}, {"path", config.initial_path}};
    } else {
        initial = {{"kind", to_string(config.initial.kind)},
                   {"amplitude", config.initial.amplitude},
                   {"center", config.initial.center},
                   {"width", config.initial.width},
                   {"wave", config.initial.wave},
                   {"strict", config.strict_initial}};
    }
    resolved["initial"] = initial;
    const StepperConfig& st = config.stepper;
    resolved["stepper"] = {{"scheme", to_string(st.scheme)},
                           {"dt", st.resolve_dt(config.grid, config.params)},
                           {"dt_auto", !st.dt.has_value()},
                           {"cfl", st.cfl},
                           {"rt_floor", st.rt_floor},
                           {"override_rt", st.override_rt},
                           {"t_end", config.evolve.t_end},
                           {"snapshot_stride", config.evolve.snapshot_stride}};
    resolved["solver"] = {{"tol", st.solver.tol}, {"max_iter", st.solver.max_iter}, {"restart", st.solver.restart}};
    resolved["monitor"] = {{"sobolev_s", config.evolve.sobolev_s}};
    resolved["output_dir"] = config.output_dir;
    resolved["suites"] = config.suites;
    m["resolved"] = resolved;
    m["seed"] = config.seed;
    m["threads"] = omp_get_max_threads();
    m["versions"] = {{"muskat", MUSKAT_VERSION},
                     {"fftw", std::string(fftw_version)},
                     {"compiler", __VERSION__},
                     {"cxx_standard", static_cast<long>(__cplusplus)}};
    std::ofstream out(fs::path(dir) / "manifest.json");
    out << m.dump(2) << '\n';
    if (!out) throw std::runtime_error("failed to write manifest in " + dir);
}

ExitCode run_evolve(const SimConfig& config, std::ostream& log) {
    ensure_dir(config.output_dir);
    write_manifest(config, "evolve", config.output_dir);
    const ScalarField f0 = initial_field(config);
    const fs::path dir(config.output_dir);
    auto sink = [&](int step, const InterfaceState& state) {
        char name[32];
        std::snprintf(name, sizeof name, "snap_%05d.bin", step);
        write_binary((dir / name).string(), state.f);
    };
    EvolveResult result;
    try {
        result = evolve(f0, config.params, config.stepper, config.evolve, sink);
    } catch (const SolverError& e) {
        log << "solver failure: " << e.what() << '\n';
        return ExitCode::solver;
    }
    std::ofstream series(dir / "timeseries.csv");
    series << time_series_header() << '\n';
    for (const auto& row : result.series) series << time_series_row(row) << '\n';
    if (!series) throw std::runtime_error("failed to write timeseries.csv");
    log << "steps: " << result.steps << ", t = " << result.final_state.t << '\n';
    if (result.status == EvolveStatus::rt_halt) {
        log << "halted: " << result.halt_reason << '\n';
        return ExitCode::rt_halt;
    }
    return ExitCode::ok;
}

ExitCode run_validate(const SimConfig& config, std::ostream& log) {
    ensure_dir(config.output_dir);
    write_manifest(config, "validate", config.output_dir);
    const ValidationReport report = run_validation(config, config.suites);
    std::ofstream csv(fs::path(config.output_dir) / "validate.csv");
    write_validation_csv(csv, report);
    print_validation_table(log, report);
    return report.passed() ? ExitCode::ok : ExitCode::validation;
}

ExitCode run_field(const SimConfig& config, const std::string& probes_path, std::ostream& out, std::ostream& log) {
    const ScalarField f = initial_field(config);
    const int dim = f.grid().dim;
    const auto rows = read_probe_rows(probes_path, dim + 1);
    const InterfaceGeometry geom(f);
    DensitySolution sol;
    try {
        sol = solve_beta(geom, config.params.a_mu, config.stepper.solver);
    } catch (const SolverError& e) {
        log << "solver failure: " << e.what() << '\n';
        return ExitCode::solver;
    }
    const FieldEvaluator eval(geom, sol.beta);
    out << "id";
    for (int i = 0; i <= dim; ++i) out << ",v" << i;
    out << ",q,side\n";
    out.precision(17);
    for (std::size_t p = 0; p < rows.size(); ++p) {
        ProbePoint probe;
        for (int d = 0; d < dim; ++d) probe.x[d] = rows[p][static_cast<std::size_t>(d)];
        probe.y = rows[p][static_cast<std::size_t>(dim)];
        FieldSample s;
        try {
            s = eval.evaluate(probe);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("probe " + std::to_string(p) + ": " + e.what());
        }
        out << p;
        for (int i = 0; i <= dim; ++i) out << ',' << s.velocity[i];
        out << ',' << s.pressure << ',' << to_string(s.side) << '\n';
    }
    return ExitCode::ok;
}

ExitCode run_rt_check(const SimConfig& config, const std::string& snapshot_path, std::ostream& out,
                      std::ostream& log) {
    ScalarField f;
    try {
        f = read_binary(snapshot_path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    PhiTilde phi;
    try {
        phi = compute_phi_tilde(f, config.params.a_mu, config.stepper.solver);
    } catch (const SolverError& e) {
        log << "solver failure: " << e.what() << '\n';
        return ExitCode::solver;
    }
    const RtMargin margin = rt_margin(phi.value, config.params.a_mu, config.params.Lambda);
    const double signed_min = margin.signed_min(config.params.Lambda);
    const bool ok = margin.holds && signed_min >= config.stepper.rt_floor;
    out.precision(17);
    out << "min,max,signed_min,rt_floor,holds\n";
    out << margin.min << ',' << margin.max << ',' << signed_min << ',' << config.stepper.rt_floor << ','
        << (ok ? "true" : "false") << '\n';
    return ok ? ExitCode::ok : ExitCode::rt_halt;
}

}  // namespace muskat
