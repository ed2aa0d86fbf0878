#include <charconv>
#include <fstream>
#include <functional>
#include <istream>
#include <set>
#include <sstream>

#include "muskat/config.hpp"
#include "muskat/spectral.hpp"

namespace muskat {
namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> parts;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) parts.push_back(trim(item));
    return parts;
}

class Reader {
public:
    Reader(std::map<std::string, std::string> entries, std::string source)
        : entries_(std::move(entries)), source_(std::move(source)) {}

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    double number(const std::string& key) const {
        const std::string& text = entries_.at(key);
        double value = 0.0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
            fail(key, "expected a number, got '" + text + "'");
        return value;
    }

    long long integer(const std::string& key) const {
        const std::string& text = entries_.at(key);
        long long value = 0;
        const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
        if (res.ec != std::errc{} || res.ptr != text.data() + text.size())
            fail(key, "expected an integer, got '" + text + "'");
        return value;
    }

    bool boolean(const std::string& key) const {
        const std::string& text = entries_.at(key);
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        fail(key, "expected true or false, got '" + text + "'");
    }

    std::vector<double> numbers(const std::string& key) const {
        std::vector<double> out;
        for (const auto& item : split_list(entries_.at(key))) {
            double v = 0.0;
            const auto res = std::from_chars(item.data(), item.data() + item.size(), v);
            if (res.ec != std::errc{} || res.ptr != item.data() + item.size())
                fail(key, "expected a comma-separated list of numbers");
            out.push_back(v);
        }
        return out;
    }

    const std::string& text(const std::string& key) const { return entries_.at(key); }

    [[noreturn]] void fail(const std::string& key, const std::string& why) const {
        throw ConfigError(source_ + ": " + key + ": " + why);
    }

private:
    std::map<std::string, std::string> entries_;
    std::string source_;
};

const std::vector<std::string>& key_list() {
    static const std::vector<std::string> keys{
        "grid.dim", "grid.points", "grid.extent",
        "params.Lambda", "params.a_mu",
        "params.permeability", "params.gravity", "params.rho_plus", "params.rho_minus", "params.mu_plus",
        "params.mu_minus",
        "initial.kind", "initial.amplitude", "initial.center", "initial.width", "initial.wave", "initial.path",
        "initial.strict",
        "stepper.scheme", "stepper.dt", "stepper.cfl", "stepper.rt_floor", "stepper.override_rt", "stepper.t_end",
        "stepper.snapshot_stride",
        "solver.tol", "solver.max_iter", "solver.restart",
        "monitor.sobolev_s",
        "output.dir",
        "validate.suites",
        "run.seed"};
    return keys;
}

}  // namespace

std::vector<std::string> known_config_keys() { return key_list(); }

SimConfig parse_config(std::istream& in, const std::string& source) {
    const std::set<std::string> known(key_list().begin(), key_list().end());
    std::map<std::string, std::string> entries;
    std::string line;
    int number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = source + ":" + std::to_string(number);
        if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known.count(key)) throw ConfigError(where + ": unknown key '" + key + "'");
        if (value.empty()) throw ConfigError(where + ": empty value for '" + key + "'");
        if (!entries.emplace(key, value).second) throw ConfigError(where + ": duplicate key '" + key + "'");
    }

    const Reader r(entries, source);
    SimConfig c;
    c.entries = entries;

    try {
        const int dim = r.has("grid.dim") ? static_cast<int>(r.integer("grid.dim")) : c.grid.dim;
        const int points = r.has("grid.points") ? static_cast<int>(r.integer("grid.points")) : c.grid.points;
        const double extent = r.has("grid.extent") ? r.number("grid.extent") : c.grid.extent;
        c.grid = GridSpec(dim, points, extent);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": grid: " + e.what());
    }

    const bool reduced = r.has("params.Lambda") || r.has("params.a_mu");
    const char* raw_keys[] = {"params.permeability", "params.gravity", "params.rho_plus",
                              "params.rho_minus", "params.mu_plus", "params.mu_minus"};
    bool any_raw = false;
    for (const char* k : raw_keys) any_raw = any_raw || r.has(k);
    if (reduced && any_raw) r.fail("params", "give either Lambda/a_mu or the raw physical parameters, not both");
    try {
        if (any_raw) {
            for (const char* k : raw_keys) {
                if (!r.has(k)) r.fail(k, "missing (all raw physical parameters are required together)");
            }
            c.params = PhysicalParams::from_raw(r.number("params.permeability"), r.number("params.gravity"),
                                                r.number("params.rho_plus"), r.number("params.rho_minus"),
                                                r.number("params.mu_plus"), r.number("params.mu_minus"));
        } else {
            if (r.has("params.Lambda")) c.params.Lambda = r.number("params.Lambda");
            if (r.has("params.a_mu")) c.params.a_mu = r.number("params.a_mu");
            c.params.validate();
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(source + ": params: " + e.what());
    }

    if (r.has("initial.kind")) {
        const std::string& kind = r.text("initial.kind");
        if (kind == "gaussian_bump") c.initial.kind = FieldKind::gaussian_bump;
        else if (kind == "mode") c.initial.kind = FieldKind::mode;
        else if (kind == "zero") c.initial.kind = FieldKind::zero;
        else if (kind == "snapshot") {
            if (!r.has("initial.path")) r.fail("initial.path", "required when initial.kind = snapshot");
            c.initial_path = r.text("initial.path");
        } else r.fail("initial.kind", "expected gaussian_bump, mode, zero or snapshot");
    }
    if (r.has("initial.path") && c.initial_path.empty()) r.fail("initial.path", "only valid with initial.kind = snapshot");
    if (r.has("initial.amplitude")) c.initial.amplitude = r.number("initial.amplitude");
    if (r.has("initial.width")) c.initial.width = r.number("initial.width");
    if (r.has("initial.center")) c.initial.center = r.numbers("initial.center");
    if (r.has("initial.wave")) {
        for (double v : r.numbers("initial.wave")) {
            if (v != static_cast<int>(v)) r.fail("initial.wave", "wave vector entries must be integers");
            c.initial.wave.push_back(static_cast<int>(v));
        }
    }
    if (r.has("initial.strict")) c.strict_initial = r.boolean("initial.strict");

    if (r.has("stepper.scheme")) {
        const std::string& s = r.text("stepper.scheme");
        if (s == "ssp_rk2") c.stepper.scheme = Scheme::ssp_rk2;
        else if (s == "euler") c.stepper.scheme = Scheme::euler;
        else r.fail("stepper.scheme", "expected ssp_rk2 or euler");
    }
    if (r.has("stepper.dt") && r.text("stepper.dt") != "auto") {
        c.stepper.dt = r.number("stepper.dt");
        if (!(*c.stepper.dt > 0.0)) r.fail("stepper.dt", "must be positive or auto");
    }
    if (r.has("stepper.cfl")) c.stepper.cfl = r.number("stepper.cfl");
    if (!(c.stepper.cfl > 0.0)) r.fail("stepper.cfl", "must be positive");
    if (r.has("stepper.rt_floor")) c.stepper.rt_floor = r.number("stepper.rt_floor");
    if (r.has("stepper.override_rt")) c.stepper.override_rt = r.boolean("stepper.override_rt");
    if (r.has("stepper.t_end")) c.evolve.t_end = r.number("stepper.t_end");
    if (!(c.evolve.t_end >= 0.0)) r.fail("stepper.t_end", "must be non-negative");
    if (r.has("stepper.snapshot_stride")) c.evolve.snapshot_stride = static_cast<int>(r.integer("stepper.snapshot_stride"));
    if (c.evolve.snapshot_stride < 1) r.fail("stepper.snapshot_stride", "must be >= 1");

    if (r.has("solver.tol")) c.stepper.solver.tol = r.number("solver.tol");
    if (!(c.stepper.solver.tol > 0.0)) r.fail("solver.tol", "must be positive");
    if (r.has("solver.max_iter")) c.stepper.solver.max_iter = static_cast<int>(r.integer("solver.max_iter"));
    if (c.stepper.solver.max_iter < 1) r.fail("solver.max_iter", "must be >= 1");
    if (r.has("solver.restart")) c.stepper.solver.restart = static_cast<int>(r.integer("solver.restart"));
    if (c.stepper.solver.restart < 1) r.fail("solver.restart", "must be >= 1");

    if (r.has("monitor.sobolev_s")) c.evolve.sobolev_s = r.number("monitor.sobolev_s");
    if (r.has("output.dir")) c.output_dir = r.text("output.dir");
    if (r.has("validate.suites")) c.suites = split_list(r.text("validate.suites"));
    if (r.has("run.seed")) {
        const long long seed = r.integer("run.seed");
        if (seed < 0) r.fail("run.seed", "must be non-negative");
        c.seed = static_cast<std::uint64_t>(seed);
    }
    return c;
}

SimConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path);
    return parse_config(in, path);
}

ScalarField resample(const ScalarField& u, const GridSpec& target) {
    const GridSpec& source = u.grid();
    if (source.dim != target.dim || source.extent != target.extent)
        throw std::invalid_argument("resample needs matching dimension and extent");
    if (source == target) return u;
    const Spectrum in = forward_fft(u);
    Spectrum out(target.size(), 0.0);
    const int limit = std::min(source.points, target.points);
    const double scale = static_cast<double>(target.size()) / static_cast<double>(source.size());
    for (std::size_t i = 0; i < in.size(); ++i) {
        const FrequencyIndex k = frequency_index(source, i);
        bool keep = true;
        std::array<int, kMaxDim> slot{};
        for (int d = 0; d < source.dim; ++d) {
            if (2 * std::abs(k[d]) >= limit) keep = false;
            slot[d] = (k[d] + target.points) % target.points;
        }
        if (keep) out[target.ravel(slot)] = in[i] * scale;
    }
    const Spectrum back = inverse_fft(target, out);
    std::vector<double> values(back.size());
    for (std::size_t i = 0; i < back.size(); ++i) values[i] = back[i].real();
    return ScalarField(target, std::move(values));
}

ScalarField initial_field(const SimConfig& config, const GridSpec& grid) {
    try {
        if (!config.initial_path.empty()) return resample(read_binary(config.initial_path), grid);
        return make_field(grid, config.initial, config.strict_initial);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("initial: ") + e.what());
    } catch (const std::runtime_error& e) {
        throw ConfigError(std::string("initial: ") + e.what());
    }
}

ScalarField initial_field(const SimConfig& config) {
    if (!config.initial_path.empty()) {
        try {
            return read_binary(config.initial_path);
        } catch (const std::runtime_error& e) {
            throw ConfigError(std::string("initial: ") + e.what());
        }
    }
    return initial_field(config, config.grid);
}

}  // namespace muskat
