#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "muskat/spectral.hpp"

namespace muskat {
namespace {

struct FftwBuffer {
    explicit FftwBuffer(std::size_t n)
        : ptr(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
        if (!ptr) throw std::bad_alloc();
    }
    ~FftwBuffer() { fftw_free(ptr); }
    FftwBuffer(const FftwBuffer&) = delete;
    FftwBuffer& operator=(const FftwBuffer&) = delete;
    fftw_complex* ptr;
};

// Planning is not thread-safe in FFTW; execution is. Plans are created once
// per (dim, points, sign) under a lock, always with FFTW_ESTIMATE so the chosen
// algorithm and hence the rounding never vary between runs.
class PlanCache {
public:
    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    fftw_plan get(const GridSpec& grid, int sign) {
        std::lock_guard lock(mutex_);
        auto key = std::make_tuple(grid.dim, grid.points, sign);
        if (auto it = plans_.find(key); it != plans_.end()) return it->second;
        std::array<int, kMaxDim> n{grid.points, grid.points, grid.points};
        FftwBuffer in(grid.size());
        FftwBuffer out(grid.size());
        fftw_plan plan = fftw_plan_dft(grid.dim, n.data(), in.ptr, out.ptr, sign, FFTW_ESTIMATE);
        if (!plan) throw std::runtime_error("FFTW planning failed");
        plans_.emplace(key, plan);
        return plan;
    }

    ~PlanCache() {
        for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
    }

private:
    std::mutex mutex_;
    std::map<std::tuple<int, int, int>, fftw_plan> plans_;
};

Spectrum run(const GridSpec& grid, const std::complex<double>* input, int sign) {
    const std::size_t n = grid.size();
    FftwBuffer in(n);
    FftwBuffer out(n);
    for (std::size_t i = 0; i < n; ++i) {
        in.ptr[i][0] = input[i].real();
        in.ptr[i][1] = input[i].imag();
    }
    fftw_execute_dft(PlanCache::instance().get(grid, sign), in.ptr, out.ptr);
    Spectrum result(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = {out.ptr[i][0], out.ptr[i][1]};
    return result;
}

}  // namespace

Spectrum forward_fft(const ScalarField& u) {
    Spectrum values(u.values().begin(), u.values().end());
    return run(u.grid(), values.data(), FFTW_FORWARD);
}

Spectrum forward_fft(const GridSpec& grid, const Spectrum& values) {
    if (values.size() != grid.size()) throw std::invalid_argument("spectrum size mismatch");
    return run(grid, values.data(), FFTW_FORWARD);
}

Spectrum inverse_fft(const GridSpec& grid, const Spectrum& spectrum) {
    if (spectrum.size() != grid.size()) throw std::invalid_argument("spectrum size mismatch");
    Spectrum result = run(grid, spectrum.data(), FFTW_BACKWARD);
    const double scale = 1.0 / static_cast<double>(grid.size());
    for (auto& v : result) v *= scale;
    return result;
}

FrequencyIndex frequency_index(const GridSpec& grid, std::size_t linear) {
    FrequencyIndex k = grid.unravel(linear);
    for (int d = 0; d < grid.dim; ++d) {
        if (k[d] > grid.points / 2) k[d] -= grid.points;
    }
    return k;
}

bool touches_nyquist(const GridSpec& grid, const FrequencyIndex& k) {
    if (grid.points % 2 != 0) return false;
    for (int d = 0; d < grid.dim; ++d) {
        if (k[d] == grid.points / 2) return true;
    }
    return false;
}

std::array<double, kMaxDim> physical_frequency(const GridSpec& grid, const FrequencyIndex& k) {
    std::array<double, kMaxDim> z{};
    const double unit = 2.0 * std::numbers::pi / grid.extent;
    for (int d = 0; d < grid.dim; ++d) z[d] = unit * k[d];
    return z;
}

ScalarField apply_symbol_table(const ScalarField& u, const Spectrum& table, double* max_imag) {
    const GridSpec& grid = u.grid();
    if (table.size() != grid.size()) throw std::invalid_argument("symbol table size mismatch");
    Spectrum spec = forward_fft(u);
    for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= table[i];
    Spectrum back = inverse_fft(grid, spec);
    std::vector<double> out(back.size());
    double worst = 0.0;
    for (std::size_t i = 0; i < back.size(); ++i) {
        out[i] = back[i].real();
        worst = std::max(worst, std::abs(back[i].imag()));
    }
    if (max_imag) *max_imag = worst;
    return ScalarField(grid, std::move(out));
}

ScalarField apply_spectral_symbol(const ScalarField& u, const SymbolFn& symbol, double* max_imag) {
    const GridSpec& grid = u.grid();
    Spectrum table(grid.size());
    for (std::size_t i = 0; i < table.size(); ++i) {
        const FrequencyIndex k = frequency_index(grid, i);
        table[i] = touches_nyquist(grid, k) ? 0.0 : symbol(physical_frequency(grid, k));
    }
    return apply_symbol_table(u, table, max_imag);
}

}  // namespace muskat
