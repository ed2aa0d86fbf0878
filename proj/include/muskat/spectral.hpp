// Thin RAII layer over FFTW for grid-shaped complex transforms.
#pragma once

#include <complex>
#include <functional>
#include <vector>

#include "muskat/grid.hpp"

namespace muskat {

using Spectrum = std::vector<std::complex<double>>;

// Unnormalised forward DFT, exponent -2 pi i k.j / M.
[[nodiscard]] Spectrum forward_fft(const ScalarField& u);
[[nodiscard]] Spectrum forward_fft(const GridSpec& grid, const Spectrum& values);
// Normalised inverse (divides by M^N).
[[nodiscard]] Spectrum inverse_fft(const GridSpec& grid, const Spectrum& spectrum);

// Signed frequency index of a linear spectrum slot.
[[nodiscard]] FrequencyIndex frequency_index(const GridSpec& grid, std::size_t linear);
// True when any component sits on the Nyquist frequency of an even grid.
[[nodiscard]] bool touches_nyquist(const GridSpec& grid, const FrequencyIndex& k);
[[nodiscard]] std::array<double, kMaxDim> physical_frequency(const GridSpec& grid,
                                                             const FrequencyIndex& k);

// Multiplies the spectrum of u by symbol(z) and returns the real part of the
// inverse transform; `max_imag` receives the largest discarded imaginary part.
using SymbolFn = std::function<std::complex<double>(const std::array<double, kMaxDim>&)>;
[[nodiscard]] ScalarField apply_spectral_symbol(const ScalarField& u, const SymbolFn& symbol,
                                                double* max_imag = nullptr);
// Same, with the symbol tabulated on the spectrum slots.
[[nodiscard]] ScalarField apply_symbol_table(const ScalarField& u, const Spectrum& table,
                                             double* max_imag = nullptr);

}  // namespace muskat
