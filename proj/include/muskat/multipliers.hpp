// Fourier symbols of the frozen-coefficient operators
//   D^{phi,A}_{n,nu}: kernel phi((A.w)^2) (A.w)^n w^nu / (|S^N| |xi|^N),
// which act as the multiplier i m(z) with
//   m(z) = -(pi/2) int_{S^{N-1}} sgn(w.z) K(w) dw.
#pragma once

#include <complex>
#include <functional>
#include <span>
#include <vector>

#include "muskat/grid.hpp"
#include "muskat/kernels.hpp"

namespace muskat {

struct MultiplierSpec {
    OperatorSpec op;           // single-argument profile
    std::vector<double> slope;  // the frozen gradient A, one entry per axis
};

// i m(z). Zero at z = 0, invariant under z -> c z for c > 0.
[[nodiscard]] std::complex<double> symbol_D(const MultiplierSpec& spec, std::span<const double> z);

// m_T(A, z) = pi / (2 |S^N|) int |w.z| phibar((A.w)^2) dw, the real symbol of
// sum_k D^{phibar,A}_{0,e_k} d_k. Equals |z|/2 at A = 0.
[[nodiscard]] double symbol_T(std::span<const double> slope, std::span<const double> z);

// Constant in the two-sided bound eta |z| <= m_T <= |z| / eta.
[[nodiscard]] double symbol_T_bound(std::span<const double> slope);

class MultiplierSymbol {
public:
    using Fn = std::function<std::complex<double>(std::span<const double>)>;

    explicit MultiplierSymbol(Fn fn) : fn_(std::move(fn)) {}
    [[nodiscard]] static MultiplierSymbol identity();
    [[nodiscard]] bool is_identity() const { return !fn_; }
    [[nodiscard]] std::complex<double> operator()(std::span<const double> z) const { return fn_(z); }

private:
    MultiplierSymbol() = default;
    Fn fn_;
};

// FFT application on band-limited u. Throws if the output carries an imaginary
// part above 1e-10 relative to max|u|, i.e. the symbol is not Hermitian.
[[nodiscard]] ScalarField apply_multiplier(const MultiplierSymbol& symbol, const ScalarField& u);

// max over z of |D_{n,nu} - sum_k A_k D_{n-1,nu+e_k}|; needs spec.op.n >= 1.
[[nodiscard]] double reduction_identity_residual(const MultiplierSpec& spec, std::span<const std::vector<double>> zs);

// Symbol-level residual of
//   sum_{i,k} A_k B_i D^{phibar}_{0,e_i} d_k
//     = sum_k ( -2 (1 + |A|^2) sum_i B_i D^{phibar'}_{1,e_i+e_k} - (A.B) D^{phibar}_{0,e_k} ) d_k,
// maximised over z.
[[nodiscard]] double slope_identity_residual(std::span<const double> slope, std::span<const double> tilt,
                                             std::span<const std::vector<double>> zs);

}  // namespace muskat
