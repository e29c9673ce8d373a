#pragma once

// Gauss-Legendre quadrature with cached nodes, plus order-doubling adaptive
// drivers in one and several dimensions.

#include <complex>
#include <functional>
#include <stdexcept>
#include <vector>

namespace nilorbit {

struct AccuracyError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GLRule {
    std::vector<double> nodes;    // on [-1, 1]
    std::vector<double> weights;
};

// Cached; thread-safe.
const GLRule& gauss_legendre(int order);

using Cplx = std::complex<double>;

struct QuadratureResult {
    Cplx value{0.0, 0.0};
    double error_estimate = 0.0;  // |last - previous|
    int final_order = 0;
    bool converged = false;
};

struct QuadratureOptions {
    double rel_tol = 1e-9;
    double abs_floor = 1e-15;   // converged when |delta| < max(rel*|I|, abs_floor)
    int start_order = 8;
    int max_order = 4096;       // per axis
    bool throw_on_failure = true;
};

QuadratureResult integrate_1d(const std::function<Cplx(double)>& f, double a, double b,
                              const QuadratureOptions& opt = {});

// Tensor Gauss-Legendre over a centered box [-h_0,h_0] x ... with the same
// order on every axis, doubled until convergence.
QuadratureResult integrate_box(const std::function<Cplx(const std::vector<double>&)>& f,
                               const std::vector<double>& half_widths,
                               const QuadratureOptions& opt = {});

// int_{-w}^{w} exp(-1/(1-(x/w)^2)) e^{-2 pi i freq x} dx evaluated entirely in
// quad precision; reaches magnitudes ~1e-30 where double-precision sums drown
// in rounding. reliable_floor reports the accuracy floor of the result.
Cplx bump_fourier_1d(double half_width, double freq, double* reliable_floor = nullptr);

}  // namespace nilorbit
