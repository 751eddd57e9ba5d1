#pragma once

#include "jumpsens/coeff.hpp"
#include "jumpsens/levy.hpp"
#include "jumpsens/path.hpp"

#include <array>
#include <string>
#include <vector>

namespace jumpsens {

// Which ellipticity channel backs the integration-by-parts. Full requires
// both the diffusion and the jump coefficient to be elliptic; the reduced
// modes implement the special-case formulas that ignore the other channel.
enum class WeightMode { Full, DiffusionOnly, JumpOnly };

// Building blocks of every weight over a sub-interval [tau, t]:
//   L = \int dW a^{-1} Z,  A = (t - tau) + sum z_i^2,
//   K = sum 2 z v(s_i, z_i),  J = sum psi(s_i, z_i) - compensator,
// with v_s(z) = (d_z b)^{-1} (1 + grad_y b) Z_s z^2 and
// psi = score * v + d_z v. The compensator is the exact boundary flux
// g(-delta) v(-delta) - g(delta) v(delta), integrated in s by trapezoid.
struct SegmentFunctionals {
    double tau = 0.0, t = 0.0;
    double L = 0.0, J = 0.0, K = 0.0, A = 0.0;
};

SegmentFunctionals segment_functionals(const PathState& path, const CoefficientModel& model,
                                       const ParamVector& params, const LevyMeasureSpec& levy,
                                       double tau, double t);

struct VegaWeight {
    double L = 0.0, R = 0.0, Q = 0.0, J = 0.0;
    double G = 0.0; // terminal value of \int f^eps o dW
    double total = 0.0;
};

// First-order weight: E[phi(x_T) Gamma1] estimates grad_x E[phi(x_T)].
double gamma1(const PathState& path, const CoefficientModel& model, const ParamVector& params,
              const LevyMeasureSpec& levy, WeightMode mode = WeightMode::Full);

// Parameter weight Gamma2 = L + R - Q - J for one named parameter. Parameters
// whose diffusion derivative makes f^eps stochastic are rejected with
// UnsupportedError; use the FD oracle for those.
VegaWeight gamma2(const PathState& path, const CoefficientModel& model,
                  const ParamVector& params, const LevyMeasureSpec& levy,
                  const std::string& param, WeightMode mode = WeightMode::Full);

// Second-order weight with the segment split at T/2.
double gamma3(const PathState& path, const CoefficientModel& model, const ParamVector& params,
              const LevyMeasureSpec& levy, WeightMode mode = WeightMode::Full);

struct SpecialWeights {
    double gamma1 = 0.0;
    std::vector<double> gamma2; // aligned with model.param_names(); NaN when unsupported
    double gamma3 = 0.0;
};

SpecialWeights special_weights(const PathState& path, const CoefficientModel& model,
                               const ParamVector& params, const LevyMeasureSpec& levy,
                               WeightMode mode);

// Chain-rule transform for exponential exposure x_t = x e^{X_t}:
// grad_x = Gamma1 / x and grad_x^2 = (Gamma3 - Gamma1) / x^2 at X = log x.
// Parameter weights pass through unchanged.
double geometric_transform_first(double gamma1_log, double spot);
double geometric_transform_second(double gamma3_log, double gamma1_log, double spot);

// ---- bulk interface used by the Monte Carlo estimator ----

struct WeightRequest {
    WeightMode mode = WeightMode::Full;
    bool want_gamma1 = false;
    bool want_gamma3 = false;
    std::vector<std::size_t> vega_params; // indices into model.param_names()
    // Example-5.1-form variants (constant-coefficient models only), reported
    // alongside the theorem forms by oracle comparisons.
    bool want_example_forms = false;
};

struct PathWeights {
    double gamma1 = 0.0;
    double gamma3 = 0.0;
    std::array<double, kMaxParams> gamma2{};
    std::array<VegaWeight, kMaxParams> gamma2_detail{};
    double gamma1_ex = 0.0, gamma3_ex = 0.0, gamma2_sigma2_ex = 0.0;
};

// Single pass over one path computing every requested weight.
PathWeights compute_path_weights(const PathState& path, const CoefficientModel& model,
                                 const std::vector<double>& eps, const LevyMeasureSpec& levy,
                                 const LevyMoments& moments, const WeightRequest& request);

} // namespace jumpsens
