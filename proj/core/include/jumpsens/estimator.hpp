#pragma once

#include "jumpsens/coeff.hpp"
#include "jumpsens/levy.hpp"
#include "jumpsens/path.hpp"
#include "jumpsens/payoff.hpp"
#include "jumpsens/weights.hpp"

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace jumpsens {

struct EstimatorReport {
    double estimate = 0.0;
    double se = 0.0;
    double ci_lo = 0.0, ci_hi = 0.0; // estimate +- 1.96 se
    std::size_t n_paths = 0, n_excluded = 0, n_steps = 0;
    std::uint64_t seed = 0;
    std::int64_t runtime_ms = 0;
    bool high_variance = false; // se / |estimate| above the flag threshold
};

inline constexpr double kHighVarianceRatio = 0.5;
inline constexpr double kMaxExclusionFraction = 0.01;

enum class GreekKind { Price, Delta, Gamma, Vega };

struct GreekSpec {
    GreekKind kind = GreekKind::Price;
    std::string param; // vega only
};

// How weights are formed. Geometric simulates the log state and applies the
// exponential chain rule; its underlying weight form is resolved from the
// model's ellipticity flags.
enum class RunMode { Full, DiffusionOnly, JumpOnly, Geometric };

std::string to_string(GreekKind kind);
std::string to_string(RunMode mode);

struct McSetup {
    std::shared_ptr<const CoefficientModel> model;
    LevyMeasureSpec levy;
    GridSpec grid;
    ParamVector params;
    double x0 = 0.0; // spot for geometric exposure, initial state otherwise
    PayoffSpec payoff = PayoffSpec::call(0.0);
    RunMode mode = RunMode::Full;
    std::size_t n_paths = 0;
    std::uint64_t seed = 1;
    int workers = 0; // 0: JUMPSENS_WORKERS env or hardware
};

// E[phi(x_T)]
EstimatorReport estimate_expectation(const McSetup& setup);

// E[phi(x_T) Gamma] for each requested greek, all from one path sweep.
std::vector<EstimatorReport> estimate_greeks_weighted(const McSetup& setup,
                                                      const std::vector<GreekSpec>& greeks);

// Example-5.1-form variants for the additive model (reported, not gated):
// delta/gamma with K = sum z/sigma2 and the sign-flipped sigma2 vega.
struct ExampleFormReports {
    EstimatorReport delta, gamma, vega_sigma2;
};
ExampleFormReports estimate_example_forms(const McSetup& setup);

// Common-random-number central differences (second central for gamma), SE
// from the per-path differenced samples.
EstimatorReport estimate_greek_fd(const McSetup& setup, const GreekSpec& greek, double bump);

// Default bump policy: relative for first order, absolute in spot for gamma.
double default_fd_bump(const McSetup& setup, const GreekSpec& greek);

struct OracleGreeks {
    double price = 0.0, delta = 0.0, gamma = 0.0, vega = 0.0;
    double remainder_bound = 0.0; // series truncation bound (merton)
};

// Lognormal closed form for terminal exposure spot * exp(drift T + sigma W_T).
OracleGreeks black_scholes_oracle(double spot, double strike, double horizon, double sigma,
                                  double drift, const PayoffSpec& payoff);

// Poisson-weighted Black-Scholes series. comp_drift is the compensator drift
// applied by the simulated log process (sigma2 * band first moment).
OracleGreeks merton_series_oracle(double spot, double strike, double horizon, double sigma,
                                  double drift, double intensity, double mark_mean,
                                  double mark_sd, double comp_drift, const PayoffSpec& payoff,
                                  int n_terms = 50);

enum class ConvergenceAxis { NPaths, NSteps, TruncationDelta };

struct ConvergenceRow {
    double level = 0.0;
    EstimatorReport report;
    double bias_proxy = 0.0; // |E_n - E_ref| (n_steps axis), small-jump variance (delta axis)
};

struct ConvergenceStudy {
    std::vector<ConvergenceRow> rows;
    double se_slope = 0.0; // log-log slope of SE vs n_paths (n_paths axis only)
};

ConvergenceStudy convergence_study(const McSetup& setup, const GreekSpec& quantity,
                                   ConvergenceAxis axis, const std::vector<double>& levels);

// The weight form backing a run mode, validated against the model's flags.
WeightMode resolve_weight_mode(const CoefficientModel& model, const std::vector<double>& eps,
                               RunMode mode);

} // namespace jumpsens
