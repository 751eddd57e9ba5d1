#pragma once

#include "jumpsens/rng.hpp"

#include <memory>
#include <optional>
#include <vector>

namespace jumpsens {

enum class LevyFamily { CompoundPoissonGaussian, TemperedStable };

enum class MomentRegion {
    Inner, // |z| <= 1
    Outer, // |z| > 1
    Band,  // truncation <= |z| <= 1
    Below, // |z| < truncation
    All,   // |z| > 0
};

struct TemperedStableTables; // inverse-cdf sampling tables, built on construction

// A Levy measure family with C^1 density g on R\{0}. Jumps with |z| below the
// truncation level are dropped together with their compensator; tempered
// stable requires a positive truncation to be simulable.
class LevyMeasureSpec {
  public:
    static LevyMeasureSpec compound_poisson_gaussian(double intensity, double mark_mean,
                                                     double mark_sd, double truncation = 0.0);
    static LevyMeasureSpec tempered_stable(double scale, double stability, double temper_plus,
                                           double temper_minus, double truncation);

    LevyFamily family() const { return family_; }
    double truncation() const { return truncation_; }

    double intensity() const { return intensity_; }
    double mark_mean() const { return mark_mean_; }
    double mark_sd() const { return mark_sd_; }

    double scale() const { return scale_; }
    double stability() const { return stability_; }
    double temper_plus() const { return temper_plus_; }
    double temper_minus() const { return temper_minus_; }

    // |z| beyond which the density mass is negligible (quadrature cutoff)
    double z_cutoff() const;

    const TemperedStableTables* tables() const { return tables_.get(); }

  private:
    LevyMeasureSpec() = default;

    LevyFamily family_ = LevyFamily::CompoundPoissonGaussian;
    double truncation_ = 0.0;
    double intensity_ = 0.0, mark_mean_ = 0.0, mark_sd_ = 1.0;
    double scale_ = 0.0, stability_ = 0.5, temper_plus_ = 1.0, temper_minus_ = 1.0;
    std::shared_ptr<const TemperedStableTables> tables_;
};

struct JumpEvent {
    double time;
    double z;
};

// Atoms of the Poisson random measure on [0,T] x R\{0}, times strictly
// increasing, |z| at or above the generating spec's truncation.
struct JumpTrain {
    std::vector<JumpEvent> events;
    double horizon = 0.0;
};

double levy_density(const LevyMeasureSpec& spec, double z);

// g'(z)/g(z)
double levy_score(const LevyMeasureSpec& spec, double z);

// nu({|z| >= threshold})
double mass_above(const LevyMeasureSpec& spec, double threshold);

// Moment of nu over the region. Signed moments use the odd extension
// sign(z)|z|^p; unsigned use |z|^p. Divergent requests throw std::domain_error.
double nu_moment(const LevyMeasureSpec& spec, double p, MomentRegion region, bool is_signed);

JumpTrain sample_jumps(const LevyMeasureSpec& spec, double horizon, PathRng& rng);

// Fits the growth order of I(rho) = \int (|z/rho|^2 ^ 1) dnu on a decreasing
// rho grid; nullopt when I stays bounded as rho -> 0 (finite activity).
std::optional<double> order_exponent_estimate(const LevyMeasureSpec& spec,
                                              const std::vector<double>& rho_grid);

} // namespace jumpsens
