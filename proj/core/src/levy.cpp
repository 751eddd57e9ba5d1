#include "jumpsens/levy.hpp"

#include "jumpsens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumpsens {

namespace {

constexpr double kPi = 3.14159265358979323846;

double normal_pdf(double x, double mean, double sd) {
    const double t = (x - mean) / sd;
    return std::exp(-0.5 * t * t) / (sd * std::sqrt(2.0 * kPi));
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// \int_a^b z^q e^{-lambda z} dz for 0 <= a < b, on a log grid so the
// integrable z->0 singularity (q > -1) is resolved.
double power_exp_integral(double q, double lambda, double a, double b) {
    if (!(q > -1.0)) throw std::domain_error("nu_moment: divergent integral near z=0");
    if (a >= b) return 0.0;
    const double u_hi = std::log(b);
    double u_lo;
    if (a > 0.0) {
        u_lo = std::log(a);
        // log-substitution only pays off near zero
        if (u_lo > u_hi - 1e-12) return 0.0;
    } else {
        u_lo = u_hi - 46.0 / (q + 1.0);
    }
    auto f = [&](double u) {
        const double z = std::exp(u);
        return std::exp((q + 1.0) * u - lambda * z);
    };
    return quad::integrate(f, u_lo, u_hi);
}

} // namespace

struct TemperedStableTables {
    struct Side {
        std::vector<double> z;     // |z| nodes, increasing from truncation
        std::vector<double> cum;   // cumulative mass from truncation
        std::vector<double> slope; // pchip slopes of z as a function of cum
        double total = 0.0;
    };
    Side plus, minus;
    double total_mass() const { return plus.total + minus.total; }
};

namespace {

// Fritsch-Carlson monotone cubic slopes for strictly increasing (x, y)
std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    std::vector<double> d(n, 0.0);
    if (n < 2) return d;
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = x[i + 1] - x[i];
        delta[i] = (y[i + 1] - y[i]) / h[i];
    }
    if (n == 2) {
        d[0] = d[1] = delta[0];
        return d;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] <= 0.0) {
            d[i] = 0.0;
        } else {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
    auto end_slope = [](double h0, double h1, double d0, double d1) {
        double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
        if (s * d0 <= 0.0)
            s = 0.0;
        else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0))
            s = 3.0 * d0;
        return s;
    };
    d[0] = end_slope(h[0], h[1], delta[0], delta[1]);
    d[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
    return d;
}

double pchip_eval(const std::vector<double>& x, const std::vector<double>& y,
                  const std::vector<double>& d, double xq) {
    if (xq <= x.front()) return y.front();
    if (xq >= x.back()) return y.back();
    const auto it = std::upper_bound(x.begin(), x.end(), xq);
    const std::size_t i = static_cast<std::size_t>(it - x.begin()) - 1;
    const double h = x[i + 1] - x[i];
    const double t = (xq - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y[i] + h10 * h * d[i] + h01 * y[i + 1] + h11 * h * d[i + 1];
}

double ts_one_sided_density(double az, double scale, double beta, double lambda) {
    return scale * std::exp(-lambda * az) * std::pow(az, -1.0 - beta);
}

TemperedStableTables::Side build_side(double scale, double beta, double lambda, double delta,
                                      double cutoff) {
    constexpr std::size_t kNodes = 2048;
    TemperedStableTables::Side side;
    side.z.reserve(kNodes);
    const double llo = std::log(delta), lhi = std::log(cutoff);
    for (std::size_t i = 0; i < kNodes; ++i)
        side.z.push_back(std::exp(llo + (lhi - llo) * double(i) / double(kNodes - 1)));
    side.cum.assign(kNodes, 0.0);
    auto g = [&](double az) { return ts_one_sided_density(az, scale, beta, lambda); };
    for (std::size_t i = 1; i < kNodes; ++i)
        side.cum[i] = side.cum[i - 1] + quad::integrate(g, side.z[i - 1], side.z[i], 1e-14, 1e-10);
    // drop underflowed tail panels so cum stays strictly increasing
    const double total = side.cum.back();
    std::size_t last = kNodes - 1;
    while (last > 1 && !(side.cum[last] - side.cum[last - 1] > total * 1e-15)) --last;
    side.z.resize(last + 1);
    side.cum.resize(last + 1);
    side.total = side.cum.back();
    side.slope = pchip_slopes(side.cum, side.z);
    return side;
}

} // namespace

LevyMeasureSpec LevyMeasureSpec::compound_poisson_gaussian(double intensity, double mark_mean,
                                                           double mark_sd, double truncation) {
    if (!(intensity >= 0.0) || !std::isfinite(intensity))
        throw std::invalid_argument("levy: intensity must be >= 0");
    if (!(mark_sd > 0.0) || !std::isfinite(mark_sd))
        throw std::invalid_argument("levy: mark sd must be > 0");
    if (!(truncation >= 0.0)) throw std::invalid_argument("levy: truncation must be >= 0");
    LevyMeasureSpec s;
    s.family_ = LevyFamily::CompoundPoissonGaussian;
    s.intensity_ = intensity;
    s.mark_mean_ = mark_mean;
    s.mark_sd_ = mark_sd;
    s.truncation_ = truncation;
    return s;
}

LevyMeasureSpec LevyMeasureSpec::tempered_stable(double scale, double stability,
                                                 double temper_plus, double temper_minus,
                                                 double truncation) {
    if (!(scale > 0.0)) throw std::invalid_argument("levy: scale must be > 0");
    if (!(stability > 0.0 && stability < 2.0))
        throw std::invalid_argument("levy: stability must lie in (0,2)");
    if (!(temper_plus > 0.0 && temper_minus > 0.0))
        throw std::invalid_argument("levy: tempering rates must be > 0");
    if (!(truncation > 0.0))
        throw std::invalid_argument(
            "levy: tempered stable has infinite activity, truncation must be > 0");
    LevyMeasureSpec s;
    s.family_ = LevyFamily::TemperedStable;
    s.scale_ = scale;
    s.stability_ = stability;
    s.temper_plus_ = temper_plus;
    s.temper_minus_ = temper_minus;
    s.truncation_ = truncation;
    auto tables = std::make_shared<TemperedStableTables>();
    tables->plus = build_side(scale, stability, temper_plus, truncation, s.z_cutoff());
    tables->minus = build_side(scale, stability, temper_minus, truncation, s.z_cutoff());
    s.tables_ = std::move(tables);
    return s;
}

double LevyMeasureSpec::z_cutoff() const {
    if (family_ == LevyFamily::CompoundPoissonGaussian)
        return std::abs(mark_mean_) + 12.0 * mark_sd_;
    const double lam = std::min(temper_plus_, temper_minus_);
    return std::max(2.0 * truncation_, 46.0 / lam + 1.0);
}

double levy_density(const LevyMeasureSpec& spec, double z) {
    if (z == 0.0) throw std::domain_error("levy_density: z must be nonzero");
    if (spec.family() == LevyFamily::CompoundPoissonGaussian)
        return spec.intensity() * normal_pdf(z, spec.mark_mean(), spec.mark_sd());
    const double lam = z > 0.0 ? spec.temper_plus() : spec.temper_minus();
    return ts_one_sided_density(std::abs(z), spec.scale(), spec.stability(), lam);
}

double levy_score(const LevyMeasureSpec& spec, double z) {
    if (z == 0.0) throw std::domain_error("levy_score: z must be nonzero");
    if (spec.family() == LevyFamily::CompoundPoissonGaussian)
        return -(z - spec.mark_mean()) / (spec.mark_sd() * spec.mark_sd());
    if (z > 0.0) return -spec.temper_plus() - (1.0 + spec.stability()) / z;
    return spec.temper_minus() - (1.0 + spec.stability()) / z;
}

double mass_above(const LevyMeasureSpec& spec, double threshold) {
    if (spec.family() == LevyFamily::CompoundPoissonGaussian) {
        const double s = spec.mark_sd(), mu = spec.mark_mean();
        const double t = std::max(threshold, 0.0);
        return spec.intensity() *
               (normal_cdf((mu - t) / s) + normal_cdf((-t - mu) / s));
    }
    if (!(threshold > 0.0))
        throw std::domain_error("mass_above: threshold must be > 0 for infinite activity");
    const double cut = spec.z_cutoff();
    if (threshold >= cut) return 0.0;
    const double q = -1.0 - spec.stability();
    return spec.scale() * (power_exp_integral(q, spec.temper_plus(), threshold, cut) +
                           power_exp_integral(q, spec.temper_minus(), threshold, cut));
}

namespace {

// Unsigned moment over one side: \int_a^b z^p g(+-z) dz with 0 <= a < b.
double side_moment(const LevyMeasureSpec& spec, double p, double a, double b, bool plus_side) {
    if (a >= b) return 0.0;
    if (spec.family() == LevyFamily::TemperedStable) {
        if (a == 0.0 && !(p > spec.stability()))
            throw std::domain_error("nu_moment: divergent near 0 for tempered stable");
        const double lam = plus_side ? spec.temper_plus() : spec.temper_minus();
        const double q = p - 1.0 - spec.stability();
        return spec.scale() * power_exp_integral(q, lam, a, std::min(b, spec.z_cutoff()));
    }
    if (spec.intensity() == 0.0) return 0.0;
    const double mu = spec.mark_mean(), s = spec.mark_sd();
    const double lo = plus_side ? std::max(a, mu - 12.0 * s) : std::max(a, -mu - 12.0 * s);
    const double hi = std::min(b, plus_side ? mu + 12.0 * s : -mu + 12.0 * s);
    if (lo >= hi) return 0.0;
    auto f = [&](double az) {
        const double z = plus_side ? az : -az;
        return std::pow(az, p) * spec.intensity() * normal_pdf(z, mu, s);
    };
    return quad::integrate(f, lo, hi);
}

void region_bounds(const LevyMeasureSpec& spec, MomentRegion region, double& a, double& b) {
    const double delta = spec.truncation();
    const double cut = spec.z_cutoff();
    switch (region) {
        case MomentRegion::Inner: a = 0.0; b = 1.0; break;
        case MomentRegion::Outer: a = 1.0; b = cut; break;
        case MomentRegion::Band: a = std::min(delta, 1.0); b = 1.0; break;
        case MomentRegion::Below: a = 0.0; b = delta; break;
        case MomentRegion::All: a = 0.0; b = cut; break;
    }
}

} // namespace

double nu_moment(const LevyMeasureSpec& spec, double p, MomentRegion region, bool is_signed) {
    if (!(p >= 1.0)) throw std::domain_error("nu_moment: p must be >= 1");
    double a = 0.0, b = 0.0;
    region_bounds(spec, region, a, b);
    // tempered stable regions never reach inside the truncation except Below,
    // which is exactly the dropped small-jump mass of the untruncated measure
    const double plus = side_moment(spec, p, a, b, true);
    const double minus = side_moment(spec, p, a, b, false);
    return is_signed ? plus - minus : plus + minus;
}

JumpTrain sample_jumps(const LevyMeasureSpec& spec, double horizon, PathRng& rng) {
    if (!(horizon > 0.0)) throw std::invalid_argument("sample_jumps: horizon must be > 0");
    JumpTrain train;
    train.horizon = horizon;
    double mass = 0.0, frac_plus = 0.0;
    if (spec.family() == LevyFamily::TemperedStable) {
        mass = spec.tables()->total_mass();
        frac_plus = mass > 0.0 ? spec.tables()->plus.total / mass : 0.0;
    } else {
        mass = mass_above(spec, std::max(spec.truncation(), 0.0));
    }
    if (!(mass > 0.0)) return train;

    double t = rng.exponential(mass);
    while (t <= horizon) {
        double z = 0.0;
        if (spec.family() == LevyFamily::TemperedStable) {
            const auto& tab = *spec.tables();
            const bool plus = rng.uniform() < frac_plus;
            const auto& side = plus ? tab.plus : tab.minus;
            const double target = rng.uniform() * side.total;
            const double az = pchip_eval(side.cum, side.z, side.slope, target);
            z = plus ? az : -az;
        } else {
            const double delta = spec.truncation();
            int guard = 0;
            do {
                z = spec.mark_mean() + spec.mark_sd() * rng.normal();
                if (++guard > 1000000)
                    throw std::runtime_error("sample_jumps: mark rejection stalled");
            } while (std::abs(z) < delta || z == 0.0);
        }
        train.events.push_back({t, z});
        t += rng.exponential(mass);
    }
    return train;
}

std::optional<double> order_exponent_estimate(const LevyMeasureSpec& spec,
                                              const std::vector<double>& rho_grid) {
    if (rho_grid.size() < 3)
        throw std::invalid_argument("order_exponent_estimate: need at least 3 grid points");
    std::vector<double> lx, ly;
    for (double rho : rho_grid) {
        if (!(rho > 0.0 && rho < 1.0))
            throw std::invalid_argument("order_exponent_estimate: rho grid must lie in (0,1)");
        const double tail = mass_above(spec, rho);
        const double small = side_moment(spec, 2.0, 0.0, rho, true) +
                             side_moment(spec, 2.0, 0.0, rho, false);
        const double I = tail + small / (rho * rho);
        if (!(I > 0.0)) return std::nullopt;
        lx.push_back(std::log(1.0 / rho));
        ly.push_back(std::log(I));
    }
    const std::size_t n = lx.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    if (slope < 0.1) return std::nullopt; // I(rho) stays bounded: finite activity
    return slope;
}

} // namespace jumpsens
