#include "jumpsens/path.hpp"

#include "jumpsens/errors.hpp"

#include <algorithm>
#include <cmath>

namespace jumpsens {

DrivingNoise draw_noise(const LevyMeasureSpec& levy, const GridSpec& grid, PathRng& rng) {
    if (!(grid.horizon > 0.0)) throw ConfigError("grid: horizon must be > 0");
    if (grid.n_steps < 1) throw ConfigError("grid: n_steps must be >= 1");

    DrivingNoise noise;
    noise.jumps = sample_jumps(levy, grid.horizon, rng);

    std::vector<double> times;
    times.reserve(grid.n_steps + noise.jumps.events.size() + 2);
    for (std::size_t k = 0; k <= grid.n_steps; ++k)
        times.push_back(grid.horizon * double(k) / double(grid.n_steps));
    times.push_back(0.5 * grid.horizon);
    for (const auto& ev : noise.jumps.events) times.push_back(ev.time);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());

    noise.times = std::move(times);
    noise.jump_at_node.assign(noise.times.size(), -1);
    for (std::size_t j = 0; j < noise.jumps.events.size(); ++j) {
        const auto it = std::lower_bound(noise.times.begin(), noise.times.end(),
                                         noise.jumps.events[j].time);
        noise.jump_at_node[static_cast<std::size_t>(it - noise.times.begin())] =
            static_cast<int>(j);
    }
    noise.half_node = static_cast<std::size_t>(
        std::lower_bound(noise.times.begin(), noise.times.end(), 0.5 * grid.horizon) -
        noise.times.begin());

    noise.dw.resize(noise.times.size() - 1);
    for (std::size_t k = 0; k + 1 < noise.times.size(); ++k)
        noise.dw[k] = rng.normal() * std::sqrt(noise.times[k + 1] - noise.times[k]);
    return noise;
}

LevyMoments make_levy_moments(const LevyMeasureSpec& levy) {
    LevyMoments m;
    m.m1_band = nu_moment(levy, 1.0, MomentRegion::Band, /*is_signed=*/true);
    return m;
}

PathState evolve(const CoefficientModel& model, const std::vector<double>& eps, double x0,
                 const DrivingNoise& noise, const LevyMoments& moments) {
    const std::size_t n_nodes = noise.times.size();
    const std::size_t np = model.n_params();

    PathState path;
    path.times = noise.times;
    path.dw = noise.dw;
    path.jumps = noise.jumps;
    path.half_node = noise.half_node;
    path.horizon = noise.times.back();
    path.n_params = np;
    path.x.resize(n_nodes);
    path.Z.resize(n_nodes);
    path.U.resize(n_nodes);
    path.DZ.resize(n_nodes);
    path.H.resize(n_nodes);
    path.comp_drift.resize(n_nodes - 1);
    path.jump_records.reserve(noise.jumps.events.size());

    double x = x0, Z = 1.0, DZ = 0.0;
    std::array<double, kMaxParams> H{};
    path.x[0] = x;
    path.Z[0] = 1.0;
    path.U[0] = 1.0;
    path.DZ[0] = 0.0;
    path.H[0] = H;

    StepCoeffs sc;
    JumpCoeffs jc;
    for (std::size_t k = 0; k + 1 < n_nodes; ++k) {
        const double dt = noise.times[k + 1] - noise.times[k];
        const double dw = noise.dw[k];
        model.fill_step(eps.data(), x, sc);

        // Ito-corrected drift (the equation's diffusion term is Stratonovich)
        // plus the compensated small-jump drift, coefficients frozen at the
        // step's left endpoint.
        const double comp = -sc.B * moments.m1_band;
        const double drift = sc.a0 + 0.5 * sc.a * sc.dy_a + comp;
        const double drift_y = sc.dy_a0 + 0.5 * (sc.dy_a * sc.dy_a + sc.a * sc.dyy_a) -
                               sc.dy_B * moments.m1_band;
        const double drift_yy = sc.dyy_a0 +
                                0.5 * (3.0 * sc.dy_a * sc.dyy_a + sc.a * sc.dyyy_a) -
                                sc.dyy_B * moments.m1_band;
        path.comp_drift[k] = comp * dt;

        const double grow = 1.0 + drift_y * dt + sc.dy_a * dw;
        const double curv = drift_yy * dt + sc.dyy_a * dw;

        x += drift * dt + sc.a * dw;
        DZ = DZ * grow + Z * Z * curv;
        for (std::size_t p = 0; p < np; ++p) {
            const double drift_eps = sc.deps_a0[p] +
                                     0.5 * (sc.deps_a[p] * sc.dy_a + sc.a * sc.deps_dy_a[p]) -
                                     sc.deps_B[p] * moments.m1_band;
            H[p] = H[p] * grow + drift_eps * dt + sc.deps_a[p] * dw;
        }
        Z *= grow;

        const int jev = noise.jump_at_node[k + 1];
        if (jev >= 0) {
            const double z = noise.jumps.events[static_cast<std::size_t>(jev)].z;
            JumpRecord rec;
            rec.node = k + 1;
            rec.z = z;
            rec.x_pre = x;
            rec.Z_pre = Z;
            rec.DZ_pre = DZ;
            rec.H_pre = H;
            path.jump_records.push_back(rec);

            model.fill_jump(eps.data(), x, jc);
            const double factor = 1.0 + z * jc.dy_B;
            x += z * jc.B;
            DZ = factor * DZ + z * jc.dyy_B * Z * Z;
            for (std::size_t p = 0; p < np; ++p) H[p] = factor * H[p] + z * jc.deps_B[p];
            Z *= factor;
        }

        if (!std::isfinite(x) || !std::isfinite(Z) || !std::isfinite(DZ))
            throw PathAbortError("non-finite path state", k);
        if (!(Z > 0.0)) throw PathAbortError("first variation lost positivity", k);

        path.x[k + 1] = x;
        path.Z[k + 1] = Z;
        path.U[k + 1] = 1.0 / Z;
        path.DZ[k + 1] = DZ;
        path.H[k + 1] = H;
    }
    return path;
}

PathState simulate(const CoefficientModel& model, const LevyMeasureSpec& levy,
                   const GridSpec& grid, const ParamVector& params, double x0, PathRng& rng) {
    const DrivingNoise noise = draw_noise(levy, grid, rng);
    return evolve(model, model.resolve(params), x0, noise, make_levy_moments(levy));
}

PathState resimulate_bumped(const CoefficientModel& model, const LevyMeasureSpec& levy,
                            const GridSpec& grid, const ParamVector& params, double x0,
                            PathRng& rng, const Bump& bump) {
    const DrivingNoise noise = draw_noise(levy, grid, rng);
    double x0b = x0;
    ParamVector pb = params;
    if (bump.target == Bump::Target::InitialState)
        x0b += bump.size;
    else
        pb = params.bumped(bump.param, bump.size);
    return evolve(model, model.resolve(pb), x0b, noise, make_levy_moments(levy));
}

} // namespace jumpsens
