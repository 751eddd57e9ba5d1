#include "jumpsens/weights.hpp"

#include "jumpsens/errors.hpp"
#include "jumpsens/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jumpsens {

namespace {

// g-weighted divergence of the second-order jump integrands F^2 + F^3 at one
// (state, z) point: div_z[g F]/g = d_z F + (g'/g) F. All built-in models have
// b_z linear in z, so d_z of the jump coefficient factors is a derivative of B.
double div_g_F23(double B, double dy_B, double dyy_B, double z, double score, double Z,
                 double DZ) {
    const double zz = z * z;
    const double F2 = -(z * dyy_B * Z * Z + (1.0 + z * dy_B) * DZ) * zz / B;
    const double dzF2 = -((dyy_B * Z * Z + dy_B * DZ) * zz +
                          (z * dyy_B * Z * Z + (1.0 + z * dy_B) * DZ) * 2.0 * z) /
                        B;
    const double F3 = dy_B * (1.0 + z * dy_B) * Z * zz / (B * B);
    const double dzF3 = dy_B * Z * (dy_B * zz + 2.0 * z * (1.0 + z * dy_B)) / (B * B);
    return dzF2 + dzF3 + score * (F2 + F3);
}

struct SegmentSums {
    double z2 = 0.0, K = 0.0, Jmu = 0.0, K_ex = 0.0;
};

double gamma1_from(double L, double J, double K, double A) {
    return (L - J) / A + K / (A * A);
}

} // namespace

PathWeights compute_path_weights(const PathState& path, const CoefficientModel& model,
                                 const std::vector<double>& eps, const LevyMeasureSpec& levy,
                                 const LevyMoments& moments, const WeightRequest& request) {
    const std::size_t last = path.times.size() - 1;
    const std::size_t half = path.half_node;
    const double T = path.times[last] - path.times[0];
    const double Ttilde = path.times[half] - path.times[0];
    const double delta = levy.truncation();
    const WeightMode mode = request.mode;
    const bool need_jumps = mode != WeightMode::DiffusionOnly;
    const bool need_diff = mode != WeightMode::JumpOnly;
    const bool const_coeffs = model.constant_coefficients();
    const bool elliptic_jump = model.elliptic_jump(eps.data());

    std::vector<std::size_t> vega = request.vega_params;
    for (std::size_t p : vega) {
        if (!model.deterministic_f_eps(p))
            throw UnsupportedError("gamma2: parameter '" + model.param_names()[p] +
                                   "' has a stochastic f^eps; use the finite-difference oracle");
    }
    if (request.want_example_forms) {
        if (!const_coeffs)
            throw ConfigError("example-form weights exist for the additive model only");
        const std::size_t s2 = model.param_index("sigma2");
        if (std::find(vega.begin(), vega.end(), s2) == vega.end()) vega.push_back(s2);
    }
    const bool need_F_terms = need_jumps && !const_coeffs && request.want_gamma3;

    // ---- jump sums per segment ----
    SegmentSums seg[2];
    std::array<double, kMaxParams> Jeps_mu{};
    double divF_mu = 0.0;
    if (need_jumps) {
        JumpCoeffs jc;
        for (const auto& rec : path.jump_records) {
            model.fill_jump(eps.data(), rec.x_pre, jc);
            if (!elliptic_jump || jc.B == 0.0)
                throw WeightUndefinedError("jump occurred with degenerate jump coefficient");
            const double z = rec.z;
            const double score = levy_score(levy, z);
            const double v = (1.0 + z * jc.dy_B) * rec.Z_pre * z * z / jc.B;
            const double dzv = rec.Z_pre * (2.0 * z + 3.0 * z * z * jc.dy_B) / jc.B;
            SegmentSums& s = seg[rec.node <= half ? 0 : 1];
            s.z2 += z * z;
            s.K += 2.0 * z * v;
            s.Jmu += score * v + dzv;
            s.K_ex += z / jc.B;
            for (std::size_t p : vega) Jeps_mu[p] += (score * z + 1.0) * jc.deps_B[p] / jc.B;
            if (need_F_terms && rec.node <= half)
                divF_mu += div_g_F23(jc.B, jc.dy_B, jc.dyy_B, z, score, rec.Z_pre, rec.DZ_pre);
        }
    }

    const double time1 = mode == WeightMode::JumpOnly ? 0.0 : Ttilde;
    const double time2 = mode == WeightMode::JumpOnly ? 0.0 : T - Ttilde;
    const double A1 = time1 + seg[0].z2;
    const double A2 = time2 + seg[1].z2;
    if (mode == WeightMode::JumpOnly) {
        if (request.want_gamma1 && !(A1 + A2 > 0.0))
            throw WeightUndefinedError("jump-only weight on a path with no jumps");
        if (request.want_gamma3 && (!(A1 > 0.0) || !(A2 > 0.0)))
            throw WeightUndefinedError("jump-only second-order weight needs jumps in both halves");
    }

    // ---- node sums ----
    const double g_p = (need_jumps && delta > 0.0) ? levy_density(levy, delta) : 0.0;
    const double g_m = (need_jumps && delta > 0.0) ? levy_density(levy, -delta) : 0.0;
    const double zmax = levy.z_cutoff();

    double L[2] = {0.0, 0.0};
    double fluxInt[2] = {0.0, 0.0};
    std::array<double, kMaxParams> fluxEpsInt{}, G{}, Q{}, Leps{};
    double F1W = 0.0, Fhat = 0.0;

    double flux_prev = 0.0;
    std::array<double, kMaxParams> fluxeps_prev{}, f_prev{};

    StepCoeffs sc;
    for (std::size_t k = 0; k <= last; ++k) {
        model.fill_step(eps.data(), path.x[k], sc);

        double flux_cur = 0.0;
        std::array<double, kMaxParams> fluxeps_cur{}, f_cur{};
        if (need_jumps && delta > 0.0) {
            const double d2Z = delta * delta * path.Z[k] / sc.B;
            flux_cur = g_m * (1.0 - delta * sc.dy_B) * d2Z - g_p * (1.0 + delta * sc.dy_B) * d2Z;
            for (std::size_t p : vega) {
                const double r = sc.deps_B[p] / sc.B;
                fluxeps_cur[p] = -delta * r * (g_m + g_p);
            }
        }
        if (need_diff)
            for (std::size_t p : vega) f_cur[p] = path.U[k] * sc.deps_a[p];

        if (k > 0) {
            const double dt_prev = path.times[k] - path.times[k - 1];
            const std::size_t s = k <= half ? 0 : 1;
            fluxInt[s] += 0.5 * (flux_prev + flux_cur) * dt_prev;
            for (std::size_t p : vega) {
                fluxEpsInt[p] += 0.5 * (fluxeps_prev[p] + fluxeps_cur[p]) * dt_prev;
                if (need_diff) G[p] += 0.5 * (f_prev[p] + f_cur[p]) * path.dw[k - 1];
            }
        }

        if (k < last) {
            const double a = sc.a;
            const double dt = path.times[k + 1] - path.times[k];
            const double dw = path.dw[k];
            if (need_diff) {
                if (a == 0.0) throw WeightUndefinedError("diffusion coefficient vanished");
                L[k < half ? 0 : 1] += dw * path.Z[k] / a;
                for (std::size_t p : vega) {
                    Leps[p] += dw * (sc.deps_a0[p] - sc.deps_B[p] * moments.m1_band) / a;
                    Q[p] += path.Z[k] * f_cur[p] / a * dt;
                }
                if (request.want_gamma3 && k < half)
                    F1W += (-sc.dy_a / (a * a) * path.Z[k] * path.Z[k] + path.DZ[k] / a) * dw;
            }
            if (need_F_terms && k < half) {
                const double B = sc.B, dy_B = sc.dy_B, dyy_B = sc.dyy_B;
                const double Zk = path.Z[k], DZk = path.DZ[k];
                auto f = [&](double z) {
                    return div_g_F23(B, dy_B, dyy_B, z, levy_score(levy, z), Zk, DZk) *
                           levy_density(levy, z) / (A1 + z * z);
                };
                double q = quad::integrate_budget(f, delta, zmax, 64);
                q += quad::integrate_budget(f, -zmax, -delta, 64);
                Fhat += dt * q;
            }
        }

        flux_prev = flux_cur;
        fluxeps_prev = fluxeps_cur;
        f_prev = f_cur;
    }

    const double J1 = seg[0].Jmu - fluxInt[0];
    const double J2 = seg[1].Jmu - fluxInt[1];

    PathWeights out;
    if (request.want_gamma1) {
        switch (mode) {
            case WeightMode::Full:
                out.gamma1 = gamma1_from(L[0] + L[1], J1 + J2, seg[0].K + seg[1].K, A1 + A2);
                break;
            case WeightMode::DiffusionOnly:
                out.gamma1 = (L[0] + L[1]) / T;
                break;
            case WeightMode::JumpOnly:
                out.gamma1 = gamma1_from(0.0, J1 + J2, seg[0].K + seg[1].K, A1 + A2);
                break;
        }
    }

    for (std::size_t p : vega) {
        const double R = need_diff ? (L[0] + L[1]) * G[p] / T : 0.0;
        const double Jp = Jeps_mu[p] - fluxEpsInt[p];
        VegaWeight& vw = out.gamma2_detail[p];
        vw.L = Leps[p];
        vw.R = R;
        vw.Q = Q[p] / T;
        vw.J = Jp;
        vw.G = G[p];
        switch (mode) {
            case WeightMode::Full: vw.total = vw.L + vw.R - vw.Q - vw.J; break;
            case WeightMode::DiffusionOnly: vw.total = vw.L + vw.R - vw.Q; break;
            case WeightMode::JumpOnly: vw.total = -vw.J; break;
        }
        out.gamma2[p] = vw.total;
    }

    if (request.want_gamma3) {
        switch (mode) {
            case WeightMode::Full:
            case WeightMode::JumpOnly: {
                const double Lg1 = mode == WeightMode::Full ? L[0] : 0.0;
                const double Lg2 = mode == WeightMode::Full ? L[1] : 0.0;
                const double G1a = gamma1_from(Lg1, J1, seg[0].K, A1);
                const double G1b = gamma1_from(Lg2, J2, seg[1].K, A2);
                out.gamma3 = (G1b + seg[1].K / (A2 * A1)) * G1a +
                             seg[1].K * seg[0].K / (A2 * A1 * A1 * A1) - Fhat;
                double mu_part = divF_mu;
                if (mode == WeightMode::Full) mu_part += F1W;
                out.gamma3 += mu_part / A1;
                break;
            }
            case WeightMode::DiffusionOnly:
                out.gamma3 = L[1] * L[0] / (Ttilde * Ttilde) + F1W / Ttilde;
                break;
        }
    }

    if (request.want_example_forms) {
        const std::size_t s2 = model.param_index("sigma2");
        out.gamma1_ex =
            gamma1_from(L[0] + L[1], J1 + J2, seg[0].K_ex + seg[1].K_ex, A1 + A2);
        const double G1a = gamma1_from(L[0], J1, seg[0].K_ex, A1);
        const double G1b = gamma1_from(L[1], J2, seg[1].K_ex, A2);
        out.gamma3_ex = (G1b + seg[1].K_ex / (A2 * A1)) * G1a +
                        seg[1].K_ex * seg[0].K_ex / (A2 * A1 * A1 * A1);
        out.gamma2_sigma2_ex = Leps[s2] + (J1 + J2);
    }
    return out;
}

SegmentFunctionals segment_functionals(const PathState& path, const CoefficientModel& model,
                                       const ParamVector& params, const LevyMeasureSpec& levy,
                                       double tau, double t) {
    if (!(tau >= 0.0 && tau < t && t <= path.horizon + 1e-12))
        throw ConfigError("segment_functionals: need 0 <= tau < t <= T");
    const double tol = 1e-9 * std::max(1.0, path.horizon);
    auto locate = [&](double s) -> std::size_t {
        const auto it = std::lower_bound(path.times.begin(), path.times.end(), s - tol);
        if (it == path.times.end() || std::abs(*it - s) > tol)
            throw ConfigError("segment_functionals: endpoint is not a grid node");
        return static_cast<std::size_t>(it - path.times.begin());
    };
    const std::size_t i0 = locate(tau), i1 = locate(t);

    const std::vector<double> eps = model.resolve(params);
    const bool elliptic_jump = model.elliptic_jump(eps.data());
    const double delta = levy.truncation();
    const double g_p = delta > 0.0 ? levy_density(levy, delta) : 0.0;
    const double g_m = delta > 0.0 ? levy_density(levy, -delta) : 0.0;

    SegmentFunctionals sf;
    sf.tau = path.times[i0];
    sf.t = path.times[i1];
    sf.A = sf.t - sf.tau;

    JumpCoeffs jc;
    for (const auto& rec : path.jump_records) {
        if (rec.node <= i0 || rec.node > i1) continue;
        model.fill_jump(eps.data(), rec.x_pre, jc);
        if (!elliptic_jump || jc.B == 0.0)
            throw WeightUndefinedError("jump occurred with degenerate jump coefficient");
        const double z = rec.z;
        const double score = levy_score(levy, z);
        const double v = (1.0 + z * jc.dy_B) * rec.Z_pre * z * z / jc.B;
        const double dzv = rec.Z_pre * (2.0 * z + 3.0 * z * z * jc.dy_B) / jc.B;
        sf.A += z * z;
        sf.K += 2.0 * z * v;
        sf.J += score * v + dzv;
    }

    StepCoeffs sc;
    double flux_prev = 0.0;
    for (std::size_t k = i0; k <= i1; ++k) {
        model.fill_step(eps.data(), path.x[k], sc);
        double flux_cur = 0.0;
        if (delta > 0.0) {
            const double d2Z = delta * delta * path.Z[k] / sc.B;
            flux_cur = g_m * (1.0 - delta * sc.dy_B) * d2Z - g_p * (1.0 + delta * sc.dy_B) * d2Z;
        }
        if (k > i0) sf.J -= 0.5 * (flux_prev + flux_cur) * (path.times[k] - path.times[k - 1]);
        if (k < i1) {
            if (sc.a == 0.0) throw WeightUndefinedError("diffusion coefficient vanished");
            sf.L += path.dw[k] * path.Z[k] / sc.a;
        }
        flux_prev = flux_cur;
    }
    return sf;
}

namespace {

PathWeights run_request(const PathState& path, const CoefficientModel& model,
                        const ParamVector& params, const LevyMeasureSpec& levy,
                        const WeightRequest& request) {
    return compute_path_weights(path, model, model.resolve(params), levy,
                                make_levy_moments(levy), request);
}

} // namespace

double gamma1(const PathState& path, const CoefficientModel& model, const ParamVector& params,
              const LevyMeasureSpec& levy, WeightMode mode) {
    WeightRequest req;
    req.mode = mode;
    req.want_gamma1 = true;
    return run_request(path, model, params, levy, req).gamma1;
}

VegaWeight gamma2(const PathState& path, const CoefficientModel& model,
                  const ParamVector& params, const LevyMeasureSpec& levy,
                  const std::string& param, WeightMode mode) {
    WeightRequest req;
    req.mode = mode;
    const std::size_t p = model.param_index(param);
    req.vega_params = {p};
    return run_request(path, model, params, levy, req).gamma2_detail[p];
}

double gamma3(const PathState& path, const CoefficientModel& model, const ParamVector& params,
              const LevyMeasureSpec& levy, WeightMode mode) {
    WeightRequest req;
    req.mode = mode;
    req.want_gamma3 = true;
    return run_request(path, model, params, levy, req).gamma3;
}

SpecialWeights special_weights(const PathState& path, const CoefficientModel& model,
                               const ParamVector& params, const LevyMeasureSpec& levy,
                               WeightMode mode) {
    WeightRequest req;
    req.mode = mode;
    req.want_gamma1 = true;
    req.want_gamma3 = true;
    for (std::size_t p = 0; p < model.n_params(); ++p)
        if (model.deterministic_f_eps(p)) req.vega_params.push_back(p);

    const PathWeights w = run_request(path, model, params, levy, req);
    SpecialWeights out;
    out.gamma1 = w.gamma1;
    out.gamma3 = w.gamma3;
    out.gamma2.assign(model.n_params(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t p : req.vega_params) out.gamma2[p] = w.gamma2[p];
    return out;
}

double geometric_transform_first(double gamma1_log, double spot) {
    if (!(spot > 0.0)) throw std::domain_error("geometric transform needs spot > 0");
    return gamma1_log / spot;
}

double geometric_transform_second(double gamma3_log, double gamma1_log, double spot) {
    if (!(spot > 0.0)) throw std::domain_error("geometric transform needs spot > 0");
    return (gamma3_log - gamma1_log) / (spot * spot);
}

} // namespace jumpsens
