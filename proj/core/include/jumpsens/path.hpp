#pragma once

#include "jumpsens/coeff.hpp"
#include "jumpsens/levy.hpp"
#include "jumpsens/rng.hpp"

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace jumpsens {

struct GridSpec {
    double horizon = 1.0;     // years
    std::size_t n_steps = 1;  // uniform base grid, merged with jump times
};

// One realization of the driving noise: the jump train plus Brownian
// increments on the merged grid. Re-simulation for common-random-number
// oracles replays this object bit-exactly.
struct DrivingNoise {
    JumpTrain jumps;
    std::vector<double> times;     // merged nodes, times[0] = 0, back() = horizon
    std::vector<int> jump_at_node; // jump event index landing at node i, else -1
    std::vector<double> dw;        // Brownian increment per step (times.size()-1)
    std::size_t half_node = 0;     // node index of horizon/2
};

DrivingNoise draw_noise(const LevyMeasureSpec& levy, const GridSpec& grid, PathRng& rng);

// Band moments of the Levy measure consumed by the compensator drift;
// computed once per run, not per path.
struct LevyMoments {
    double m1_band = 0.0; // \int_{delta <= |z| <= 1} z dnu
};

LevyMoments make_levy_moments(const LevyMeasureSpec& levy);

struct JumpRecord {
    std::size_t node = 0; // node index at which the jump was applied
    double z = 0.0;
    double x_pre = 0.0, Z_pre = 0.0, DZ_pre = 0.0;
    std::array<double, kMaxParams> H_pre{};
};

// One simulated path of (x, Z = grad_x x, U = Z^{-1}, H = d_eps x, DZ = grad_x Z)
// on the merged grid. Values at jump nodes are post-jump; pre-jump snapshots
// live in jump_records.
struct PathState {
    std::vector<double> times;
    std::vector<double> x, Z, U, DZ;
    std::vector<std::array<double, kMaxParams>> H;
    std::size_t n_params = 0;

    std::vector<double> dw;
    std::vector<double> comp_drift; // compensator drift applied per step
    JumpTrain jumps;
    std::vector<JumpRecord> jump_records;
    std::size_t half_node = 0;
    double horizon = 0.0;

    double x_T() const { return x.back(); }
};

// Euler scheme between jumps with the Stratonovich drift correction folded in
// analytically; Z, H, DZ advance as the exact x0/eps derivatives of the
// discrete x update, and jumps apply the flow's jump relations.
PathState evolve(const CoefficientModel& model, const std::vector<double>& eps, double x0,
                 const DrivingNoise& noise, const LevyMoments& moments);

PathState simulate(const CoefficientModel& model, const LevyMeasureSpec& levy,
                   const GridSpec& grid, const ParamVector& params, double x0, PathRng& rng);

struct Bump {
    enum class Target { InitialState, Parameter };
    Target target = Target::InitialState;
    std::string param;
    double size = 0.0;
};

// Replays the same stream seed bit-exactly; only the bumped quantity differs.
PathState resimulate_bumped(const CoefficientModel& model, const LevyMeasureSpec& levy,
                            const GridSpec& grid, const ParamVector& params, double x0,
                            PathRng& rng, const Bump& bump);

} // namespace jumpsens
