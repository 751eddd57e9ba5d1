#pragma once

#include <functional>

namespace jumpsens::quad {

// Moment integrals feed compensator drifts, so the defaults sit far below
// Monte Carlo noise.
inline constexpr double kAbsTol = 1e-10;
inline constexpr double kRelTol = 1e-8;

// Adaptive Gauss-Kronrod integration of f over the finite interval [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = kAbsTol, double rel_tol = kRelTol);

// Same, with a bounded evaluation budget (roughly `max_nodes` evaluations).
// Used for the per-step z-quadratures inside the second-order weight.
double integrate_budget(const std::function<double(double)>& f, double a, double b,
                        int max_nodes, double rel_tol = 1e-7);

} // namespace jumpsens::quad
