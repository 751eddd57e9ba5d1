#include "jumpsens/quadrature.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <stdexcept>

namespace jumpsens::quad {

namespace {

using GK15 = boost::math::quadrature::gauss_kronrod<double, 15>;

// Recursive bisection on top of a single GK15 panel so that both an absolute
// and a relative error target can be enforced.
double adapt(const std::function<double(double)>& f, double a, double b,
             double abs_tol, double rel_tol, double whole_scale, int depth) {
    double err = 0.0;
    const double panel = GK15::integrate(f, a, b, 0, 0.0, &err);
    if (err <= abs_tol || err <= rel_tol * std::max(std::abs(panel), whole_scale))
        return panel;
    if (depth >= 52 || !(b - a > 0.0))
        return panel;
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * abs_tol, rel_tol, whole_scale, depth + 1) +
           adapt(f, m, b, 0.5 * abs_tol, rel_tol, whole_scale, depth + 1);
}

} // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol, double rel_tol) {
    if (!(a <= b)) throw std::invalid_argument("quad::integrate: a > b");
    if (a == b) return 0.0;
    return adapt(f, a, b, abs_tol, rel_tol, 0.0, 0);
}

double integrate_budget(const std::function<double(double)>& f, double a, double b,
                        int max_nodes, double rel_tol) {
    if (a == b) return 0.0;
    // depth d costs <= 15 * 2^d nodes
    int depth = 0;
    while ((15 << (depth + 1)) <= max_nodes && depth < 8) ++depth;
    double err = 0.0;
    return GK15::integrate(f, a, b, static_cast<unsigned>(depth), rel_tol, &err);
}

} // namespace jumpsens::quad
