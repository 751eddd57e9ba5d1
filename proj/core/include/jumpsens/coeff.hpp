#pragma once

#include "jumpsens/errors.hpp"

#include <array>
#include <memory>
#include <string>
#include <vector>

namespace jumpsens {

inline constexpr std::size_t kMaxParams = 8;

// Named model parameters (the epsilon vector). Entries are kept sorted by
// name; models declare which names they read and in which order.
class ParamVector {
  public:
    ParamVector() = default;
    ParamVector(std::initializer_list<std::pair<std::string, double>> entries);

    void set(const std::string& name, double value);
    double get(const std::string& name) const; // throws ConfigError when absent
    bool has(const std::string& name) const;

    ParamVector bumped(const std::string& name, double h) const;

    const std::vector<std::pair<std::string, double>>& entries() const { return entries_; }

  private:
    std::vector<std::pair<std::string, double>> entries_;
};

// Everything the Euler step needs at (eps, y). Parameter derivatives are
// aligned with CoefficientModel::param_names().
struct StepCoeffs {
    double a0 = 0, dy_a0 = 0, dyy_a0 = 0;
    double a = 0, dy_a = 0, dyy_a = 0, dyyy_a = 0;
    double B = 0, dy_B = 0, dyy_B = 0; // jump coefficient factor, b_z = z * B(eps, y)
    std::array<double, kMaxParams> deps_a0{}, deps_a{}, deps_dy_a{}, deps_B{};
};

// z-factored jump bundle at (eps, y); b_z(eps,y,z) = z * B(eps,y) for every
// built-in model, so every z-derivative reduces to a derivative of B.
struct JumpCoeffs {
    double B = 0, dy_B = 0, dyy_B = 0;
    std::array<double, kMaxParams> deps_B{};
};

enum class CoeffSelector {
    A0, DyA0, DyyA0, DepsA0,
    A, DyA, DyyA, DyyyA, DepsA, DepsDyA, DyInvA,
    B, DyB, DzB, DzDyB, DyyB, DzDyyB, DepsB, DzDepsB,
};

class CoefficientModel {
  public:
    virtual ~CoefficientModel() = default;

    virtual const std::string& name() const = 0;
    virtual const std::vector<std::string>& param_names() const = 0;

    virtual void fill_step(const double* eps, double y, StepCoeffs& out) const = 0;
    virtual void fill_jump(const double* eps, double y, JumpCoeffs& out) const = 0;

    virtual bool elliptic_diffusion(const double* eps) const = 0;
    virtual bool elliptic_jump(const double* eps) const = 0;
    // true when f^eps(s) = U_s * d_eps a is a deterministic function of time
    virtual bool deterministic_f_eps(std::size_t param) const = 0;
    // all y-derivatives vanish identically (Z == 1 is forced downstream)
    virtual bool constant_coefficients() const = 0;
    // terminal exposure is exp(state) rather than the state itself
    virtual bool geometric_exposure() const { return false; }

    std::size_t n_params() const { return param_names().size(); }
    std::size_t param_index(const std::string& name) const; // throws ConfigError

    // eps values aligned with param_names(), pulled from a named vector
    std::vector<double> resolve(const ParamVector& params) const;
};

std::shared_ptr<const CoefficientModel> make_model(const std::string& name);

// Uniform access to the coefficient bundle. z is required exactly for the
// b-selectors, a parameter name exactly for the eps-derivative selectors.
double evaluate(const CoefficientModel& model, CoeffSelector which, const ParamVector& params,
                double y, const double* z = nullptr, const std::string* param = nullptr);

struct AssumptionCheck {
    std::string condition;
    double observed = 0.0;
    double floor = 0.0;
    bool pass = false;
};

struct AssumptionReport {
    std::vector<AssumptionCheck> checks;
    bool all_pass = true;
};

inline constexpr double kDefaultEllipticityFloor = 1e-6;

// Scans min |1 + grad_y b|, min a^2, min (d_z b)^2 and the small-z limit of b
// over the grid; failures are report rows, not exceptions.
AssumptionReport validate_assumptions(const CoefficientModel& model, const ParamVector& params,
                                      const std::vector<double>& y_grid,
                                      const std::vector<double>& z_grid,
                                      double floor = kDefaultEllipticityFloor);

} // namespace jumpsens
