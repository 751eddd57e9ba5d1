#include "jumpsens/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace jumpsens {

ParamVector::ParamVector(std::initializer_list<std::pair<std::string, double>> entries) {
    for (const auto& e : entries) set(e.first, e.second);
}

void ParamVector::set(const std::string& name, double value) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                               [](const auto& e, const std::string& n) { return e.first < n; });
    if (it != entries_.end() && it->first == name)
        it->second = value;
    else
        entries_.insert(it, {name, value});
}

double ParamVector::get(const std::string& name) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                               [](const auto& e, const std::string& n) { return e.first < n; });
    if (it == entries_.end() || it->first != name)
        throw ConfigError("missing model parameter '" + name + "'");
    if (!std::isfinite(it->second))
        throw ConfigError("parameter '" + name + "' is not finite");
    return it->second;
}

bool ParamVector::has(const std::string& name) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), name,
                               [](const auto& e, const std::string& n) { return e.first < n; });
    return it != entries_.end() && it->first == name;
}

ParamVector ParamVector::bumped(const std::string& name, double h) const {
    ParamVector out = *this;
    out.set(name, get(name) + h);
    return out;
}

std::size_t CoefficientModel::param_index(const std::string& name) const {
    const auto& names = param_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return i;
    throw ConfigError("model '" + this->name() + "' has no parameter '" + name + "'");
}

std::vector<double> CoefficientModel::resolve(const ParamVector& params) const {
    std::vector<double> eps;
    eps.reserve(n_params());
    for (const auto& n : param_names()) eps.push_back(params.get(n));
    return eps;
}

namespace {

// Example model with constant coefficients: a0 = gamma, a = sigma1, b_z = sigma2 * z.
class AdditiveLevyModel final : public CoefficientModel {
  public:
    explicit AdditiveLevyModel(bool geometric) : geometric_(geometric) {
        name_ = geometric ? "geometric-levy" : "additive-levy";
    }

    const std::string& name() const override { return name_; }
    const std::vector<std::string>& param_names() const override { return names_; }

    void fill_step(const double* eps, double, StepCoeffs& out) const override {
        out = StepCoeffs{};
        out.a0 = eps[0];
        out.a = eps[1];
        out.B = eps[2];
        out.deps_a0[0] = 1.0;
        out.deps_a[1] = 1.0;
        out.deps_B[2] = 1.0;
    }

    void fill_jump(const double* eps, double, JumpCoeffs& out) const override {
        out = JumpCoeffs{};
        out.B = eps[2];
        out.deps_B[2] = 1.0;
    }

    bool elliptic_diffusion(const double* eps) const override { return eps[1] != 0.0; }
    bool elliptic_jump(const double* eps) const override { return eps[2] != 0.0; }
    bool deterministic_f_eps(std::size_t) const override { return true; }
    bool constant_coefficients() const override { return true; }
    bool geometric_exposure() const override { return geometric_; }

  private:
    bool geometric_;
    std::string name_;
    std::vector<std::string> names_{"gamma", "sigma1", "sigma2"};
};

// Nonlinear stress model:
//   a0 = gamma * tanh(y)
//   a  = sigma1 * (1 + eta * sin(y))
//   b_z = sigma2 * z * (1 + eta_tilde * cos(y))
class NonlinearTestModel final : public CoefficientModel {
  public:
    const std::string& name() const override { return name_; }
    const std::vector<std::string>& param_names() const override { return names_; }

    void fill_step(const double* eps, double y, StepCoeffs& out) const override {
        const double gamma = eps[0], sigma1 = eps[1], sigma2 = eps[2];
        const double eta = eps[3], eta_t = eps[4];
        const double th = std::tanh(y), sech2 = 1.0 - th * th;
        const double sy = std::sin(y), cy = std::cos(y);
        out = StepCoeffs{};
        out.a0 = gamma * th;
        out.dy_a0 = gamma * sech2;
        out.dyy_a0 = -2.0 * gamma * th * sech2;
        out.a = sigma1 * (1.0 + eta * sy);
        out.dy_a = sigma1 * eta * cy;
        out.dyy_a = -sigma1 * eta * sy;
        out.dyyy_a = -sigma1 * eta * cy;
        out.B = sigma2 * (1.0 + eta_t * cy);
        out.dy_B = -sigma2 * eta_t * sy;
        out.dyy_B = -sigma2 * eta_t * cy;
        out.deps_a0[0] = th;
        out.deps_a[1] = 1.0 + eta * sy;
        out.deps_a[3] = sigma1 * sy;
        out.deps_dy_a[1] = eta * cy;
        out.deps_dy_a[3] = sigma1 * cy;
        out.deps_B[2] = 1.0 + eta_t * cy;
        out.deps_B[4] = sigma2 * cy;
    }

    void fill_jump(const double* eps, double y, JumpCoeffs& out) const override {
        const double sigma2 = eps[2], eta_t = eps[4];
        const double sy = std::sin(y), cy = std::cos(y);
        out = JumpCoeffs{};
        out.B = sigma2 * (1.0 + eta_t * cy);
        out.dy_B = -sigma2 * eta_t * sy;
        out.dyy_B = -sigma2 * eta_t * cy;
        out.deps_B[2] = 1.0 + eta_t * cy;
        out.deps_B[4] = sigma2 * cy;
    }

    bool elliptic_diffusion(const double* eps) const override {
        return eps[1] != 0.0 && std::abs(eps[3]) < 1.0;
    }
    bool elliptic_jump(const double* eps) const override {
        return eps[2] != 0.0 && std::abs(eps[4]) < 1.0;
    }
    bool deterministic_f_eps(std::size_t param) const override {
        // d_eps a vanishes identically for gamma, sigma2 and eta_tilde
        return param == 0 || param == 2 || param == 4;
    }
    bool constant_coefficients() const override { return false; }

  private:
    std::string name_ = "nonlinear-test";
    std::vector<std::string> names_{"gamma", "sigma1", "sigma2", "eta", "eta_tilde"};
};

} // namespace

std::shared_ptr<const CoefficientModel> make_model(const std::string& name) {
    if (name == "additive-levy") return std::make_shared<AdditiveLevyModel>(false);
    if (name == "geometric-levy") return std::make_shared<AdditiveLevyModel>(true);
    if (name == "nonlinear-test") return std::make_shared<NonlinearTestModel>();
    throw ConfigError("unknown model '" + name + "'");
}

double evaluate(const CoefficientModel& model, CoeffSelector which, const ParamVector& params,
                double y, const double* z, const std::string* param) {
    const std::vector<double> eps = model.resolve(params);
    StepCoeffs sc;
    model.fill_step(eps.data(), y, sc);
    std::size_t p = 0;
    const bool needs_param = which == CoeffSelector::DepsA0 || which == CoeffSelector::DepsA ||
                             which == CoeffSelector::DepsDyA || which == CoeffSelector::DepsB ||
                             which == CoeffSelector::DzDepsB;
    if (needs_param) {
        if (param == nullptr) throw ConfigError("evaluate: selector requires a parameter name");
        p = model.param_index(*param);
    }
    const bool needs_z = which == CoeffSelector::B || which == CoeffSelector::DyB ||
                         which == CoeffSelector::DyyB || which == CoeffSelector::DepsB;
    if (needs_z && z == nullptr) throw ConfigError("evaluate: selector requires z");
    switch (which) {
        case CoeffSelector::A0: return sc.a0;
        case CoeffSelector::DyA0: return sc.dy_a0;
        case CoeffSelector::DyyA0: return sc.dyy_a0;
        case CoeffSelector::DepsA0: return sc.deps_a0[p];
        case CoeffSelector::A: return sc.a;
        case CoeffSelector::DyA: return sc.dy_a;
        case CoeffSelector::DyyA: return sc.dyy_a;
        case CoeffSelector::DyyyA: return sc.dyyy_a;
        case CoeffSelector::DepsA: return sc.deps_a[p];
        case CoeffSelector::DepsDyA: return sc.deps_dy_a[p];
        case CoeffSelector::DyInvA: return -sc.dy_a / (sc.a * sc.a);
        case CoeffSelector::B: return *z * sc.B;
        case CoeffSelector::DyB: return *z * sc.dy_B;
        case CoeffSelector::DzB: return sc.B;
        case CoeffSelector::DzDyB: return sc.dy_B;
        case CoeffSelector::DyyB: return *z * sc.dyy_B;
        case CoeffSelector::DzDyyB: return sc.dyy_B;
        case CoeffSelector::DepsB: return *z * sc.deps_B[p];
        case CoeffSelector::DzDepsB: return sc.deps_B[p];
    }
    throw ConfigError("evaluate: unknown selector");
}

AssumptionReport validate_assumptions(const CoefficientModel& model, const ParamVector& params,
                                      const std::vector<double>& y_grid,
                                      const std::vector<double>& z_grid, double floor) {
    if (y_grid.empty() || z_grid.empty())
        throw ConfigError("validate_assumptions: empty grid");
    const std::vector<double> eps = model.resolve(params);

    double min_jac = std::numeric_limits<double>::infinity(); // |1 + grad_y b|
    double min_a2 = std::numeric_limits<double>::infinity();
    double min_dzb2 = std::numeric_limits<double>::infinity();
    double max_b_origin = 0.0;

    StepCoeffs sc;
    for (double y : y_grid) {
        model.fill_step(eps.data(), y, sc);
        min_a2 = std::min(min_a2, sc.a * sc.a);
        min_dzb2 = std::min(min_dzb2, sc.B * sc.B);
        for (double z : z_grid) {
            min_jac = std::min(min_jac, std::abs(1.0 + z * sc.dy_B));
        }
        max_b_origin = std::max(max_b_origin, std::abs(1e-12 * sc.B));
    }

    AssumptionReport report;
    auto add = [&](const std::string& cond, double observed, double flr, bool pass) {
        report.checks.push_back({cond, observed, flr, pass});
        report.all_pass = report.all_pass && pass;
    };
    add("min |1 + grad_y b| over grid", min_jac, floor, min_jac > floor);
    add("elliptic_diffusion: min a^2 over grid", min_a2, floor, min_a2 > floor);
    add("elliptic_jump: min (d_z b)^2 over grid", min_dzb2, floor, min_dzb2 > floor);
    add("b_z -> 0 as z -> 0", max_b_origin, 1e-6, max_b_origin < 1e-6);
    if (model.name() == "nonlinear-test") {
        const double eta = params.get("eta"), eta_t = params.get("eta_tilde");
        add("|eta| <= 0.2", std::abs(eta), 0.2, std::abs(eta) <= 0.2);
        add("|eta_tilde| <= 0.2", std::abs(eta_t), 0.2, std::abs(eta_t) <= 0.2);
    }
    return report;
}

} // namespace jumpsens
