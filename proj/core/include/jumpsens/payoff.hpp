#pragma once

#include "jumpsens/errors.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace jumpsens {

// One piece of a payoff in the admissible class: alpha * (c0 + c1 x) on the
// interval [lo, hi). Linear growth on each piece, finitely many pieces.
struct PayoffPiece {
    double alpha = 1.0;
    double c0 = 0.0, c1 = 0.0;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
};

class PayoffSpec {
  public:
    enum class Kind { Call, Put, Digital, Constant, Piecewise };

    static PayoffSpec call(double strike) { return PayoffSpec(Kind::Call, strike, 0.0); }
    static PayoffSpec put(double strike) { return PayoffSpec(Kind::Put, strike, 0.0); }
    static PayoffSpec digital(double strike) { return PayoffSpec(Kind::Digital, strike, 0.0); }
    static PayoffSpec constant(double value) { return PayoffSpec(Kind::Constant, 0.0, value); }
    static PayoffSpec piecewise(std::vector<PayoffPiece> pieces) {
        PayoffSpec p(Kind::Piecewise, 0.0, 0.0);
        p.pieces_ = std::move(pieces);
        return p;
    }

    Kind kind() const { return kind_; }
    double strike() const { return strike_; }
    double value() const { return value_; }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::Call: return x > strike_ ? x - strike_ : 0.0;
            case Kind::Put: return x < strike_ ? strike_ - x : 0.0;
            case Kind::Digital: return x > strike_ ? 1.0 : 0.0;
            case Kind::Constant: return value_;
            case Kind::Piecewise: {
                double s = 0.0;
                for (const auto& p : pieces_)
                    if (x >= p.lo && x < p.hi) s += p.alpha * (p.c0 + p.c1 * x);
                return s;
            }
        }
        return 0.0;
    }

  private:
    PayoffSpec(Kind k, double strike, double value) : kind_(k), strike_(strike), value_(value) {}

    Kind kind_;
    double strike_;
    double value_;
    std::vector<PayoffPiece> pieces_;
};

} // namespace jumpsens
