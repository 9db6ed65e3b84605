#pragma once

#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dominative {

// Boundary/payoff data F, evaluable on the width-1 strip around the cylinder
// (the built-in kinds are formula-based and evaluate anywhere).
class PayoffField {
public:
    enum class Kind { constant, linear, from_reference, tabulated, custom };

    using Eval = std::function<double(std::span<const double>, double)>;

    PayoffField() = default;

    static PayoffField constant(double c) {
        return PayoffField(Kind::constant, "constant",
                           [c](std::span<const double>, double) { return c; });
    }

    // F(x, t) = <a, x> + b
    static PayoffField linear(std::vector<double> a, double b) {
        auto av = std::make_shared<std::vector<double>>(std::move(a));
        return PayoffField(Kind::linear, "linear",
                           [av, b](std::span<const double> x, double) {
                               double s = b;
                               for (size_t d = 0; d < av->size(); ++d) s += (*av)[d] * x[d];
                               return s;
                           });
    }

    static PayoffField from_reference(std::string id, Eval eval) {
        return PayoffField(Kind::from_reference, std::move(id), std::move(eval));
    }

    static PayoffField tabulated(std::string id, Eval eval) {
        return PayoffField(Kind::tabulated, std::move(id), std::move(eval));
    }

    static PayoffField custom(std::string id, Eval eval) {
        return PayoffField(Kind::custom, std::move(id), std::move(eval));
    }

    double operator()(std::span<const double> x, double t) const {
        if (!eval_) throw std::logic_error("PayoffField: empty field evaluated");
        return eval_(x, t);
    }

    Kind kind() const { return kind_; }
    const std::string& id() const { return id_; }
    bool valid() const { return static_cast<bool>(eval_); }

private:
    PayoffField(Kind kind, std::string id, Eval eval)
        : kind_(kind), id_(std::move(id)), eval_(std::move(eval)) {}

    Kind kind_ = Kind::constant;
    std::string id_;
    Eval eval_;
};

} // namespace dominative
