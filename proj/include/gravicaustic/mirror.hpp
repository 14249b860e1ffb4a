#pragma once

#include <cmath>
#include <memory>
#include <string>

#include "gravicaustic/dual.hpp"
#include "gravicaustic/error.hpp"
#include "gravicaustic/expr.hpp"
#include "gravicaustic/vec2.hpp"

namespace gravicaustic {

inline constexpr double kDefaultMirrorHalfWidth = 1e6;

// Height, slope and curvature of the boundary at one point.
struct MirrorDerivs {
    double f;
    double fp;
    double fpp;
};

// Reflecting boundary y = f(x). Built-in shapes carry closed-form
// derivatives; parsed expressions differentiate through dual numbers.
class Mirror {
public:
    enum class Kind { Parabolic, Line, Hyperbolic, Expression };

    static Mirror parabolic(double focal_length) {
        if (!(focal_length > 0.0))
            throw Error("parabolic mirror requires focal length > 0");
        Mirror m(Kind::Parabolic);
        m.param_ = focal_length;
        return m;
    }

    // alpha in radians, in (-pi/2, pi/2).
    static Mirror line(double alpha) {
        if (!(alpha > -M_PI / 2.0 && alpha < M_PI / 2.0))
            throw Error("line mirror requires alpha in (-pi/2, pi/2)");
        Mirror m(Kind::Line);
        m.param_ = alpha;
        return m;
    }

    // f(x) = sqrt(1 + x^2).
    static Mirror hyperbolic() { return Mirror(Kind::Hyperbolic); }

    static Mirror expression(ExprPtr ast, std::string text) {
        Mirror m(Kind::Expression);
        m.ast_ = std::shared_ptr<const ExprNode>(ast.release());
        m.text_ = std::move(text);
        return m;
    }

    Kind kind() const { return kind_; }
    // Mirror focal length (parabolic) or inclination angle (line).
    double param() const { return param_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }

    void set_domain(double x_min, double x_max) {
        if (!(x_min < x_max))
            throw Error("mirror domain requires x_min < x_max");
        x_min_ = x_min;
        x_max_ = x_max;
    }

    bool in_domain(double x) const { return x >= x_min_ && x <= x_max_; }

    double height(double x) const {
        check_domain(x);
        switch (kind_) {
        case Kind::Parabolic: return x * x / (4.0 * param_);
        case Kind::Line: return std::tan(param_) * x;
        case Kind::Hyperbolic: return std::sqrt(1.0 + x * x);
        case Kind::Expression: {
            const double v = ast_->eval(x);
            if (!std::isfinite(v))
                throw EvalError("mirror height non-finite at x=" + std::to_string(x));
            return v;
        }
        }
        throw Error("corrupt mirror kind");
    }

    double slope(double x) const {
        check_domain(x);
        switch (kind_) {
        case Kind::Parabolic: return x / (2.0 * param_);
        case Kind::Line: return std::tan(param_);
        case Kind::Hyperbolic: return x / std::sqrt(1.0 + x * x);
        case Kind::Expression: {
            const Dual1 v = ast_->eval(Dual1::variable(x));
            if (!std::isfinite(v.value) || !std::isfinite(v.deriv))
                throw EvalError("mirror slope non-finite at x=" + std::to_string(x));
            return v.deriv;
        }
        }
        throw Error("corrupt mirror kind");
    }

    // f, f', f'' in one pass (f'' feeds the foci-curve tangent).
    MirrorDerivs derivs2(double x) const {
        check_domain(x);
        switch (kind_) {
        case Kind::Parabolic:
            return {x * x / (4.0 * param_), x / (2.0 * param_), 1.0 / (2.0 * param_)};
        case Kind::Line: {
            const double s = std::tan(param_);
            return {s * x, s, 0.0};
        }
        case Kind::Hyperbolic: {
            const double r = std::sqrt(1.0 + x * x);
            return {r, x / r, 1.0 / (r * r * r)};
        }
        case Kind::Expression: {
            const Dual2 v = ast_->eval(Dual2{Dual1::variable(x), Dual1{1.0, 0.0}});
            const MirrorDerivs d{v.value.value, v.value.deriv, v.deriv.deriv};
            if (!std::isfinite(d.f) || !std::isfinite(d.fp) || !std::isfinite(d.fpp))
                throw EvalError("mirror derivatives non-finite at x=" + std::to_string(x));
            return d;
        }
        }
        throw Error("corrupt mirror kind");
    }

    // Upward unit normal (-f'(x), 1) / sqrt(1 + f'(x)^2).
    Vec2 unit_normal(double x) const {
        const double fp = slope(x);
        const double inv = 1.0 / std::sqrt(1.0 + fp * fp);
        return {-fp * inv, inv};
    }

    // Tangent angle alpha = atan(f'(x)) in (-pi/2, pi/2).
    double tangent_angle(double x) const { return std::atan(slope(x)); }

    std::string describe() const {
        switch (kind_) {
        case Kind::Parabolic: return "parabola:fm=" + std::to_string(param_);
        case Kind::Line: return "line:alpha_deg=" + std::to_string(param_ * 180.0 / M_PI);
        case Kind::Hyperbolic: return "hyperbola";
        case Kind::Expression: return text_;
        }
        return "?";
    }

private:
    explicit Mirror(Kind k) : kind_(k) {}

    void check_domain(double x) const {
        if (!(x >= x_min_ && x <= x_max_))
            throw EvalError("x=" + std::to_string(x) + " outside mirror domain [" +
                            std::to_string(x_min_) + ", " + std::to_string(x_max_) + "]");
    }

    Kind kind_;
    double param_ = 0.0;
    std::shared_ptr<const ExprNode> ast_;
    std::string text_;
    double x_min_ = -kDefaultMirrorHalfWidth;
    double x_max_ = kDefaultMirrorHalfWidth;
};

// Accepts "parabola:fm=<v>", "line:alpha_deg=<v>", "hyperbola", or an
// infix expression in x.
inline Mirror parse_mirror(const std::string& text) {
    auto starts_with = [&](const char* p) { return text.rfind(p, 0) == 0; };
    if (starts_with("parabola:fm="))
        return Mirror::parabolic(std::stod(text.substr(12)));
    if (starts_with("line:alpha_deg="))
        return Mirror::line(std::stod(text.substr(15)) * M_PI / 180.0);
    if (text == "hyperbola")
        return Mirror::hyperbolic();
    return Mirror::expression(parse_expression(text), text);
}

} // namespace gravicaustic
