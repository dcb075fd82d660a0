#include "copulas/copula.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "copulas/format.hpp"
#include "copulas/shuffle.hpp"

namespace copulas {

namespace {

double clamp_unit(double x) { return std::clamp(x, 0.0, 1.0); }

// Finite difference on the raw evaluator; arguments already lie in [0,1].
double fd_partial1(const CopulaImpl& c, double u, double v, double h) {
    if (u < h) return clamp_unit((c.eval(std::min(u + h, 1.0), v) - c.eval(u, v)) / h);
    if (u > 1.0 - h) return clamp_unit((c.eval(u, v) - c.eval(std::max(u - h, 0.0), v)) / h);
    return clamp_unit((c.eval(u + h, v) - c.eval(u - h, v)) / (2.0 * h));
}

double fd_partial2(const CopulaImpl& c, double u, double v, double h) {
    if (v < h) return clamp_unit((c.eval(u, std::min(v + h, 1.0)) - c.eval(u, v)) / h);
    if (v > 1.0 - h) return clamp_unit((c.eval(u, v) - c.eval(u, std::max(v - h, 0.0))) / h);
    return clamp_unit((c.eval(u, v + h) - c.eval(u, v - h)) / (2.0 * h));
}

class FrechetMImpl final : public CopulaImpl {
public:
    CopulaKind kind() const override { return CopulaKind::FrechetM; }
    double eval(double u, double v) const override { return std::min(u, v); }
    double partial1(double u, double v) const override {
        if (u < 1.0) return u < v ? 1.0 : 0.0;
        return v >= 1.0 ? 1.0 : 0.0;
    }
    double partial2(double u, double v) const override { return partial1(v, u); }
    bool analytic_partials() const override { return true; }
    std::vector<double> partial1_breaks(double v) const override { return {v}; }
    std::vector<double> partial2_breaks(double u) const override { return {u}; }
    bool left_invertible() const override { return true; }
    bool right_invertible() const override { return true; }
    std::optional<ShuffleOfM> shuffle() const override { return ShuffleOfM::identity(); }
    std::string expression() const override { return "M"; }
};

class FrechetWImpl final : public CopulaImpl {
public:
    CopulaKind kind() const override { return CopulaKind::FrechetW; }
    double eval(double u, double v) const override { return std::max(u + v - 1.0, 0.0); }
    double partial1(double u, double v) const override {
        if (u < 1.0) return u + v >= 1.0 ? 1.0 : 0.0;
        return v > 0.0 ? 1.0 : 0.0;
    }
    double partial2(double u, double v) const override { return partial1(v, u); }
    bool analytic_partials() const override { return true; }
    std::vector<double> partial1_breaks(double v) const override { return {1.0 - v}; }
    std::vector<double> partial2_breaks(double u) const override { return {1.0 - u}; }
    bool left_invertible() const override { return true; }
    bool right_invertible() const override { return true; }
    std::optional<ShuffleOfM> shuffle() const override {
        return ShuffleOfM::make({0.0, 1.0}, {1}, {true});
    }
    std::string expression() const override { return "W"; }
};

class ProductImpl final : public CopulaImpl {
public:
    CopulaKind kind() const override { return CopulaKind::ProductPi; }
    double eval(double u, double v) const override { return u * v; }
    double partial1(double, double v) const override { return v; }
    double partial2(double u, double) const override { return u; }
    bool analytic_partials() const override { return true; }
    std::string expression() const override { return "Pi"; }
};

class FGMImpl final : public CopulaImpl {
public:
    explicit FGMImpl(FGMParams p) : theta_(p.theta) {}
    CopulaKind kind() const override { return CopulaKind::FGM; }
    double eval(double u, double v) const override {
        return u * v + theta_ * u * v * (1.0 - u) * (1.0 - v);
    }
    double partial1(double u, double v) const override {
        return v + theta_ * v * (1.0 - v) * (1.0 - 2.0 * u);
    }
    double partial2(double u, double v) const override {
        return u + theta_ * u * (1.0 - u) * (1.0 - 2.0 * v);
    }
    bool analytic_partials() const override { return true; }
    std::string expression() const override { return "fgm(" + format_shortest(theta_) + ")"; }

private:
    double theta_;
};

class TransposeImpl final : public CopulaImpl {
public:
    explicit TransposeImpl(Copula inner) : inner_(std::move(inner)) {}
    CopulaKind kind() const override { return CopulaKind::Transpose; }
    double eval(double u, double v) const override { return inner_.impl().eval(v, u); }
    double partial1(double u, double v) const override { return inner_.impl().partial2(v, u); }
    double partial2(double u, double v) const override { return inner_.impl().partial1(v, u); }
    bool analytic_partials() const override { return inner_.analytic_partials(); }
    std::vector<double> partial1_breaks(double v) const override { return inner_.partial2_breaks(v); }
    std::vector<double> partial2_breaks(double u) const override { return inner_.partial1_breaks(u); }
    bool left_invertible() const override { return inner_.right_invertible(); }
    bool right_invertible() const override { return inner_.left_invertible(); }
    std::optional<ShuffleOfM> shuffle() const override {
        auto s = inner_.as_shuffle();
        if (!s) return std::nullopt;
        return s->transposed();
    }
    std::string expression() const override { return "t(" + inner_.expression() + ")"; }
    const Copula& inner() const { return inner_; }

private:
    Copula inner_;
};

class ComputedImpl final : public CopulaImpl {
public:
    ComputedImpl(std::string expression, std::function<double(double, double)> f, bool left,
                 bool right)
        : expression_(std::move(expression)), f_(std::move(f)), left_(left), right_(right) {}
    CopulaKind kind() const override { return CopulaKind::Computed; }
    double eval(double u, double v) const override { return clamp_unit(f_(u, v)); }
    bool left_invertible() const override { return left_; }
    bool right_invertible() const override { return right_; }
    std::string expression() const override { return expression_; }

private:
    std::string expression_;
    std::function<double(double, double)> f_;
    bool left_;
    bool right_;
};

}  // namespace

std::string_view to_string(CopulaKind kind) {
    switch (kind) {
        case CopulaKind::FrechetM: return "FrechetM";
        case CopulaKind::FrechetW: return "FrechetW";
        case CopulaKind::ProductPi: return "ProductPi";
        case CopulaKind::FGM: return "FGM";
        case CopulaKind::ShuffleOfM: return "ShuffleOfM";
        case CopulaKind::StraightShuffle: return "StraightShuffle";
        case CopulaKind::Transpose: return "Transpose";
        case CopulaKind::Grid: return "Grid";
        case CopulaKind::Computed: return "Computed";
    }
    return "unknown";
}

void check_unit(double x, const char* what) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::domain_error(std::string(what) + " = " + format_shortest(x) +
                                " is outside [0,1]");
    }
}

Rectangle Rectangle::make(double x1, double x2, double y1, double y2) {
    for (double c : {x1, x2, y1, y2}) {
        if (!(c >= 0.0 && c <= 1.0)) throw std::invalid_argument("rectangle corner outside [0,1]");
    }
    if (x1 > x2 || y1 > y2) throw std::invalid_argument("rectangle corners out of order");
    return Rectangle{x1, x2, y1, y2};
}

FGMParams FGMParams::make(double theta) {
    if (!(std::abs(theta) <= 1.0)) {
        throw std::invalid_argument("FGM parameter theta = " + format_shortest(theta) +
                                    " is outside [-1,1]");
    }
    return FGMParams{theta};
}

double CopulaImpl::partial1(double u, double v) const {
    return fd_partial1(*this, u, v, kFiniteDifferenceStep);
}

double CopulaImpl::partial2(double u, double v) const {
    return fd_partial2(*this, u, v, kFiniteDifferenceStep);
}

std::optional<ShuffleOfM> CopulaImpl::shuffle() const { return std::nullopt; }

Copula::Copula(std::shared_ptr<const CopulaImpl> impl) : impl_(std::move(impl)) {
    if (!impl_) throw std::invalid_argument("null copula implementation");
}

double Copula::eval(double u, double v) const {
    check_unit(u, "u");
    check_unit(v, "v");
    return impl_->eval(u, v);
}

double Copula::partial1(double u, double v) const {
    check_unit(u, "u");
    check_unit(v, "v");
    return clamp_unit(impl_->partial1(u, v));
}

double Copula::partial2(double u, double v) const {
    check_unit(u, "u");
    check_unit(v, "v");
    return clamp_unit(impl_->partial2(u, v));
}

std::optional<ShuffleOfM> Copula::as_shuffle() const { return impl_->shuffle(); }

Copula frechet_m() {
    static const Copula m(std::make_shared<FrechetMImpl>());
    return m;
}

Copula frechet_w() {
    static const Copula w(std::make_shared<FrechetWImpl>());
    return w;
}

Copula product_pi() {
    static const Copula pi(std::make_shared<ProductImpl>());
    return pi;
}

Copula fgm(double theta) { return fgm(FGMParams::make(theta)); }

Copula fgm(FGMParams params) {
    params = FGMParams::make(params.theta);
    return Copula(std::make_shared<FGMImpl>(params));
}

Copula transpose(const Copula& c) {
    if (const auto* t = dynamic_cast<const TransposeImpl*>(&c.impl())) return t->inner();
    return Copula(std::make_shared<TransposeImpl>(c));
}

Copula make_computed(std::string expression, std::function<double(double, double)> evaluator,
                     bool left_invertible, bool right_invertible) {
    return Copula(std::make_shared<ComputedImpl>(std::move(expression), std::move(evaluator),
                                                 left_invertible, right_invertible));
}

double volume(const Copula& c, const Rectangle& r) {
    return c.eval(r.x2, r.y2) - c.eval(r.x2, r.y1) - c.eval(r.x1, r.y2) + c.eval(r.x1, r.y1);
}

double finite_difference_partial1(const Copula& c, double u, double v, double h) {
    check_unit(u, "u");
    check_unit(v, "v");
    return fd_partial1(c.impl(), u, v, h);
}

double finite_difference_partial2(const Copula& c, double u, double v, double h) {
    check_unit(u, "u");
    check_unit(v, "v");
    return fd_partial2(c.impl(), u, v, h);
}

}  // namespace copulas
