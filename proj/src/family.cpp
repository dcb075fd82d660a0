#include "copulas/family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "copulas/format.hpp"
#include "copulas/metrics.hpp"

namespace copulas {

namespace {

constexpr std::size_t kAeLatticeDivisions = 32;
constexpr double kAeTolerance = 1e-12;
constexpr int kClipSamplesPerPiece = 1024;

void check_breakpoints(const std::vector<double>& b) {
    if (b.size() < 2 || b.front() != 0.0 || b.back() != 1.0) {
        throw std::invalid_argument("family breakpoints must run from 0 to 1");
    }
    for (std::size_t i = 1; i < b.size(); ++i) {
        if (!(b[i] > b[i - 1])) {
            throw std::invalid_argument("family breakpoints must be strictly increasing");
        }
    }
}

std::size_t locate_piece(const std::vector<double>& b, double t) {
    auto it = std::upper_bound(b.begin(), b.end(), t);
    auto idx = static_cast<std::size_t>(it - b.begin());
    idx = idx == 0 ? 0 : idx - 1;
    return std::min(idx, b.size() - 2);
}

double horner(const std::vector<double>& c, double t) {
    double acc = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) acc = acc * t + *it;
    return acc;
}

int clip_state(double raw) { return raw > 1.0 ? 1 : (raw < -1.0 ? -1 : 0); }

double fgm_value(double theta, double x, double y) {
    return x * y + theta * x * y * (1.0 - x) * (1.0 - y);
}

}  // namespace

ThetaCurve ThetaCurve::polynomial(std::vector<double> coefficients) {
    return piecewise({0.0, 1.0}, {std::move(coefficients)});
}

ThetaCurve ThetaCurve::piecewise(std::vector<double> breakpoints,
                                 std::vector<std::vector<double>> coefficients) {
    check_breakpoints(breakpoints);
    if (coefficients.size() + 1 != breakpoints.size()) {
        throw std::invalid_argument("theta curve needs one coefficient list per piece");
    }
    for (const auto& c : coefficients) {
        if (c.empty()) throw std::invalid_argument("theta curve piece has no coefficients");
        for (double x : c) {
            if (!std::isfinite(x)) throw std::invalid_argument("theta curve coefficient is not finite");
        }
    }
    ThetaCurve curve;
    curve.breakpoints_ = std::move(breakpoints);
    curve.coefficients_ = std::move(coefficients);
    return curve;
}

double ThetaCurve::operator()(double t) const {
    const double raw = horner(coefficients_[locate_piece(breakpoints_, t)], t);
    return std::clamp(raw, -1.0, 1.0);
}

std::vector<double> ThetaCurve::kinks() const {
    std::vector<double> out(breakpoints_.begin() + 1, breakpoints_.end() - 1);
    for (std::size_t p = 0; p + 1 < breakpoints_.size(); ++p) {
        const auto& c = coefficients_[p];
        const double a = breakpoints_[p];
        const double b = breakpoints_[p + 1];
        double prev_t = a;
        int prev_state = clip_state(horner(c, a));
        for (int k = 1; k <= kClipSamplesPerPiece; ++k) {
            const double t = a + (b - a) * k / kClipSamplesPerPiece;
            const int state = clip_state(horner(c, t));
            if (state != prev_state) {
                double lo = prev_t;
                double hi = t;
                for (int iter = 0; iter < 60; ++iter) {
                    const double mid = 0.5 * (lo + hi);
                    if (clip_state(horner(c, mid)) == prev_state) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                out.push_back(0.5 * (lo + hi));
            }
            prev_t = t;
            prev_state = state;
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string_view to_string(MeasurabilityClass c) {
    return c == MeasurabilityClass::Mc ? "Mc" : "Mu";
}

CopulaFamily CopulaFamily::constant(Copula member) {
    CopulaFamily f;
    f.kind_ = Kind::Constant;
    f.members_.push_back(std::move(member));
    return f;
}

CopulaFamily CopulaFamily::piecewise(std::vector<double> breakpoints, std::vector<Copula> members) {
    check_breakpoints(breakpoints);
    if (members.size() + 1 != breakpoints.size()) {
        throw std::invalid_argument("piecewise family needs one member per interval");
    }
    for (const auto& m : members) {
        const ValidationReport r = validate(m, 8, 1e-9);
        if (!r.passed) {
            throw std::invalid_argument("family member " + m.expression() +
                                        " fails copula validation");
        }
    }
    CopulaFamily f;
    f.kind_ = Kind::PiecewiseConstant;
    f.breakpoints_ = std::move(breakpoints);
    f.members_ = std::move(members);
    return f;
}

CopulaFamily CopulaFamily::fgm_curve(ThetaCurve theta) {
    CopulaFamily f;
    f.kind_ = Kind::ParametricCurve;
    f.kinks_ = theta.kinks();
    f.theta_ = std::move(theta);
    return f;
}

std::size_t CopulaFamily::piece_index(double t) const { return locate_piece(breakpoints_, t); }

double CopulaFamily::eval(double t, double x, double y) const {
    switch (kind_) {
        case Kind::Constant: return members_.front().eval(x, y);
        case Kind::PiecewiseConstant: return members_[piece_index(t)].eval(x, y);
        case Kind::ParametricCurve: return fgm_value(theta_(t), x, y);
    }
    return 0.0;
}

Copula CopulaFamily::member_at(double t) const {
    check_unit(t, "t");
    switch (kind_) {
        case Kind::Constant: return members_.front();
        case Kind::PiecewiseConstant: return members_[piece_index(t)];
        case Kind::ParametricCurve: return fgm(theta_(t));
    }
    return members_.front();
}

std::vector<double> CopulaFamily::breakpoints() const {
    if (kind_ == Kind::ParametricCurve) return kinks_;
    return {breakpoints_.begin() + 1, breakpoints_.end() - 1};
}

std::string CopulaFamily::expression() const {
    switch (kind_) {
        case Kind::Constant: return "const(" + members_.front().expression() + ")";
        case Kind::PiecewiseConstant: {
            std::string out = "pw(";
            for (std::size_t i = 1; i + 1 < breakpoints_.size(); ++i) {
                if (i > 1) out += ",";
                out += format_shortest(breakpoints_[i]);
            }
            out += ":";
            for (std::size_t i = 0; i < members_.size(); ++i) {
                if (i > 0) out += ",";
                out += members_[i].expression();
            }
            return out + ")";
        }
        case Kind::ParametricCurve: {
            std::string out = "fgmcurve(";
            const auto& coeffs = theta_.coefficients();
            for (std::size_t p = 0; p < coeffs.size(); ++p) {
                if (p > 0) out += ";";
                for (std::size_t k = 0; k < coeffs[p].size(); ++k) {
                    if (k > 0) out += ",";
                    out += format_shortest(coeffs[p][k]);
                }
            }
            return out + ")";
        }
    }
    return {};
}

double family_eval(const CopulaFamily& f, double t, double x, double y) {
    check_unit(t, "t");
    check_unit(x, "x");
    check_unit(y, "y");
    return f.eval(t, x, y);
}

MeasurabilityClass measurability_class(const CopulaFamily& f) {
    return f.kind() == CopulaFamily::Kind::ParametricCurve ? MeasurabilityClass::Mu
                                                           : MeasurabilityClass::Mc;
}

bool ae_equal(const CopulaFamily& f, const CopulaFamily& g, int samples) {
    if (samples < 1) throw std::invalid_argument("ae_equal needs at least one sample");
    std::vector<double> cells{0.0, 1.0};
    for (double b : f.breakpoints()) cells.push_back(b);
    for (double b : g.breakpoints()) cells.push_back(b);
    std::sort(cells.begin(), cells.end());
    cells.erase(std::unique(cells.begin(), cells.end()), cells.end());
    for (std::size_t c = 0; c + 1 < cells.size(); ++c) {
        const double a = cells[c];
        const double b = cells[c + 1];
        for (int k = 0; k < samples; ++k) {
            const double t = a + (b - a) * (k + 0.5) / samples;
            const double d = lattice_max_abs(
                [&](double x, double y) { return f.eval(t, x, y) - g.eval(t, x, y); },
                kAeLatticeDivisions).value;
            if (!(d <= kAeTolerance)) return false;
        }
    }
    return true;
}

double family_integral(const CopulaFamily& f, double x, double y, const QuadratureConfig& q) {
    check_unit(x, "x");
    check_unit(y, "y");
    switch (f.kind()) {
        case CopulaFamily::Kind::Constant: return f.members().front().eval(x, y);
        case CopulaFamily::Kind::PiecewiseConstant: {
            const auto& b = f.piece_breakpoints();
            double sum = 0.0;
            for (std::size_t i = 0; i < f.members().size(); ++i) {
                sum += (b[i + 1] - b[i]) * f.members()[i].eval(x, y);
            }
            return sum;
        }
        case CopulaFamily::Kind::ParametricCurve: {
            const auto breaks = f.breakpoints();
            return integrate([&](double t) { return f.eval(t, x, y); }, breaks, q).value;
        }
    }
    return 0.0;
}

}  // namespace copulas
