#include "copulas/shuffle.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>

#include "copulas/format.hpp"

namespace copulas {

namespace {

constexpr double kSideTolerance = 1e-9;

// Right-hand derivative in the primary coordinate p of the mass below q,
// left-hand at p = 1. `pieces` is sorted by x0 and x is the primary axis.
double derivative(std::span<const ShufflePiece> pieces, double p, double q) {
    if (p >= 1.0) {
        const auto& last = pieces.back();
        return (last.descending ? last.y0 < q : last.y1 <= q) ? 1.0 : 0.0;
    }
    auto it = std::upper_bound(pieces.begin(), pieces.end(), p,
                               [](double value, const ShufflePiece& s) { return value < s.x0; });
    const auto& s = *std::prev(it);
    if (s.descending) return s.y1 - (p - s.x0) <= q ? 1.0 : 0.0;
    return s.y0 + (p - s.x0) < q ? 1.0 : 0.0;
}

std::vector<double> breaks(std::span<const ShufflePiece> pieces, double q) {
    std::vector<double> out;
    out.reserve(2 * pieces.size());
    for (std::size_t i = 1; i < pieces.size(); ++i) out.push_back(pieces[i].x0);
    for (const auto& s : pieces) {
        if (s.y0 < q && q < s.y1) {
            out.push_back(s.descending ? s.x0 + (s.y1 - q) : s.x0 + (q - s.y0));
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<ShufflePiece> swap_axes(std::span<const ShufflePiece> pieces) {
    std::vector<ShufflePiece> out;
    out.reserve(pieces.size());
    for (const auto& s : pieces) out.push_back({s.y0, s.y1, s.x0, s.x1, s.descending});
    std::sort(out.begin(), out.end(),
              [](const ShufflePiece& a, const ShufflePiece& b) { return a.x0 < b.x0; });
    return out;
}

void check_tiling(std::span<const ShufflePiece> sorted, const char* axis) {
    if (sorted.empty()) throw std::invalid_argument("shuffle needs at least one piece");
    if (sorted.front().x0 != 0.0 || sorted.back().x1 != 1.0) {
        throw std::invalid_argument(std::string("shuffle pieces do not span [0,1] in ") + axis);
    }
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (!(sorted[i].x1 > sorted[i].x0)) {
            throw std::invalid_argument(std::string("zero-width shuffle piece in ") + axis);
        }
        if (i + 1 < sorted.size() && sorted[i].x1 != sorted[i + 1].x0) {
            throw std::invalid_argument(std::string("shuffle pieces leave a gap in ") + axis);
        }
    }
}

class ShuffleImpl final : public CopulaImpl {
public:
    explicit ShuffleImpl(ShuffleOfM s) : s_(std::move(s)) {}
    CopulaKind kind() const override {
        return s_.straight_alpha() ? CopulaKind::StraightShuffle : CopulaKind::ShuffleOfM;
    }
    double eval(double u, double v) const override { return s_.eval(u, v); }
    double partial1(double u, double v) const override { return s_.partial1(u, v); }
    double partial2(double u, double v) const override { return s_.partial2(u, v); }
    bool analytic_partials() const override { return true; }
    std::vector<double> partial1_breaks(double v) const override { return s_.partial1_breaks(v); }
    std::vector<double> partial2_breaks(double u) const override { return s_.partial2_breaks(u); }
    bool left_invertible() const override { return true; }
    bool right_invertible() const override { return true; }
    std::optional<ShuffleOfM> shuffle() const override { return s_; }
    std::string expression() const override {
        if (auto a = s_.straight_alpha()) return "straight(" + format_shortest(*a) + ")";
        std::string out = "shuffle(";
        const auto cuts = s_.u_cuts();
        for (std::size_t i = 1; i + 1 < cuts.size(); ++i) {
            if (i > 1) out += ",";
            out += format_shortest(cuts[i]);
        }
        out += ";";
        const auto sigma = s_.sigma();
        for (std::size_t i = 0; i < sigma.size(); ++i) {
            if (i > 0) out += ",";
            out += std::to_string(sigma[i]);
        }
        out += ";";
        const auto flips = s_.flips();
        for (std::size_t i = 0; i < flips.size(); ++i) {
            if (i > 0) out += ",";
            out += flips[i] ? "1" : "0";
        }
        return out + ")";
    }

private:
    ShuffleOfM s_;
};

}  // namespace

ShuffleOfM::ShuffleOfM(std::vector<ShufflePiece> pieces) : pieces_(std::move(pieces)) {
    std::sort(pieces_.begin(), pieces_.end(),
              [](const ShufflePiece& a, const ShufflePiece& b) { return a.x0 < b.x0; });
    check_tiling(pieces_, "u");
    for (const auto& s : pieces_) {
        if (std::abs((s.x1 - s.x0) - (s.y1 - s.y0)) > kSideTolerance) {
            throw std::invalid_argument("shuffle piece is not a square");
        }
    }
    transposed_ = swap_axes(pieces_);
    check_tiling(transposed_, "v");
}

ShuffleOfM ShuffleOfM::make(std::vector<double> u_cuts, std::vector<int> sigma,
                            std::vector<bool> descending) {
    if (u_cuts.size() < 2) throw std::invalid_argument("shuffle needs at least two cut points");
    const std::size_t n = u_cuts.size() - 1;
    if (u_cuts.front() != 0.0 || u_cuts.back() != 1.0) {
        throw std::invalid_argument("shuffle cuts must start at 0 and end at 1");
    }
    for (std::size_t i = 1; i <= n; ++i) {
        if (!(u_cuts[i] > u_cuts[i - 1])) {
            throw std::invalid_argument("shuffle cuts must be strictly increasing");
        }
    }
    if (sigma.size() != n || descending.size() != n) {
        throw std::invalid_argument("shuffle permutation and flips need one entry per piece");
    }
    std::vector<std::size_t> inverse(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const int image = sigma[i];
        if (image < 1 || static_cast<std::size_t>(image) > n || inverse[image - 1] != n) {
            throw std::invalid_argument("shuffle sigma is not a permutation of 1..n");
        }
        inverse[image - 1] = i;
    }
    std::vector<double> v_cuts(n + 1, 0.0);
    for (std::size_t j = 1; j <= n; ++j) {
        const std::size_t i = inverse[j - 1];
        v_cuts[j] = v_cuts[j - 1] + (u_cuts[i + 1] - u_cuts[i]);
    }
    v_cuts[n] = 1.0;
    std::vector<ShufflePiece> pieces;
    pieces.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto slot = static_cast<std::size_t>(sigma[i]);
        pieces.push_back({u_cuts[i], u_cuts[i + 1], v_cuts[slot - 1], v_cuts[slot], descending[i]});
    }
    return ShuffleOfM(std::move(pieces));
}

ShuffleOfM ShuffleOfM::from_pieces(std::vector<ShufflePiece> pieces) {
    return ShuffleOfM(std::move(pieces));
}

ShuffleOfM ShuffleOfM::identity() { return ShuffleOfM({{0.0, 1.0, 0.0, 1.0, false}}); }

std::vector<double> ShuffleOfM::u_cuts() const {
    std::vector<double> cuts{0.0};
    for (const auto& s : pieces_) cuts.push_back(s.x1);
    return cuts;
}

std::vector<double> ShuffleOfM::v_cuts() const {
    std::vector<double> cuts{0.0};
    for (const auto& s : transposed_) cuts.push_back(s.x1);
    return cuts;
}

std::vector<int> ShuffleOfM::sigma() const {
    std::vector<int> out;
    out.reserve(pieces_.size());
    for (const auto& s : pieces_) {
        auto it = std::lower_bound(
            transposed_.begin(), transposed_.end(), s.y0,
            [](const ShufflePiece& t, double value) { return t.x0 < value; });
        out.push_back(static_cast<int>(it - transposed_.begin()) + 1);
    }
    return out;
}

std::vector<bool> ShuffleOfM::flips() const {
    std::vector<bool> out;
    out.reserve(pieces_.size());
    for (const auto& s : pieces_) out.push_back(s.descending);
    return out;
}

double ShuffleOfM::eval(double u, double v) const {
    double mass = 0.0;
    for (const auto& s : pieces_) {
        if (s.x0 >= u) break;
        const double width = s.x1 - s.x0;
        const double along_x = std::min(u - s.x0, width);
        double length = 0.0;
        if (s.descending) {
            length = along_x - std::max(s.y1 - v, 0.0);
        } else {
            length = std::min(along_x, v - s.y0);
        }
        if (length > 0.0) mass += length;
    }
    return std::clamp(mass, 0.0, 1.0);
}

double ShuffleOfM::partial1(double u, double v) const { return derivative(pieces_, u, v); }

double ShuffleOfM::partial2(double u, double v) const { return derivative(transposed_, v, u); }

std::vector<double> ShuffleOfM::partial1_breaks(double v) const { return breaks(pieces_, v); }

std::vector<double> ShuffleOfM::partial2_breaks(double u) const {
    return breaks(transposed_, u);
}

ShuffleOfM ShuffleOfM::transposed() const { return ShuffleOfM(transposed_); }

ShuffleOfM straight_shuffle(double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) {
        throw std::invalid_argument("straight shuffle alpha = " + format_shortest(alpha) +
                                    " is outside [0,1]");
    }
    ShuffleOfM s = (alpha == 0.0 || alpha == 1.0)
                       ? ShuffleOfM::identity()
                       : ShuffleOfM({{0.0, 1.0 - alpha, alpha, 1.0, false},
                                     {1.0 - alpha, 1.0, 0.0, alpha, false}});
    s.straight_alpha_ = alpha;
    return s;
}

std::vector<Segment> support_segments(const ShuffleOfM& s) {
    std::vector<Segment> out;
    out.reserve(s.size());
    for (const auto& p : s.pieces()) {
        if (p.descending) {
            out.push_back({{p.x0, p.y1}, {p.x1, p.y0}});
        } else {
            out.push_back({{p.x0, p.y0}, {p.x1, p.y1}});
        }
    }
    return out;
}

Copula to_copula(ShuffleOfM s) { return Copula(std::make_shared<ShuffleImpl>(std::move(s))); }

}  // namespace copulas
