#pragma once

#include <optional>
#include <span>
#include <vector>

#include "copulas/copula.hpp"

namespace copulas {

struct Point {
    double x = 0.0;
    double y = 0.0;
    bool operator==(const Point&) const = default;
};

struct Segment {
    Point from;
    Point to;
    bool operator==(const Segment&) const = default;
};

/// One square [x0,x1] x [y0,y1] of a shuffle carrying mass x1 - x0 on a
/// diagonal: ascending from (x0,y0) to (x1,y1), or descending from (x0,y1)
/// to (x1,y0).
struct ShufflePiece {
    double x0 = 0.0;
    double x1 = 0.0;
    double y0 = 0.0;
    double y1 = 0.0;
    bool descending = false;
};

/// Shuffle of M: an interval partition of [0,1] in u, a permutation placing
/// each piece in v, and a per-piece diagonal orientation.
class ShuffleOfM {
public:
    /// `u_cuts` is 0 = s0 < ... < sn = 1, `sigma` the permutation as a
    /// 1-based image list, `descending` the per-piece orientation. The v-cuts
    /// are derived so that piece i occupies a square in v-slot sigma(i).
    /// Throws std::invalid_argument on zero-width pieces, a non-permutation or
    /// mismatched lengths.
    static ShuffleOfM make(std::vector<double> u_cuts, std::vector<int> sigma,
                           std::vector<bool> descending);

    /// Builds a shuffle directly from its squares. The x-intervals and the
    /// y-intervals must each tile [0,1] without gaps; every square's sides
    /// must agree to 1e-9.
    static ShuffleOfM from_pieces(std::vector<ShufflePiece> pieces);

    /// M as a one-piece shuffle.
    static ShuffleOfM identity();

    std::size_t size() const { return pieces_.size(); }
    std::span<const ShufflePiece> pieces() const { return pieces_; }
    std::vector<double> u_cuts() const;
    std::vector<double> v_cuts() const;
    /// 1-based image list.
    std::vector<int> sigma() const;
    std::vector<bool> flips() const;

    double eval(double u, double v) const;
    double partial1(double u, double v) const;
    double partial2(double u, double v) const;
    std::vector<double> partial1_breaks(double v) const;
    std::vector<double> partial2_breaks(double u) const;

    ShuffleOfM transposed() const;

    /// Set when the shuffle was built by straight_shuffle().
    std::optional<double> straight_alpha() const { return straight_alpha_; }

private:
    friend ShuffleOfM straight_shuffle(double alpha);

    explicit ShuffleOfM(std::vector<ShufflePiece> pieces);

    std::vector<ShufflePiece> pieces_;      // sorted by x0
    std::vector<ShufflePiece> transposed_;  // same squares with x/y swapped, sorted by y0
    std::optional<double> straight_alpha_;
};

/// Two-piece ascending shuffle supported on (0,a)-(1-a,1) and (1-a,0)-(1,a).
/// alpha in {0,1} yields M. Throws std::invalid_argument outside [0,1].
ShuffleOfM straight_shuffle(double alpha);

/// One diagonal segment per piece, in piece order.
std::vector<Segment> support_segments(const ShuffleOfM& s);

/// Evaluator handle; kind is StraightShuffle for straight shuffles.
Copula to_copula(ShuffleOfM s);

}  // namespace copulas
