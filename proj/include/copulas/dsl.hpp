#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "copulas/copula.hpp"
#include "copulas/family.hpp"
#include "copulas/product.hpp"
#include "copulas/quadrature.hpp"

namespace copulas {

struct FamilyExpr;

struct Expr {
    enum class Kind { M, W, Pi, Fgm, Straight, Shuffle, Grid, Transpose, Star, StarC };
    Kind kind = Kind::M;
    /// theta, alpha, or the interior shuffle cuts.
    std::vector<double> numbers;
    std::vector<int> sigma;
    std::vector<int> flips;
    std::string path;
    std::vector<Expr> children;
    /// Exactly one entry for StarC.
    std::vector<FamilyExpr> family;

    friend bool operator==(const Expr&, const Expr&);
};

struct FamilyExpr {
    enum class Kind { Const, Piecewise, FgmCurve };
    Kind kind = Kind::Const;
    /// Interior breakpoints for Piecewise, polynomial coefficients for FgmCurve.
    std::vector<double> numbers;
    std::vector<Expr> members;

    friend bool operator==(const FamilyExpr&, const FamilyExpr&);
};

class DslError : public std::runtime_error {
public:
    enum class Kind { Syntax, Semantic };
    DslError(Kind kind, std::size_t column, const std::string& message);
    Kind kind() const { return kind_; }
    /// 1-based.
    std::size_t column() const { return column_; }

private:
    Kind kind_;
    std::size_t column_;
};

/// A grid file named in an expression could not be opened.
class InputFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Expr parse(std::string_view text);
FamilyExpr parse_family(std::string_view text);

/// Canonical form: no whitespace, shortest round-trip numbers, interior
/// breakpoints for pw.
std::string print(const Expr& e);
std::string print(const FamilyExpr& f);

struct BuildOptions {
    QuadratureConfig quadrature;
    FastPathPolicy policy = FastPathPolicy::Allow;
    /// Relative grid paths resolve against this directory.
    std::filesystem::path base_dir;
};

Copula build(const Expr& e, const BuildOptions& opts = {});
CopulaFamily build_family(const FamilyExpr& f, const BuildOptions& opts = {});

}  // namespace copulas
