#include "copulas/dsl.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <initializer_list>

#include "copulas/format.hpp"
#include "copulas/grid.hpp"
#include "copulas/shuffle.hpp"

namespace copulas {

bool operator==(const Expr&, const Expr&) = default;
bool operator==(const FamilyExpr&, const FamilyExpr&) = default;

DslError::DslError(Kind kind, std::size_t column, const std::string& message)
    : std::runtime_error((kind == Kind::Syntax ? "syntax error" : "semantic error") + std::string(" at column ") +
                         std::to_string(column) + ": " + message),
      kind_(kind),
      column_(column) {}

namespace {

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Semicolon, Colon, End };

std::string_view describe(Tok t) {
    switch (t) {
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::String: return "quoted path";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::Comma: return "','";
        case Tok::Semicolon: return "';'";
        case Tok::Colon: return "':'";
        case Tok::End: return "end of input";
    }
    return "?";
}

struct Token {
    Tok kind;
    std::string text;
    double number = 0.0;
    std::size_t column = 1;
};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    Token next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        Token t{Tok::End, {}, 0.0, pos_ + 1};
        if (pos_ >= text_.size()) return t;
        const char c = text_[pos_];
        switch (c) {
            case '(': ++pos_; t.kind = Tok::LParen; return t;
            case ')': ++pos_; t.kind = Tok::RParen; return t;
            case ',': ++pos_; t.kind = Tok::Comma; return t;
            case ';': ++pos_; t.kind = Tok::Semicolon; return t;
            case ':': ++pos_; t.kind = Tok::Colon; return t;
            case '"': return string(t);
            default: break;
        }
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                ++pos_;
            t.kind = Tok::Ident;
            t.text = std::string(text_.substr(start, pos_ - start));
            return t;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') return number(t);
        throw DslError(DslError::Kind::Syntax, t.column, std::string("unexpected character '") + c + "'");
    }

private:
    bool digits() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        return pos_ > start;
    }

    Token number(Token t) {
        const std::size_t start = pos_;
        if (text_[pos_] == '+' || text_[pos_] == '-') ++pos_;
        bool any = digits();
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            any = digits() || any;
        }
        if (!any) throw DslError(DslError::Kind::Syntax, t.column, "malformed number");
        if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
            ++pos_;
            if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
            if (!digits()) throw DslError(DslError::Kind::Syntax, t.column, "malformed exponent");
        }
        t.kind = Tok::Number;
        t.text = std::string(text_.substr(start, pos_ - start));
        const char* first = t.text.data() + (t.text.front() == '+' ? 1 : 0);
        const auto [ptr, ec] = std::from_chars(first, t.text.data() + t.text.size(), t.number);
        if (ec != std::errc() || ptr != t.text.data() + t.text.size() || !std::isfinite(t.number)) {
            throw DslError(DslError::Kind::Syntax, t.column, "number out of range: " + t.text);
        }
        return t;
    }

    Token string(Token t) {
        ++pos_;
        while (pos_ < text_.size() && text_[pos_] != '"') {
            if (text_[pos_] == '\\') {
                ++pos_;
                if (pos_ >= text_.size()) break;
            }
            t.text += text_[pos_++];
        }
        if (pos_ >= text_.size()) throw DslError(DslError::Kind::Syntax, t.column, "unterminated string");
        ++pos_;
        t.kind = Tok::String;
        return t;
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

class Parser {
public:
    explicit Parser(std::string_view text) : lexer_(text) { advance(); }

    Expr whole_expr() {
        Expr e = expr();
        expect(Tok::End);
        return e;
    }

    FamilyExpr whole_family() {
        FamilyExpr f = family();
        expect(Tok::End);
        return f;
    }

private:
    void advance() { cur_ = lexer_.next(); }

    [[noreturn]] void syntax(const std::string& expected) const {
        std::string found = std::string(describe(cur_.kind));
        if (!cur_.text.empty()) found += " '" + cur_.text + "'";
        throw DslError(DslError::Kind::Syntax, cur_.column, "expected " + expected + ", found " + found);
    }

    Token expect(Tok kind) {
        if (cur_.kind != kind) syntax(std::string(describe(kind)));
        Token t = cur_;
        advance();
        return t;
    }

    double num() { return expect(Tok::Number).number; }

    std::vector<double> numlist(std::initializer_list<Tok> stop) {
        std::vector<double> out;
        for (Tok t : stop)
            if (cur_.kind == t) return out;
        out.push_back(num());
        while (cur_.kind == Tok::Comma) {
            advance();
            out.push_back(num());
        }
        return out;
    }

    std::vector<int> intlist(std::size_t& column) {
        column = cur_.column;
        std::vector<int> out;
        auto one = [&] {
            const Token t = expect(Tok::Number);
            if (t.number != std::floor(t.number) || std::abs(t.number) > 1e9) {
                throw DslError(DslError::Kind::Semantic, t.column, "expected an integer, found " + t.text);
            }
            out.push_back(static_cast<int>(t.number));
        };
        one();
        while (cur_.kind == Tok::Comma) {
            advance();
            one();
        }
        return out;
    }

    Expr expr() {
        if (cur_.kind != Tok::Ident) syntax("copula expression");
        const Token head = cur_;
        advance();
        const std::string& name = head.text;
        Expr e;
        if (name == "M" || name == "W" || name == "Pi") {
            e.kind = name == "M" ? Expr::Kind::M : name == "W" ? Expr::Kind::W : Expr::Kind::Pi;
            return e;
        }
        if (name == "fgm" || name == "straight") {
            e.kind = name == "fgm" ? Expr::Kind::Fgm : Expr::Kind::Straight;
            expect(Tok::LParen);
            const Token t = expect(Tok::Number);
            expect(Tok::RParen);
            if (e.kind == Expr::Kind::Fgm && !(t.number >= -1.0 && t.number <= 1.0))
                throw DslError(DslError::Kind::Semantic, t.column, "theta out of range [-1,1]: " + t.text);
            if (e.kind == Expr::Kind::Straight && !(t.number >= 0.0 && t.number <= 1.0))
                throw DslError(DslError::Kind::Semantic, t.column, "alpha out of range [0,1]: " + t.text);
            e.numbers = {t.number};
            return e;
        }
        if (name == "shuffle") {
            e.kind = Expr::Kind::Shuffle;
            expect(Tok::LParen);
            const std::size_t cuts_column = cur_.column;
            e.numbers = numlist({Tok::Semicolon});
            expect(Tok::Semicolon);
            std::size_t sigma_column = 0;
            e.sigma = intlist(sigma_column);
            expect(Tok::Semicolon);
            std::size_t flips_column = 0;
            e.flips = intlist(flips_column);
            expect(Tok::RParen);
            check_shuffle(e, cuts_column, sigma_column, flips_column);
            return e;
        }
        if (name == "grid") {
            e.kind = Expr::Kind::Grid;
            expect(Tok::LParen);
            const Token t = expect(Tok::String);
            if (t.text.empty()) throw DslError(DslError::Kind::Semantic, t.column, "empty grid path");
            e.path = t.text;
            expect(Tok::RParen);
            return e;
        }
        if (name == "t") {
            e.kind = Expr::Kind::Transpose;
            expect(Tok::LParen);
            e.children.push_back(expr());
            expect(Tok::RParen);
            return e;
        }
        if (name == "star") {
            e.kind = Expr::Kind::Star;
            expect(Tok::LParen);
            e.children.push_back(expr());
            expect(Tok::Comma);
            e.children.push_back(expr());
            expect(Tok::RParen);
            return e;
        }
        if (name == "starc") {
            e.kind = Expr::Kind::StarC;
            expect(Tok::LParen);
            e.children.push_back(expr());
            expect(Tok::Comma);
            e.family.push_back(family());
            expect(Tok::Comma);
            e.children.push_back(expr());
            expect(Tok::RParen);
            return e;
        }
        throw DslError(DslError::Kind::Syntax, head.column, "unknown copula '" + name + "'");
    }

    FamilyExpr family() {
        if (cur_.kind != Tok::Ident) syntax("family expression");
        const Token head = cur_;
        advance();
        FamilyExpr f;
        if (head.text == "const") {
            f.kind = FamilyExpr::Kind::Const;
            expect(Tok::LParen);
            f.members.push_back(expr());
            expect(Tok::RParen);
            return f;
        }
        if (head.text == "pw") {
            f.kind = FamilyExpr::Kind::Piecewise;
            expect(Tok::LParen);
            const std::size_t column = cur_.column;
            std::vector<double> bps = numlist({Tok::Colon});
            expect(Tok::Colon);
            f.members.push_back(expr());
            while (cur_.kind == Tok::Comma) {
                advance();
                f.members.push_back(expr());
            }
            expect(Tok::RParen);
            // Both the interior list and the full 0..1 list are accepted.
            if (bps.size() == f.members.size() + 1 && !bps.empty() && bps.front() == 0.0 && bps.back() == 1.0) {
                bps = std::vector<double>(bps.begin() + 1, bps.end() - 1);
            }
            if (bps.size() + 1 != f.members.size()) {
                throw DslError(DslError::Kind::Semantic, column,
                               std::to_string(f.members.size()) + " members need " +
                                   std::to_string(f.members.size() - 1) + " interior breakpoints");
            }
            check_interior(bps, column, "breakpoints");
            f.numbers = std::move(bps);
            return f;
        }
        if (head.text == "fgmcurve") {
            f.kind = FamilyExpr::Kind::FgmCurve;
            expect(Tok::LParen);
            if (cur_.kind == Tok::Ident) {
                if (cur_.text != "poly") syntax("'poly' or number");
                advance();
                expect(Tok::Colon);
            }
            const std::size_t column = cur_.column;
            f.numbers = numlist({Tok::RParen});
            expect(Tok::RParen);
            if (f.numbers.empty()) throw DslError(DslError::Kind::Semantic, column, "fgmcurve needs a coefficient");
            return f;
        }
        throw DslError(DslError::Kind::Syntax, head.column, "unknown family '" + head.text + "'");
    }

    static void check_interior(const std::vector<double>& xs, std::size_t column, const std::string& what) {
        double prev = 0.0;
        for (double x : xs) {
            if (!(x > prev && x < 1.0)) {
                throw DslError(DslError::Kind::Semantic, column, what + " must be strictly increasing in (0,1)");
            }
            prev = x;
        }
    }

    static void check_shuffle(const Expr& e, std::size_t cuts_column, std::size_t sigma_column,
                              std::size_t flips_column) {
        check_interior(e.numbers, cuts_column, "cuts");
        const std::size_t n = e.numbers.size() + 1;
        if (e.sigma.size() != n) {
            throw DslError(DslError::Kind::Semantic, sigma_column,
                           "sigma needs " + std::to_string(n) + " entries");
        }
        std::vector<bool> seen(n, false);
        for (int s : e.sigma) {
            if (s < 1 || static_cast<std::size_t>(s) > n || seen[s - 1]) {
                throw DslError(DslError::Kind::Semantic, sigma_column, "sigma is not a permutation of 1.." +
                                                                           std::to_string(n));
            }
            seen[s - 1] = true;
        }
        if (e.flips.size() != n) {
            throw DslError(DslError::Kind::Semantic, flips_column, "flips needs " + std::to_string(n) + " entries");
        }
        for (int f : e.flips) {
            if (f != 0 && f != 1) throw DslError(DslError::Kind::Semantic, flips_column, "flips must be 0 or 1");
        }
    }

    Lexer lexer_;
    Token cur_;
};

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ",";
        if constexpr (std::is_same_v<T, double>) {
            out += format_shortest(xs[i]);
        } else {
            out += std::to_string(xs[i]);
        }
    }
    return out;
}

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

}  // namespace

Expr parse(std::string_view text) { return Parser(text).whole_expr(); }

FamilyExpr parse_family(std::string_view text) { return Parser(text).whole_family(); }

std::string print(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::M: return "M";
        case Expr::Kind::W: return "W";
        case Expr::Kind::Pi: return "Pi";
        case Expr::Kind::Fgm: return "fgm(" + format_shortest(e.numbers.at(0)) + ")";
        case Expr::Kind::Straight: return "straight(" + format_shortest(e.numbers.at(0)) + ")";
        case Expr::Kind::Shuffle: return "shuffle(" + join(e.numbers) + ";" + join(e.sigma) + ";" + join(e.flips) + ")";
        case Expr::Kind::Grid: return "grid(" + quote(e.path) + ")";
        case Expr::Kind::Transpose: return "t(" + print(e.children.at(0)) + ")";
        case Expr::Kind::Star: return "star(" + print(e.children.at(0)) + "," + print(e.children.at(1)) + ")";
        case Expr::Kind::StarC:
            return "starc(" + print(e.children.at(0)) + "," + print(e.family.at(0)) + "," + print(e.children.at(1)) +
                   ")";
    }
    return {};
}

std::string print(const FamilyExpr& f) {
    switch (f.kind) {
        case FamilyExpr::Kind::Const: return "const(" + print(f.members.at(0)) + ")";
        case FamilyExpr::Kind::Piecewise: {
            std::string out = "pw(" + join(f.numbers) + ":";
            for (std::size_t i = 0; i < f.members.size(); ++i) out += (i > 0 ? "," : "") + print(f.members[i]);
            return out + ")";
        }
        case FamilyExpr::Kind::FgmCurve: return "fgmcurve(" + join(f.numbers) + ")";
    }
    return {};
}

Copula build(const Expr& e, const BuildOptions& opts) {
    switch (e.kind) {
        case Expr::Kind::M: return frechet_m();
        case Expr::Kind::W: return frechet_w();
        case Expr::Kind::Pi: return product_pi();
        case Expr::Kind::Fgm: return fgm(e.numbers.at(0));
        case Expr::Kind::Straight: return to_copula(straight_shuffle(e.numbers.at(0)));
        case Expr::Kind::Shuffle: {
            std::vector<double> cuts{0.0};
            cuts.insert(cuts.end(), e.numbers.begin(), e.numbers.end());
            cuts.push_back(1.0);
            return to_copula(ShuffleOfM::make(cuts, e.sigma, std::vector<bool>(e.flips.begin(), e.flips.end())));
        }
        case Expr::Kind::Grid: {
            const std::filesystem::path p =
                std::filesystem::path(e.path).is_absolute() ? std::filesystem::path(e.path) : opts.base_dir / e.path;
            std::ifstream in(p);
            if (!in) throw InputFileError("cannot open grid file " + p.string());
            return to_copula(read_grid_csv(in), print(e));
        }
        case Expr::Kind::Transpose: return transpose(build(e.children.at(0), opts));
        case Expr::Kind::Star:
            return star(build(e.children.at(0), opts), build(e.children.at(1), opts), opts.quadrature, opts.policy)
                .evaluator;
        case Expr::Kind::StarC:
            return star_c(build(e.children.at(0), opts), build_family(e.family.at(0), opts),
                          build(e.children.at(1), opts), opts.quadrature, opts.policy)
                .evaluator;
    }
    throw std::logic_error("unhandled expression kind");
}

CopulaFamily build_family(const FamilyExpr& f, const BuildOptions& opts) {
    switch (f.kind) {
        case FamilyExpr::Kind::Const: return CopulaFamily::constant(build(f.members.at(0), opts));
        case FamilyExpr::Kind::Piecewise: {
            std::vector<double> bps{0.0};
            bps.insert(bps.end(), f.numbers.begin(), f.numbers.end());
            bps.push_back(1.0);
            std::vector<Copula> members;
            for (const auto& m : f.members) members.push_back(build(m, opts));
            return CopulaFamily::piecewise(std::move(bps), std::move(members));
        }
        case FamilyExpr::Kind::FgmCurve: return CopulaFamily::fgm_curve(ThetaCurve::polynomial(f.numbers));
    }
    throw std::logic_error("unhandled family kind");
}

}  // namespace copulas
