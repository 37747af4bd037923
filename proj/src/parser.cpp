#include "jcond/pdemodel.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace jcond {

std::string ParseDiagnostic::format() const
{
    std::ostringstream os;
    os << span.line << ':' << span.column << ": " << (severity == Severity::Error ? "error" : "warning") << ": "
       << message;
    return os.str();
}

const TraceDecl* PDESystem::find_trace(Side side, std::size_t alpha) const
{
    for (const auto& t : traces)
        if (t.side == side && t.alpha == alpha)
            return &t;
    return nullptr;
}

namespace {

enum class Tok { Ident, Int, Number, Punct, End };

struct Token {
    Tok kind = Tok::End;
    std::string text;
    SourceSpan span;
    bool line_start = false;
};

const std::set<std::string, std::less<>> kDeclKeywords = {"system", "dim",   "coords", "unknowns", "coeffs",
                                                          "gamma",  "trace", "eq",     "mh",       "box"};

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    std::vector<Token> run(std::vector<ParseDiagnostic>& diags)
    {
        std::vector<Token> out;
        bool at_line_start = true;
        while (true) {
            skip_space(at_line_start);
            Token t;
            t.span = {line_, column_, 0};
            t.line_start = at_line_start;
            at_line_start = false;
            if (pos_ >= text_.size()) {
                t.kind = Tok::End;
                out.push_back(t);
                return out;
            }
            char c = text_[pos_];
            std::size_t start = pos_;
            if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
                while (pos_ < text_.size() &&
                       (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
                    advance();
                t.kind = Tok::Ident;
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '.' && pos_ + 1 < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])))) {
                bool is_int = true;
                while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                    advance();
                if (pos_ < text_.size() && text_[pos_] == '.') {
                    is_int = false;
                    advance();
                    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                        advance();
                }
                if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
                    std::size_t save = pos_, save_col = column_;
                    advance();
                    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-'))
                        advance();
                    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
                        is_int = false;
                        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_])))
                            advance();
                    } else {
                        pos_ = save;
                        column_ = save_col;
                    }
                }
                t.kind = is_int ? Tok::Int : Tok::Number;
            } else if (std::string_view(":=+-*/^()[],;").find(c) != std::string_view::npos) {
                advance();
                t.kind = Tok::Punct;
            } else {
                advance();
                diags.push_back({ParseDiagnostic::Severity::Error, {t.span.line, t.span.column, 1},
                                 std::string("unexpected character '") + c + "'"});
                continue;
            }
            t.text = std::string(text_.substr(start, pos_ - start));
            t.span.length = pos_ - start;
            out.push_back(std::move(t));
        }
    }

private:
    void advance()
    {
        if (text_[pos_] == '\n') {
            ++line_;
            column_ = 1;
        } else if ((static_cast<unsigned char>(text_[pos_]) & 0xC0u) != 0x80u) {
            ++column_; // count UTF-8 code points
        }
        ++pos_;
    }

    void skip_space(bool& at_line_start)
    {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n')
                    advance();
            } else if (c == '\n') {
                at_line_start = true;
                advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t column_ = 1;
};

struct ParseError {
    SourceSpan span;
    std::string message;
};

Rational parse_decimal(const std::string& lexeme)
{
    std::string mantissa;
    long exponent = 0;
    std::size_t i = 0;
    for (; i < lexeme.size() && lexeme[i] != 'e' && lexeme[i] != 'E'; ++i) {
        if (lexeme[i] == '.')
            continue;
        mantissa += lexeme[i];
    }
    auto dot = lexeme.find('.');
    auto epos = lexeme.find_first_of("eE");
    if (dot != std::string::npos)
        exponent -= static_cast<long>((epos == std::string::npos ? lexeme.size() : epos) - dot - 1);
    if (epos != std::string::npos)
        exponent += std::stol(lexeme.substr(epos + 1));
    mantissa.erase(0, std::min(mantissa.find_first_not_of('0'), mantissa.size()));
    Rational q(mantissa.empty() ? mpz_class(0) : mpz_class(mantissa));
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(std::labs(exponent)));
    if (exponent >= 0)
        q *= scale;
    else
        q /= scale;
    q.canonicalize();
    return q;
}

/// Recursive-descent parser over a token vector.
class Parser {
public:
    Parser(std::vector<Token> tokens, std::vector<ParseDiagnostic>& diags) : toks_(std::move(tokens)), diags_(diags) {}

    // ----- expression level

    /// Placeholder `_` for operator expressions; becomes Unknown(alpha = unknowns.size()).
    bool allow_placeholder = false;
    SymbolNames names;

    Expr expr()
    {
        Expr e = term();
        while (peek_punct("+") || peek_punct("-")) {
            bool minus = next().text == "-";
            Expr t = term();
            if (minus)
                e -= t;
            else
                e += t;
        }
        return e;
    }

    bool at_end() const { return cur().kind == Tok::End; }
    const Token& cur() const { return toks_[pos_]; }

    bool at_decl_start() const { return cur().kind == Tok::Ident && kDeclKeywords.contains(cur().text); }

    // ----- declaration level

    std::optional<PDESystem> file()
    {
        PDESystem sys;
        if (!(cur().kind == Tok::Ident && cur().text == "system")) {
            error(cur().span, "expected 'system <name>' at start of input");
            return std::nullopt;
        }
        next();
        if (cur().kind != Tok::Ident) {
            error(cur().span, "expected system name");
            return std::nullopt;
        }
        sys.name = next().text;
        std::optional<std::size_t> dim;
        bool coords_given = false;
        std::vector<std::pair<std::size_t, MHEquationCert>> mh_decls;
        std::vector<SourceSpan> mh_spans;

        while (!at_end()) {
            const std::size_t stmt_start = pos_;
            try {
                const Token kw = cur();
                if (!at_decl_start())
                    throw ParseError{kw.span, "expected a declaration, found '" + kw.text + "'"};
                next();
                if (kw.text == "system") {
                    throw ParseError{kw.span, "duplicate 'system' header"};
                } else if (kw.text == "dim") {
                    if (cur().kind != Tok::Int)
                        throw ParseError{cur().span, "expected integer after 'dim'"};
                    Token t = next();
                    std::size_t n = std::stoul(t.text);
                    if (n == 0)
                        throw ParseError{t.span, "dimension must be positive"};
                    if (dim)
                        throw ParseError{kw.span, "duplicate 'dim' declaration"};
                    if (coords_given && names.coords.size() != n)
                        throw ParseError{t.span, "dimension mismatch: dim " + t.text + " but " +
                                                     std::to_string(names.coords.size()) + " coordinates"};
                    dim = n;
                    if (!coords_given) {
                        names.coords.clear();
                        for (std::size_t i = 1; i <= n; ++i)
                            names.coords.push_back("x" + std::to_string(i));
                    }
                } else if (kw.text == "coords") {
                    auto ids = ident_list(kw);
                    if (dim && ids.size() != *dim)
                        throw ParseError{kw.span, "dimension mismatch: dim " + std::to_string(*dim) + " but " +
                                                      std::to_string(ids.size()) + " coordinates"};
                    if (coords_given)
                        throw ParseError{kw.span, "duplicate 'coords' declaration"};
                    names.coords = ids;
                    coords_given = true;
                    dim = ids.size();
                } else if (kw.text == "unknowns") {
                    for (auto& id : ident_list(kw))
                        names.unknowns.push_back(id);
                } else if (kw.text == "coeffs") {
                    for (auto& id : ident_list(kw))
                        names.coeffs.push_back(id);
                } else if (kw.text == "gamma") {
                    need_dim(dim, kw);
                    expect(":");
                    SourceSpan at = cur().span;
                    Expr g = expr_or_missing(at, "missing expression for gamma");
                    if (sys.gamma.closed_form)
                        throw ParseError{kw.span, "duplicate 'gamma' declaration"};
                    sys.gamma.closed_form = std::move(g);
                } else if (kw.text == "trace") {
                    need_dim(dim, kw);
                    if (cur().kind != Tok::Ident || (cur().text != "minus" && cur().text != "plus"))
                        throw ParseError{cur().span, "expected 'minus' or 'plus' after 'trace'"};
                    Side side = next().text == "plus" ? Side::Plus : Side::Minus;
                    std::size_t alpha = unknown_ref();
                    expect(":");
                    Expr v = expr_or_missing(cur().span, "missing trace expression");
                    if (sys.find_trace(side, alpha))
                        throw ParseError{kw.span, "duplicate trace declaration"};
                    sys.traces.push_back({side, alpha, std::move(v)});
                } else if (kw.text == "box") {
                    need_dim(dim, kw);
                    if (cur().kind != Tok::Ident)
                        throw ParseError{cur().span, "expected a coordinate after 'box'"};
                    const Token ct = next();
                    auto it = std::find(names.coords.begin(), names.coords.end(), ct.text);
                    if (it == names.coords.end())
                        throw ParseError{ct.span, "unknown coordinate " + ct.text};
                    expect(":");
                    Rational lo = constant_expr();
                    expect(",");
                    Rational hi = constant_expr();
                    if (!(lo < hi))
                        throw ParseError{ct.span, "box bounds must satisfy lo < hi"};
                    const std::size_t axis = std::size_t(it - names.coords.begin());
                    if (sys.box.contains(axis))
                        throw ParseError{kw.span, "duplicate box for " + ct.text};
                    sys.box.emplace(axis, std::make_pair(lo, hi));
                } else if (kw.text == "eq") {
                    need_dim(dim, kw);
                    expect(":");
                    Expr lhs = expr_or_missing(cur().span, "missing left-hand side");
                    const Token& eqtok = cur();
                    if (!peek_punct("="))
                        throw ParseError{eqtok.span, "expected '=' in equation"};
                    SourceSpan eq_span = next().span;
                    Expr rhs = expr_or_missing(eq_span, "missing right-hand side");
                    sys.equations.push_back({std::move(lhs), std::move(rhs), kw.span});
                } else if (kw.text == "mh") {
                    need_dim(dim, kw);
                    if (cur().kind != Tok::Int)
                        throw ParseError{cur().span, "expected equation number after 'mh'"};
                    Token bt = next();
                    std::size_t beta = std::stoul(bt.text);
                    if (beta == 0)
                        throw ParseError{bt.span, "equation numbers start at 1"};
                    MHEquationCert part;
                    if (cur().kind == Tok::Ident && cur().text == "linear") {
                        next();
                        std::size_t alpha = unknown_ref();
                        expect(":");
                        part.linear.push_back({alpha, op_expr()});
                    } else if (cur().kind == Tok::Ident && cur().text == "quad") {
                        next();
                        expect(":");
                        MHQuadTerm q;
                        q.outer = op_expr();
                        while (peek_punct(";")) {
                            next();
                            std::size_t a1 = unknown_ref();
                            std::size_t a2 = unknown_ref();
                            expect(":");
                            SourceSpan at = cur().span;
                            LinearOpSpec p = op_expr();
                            if (p.order() > 1)
                                throw ParseError{at, "P entry has order " + std::to_string(p.order()) +
                                                         "; MH factors must have order at most one"};
                            q.entries.push_back({a1, a2, FirstOrderOp(std::move(p))});
                        }
                        part.quadratic.push_back(std::move(q));
                    } else {
                        throw ParseError{cur().span, "expected 'linear' or 'quad' after 'mh <beta>'"};
                    }
                    mh_decls.emplace_back(beta - 1, std::move(part));
                    mh_spans.push_back(bt.span);
                }
            } catch (const ParseError& e) {
                error(e.span, e.message);
                recover(stmt_start);
            }
        }

        if (!dim)
            error(cur().span, "no dimension declared (use 'dim N' or 'coords ...')");
        check_names();
        sys.names = names;
        if (!mh_decls.empty()) {
            MHCertificate cert;
            cert.equations.resize(sys.equations.size());
            for (std::size_t k = 0; k < mh_decls.size(); ++k) {
                auto& [beta, part] = mh_decls[k];
                if (beta >= sys.equations.size()) {
                    error(mh_spans[k], "mh declaration refers to equation " + std::to_string(beta + 1) +
                                           " but only " + std::to_string(sys.equations.size()) + " equations exist");
                    continue;
                }
                auto& dst = cert.equations[beta];
                for (auto& l : part.linear)
                    dst.linear.push_back(std::move(l));
                for (auto& q : part.quadratic)
                    dst.quadratic.push_back(std::move(q));
            }
            sys.mh = std::move(cert);
        }
        return sys;
    }

private:
    const Token& next() { return toks_[pos_ == toks_.size() - 1 ? pos_ : pos_++]; }

    bool peek_punct(std::string_view p) const { return cur().kind == Tok::Punct && cur().text == p; }

    void expect(std::string_view p)
    {
        if (!peek_punct(p))
            throw ParseError{cur().span, "expected '" + std::string(p) + "'" +
                                             (at_end() ? std::string(" at end of input") : ", found '" + cur().text + "'")};
        next();
    }

    void error(SourceSpan span, std::string msg)
    {
        diags_.push_back({ParseDiagnostic::Severity::Error, span, std::move(msg)});
    }

    // Skips to the next declaration at a line start, past the statement that began at `start`.
    void recover(std::size_t start)
    {
        if (pos_ == start)
            next();
        while (!at_end() && !(at_decl_start() && cur().line_start))
            next();
    }

    static void need_dim(const std::optional<std::size_t>& dim, const Token& kw)
    {
        if (!dim)
            throw ParseError{kw.span, "'" + kw.text + "' before the dimension is declared"};
    }

    std::vector<std::string> ident_list(const Token& kw)
    {
        std::vector<std::string> ids;
        while (cur().kind == Tok::Ident && !kDeclKeywords.contains(cur().text)) {
            const Token& t = next();
            if (t.text == "D" || t.text == "omega" || t.text == "_")
                throw ParseError{t.span, "'" + t.text + "' is reserved"};
            ids.push_back(t.text);
        }
        if (ids.empty())
            throw ParseError{kw.span, "expected at least one name after '" + kw.text + "'"};
        return ids;
    }

    void check_names()
    {
        std::set<std::string> seen;
        auto check = [&](const std::vector<std::string>& v) {
            for (const auto& n : v)
                if (!seen.insert(n).second)
                    error(toks_.front().span, "duplicate name '" + n + "'");
        };
        check(names.coords);
        check(names.unknowns);
        check(names.coeffs);
    }

    Rational constant_expr()
    {
        SourceSpan at = cur().span;
        Expr e = expr();
        if (!e.is_constant())
            throw ParseError{at, "expected a numeric constant"};
        return e.constant_term();
    }

    std::size_t unknown_ref()
    {
        if (cur().kind != Tok::Ident)
            throw ParseError{cur().span, "expected unknown name"};
        const Token& t = next();
        auto it = std::find(names.unknowns.begin(), names.unknowns.end(), t.text);
        if (it == names.unknowns.end())
            throw ParseError{t.span, "unknown identifier " + t.text};
        return static_cast<std::size_t>(it - names.unknowns.begin());
    }

    Expr expr_or_missing(SourceSpan at, const std::string& message)
    {
        if (at_end() || at_decl_start() || peek_punct("=") || peek_punct(";"))
            throw ParseError{at, message};
        return expr();
    }

    LinearOpSpec op_expr()
    {
        SourceSpan at = cur().span;
        bool saved = allow_placeholder;
        allow_placeholder = true;
        Expr e = expr_or_missing(at, "missing operator expression");
        allow_placeholder = saved;
        const std::size_t slot = names.unknowns.size();
        std::vector<LinearOpTerm> terms;
        for (const auto& [m, c] : e.terms()) {
            auto [hole, rest] = m.split([&](const Atom& a) { return a.kind == AtomKind::Unknown && a.index == slot; });
            if (hole.degree() != 1)
                throw ParseError{at, "operator expression must be linear in the placeholder '_'"};
            Expr coeff(rest, c);
            if (coeff.any_atom([](const Atom& a) { return a.kind != AtomKind::Coordinate && a.kind != AtomKind::CoeffFn; }))
                throw ParseError{at, "operator coefficients may depend on coordinates and coefficient functions only"};
            terms.push_back({std::move(coeff), hole.factors().front().atom.jet});
        }
        return LinearOpSpec(std::move(terms));
    }

    Expr term()
    {
        Expr e = factor();
        while (peek_punct("*") || peek_punct("/")) {
            const Token& op = next();
            SourceSpan at = cur().span;
            Expr f = factor();
            if (op.text == "*") {
                e *= f;
            } else {
                if (!f.is_constant() || f.is_zero())
                    throw ParseError{at, "division is only allowed by a nonzero numeric constant"};
                Rational inv = 1 / f.constant_term();
                e *= inv;
            }
        }
        return e;
    }

    Expr factor()
    {
        Expr base;
        if (peek_punct("-")) {
            next();
            base = -factor();
            return base;
        }
        base = primary();
        while (peek_punct("^")) {
            next();
            if (cur().kind != Tok::Int)
                throw ParseError{cur().span, "exponent must be a non-negative integer"};
            Token t = next();
            base = pow(base, static_cast<unsigned>(std::stoul(t.text)));
        }
        return base;
    }

    Expr primary()
    {
        const Token t = cur();
        if (t.kind == Tok::Int || t.kind == Tok::Number) {
            next();
            return Expr(parse_decimal(t.text));
        }
        if (peek_punct("(")) {
            next();
            Expr e = expr();
            expect(")");
            return e;
        }
        if (t.kind == Tok::Ident && t.text == "D") {
            next();
            expect("[");
            MultiIndex p(names.dim());
            while (true) {
                if (cur().kind != Tok::Int)
                    throw ParseError{cur().span, "expected coordinate number in D[...]"};
                Token it = next();
                std::size_t axis = std::stoul(it.text);
                if (axis == 0 || axis > names.dim())
                    throw ParseError{it.span, "dimension mismatch: derivative axis " + it.text +
                                                  " out of range 1.." + std::to_string(names.dim())};
                p[axis - 1] += 1;
                if (peek_punct(",")) {
                    next();
                    continue;
                }
                break;
            }
            expect("]");
            if (cur().kind != Tok::Ident || cur().text == "D")
                throw ParseError{cur().span, "expected a symbol after D[...]"};
            Expr a = identifier();
            return derivative_multi(a, p);
        }
        if (t.kind == Tok::Ident) {
            if (at_decl_start() && t.text != "gamma")
                throw ParseError{t.span, "unexpected keyword '" + t.text + "' in expression"};
            return identifier();
        }
        if (t.kind == Tok::End)
            throw ParseError{t.span, "unexpected end of input in expression"};
        throw ParseError{t.span, "unexpected '" + t.text + "' in expression"};
    }

    Expr identifier()
    {
        const Token t = next();
        const std::size_t n = names.dim();
        const std::string& s = t.text;
        auto index_in = [&](const std::vector<std::string>& v, const std::string& x) -> std::optional<std::size_t> {
            auto it = std::find(v.begin(), v.end(), x);
            if (it == v.end())
                return std::nullopt;
            return static_cast<std::size_t>(it - v.begin());
        };
        if (auto i = index_in(names.coords, s))
            return Expr(Atom::coordinate(*i));
        if (auto i = index_in(names.unknowns, s))
            return Expr(Atom::unknown(*i, MultiIndex(n)));
        if (index_in(names.coeffs, s))
            return Expr(Atom::coeff(s, MultiIndex(n)));
        if (s == "gamma")
            return Expr(Atom::gamma(MultiIndex(n)));
        if (s == "omega")
            return Expr(Atom::omega(MultiIndex(n)));
        if (s == "_" && allow_placeholder)
            return Expr(Atom::unknown(names.unknowns.size(), MultiIndex(n)));
        for (auto [prefix, kind, side] : {std::tuple{"up_", AtomKind::Trace, Side::Plus},
                                          std::tuple{"um_", AtomKind::Trace, Side::Minus},
                                          std::tuple{"psi_", AtomKind::Psi, Side::Plus},
                                          std::tuple{"chi_", AtomKind::Chi, Side::Plus}}) {
            std::string_view pv(prefix);
            if (s.size() > pv.size() && s.compare(0, pv.size(), pv) == 0) {
                if (auto i = index_in(names.unknowns, s.substr(pv.size()))) {
                    Atom a{kind, side, *i, {}, MultiIndex(n)};
                    return Expr(a);
                }
            }
        }
        throw ParseError{t.span, "unknown identifier " + s};
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    std::vector<ParseDiagnostic>& diags_;
};

bool has_errors(const std::vector<ParseDiagnostic>& d)
{
    return std::any_of(d.begin(), d.end(),
                       [](const ParseDiagnostic& x) { return x.severity == ParseDiagnostic::Severity::Error; });
}

} // namespace

ParseResult parse_system(std::string_view text)
{
    ParseResult result;
    auto tokens = Lexer(text).run(result.diagnostics);
    Parser parser(std::move(tokens), result.diagnostics);
    auto sys = parser.file();
    if (sys && !has_errors(result.diagnostics)) {
        auto more = validate_system(*sys);
        result.diagnostics.insert(result.diagnostics.end(), more.begin(), more.end());
    }
    if (sys && !has_errors(result.diagnostics))
        result.system = std::move(sys);
    return result;
}

ExprParseResult parse_expression(std::string_view text, const SymbolNames& names)
{
    ExprParseResult result;
    auto tokens = Lexer(text).run(result.diagnostics);
    Parser parser(std::move(tokens), result.diagnostics);
    parser.names = names;
    try {
        Expr e = parser.expr();
        if (!parser.at_end())
            throw ParseError{parser.cur().span, "trailing input '" + parser.cur().text + "'"};
        if (!has_errors(result.diagnostics))
            result.expr = std::move(e);
    } catch (const ParseError& e) {
        result.diagnostics.push_back({ParseDiagnostic::Severity::Error, e.span, e.message});
    }
    return result;
}

} // namespace jcond
