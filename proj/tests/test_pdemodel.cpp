#include "support.hpp"

#include <doctest.h>

#include <random>

using namespace jtest;

namespace {

bool has_message(const ParseResult& r, const std::string& needle)
{
    for (const auto& d : r.diagnostics)
        if (d.message.find(needle) != std::string::npos)
            return true;
    return false;
}

const char* kCorpus[] = {"burgers.jc",   "burgers_mh.jc",     "viscous_burgers.jc", "toy_mhd.jc",
                         "transport.jc", "heat.jc",           "heat_kink.jc",       "ux_squared.jc",
                         "u_uxx.jc",     "burgers_s05.jc",    "burgers_s06.jc",     "burgers_nojump.jc"};

} // namespace

TEST_CASE("Burgers source with default coordinate names")
{
    const PDESystem sys = parse_ok("system burgers\ndim 2\nunknowns u\neq: D[1] u + u * D[2] u = 0\ngamma: x2 - 0.5*x1\n");
    REQUIRE(sys.equation_count() == 1);
    CHECK(sys.dim() == 2);
    CHECK(sys.names.coords == std::vector<std::string>{"x1", "x2"});
    const Expr expected = Expr(Atom::unknown(0, mi({1, 0}))) +
                          Expr(Atom::unknown(0, mi({0, 0}))) * Expr(Atom::unknown(0, mi({0, 1})));
    CHECK(operator_expr(sys, 0) == expected);
    CHECK(sys.equations[0].rhs.is_zero());
    REQUIRE(sys.gamma.closed_form);
    CHECK(*sys.gamma.closed_form == Expr(Atom::coordinate(1)) - Rational(1, 2) * Expr(Atom::coordinate(0)));
    CHECK_THROWS_AS(operator_expr(sys, 1), std::out_of_range);
}

TEST_CASE("coefficient functions are opaque smooth atoms")
{
    const PDESystem sys = parse_ok("system c\ncoords t x\nunknowns u\ncoeffs c\neq: D[1] u + c * u * D[2] u = 0\n");
    const Expr c = Expr(Atom::coeff("c", mi({0, 0})));
    const Expr expected = Expr(Atom::unknown(0, mi({1, 0}))) +
                          c * Expr(Atom::unknown(0, mi({0, 0}))) * Expr(Atom::unknown(0, mi({0, 1})));
    CHECK(operator_expr(sys, 0) == expected);
    CHECK(sys.gamma.symbolic());
    CHECK(ex("D[2]c", sys.names) == Expr(Atom::coeff("c", mi({0, 1}))));
}

TEST_CASE("missing right-hand side is reported with its span")
{
    const ParseResult r = parse_system("system s\ncoords t x\nunknowns u\neq: D[1] u = \n");
    CHECK_FALSE(r.ok());
    REQUIRE(r.diagnostics.size() == 1);
    CHECK(r.diagnostics[0].message == "missing right-hand side");
    CHECK(r.diagnostics[0].span.line == 4);
    CHECK(r.diagnostics[0].format().rfind("4:", 0) == 0);
}

TEST_CASE("every error is listed")
{
    const ParseResult r = parse_system(read_data("malformed.jc"));
    CHECK_FALSE(r.ok());
    CHECK(r.diagnostics.size() >= 2);
    CHECK(has_message(r, "missing right-hand side"));
    CHECK(has_message(r, "unknown identifier v"));
}

TEST_CASE("shape errors")
{
    CHECK(has_message(parse_system("system s\ndim 3\ncoords t x\n"), "dimension mismatch"));
    CHECK_FALSE(parse_system("system s\ncoords t x\nunknowns u\neq: D[3] u = 0\n").ok());
    CHECK_FALSE(parse_system("system s\ncoords t x\nunknowns u\neq: u / u = 0\n").ok());
    CHECK_FALSE(parse_system("system s\ncoords t x\nunknowns u\neq: u / 0 = 0\n").ok());
    CHECK_FALSE(parse_system("coords t x\n").ok());
    CHECK_FALSE(parse_system("system s\ncoords t x\nunknowns u u\neq: u = 0\n").ok());
    CHECK_FALSE(parse_system("system s\ncoords t x\nunknowns u\neq: u = u\n").ok()); // rhs may not contain unknowns
    CHECK_FALSE(parse_system("system s\ncoords t x\nunknowns u\ngamma: u\neq: u = 0\n").ok());
    CHECK(has_message(parse_system("system s\ncoords t x\nunknowns u\neq: u = 0\nmh 1 quad: _ ; u u: D[2,2] _\n"),
                      "order at most one"));
}

TEST_CASE("decimal literals are exact rationals")
{
    const auto n = tx_names();
    CHECK(ex("0.25*x", n) == Rational(1, 4) * ex("x", n));
    CHECK(ex("1e-1", n) == Expr(Rational(1, 10)));
    CHECK(ex("2^3", n) == Expr(8));
    CHECK(ex("-(t - x)", n) == ex("x - t", n));
}

TEST_CASE("derived symbols in expressions")
{
    const auto n = tx_names();
    CHECK(ex("D[1]gamma", n) == Expr(Atom::gamma(mi({1, 0}))));
    CHECK(ex("up_u - um_u", n) ==
          Expr(Atom::trace(Side::Plus, 0, mi({0, 0}))) - Expr(Atom::trace(Side::Minus, 0, mi({0, 0}))));
    CHECK(ex("D[2]psi_u*chi_u*omega", n) == Expr(Atom::psi(0, mi({0, 1}))) * Expr(Atom::chi(0, mi({0, 0}))) *
                                                 Expr(Atom::omega(mi({0, 0}))));
    CHECK_FALSE(parse_expression("up_v", n).expr);
}

TEST_CASE("traces, box and MH declarations")
{
    const PDESystem sys = load("transport.jc");
    REQUIRE(sys.find_trace(Side::Minus, 0));
    REQUIRE(sys.find_trace(Side::Plus, 0));
    CHECK(sys.find_trace(Side::Plus, 0)->value == Expr(1));
    CHECK(sys.box.at(1) == std::make_pair(Rational(-1), Rational(2)));
    REQUIRE(sys.mh);
    REQUIRE(sys.mh->equations.size() == 1);
    CHECK(sys.mh->equations[0].linear.size() == 1);

    const PDESystem mhd = load("toy_mhd.jc");
    REQUIRE(mhd.mh);
    CHECK(mhd.mh->equations[1].quadratic.size() == 1);
    CHECK(mhd.mh->equations[1].quadratic[0].entries[0].alpha == 0);
    CHECK(mhd.mh->equations[1].quadratic[0].entries[0].alpha_prime == 1);
}

TEST_CASE("validation accepts the parsed corpus")
{
    for (const char* f : kCorpus) {
        CAPTURE(f);
        CHECK(validate_system(load(f)).empty());
    }
}

TEST_CASE("render_system reparses to equal operators")
{
    for (const char* f : kCorpus) {
        CAPTURE(f);
        const PDESystem a = load(f);
        const PDESystem b = parse_ok(render_system(a));
        REQUIRE(a.equation_count() == b.equation_count());
        for (std::size_t k = 0; k < a.equation_count(); ++k) {
            CHECK(a.equations[k].lhs == b.equations[k].lhs);
            CHECK(a.equations[k].rhs == b.equations[k].rhs);
        }
        CHECK(a.gamma.closed_form == b.gamma.closed_form);
        CHECK(a.box == b.box);
        CHECK(a.traces.size() == b.traces.size());
        CHECK(a.mh.has_value() == b.mh.has_value());
        CHECK(render_system(a) == render_system(b));
    }
}

TEST_CASE("render_dsl round trip on random expressions")
{
    const SymbolNames n = tx_names({"u", "b"});
    std::vector<Atom> atoms{Atom::coordinate(0), Atom::coordinate(1)};
    for (const auto& p : multi_indices_up_to(2, 2)) {
        atoms.push_back(Atom::trace(Side::Plus, 0, p));
        atoms.push_back(Atom::trace(Side::Minus, 1, p));
        atoms.push_back(Atom::gamma(p));
        atoms.push_back(Atom::unknown(1, p));
        atoms.push_back(Atom::psi(0, p));
        atoms.push_back(Atom::chi(1, p));
        atoms.push_back(Atom::omega(p));
    }
    std::mt19937 rng(3);
    std::uniform_int_distribution<int> den(1, 6);
    for (int k = 0; k < 300; ++k) {
        Expr e = random_expr(rng, atoms, 5, 4);
        e *= Rational(1, den(rng));
        const std::string s = render_dsl(e, n);
        CAPTURE(s);
        CHECK(ex(s, n) == e);
    }
    CHECK(render_dsl(Expr{}, n) == "0");
    CHECK(render_latex(Expr{}, n) == "0");
}
