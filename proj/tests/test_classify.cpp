#include "support.hpp"

#include "jcond/classify.hpp"

#include <doctest.h>

using namespace jtest;

namespace {

const char* kMHCorpus[] = {"burgers_mh.jc", "viscous_burgers.jc", "toy_mhd.jc", "transport.jc", "heat.jc"};

Expr psi(std::initializer_list<unsigned> p, std::size_t a = 0) { return Expr(Atom::psi(a, MultiIndex(p))); }
Expr chi(std::initializer_list<unsigned> p, std::size_t a = 0) { return Expr(Atom::chi(a, MultiIndex(p))); }
Expr omega(std::initializer_list<unsigned> p) { return Expr(Atom::omega(MultiIndex(p))); }

} // namespace

TEST_CASE("ansatz substitution collects omega monomials")
{
    const PDESystem sys = load("burgers.jc");
    const auto exp = substitute_ansatz(sys);
    REQUIRE(exp.equations.size() == 1);
    const auto& c = exp.equations[0];
    // by hand: T(psi + chi omega) for u_t + u u_x
    CHECK(c.at(Monomial{}) == psi({1, 0}) + psi({0, 0}) * psi({0, 1}));
    CHECK(c.at(Monomial(Atom::omega(mi({0, 0})))) ==
          chi({1, 0}) + psi({0, 0}) * chi({0, 1}) + psi({0, 1}) * chi({0, 0}));
    CHECK(c.at(Monomial(Atom::omega(mi({1, 0})))) == chi({0, 0}));
    CHECK(c.at(Monomial(Atom::omega(mi({0, 1})))) == psi({0, 0}) * chi({0, 0}));
    CHECK(c.at(Monomial(Atom::omega(mi({0, 0})), 2)) == chi({0, 0}) * chi({0, 1}));
    CHECK(c.size() == 6);
}

TEST_CASE("omega basis")
{
    const OmegaBasis b = omega_basis(2, 1, 2);
    REQUIRE(b.elements.size() == 6);
    CHECK(b.elements[0].power == 1);
    CHECK(b.elements[0].p.is_zero());
    CHECK(b.elements[5].power == 2);
    // D_x(omega^2) = 2 omega omega_x
    const auto& last = b.elements[5];
    CHECK(last.p == mi({0, 1}));
    REQUIRE(last.expansion.size() == 1);
    CHECK(last.expansion.begin()->second == 2);
}

TEST_CASE("Burgers is resoluble with a verified certificate")
{
    const PDESystem sys = load("burgers.jc");
    const ClassifyReport rep = resoluble_decompose(sys);
    REQUIRE(rep.resoluble());
    const ResolubleCertificate cert = rep.certificate();
    CHECK(verify_certificate(sys, cert));
    // the quadratic flux lands on D_x(omega^2) with multiplier chi^2 / 2
    bool found = false;
    for (const auto& t : cert.equations[0])
        if (t.p == mi({0, 1}) && t.power == 2) {
            CHECK(t.multiplier == Rational(1, 2) * chi({0, 0}) * chi({0, 0}));
            found = true;
        }
    CHECK(found);
    // omega-free remainder is the operator on psi
    CHECK(cert.equations[0].front().power == 0);
    CHECK(cert.equations[0].front().multiplier == psi({1, 0}) + psi({0, 0}) * psi({0, 1}));

    // a tampered certificate is rejected
    ResolubleCertificate bad = cert;
    bad.equations[0].back().multiplier += Expr(1);
    CHECK_FALSE(verify_certificate(sys, bad));
}

TEST_CASE("certificates do not depend on the elimination order")
{
    for (const char* f : kMHCorpus) {
        CAPTURE(f);
        const PDESystem sys = load(f);
        DecomposeOptions rev;
        rev.order = EliminationOrder::Reversed;
        const ClassifyReport a = resoluble_decompose(sys);
        const ClassifyReport b = resoluble_decompose(sys, rev);
        REQUIRE(a.resoluble());
        REQUIRE(b.resoluble());
        CHECK(a.certificate() == b.certificate());
        CHECK(verify_certificate(sys, a.certificate()));
    }
}

TEST_CASE("(u_x)^2 is not resoluble, witness omega_x^2")
{
    const PDESystem sys = load("ux_squared.jc");
    const ClassifyReport rep = resoluble_decompose(sys);
    REQUIRE_FALSE(rep.resoluble());
    const auto& v = rep.equations[0];
    REQUIRE(v.witness);
    CHECK(v.witness->monomial == Monomial(Atom::omega(mi({0, 1})), 2));
    CHECK(render_dsl(Expr(v.witness->monomial, 1), sys.names) == "D[2]omega^2");
    CHECK(witness_is_valid(sys.equations[0].lhs, 1, 2, v));
    CHECK_THROWS_AS(rep.certificate(), std::logic_error);

    DecomposeOptions rev;
    rev.order = EliminationOrder::Reversed;
    const EquationVerdict again = decompose_operator(sys.equations[0].lhs, 1, 2, rev);
    CHECK_FALSE(again.resoluble);
    CHECK(witness_is_valid(sys.equations[0].lhs, 1, 2, again));
}

TEST_CASE("u u_xx is not resoluble, witness omega omega_xx")
{
    const PDESystem sys = load("u_uxx.jc");
    const ClassifyReport rep = resoluble_decompose(sys);
    REQUIRE_FALSE(rep.resoluble());
    const auto& v = rep.equations[0];
    REQUIRE(v.witness);
    CHECK(v.witness->monomial == Monomial(std::vector<Factor>{{Atom::omega(mi({0, 0})), 1}, {Atom::omega(mi({0, 2})), 1}}));
    CHECK(witness_is_valid(sys.equations[0].lhs, 1, 2, v));

    DecomposeOptions rev;
    rev.order = EliminationOrder::Reversed;
    const EquationVerdict again = decompose_operator(sys.equations[0].lhs, 1, 2, rev);
    CHECK_FALSE(again.resoluble);
    CHECK(witness_is_valid(sys.equations[0].lhs, 1, 2, again));
}

TEST_CASE("a tampered witness fails re-confirmation")
{
    const PDESystem sys = load("ux_squared.jc");
    EquationVerdict v = resoluble_decompose(sys).equations[0];
    REQUIRE(v.witness);
    v.witness->residual += Expr(1);
    CHECK_FALSE(witness_is_valid(sys.equations[0].lhs, 1, 2, v));
}

TEST_CASE("linear operators are resoluble")
{
    const PDESystem sys = load("heat.jc");
    const ClassifyReport rep = resoluble_decompose(sys);
    REQUIRE(rep.resoluble());
    CHECK(rep.equations[0].max_power == 1);
    CHECK(rep.equations[0].max_order == 2);
}

TEST_CASE("MH certificates expand to the operators")
{
    for (const char* f : kMHCorpus) {
        CAPTURE(f);
        const PDESystem sys = load(f);
        REQUIRE(sys.mh);
        CHECK(mh_verify(sys, *sys.mh));
    }
    const PDESystem sys = load("burgers_mh.jc");
    // expand_mh by hand: D_t u + u D_x u
    CHECK(expand_mh(sys.mh->equations[0], 2) == sys.equations[0].lhs);
}

TEST_CASE("a wrong MH certificate is rejected")
{
    PDESystem sys = load("burgers_mh.jc");
    MHCertificate cert = *sys.mh;
    cert.equations[0].linear[0].op = LinearOpSpec::partial(2, 1);
    CHECK_FALSE(mh_verify(sys, cert));
    CHECK_THROWS_AS(mh_to_resoluble(sys, cert), DecompositionFailed);
    cert.equations.clear();
    CHECK_FALSE(mh_verify(sys, cert));
}

TEST_CASE("first-order factors reject higher order")
{
    CHECK_THROWS_AS(FirstOrderOp(LinearOpSpec({{Expr(1), mi({0, 2})}})), OrderTooHigh);
    const FirstOrderOp p(LinearOpSpec({{Expr(3), mi({0, 0})}, {Expr(1), mi({0, 1})}}));
    CHECK(p.principal() == LinearOpSpec::partial(2, 1));
}

TEST_CASE("mh_detect finds certificates for first-order quadratic systems")
{
    for (const char* f : {"burgers.jc", "toy_mhd.jc", "transport.jc", "heat.jc"}) {
        CAPTURE(f);
        const PDESystem sys = load(f);
        const auto cert = mh_detect(sys);
        REQUIRE(cert);
        CHECK(mh_verify(sys, *cert));
    }
    CHECK_FALSE(mh_detect(load("ux_squared.jc")));
}

TEST_CASE("MH systems map to resoluble certificates")
{
    for (const char* f : kMHCorpus) {
        CAPTURE(f);
        const PDESystem sys = load(f);
        const ResolubleCertificate cert = mh_to_resoluble(sys, *sys.mh);
        CHECK(verify_certificate(sys, cert));
        CHECK(cert == resoluble_decompose(sys).certificate());
    }
}

TEST_CASE("coefficient functions pass through as multipliers")
{
    const PDESystem sys = parse_ok("system c\ncoords t x\nunknowns u\ncoeffs c\neq: D[1] u + c * u * D[2] u = 0\n");
    const ClassifyReport rep = resoluble_decompose(sys);
    REQUIRE(rep.resoluble());
    CHECK(verify_certificate(sys, rep.certificate()));
    (void)omega;
}

TEST_CASE("random MH systems are resoluble")
{
    std::mt19937 rng(17);
    for (int k = 0; k < 40; ++k) {
        const PDESystem sys = random_mh_system(rng);
        CAPTURE(render_system(sys));
        CHECK(validate_system(sys).empty());
        REQUIRE(mh_verify(sys, *sys.mh));
        const ResolubleCertificate cert = mh_to_resoluble(sys, *sys.mh);
        CHECK(verify_certificate(sys, cert));
        CHECK(resoluble_decompose(sys).resoluble());
    }
}
