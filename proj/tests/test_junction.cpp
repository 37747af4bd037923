#include "support.hpp"

#include "jcond/classify.hpp"
#include "jcond/junction.hpp"

#include <doctest.h>

using namespace jtest;

namespace {

const char* kMHCorpus[] = {"burgers_mh.jc", "viscous_burgers.jc", "toy_mhd.jc", "transport.jc", "heat.jc"};

Expr up(std::size_t a = 0, std::initializer_list<unsigned> p = {0, 0}) { return Expr(Atom::trace(Side::Plus, a, MultiIndex(p))); }
Expr um(std::size_t a = 0, std::initializer_list<unsigned> p = {0, 0}) { return Expr(Atom::trace(Side::Minus, a, MultiIndex(p))); }
Expr g(std::initializer_list<unsigned> p) { return Expr(Atom::gamma(MultiIndex(p))); }

JunctionConditionSet via_resoluble(const PDESystem& sys, const TraceBinding& b = TraceBinding::jump())
{
    return derive_junction_conditions(sys, resoluble_decompose(sys).certificate(), b);
}

} // namespace

TEST_CASE("Burgers: Dirac condition is Rankine-Hugoniot")
{
    const PDESystem sys = load("burgers.jc");
    const JunctionConditionSet conds = via_resoluble(sys);
    REQUIRE(conds.equations.size() == 1);
    const auto& atoms = conds.equations[0].atoms;
    // by hand: chi gamma_t + (1/2)((u+)^2 - (u-)^2) gamma_x
    const Expr rh = (up() - um()) * g({1, 0}) + Rational(1, 2) * (up() * up() - um() * um()) * g({0, 1});
    REQUIRE(atoms.count(DistAtom::dirac(0)) == 1);
    CHECK(atoms.at(DistAtom::dirac(0)).coefficient == rh);
    CHECK(atoms.at(DistAtom::dirac(0)).status == ConditionStatus::Constraint);
    CHECK(render_dsl(rh, sys.names) == "(up_u - um_u)*D[1]gamma + 1/2*(up_u^2 - um_u^2)*D[2]gamma");
    // the H coefficient is T(u+) - T(u-), implied by the classical hypothesis
    REQUIRE(atoms.count(DistAtom::heaviside()) == 1);
    CHECK(atoms.at(DistAtom::heaviside()).status == ConditionStatus::SatisfiedByHypothesis);
    CHECK(atoms.count(DistAtom::one()) == 0);
    CHECK(conds.count() == 2);
}

TEST_CASE("both derivation paths agree")
{
    for (const char* f : kMHCorpus) {
        CAPTURE(f);
        const PDESystem sys = load(f);
        REQUIRE(sys.mh);
        const JunctionConditionSet a = via_resoluble(sys);
        const JunctionConditionSet b = derive_junction_conditions(sys, *sys.mh);
        CHECK(conditions_equal(a, b));
        // raw sets agree before simplification too
        CHECK(junction_from_resoluble(sys, resoluble_decompose(sys).certificate()) == junction_from_mh(sys, *sys.mh));
    }
}

TEST_CASE("MH path on Burgers with a detected certificate")
{
    const PDESystem sys = load("burgers.jc");
    const auto cert = mh_detect(sys);
    REQUIRE(cert);
    CHECK(conditions_equal(derive_junction_conditions(sys, *cert), via_resoluble(sys)));
}

TEST_CASE("no jump: every condition vanishes")
{
    for (const char* f : {"burgers.jc", "viscous_burgers.jc", "toy_mhd.jc", "transport.jc", "heat.jc"}) {
        CAPTURE(f);
        const PDESystem sys = load(f);
        const JunctionConditionSet c = via_resoluble(sys, TraceBinding::no_jump());
        CHECK(c.empty());
        CHECK(c.count() == 0);
        if (sys.mh)
            CHECK(derive_junction_conditions(sys, *sys.mh, TraceBinding::no_jump()).empty());
    }
}

TEST_CASE("heat: second-order conditions")
{
    const PDESystem sys = load("heat.jc");
    const JunctionConditionSet conds = via_resoluble(sys);
    const auto& atoms = conds.equations[0].atoms;
    const Expr chi = up() - um();
    // u_t - u_xx with u = u- + chi H:
    //   D_t H = gamma_t delta, D_xx H = gamma_xx delta + gamma_x^2 D^1 delta,
    //   -2 D_x chi D_x H = -2 chi_x gamma_x delta
    REQUIRE(atoms.count(DistAtom::dirac(1)) == 1);
    CHECK(atoms.at(DistAtom::dirac(1)).coefficient == Rational(-1) * chi * g({0, 1}) * g({0, 1}));
    const Expr chi_x = up(0, {0, 1}) - um(0, {0, 1});
    REQUIRE(atoms.count(DistAtom::dirac(0)) == 1);
    CHECK(atoms.at(DistAtom::dirac(0)).coefficient == chi * g({1, 0}) - chi * g({0, 2}) - Rational(2) * chi_x * g({0, 1}));
}

TEST_CASE("restriction to Gamma removes gamma factors")
{
    EquationConditions eq;
    const Expr gv(Atom::gamma(MultiIndex(2)));
    eq.atoms[DistAtom::dirac(1)] = Condition{gv * up()};
    eq.atoms[DistAtom::dirac(0)] = Condition{um()};
    JunctionConditionSet set{{eq}};
    const JunctionConditionSet r = restrict_to_gamma(set);
    REQUIRE(r.equations[0].atoms.size() == 1);
    // gamma D^1 delta = -delta
    CHECK(r.equations[0].atoms.at(DistAtom::dirac(0)).coefficient == um() - up());

    EquationConditions vanish;
    vanish.atoms[DistAtom::dirac(0)] = Condition{gv};
    CHECK(restrict_to_gamma(JunctionConditionSet{{vanish}}).empty());
}

TEST_CASE("simplification checks the smooth part")
{
    const PDESystem sys = load("burgers.jc");
    JunctionConditionSet raw = junction_from_resoluble(sys, resoluble_decompose(sys).certificate());
    CHECK_NOTHROW(simplify_with_classical(raw, sys));
    raw.equations[0].atoms[DistAtom::one()].coefficient += Expr(1);
    CHECK_THROWS_AS(simplify_with_classical(raw, sys), std::logic_error);
}

TEST_CASE("loci of distributional atoms")
{
    CHECK(locus(DistAtom::one()) == Locus::Everywhere);
    CHECK(locus(DistAtom::heaviside()) == Locus::NearGamma);
    CHECK(locus(DistAtom::dirac(0)) == Locus::OnGamma);
    CHECK(locus(DistAtom::dirac(3)) == Locus::OnGamma);
}

TEST_CASE("linear operators on generalized expressions")
{
    const LinearOpSpec dx = LinearOpSpec::partial(2, 1);
    CHECK(apply_linear_op(dx, GenExpr::heaviside(), 2) == GenExpr(DistAtom::dirac(0), g({0, 1})));
    const Expr t(Atom::coordinate(0));
    const LinearOpSpec tdx({{t, mi({0, 1})}});
    CHECK(apply_linear_op(tdx, GenExpr(t), 2).is_zero());
    CHECK(apply_linear_op(LinearOpSpec::identity(2), GenExpr::dirac(1), 2) == GenExpr::dirac(1));
}

TEST_CASE("trace bindings")
{
    const TraceBinding j = TraceBinding::jump();
    CHECK(j.minus(0, 2) == um());
    CHECK(j.plus(0, 2) == up());
    const TraceBinding n = TraceBinding::no_jump();
    CHECK(n.plus(0, 2) == um());
    const Bindings b = j.psi_chi(1, 2);
    CHECK(b.at(Atom::chi(0, MultiIndex(2))) == up() - um());
}
