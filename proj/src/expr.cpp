#include "jcond/expr.hpp"

#include <algorithm>

namespace jcond {

std::strong_ordering operator<=>(const Atom& a, const Atom& b)
{
    if (auto c = a.kind <=> b.kind; c != 0)
        return c;
    if (auto c = a.side <=> b.side; c != 0)
        return c;
    if (auto c = a.index <=> b.index; c != 0)
        return c;
    if (auto c = a.name <=> b.name; c != 0)
        return c;
    return a.jet <=> b.jet;
}

std::strong_ordering operator<=>(const Factor& a, const Factor& b)
{
    if (auto c = a.atom <=> b.atom; c != 0)
        return c;
    return a.power <=> b.power;
}

// ---------------------------------------------------------------- Monomial

Monomial::Monomial(Atom atom, unsigned power)
{
    if (power > 0)
        factors_.push_back({std::move(atom), power});
}

Monomial::Monomial(std::vector<Factor> factors)
{
    std::sort(factors.begin(), factors.end(), [](const Factor& a, const Factor& b) { return a.atom < b.atom; });
    for (auto& f : factors) {
        if (f.power == 0)
            continue;
        if (!factors_.empty() && factors_.back().atom == f.atom)
            factors_.back().power += f.power;
        else
            factors_.push_back(std::move(f));
    }
}

unsigned Monomial::degree() const
{
    unsigned d = 0;
    for (const auto& f : factors_)
        d += f.power;
    return d;
}

unsigned Monomial::power_of(const Atom& atom) const
{
    auto it = std::lower_bound(factors_.begin(), factors_.end(), atom,
                               [](const Factor& f, const Atom& a) { return f.atom < a; });
    return (it != factors_.end() && it->atom == atom) ? it->power : 0;
}

Monomial Monomial::without(const Atom& atom, unsigned count) const
{
    Monomial out;
    for (const auto& f : factors_) {
        if (f.atom == atom) {
            if (f.power < count)
                throw std::logic_error("Monomial::without: power underflow");
            if (f.power > count)
                out.factors_.push_back({f.atom, f.power - count});
        } else {
            out.factors_.push_back(f);
        }
    }
    return out;
}

Monomial operator*(const Monomial& a, const Monomial& b)
{
    Monomial out;
    auto& f = out.factors_;
    f.reserve(a.factors_.size() + b.factors_.size());
    auto i = a.factors_.begin();
    auto j = b.factors_.begin();
    while (i != a.factors_.end() && j != b.factors_.end()) {
        if (i->atom < j->atom)
            f.push_back(*i++);
        else if (j->atom < i->atom)
            f.push_back(*j++);
        else {
            f.push_back({i->atom, i->power + j->power});
            ++i;
            ++j;
        }
    }
    f.insert(f.end(), i, a.factors_.end());
    f.insert(f.end(), j, b.factors_.end());
    return out;
}

std::pair<Monomial, Monomial> Monomial::split(const std::function<bool(const Atom&)>& pred) const
{
    Monomial yes, no;
    for (const auto& f : factors_)
        (pred(f.atom) ? yes : no).factors_.push_back(f);
    return {std::move(yes), std::move(no)};
}

std::strong_ordering operator<=>(const Monomial& a, const Monomial& b)
{
    if (auto c = a.degree() <=> b.degree(); c != 0)
        return c;
    return std::lexicographical_compare_three_way(a.factors_.begin(), a.factors_.end(), b.factors_.begin(),
                                                  b.factors_.end());
}

// -------------------------------------------------------------------- Expr

Expr::Expr(const Rational& c)
{
    if (c != 0)
        terms_.emplace(Monomial{}, c);
}

Expr::Expr(Atom atom) { terms_.emplace(Monomial(std::move(atom)), Rational(1)); }

Expr::Expr(Monomial m, const Rational& c)
{
    if (c != 0)
        terms_.emplace(std::move(m), c);
}

bool Expr::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one()); }

Rational Expr::constant_term() const
{
    auto it = terms_.find(Monomial{});
    return it == terms_.end() ? Rational(0) : it->second;
}

unsigned Expr::degree_in(const std::function<bool(const Atom&)>& pred) const
{
    unsigned best = 0;
    for (const auto& [m, c] : terms_) {
        unsigned d = 0;
        for (const auto& f : m.factors())
            if (pred(f.atom))
                d += f.power;
        best = std::max(best, d);
    }
    return best;
}

bool Expr::any_atom(const std::function<bool(const Atom&)>& pred) const
{
    for (const auto& [m, c] : terms_)
        for (const auto& f : m.factors())
            if (pred(f.atom))
                return true;
    return false;
}

void Expr::for_each_atom(const std::function<void(const Atom&)>& fn) const
{
    for (const auto& [m, c] : terms_)
        for (const auto& f : m.factors())
            fn(f.atom);
}

void Expr::add_term(const Monomial& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0)
            terms_.erase(it);
    }
}

Expr& Expr::operator+=(const Expr& other)
{
    for (const auto& [m, c] : other.terms_)
        add_term(m, c);
    return *this;
}

Expr& Expr::operator-=(const Expr& other)
{
    for (const auto& [m, c] : other.terms_)
        add_term(m, -c);
    return *this;
}

Expr& Expr::operator*=(const Expr& other)
{
    *this = *this * other;
    return *this;
}

Expr& Expr::operator*=(const Rational& c)
{
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_)
        v *= c;
    return *this;
}

Expr operator*(const Expr& a, const Expr& b)
{
    Expr out;
    for (const auto& [ma, ca] : a.terms_)
        for (const auto& [mb, cb] : b.terms_)
            out.add_term(ma * mb, ca * cb);
    return out;
}

Expr operator-(Expr a)
{
    for (auto& [m, v] : a.terms_)
        v = -v;
    return a;
}

Expr pow(const Expr& base, unsigned exponent)
{
    Expr result = Expr::one();
    Expr b = base;
    while (exponent > 0) {
        if (exponent & 1u)
            result *= b;
        exponent >>= 1u;
        if (exponent > 0)
            b *= b;
    }
    return result;
}

// ------------------------------------------------------------- derivatives

Expr atom_derivative(const Atom& atom, std::size_t axis)
{
    if (atom.kind == AtomKind::Coordinate)
        return atom.index == axis ? Expr::one() : Expr::zero();
    if (axis >= atom.jet.dim())
        throw std::out_of_range("derivative direction exceeds atom dimension");
    return Expr(atom.with_jet(atom.jet.bumped(axis)));
}

Expr total_derivative(const Expr& e, std::size_t axis)
{
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        const auto& fs = m.factors();
        for (std::size_t k = 0; k < fs.size(); ++k) {
            Expr d = atom_derivative(fs[k].atom, axis);
            if (d.is_zero())
                continue;
            Monomial rest = m.without(fs[k].atom, 1);
            out += Expr(rest, c * fs[k].power) * d;
        }
    }
    return out;
}

Expr derivative_multi(const Expr& e, const MultiIndex& p)
{
    Expr out = e;
    for (std::size_t axis : p.axis_sequence()) {
        if (out.is_zero())
            break;
        out = total_derivative(out, axis);
    }
    return out;
}

// ------------------------------------------------------------ substitution

namespace {

class Substituter {
public:
    Substituter(const Bindings& b, JetClosure closure) : bindings_(b), closure_(closure)
    {
        for (const auto& [atom, image] : bindings_) {
            if (!atom.has_jet() || atom.jet.is_zero())
                continue;
            auto base = bindings_.find(atom.base());
            if (base == bindings_.end())
                continue;
            if (derivative_multi(base->second, atom.jet) != image)
                throw InconsistentJetBinding("binding of a derivative jet disagrees with the derivative of its base image");
        }
    }

    const Expr* image(const Atom& atom)
    {
        if (auto it = bindings_.find(atom); it != bindings_.end())
            return &it->second;
        if (closure_ == JetClosure::Off || !atom.has_jet() || atom.jet.is_zero())
            return nullptr;
        if (auto it = closed_.find(atom); it != closed_.end())
            return &it->second;
        auto base = bindings_.find(atom.base());
        if (base == bindings_.end())
            return nullptr;
        auto [it, ok] = closed_.emplace(atom, derivative_multi(base->second, atom.jet));
        return &it->second;
    }

private:
    const Bindings& bindings_;
    JetClosure closure_;
    std::map<Atom, Expr> closed_;
};

} // namespace

Expr substitute(const Expr& e, const Bindings& bindings, JetClosure closure)
{
    if (bindings.empty())
        return e;
    Substituter sub(bindings, closure);
    Expr out;
    for (const auto& [m, c] : e.terms()) {
        std::vector<Factor> kept;
        Expr product = Expr(c);
        for (const auto& f : m.factors()) {
            if (const Expr* img = sub.image(f.atom))
                product *= pow(*img, f.power);
            else
                kept.push_back(f);
        }
        out += Expr(Monomial(std::move(kept)), 1) * product;
    }
    return out;
}

double evaluate(const Expr& e, const std::function<double(const Atom&)>& value)
{
    double sum = 0.0;
    std::map<Atom, double> cache;
    for (const auto& [m, c] : e.terms()) {
        double term = c.get_d();
        for (const auto& f : m.factors()) {
            auto it = cache.find(f.atom);
            if (it == cache.end())
                it = cache.emplace(f.atom, value(f.atom)).first;
            double v = it->second;
            for (unsigned k = 0; k < f.power; ++k)
                term *= v;
        }
        sum += term;
    }
    return sum;
}

} // namespace jcond
