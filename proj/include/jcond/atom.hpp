#pragma once

#include "jcond/multi_index.hpp"

#include <compare>
#include <cstdint>
#include <string>

namespace jcond {

/// Kinds of jet atoms, in canonical order.
enum class AtomKind : std::uint8_t {
    Coordinate, // x_i
    CoeffFn,    // D^p c(x), opaque smooth coefficient
    Unknown,    // D^p U_alpha
    Trace,      // D^p (U_-)_alpha or D^p (U_+)_alpha
    Psi,        // D^p psi_alpha
    Chi,        // D^p chi_alpha
    Omega,      // D^p omega
    Gamma,      // D^p gamma
};

/// Side of a one-sided trace. Plus sorts first.
enum class Side : std::uint8_t { Plus, Minus };

/// A commuting symbol of the polynomial kernel. Jets are flat: D^p U_alpha is a
/// single atom and differentiation only bumps `jet`.
struct Atom {
    AtomKind kind = AtomKind::Coordinate;
    Side side = Side::Plus; // Trace only
    std::size_t index = 0;  // coordinate axis or unknown alpha, 0-based
    std::string name;       // CoeffFn only
    MultiIndex jet;         // empty for Coordinate

    static Atom coordinate(std::size_t axis) { return {AtomKind::Coordinate, Side::Plus, axis, {}, {}}; }
    static Atom coeff(std::string name, MultiIndex jet)
    {
        return {AtomKind::CoeffFn, Side::Plus, 0, std::move(name), std::move(jet)};
    }
    static Atom unknown(std::size_t alpha, MultiIndex jet) { return {AtomKind::Unknown, Side::Plus, alpha, {}, std::move(jet)}; }
    static Atom trace(Side side, std::size_t alpha, MultiIndex jet) { return {AtomKind::Trace, side, alpha, {}, std::move(jet)}; }
    static Atom psi(std::size_t alpha, MultiIndex jet) { return {AtomKind::Psi, Side::Plus, alpha, {}, std::move(jet)}; }
    static Atom chi(std::size_t alpha, MultiIndex jet) { return {AtomKind::Chi, Side::Plus, alpha, {}, std::move(jet)}; }
    static Atom omega(MultiIndex jet) { return {AtomKind::Omega, Side::Plus, 0, {}, std::move(jet)}; }
    static Atom gamma(MultiIndex jet) { return {AtomKind::Gamma, Side::Plus, 0, {}, std::move(jet)}; }

    bool has_jet() const { return kind != AtomKind::Coordinate; }

    /// Same symbol with zero derivative index.
    Atom base() const
    {
        Atom a = *this;
        a.jet = MultiIndex(jet.dim());
        return a;
    }

    Atom with_jet(MultiIndex p) const
    {
        Atom a = *this;
        a.jet = std::move(p);
        return a;
    }

    friend bool operator==(const Atom&, const Atom&) = default;
    friend std::strong_ordering operator<=>(const Atom& a, const Atom& b);
};

} // namespace jcond
