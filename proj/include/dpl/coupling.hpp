#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "dpl/measures.hpp"

namespace dpl {

struct Atom {
  Point x = 0;
  Point y = 0;
  Rational mass;

  friend bool operator==(const Atom&, const Atom&) = default;
};

/// Finitely supported joint law on Z^2. Atoms have strictly positive mass,
/// are sorted lexicographically by (x, y) and carry exact marginals.
class Coupling {
 public:
  /// Merges duplicate cells, drops zero masses, sorts, and derives marginals.
  /// Throws when masses are negative or do not sum to one.
  static Coupling from_atoms(std::vector<Atom> atoms);

  const std::vector<Atom>& atoms() const noexcept { return atoms_; }
  const Pmf& marginal0() const noexcept { return marginal0_; }
  const Pmf& marginal1() const noexcept { return marginal1_; }

  /// Mass at (x, y); zero off the support.
  Rational mass(Point x, Point y) const;

  /// For atoms with x1 < x2 we have y1 <= y2 (and symmetrically), i.e. the
  /// support is a totally ordered chain in the product order.
  bool is_staircase() const;

  /// Lines "x y p/q" in lexicographic order.
  std::string dump() const;

  friend bool operator==(const Coupling& a, const Coupling& b) {
    return a.atoms_ == b.atoms_;
  }

 private:
  Coupling(std::vector<Atom> atoms, Pmf m0, Pmf m1)
      : atoms_(std::move(atoms)), marginal0_(std::move(m0)), marginal1_(std::move(m1)) {}

  std::vector<Atom> atoms_;
  Pmf marginal0_;
  Pmf marginal1_;
};

/// Generalized inverse of the CDF: smallest x with F(x) >= t, for 0 < t < 1.
Point quantile(const Pmf& nu, const Rational& t);

/// Law of (F0^{-1}(U), F1^{-1}(U)) for U uniform on (0,1), computed by an exact
/// merge of the two cumulative partitions of (0,1).
Coupling monotone_coupling(const Pmf& nu0, const Pmf& nu1);

/// Law of (F0^{-1}(U), F1^{-1}(1 - U)).
Coupling antitone_coupling(const Pmf& nu0, const Pmf& nu1);

using PointMap = std::function<Point(Point, Point)>;

/// Image measure of the coupling under map.
Pmf pushforward(const Coupling& pi, const PointMap& map);

/// Image coupling under (x, y) -> (first(x, y), second(x, y)).
Coupling pushforward_pair(const Coupling& pi, const PointMap& first,
                          const PointMap& second);

struct BinaryLatticeCoupling {
  /// Coupling of (nu1, nu2).
  Coupling pi;
  /// Image of pi under (x, y) -> (min, max).
  Coupling sorted;
  /// True when nu2(0) <= nu1(0); sorted then couples (nu1, nu2) and equals pi.
  /// Otherwise sorted couples (nu2, nu1).
  bool same_order = true;
};

/// Two-point lattice coupling on {0,1}. Throws Error(kSupportNotBinary).
BinaryLatticeCoupling lattice_coupling_binary(const Pmf& nu1, const Pmf& nu2);

}  // namespace dpl
