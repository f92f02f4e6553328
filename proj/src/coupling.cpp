#include "dpl/coupling.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "dpl/error.hpp"

namespace dpl {

namespace {

Pmf marginal(const std::vector<Atom>& atoms, bool first) {
  std::map<Point, Rational> acc;
  for (const auto& a : atoms) acc[first ? a.x : a.y] += a.mass;
  Point lo = acc.begin()->first;
  Point hi = acc.rbegin()->first;
  std::vector<Rational> masses(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [x, m] : acc) masses[static_cast<std::size_t>(x - lo)] = m;
  return Pmf::make(lo, std::move(masses));
}

// Cumulative breakpoints of the positive atoms: (point, F(point)).
std::vector<std::pair<Point, Rational>> cumulative(const Pmf& nu) {
  std::vector<std::pair<Point, Rational>> out;
  Rational acc = 0;
  for (Point x = nu.min_point(); x <= nu.max_point(); ++x) {
    Rational m = nu.mass(x);
    if (sgn(m) == 0) continue;
    acc += m;
    out.emplace_back(x, acc);
  }
  return out;
}

}  // namespace

Coupling Coupling::from_atoms(std::vector<Atom> atoms) {
  std::map<std::pair<Point, Point>, Rational> cells;
  for (auto& a : atoms) {
    if (sgn(a.mass) < 0) {
      throw Error(ErrorKind::kNegativeMass, "negative coupling mass");
    }
    cells[{a.x, a.y}] += a.mass;
  }
  std::vector<Atom> merged;
  merged.reserve(cells.size());
  for (auto& [xy, m] : cells) {
    if (sgn(m) > 0) merged.push_back(Atom{xy.first, xy.second, m});
  }
  if (merged.empty()) throw NotNormalizedError(Rational(1));
  auto m0 = marginal(merged, true);
  auto m1 = marginal(merged, false);
  return Coupling(std::move(merged), std::move(m0), std::move(m1));
}

Rational Coupling::mass(Point x, Point y) const {
  auto it = std::lower_bound(atoms_.begin(), atoms_.end(), std::pair{x, y},
                             [](const Atom& a, const std::pair<Point, Point>& key) {
                               return std::pair{a.x, a.y} < key;
                             });
  if (it != atoms_.end() && it->x == x && it->y == y) return it->mass;
  return 0;
}

bool Coupling::is_staircase() const {
  // Sorted lexicographically, so a chain means y is non-decreasing too.
  for (std::size_t i = 1; i < atoms_.size(); ++i) {
    if (atoms_[i].y < atoms_[i - 1].y) return false;
  }
  return true;
}

std::string Coupling::dump() const {
  std::ostringstream out;
  for (const auto& a : atoms_) {
    out << a.x << ' ' << a.y << ' ' << format_rational(a.mass) << '\n';
  }
  return out.str();
}

Point quantile(const Pmf& nu, const Rational& t) {
  if (sgn(t) <= 0 || t >= 1) {
    throw Error(ErrorKind::kPreconditionViolated, "quantile level must lie in (0,1)");
  }
  Rational acc = 0;
  for (Point x = nu.min_point(); x <= nu.max_point(); ++x) {
    acc += nu.mass(x);
    if (acc >= t) return x;
  }
  return nu.max_point();
}

Coupling monotone_coupling(const Pmf& nu0, const Pmf& nu1) {
  auto c0 = cumulative(nu0);
  auto c1 = cumulative(nu1);
  std::vector<Atom> atoms;
  atoms.reserve(c0.size() + c1.size());
  std::size_t i = 0, j = 0;
  Rational left = 0;
  // Each atom is the overlap of the half-open quantile intervals
  // [F0(x-), F0(x)) and [F1(y-), F1(y)).
  while (i < c0.size() && j < c1.size()) {
    const Rational& right = std::min(c0[i].second, c1[j].second);
    Rational overlap = right - left;
    if (sgn(overlap) > 0) atoms.push_back(Atom{c0[i].first, c1[j].first, overlap});
    left = right;
    bool advance0 = c0[i].second == left;
    bool advance1 = c1[j].second == left;
    if (advance0) ++i;
    if (advance1) ++j;
  }
  return Coupling::from_atoms(std::move(atoms));
}

Coupling antitone_coupling(const Pmf& nu0, const Pmf& nu1) {
  // Reflect nu1, couple monotonically, reflect back.
  std::vector<Rational> reflected(nu1.masses().rbegin(), nu1.masses().rend());
  auto mirror = Pmf::make(-nu1.max_point(), std::move(reflected));
  auto pi = monotone_coupling(nu0, mirror);
  std::vector<Atom> atoms;
  atoms.reserve(pi.atoms().size());
  for (const auto& a : pi.atoms()) atoms.push_back(Atom{a.x, -a.y, a.mass});
  return Coupling::from_atoms(std::move(atoms));
}

Pmf pushforward(const Coupling& pi, const PointMap& map) {
  std::map<Point, Rational> acc;
  for (const auto& a : pi.atoms()) acc[map(a.x, a.y)] += a.mass;
  Point lo = acc.begin()->first;
  Point hi = acc.rbegin()->first;
  std::vector<Rational> masses(static_cast<std::size_t>(hi - lo + 1));
  for (const auto& [z, m] : acc) masses[static_cast<std::size_t>(z - lo)] = m;
  return Pmf::make(lo, std::move(masses));
}

Coupling pushforward_pair(const Coupling& pi, const PointMap& first,
                          const PointMap& second) {
  std::vector<Atom> atoms;
  atoms.reserve(pi.atoms().size());
  for (const auto& a : pi.atoms()) {
    atoms.push_back(Atom{first(a.x, a.y), second(a.x, a.y), a.mass});
  }
  return Coupling::from_atoms(std::move(atoms));
}

BinaryLatticeCoupling lattice_coupling_binary(const Pmf& nu1, const Pmf& nu2) {
  for (const Pmf* nu : {&nu1, &nu2}) {
    if (nu->min_point() < 0 || nu->max_point() > 1) {
      throw Error(ErrorKind::kSupportNotBinary, "measure not supported in {0,1}");
    }
  }
  BinaryLatticeCoupling out{monotone_coupling(nu1, nu2), Coupling::from_atoms({{0, 0, 1}}),
                            nu2.mass(0) <= nu1.mass(0)};
  out.sorted = pushforward_pair(
      out.pi, [](Point x, Point y) { return std::min(x, y); },
      [](Point x, Point y) { return std::max(x, y); });
  return out;
}

}  // namespace dpl
