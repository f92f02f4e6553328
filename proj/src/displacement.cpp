#include "dpl/displacement.hpp"

#include <algorithm>
#include <set>

#include "dpl/error.hpp"

namespace dpl {

namespace {

Rational atom_ratio(const MidpointPair& mp, const Atom& a) {
  Rational num = mp.nu_minus.mass(mid_floor(a.x, a.y)) * mp.nu_plus.mass(mid_ceil(a.x, a.y));
  Rational den = mp.pi.marginal0().mass(a.x) * mp.pi.marginal1().mass(a.y);
  return num / den;
}

}  // namespace

MidpointPair midpoint_measures(const Pmf& nu0, const Pmf& nu1) {
  auto pi = monotone_coupling(nu0, nu1);
  auto minus = pushforward(pi, mid_floor);
  auto plus = pushforward(pi, mid_ceil);
  return MidpointPair{std::move(minus), std::move(plus), std::move(pi)};
}

Rational leq1_sum(const MidpointPair& mp) {
  Rational p = 0;
  for (const auto& a : mp.pi.atoms()) p += atom_ratio(mp, a) * a.mass;
  return p;
}

Rational leq1_sum(const Pmf& nu0, const Pmf& nu1) {
  return leq1_sum(midpoint_measures(nu0, nu1));
}

DisplacementGap displacement_gap(const MidpointPair& mp) {
  DisplacementGap out;
  out.gap = entropy_rel_counting(mp.pi.marginal0()) + entropy_rel_counting(mp.pi.marginal1()) -
            entropy_rel_counting(mp.nu_minus) - entropy_rel_counting(mp.nu_plus);
  long double jensen = 0;
  out.p = 0;
  for (const auto& a : mp.pi.atoms()) {
    Rational r = atom_ratio(mp, a);
    jensen += static_cast<long double>(to_double(a.mass)) * log_of(r);
    out.p += r * a.mass;
  }
  out.jensen_sum = static_cast<double>(jensen);
  out.log_p = log_of(out.p);
  return out;
}

DisplacementGap displacement_gap(const Pmf& nu0, const Pmf& nu1) {
  return displacement_gap(midpoint_measures(nu0, nu1));
}

std::vector<LevelSet> level_sets(const Coupling& pi) {
  if (!pi.is_staircase()) {
    throw Error(ErrorKind::kNotMonotone, "coupling support is not a monotone staircase");
  }
  std::vector<LevelSet> out;
  for (const auto& atom : pi.atoms()) {
    Point a = mid_floor(atom.x, atom.y);
    if (out.empty() || out.back().a != a) out.push_back(LevelSet{a, {}});
    out.back().pairs.push_back(atom);
  }
  return out;
}

ElemPredicates elem_predicates(Point x1, Point y1, Point x2, Point y2) {
  if (x1 > x2 || y1 > y2 || (x1 == x2 && y1 == y2)) {
    throw Error(ErrorKind::kPreconditionViolated,
                "need x1 <= x2, y1 <= y2 and distinct pairs");
  }
  ElemPredicates r;
  Point s1 = x1 + y1;
  Point gap = (x2 - x1) + (y2 - y1);
  bool s1_even = (s1 & 1) == 0;
  Point f1 = mid_floor(x1, y1), f2 = mid_floor(x2, y2);
  Point c1 = mid_ceil(x1, y1), c2 = mid_ceil(x2, y2);

  r.floors_equal = f1 == f2;
  r.item1_rhs = gap == 1 && s1_even;
  r.item1_agrees = r.floors_equal == r.item1_rhs;
  r.ceil_increment_holds = !r.floors_equal || c2 == c1 + 1;

  r.item2_applicable = f1 < f2;
  if (r.item2_applicable) {
    r.item2_far = f2 >= f1 + 2;
    r.ceils_equal = c1 == c2;
    r.item2_rhs = r.item2_far ? false : (gap == 1 && !s1_even);
    r.item2_agrees = r.ceils_equal == r.item2_rhs;
  }
  return r;
}

std::vector<ChainReport> chain_decomposition(const MidpointPair& mp) {
  auto sets = level_sets(mp.pi);
  auto ceil_image = [](const LevelSet& s) {
    std::set<Point> img;
    for (const auto& a : s.pairs) img.insert(mid_ceil(a.x, a.y));
    return img;
  };
  auto linked = [&](const LevelSet& lo, const LevelSet& hi) {
    if (hi.a != lo.a + 1) return false;
    auto a = ceil_image(lo);
    auto b = ceil_image(hi);
    return std::any_of(a.begin(), a.end(), [&](Point z) { return b.count(z) > 0; });
  };

  std::vector<ChainReport> out;
  std::size_t i = 0;
  while (i < sets.size()) {
    std::size_t j = i;
    while (j + 1 < sets.size() && linked(sets[j], sets[j + 1])) ++j;
    ChainReport rep;
    rep.first_a = sets[i].a;
    rep.last_a = sets[j].a;
    rep.isolated = i == j;
    rep.partial_p = 0;
    rep.chain_mass = 0;
    bool termwise = true;
    for (std::size_t k = i; k <= j; ++k) {
      for (const auto& atom : sets[k].pairs) {
        Rational r = atom_ratio(mp, atom);
        if (r > 1) termwise = false;
        rep.partial_p += r * atom.mass;
        rep.chain_mass += atom.mass;
      }
    }
    rep.bound_holds = rep.partial_p <= rep.chain_mass && (!rep.isolated || termwise);
    out.push_back(std::move(rep));
    i = j + 1;
  }
  return out;
}

}  // namespace dpl
