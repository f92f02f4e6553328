#pragma once

#include <vector>

#include "dpl/coupling.hpp"

namespace dpl {

/// Midpoint images of the monotone coupling.
struct MidpointPair {
  Pmf nu_minus;  ///< image under floor((x+y)/2)
  Pmf nu_plus;   ///< image under ceil((x+y)/2)
  Coupling pi;   ///< monotone coupling of (nu0, nu1)
};

MidpointPair midpoint_measures(const Pmf& nu0, const Pmf& nu1);

/// Exact value of
///   P = sum over atoms (x,y) of pi of
///       nu_-(m_-(x,y)) nu_+(m_+(x,y)) / (nu0(x) nu1(y)) * pi(x,y),
/// which never exceeds one.
Rational leq1_sum(const Pmf& nu0, const Pmf& nu1);
Rational leq1_sum(const MidpointPair& mp);

struct DisplacementGap {
  /// H(nu0) + H(nu1) - H(nu_-) - H(nu_+), all relative to counting measure.
  double gap = 0.0;
  /// sum pi(x,y) log(ratio(x,y)), equal to -gap up to rounding.
  double jensen_sum = 0.0;
  /// log(P); jensen_sum <= log_p by concavity of log.
  double log_p = 0.0;
  Rational p;
};

DisplacementGap displacement_gap(const Pmf& nu0, const Pmf& nu1);
DisplacementGap displacement_gap(const MidpointPair& mp);

/// Atoms of a monotone coupling sharing the same floor midpoint a.
struct LevelSet {
  Point a = 0;
  std::vector<Atom> pairs;  ///< lexicographic order
};

/// Partition of supp(pi) by floor midpoint, in increasing a.
/// Throws Error(kNotMonotone) when pi is not a staircase.
std::vector<LevelSet> level_sets(const Coupling& pi);

/// Both sides of the two elementary midpoint equivalences for
/// (x1,y1) <= (x2,y2), distinct.
struct ElemPredicates {
  // Item 1: floors equal  <=>  (y2-y1)+(x2-x1) == 1 and x1+y1 even.
  bool floors_equal = false;
  bool item1_rhs = false;
  bool item1_agrees = false;
  /// When floors are equal, the ceiling of the second pair is one larger.
  bool ceil_increment_holds = true;

  // Item 2, only when floor(first) < floor(second).
  bool item2_applicable = false;
  bool item2_far = false;  ///< floors differ by at least two
  bool ceils_equal = false;
  /// far: ceilings differ; adjacent: gap == 1 and x1+y1 odd.
  bool item2_rhs = false;
  bool item2_agrees = true;

  bool all_agree() const { return item1_agrees && ceil_increment_holds && item2_agrees; }
};

/// Throws Error(kPreconditionViolated) unless x1<=x2, y1<=y2 and the pairs differ.
ElemPredicates elem_predicates(Point x1, Point y1, Point x2, Point y2);

/// How a level-set value sits relative to its neighbours' ceiling images.
struct ChainReport {
  Point first_a = 0;
  Point last_a = 0;
  /// Single level set whose ceiling image meets neither neighbour's.
  bool isolated = true;
  Rational partial_p;   ///< P restricted to the chain's atoms
  Rational chain_mass;  ///< pi mass of the chain's atoms
  /// Per-term ratios are <= 1 for isolated sets; the chain bound
  /// partial_p <= chain_mass holds for every chain.
  bool bound_holds = true;
};

/// Splits the level sets into maximal chains where consecutive ceiling
/// images intersect, and checks the per-chain bound.
std::vector<ChainReport> chain_decomposition(const MidpointPair& mp);

}  // namespace dpl
