#include "dpl/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <queue>

#include "dpl/error.hpp"

namespace dpl {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kEntropySlack = 1e-10;

}  // namespace

// ---------------------------------------------------------------------------
// Reference measures and curvature costs

LogWeights::LogWeights(Point offset, std::vector<Rational> weights)
    : offset_(offset), weights_(std::move(weights)) {
  double top = -kInf;
  for (const auto& w : weights_) top = std::max(top, to_double(w));
  long double acc = 0;
  for (const auto& w : weights_) acc += std::exp(static_cast<long double>(to_double(w) - top));
  log_normalizer_ = top + static_cast<double>(std::log(acc));
}

LogWeights LogWeights::make(Point offset, std::vector<Rational> weights) {
  if (weights.empty()) {
    throw Error(ErrorKind::kPreconditionViolated, "log-weights need a non-empty window");
  }
  return LogWeights(offset, std::move(weights));
}

LogWeights LogWeights::geometric(Point half_width) {
  std::vector<Rational> w;
  for (Point x = -half_width; x <= half_width; ++x) w.emplace_back(-std::abs(x));
  return make(-half_width, std::move(w));
}

LogWeights LogWeights::gaussian(Point half_width) {
  std::vector<Rational> w;
  for (Point x = -half_width; x <= half_width; ++x) w.emplace_back(-2 * x * x);
  return make(-half_width, std::move(w));
}

const Rational& LogWeights::weight(Point x) const {
  if (!contains(x)) {
    throw Error(ErrorKind::kOutsidePositiveWindow,
                "point " + std::to_string(x) + " outside the log-weight window");
  }
  return weights_[static_cast<std::size_t>(x - offset_)];
}

double LogWeights::log_mass(Point x) const { return to_double(weight(x)) - log_normalizer_; }

double cost_mu(const Pmf& mu, Point x, Point y) {
  Point lo = mid_floor(x, y), hi = mid_ceil(x, y);
  for (Point p : {x, y, lo, hi}) {
    if (!mu.charges(p)) {
      throw Error(ErrorKind::kOutsidePositiveWindow,
                  "mu vanishes at " + std::to_string(p));
    }
  }
  return log_of(mu.mass(lo) * mu.mass(hi) / (mu.mass(x) * mu.mass(y)));
}

Rational cost_mu(const LogWeights& mu, Point x, Point y) {
  return mu.weight(mid_floor(x, y)) + mu.weight(mid_ceil(x, y)) - mu.weight(x) - mu.weight(y);
}

LogConcavity is_log_concave(const Pmf& mu) {
  LogConcavity out;
  for (Point x = mu.min_point(); x <= mu.max_point(); ++x) {
    Rational m = mu.mass(x);
    // The window ends are charged, so an interior zero breaks interval support.
    if (sgn(m) == 0 || mu.mass(x - 1) * mu.mass(x + 1) > m * m) {
      out.holds = false;
      out.witness = x;
      return out;
    }
  }
  return out;
}

LogConcavity is_log_concave(const LogWeights& mu) {
  LogConcavity out;
  for (Point x = mu.min_point() + 1; x < mu.max_point(); ++x) {
    if (mu.weight(x - 1) + mu.weight(x + 1) > 2 * mu.weight(x)) {
      out.holds = false;
      out.witness = x;
      return out;
    }
  }
  return out;
}

double v_mu(const Pmf& mu, double t) {
  auto lo = static_cast<Point>(std::floor(t));
  auto hi = static_cast<Point>(std::ceil(t));
  for (Point p : {lo, hi}) {
    if (!mu.charges(p)) {
      throw Error(ErrorKind::kOutsidePositiveWindow, "V_mu undefined at " + std::to_string(p));
    }
  }
  double a = log_of(mu.mass(lo));
  if (lo == hi) return a;
  double b = log_of(mu.mass(hi));
  double s = t - static_cast<double>(lo);
  return (1.0 - s) * a + s * b;
}

bool v_mu_is_concave(const Pmf& mu) {
  // log mu is -infinity at an interior zero, which breaks concavity.
  for (Point x = mu.min_point(); x <= mu.max_point(); ++x) {
    if (!mu.charges(x)) return false;
  }
  for (Point x = mu.min_point() + 1; x < mu.max_point(); ++x) {
    double second = v_mu(mu, static_cast<double>(x - 1)) + v_mu(mu, static_cast<double>(x + 1)) -
                    2.0 * v_mu(mu, static_cast<double>(x));
    if (second > 1e-12) return false;
  }
  return true;
}

CostCheck cost_nonnegativity_check(const Pmf& mu) {
  CostCheck out;
  for (Point x = mu.min_point(); x <= mu.max_point(); ++x) {
    for (Point y = mu.min_point(); y <= mu.max_point(); ++y) {
      double c = cost_mu(mu, x, y);
      if (c < -1e-12) {
        out.holds = false;
        out.witness = std::pair{x, y};
        out.value = c;
        return out;
      }
    }
  }
  return out;
}

CostCheck cost_nonnegativity_check(const LogWeights& mu) {
  CostCheck out;
  for (Point x = mu.min_point(); x <= mu.max_point(); ++x) {
    for (Point y = mu.min_point(); y <= mu.max_point(); ++y) {
      Rational c = cost_mu(mu, x, y);
      if (sgn(c) < 0) {
        out.holds = false;
        out.witness = std::pair{x, y};
        out.value = to_double(c);
        return out;
      }
    }
  }
  return out;
}

std::int64_t closed_form_cost(ClosedFormKind kind, Point x, Point y) {
  if (kind == ClosedFormKind::kGeometric) {
    return (x < 0) != (y < 0) && x != 0 && y != 0 ? 2 * std::min(std::abs(x), std::abs(y)) : 0;
  }
  std::int64_t d = x - y;
  return ((x + y) & 1) == 0 ? d * d : d * d - 1;
}

CostFn CostFn::curvature(const Pmf& mu) {
  CostFn c;
  c.name = "curvature(pmf)";
  c.symmetric = true;
  c.eval = [mu](Point x, Point y) { return cost_mu(mu, x, y); };
  return c;
}

CostFn CostFn::curvature(const LogWeights& mu) {
  CostFn c;
  c.name = "curvature(log-weights)";
  c.symmetric = true;
  c.eval = [mu](Point x, Point y) { return to_double(cost_mu(mu, x, y)); };
  c.exact = [mu](Point x, Point y) -> std::optional<Rational> { return cost_mu(mu, x, y); };
  return c;
}

CostFn CostFn::closed_form(ClosedFormKind kind) {
  CostFn c;
  c.name = kind == ClosedFormKind::kGeometric ? "geometric" : "gaussian";
  c.symmetric = true;
  c.eval = [kind](Point x, Point y) { return static_cast<double>(closed_form_cost(kind, x, y)); };
  c.exact = [kind](Point x, Point y) -> std::optional<Rational> {
    return Rational(closed_form_cost(kind, x, y));
  };
  return c;
}

CostFn CostFn::table(std::map<std::pair<Point, Point>, Rational> entries) {
  CostFn c;
  c.name = "table";
  c.symmetric = std::all_of(entries.begin(), entries.end(), [&](const auto& kv) {
    auto it = entries.find({kv.first.second, kv.first.first});
    return it != entries.end() && it->second == kv.second;
  });
  auto shared = std::make_shared<const std::map<std::pair<Point, Point>, Rational>>(std::move(entries));
  c.eval = [shared](Point x, Point y) {
    auto it = shared->find({x, y});
    return it == shared->end() ? kInf : to_double(it->second);
  };
  c.exact = [shared](Point x, Point y) -> std::optional<Rational> {
    auto it = shared->find({x, y});
    if (it == shared->end()) return std::nullopt;
    return it->second;
  };
  return c;
}

// ---------------------------------------------------------------------------
// Transportation simplex

namespace {

/// Cost with a symbolic "forbidden" component compared first (big-M without
/// a numeric M).
template <class C>
struct LexCost {
  long big = 0;
  C small = C(0);

  LexCost operator+(const LexCost& o) const { return {big + o.big, C(small + o.small)}; }
  LexCost operator-(const LexCost& o) const { return {big - o.big, C(small - o.small)}; }
};

template <class C>
bool is_negative(const LexCost<C>& r, double eps) {
  if (r.big != 0) return r.big < 0;
  if constexpr (std::is_same_v<C, Rational>) {
    (void)eps;
    return sgn(r.small) < 0;
  } else {
    return r.small < -eps;
  }
}

template <class C>
class TransportationSimplex {
 public:
  TransportationSimplex(std::vector<Rational> supply, std::vector<Rational> demand,
                        std::vector<LexCost<C>> cost, double eps)
      : m_(supply.size()),
        n_(demand.size()),
        supply_(std::move(supply)),
        demand_(std::move(demand)),
        cost_(std::move(cost)),
        eps_(eps) {}

  void solve() {
    northwest_corner();
    while (true) {
      compute_duals();
      auto entering = price();
      if (!entering) break;
      pivot(*entering);
    }
    compute_duals();
  }

  struct Basic {
    std::size_t cell;
    Rational flow;
  };

  const std::vector<Basic>& basis() const { return basis_; }
  const std::vector<LexCost<C>>& u() const { return u_; }
  const std::vector<LexCost<C>>& v() const { return v_; }

 private:
  std::size_t row(std::size_t cell) const { return cell / n_; }
  std::size_t col(std::size_t cell) const { return cell % n_; }

  void northwest_corner() {
    auto s = supply_;
    auto d = demand_;
    std::size_t i = 0, j = 0;
    while (true) {
      Rational f = std::min(s[i], d[j]);
      basis_.push_back({i * n_ + j, f});
      s[i] -= f;
      d[j] -= f;
      if (i + 1 == m_ && j + 1 == n_) break;
      if ((sgn(s[i]) == 0 && i + 1 < m_) || j + 1 == n_) {
        ++i;
      } else {
        ++j;
      }
    }
    in_basis_.assign(m_ * n_, false);
    for (const auto& b : basis_) in_basis_[b.cell] = true;
  }

  void compute_duals() {
    u_.assign(m_, LexCost<C>{});
    v_.assign(n_, LexCost<C>{});
    std::vector<bool> ku(m_, false), kv(n_, false);
    ku[0] = true;
    std::size_t known = 1;
    // Tree with m+n-1 edges: repeated sweeps settle every node.
    while (known < m_ + n_) {
      bool progress = false;
      for (const auto& b : basis_) {
        std::size_t i = row(b.cell), j = col(b.cell);
        if (ku[i] && !kv[j]) {
          v_[j] = cost_[b.cell] - u_[i];
          kv[j] = true;
          ++known;
          progress = true;
        } else if (!ku[i] && kv[j]) {
          u_[i] = cost_[b.cell] - v_[j];
          ku[i] = true;
          ++known;
          progress = true;
        }
      }
      if (!progress) throw std::logic_error("transportation basis is not a spanning tree");
    }
  }

  std::optional<std::size_t> price() const {
    for (std::size_t cell = 0; cell < m_ * n_; ++cell) {
      if (in_basis_[cell]) continue;
      auto r = cost_[cell] - u_[row(cell)] - v_[col(cell)];
      if (is_negative(r, eps_)) return cell;
    }
    return std::nullopt;
  }

  void pivot(std::size_t entering) {
    // Path in the basis tree from row node i to column node m+j.
    const std::size_t nodes = m_ + n_;
    std::vector<std::vector<std::size_t>> adj(nodes);
    for (std::size_t k = 0; k < basis_.size(); ++k) {
      adj[row(basis_[k].cell)].push_back(k);
      adj[m_ + col(basis_[k].cell)].push_back(k);
    }
    std::size_t start = row(entering), goal = m_ + col(entering);
    std::vector<std::ptrdiff_t> via(nodes, -1);
    std::vector<bool> seen(nodes, false);
    std::queue<std::size_t> q;
    q.push(start);
    seen[start] = true;
    while (!q.empty()) {
      std::size_t node = q.front();
      q.pop();
      if (node == goal) break;
      for (std::size_t k : adj[node]) {
        std::size_t i = row(basis_[k].cell), j = m_ + col(basis_[k].cell);
        std::size_t other = node == i ? j : i;
        if (!seen[other]) {
          seen[other] = true;
          via[other] = static_cast<std::ptrdiff_t>(k);
          q.push(other);
        }
      }
    }
    // Walk back from the column; edges alternate -, +, -, ...
    std::vector<std::size_t> minus, plus;
    std::size_t node = goal;
    bool sign_minus = true;
    while (node != start) {
      auto k = static_cast<std::size_t>(via[node]);
      (sign_minus ? minus : plus).push_back(k);
      sign_minus = !sign_minus;
      std::size_t i = row(basis_[k].cell), j = m_ + col(basis_[k].cell);
      node = node == i ? j : i;
    }
    std::size_t leave = minus.front();
    for (std::size_t k : minus) {
      const auto& cand = basis_[k];
      const auto& best = basis_[leave];
      if (cand.flow < best.flow || (cand.flow == best.flow && cand.cell < best.cell)) leave = k;
    }
    Rational theta = basis_[leave].flow;
    for (std::size_t k : minus) basis_[k].flow -= theta;
    for (std::size_t k : plus) basis_[k].flow += theta;
    in_basis_[basis_[leave].cell] = false;
    in_basis_[entering] = true;
    basis_[leave] = Basic{entering, theta};
  }

  std::size_t m_, n_;
  std::vector<Rational> supply_, demand_;
  std::vector<LexCost<C>> cost_;
  double eps_;
  std::vector<Basic> basis_;
  std::vector<bool> in_basis_;
  std::vector<LexCost<C>> u_, v_;
};

std::vector<std::pair<Point, Rational>> support_points(const Pmf& nu) {
  std::vector<std::pair<Point, Rational>> out;
  for (Point x = nu.min_point(); x <= nu.max_point(); ++x) {
    if (nu.charges(x)) out.emplace_back(x, nu.mass(x));
  }
  return out;
}

double as_double(const Rational& q) { return to_double(q); }
double as_double(double d) { return d; }

template <class C>
TransportPlanResult solve_transport(const CostFn& c, const Pmf& nu0, const Pmf& nu1,
                                    bool want_duals) {
  auto src = support_points(nu0);
  auto dst = support_points(nu1);
  const std::size_t m = src.size(), n = dst.size();
  std::vector<LexCost<C>> cost(m * n);
  double scale = 1.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      auto& cell = cost[i * n + j];
      if constexpr (std::is_same_v<C, Rational>) {
        auto value = c.exact(src[i].first, dst[j].first);
        if (value) {
          cell.small = *value;
        } else {
          cell.big = 1;
        }
      } else {
        double value = c.eval(src[i].first, dst[j].first);
        if (std::isinf(value) && value > 0) {
          cell.big = 1;
        } else {
          cell.small = value;
          scale = std::max(scale, std::abs(value));
        }
      }
    }
  }
  std::vector<Rational> supply, demand;
  for (auto& s : src) supply.push_back(s.second);
  for (auto& d : dst) demand.push_back(d.second);
  TransportationSimplex<C> simplex(std::move(supply), std::move(demand), cost, 1e-12 * scale);
  simplex.solve();

  std::vector<Atom> atoms;
  C total = C(0);
  for (const auto& b : simplex.basis()) {
    if (sgn(b.flow) == 0) continue;
    if (cost[b.cell].big != 0) {
      throw Error(ErrorKind::kInfeasibleCost, "every plan uses a pair with infinite cost");
    }
    std::size_t i = b.cell / n, j = b.cell % n;
    atoms.push_back(Atom{src[i].first, dst[j].first, b.flow});
    if constexpr (std::is_same_v<C, Rational>) {
      total += cost[b.cell].small * b.flow;
    } else {
      total += cost[b.cell].small * to_double(b.flow);
    }
  }
  TransportPlanResult out{as_double(total), std::nullopt, Coupling::from_atoms(std::move(atoms)),
                          std::nullopt, std::nullopt, 0.0};
  if constexpr (std::is_same_v<C, Rational>) out.exact_cost = total;

  bool finite_duals =
      std::all_of(simplex.u().begin(), simplex.u().end(), [](const auto& d) { return d.big == 0; }) &&
      std::all_of(simplex.v().begin(), simplex.v().end(), [](const auto& d) { return d.big == 0; });
  if (want_duals && finite_duals) {
    std::vector<double> u(nu0.width(), -kInf), v(nu1.width(), -kInf);
    long double dual = 0;
    for (std::size_t i = 0; i < m; ++i) {
      double ui = as_double(simplex.u()[i].small);
      u[static_cast<std::size_t>(src[i].first - nu0.min_point())] = ui;
      dual += static_cast<long double>(ui) * to_double(src[i].second);
    }
    for (std::size_t j = 0; j < n; ++j) {
      double vj = as_double(simplex.v()[j].small);
      v[static_cast<std::size_t>(dst[j].first - nu1.min_point())] = vj;
      dual += static_cast<long double>(vj) * to_double(dst[j].second);
    }
    out.u = RealFn::make(nu0.min_point(), std::move(u));
    out.v = RealFn::make(nu1.min_point(), std::move(v));
    out.dual_value = static_cast<double>(dual);
  }
  return out;
}

}  // namespace

TransportPlanResult ot_cost(const CostFn& c, const Pmf& nu0, const Pmf& nu1, bool want_duals) {
  if (c.exact) return solve_transport<Rational>(c, nu0, nu1, want_duals);
  return solve_transport<double>(c, nu0, nu1, want_duals);
}

TransportPlanResult ot_cost_float(const CostFn& c, const Pmf& nu0, const Pmf& nu1,
                                  bool want_duals) {
  return solve_transport<double>(c, nu0, nu1, want_duals);
}

// ---------------------------------------------------------------------------
// Transport-entropy inequality and its dual form

double relative_entropy(const Pmf& nu, const LogWeights& mu) {
  long double acc = 0;
  for (Point x = nu.min_point(); x <= nu.max_point(); ++x) {
    Rational p = nu.mass(x);
    if (sgn(p) == 0) continue;
    if (!mu.contains(x)) return kInf;
    acc += static_cast<long double>(to_double(p)) * (log_of(p) - mu.log_mass(x));
  }
  return static_cast<double>(acc);
}

namespace {

template <class Mu>
TransportEntropyCheck te_check(const Mu& mu, const Pmf& nu0, const Pmf& nu1) {
  TransportEntropyCheck out;
  out.rhs = relative_entropy(nu0, mu) + relative_entropy(nu1, mu);
  if (std::isinf(out.rhs)) return out;  // vacuous: some nu charges a mu-null point
  auto plan = ot_cost(CostFn::curvature(mu), nu0, nu1);
  out.lhs = plan.cost;
  out.holds = *out.lhs <= out.rhs + kEntropySlack;
  return out;
}

double mu_weight(const Pmf& mu, Point x) { return to_double(mu.mass(x)); }
double mu_weight(const LogWeights& mu, Point x) {
  return mu.contains(x) ? std::exp(mu.log_mass(x)) : 0.0;
}

template <class Mu, class Cost>
DualProductCheck product_check(const Mu& mu, const RealFn& u, const RealFn& v, Cost cost) {
  for (Point x = u.min_point(); x <= u.max_point(); ++x) {
    if (u.at(x) == -kInf) continue;
    for (Point y = v.min_point(); y <= v.max_point(); ++y) {
      if (v.at(y) == -kInf) continue;
      double c = cost(x, y);
      if (u.at(x) + v.at(y) > c + 1e-12) {
        throw Error(ErrorKind::kConstraintViolated,
                    "u(" + std::to_string(x) + ") + v(" + std::to_string(y) + ") exceeds c_mu");
      }
    }
  }
  auto moment = [&](const RealFn& fn) {
    long double acc = 0;
    for (Point x = fn.min_point(); x <= fn.max_point(); ++x) {
      if (fn.at(x) == -kInf) continue;
      acc += std::exp(static_cast<long double>(fn.at(x))) * mu_weight(mu, x);
    }
    return acc;
  };
  DualProductCheck out;
  out.product = static_cast<double>(moment(u) * moment(v));
  out.holds = out.product <= 1.0 + kEntropySlack;
  return out;
}

}  // namespace

TransportEntropyCheck transport_entropy_check(const Pmf& mu, const Pmf& nu0, const Pmf& nu1) {
  return te_check(mu, nu0, nu1);
}

TransportEntropyCheck transport_entropy_check(const LogWeights& mu, const Pmf& nu0,
                                              const Pmf& nu1) {
  return te_check(mu, nu0, nu1);
}

DualProductCheck dual_product_check(const Pmf& mu, const RealFn& u, const RealFn& v) {
  return product_check(mu, u, v, [&](Point x, Point y) { return cost_mu(mu, x, y); });
}

DualProductCheck dual_product_check(const LogWeights& mu, const RealFn& u, const RealFn& v) {
  return product_check(mu, u, v,
                       [&](Point x, Point y) { return to_double(cost_mu(mu, x, y)); });
}

}  // namespace dpl
