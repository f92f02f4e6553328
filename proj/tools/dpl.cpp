// Command-line front end: file-based checks, seeded campaigns and limit
// experiments. Exit codes: 0 pass, 1 inequality failure, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "dpl/campaign.hpp"
#include "dpl/displacement.hpp"
#include "dpl/error.hpp"
#include "dpl/fourfunctions.hpp"
#include "dpl/io.hpp"
#include "dpl/limits.hpp"
#include "dpl/random.hpp"
#include "dpl/transport.hpp"

namespace {

using nlohmann::ordered_json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

std::string num(double v) { return fmt::format("{:.17g}", v); }

ordered_json pmf_json(const dpl::Pmf& nu) {
  ordered_json masses = ordered_json::array();
  for (const auto& m : nu.masses()) masses.push_back(dpl::format_rational(m));
  return {{"offset", nu.offset()}, {"masses", masses}};
}

ordered_json coupling_json(const dpl::Coupling& pi) {
  ordered_json atoms = ordered_json::array();
  for (const auto& a : pi.atoms()) {
    atoms.push_back({{"x", a.x}, {"y", a.y}, {"mass", dpl::format_rational(a.mass)}});
  }
  return atoms;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw dpl::Error(dpl::ErrorKind::kConfigError, "cannot write " + path);
  out << text;
}

std::vector<long> parse_n_list(const std::string& text) {
  std::vector<long> out;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    try {
      std::size_t used = 0;
      long n = std::stol(item, &used);
      if (used != item.size() || n < 1) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw dpl::Error(dpl::ErrorKind::kConfigError, "bad --n entry '" + item + "'");
    }
  }
  if (out.empty()) throw dpl::Error(dpl::ErrorKind::kConfigError, "--n list is empty");
  return out;
}

// ---------------------------------------------------------------------------

struct DisplacementArgs {
  std::string nu0, nu1;
  bool dump = false;
  bool json = false;
};

int run_check_displacement(const DisplacementArgs& a) {
  auto nu0 = dpl::parse_pmf_file(a.nu0);
  auto nu1 = dpl::parse_pmf_file(a.nu1);
  auto mp = dpl::midpoint_measures(nu0, nu1);
  auto gap = dpl::displacement_gap(mp);
  bool ok = gap.p <= 1 && gap.gap >= -1e-12;
  if (a.json) {
    ordered_json j = {{"p", dpl::format_rational(gap.p)},
                      {"log_p", num(gap.log_p)},
                      {"gap", num(gap.gap)},
                      {"jensen_sum", num(gap.jensen_sum)},
                      {"nu_minus", pmf_json(mp.nu_minus)},
                      {"nu_plus", pmf_json(mp.nu_plus)},
                      {"pass", ok}};
    if (a.dump) j["coupling"] = coupling_json(mp.pi);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "P          " << dpl::format_rational(gap.p) << "\n"
              << "entropy gap " << num(gap.gap) << "\n"
              << "nu_minus   " << dpl::emit_pmf(mp.nu_minus)
              << "nu_plus    " << dpl::emit_pmf(mp.nu_plus)
              << (ok ? "PASS" : "FAIL") << "\n";
    if (a.dump) std::cout << mp.pi.dump();
  }
  return ok ? kPass : kFail;
}

// ---------------------------------------------------------------------------

struct FourArgs {
  int dim = 0;
  std::string f, g, h, k;
  bool additive = false;
  bool json = false;
};

int run_check_4ft(const FourArgs& a) {
  auto load = [&](const std::string& path) {
    auto fn = dpl::parse_cubefn_file(path, a.additive);
    if (a.dim != 0 && fn.dim() != a.dim) {
      throw dpl::Error(dpl::ErrorKind::kDimensionMismatch,
                       fmt::format("{} has dimension {}, expected {}", path, fn.dim(), a.dim));
    }
    return fn;
  };
  auto f = load(a.f), g = load(a.g), h = load(a.h), k = load(a.k);
  if (f.dim() != g.dim() || f.dim() != h.dim() || f.dim() != k.dim()) {
    throw dpl::Error(dpl::ErrorKind::kDimensionMismatch, "the four functions differ in dimension");
  }
  bool hypothesis, conclusion;
  ordered_json j;
  std::string witness;
  if (a.additive) {
    auto r = dpl::check_4ft_additive(f, g, h, k);
    hypothesis = r.hypothesis_holds;
    conclusion = r.conclusion_holds;
    if (r.witness) witness = fmt::format("({}, {})", r.witness->first, r.witness->second);
    j = {{"log_lhs", num(r.log_lhs)}, {"log_rhs", num(r.log_rhs)}, {"routes_agree", r.routes_agree}};
  } else {
    auto hyp = dpl::check_4ft_hypothesis(f, g, h, k);
    auto con = dpl::check_4ft_conclusion(f, g, h, k);
    hypothesis = hyp.holds;
    conclusion = con.holds;
    if (hyp.witness) witness = fmt::format("({}, {})", hyp.witness->first, hyp.witness->second);
    j = {{"lhs", dpl::format_rational(con.lhs)}, {"rhs", dpl::format_rational(con.rhs)}};
  }
  // Only a failed conclusion under a valid hypothesis contradicts the theorem.
  bool ok = !hypothesis || conclusion;
  j["dim"] = f.dim();
  j["hypothesis"] = hypothesis;
  if (!witness.empty()) j["witness"] = witness;
  j["conclusion"] = conclusion;
  j["pass"] = ok;
  if (a.json) {
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "dimension  " << f.dim() << "\n"
              << "hypothesis " << (hypothesis ? "holds" : "fails at " + witness) << "\n"
              << "conclusion " << (conclusion ? "holds" : "fails") << "\n";
    for (const auto& key : {"lhs", "rhs", "log_lhs", "log_rhs"}) {
      if (j.contains(key)) std::cout << fmt::format("{:<10} {}\n", key, j[key].get<std::string>());
    }
    std::cout << (ok ? (hypothesis ? "PASS" : "PASS (hypothesis fails, nothing to check)") : "FAIL")
              << "\n";
  }
  return ok ? kPass : kFail;
}

// ---------------------------------------------------------------------------

struct MuArgs {
  std::string mu_file;
  std::string mu_kind;
  long K = 50;
};

using MuVariant = std::variant<dpl::Pmf, dpl::LogWeights>;

MuVariant load_mu(const MuArgs& a) {
  if (!a.mu_file.empty() == !a.mu_kind.empty()) {
    throw dpl::Error(dpl::ErrorKind::kConfigError, "give exactly one of --mu and --mu-kind");
  }
  if (!a.mu_file.empty()) return dpl::parse_pmf_file(a.mu_file);
  if (a.K < 1) throw dpl::Error(dpl::ErrorKind::kConfigError, "--K must be >= 1");
  if (a.mu_kind == "geometric") return dpl::LogWeights::geometric(a.K);
  if (a.mu_kind == "gaussian") return dpl::LogWeights::gaussian(a.K);
  throw dpl::Error(dpl::ErrorKind::kConfigError, "unknown --mu-kind " + a.mu_kind);
}

std::pair<dpl::Point, dpl::Point> mu_window(const MuVariant& mu) {
  return std::visit([](const auto& m) { return std::pair{m.min_point(), m.max_point()}; }, mu);
}

struct TransportArgs {
  MuArgs mu;
  std::string cost_table;
  std::string nu0, nu1;
  bool duals = false;
  bool json = false;
};

int run_transport_cost(const TransportArgs& a) {
  auto nu0 = dpl::parse_pmf_file(a.nu0);
  auto nu1 = dpl::parse_pmf_file(a.nu1);
  dpl::CostFn cost;
  if (!a.cost_table.empty()) {
    cost = dpl::CostFn::table(dpl::parse_cost_table_file(a.cost_table));
  } else {
    auto mu = load_mu(a.mu);
    cost = std::visit([](const auto& m) { return dpl::CostFn::curvature(m); }, mu);
  }
  auto r = dpl::ot_cost(cost, nu0, nu1, a.duals);
  auto fn_json = [](const dpl::RealFn& fn) {
    ordered_json out = ordered_json::object();
    for (dpl::Point x = fn.min_point(); x <= fn.max_point(); ++x) {
      if (std::isfinite(fn.at(x))) out[std::to_string(x)] = num(fn.at(x));
    }
    return out;
  };
  if (a.json) {
    ordered_json j = {{"cost", num(r.cost)}};
    if (r.exact_cost) j["exact_cost"] = dpl::format_rational(*r.exact_cost);
    j["plan"] = coupling_json(r.plan);
    if (r.u && r.v) {
      j["u"] = fn_json(*r.u);
      j["v"] = fn_json(*r.v);
      j["dual_value"] = num(r.dual_value);
    }
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "cost " << num(r.cost);
    if (r.exact_cost) std::cout << " (" << dpl::format_rational(*r.exact_cost) << ")";
    std::cout << "\nplan\n" << r.plan.dump();
    if (r.u && r.v) {
      std::cout << "duals\n";
      for (dpl::Point x = r.u->min_point(); x <= r.u->max_point(); ++x) {
        if (std::isfinite(r.u->at(x))) std::cout << "u " << x << " " << num(r.u->at(x)) << "\n";
      }
      for (dpl::Point y = r.v->min_point(); y <= r.v->max_point(); ++y) {
        if (std::isfinite(r.v->at(y))) std::cout << "v " << y << " " << num(r.v->at(y)) << "\n";
      }
      std::cout << "dual value " << num(r.dual_value) << "\n";
    }
  }
  return kPass;
}

// ---------------------------------------------------------------------------

struct TeArgs {
  MuArgs mu;
  std::string nu0, nu1;
  long trials = 100;
  std::uint64_t seed = 1;
  long width = 10;
  long resolution = 16;
  bool json = false;
};

int run_check_te(const TeArgs& a) {
  auto mu = load_mu(a.mu);
  auto check = [&](const dpl::Pmf& n0, const dpl::Pmf& n1) {
    return std::visit([&](const auto& m) { return dpl::transport_entropy_check(m, n0, n1); }, mu);
  };
  if (!a.nu0.empty() || !a.nu1.empty()) {
    auto r = check(dpl::parse_pmf_file(a.nu0), dpl::parse_pmf_file(a.nu1));
    ordered_json j = {{"lhs", r.lhs ? num(*r.lhs) : "inf"}, {"rhs", num(r.rhs)}, {"pass", r.holds}};
    if (a.json) {
      std::cout << j.dump(2) << "\n";
    } else {
      std::cout << "T = " << j["lhs"].get<std::string>() << "  H0 + H1 = " << num(r.rhs) << "\n"
                << (r.holds ? "PASS" : "FAIL") << "\n";
    }
    return r.holds ? kPass : kFail;
  }
  if (a.trials < 1) throw dpl::Error(dpl::ErrorKind::kConfigError, "--trials must be >= 1");
  auto [lo, hi] = mu_window(mu);
  dpl::PmfSampler s;
  s.max_width = std::min(a.width, hi - lo + 1);
  s.resolution = a.resolution;
  s.offset_lo = lo;
  s.offset_hi = hi - s.max_width + 1;
  s.hole_probability = 0.2;
  long failures = 0;
  double tightest = std::numeric_limits<double>::infinity();
  ordered_json records = ordered_json::array();
  for (long t = 0; t < a.trials; ++t) {
    auto rng = dpl::Rng::derived(a.seed, static_cast<std::uint64_t>(t));
    auto n0 = dpl::random_pmf(rng, s);
    auto n1 = dpl::random_pmf(rng, s);
    auto r = check(n0, n1);
    if (!r.holds) ++failures;
    if (r.lhs) tightest = std::min(tightest, r.rhs - *r.lhs);
    records.push_back({{"index", t}, {"lhs", r.lhs ? num(*r.lhs) : "inf"}, {"rhs", num(r.rhs)},
                       {"pass", r.holds}});
  }
  if (a.json) {
    ordered_json j = {{"trials", a.trials}, {"failures", failures}, {"tightest_slack", num(tightest)},
                      {"records", records}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << fmt::format("{} trials, {} failures, smallest slack {}\n", a.trials, failures,
                             num(tightest))
              << (failures == 0 ? "PASS" : "FAIL") << "\n";
  }
  return failures == 0 ? kPass : kFail;
}

// ---------------------------------------------------------------------------

struct LimitArgs {
  std::string kind;
  std::string demo;
  std::string spec;
  std::string n_list;
  std::string csv;
  double lambda = 1.0;
  bool json = false;
};

template <class Row>
int emit_limit_rows(const LimitArgs& a, const std::vector<Row>& rows, bool ok) {
  std::ostringstream csv;
  dpl::write_csv(csv, rows);
  if (!a.csv.empty()) write_file(a.csv, csv.str());
  if (a.json) {
    ordered_json j = {{"kind", a.kind}, {"csv", csv.str()}, {"pass", ok}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << csv.str() << (ok ? "PASS" : "FAIL") << "\n";
  }
  return ok ? kPass : kFail;
}

int run_limit_exp(LimitArgs a) {
  ordered_json overrides = ordered_json::object();
  if (!a.spec.empty()) {
    try {
      overrides = ordered_json::parse(dpl::read_text_file(a.spec));
    } catch (const nlohmann::json::exception& e) {
      throw dpl::ParseError(1, dpl::ParseError::Reason::kSyntax, e.what());
    }
    if (overrides.contains("demo")) a.demo = overrides["demo"].get<std::string>();
    if (overrides.contains("kind")) a.kind = overrides["kind"].get<std::string>();
    if (overrides.contains("n") && a.n_list.empty()) {
      std::string joined;
      for (const auto& n : overrides["n"]) joined += (joined.empty() ? "" : ",") + std::to_string(n.get<long>());
      a.n_list = joined;
    }
    if (overrides.contains("lambda")) a.lambda = overrides["lambda"].get<double>();
  }
  if (a.demo.empty()) throw dpl::Error(dpl::ErrorKind::kConfigError, "give --demo or --spec");
  auto ns = parse_n_list(a.n_list.empty() ? "64,256,1024,4096" : a.n_list);

  if (a.kind == "pl") {
    auto d = dpl::pl_demo(a.demo);
    if (overrides.contains("N")) d.half_width = overrides["N"].get<double>();
    auto rows = dpl::pl_limit_experiment(d.F, d.G, d.H, d.K, d.half_width, ns);
    bool ok = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.holds; });
    return emit_limit_rows(a, rows, ok);
  }
  if (a.kind == "clt") {
    auto d = dpl::clt_demo(a.demo);
    if (overrides.contains("M")) d.bound = overrides["M"].get<double>();
    auto rows = dpl::clt_experiment(d.f, d.g, d.h, d.bound, ns, a.lambda);
    bool ok = std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.holds; });
    return emit_limit_rows(a, rows, ok);
  }
  if (a.kind == "disp") {
    auto d = dpl::disp_demo(a.demo);
    if (overrides.contains("K")) d.half_width = overrides["K"].get<long>();
    auto rows = dpl::rescaled_displacement_experiment(d.nu0, d.nu1, d.half_width, ns);
    bool ok = std::all_of(rows.begin(), rows.end(),
                          [](const auto& r) { return r.holds && r.jensen_holds; });
    return emit_limit_rows(a, rows, ok);
  }
  throw dpl::Error(dpl::ErrorKind::kConfigError, "--kind must be pl, clt or disp");
}

// ---------------------------------------------------------------------------

struct CampaignArgs {
  dpl::CampaignConfig cfg;
  std::string check = "leq1";
  std::string out;
  std::string csv;
  bool json = false;
};

int run_campaign_cmd(CampaignArgs a) {
  a.cfg.check = dpl::parse_check_kind(a.check);
  auto report = dpl::run_campaign(a.cfg);
  auto json = dpl::to_json(report);
  if (!a.out.empty()) write_file(a.out, json);
  if (!a.csv.empty()) write_file(a.csv, dpl::to_csv(report));
  const auto& s = report.summary;
  if (a.json) {
    std::cout << json;
  } else {
    std::cout << fmt::format("check {}: {} passed, {} failed\n", a.check, s.passes, s.failures);
    if (s.tightest_index) {
      std::cout << fmt::format("tightest instance #{} ({} = {})\n", *s.tightest_index, s.key_label,
                               num(s.tightest_key));
    }
    for (const auto& [name, count] : s.counters) {
      std::cout << fmt::format("{}: {} instances, first #{}\n", name, count, s.first_index.at(name));
    }
    for (const auto& r : report.records) {
      if (!r.pass) std::cout << fmt::format("#{} [{}] {}\n", r.index, r.digest, r.witness);
    }
  }
  return s.failures == 0 ? kPass : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete transport and Prekopa-Leindler checks"};
  app.require_subcommand(1);

  DisplacementArgs disp;
  auto* c1 = app.add_subcommand("check-displacement", "P <= 1 and the entropy gap for a pair");
  c1->add_option("--nu0", disp.nu0, "first pmf file")->required();
  c1->add_option("--nu1", disp.nu1, "second pmf file")->required();
  c1->add_flag("--dump-coupling", disp.dump, "print the monotone coupling");
  c1->add_flag("--json", disp.json, "machine-readable output");

  FourArgs four;
  auto* c2 = app.add_subcommand("check-4ft", "four functions inequality on {0,1}^n");
  c2->set_help_flag("--help", "print this help");
  c2->add_option("--dim", four.dim, "expected dimension");
  c2->add_option("--f", four.f, "cube function file")->required();
  c2->add_option("--g", four.g, "cube function file")->required();
  c2->add_option("--h", four.h, "cube function file")->required();
  c2->add_option("--k", four.k, "cube function file")->required();
  c2->add_flag("--additive", four.additive, "inputs are h1..h4 in the log domain");
  c2->add_flag("--json", four.json, "machine-readable output");

  TransportArgs tc;
  auto* c3 = app.add_subcommand("transport-cost", "optimal transport under the curvature cost");
  c3->add_option("--mu", tc.mu.mu_file, "reference pmf file");
  c3->add_option("--mu-kind", tc.mu.mu_kind, "geometric | gaussian");
  c3->add_option("--K", tc.mu.K, "half-width for --mu-kind");
  c3->add_option("--cost-table", tc.cost_table, "explicit 'x y value' cost table");
  c3->add_option("--nu0", tc.nu0, "source pmf file")->required();
  c3->add_option("--nu1", tc.nu1, "target pmf file")->required();
  c3->add_flag("--duals", tc.duals, "also print optimal potentials");
  c3->add_flag("--json", tc.json, "machine-readable output");

  TeArgs te;
  auto* c4 = app.add_subcommand("check-te", "transport-entropy inequality");
  c4->add_option("--mu", te.mu.mu_file, "reference pmf file");
  c4->add_option("--mu-kind", te.mu.mu_kind, "geometric | gaussian");
  c4->add_option("--K", te.mu.K, "half-width for --mu-kind");
  c4->add_option("--nu0", te.nu0, "check one pair instead of random trials");
  c4->add_option("--nu1", te.nu1, "second pmf of the pair");
  c4->add_option("--trials", te.trials, "number of random pairs");
  c4->add_option("--seed", te.seed, "random seed");
  c4->add_option("--width", te.width, "largest support width");
  c4->add_option("--resolution", te.resolution, "mass denominator");
  c4->add_flag("--json", te.json, "machine-readable output");

  LimitArgs lim;
  auto* c5 = app.add_subcommand("limit-exp", "discrete-to-continuous experiments");
  c5->add_option("--kind", lim.kind, "pl | clt | disp")->required();
  c5->add_option("--demo", lim.demo, "demo name");
  c5->add_option("--spec", lim.spec, "JSON file with demo name and overrides");
  c5->add_option("--n", lim.n_list, "comma-separated grid sizes");
  c5->add_option("--csv", lim.csv, "write the table here");
  c5->add_option("--lambda", lim.lambda, "rescale arguments by sqrt(lambda) (clt)");
  c5->add_flag("--json", lim.json, "machine-readable output");

  CampaignArgs camp;
  auto* c6 = app.add_subcommand("campaign", "seeded random campaign");
  c6->add_option("--check", camp.check, "leq1 | 4ft | lattice | te | duality");
  c6->add_option("--seed", camp.cfg.seed, "random seed");
  c6->add_option("--trials", camp.cfg.trials, "number of instances");
  c6->add_option("--width", camp.cfg.support_width, "largest support width");
  c6->add_option("--resolution", camp.cfg.mass_resolution, "mass denominator");
  c6->add_option("--threads", camp.cfg.threads, "worker threads, 0 for all cores");
  c6->add_option("--cube-dim", camp.cfg.cube_dim, "cube dimension for 4ft, 0 cycles 1..4");
  c6->add_option("--mu-family", camp.cfg.mu_family, "reference family for te, -1 cycles all");
  c6->add_option("--out", camp.out, "write the JSON report here");
  c6->add_option("--csv", camp.csv, "write the CSV report here");
  c6->add_flag("--json", camp.json, "print the JSON report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*c1) return run_check_displacement(disp);
    if (*c2) return run_check_4ft(four);
    if (*c3) return run_transport_cost(tc);
    if (*c4) return run_check_te(te);
    if (*c5) return run_limit_exp(lim);
    if (*c6) return run_campaign_cmd(camp);
  } catch (const dpl::ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const dpl::Error& e) {
    std::cerr << dpl::to_string(e.kind()) << ": " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
