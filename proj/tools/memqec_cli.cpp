// Command-line front end: channel inspection, fidelity evaluation,
// polynomial printing, threshold scans, figure-data reproduction, and a
// verification pass of the derived closed forms against the published ones.

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "memqec/memqec.hpp"

namespace {

using namespace memqec;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitVerifyFailure = 2;

CodeFamily parse_family(const std::string& name) {
  return name == "rc" ? CodeFamily::rc : CodeFamily::dfs;
}

FlipType parse_basis(const std::string& name) {
  return name == "bit" ? FlipType::bit : FlipType::phase;
}

// Output sink: stdout by default, --out redirects to a file.
class Sink {
 public:
  explicit Sink(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) throw std::runtime_error("cannot open output path: " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

std::vector<double> linspace(double lo, double hi, int steps) {
  std::vector<double> out;
  out.reserve(steps);
  if (steps == 1) {
    out.push_back(lo);
    return out;
  }
  for (int i = 0; i < steps; ++i) out.push_back(lo + (hi - lo) * i / (steps - 1));
  return out;
}

int cmd_kraus(int n, FlipType basis, double mu, double p, const std::string& out_path) {
  Sink sink(out_path);
  MarkovChannel channel = make_channel(n, basis, NoisePoint{mu, p});
  std::ostream& os = sink.stream();
  os << "pattern,weight_poly,weight\n";
  for (std::size_t k = 0; k < channel.terms.size(); ++k) {
    const KrausTerm& term = channel.terms[k];
    os << pattern_to_string(term.pattern, n) << "," << term.weight.to_string() << ","
       << format_double(channel.weight_value(k)) << "\n";
  }
  return kExitOk;
}

int cmd_recovery(CodeFamily family, int n, FlipType basis, const std::string& out_path) {
  Sink sink(out_path);
  CodePipeline pl = build_pipeline(family, n, basis);
  std::ostream& os = sink.stream();
  os << "detectable:";
  for (std::size_t k : detectable_paper_indices(pl.channel, pl.code)) os << " " << k;
  os << "\ncorrectable:";
  for (std::size_t k : correctable_paper_indices(pl.channel, pl.code)) os << " " << k;
  os << "\nrecovery_operators: " << pl.recovery.size()
     << (pl.recovery.includes_orthogonal_projector() ? " (includes orthogonal projector)" : "")
     << "\ncompleteness_residual: " << format_double(pl.recovery.completeness_residual()) << "\n";
  return kExitOk;
}

int cmd_poly(CodeFamily family, int n, const std::string& out_path) {
  Sink sink(out_path);
  sink.stream() << derive_fidelity(family, n).poly.to_string() << "\n";
  return kExitOk;
}

int cmd_fidelity(CodeFamily family, int n, double mu, std::optional<double> p,
                 std::optional<double> p_min, std::optional<double> p_max, int steps,
                 const std::string& format, const std::string& out_path) {
  Sink sink(out_path);
  std::ostream& os = sink.stream();
  FidelityResult f = derive_fidelity(family, n);
  if (p) {
    if (format == "csv") {
      os << "mu,p,value\n"
         << format_double(mu) << "," << format_double(*p) << "," << format_double(f.numeric(mu, *p))
         << "\n";
    } else {
      os << format_double(f.numeric(mu, *p)) << "\n";
    }
    return kExitOk;
  }
  os << "mu,p,value\n";
  for (double pv : linspace(*p_min, *p_max, steps)) {
    os << format_double(mu) << "," << format_double(pv) << "," << format_double(f.numeric(mu, pv))
       << "\n";
  }
  return kExitOk;
}

int cmd_threshold(int n, std::optional<double> p, std::optional<double> p_min,
                  std::optional<double> p_max, int steps, double tolerance,
                  const std::string& out_path) {
  Sink sink(out_path);
  std::ostream& os = sink.stream();
  if (p) {
    CrossingResult r = crossing(ThresholdQuery{n, *p, tolerance});
    if (r.mu_star) {
      os << format_double(*r.mu_star) << "\n";
    } else {
      os << "no crossing\n";
    }
    return kExitOk;
  }
  os << "p,mu_star,crossings\n";
  for (const CurvePoint& pt : threshold_curve(n, linspace(*p_min, *p_max, steps), tolerance)) {
    os << format_double(pt.p) << ",";
    if (pt.mu_star) os << format_double(*pt.mu_star);
    os << "," << pt.sign_changes << "\n";
  }
  return kExitOk;
}

int cmd_figures(const std::string& which, const std::string& out_path) {
  Sink sink(out_path);
  std::ostream& os = sink.stream();
  if (which == "fig1") {
    const BiPoly rc3 = derive_fidelity(CodeFamily::rc, 3).poly;
    const BiPoly rc5 = derive_fidelity(CodeFamily::rc, 5).poly;
    const BiPoly rc7 = derive_fidelity(CodeFamily::rc, 7).poly;
    os << "mu,F_rc3,F_rc5,F_rc7\n";
    for (double mu : linspace(0.0, 1.0, 101)) {
      os << format_double(mu) << "," << format_double(rc3.eval(mu, 0.45)) << ","
         << format_double(rc5.eval(mu, 0.45)) << "," << format_double(rc7.eval(mu, 0.45)) << "\n";
    }
  } else if (which == "fig2") {
    const BiPoly rc4 = derive_fidelity(CodeFamily::rc, 4).poly;
    const BiPoly dfs4 = derive_fidelity(CodeFamily::dfs, 4).poly;
    os << "mu,p,F_rc4,F_dfs4\n";
    for (double p : {0.45, 0.40, 0.35}) {
      for (double mu : linspace(0.0, 1.0, 101)) {
        os << format_double(mu) << "," << format_double(p) << "," << format_double(rc4.eval(mu, p))
           << "," << format_double(dfs4.eval(mu, p)) << "\n";
      }
    }
  } else {
    os << "p,mu_star\n";
    for (const CurvePoint& pt : threshold_curve(4, linspace(0.01, 0.49, 97))) {
      os << format_double(pt.p) << ",";
      if (pt.mu_star) os << format_double(*pt.mu_star);
      os << "\n";
    }
  }
  return kExitOk;
}

void print_coefficient_diff(std::ostream& os, const BiPoly& derived, const BiPoly& published) {
  BiPoly::TermMap keys;
  for (const auto& [k, c] : derived.terms()) keys[k] = 0;
  for (const auto& [k, c] : published.terms()) keys[k] = 0;
  for (const auto& [k, unused] : keys) {
    const std::int64_t a = derived.coeff(k.first, k.second);
    const std::int64_t b = published.coeff(k.first, k.second);
    if (a != b) {
      os << "    mu^" << k.first << "*p^" << k.second << ": derived " << a << ", published " << b
         << "\n";
    }
  }
}

int cmd_verify() {
  std::ostream& os = std::cout;
  bool hard_failure = false;
  struct Case {
    CodeFamily family;
    int n;
    bool flagged;  // known-suspect published display, adjudicated numerically
  };
  const Case cases[] = {
      {CodeFamily::rc, 3, false},  {CodeFamily::rc, 4, false}, {CodeFamily::rc, 5, false},
      {CodeFamily::rc, 6, false},  {CodeFamily::rc, 7, false}, {CodeFamily::rc, 8, false},
      {CodeFamily::dfs, 3, false}, {CodeFamily::dfs, 4, false}, {CodeFamily::dfs, 5, false},
      {CodeFamily::dfs, 6, true},
  };
  for (const Case& c : cases) {
    const char* name = c.family == CodeFamily::rc ? "rc" : "dfs";
    FidelityResult derived = derive_fidelity(c.family, c.n);
    BiPoly published = paper_fixture(c.family, c.n);
    if (derived.poly == published) {
      os << "PASS " << name << " n=" << c.n << ": exact coefficient match\n";
      continue;
    }
    os << (c.flagged ? "WARN " : "FAIL ") << name << " n=" << c.n
       << ": derived polynomial differs from the published display\n";
    print_coefficient_diff(os, derived.poly, published);
    if (!c.flagged) {
      hard_failure = true;
      continue;
    }
    // numeric adjudication: the full double-sum evaluation must agree with
    // the derivation at 100 random points
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> mu_dist(0.0, 1.0);
    std::uniform_real_distribution<double> p_dist(0.0, 0.5);
    double max_derived_gap = 0.0;
    double max_published_gap = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
      const double mu = mu_dist(rng);
      const double p = p_dist(rng);
      const double oracle = derived.numeric(mu, p);
      max_derived_gap = std::max(max_derived_gap, std::abs(oracle - derived.poly.eval(mu, p)));
      max_published_gap = std::max(max_published_gap, std::abs(oracle - published.eval(mu, p)));
    }
    if (max_derived_gap < 1e-10 && max_published_gap > 1e-10) {
      os << "    numeric double-sum oracle sides with the derivation "
         << "(|oracle-derived| <= " << format_double(max_derived_gap)
         << ", |oracle-published| up to " << format_double(max_published_gap) << ")\n";
    } else {
      os << "    numeric adjudication inconclusive\n";
      hard_failure = true;
    }
  }
  // pairing identities
  const std::pair<int, int> pairs[] = {{4, 3}, {6, 5}, {8, 7}};
  for (auto [even, odd] : pairs) {
    if (derive_fidelity(CodeFamily::rc, even).poly == derive_fidelity(CodeFamily::rc, odd).poly) {
      os << "PASS rc n=" << even << " equals rc n=" << odd << "\n";
    } else {
      os << "FAIL rc n=" << even << " does not equal rc n=" << odd << "\n";
      hard_failure = true;
    }
  }
  os << (hard_failure ? "verification FAILED\n" : "verification passed\n");
  return hard_failure ? kExitVerifyFailure : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Correlated bit/phase-flip memory channels with repetition and DFS codes"};
  app.require_subcommand(1);

  std::string family_name = "rc";
  std::string basis_name = "bit";
  std::string format = "text";
  std::string out_path;
  std::string figure_name;
  int n = 3;
  double mu = 0.0;
  std::optional<double> p;
  std::optional<double> p_min;
  std::optional<double> p_max;
  int steps = 50;
  double tolerance = 1e-9;

  const auto family_check = CLI::IsMember({"rc", "dfs"});
  const auto basis_check = CLI::IsMember({"bit", "phase"});

  CLI::App* kraus = app.add_subcommand("kraus", "print the Kraus terms of the memory channel as CSV");
  kraus->add_option("--n", n, "qubit count")->required()->check(CLI::Range(1, 10));
  kraus->add_option("--basis", basis_name)->check(basis_check);
  kraus->add_option("--mu", mu, "correlation strength")->required()->check(CLI::Range(0.0, 1.0));
  kraus->add_option("--p", p, "error probability")->required()->check(CLI::Range(0.0, 1.0));
  kraus->add_option("--out", out_path, "output path (default stdout)");

  CLI::App* recovery =
      app.add_subcommand("recovery", "print detectable/correctable sets and completeness residual");
  recovery->add_option("--n", n)->required()->check(CLI::Range(2, 8));
  recovery->add_option("--family", family_name)->required()->check(family_check);
  recovery->add_option("--basis", basis_name)->check(basis_check);
  recovery->add_option("--out", out_path);

  CLI::App* fidelity = app.add_subcommand("fidelity", "evaluate entanglement fidelity numerically");
  fidelity->add_option("--n", n)->required()->check(CLI::Range(2, 8));
  fidelity->add_option("--family", family_name)->required()->check(family_check);
  fidelity->add_option("--basis", basis_name)->check(basis_check);
  fidelity->add_option("--mu", mu)->required()->check(CLI::Range(0.0, 1.0));
  auto* fid_p = fidelity->add_option("--p", p)->check(CLI::Range(0.0, 1.0));
  auto* fid_pmin = fidelity->add_option("--p-min", p_min)->check(CLI::Range(0.0, 1.0));
  fidelity->add_option("--p-max", p_max)->check(CLI::Range(0.0, 1.0));
  fidelity->add_option("--steps", steps)->check(CLI::Range(1, 100000));
  fidelity->add_option("--format", format)->check(CLI::IsMember({"text", "csv"}));
  fidelity->add_option("--out", out_path);
  fid_p->excludes(fid_pmin);

  CLI::App* poly = app.add_subcommand("poly", "print the fidelity polynomial in canonical text form");
  poly->add_option("--n", n)->required()->check(CLI::Range(2, 8));
  poly->add_option("--family", family_name)->required()->check(family_check);
  poly->add_option("--out", out_path);

  CLI::App* threshold = app.add_subcommand("threshold", "locate the DFS/RC crossing mu*(p)");
  threshold->add_option("--n", n)->required()->check(CLI::Range(2, 8));
  auto* thr_p = threshold->add_option("--p", p)->check(CLI::Range(0.0, 0.5));
  auto* thr_pmin = threshold->add_option("--p-min", p_min)->check(CLI::Range(0.0, 0.5));
  threshold->add_option("--p-max", p_max)->check(CLI::Range(0.0, 0.5));
  threshold->add_option("--steps", steps)->check(CLI::Range(1, 100000));
  threshold->add_option("--tolerance", tolerance)->check(CLI::Range(1e-15, 1e-3));
  threshold->add_option("--out", out_path);
  thr_p->excludes(thr_pmin);

  CLI::App* figures = app.add_subcommand("figures", "reproduce the published figure data as CSV");
  figures->add_option("figure", figure_name, "fig1 | fig2 | fig3")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig2", "fig3"}));
  figures->add_option("--out", out_path, "output CSV path")->required();

  CLI::App* verify =
      app.add_subcommand("verify", "re-derive all closed forms and compare with the published ones");
  (void)verify;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (kraus->parsed()) return cmd_kraus(n, parse_basis(basis_name), mu, *p, out_path);
    if (recovery->parsed()) {
      return cmd_recovery(parse_family(family_name), n, parse_basis(basis_name), out_path);
    }
    if (poly->parsed()) return cmd_poly(parse_family(family_name), n, out_path);
    if (fidelity->parsed()) {
      if (!p && !(p_min && p_max)) {
        std::cerr << "fidelity: give either --p or --p-min/--p-max\n";
        return kExitUsage;
      }
      return cmd_fidelity(parse_family(family_name), n, mu, p, p_min, p_max, steps, format,
                          out_path);
    }
    if (threshold->parsed()) {
      if (!p && !(p_min && p_max)) {
        std::cerr << "threshold: give either --p or --p-min/--p-max\n";
        return kExitUsage;
      }
      return cmd_threshold(n, p, p_min, p_max, steps, tolerance, out_path);
    }
    if (figures->parsed()) return cmd_figures(figure_name, out_path);
    return cmd_verify();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}
