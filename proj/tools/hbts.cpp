// Command-line front end. Every command prints or writes one report; see --help.
//
// Exit status: 0 success, 1 a check failed (validation, degenerate fixed point,
// missing kernel), 2 bad arguments, unreadable input or exhausted budget.

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hbts/correlators.hpp"
#include "hbts/finite_state.hpp"
#include "hbts/io.hpp"
#include "hbts/mera_bounds.hpp"
#include "hbts/parent_ham.hpp"

namespace {

using hbts::io::Json;
using hbts::io::format_double;

struct Options {
  std::string isometry;
  std::string top;
  std::string out;
  std::string format;
  std::string nu = "auto";
  std::string theta = "z";
  std::string theta_prime = "z";
  std::string weights;
  std::string topology = "binary";
  std::string histogram_out;
  std::string spectrum_out;
  int d = 2;
  int n = 4;
  int n_sites = 8;
  int m_min = 0;
  int m_max = 10;
  int bins = 50;
  std::uint64_t seed = 1;
  bool nullity = false;
  hbts::Tolerances tol;
};

// Set when a command finished but its check did not pass.
bool g_check_failed = false;

void emit(const Options& o, const std::string& content) {
  if (o.out.empty())
    std::cout << content;
  else
    hbts::io::write_atomic(o.out, content);
}

void emit_json(const Options& o, const Json& j) { emit(o, hbts::io::dump(j)); }

hbts::Isometry load_isometry(const Options& o) { return hbts::io::read_isometry(o.isometry); }

int parse_nu(const std::string& s) {
  if (s == "auto") return hbts::kAutoRange;
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw hbts::ArgumentError("--nu must be auto or an integer");
}

hbts::KernelWeights parse_weights(const Options& o) {
  return hbts::KernelWeights{o.weights.empty() ? std::vector<double>{} : hbts::io::parse_number_list(o.weights)};
}

Json real_list(std::span<const double> v) { return Json(std::vector<double>(v.begin(), v.end())); }

Json tolerance_json(const hbts::Tolerances& t) {
  return Json{{"gs", t.gs}, {"iso", t.iso}, {"rank", t.rank}, {"spec", t.spec}};
}

void cmd_validate(const Options& o) {
  const hbts::Isometry lam = load_isometry(o);
  const hbts::ValidationReport r = hbts::validate_isometry(lam, o.tol.iso);
  Json j{{"isometry", {{"d", lam.d()}, {"pass", r.pass}, {"residual", r.residual}}}, {"tolerance", o.tol.iso}};
  bool pass = r.pass;
  if (!o.top.empty()) {
    const hbts::TopTensor c = hbts::io::read_top(o.top);
    const hbts::ValidationReport t = hbts::validate_top(c, o.tol.iso);
    j["top"] = {{"d", c.d()}, {"pass", t.pass}, {"residual", t.residual}};
    pass = pass && t.pass;
  }
  j["pass"] = pass;
  emit_json(o, j);
  if (!pass) {
    std::cerr << "validation failed: max |V^dag V - I| = " << format_double(r.residual) << "\n";
    g_check_failed = true;
  }
}

void cmd_thermo(const Options& o) {
  const int nu = parse_nu(o.nu == "auto" ? "2" : o.nu);
  const hbts::ThermoReport r = hbts::thermo_report(load_isometry(o), nu, o.tol);
  emit_json(o, Json{{"eigenvalues", real_list(r.eigenvalues)},
                    {"mixing", r.mixing},
                    {"nu", r.nu},
                    {"rank", r.rank},
                    {"residual", r.residual},
                    {"state", hbts::io::matrix_json(r.state.matrix())},
                    {"tolerances", tolerance_json(o.tol)}});
}

void cmd_exponents(const Options& o) {
  const hbts::SpectrumReport s = hbts::exponent_spectrum(load_isometry(o));
  if (o.format == "csv") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : s.entries)
      rows.push_back({format_double(e.kappa.real()), format_double(e.kappa.imag()), format_double(std::abs(e.kappa)),
                      format_double(e.exponent.real()), format_double(e.exponent.imag()), std::to_string(e.algebraic),
                      std::to_string(e.geometric)});
    emit(o, hbts::io::csv({"kappa_re", "kappa_im", "modulus", "exponent_re", "exponent_im", "algebraic", "geometric"},
                          rows));
    return;
  }
  Json entries = Json::array();
  for (const auto& e : s.entries)
    entries.push_back({{"algebraic", e.algebraic},
                       {"exponent", hbts::io::complex_json(e.exponent)},
                       {"geometric", e.geometric},
                       {"kappa", hbts::io::complex_json(e.kappa)},
                       {"modulus", std::abs(e.kappa)}});
  emit_json(o, Json{{"diagonalizable", s.diagonalizable}, {"entries", entries}});
}

void cmd_correlate(const Options& o) {
  const hbts::Isometry lam = load_isometry(o);
  if (o.m_min < 0 || o.m_max < o.m_min) throw hbts::ArgumentError("need 0 <= --m-min <= --m-max");
  if (o.m_max > 62) throw hbts::UnsupportedRangeError("--m-max must be at most 62");
  const hbts::Observable th = hbts::io::resolve_observable(o.theta, lam.d());
  const hbts::Observable thp = hbts::io::resolve_observable(o.theta_prime, lam.d());
  const hbts::ChannelSet cs = hbts::build_channel_set(lam, o.tol.iso);
  const hbts::ThermoLimit limit = hbts::solve_thermo(cs, o.tol);
  const hbts::Matrix x = hbts::kron(th.matrix(), thp.matrix());
  const std::vector<hbts::Complex> values = hbts::correlator_values(cs, limit, x, o.m_max);

  if (o.format != "json") {
    std::vector<std::vector<std::string>> rows;
    for (int m = o.m_min; m <= o.m_max; ++m) {
      const hbts::Complex v = values[static_cast<std::size_t>(m)];
      rows.push_back({std::to_string(m), std::to_string(1LL << m), format_double(v.real()), format_double(v.imag()),
                      format_double(std::abs(v))});
    }
    emit(o, hbts::io::csv({"m", "delta_alpha", "re", "im", "abs"}, rows));
    return;
  }
  const hbts::CorrelatorSeries s = hbts::powerlaw_check(lam, x, o.m_min, o.m_max, o.tol);
  Json pts = Json::array();
  for (int m = o.m_min; m <= o.m_max; ++m)
    pts.push_back({{"delta_alpha", 1LL << m}, {"m", m},
                   {"value", hbts::io::complex_json(values[static_cast<std::size_t>(m)])}});
  Json terms = Json::array();
  for (const auto& t : s.terms) {
    Json coef = Json::array();
    for (const auto& c : t.coefficients) coef.push_back(hbts::io::complex_json(c));
    terms.push_back({{"coefficients", coef}, {"degree", t.degree}, {"kappa", hbts::io::complex_json(t.kappa)}});
  }
  emit_json(o, Json{{"degenerate", s.degenerate},
                    {"eigen_residual", s.eigen_residual},
                    {"eigenoperator", s.eigenoperator},
                    {"exponent", hbts::io::complex_json(s.exponent)},
                    {"fit_residual", s.fit_residual},
                    {"geometric", s.geometric},
                    {"kappa", hbts::io::complex_json(s.kappa)},
                    {"log_corrections", s.log_corrections},
                    {"max_ratio_error", s.max_ratio_error},
                    {"points", pts},
                    {"prefactor", hbts::io::complex_json(s.prefactor)},
                    {"terms", terms}});
}

void cmd_finite_check(const Options& o) {
  const hbts::Isometry lam = load_isometry(o);
  const hbts::TopTensor c = o.top.empty() ? hbts::random_top(lam.d(), o.seed) : hbts::io::read_top(o.top);
  const hbts::RecursionReport r = hbts::recursion_check(lam, c, o.n);
  Json entries = Json::array();
  for (const auto& e : r.entries)
    entries.push_back({{"depth", e.depth}, {"identity", e.identity}, {"residual", e.residual}});
  const bool pass = r.max_residual() <= o.tol.fix;
  emit_json(o, Json{{"entries", entries},
                    {"max_eta", r.max_eta},
                    {"max_levels", r.max_levels},
                    {"max_pair", r.max_pair},
                    {"max_quad", r.max_quad},
                    {"max_single", r.max_single},
                    {"max_triple", r.max_triple},
                    {"n", o.n},
                    {"pass", pass},
                    {"tolerance", o.tol.fix}});
  if (!pass) g_check_failed = true;
}

Json interaction_json(const hbts::HamiltonianSpec& hs) {
  return Json{{"d", hs.d}, {"kernel_dim", hs.kernel_dim}, {"nu", hs.nu}, {"weights", real_list(hs.weights)}};
}

void cmd_parent(const Options& o) {
  const hbts::Isometry lam = load_isometry(o);
  const hbts::HamiltonianSpec hs = hbts::build_interaction(lam, parse_weights(o), parse_nu(o.nu), o.tol);
  Json j = interaction_json(hs);
  j["h_term"] = hbts::io::matrix_json(hs.h_term);
  const hbts::RealVector ev = hbts::hermitian_eigenvalues(hs.h_term);
  j["h_eigenvalues"] = real_list(std::span<const double>(ev.data(), static_cast<std::size_t>(ev.size())));
  if (o.nullity) {
    const hbts::NullityReport n = hbts::adjoint_nullity_check(lam, hs, o.tol);
    j["nullity"] = {{"precondition_met", n.precondition_met}, {"residual", n.residual}, {"rho2_rank", n.rho2_rank},
                    {"rho3_rank", n.rho3_rank}, {"trace_value", n.trace_value}};
    if (n.precondition_met && n.residual > o.tol.fix) g_check_failed = true;
  }
  emit_json(o, j);
}

void cmd_diag(const Options& o) {
  const hbts::Isometry lam = load_isometry(o);
  const hbts::HamiltonianSpec hs = hbts::build_interaction(lam, parse_weights(o), parse_nu(o.nu), o.tol);
  const hbts::Matrix h = hbts::assemble(hs, o.n_sites);
  const hbts::GroundSpaceReport g = hbts::diagonalize(h, o.tol.gs, o.bins);

  if (!o.histogram_out.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < g.histogram.counts.size(); ++i)
      rows.push_back({format_double(g.histogram.edges[i]), format_double(g.histogram.edges[i + 1]),
                      std::to_string(g.histogram.counts[i])});
    hbts::io::write_atomic(o.histogram_out, hbts::io::csv({"bin_left", "bin_right", "count"}, rows));
  }
  if (!o.spectrum_out.empty()) {
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < g.spectrum.size(); ++i) rows.push_back({std::to_string(i), format_double(g.spectrum[i])});
    hbts::io::write_atomic(o.spectrum_out, hbts::io::csv({"index", "energy"}, rows));
  }
  Json hist = Json::array();
  for (std::size_t i = 0; i < g.histogram.counts.size(); ++i)
    hist.push_back({g.histogram.edges[i], g.histogram.edges[i + 1], g.histogram.counts[i]});
  emit_json(o, Json{{"N", o.n_sites},
                    {"degeneracy", g.degeneracy},
                    {"dim", static_cast<long long>(h.rows())},
                    {"ground_energy", g.ground_energy},
                    {"histogram", hist},
                    {"interaction", interaction_json(hs)},
                    {"spectrum", real_list(g.spectrum)},
                    {"tau_gs", g.tau_gs}});
}

void cmd_subspace(const Options& o) {
  const hbts::Isometry lam = load_isometry(o);
  const hbts::HamiltonianSpec hs = hbts::build_interaction(lam, parse_weights(o), parse_nu(o.nu), o.tol);
  const hbts::SubspaceReport r = hbts::grown_subspace_check(lam, hs, o.n_sites, o.tol);
  const bool pass = r.max_energy_residual <= o.tol.gs && r.max_term_expectation <= o.tol.gs;
  emit_json(o, Json{{"N", r.n_sites},
                    {"dim_grown", r.dim_grown},
                    {"dim_sum", r.dim_sum},
                    {"dim_translated", r.dim_translated},
                    {"interaction", interaction_json(hs)},
                    {"max_energy_residual", r.max_energy_residual},
                    {"max_term_expectation", r.max_term_expectation},
                    {"max_translated_residual", r.max_translated_residual},
                    {"pass", pass}});
  if (!pass) g_check_failed = true;
}

void cmd_mera(const Options& o) {
  const hbts::MeraTopology t = hbts::parse_topology(o.topology);
  const hbts::MeraBound b = hbts::mera_rank_bound(t, o.d);
  emit_json(o, Json{{"bound", b.bound},
                    {"d", o.d},
                    {"max", b.max_rank},
                    {"nonmaximal", b.nonmaximal},
                    {"nu", b.nu},
                    {"topology", hbts::topology_name(t)}});
}

void cmd_random(const Options& o) {
  emit_json(o, hbts::io::isometry_to_json(hbts::random_isometry(o.d, o.seed)));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Homogeneous binary-tree states: channels, limits, correlators, parent Hamiltonians"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "hbts 0.1");
  Options o;

  auto add_tolerances = [&o](CLI::App* c) {
    c->add_option("--tol-iso", o.tol.iso, "isometry residual tolerance")->capture_default_str();
    c->add_option("--tol-rank", o.tol.rank, "relative eigenvalue cutoff for ranks and kernels")->capture_default_str();
    c->add_option("--tol-spec", o.tol.spec, "distance from 1 counted as a unit eigenvalue")->capture_default_str();
    c->add_option("--tol-gs", o.tol.gs, "absolute ground-energy window")->capture_default_str();
    c->add_option("--tol-fix", o.tol.fix, "recursion and self-consistency residual tolerance")->capture_default_str();
  };
  auto add_io = [&o](CLI::App* c, bool needs_isometry) {
    auto* opt = c->add_option("--isometry", o.isometry, "isometry JSON {\"d\", \"entries\": [[l1,l2,u,re,im],...]}");
    if (needs_isometry) opt->required()->check(CLI::ExistingFile);
    c->add_option("--out", o.out, "output file (default stdout); written atomically");
  };
  auto add_interaction = [&o](CLI::App* c) {
    c->add_option("--nu", o.nu, "interaction length: auto, 2, 3 or 4")->capture_default_str();
    c->add_option("--weights", o.weights, "comma-separated positive E_k, one per kernel vector (default all 1)");
  };

  CLI::App* validate = app.add_subcommand("validate", "check V^dag V = I (and |C| = 1 with --top)");
  add_io(validate, true);
  validate->add_option("--top", o.top, "top tensor JSON {\"d\", \"entries\": [[l1,l2,re,im],...]}")->check(CLI::ExistingFile);
  add_tolerances(validate);

  CLI::App* thermo = app.add_subcommand("thermo", "infinite-depth reduced state of nu consecutive sites");
  add_io(thermo, true);
  thermo->add_option("--nu", o.nu, "block size 1..4 (default 2)");
  add_tolerances(thermo);

  CLI::App* exponents = app.add_subcommand("exponents", "spectrum of the adjoint pair channel and log2 exponents");
  add_io(exponents, true);
  exponents->add_option("--format", o.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  CLI::App* correlate = app.add_subcommand("correlate", "connected correlators at distances 2^m");
  add_io(correlate, true);
  correlate->add_option("--theta", o.theta, "x, y, z, p0, p1, id or an observable JSON {\"d\", \"entries\": [[r,c,re,im],...]}")
      ->capture_default_str();
  correlate->add_option("--theta-prime", o.theta_prime, "second observable, same forms")->capture_default_str();
  correlate->add_option("--m-min", o.m_min, "first m")->capture_default_str();
  correlate->add_option("--m-max", o.m_max, "last m")->capture_default_str();
  correlate->add_option("--format", o.format, "csv (values) or json (values and power-law analysis)")
      ->check(CLI::IsMember({"json", "csv"}));
  add_tolerances(correlate);

  CLI::App* finite = app.add_subcommand("finite-check", "channel recursions against brute-force finite states");
  add_io(finite, true);
  finite->add_option("--top", o.top, "top tensor JSON (default: random with --seed)")->check(CLI::ExistingFile);
  finite->add_option("--n", o.n, "largest depth, N = 2^n")->capture_default_str()->check(CLI::Range(2, 10));
  finite->add_option("--seed", o.seed, "seed for the random top tensor")->capture_default_str();
  add_tolerances(finite);

  CLI::App* parent = app.add_subcommand("parent", "parent interaction from the kernel of the limit state");
  add_io(parent, true);
  add_interaction(parent);
  parent->add_flag("--nullity", o.nullity, "also report the adjoint-extension nullity residual (nu = 3, 4)");
  add_tolerances(parent);

  CLI::App* diag = app.add_subcommand("diag", "exact diagonalization of the parent Hamiltonian on N sites");
  add_io(diag, true);
  add_interaction(diag);
  diag->add_option("--N", o.n_sites, "ring size")->capture_default_str()->check(CLI::Range(2, 30));
  diag->add_option("--bins", o.bins, "histogram bins over [0, 1] of E / E_max")->capture_default_str()->check(CLI::Range(1, 100000));
  diag->add_option("--histogram-out", o.histogram_out, "CSV bin_left,bin_right,count");
  diag->add_option("--spectrum-out", o.spectrum_out, "CSV index,energy");
  add_tolerances(diag);

  CLI::App* subspace = app.add_subcommand("subspace-check", "grown subspace and its translate against the ground space");
  add_io(subspace, true);
  add_interaction(subspace);
  subspace->add_option("--N", o.n_sites, "even ring size")->capture_default_str()->check(CLI::Range(2, 30));
  add_tolerances(subspace);

  CLI::App* mera = app.add_subcommand("mera-bounds", "rank bounds for scale-invariant MERA");
  mera->add_option("--topology", o.topology, "binary or ternary")->capture_default_str();
  mera->add_option("--d", o.d, "local dimension")->capture_default_str();
  mera->add_option("--out", o.out, "output file (default stdout)");

  CLI::App* random = app.add_subcommand("random-isometry", "seeded random isometry in the input JSON format");
  random->add_option("--d", o.d, "local dimension")->capture_default_str()->check(CLI::Range(2, 16));
  random->add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  random->add_option("--out", o.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) cmd_validate(o);
    else if (*thermo) cmd_thermo(o);
    else if (*exponents) cmd_exponents(o);
    else if (*correlate) {
      if (o.format.empty()) o.format = "csv";
      cmd_correlate(o);
    } else if (*finite) cmd_finite_check(o);
    else if (*parent) cmd_parent(o);
    else if (*diag) cmd_diag(o);
    else if (*subspace) cmd_subspace(o);
    else if (*mera) cmd_mera(o);
    else if (*random) cmd_random(o);
  } catch (const hbts::ValidationError& e) {
    std::cerr << "validation failed: " << e.what() << " (residual " << format_double(e.residual()) << ")\n";
    return 1;
  } catch (const hbts::DegenerateFixedPointError& e) {
    std::cerr << "degenerate fixed point: " << e.what() << "\n";
    return 1;
  } catch (const hbts::ImpossibleByTheoryError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const hbts::ResourceError& e) {
    std::cerr << "resource limit: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return g_check_failed ? 1 : 0;
}
