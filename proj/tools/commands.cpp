#include "commands.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <regex>

#include "haar/haar.hpp"

namespace haar::cli {

using nlohmann::json;

namespace {

// Stream reserved for setup randomness (random channels, random states), far from
// the per-sample streams 0..N-1 used by the Monte Carlo loops.
constexpr std::uint64_t kSetupStream = std::uint64_t{1} << 50;
constexpr std::size_t kDefaultSamples = 10000;

bool given(const CLI::App& sub, const std::string& flag) {
  const CLI::Option* opt = sub.get_option_no_throw("--" + flag);
  return opt != nullptr && opt->count() > 0;
}

json echo_value(const std::string& name, const Options& o) {
  static const std::map<std::string, std::function<json(const Options&)>> table{
      {"k", [](const Options& x) { return json(x.k); }},
      {"d", [](const Options& x) { return json(x.d); }},
      {"n", [](const Options& x) { return json(x.n); }},
      {"dA", [](const Options& x) { return json(x.dA); }},
      {"dB", [](const Options& x) { return json(x.dB); }},
      {"power", [](const Options& x) { return json(x.power); }},
      {"rank", [](const Options& x) { return json(x.rank); }},
      {"seed", [](const Options& x) { return json(x.seed); }},
      {"samples", [](const Options& x) { return json(x.samples); }},
      {"batches", [](const Options& x) { return json(x.batches); }},
      {"eps", [](const Options& x) { return json(x.eps); }},
      {"delta", [](const Options& x) { return json(x.delta); }},
      {"tol", [](const Options& x) { return json(x.tol); }},
      {"mode", [](const Options& x) { return json(x.mode); }},
      {"ensemble", [](const Options& x) { return json(x.ensemble); }},
      {"channel", [](const Options& x) { return json(x.channel); }},
      {"kind", [](const Options& x) { return json(x.kind); }},
      {"state", [](const Options& x) { return json(x.state); }},
      {"target", [](const Options& x) { return json(x.target); }},
      {"generator", [](const Options& x) { return json(x.generator); }},
      {"log", [](const Options& x) { return json(x.log_in); }},
      {"log-out", [](const Options& x) { return json(x.log_out); }},
      {"observable", [](const Options& x) { return json(x.observables); }},
      {"conjugate", [](const Options& x) { return json(x.conjugate); }},
  };
  const auto it = table.find(name);
  return it == table.end() ? json() : it->second(o);
}

// Thread count and output path are left out on purpose: they must not change the report.
json config_echo(const CLI::App& sub, const Options& o) {
  json c;
  c["subcommand"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help" || name == "threads" || name == "out") continue;
    c[name] = echo_value(name, o);
  }
  return c;
}

// "ZZ" style Pauli strings, otherwise a matrix file.
CMat load_operator(const std::string& arg) {
  static const std::regex pauli("^[IXYZ]+$");
  if (std::regex_match(arg, pauli)) return pauli_string(arg);
  return load_matrix(arg);
}

// Permutation in 1-based cycle notation without fixed points, "e" for the identity.
std::string cycle_notation(const Permutation& p) {
  if (p.is_identity()) return "e";
  const int k = p.size();
  const std::string sep = k > 9 ? " " : "";
  std::vector<bool> seen(k, false);
  std::string out;
  for (int s = 0; s < k; ++s) {
    if (seen[s] || p(s) == s) continue;
    std::string cycle;
    for (int t = s; !seen[t]; t = p(t)) {
      seen[t] = true;
      cycle += (cycle.empty() ? "" : sep) + std::to_string(t + 1);
    }
    out += "(" + cycle + ")";
  }
  return out;
}

UnitaryEnsemble parse_ensemble(const Options& o) {
  UnitaryEnsemble base = [&]() -> UnitaryEnsemble {
    if (o.ensemble == "haar") return HaarEnsemble{o.d};
    if (o.ensemble == "pauli1") return PauliBasisEnsemble{1};
    if (o.ensemble == "pauliN") return PauliBasisEnsemble{o.n};
    if (o.ensemble == "clifford1") return CliffordEnsemble{1};
    if (o.ensemble == "cliffordN") return CliffordEnsemble{o.n};
    if (!std::filesystem::exists(o.ensemble)) {
      throw UsageError("--ensemble: '" + o.ensemble + "' is neither a built-in name nor a manifest file");
    }
    return load_manifest(o.ensemble);
  }();
  if (o.power < 1) throw UsageError("--power must be >= 1");
  return o.power == 1 ? base : amplify(base, o.power);
}

bool within_vectorized_cap(int d, int k) {
  const std::int64_t dk = ipow(d, k);
  return dk * dk <= kDenseCap;
}

Mode resolve_mode(const Options& o, bool exact_available) {
  if (o.mode == "exact") {
    if (!exact_available) throw DomainError("exact mode is not available for this input; use --mode mc");
    return Mode::Exact;
  }
  if (o.mode == "mc") return Mode::MonteCarlo;
  if (o.mode != "auto") throw UsageError("--mode must be exact, mc or auto");
  return exact_available ? Mode::Exact : Mode::MonteCarlo;
}

std::size_t mc_samples(const Options& o) { return o.samples > 0 ? o.samples : kDefaultSamples; }

json mc_block(std::size_t n, double mean, double se) {
  return json{{"mode", "mc"}, {"samples", n}, {"mean", mean}, {"se", se}};
}

json matrix_stats_block(const MatrixStats& s, const CMat& exact) {
  const double z = max_z(s, exact);
  return json{{"mode", "mc"},
              {"samples", s.n},
              {"mean", matrix_to_json(s.mean)},
              {"max_z", z},
              {"within_5se", within_se(s, exact, 5.0)}};
}

ChannelKraus parse_channel(const Options& o) {
  if (o.channel == "identity") return ChannelKraus::identity(o.d);
  if (o.channel == "depolarizing") return ChannelKraus::fully_depolarizing(o.d);
  if (o.channel == "random") {
    RandomStream rng(o.seed, kSetupStream);
    return ChannelKraus::random(o.d, o.rank, rng);
  }
  if (!std::filesystem::exists(o.channel)) {
    throw UsageError("--channel: '" + o.channel + "' is neither identity, depolarizing, random nor a file");
  }
  std::ifstream in(o.channel);
  const json j = json::parse(in);
  const json& list = j.is_array() ? j : j.at("kraus");
  std::vector<CMat> ks;
  for (const auto& m : list) ks.push_back(matrix_from_json(m));
  return ChannelKraus(std::move(ks));
}

CMat state_or_default(const Options& o, int d, bool random_default) {
  if (!o.state.empty()) {
    CMat rho = load_matrix(o.state);
    // A column vector is taken as a pure state.
    if (rho.cols() == 1) rho = CMat(rho * rho.adjoint());
    if (rho.rows() != d || !is_density(rho, 1e-10)) {
      throw DomainError("--state must be a " + std::to_string(d) + "x" + std::to_string(d) + " density matrix");
    }
    return rho;
  }
  if (random_default) {
    RandomStream rng(o.seed, kSetupStream + 1);
    CMat g(d, d);
    for (Eigen::Index i = 0; i < g.size(); ++i) g.data()[i] = rng.complex_normal();
    CMat rho = g * g.adjoint();
    return rho / rho.trace();
  }
  CMat rho = CMat::Zero(d, d);
  rho(0, 0) = 1.0;
  return rho;
}

json bounds_json(const std::map<std::string, double>& m) {
  json j = json::object();
  for (const auto& [name, v] : m) j[name] = v;
  return j;
}

json design_report_json(const DesignReport& r) {
  json j{{"mode", to_string(r.mode)},
         {"k", r.k},
         {"d", r.d},
         {"frame_potential", r.frame_potential},
         {"haar_frame_potential", r.haar_frame_potential},
         {"l2_deviation", r.l2_deviation},
         {"verdict", to_string(r.verdict)},
         {"tolerance", r.tolerance},
         {"derived_bounds", bounds_json(r.derived_bounds)}};
  if (r.mode == Mode::MonteCarlo) {
    j["frame_potential_se"] = r.frame_potential_se;
    j["samples"] = r.samples;
  }
  j["tpe_norm"] = r.tpe_norm ? json(*r.tpe_norm) : json();
  return j;
}

// ---------------------------------------------------------------------------

void cmd_wg(const Options& o, json& res, json&) {
  const auto t = weingarten_table(o.k, o.d);
  res["mode"] = "exact";
  res["gram_rank"] = t->gram_rank;
  json coeffs = json::array();
  for (std::size_t i = 0; i < t->perms.size(); ++i) {
    coeffs.push_back({{"permutation", t->perms[i].to_string()},
                      {"cycles", cycle_notation(t->perms[i])},
                      {"cycle_type", t->perms[i].cycle_type()},
                      {"value", t->coefficients[i]}});
  }
  res["coefficients"] = coeffs;
}

void cmd_moment(const CLI::App& sub, const Options& o, json& res, json& diag) {
  if (o.observables.size() != 1) throw UsageError("moment needs exactly one --observable");
  const CMat obs = load_operator(o.observables[0]);
  const CMat exact = moment_apply_exact(obs, o.k, o.d);
  const MomentCoefficients mc = moment_coefficients(obs, o.k, o.d);
  res["exact"] = {{"mode", "exact"}, {"output", matrix_to_json(exact)}, {"residual", mc.residual}};
  json coeffs = json::array();
  for (std::size_t i = 0; i < mc.perms.size(); ++i) {
    coeffs.push_back({{"permutation", mc.perms[i].to_string()}, {"re", mc.c[i].real()}, {"im", mc.c[i].imag()}});
  }
  res["exact"]["coefficients"] = coeffs;
  if (o.mode == "mc" || given(sub, "samples")) {
    const std::size_t n = mc_samples(o);
    const std::int64_t dim = obs.rows();
    const auto stats = parallel_matrix_mean(n, o.threads, dim, dim, [&](std::size_t i) {
      RandomStream rng(o.seed, i);
      const CMat uk = kron_power(sample_haar_unitary(o.d, rng), o.k);
      return CMat(uk * obs * uk.adjoint());
    });
    res["mc"] = matrix_stats_block(stats, exact);
    if (!res["mc"]["within_5se"].get<bool>()) diag.push_back("Monte Carlo mean deviates from the exact moment by more than 5 SE");
  }
}

void cmd_sym(const CLI::App& sub, const Options& o, json& res, json&) {
  res["mode"] = "exact";
  res["sym_dim"] = sym_dim(o.d, o.k);
  res["asym_dim"] = asym_dim(o.d, o.k);
  res["overlap_moment"] = overlap_moment(o.k, o.d);
  if (ipow(o.d, o.k) <= kDenseCap) {
    res["trace_p_sym"] = p_sym(o.d, o.k).trace().real();
    res["trace_p_asym"] = p_asym(o.d, o.k).trace().real();
  }
  if (o.mode == "mc" || given(sub, "samples")) {
    const std::size_t n = mc_samples(o);
    const auto xs = parallel_samples(n, o.threads, [&](std::size_t i) {
      RandomStream rng(o.seed, i);
      return std::pow(std::norm(sample_haar_state(o.d, rng)(0, 0)), o.k);
    });
    const MeanSE s = mean_se(xs);
    res["overlap_moment_mc"] = mc_block(n, s.mean, s.se);
  }
}

void cmd_certify(const Options& o, json& res, json& diag) {
  const UnitaryEnsemble e = parse_ensemble(o);
  const bool is_power = std::holds_alternative<ProductPower>(e.variant());
  const bool exact_ok = has_exact_moments(e) && (!is_power || within_vectorized_cap(e.dim(), o.k));
  CertifyParams p;
  p.mode = resolve_mode(o, exact_ok);
  p.samples = mc_samples(o);
  p.seed = o.seed;
  p.threads = o.threads;
  p.with_tpe = p.mode == Mode::Exact;
  if (o.tol > 0) p.tolerance = o.tol;
  const DesignReport r = certify_design(e, o.k, p);
  res = design_report_json(r);
  res["ensemble"] = e.name();
  if (p.mode == Mode::Exact && !r.tpe_norm) diag.push_back("tpe_norm omitted: d^{2k} exceeds the dense cap");
  if (r.tpe_norm) {
    const bool consistent = *r.tpe_norm <= r.l2_deviation + 1e-9 &&
                            std::abs(r.derived_bounds.at("diamond_upper") - std::pow(r.d, r.k) * *r.tpe_norm) <= 1e-9;
    res["bounds_consistent"] = consistent;
    if (!consistent) diag.push_back("bound conversion consistency check failed");
  }
  if (p.mode == Mode::MonteCarlo) diag.push_back("verdict uses a " + std::to_string(p.tolerance.value_or(3.0)) + " SE interval");
}

void cmd_tpe(const Options& o, json& res, json& diag) {
  Options base_opts = o;
  base_opts.power = 1;
  const UnitaryEnsemble base = parse_ensemble(base_opts);
  const Mode mode = resolve_mode(o, has_exact_moments(base) && within_vectorized_cap(base.dim(), o.k));
  res["mode"] = to_string(mode);
  res["ensemble"] = base.name();
  if (mode == Mode::Exact) {
    const double eps = tpe_norm(base, o.k);
    res["tpe_norm"] = eps;
    json amp = json::array();
    bool holds = true;
    for (int p = 1; p <= o.power; ++p) {
      const double ep = tpe_norm(amplify(base, p), o.k);
      const double bound = std::pow(eps, p);
      holds = holds && ep <= bound + 1e-9;
      amp.push_back({{"power", p}, {"tpe_norm", ep}, {"bound", bound}});
    }
    res["amplification"] = amp;
    res["amplification_holds"] = holds;
  } else {
    const std::size_t n = mc_samples(o);
    const UnitaryEnsemble e = o.power == 1 ? base : amplify(base, o.power);
    res["tpe_norm"] = tpe_norm_mc(e, o.k, n, o.seed, o.threads);
    res["samples"] = n;
    res["power"] = o.power;
    diag.push_back("sampled TPE norm is biased upward by O(sqrt(d^{2k}/N)) sampling noise");
  }
}

void cmd_twirl(const CLI::App& sub, const Options& o, json& res, json& diag) {
  const bool mc = o.mode == "mc" || given(sub, "samples");
  if (o.conjugate) {
    const CMat rho = state_or_default(o, o.d * o.d, true);
    const ConjugateTwirl t = conjugate_twirl_state(rho, o.d);
    res["exact"] = {{"mode", "exact"}, {"p", t.p}, {"output", matrix_to_json(t.output)}};
    if (mc) res["mc"] = matrix_stats_block(conjugate_twirl_mc(rho, o.d, mc_samples(o), o.seed, o.threads), t.output);
    return;
  }
  const ChannelKraus ch = parse_channel(o);
  const CMat rho = state_or_default(o, o.d, true);
  const double p = twirl_depolarizing_parameter(ch);
  const CMat twirled = twirl_channel_exact(ch, rho);
  const CMat depol = p * rho + (1.0 - p) * identity(o.d) / static_cast<double>(o.d);
  res["exact"] = {{"mode", "exact"},
                  {"p", p},
                  {"entanglement_fidelity", entanglement_fidelity(ch)},
                  {"output", matrix_to_json(twirled)},
                  {"depolarizing_form_error", max_abs_diff(twirled, depol)}};
  if (mc) {
    res["mc"] = matrix_stats_block(twirl_channel_mc(ch, rho, mc_samples(o), o.seed, o.threads), twirled);
    if (!res["mc"]["within_5se"].get<bool>()) diag.push_back("Monte Carlo twirl deviates by more than 5 SE");
  }
}

void cmd_fidelity(const CLI::App& sub, const Options& o, json& res, json&) {
  const ChannelKraus ch = parse_channel(o);
  const CMat target = o.target.empty() ? identity(o.d) : load_operator(o.target);
  res["exact"] = {{"mode", "exact"},
                  {"entanglement_fidelity", entanglement_fidelity(ch)},
                  {"average_gate_fidelity", average_gate_fidelity(ch, target)}};
  if (o.mode == "mc" || given(sub, "samples")) {
    const std::size_t n = mc_samples(o);
    const MeanSE s = average_gate_fidelity_mc(ch, target, n, o.seed, o.threads);
    res["mc"] = mc_block(n, s.mean, s.se);
  }
}

void cmd_purity(const CLI::App& sub, const Options& o, json& res, json&) {
  res["exact"] = {{"mode", "exact"},
                  {"expected_purity", expected_purity(o.dA, o.dB)},
                  {"page_entropy_bits", page_entropy(o.dA, o.dB)},
                  {"page_entropy_lower_bound_bits", page_entropy_lower_bound(std::min(o.dA, o.dB), std::max(o.dA, o.dB))}};
  if (o.mode == "mc" || given(sub, "samples")) {
    const std::size_t n = mc_samples(o);
    const MeanSE s = purity_mc(o.dA, o.dB, n, o.seed, o.threads);
    res["mc"] = mc_block(n, s.mean, s.se);
  }
}

void cmd_barren(const Options& o, json& res, json& diag) {
  BarrenConfig cfg = BarrenConfig::z_family(o.n, mc_samples(o));
  if (!o.observables.empty()) cfg.observable = load_operator(o.observables.at(0));
  if (!o.generator.empty()) cfg.generator = load_operator(o.generator);
  if (!o.state.empty()) cfg.rho0 = state_or_default(o, 1 << o.n, false);
  const BarrenRecord r = barren_plateau_experiment(cfg, o.seed, o.threads);
  res["exact"] = {{"mode", "exact"}, {"var_C", r.exact_var_C}, {"var_dC", r.exact_var_dC}, {"mean_C", 0.0}};
  res["mc"] = {{"mode", "mc"},
               {"samples", r.samples},
               {"mean_C", r.mean_C},
               {"mean_C_se", r.mean_C_se},
               {"var_C", r.var_C},
               {"var_C_se", r.var_C_se},
               {"mean_dC", r.mean_dC},
               {"mean_dC_se", r.mean_dC_se},
               {"var_dC", r.var_dC},
               {"var_dC_se", r.var_dC_se}};
  if (std::abs(r.var_C - r.exact_var_C) > 5 * r.var_C_se) diag.push_back("var_C deviates from the closed form by more than 5 SE");
  if (std::abs(r.var_dC - r.exact_var_dC) > 5 * r.var_dC_se) diag.push_back("var_dC deviates from the closed form by more than 5 SE");
}

void cmd_tails(const CLI::App& sub, const Options& o, json& res, json& diag) {
  const TailKind kind = tail_kind_from_string(o.kind);
  const int d = given(sub, "n") ? (1 << o.n) : o.d;
  const std::size_t n = o.samples > 0 ? o.samples : 20000;
  const TailCheckReport r = tail_check(kind, d, o.eps, n, o.seed, o.threads);
  res = {{"mode", "mc"},
         {"bound_name", r.bound_name},
         {"d", r.d},
         {"epsilon", r.epsilon},
         {"samples", r.samples},
         {"empirical_tail", r.empirical_tail},
         {"empirical_se", r.empirical_se},
         {"bound_value", std::isfinite(r.bound_value) ? json(r.bound_value) : json("inf")},
         {"passed", r.passed}};
  if (!r.passed) diag.push_back("empirical tail exceeds the bound by more than 3 SE");
}

void cmd_shadow(const CLI::App& sub, const Options& o, json& res, json& diag) {
  std::vector<std::string> labels = o.observables;
  SnapshotLog log;
  std::optional<CMat> rho;
  if (!o.log_in.empty()) {
    std::ifstream in(o.log_in);
    if (!in) throw std::runtime_error("cannot read snapshot log " + o.log_in);
    log = SnapshotLog::from_json(json::parse(in));
  }
  const int n_qubits = o.log_in.empty() ? o.n : log.n_qubits;
  const int d = 1 << n_qubits;
  if (labels.empty()) labels.push_back("Z" + std::string(static_cast<std::size_t>(n_qubits - 1), 'I'));
  std::vector<CMat> obs;
  double max_bound = 0;
  for (const auto& l : labels) {
    obs.push_back(load_operator(l));
    if (obs.back().rows() != d) throw DimensionError("observable " + l + " does not act on " + std::to_string(n_qubits) + " qubits");
    max_bound = std::max(max_bound, shadow_variance_bound(obs.back()));
  }
  const std::size_t batches = given(sub, "batches") ? o.batches : median_of_means_batches(obs.size(), o.delta);

  if (o.log_in.empty()) {
    rho = state_or_default(o, d, false);
    const std::size_t n = given(sub, "samples") ? o.samples : sample_complexity(obs.size(), o.eps, o.delta, max_bound);
    log = generate_snapshots(*rho, n, o.seed, o.threads);
    if (!o.log_out.empty()) {
      std::ofstream out(o.log_out);
      if (!out) throw std::runtime_error("cannot write snapshot log " + o.log_out);
      out << log.to_json().dump() << "\n";
    }
  } else {
    diag.push_back("estimates replayed from a snapshot log; exact values unavailable");
  }

  const auto est = estimate_observables(log, obs, batches, o.threads);
  res["mode"] = "mc";
  res["samples"] = log.snapshots.size();
  res["batches"] = batches;
  res["n_qubits"] = n_qubits;
  json list = json::array();
  for (std::size_t m = 0; m < est.size(); ++m) {
    json e{{"observable", labels[m]},
           {"estimate", est[m].estimate},
           {"batch_means", est[m].batch_means},
           {"grand_mean", est[m].grand_mean},
           {"grand_se", est[m].grand_se},
           {"variance_bound", shadow_variance_bound(obs[m])}};
    if (rho) {
      e["exact_value"] = (obs[m] * *rho).trace().real();
      e["exact_variance"] = shadow_variance_exact(*rho, obs[m]);
    }
    list.push_back(e);
  }
  res["estimates"] = list;
}

}  // namespace

void register_commands(CLI::App& app, Options& o) {
  auto seeded = [&](CLI::App* s) {
    s->add_option("--seed", o.seed, "Random seed")->capture_default_str();
    s->add_option("--threads", o.threads, "Worker threads (0: HAAR_TOOLKIT_THREADS or all cores)");
    s->add_option("--out", o.out, "Write the report here instead of stdout");
  };
  auto mode = [&](CLI::App* s) {
    s->add_option("--mode", o.mode, "exact, mc or auto")->check(CLI::IsMember({"exact", "mc", "auto"}))->capture_default_str();
    s->add_option("--samples", o.samples, "Monte Carlo sample count");
  };
  auto pos = CLI::PositiveNumber;

  auto* wg = app.add_subcommand("wg", "Weingarten coefficients Wg(pi, d) for every pi in S_k");
  wg->add_option("--k", o.k)->check(pos)->capture_default_str();
  wg->add_option("--d", o.d)->check(pos)->capture_default_str();
  wg->add_option("--threads", o.threads, "Accepted for uniformity; wg is single-threaded");
  wg->add_option("--out", o.out);

  auto* moment = app.add_subcommand("moment", "E[U^{(x)k} O U^dagger{(x)k}] for a given O");
  moment->add_option("--k", o.k)->check(pos)->capture_default_str();
  moment->add_option("--d", o.d)->check(pos)->capture_default_str();
  moment->add_option("--observable", o.observables, "Matrix file or Pauli string")->required();
  mode(moment);
  seeded(moment);

  auto* sym = app.add_subcommand("sym", "Symmetric and antisymmetric subspace data");
  sym->add_option("--k", o.k)->check(pos)->capture_default_str();
  sym->add_option("--d", o.d)->check(pos)->capture_default_str();
  mode(sym);
  seeded(sym);

  auto* certify = app.add_subcommand("certify", "Frame-potential design certification");
  certify->add_option("--ensemble", o.ensemble, "haar, pauli1, pauliN, clifford1, cliffordN or a manifest path")
      ->capture_default_str();
  certify->add_option("--k", o.k)->check(pos)->capture_default_str();
  certify->add_option("--d", o.d, "Dimension for haar")->check(pos)->capture_default_str();
  certify->add_option("--n", o.n, "Qubits for pauliN / cliffordN")->check(pos)->capture_default_str();
  certify->add_option("--power", o.power, "Certify the product of this many samples")->check(pos)->capture_default_str();
  certify->add_option("--tol", o.tol, "Exact: absolute tolerance; mc: number of SEs");
  mode(certify);
  seeded(certify);

  auto* tpe = app.add_subcommand("tpe", "Tensor-product-expander norm and its amplification");
  tpe->add_option("--ensemble", o.ensemble)->capture_default_str();
  tpe->add_option("--k", o.k)->check(pos)->capture_default_str();
  tpe->add_option("--d", o.d)->check(pos)->capture_default_str();
  tpe->add_option("--n", o.n)->check(pos)->capture_default_str();
  tpe->add_option("--power", o.power, "Report powers 1..P")->check(pos)->capture_default_str();
  mode(tpe);
  seeded(tpe);

  auto* twirl = app.add_subcommand("twirl", "Haar twirl of a channel, or the U (x) U* twirl of a state");
  twirl->add_option("--d", o.d)->check(pos)->capture_default_str();
  twirl->add_option("--channel", o.channel, "identity, depolarizing, random or a Kraus file")->capture_default_str();
  twirl->add_option("--rank", o.rank, "Kraus rank of the random channel")->check(pos)->capture_default_str();
  twirl->add_option("--state", o.state, "Input state file (default: seeded random)");
  twirl->add_flag("--conjugate", o.conjugate, "Twirl a state on d^2 by U (x) U*");
  mode(twirl);
  seeded(twirl);

  auto* fid = app.add_subcommand("fidelity", "Entanglement and average gate fidelity");
  fid->add_option("--d", o.d)->check(pos)->capture_default_str();
  fid->add_option("--channel", o.channel)->capture_default_str();
  fid->add_option("--rank", o.rank)->check(pos)->capture_default_str();
  fid->add_option("--target", o.target, "Target unitary file or Pauli string (default: identity)");
  mode(fid);
  seeded(fid);

  auto* purity = app.add_subcommand("purity", "Expected purity and Page entropy of a random bipartite state");
  purity->add_option("--dA", o.dA)->check(pos)->capture_default_str();
  purity->add_option("--dB", o.dB)->check(pos)->capture_default_str();
  mode(purity);
  seeded(purity);

  auto* barren = app.add_subcommand("barren", "Cost and gradient variance under Haar-random circuits");
  barren->add_option("--n", o.n)->check(CLI::Range(1, 5))->capture_default_str();
  barren->add_option("--samples", o.samples);
  barren->add_option("--observable", o.observables, "Observable O (default Z on qubit 0)");
  barren->add_option("--generator", o.generator, "Generator H (default Z on qubit 0)");
  barren->add_option("--state", o.state, "Initial state (default |0...0>)");
  seeded(barren);

  auto* tails = app.add_subcommand("tails", "Empirical concentration tails against their bounds");
  tails->add_option("--kind", o.kind)->check(CLI::IsMember({"markov_pauli", "levy", "exp_overlap"}))->capture_default_str();
  tails->add_option("--d", o.d)->check(pos)->capture_default_str();
  tails->add_option("--n", o.n, "Qubits; overrides --d with 2^n")->check(pos);
  tails->add_option("--eps", o.eps)->check(CLI::NonNegativeNumber)->capture_default_str();
  tails->add_option("--samples", o.samples);
  seeded(tails);

  auto* shadow = app.add_subcommand("shadow", "Classical-shadow estimation with global Cliffords");
  shadow->add_option("--n", o.n)->check(CLI::Range(1, 3))->capture_default_str();
  shadow->add_option("--state", o.state, "State file (default |0...0>)");
  shadow->add_option("--observable", o.observables, "Matrix files or Pauli strings");
  shadow->add_option("--samples", o.samples, "Snapshots (default from eps, delta)");
  shadow->add_option("--batches", o.batches, "Median-of-means batches (default from delta)");
  shadow->add_option("--eps", o.eps)->capture_default_str();
  shadow->add_option("--delta", o.delta)->capture_default_str();
  shadow->add_option("--log", o.log_in, "Estimate from this snapshot log instead of sampling");
  shadow->add_option("--log-out", o.log_out, "Write the snapshot log here");
  seeded(shadow);
}

json run_command(const CLI::App& sub, const Options& o) {
  json res = json::object();
  json diag = json::array();
  const std::string name = sub.get_name();
  if (name == "wg") cmd_wg(o, res, diag);
  else if (name == "moment") cmd_moment(sub, o, res, diag);
  else if (name == "sym") cmd_sym(sub, o, res, diag);
  else if (name == "certify") cmd_certify(o, res, diag);
  else if (name == "tpe") cmd_tpe(o, res, diag);
  else if (name == "twirl") cmd_twirl(sub, o, res, diag);
  else if (name == "fidelity") cmd_fidelity(sub, o, res, diag);
  else if (name == "purity") cmd_purity(sub, o, res, diag);
  else if (name == "barren") cmd_barren(o, res, diag);
  else if (name == "tails") cmd_tails(sub, o, res, diag);
  else if (name == "shadow") cmd_shadow(sub, o, res, diag);
  else throw UsageError("unknown subcommand " + name);
  return json{{"config", config_echo(sub, o)}, {"results", res}, {"diagnostics", diag}};
}

}  // namespace haar::cli
