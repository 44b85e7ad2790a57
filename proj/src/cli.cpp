#include "avgsym/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "avgsym/averaging.hpp"
#include "avgsym/error.hpp"
#include "avgsym/experiments.hpp"
#include "avgsym/fourier.hpp"
#include "avgsym/kernels.hpp"
#include "avgsym/rng.hpp"
#include "avgsym/separation.hpp"
#include "avgsym/version.hpp"

namespace avgsym::cli {

using nlohmann::json;

namespace {

struct Common {
  std::string out = "avgsym_out";
  std::uint64_t seed = 0;
  double eps = 0.5;
  double delta = 0.1;
  int trials = 16;
  int threads = 0;
};

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
  std::ofstream os(path, std::ios::binary);
  if (!os) fail(ErrorKind::io, fmt::format("cannot write {}", path.string()));
  os << content;
  if (!os) fail(ErrorKind::io, fmt::format("write failed for {}", path.string()));
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) fail(ErrorKind::io, fmt::format("cannot read {}", path));
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

json tolerances() {
  return {{"weight_sum", kSchemeSumTolerance},
          {"weight_zero", kWeightEpsilon},
          {"rank", kRankTolerance},
          {"sandwich", 1e-9},
          {"fourier_roundtrip", 1e-10}};
}

/// Parsed option values of a subcommand, in declaration order.
json option_config(const CLI::App& app) {
  json cfg = json::object();
  for (const CLI::Option* opt : app.get_options()) {
    const std::string name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    if (opt->count() > 0) {
      const auto& res = opt->results();
      cfg[name] = res.size() == 1 ? json(res.front()) : json(res);
    } else {
      cfg[name] = opt->get_default_str();
    }
  }
  return cfg;
}

/// Writes <out>/<name>.json and the metadata sidecar, and echoes the result on stdout.
void emit(const Common& c, const CLI::App& root, const CLI::App& sub, const json& result) {
  const std::filesystem::path dir(c.out);
  const std::string name = sub.get_name();
  write_file(dir / (name + ".json"), result.dump(2) + "\n");
  json meta{{"tool", "avgsym"},
            {"version", kVersion},
            {"subcommand", name},
            {"seed", c.seed},
            {"config", {{"global", option_config(root)}, {name, option_config(sub)}}},
            {"tolerances", tolerances()}};
  write_file(dir / (name + ".meta.json"), meta.dump(2) + "\n");
  std::cout << result.dump(2) << "\n";
}

std::shared_ptr<const IrrepTable> try_table(const GroupPtr& g) {
  try {
    return std::make_shared<const IrrepTable>(irreps_of(g));
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::capability) throw;
    return nullptr;
  }
}

int parse_element(const Group& g, const std::string& token) {
  for (int a = 0; a < g.order(); ++a)
    if (g.label(a) == token) return a;
  try {
    std::size_t used = 0;
    const int v = std::stoi(token, &used);
    if (used == token.size() && v >= 0 && v < g.order()) return v;
  } catch (const std::logic_error&) {
  }
  fail(ErrorKind::usage, fmt::format("'{}' is neither an element label nor an index of {}", token, g.descriptor()));
}

AveragingScheme build_scheme(const GroupPtr& g, const std::string& spec, std::uint64_t seed) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "uniform") return uniform_scheme(g);
  if (kind == "delta") return delta_scheme(g, arg.empty() ? g->identity() : parse_element(*g, arg));
  if (kind == "random") {
    long long n = 0;
    try {
      n = std::stoll(arg);
    } catch (const std::logic_error&) {
      fail(ErrorKind::usage, fmt::format("bad draw count in '{}'", spec));
    }
    return random_scheme(g, n, seed);
  }
  if (kind == "file") {
    json j;
    try {
      j = json::parse(read_file(arg));
    } catch (const json::exception& e) {
      fail(ErrorKind::io, fmt::format("{}: {}", arg, e.what()));
    }
    auto w = scheme_from_json(j.contains("scheme") ? j.at("scheme") : j);
    if (!w.group->same_as(*g)) fail(ErrorKind::group_mismatch, "scheme file uses a different group");
    return AveragingScheme::make(g, w.support, w.weights);
  }
  fail(ErrorKind::usage, fmt::format("unknown scheme '{}' (uniform | delta:<g> | random:<n> | file:<path>)", spec));
}

Certifier build_certifier(Representation rho, const std::string& method) {
  if (method == "projector") return Certifier(std::move(rho));
  auto table = try_table(rho.group_ptr());
  if (method == "fourier" && !table)
    fail(ErrorKind::capability, fmt::format("no irrep table for {}", rho.group().descriptor()));
  if (method != "fourier" && method != "auto") fail(ErrorKind::usage, fmt::format("unknown method '{}'", method));
  if (!table && rho.dim() > kProjectorMaxDim)
    fail(ErrorKind::size_limit, "representation too large for the projector path and no irrep table is available");
  return Certifier(std::move(rho), std::move(table));
}

json profile_json(const EigenProfile& p) {
  json rows = json::array();
  for (std::size_t i = 0; i < p.lambdas.size(); ++i)
    rows.push_back({{"lambda", fmt::format("{}/{}", p.lambdas[i].num, p.lambdas[i].den)}, {"max_mult", p.max_mult[i]}});
  return rows;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::logic_error&) {
      fail(ErrorKind::usage, fmt::format("bad integer '{}' in list", item));
    }
  }
  return out;
}

}  // namespace

Representation build_rep(GroupPtr g, const std::string& spec, int sym_power) {
  if (sym_power < 0) fail(ErrorKind::usage, "symmetric power must be >= 0");
  auto base = [&]() -> Representation {
    if (spec == "regular") return rep_regular(g);
    if (spec == "permutation") return rep_permutation(g);
    if (spec == "sign") return rep_sign_action(g);
    if (spec == "trivial") return rep_trivial(g);
    if (spec.rfind("irrep:", 0) == 0) {
      const auto table = irreps_of(g);
      int i = -1;
      try {
        i = std::stoi(spec.substr(6));
      } catch (const std::logic_error&) {
      }
      if (i < 0 || i >= table.count()) fail(ErrorKind::usage, fmt::format("irrep index out of range in '{}'", spec));
      return table.irreps[i];
    }
    fail(ErrorKind::usage, fmt::format("unknown representation '{}' (regular | permutation | sign | trivial | irrep:<i>)", spec));
  }();
  if (sym_power == 1) return base;
  return rep_sym_power(base, sym_power);
}

std::vector<SelftestCheck> selftest(std::uint64_t seed) {
  std::vector<SelftestCheck> checks;
  auto check = [&](std::string name, double value, double tol) {
    checks.push_back({std::move(name), value <= tol, value, tol});
  };
  const std::vector<std::string> groups{"cyclic:5", "signflip:3", "dihedral:4", "symmetric:3", "cyclic:2*dihedral:3"};
  for (const auto& spec : groups) {
    auto g = parse_group(spec);
    double valid = 0.0;
    try {
      g->validate();
    } catch (const Error&) {
      valid = 1.0;
    }
    check(spec + " group axioms", valid, 0.0);
    const auto table = std::make_shared<const IrrepTable>(irreps_of(g));
    long long dsq = 0;
    for (int d : table->dims) dsq += 1LL * d * d;
    check(spec + " sum of squared irrep dims", std::abs(static_cast<double>(dsq - g->order())), 0.0);
    double hom = 0.0, uni = 0.0;
    for (const auto& pi : table->irreps) {
      hom = std::max(hom, pi.homomorphism_residual(seed));
      uni = std::max(uni, pi.unitarity_residual());
    }
    check(spec + " irrep homomorphism residual", hom, 1e-9);
    check(spec + " irrep unitarity residual", uni, 1e-9);

    Rng rng = make_rng(seed, static_cast<std::uint64_t>(g->order()));
    std::normal_distribution<double> normal;
    std::vector<Complex> v(g->order());
    for (auto& z : v) z = {normal(rng), normal(rng)};
    const GroupSignal sig(g, v);
    const auto back = inverse_fourier(fourier(sig, *table), *table);
    double err = 0.0;
    for (int a = 0; a < g->order(); ++a) err = std::max(err, std::abs(back[a] - sig[a]));
    check(spec + " Fourier inversion round trip", err, 1e-10);
    check(spec + " Plancherel residual", plancherel_residual(sig, *table), 1e-10);

    const auto rho = rep_regular(g);
    const Certifier proj(rho), four(rho, table);
    double sandwich = 0.0, agree = 0.0;
    for (int t = 0; t < 5; ++t) {
      const auto w = random_scheme(g, 1 + t, derive_seed(seed, 1000 + t));
      const double weak = proj.weak(w), strong = proj.strong(w);
      sandwich = std::max({sandwich, weak - strong - 1e-9, strong - 4.0 * weak - 1e-9, -weak});
      agree = std::max(agree, std::abs(weak - four.weak(w)));
    }
    check(spec + " weak <= strong <= 4 weak", std::max(0.0, sandwich), 0.0);
    check(spec + " projector and Fourier certificates agree", agree, 1e-8);

    std::vector<int> all(g->order());
    for (int a = 0; a < g->order(); ++a) all[a] = a;
    const auto feas = exact_feasible_on_support(all, *table);
    double dev = feas.feasible ? 0.0 : 1.0;
    for (double x : feas.witness) dev = std::max(dev, std::abs(x - 1.0 / g->order()));
    check(spec + " full support forces the uniform witness", dev, 1e-9);
  }
  return checks;
}

int run(int argc, char** argv) {
  CLI::App app{"Averaging schemes and approximate symmetry on finite groups", "avgsym"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "Flat `key = value` file; [subcommand] sections or subcommand.key entries; flags win");
  Common c;
  app.add_option("--out", c.out, "Output directory")->capture_default_str();
  app.add_option("--seed", c.seed, "Random seed")->capture_default_str();
  app.add_option("--eps", c.eps, "Target precision")->capture_default_str();
  app.add_option("--delta", c.delta, "Failure probability")->capture_default_str();
  app.add_option("--trials", c.trials, "Trials (per search size, or Monte Carlo repetitions)")->capture_default_str();
  app.add_option("--threads", c.threads, "Worker thread cap (0 = runtime default)")->capture_default_str();

  std::string group_spec = "cyclic:4", rep_spec = "regular", scheme_spec = "uniform", method = "auto";
  int sym_power = 1;
  auto add_group = [&](CLI::App* s) { s->add_option("--group", group_spec, "Group, e.g. cyclic:8 or cyclic:2*dihedral:3")->capture_default_str(); };
  auto add_rep = [&](CLI::App* s) {
    s->add_option("--rep", rep_spec, "regular | permutation | sign | trivial | irrep:<i>")->capture_default_str();
    s->add_option("--sym-power", sym_power, "Apply the symmetric power Sym^k")->capture_default_str();
  };

  auto* s_group = app.add_subcommand("group", "Describe a group and optionally export its table");
  add_group(s_group);
  std::string export_path;
  s_group->add_option("--export", export_path, "Write the multiplication table in text form");

  auto* s_irreps = app.add_subcommand("irreps", "Irreducible representations and character table");
  add_group(s_irreps);
  std::string fourier_scheme;
  s_irreps->add_option("--fourier", fourier_scheme, "Also emit the Fourier coefficients of this scheme");

  auto* s_certify = app.add_subcommand("certify", "Weak and strong certificates of a scheme");
  add_group(s_certify);
  add_rep(s_certify);
  s_certify->add_option("--scheme", scheme_spec, "uniform | delta:<g> | random:<n> | file:<path>")->capture_default_str();
  s_certify->add_option("--method", method, "auto | projector | fourier")->capture_default_str();

  auto* s_sample = app.add_subcommand("sample", "Random scheme at the sampler size for (eps, delta)");
  add_group(s_sample);
  add_rep(s_sample);
  s_sample->add_option("--method", method, "auto | projector | fourier")->capture_default_str();

  auto* s_min = app.add_subcommand("minimize", "Search for a small scheme with weak certificate <= eps");
  add_group(s_min);
  add_rep(s_min);
  int swaps = 200;
  bool no_fallback = false;
  s_min->add_option("--swaps", swaps, "Swap budget")->capture_default_str();
  s_min->add_flag("--no-fallback", no_fallback, "Do not fall back to the uniform scheme");
  long long max_draws = 0;
  s_min->add_option("--max-draws", max_draws, "Cap on the draw-count search (0 = sampler bound)")->check(CLI::NonNegativeNumber);
  s_min->add_option("--method", method, "auto | projector | fourier")->capture_default_str();

  auto* s_kb = app.add_subcommand("kbound", "Eigenvalue profile and the K bound of a representation");
  add_group(s_kb);
  add_rep(s_kb);
  std::string eig_method = "auto";
  s_kb->add_option("--eigen", eig_method, "auto | numeric | cycle_type | character")->capture_default_str();

  auto* s_sep = app.add_subcommand("separation", "Exact versus approximate cost over a group family");
  std::string family = "signflip:2..6";
  s_sep->add_option("--family", family, "family:lo..hi or family:a,b,c")->capture_default_str();
  s_sep->add_option("--swaps", swaps, "Swap budget")->capture_default_str();

  auto* s_lb = app.add_subcommand("lowerbound", "Generation and certificate of a scheme on Z_2^d");
  int lb_d = 3;
  std::string lb_support = "000,001,010,100", lb_weights;
  s_lb->add_option("--d", lb_d, "Dimension")->capture_default_str();
  s_lb->add_option("--support", lb_support, "Comma-separated labels or indices")->capture_default_str();
  s_lb->add_option("--weights", lb_weights, "Comma-separated weights (default uniform)");

  auto* s_fig = app.add_subcommand("figure1", "Rotation averaging of a planar field");
  Figure1Config fig;
  std::string fig_subsets = "1,5,100";
  s_fig->add_option("--N", fig.N, "Number of rotations")->capture_default_str();
  s_fig->add_option("--grid", fig.grid, "Grid points per axis")->capture_default_str();
  s_fig->add_option("--subsets", fig_subsets, "Subset sizes")->capture_default_str();

  auto* s_reg = app.add_subcommand("regress", "Risk of OLS and its symmetrizations");
  RegressionConfig reg;
  s_reg->add_option("--group", reg.group, "Group")->capture_default_str();
  s_reg->add_option("--rep", reg.rep, "Representation (regular)")->capture_default_str();
  s_reg->add_option("--sigma", reg.sigma, "Noise level")->capture_default_str();
  s_reg->add_option("--n", reg.n, "Samples per trial")->capture_default_str();
  s_reg->add_option("--scheme-eps", reg.eps, "Weak-scheme target (0 = uniform)")->capture_default_str();

  auto* s_mlp = app.add_subcommand("mlp", "Evaluation-time sign-flip averaging of a trained MLP");
  MlpConfig mlp;
  s_mlp->add_option("--d", mlp.d, "Input dimension")->capture_default_str();
  s_mlp->add_option("--n-train", mlp.n_train, "Training samples")->capture_default_str();
  s_mlp->add_option("--n-test", mlp.n_test, "Test samples")->capture_default_str();
  s_mlp->add_option("--h1", mlp.h1, "First hidden width")->capture_default_str();
  s_mlp->add_option("--h2", mlp.h2, "Second hidden width")->capture_default_str();
  s_mlp->add_option("--lr", mlp.lr, "Learning rate")->capture_default_str();
  s_mlp->add_option("--batch", mlp.batch, "Batch size")->capture_default_str();
  s_mlp->add_option("--epochs", mlp.epochs, "Epochs")->capture_default_str();
  s_mlp->add_option("--kmax", mlp.k_max, "Largest subset exponent")->capture_default_str();
  s_mlp->add_option("--curve-stride", mlp.curve_stride, "Epochs between curve points")->capture_default_str();
  s_mlp->add_option("--curve-subset", mlp.curve_subset, "Subset size for the averaged curve")->capture_default_str();

  auto* s_self = app.add_subcommand("selftest", "Run the invariant suite on small groups");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    kernels::set_thread_limit(c.threads);
    CLI::App* sub = app.get_subcommands().front();

    if (sub == s_group) {
      auto g = parse_group(group_spec);
      g->validate();
      const auto& part = g->conjugacy();
      std::vector<int> sizes;
      for (const auto& cls : part.classes) sizes.push_back(static_cast<int>(cls.size()));
      std::vector<std::string> gens;
      for (int a : g->generators()) gens.push_back(g->label(a));
      json j{{"group", g->descriptor()}, {"family", to_string(g->family())}, {"order", g->order()},
             {"abelian", g->is_abelian()}, {"classes", part.count()}, {"class_sizes", sizes}, {"generators", gens}};
      if (!export_path.empty()) {
        std::ostringstream os;
        write_group(os, *g);
        write_file(export_path, os.str());
        j["export"] = export_path;
      }
      emit(c, app, *sub, j);
    } else if (sub == s_irreps) {
      auto g = parse_group(group_spec);
      const auto table = irreps_of(g);
      std::ostringstream csv;
      write_character_table_csv(csv, table);
      write_file(std::filesystem::path(c.out) / "irreps.csv", csv.str());
      long long dsq = 0;
      for (int d : table.dims) dsq += 1LL * d * d;
      json j{{"group", g->descriptor()}, {"order", g->order()}, {"count", table.count()},
             {"labels", table.labels}, {"dims", table.dims}, {"sum_dim_sq", dsq}, {"character_table", "irreps.csv"}};
      if (!fourier_scheme.empty()) {
        const auto w = build_scheme(g, fourier_scheme, c.seed);
        j["fourier"] = coefficients_to_json(fourier(w.signal(), table), table);
      }
      emit(c, app, *sub, j);
    } else if (sub == s_certify) {
      auto g = parse_group(group_spec);
      const auto w = build_scheme(g, scheme_spec, c.seed);
      const auto cert = build_certifier(build_rep(g, rep_spec, sym_power), method);
      json j = report_to_json(cert.report(w));
      j["group"] = g->descriptor();
      j["rep"] = cert.rep().name();
      j["dim"] = cert.rep().dim();
      j["scheme"] = scheme_to_json(w);
      emit(c, app, *sub, j);
    } else if (sub == s_sample) {
      auto g = parse_group(group_spec);
      const long long n = theorem2_size(g->order(), c.eps, c.delta);
      const auto w = random_scheme(g, n, c.seed);
      const auto cert = build_certifier(build_rep(g, rep_spec, sym_power), method);
      const auto report = cert.report(w);
      json j{{"group", g->descriptor()}, {"rep", cert.rep().name()}, {"n", n}, {"formula", kTheorem2Formula},
             {"eps", c.eps}, {"delta", c.delta}, {"size", w.size()}, {"eps_weak", report.eps_weak},
             {"certified", report.eps_weak <= c.eps}, {"scheme", scheme_to_json(w)}};
      emit(c, app, *sub, j);
    } else if (sub == s_min) {
      auto g = parse_group(group_spec);
      const auto cert = build_certifier(build_rep(g, rep_spec, sym_power), method);
      MinimizeOptions opts{c.trials, swaps, c.seed, !no_fallback, max_draws};
      const auto res = minimize_scheme(cert, c.eps, opts);
      json trace = json::array();
      for (const auto& s : res.trace)
        trace.push_back({{"draws", s.draws}, {"best_size", s.best_size}, {"best_eps", s.best_eps}, {"feasible_trials", s.feasible_trials}});
      json j{{"group", g->descriptor()}, {"rep", cert.rep().name()}, {"eps_target", c.eps}, {"size", res.scheme.size()},
             {"eps_weak", res.eps}, {"feasible", res.feasible}, {"used_fallback", res.used_fallback},
             {"swaps_accepted", res.swaps_accepted}, {"method", to_string(cert.method())}, {"trace", trace},
             {"scheme", scheme_to_json(res.scheme)}};
      emit(c, app, *sub, j);
      if (!res.feasible) {
        std::cerr << "search_failure: no scheme certified at the target; best candidate written\n";
        return exit_code(ErrorKind::search_failure);
      }
    } else if (sub == s_kb) {
      auto g = parse_group(group_spec);
      const auto rho = build_rep(g, rep_spec, sym_power);
      EigenMethod em = EigenMethod::automatic;
      if (eig_method == "numeric") em = EigenMethod::numeric;
      else if (eig_method == "cycle_type") em = EigenMethod::cycle_type;
      else if (eig_method == "character") em = EigenMethod::character;
      else if (eig_method != "auto") fail(ErrorKind::usage, fmt::format("unknown eigen method '{}'", eig_method));
      const auto profile = eigen_profile(rho, em);
      json j{{"group", g->descriptor()}, {"rep", rho.name()}, {"dim", rho.dim()}, {"order", g->order()},
             {"K", k_bound(profile, g->order())}, {"sum_max_mult", profile.total()}, {"profile", profile_json(profile)}};
      emit(c, app, *sub, j);
    } else if (sub == s_sep) {
      const auto rows = separation_table(family, c.eps, c.trials, c.seed, swaps);
      std::ostringstream csv;
      write_separation_csv(csv, rows);
      write_file(std::filesystem::path(c.out) / "separation.csv", csv.str());
      json arr = json::array();
      bool incomplete = false;
      for (const auto& r : rows) {
        arr.push_back({{"family", r.family}, {"group", r.group}, {"order", r.order}, {"K", r.K},
                       {"exact_cost", r.exact_cost}, {"approx_cost", r.approx_cost}, {"eps", r.eps},
                       {"certified_eps", r.certified_eps}, {"seed", r.seed}, {"status", r.status}});
        incomplete = incomplete || r.status == "incomplete";
      }
      emit(c, app, *sub, json{{"family", family}, {"eps", c.eps}, {"rows", arr}, {"csv", "separation.csv"}});
      if (incomplete) return exit_code(ErrorKind::search_failure);
    } else if (sub == s_lb) {
      const auto cert = sign_flip_regular_certifier(lb_d);
      std::vector<int> support;
      std::stringstream ss(lb_support);
      std::string tok;
      while (std::getline(ss, tok, ',')) support.push_back(parse_element(*cert.group(), tok));
      std::vector<double> weights;
      if (lb_weights.empty()) {
        weights.assign(support.size(), 1.0 / static_cast<double>(support.size()));
      } else {
        std::stringstream ws(lb_weights);
        while (std::getline(ws, tok, ',')) {
          try {
            weights.push_back(std::stod(tok));
          } catch (const std::logic_error&) {
            fail(ErrorKind::usage, fmt::format("bad weight '{}'", tok));
          }
        }
      }
      const auto r = sign_flip_lower_bound_check(cert, support, weights);
      json j{{"d", lb_d}, {"support", support}, {"weights", weights}, {"generates", r.generates},
             {"eps_weak_on_regular", r.eps_weak_on_regular}};
      emit(c, app, *sub, j);
      if (!r.generates && r.eps_weak_on_regular < 1.0 - 1e-9) {
        std::cerr << "numerical: non-generating support certified below 1\n";
        return exit_code(ErrorKind::numerical);
      }
    } else if (sub == s_fig) {
      fig.seed = c.seed;
      fig.subset_sizes = parse_int_list(fig_subsets);
      const auto r = figure1_demo(fig);
      const std::filesystem::path dir(c.out);
      std::ostringstream full;
      write_grid_csv(full, r.xs, r.ys, r.full_average);
      write_file(dir / "figure1_full.csv", full.str());
      std::vector<double> orig(r.xs.size());
      for (std::size_t p = 0; p < orig.size(); ++p) orig[p] = figure1_field(r.xs[p], r.ys[p]);
      std::ostringstream original;
      write_grid_csv(original, r.xs, r.ys, orig);
      write_file(dir / "figure1_original.csv", original.str());
      for (std::size_t s = 0; s < fig.subset_sizes.size(); ++s) {
        std::ostringstream os;
        write_grid_csv(os, r.xs, r.ys, r.averages[s]);
        write_file(dir / fmt::format("figure1_m{}.csv", fig.subset_sizes[s]), os.str());
      }
      emit(c, app, *sub, figure1_summary(fig, r));
    } else if (sub == s_reg) {
      reg.seed = c.seed;
      reg.trials = c.trials;
      const auto r = regression_risk(reg);
      std::ostringstream csv;
      write_regression_csv(csv, r);
      write_file(std::filesystem::path(c.out) / "regress.csv", csv.str());
      auto est = [](const RiskEstimate& e) { return json{{"risk", e.risk}, {"stderr", e.std_error}}; };
      json j{{"group", reg.group}, {"m", r.m}, {"m_triv", r.m_triv}, {"n", r.n}, {"sigma", r.sigma}, {"trials", reg.trials},
             {"eps", r.eps}, {"scheme_eps", r.scheme_eps}, {"redraws", r.redraws},
             {"erm", est(r.erm)}, {"exact", est(r.exact)}, {"weak", est(r.weak)}, {"scheme", scheme_to_json(r.scheme)}};
      emit(c, app, *sub, j);
    } else if (sub == s_mlp) {
      mlp.seed = c.seed;
      const auto r = mlp_experiment(mlp);
      const std::filesystem::path dir(c.out);
      std::ostringstream a, b;
      write_mlp_subset_csv(a, r);
      write_mlp_curve_csv(b, r);
      write_file(dir / "mlp_subsets.csv", a.str());
      write_file(dir / "mlp_curve.csv", b.str());
      json j{{"subset_sizes", r.subset_sizes}, {"test_loss", r.test_loss}, {"curve_epochs", r.curve_epochs},
             {"curve_plain", r.curve_plain}, {"curve_averaged", r.curve_averaged}};
      emit(c, app, *sub, j);
    } else if (sub == s_self) {
      const auto checks = selftest(c.seed);
      json arr = json::array();
      bool ok = true;
      for (const auto& ch : checks) {
        arr.push_back({{"name", ch.name}, {"passed", ch.passed}, {"value", ch.value}, {"tolerance", ch.tolerance}});
        ok = ok && ch.passed;
      }
      emit(c, app, *sub, json{{"passed", ok}, {"checks", arr}});
      if (!ok) return exit_code(ErrorKind::numerical);
    }
  } catch (const Error& e) {
    std::cerr << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code(e.kind());
  }
  return 0;
}

}  // namespace avgsym::cli
