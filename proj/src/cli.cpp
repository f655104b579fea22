#include "abspot/cli.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <sstream>

#include "abspot/fixtures.hpp"
#include "abspot/kernel_io.hpp"
#include "abspot/report.hpp"

namespace abspot {

namespace {

using nlohmann::json;

struct Options {
  std::string kernel_path;
  std::string fixture_name;
  std::optional<std::size_t> fixture_n;
  std::optional<std::size_t> fixture_m;
  std::optional<std::size_t> n;
  std::size_t n_max = 6;
  std::string subset;
  std::string mode = "auto";
  std::optional<double> tolerance;
  std::uint64_t seed = 0;
  std::uint64_t budget = kDefaultEnumerationBudget;
  bool no_heuristic = false;
  std::string shift = "1";
  std::string out_path;
  std::string target;  // quantity, suite, or fixture name
};

struct Io {
  std::ostream& out;
  std::ostream& err;
};

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  f.flush();
  if (!f) throw IoError("write failed: " + path);
}

bool is_matrix_form(const KernelDescriptor& d) {
  if (std::holds_alternative<MatrixKernel>(d.form)) return true;
  if (const auto* s = std::get_if<ShiftedKernel>(&d.form)) return is_matrix_form(*s->base);
  return false;
}

KernelSpec load_spec(const Options& o) {
  if (o.kernel_path.empty() == o.fixture_name.empty()) {
    throw ValidationError("give exactly one of --kernel PATH or --fixture NAME");
  }
  if (!o.fixture_name.empty()) return fixture(o.fixture_name, {o.fixture_n, o.fixture_m}).spec;
  return load_kernel_spec(o.kernel_path);
}

IndexSet parse_subset(const std::string& text, std::size_t n) {
  IndexSet s;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) throw ValidationError("empty entry in --subset");
    item = item.substr(b, e - b + 1);
    if (item.find_first_not_of("0123456789") != std::string::npos) {
      throw ValidationError("--subset entries must be nonnegative integers, got '" + item + "'");
    }
    s.push_back(std::stoull(item));
  }
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw ValidationError("--subset repeats an index");
  return normalize_subset(s, n);
}

template <class Scalar>
double tolerance_for(const Options& o) {
  if (o.tolerance) {
    if (!(*o.tolerance >= 0.0)) throw ValidationError("--tolerance must be nonnegative");
    return *o.tolerance;
  }
  return ScalarTraits<Scalar>::exact ? 0.0 : kDirectTolerance;
}

template <class Scalar>
TraceOptions trace_options(const Options& o) {
  TraceOptions t;
  t.budget = o.budget;
  t.allow_heuristic = !o.no_heuristic;
  t.seed = o.seed;
  t.tolerance = tolerance_for<Scalar>(o);
  return t;
}

template <class Scalar>
const char* exact_label() {
  return ScalarTraits<Scalar>::exact ? "exact-rational" : "float-certified";
}

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

int emit_checks(const Io& io, const std::string& suite, const std::vector<Check>& checks, json extra = json::object()) {
  bool all = true;
  json arr = json::array();
  for (const auto& c : checks) {
    all = all && c.pass;
    arr.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    io.err << (c.pass ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail) << '\n';
  }
  extra["suite"] = suite;
  extra["checks"] = arr;
  extra["pass"] = all;
  io.out << extra.dump(2) << '\n';
  io.err << suite << ": " << (all ? "pass" : "FAIL") << '\n';
  return all ? kExitOk : kExitInvariant;
}

template <class Scalar>
std::string leq_detail(const ExtReal<Scalar>& a, const ExtReal<Scalar>& b) {
  return format_value(a) + " <= " + format_value(b);
}

/// Equilibrium energy of the cell-average version of a grid kernel whose
/// pointwise diagonal is infinite.
std::optional<EquilibriumResult<double>> continuum_estimate(const KernelSpec& spec, const IndexSet& subset,
                                                            const Options& o) {
  if (!has_infinite_grid_diagonal(spec)) return std::nullopt;
  const auto k = build_kernel<double>(with_cell_average_diagonal(spec));
  EnergyOptions eo;
  eo.seed = o.seed;
  return wiener_energy(k, subset, eo);
}

std::string summary(const json& v) {
  if (v.is_object() && v.contains("num")) {
    const auto part = [](const json& x) { return x.is_string() ? x.get<std::string>() : x.dump(); };
    return v["den"] == 1 ? part(v["num"]) : part(v["num"]) + "/" + part(v["den"]);
  }
  if (v.is_object()) {
    std::string s;
    for (auto it = v.begin(); it != v.end(); ++it) s += (s.empty() ? "" : ", ") + it.key() + " = " + summary(*it);
    return s;
  }
  return v.is_string() ? v.get<std::string>() : v.dump();
}

// --- compute ------------------------------------------------------------------

template <class Scalar>
int compute(const Options& o, const KernelSpec& spec, const Kernel<Scalar>& k, const IndexSet& subset,
            const Io& io) {
  const double tol = tolerance_for<Scalar>(o);
  const auto& space = k.space();
  QuantityReport rep;
  rep.extra["subset"] = subset;
  rep.extra["mode"] = ScalarTraits<Scalar>::exact ? "exact" : "float";

  if (o.target == "dn" || o.target == "mn") {
    if (!o.n) throw ValidationError("compute " + o.target + " needs --n");
    const std::size_t n = *o.n;
    const bool exact = multiset_count(subset.size(), n) <= o.budget;
    if (!exact && o.no_heuristic) {
      throw BudgetExceeded("n = " + std::to_string(n) + " exceeds the enumeration budget (heuristics disabled)");
    }
    if (o.target == "dn") {
      const auto r = exact ? dn_exact(k, subset, n, o.budget) : fekete_heuristic(k, subset, n, 4, o.seed);
      rep.quantity = "D_n";
      rep.value = value_json(r.value);
      rep.certification = certification_of<Scalar>(r.status);
      rep.witness = points_json(r.indices, space);
    } else {
      const auto r = exact ? mn_exact(k, subset, n, o.budget) : mn_heuristic(k, subset, n, 4, o.seed);
      rep.quantity = "M_n";
      rep.value = value_json(r.value);
      rep.certification = certification_of<Scalar>(r.status);
      rep.witness = points_json(r.zeros, space);
    }
    rep.extra["n"] = n;
  } else if (o.target == "w") {
    EnergyOptions eo;
    eo.tolerance = ScalarTraits<Scalar>::exact ? kDirectTolerance : tol;
    eo.seed = o.seed;
    const auto r = wiener_energy(k, subset, eo);
    rep.quantity = "w";
    rep.value = value_json(r.w_value);
    rep.certification = to_string(r.certification);
    if (r.minimizer) rep.witness = measure_json(*r.minimizer, space);
    if (auto c = continuum_estimate(spec, subset, o)) {
      rep.extra["continuum_estimate"] = {{"value", value_json(c->w_value)},
                                         {"certification", to_string(c->certification)},
                                         {"diagonal", "cell-average"}};
    }
  } else if (o.target == "uvq") {
    const auto e = minimax_energies(k, subset, tol);
    rep.quantity = "uvq";
    rep.value = {{"u", value_json(e.u.value)}, {"v", value_json(e.v.value)}, {"q", value_json(e.q.value)}};
    rep.certification = exact_label<Scalar>();
    json wit = json::object();
    if (e.u.witness) wit["u"] = measure_json(*e.u.witness, space);
    if (e.v.witness) wit["v"] = measure_json(*e.v.witness, space);
    if (e.q.witness) wit["q"] = measure_json(*e.q.witness, space);
    rep.witness = wit;
  } else if (o.target == "rendezvous") {
    const auto r = rendezvous(k, subset, tol);
    rep.quantity = "r";
    rep.value = value_json(r.r_value);
    rep.certification = exact_label<Scalar>();
    if (r.invariant_measure) rep.witness = measure_json(*r.invariant_measure, space);
    rep.extra["constancy_defect"] = r.constancy_defect ? value_json(*r.constancy_defect) : json(nullptr);
  } else {
    throw ValidationError("unknown quantity '" + o.target + "' (dn, mn, w, uvq, rendezvous)");
  }

  const json j = rep.to_json();
  const std::string text = j.dump(2) + "\n";
  if (!o.out_path.empty()) write_file(o.out_path, text);
  io.out << text;
  io.err << rep.quantity << " = " << summary(j["value"]) << " (" << rep.certification << ")\n";
  return kExitOk;
}

// --- verify -------------------------------------------------------------------

template <class Scalar>
int verify_chain(const Options& o, const Kernel<Scalar>& k, const IndexSet& subset, const Io& io) {
  const double tol = tolerance_for<Scalar>(o);
  std::vector<Check> checks;
  std::optional<DiameterTrace<Scalar>> d;
  std::optional<ChebyshevTrace<Scalar>> m;
  try {
    d = d_estimate(k, subset, o.n_max, trace_options<Scalar>(o));
    checks.push_back({"D_n nondecreasing", true, ""});
  } catch (const InvariantViolation& e) {
    checks.push_back({"D_n nondecreasing", false, e.what()});
  }
  try {
    ChebyshevTraceOptions mo;
    static_cast<TraceOptions&>(mo) = trace_options<Scalar>(o);
    m = m_estimate(k, subset, o.n_max, mo);
    checks.push_back({"n M_n superadditive, sup M_n <= q", true, ""});
  } catch (const InvariantViolation& e) {
    checks.push_back({"n M_n superadditive, sup M_n <= q", false, e.what()});
  }
  EnergyOptions eo;
  eo.seed = o.seed;
  const auto w = wiener_energy(k, subset, eo);
  const auto e = minimax_energies(k, subset, tol);
  const bool w_certified = w.certification == Certification::exact_rational ||
                           w.certification == Certification::float_certified;

  if (d && m) {
    for (const auto& de : d->sequence) {
      const auto& me = m->sequence[de.n - 1];
      if (de.status == BoundStatus::exact && me.status == BoundStatus::exact) {
        checks.push_back({"D_" + std::to_string(de.n) + " <= M_" + std::to_string(de.n),
                          ext_leq_tol(de.value, me.value, tol), leq_detail(de.value, me.value)});
      }
    }
  }
  if (m) {
    for (const auto& me : m->sequence) {
      if (me.status != BoundStatus::exact) continue;
      checks.push_back({"M_" + std::to_string(me.n) + " <= q", ext_leq_tol(me.value, e.q.value, tol),
                        leq_detail(me.value, e.q.value)});
    }
  }
  if (d && w_certified) {
    for (const auto& de : d->sequence) {
      if (de.status != BoundStatus::exact) continue;
      checks.push_back({"D_" + std::to_string(de.n) + " <= w", ext_leq_tol(de.value, w.w_value, tol),
                        leq_detail(de.value, w.w_value)});
    }
  }
  if (w_certified) {
    checks.push_back({"w <= v", ext_leq_tol(w.w_value, e.v.value, tol), leq_detail(w.w_value, e.v.value)});
    checks.push_back({"v <= w", ext_leq_tol(e.v.value, w.w_value, tol), leq_detail(e.v.value, w.w_value)});
    checks.push_back({"w <= q", ext_leq_tol(w.w_value, e.q.value, tol), leq_detail(w.w_value, e.q.value)});
  }
  checks.push_back({"v <= u", ext_leq_tol(e.v.value, e.u.value, tol), leq_detail(e.v.value, e.u.value)});
  checks.push_back({"q <= u", ext_leq_tol(e.q.value, e.u.value, tol), leq_detail(e.q.value, e.u.value)});
  return emit_checks(io, "chain", checks);
}

template <class Scalar>
int verify_frostman(const Options& o, const Kernel<Scalar>& k, const IndexSet& subset, const Io& io) {
  const double tol = ScalarTraits<Scalar>::exact ? 0.0 : tolerance_for<Scalar>(o);
  EnergyOptions eo;
  eo.seed = o.seed;
  const auto w = wiener_energy(k, subset, eo);
  if (w.w_value.is_infinite()) {
    throw ValidationError("w is infinite on this set; the Frostman conditions need a finite-energy minimizer");
  }
  const auto rep = frostman_verify(k, subset, *w.minimizer, w.w_value, tol);
  auto list = [](const IndexSet& s) {
    std::string t;
    for (auto i : s) t += (t.empty() ? "at " : ", ") + std::to_string(i);
    return t;
  };
  std::vector<Check> checks = {
      {"U >= w off exceptional points", rep.lower_ok, list(rep.lower_violations)},
      {"U <= w on the support", rep.support_upper_ok, list(rep.support_upper_violations)},
      {"U = w at every atom", rep.ae_equality_ok, list(rep.ae_equality_violations)},
  };
  json extra = {{"w", value_json(w.w_value)},
                {"certification", to_string(w.certification)},
                {"minimizer", measure_json(*w.minimizer, k.space())},
                {"exceptional_points", rep.exceptional_points}};
  return emit_checks(io, "frostman", checks, extra);
}

template <class Scalar>
int verify_shift(const Options& o, const Kernel<Scalar>& k, const IndexSet& subset, const Io& io) {
  const double tol = tolerance_for<Scalar>(o);
  const Rational c_exact = parse_rational(o.shift);
  Scalar c;
  if constexpr (ScalarTraits<Scalar>::exact) {
    c = c_exact;
  } else {
    c = c_exact.get_d();
  }
  const auto ks = shift_kernel(k, c);
  std::vector<Check> checks;
  auto add = [&](const std::string& name, const ExtReal<Scalar>& base, const ExtReal<Scalar>& shifted) {
    const auto expect = ext_shift(base, c);
    checks.push_back({name + "(k + c) = " + name + "(k) + c", ext_eq_tol(shifted, expect, tol),
                      format_value(shifted) + " vs " + format_value(expect)});
  };

  const auto opts = trace_options<Scalar>(o);
  const auto d0 = d_estimate(k, subset, o.n_max, opts);
  const auto d1 = d_estimate(ks, subset, o.n_max, opts);
  for (std::size_t i = 0; i < d0.sequence.size(); ++i) {
    if (d0.sequence[i].status == BoundStatus::exact && d1.sequence[i].status == BoundStatus::exact) {
      add("D_" + std::to_string(d0.sequence[i].n), d0.sequence[i].value, d1.sequence[i].value);
    }
  }
  ChebyshevTraceOptions mo;
  static_cast<TraceOptions&>(mo) = opts;
  const auto m0 = m_estimate(k, subset, o.n_max, mo);
  const auto m1 = m_estimate(ks, subset, o.n_max, mo);
  for (std::size_t i = 0; i < m0.sequence.size(); ++i) {
    if (m0.sequence[i].status == BoundStatus::exact && m1.sequence[i].status == BoundStatus::exact) {
      add("M_" + std::to_string(m0.sequence[i].n), m0.sequence[i].value, m1.sequence[i].value);
    }
  }
  EnergyOptions eo;
  eo.seed = o.seed;
  const auto w0 = wiener_energy(k, subset, eo);
  const auto w1 = wiener_energy(ks, subset, eo);
  if (w0.certification != Certification::heuristic_upper_bound) add("w", w0.w_value, w1.w_value);
  add("q", minimax_q(k, subset, tol).value, minimax_q(ks, subset, tol).value);
  add("u", minimax_u(k, subset, tol).value, minimax_u(ks, subset, tol).value);
  if (subset.size() <= kSupportEnumerationMaxPoints) {
    add("v", minimax_v(k, subset, tol).value, minimax_v(ks, subset, tol).value);
  }
  if (k.is_finite_on(subset, subset)) {
    add("r", rendezvous(k, subset, tol).r_value, rendezvous(ks, subset, tol).r_value);
  }
  json extra = {{"shift", value_json(c)}};
  return emit_checks(io, "shift", checks, extra);
}

template <class Scalar>
int verify_equivalence(const Options& o, const Kernel<Scalar>& k, const IndexSet& subset, const Io& io) {
  const double tol = tolerance_for<Scalar>(o);
  const auto r = restrict_kernel(k, subset);
  const Kernel<Scalar>& kk = r.kernel;
  const auto rep = equivalence_experiment(kk, tol);
  std::vector<Check> checks;
  std::string detail = rep.mp_holds ? "maximum principle holds" : "maximum principle fails";
  if (!rep.mp_holds) {
    for (const auto& row : rep.rows) {
      if (!row.equal) {
        std::string s;
        for (auto i : row.subset) s += (s.empty() ? "" : " ") + std::to_string(r.parent_index[i]);
        detail += "; q != w on {" + s + "}: " + format_value(row.q) + " vs " + format_value(row.w);
        break;
      }
    }
  }
  checks.push_back({"maximum principle <=> q(S) = w(S) for all S", rep.consistent, detail});
  if (rep.mp_holds) {
    const auto e = minimax_energies(kk, {}, tol);
    const auto w = wiener_energy(kk, {}).w_value;
    const bool eq = ext_eq_tol(e.u.value, e.v.value, tol) && ext_eq_tol(e.v.value, e.q.value, tol) &&
                    ext_eq_tol(e.q.value, w, tol);
    checks.push_back({"u = v = q = w", eq,
                      format_value(e.u.value) + ", " + format_value(e.v.value) + ", " + format_value(e.q.value) +
                          ", " + format_value(w)});
  }
  if (!o.out_path.empty()) write_file(o.out_path, equivalence_csv(rep));
  json extra = equivalence_json(rep, kk.space());
  extra["parent_index"] = r.parent_index;
  return emit_checks(io, "equivalence", checks, extra);
}

template <class Scalar>
int verify(const Options& o, const Kernel<Scalar>& k, const IndexSet& subset, const Io& io) {
  if (o.target == "chain") return verify_chain(o, k, subset, io);
  if (o.target == "frostman") return verify_frostman(o, k, subset, io);
  if (o.target == "shift") return verify_shift(o, k, subset, io);
  if (o.target == "equivalence") return verify_equivalence(o, k, subset, io);
  throw ValidationError("unknown suite '" + o.target + "' (chain, frostman, shift, equivalence)");
}

// --- converge -----------------------------------------------------------------

template <class Scalar>
int converge(const Options& o, const KernelSpec& spec, const Kernel<Scalar>& k, const IndexSet& subset,
             const Io& io) {
  const auto opts = trace_options<Scalar>(o);
  const auto d = d_estimate(k, subset, o.n_max, opts);
  ChebyshevTraceOptions mo;
  static_cast<TraceOptions&>(mo) = opts;
  const auto m = m_estimate(k, subset, o.n_max, mo);
  EnergyOptions eo;
  eo.seed = o.seed;
  const auto w = wiener_energy(k, subset, eo);
  std::optional<ExtReal<Scalar>> q = m.q_reference;
  std::string csv = convergence_csv(d, m, w.w_value, q);
  if (auto c = continuum_estimate(spec, subset, o)) {
    csv.insert(csv.find('\n') + 1, "# w_continuum=" + format_value(c->w_value) + "\n");
  }
  if (o.out_path.empty()) {
    io.out << csv;
  } else {
    write_file(o.out_path, csv);
    io.err << "wrote " << o.out_path << '\n';
  }
  io.err << "D_" << o.n_max << " = " << format_value(d.sequence.back().value) << ", M_" << o.n_max << " = "
         << format_value(m.sequence.back().value) << ", w = " << format_value(w.w_value) << '\n';
  return kExitOk;
}

// --- dispatch -----------------------------------------------------------------

enum class Command { compute, verify, converge };

template <class Scalar>
int run_with(Command cmd, const Options& o, const KernelSpec& spec, const Io& io) {
  const auto k = build_kernel<Scalar>(spec);
  const IndexSet subset = parse_subset(o.subset, k.size());
  switch (cmd) {
    case Command::compute:
      return compute(o, spec, k, subset, io);
    case Command::verify:
      return verify(o, k, subset, io);
    case Command::converge:
      return converge(o, spec, k, subset, io);
  }
  return kExitInput;
}

int run_kernel_command(Command cmd, const Options& o, const Io& io) {
  const KernelSpec spec = load_spec(o);
  std::string mode = o.mode;
  if (mode == "auto") {
    const bool small = build_space(spec.space).size() <= kExactModeMaxPoints;
    mode = is_matrix_form(spec.kernel) && small ? "exact" : "float";
  }
  if (mode == "exact") return run_with<Rational>(cmd, o, spec, io);
  if (mode == "float") return run_with<double>(cmd, o, spec, io);
  throw ValidationError("--mode must be exact, float or auto");
}

json expectation_json(const Expectation& e) {
  json v = std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ExactReal>) {
          return value_json(x);
        } else if constexpr (std::is_same_v<T, bool>) {
          return x;
        } else if constexpr (std::is_same_v<T, Approx>) {
          return {{"approx", x.target}, {"tolerance", x.tolerance}};
        } else {
          return {{"claim", x.claim}};
        }
      },
      e.value);
  return {{"quantity", e.quantity}, {"value", v}, {"note", e.note}};
}

int fixtures_list(const Options& o, const Io& io) {
  json arr = json::array();
  for (const auto& name : fixture_names()) {
    const auto f = fixture(name, {o.fixture_n, o.fixture_m});
    json exp = json::array();
    for (const auto& e : f.expected) exp.push_back(expectation_json(e));
    arr.push_back({{"name", f.name}, {"description", f.description}, {"expected", exp}});
    io.err << f.name << ": " << f.description << '\n';
  }
  io.out << arr.dump(2) << '\n';
  return kExitOk;
}

int fixtures_export(const Options& o, const Io& io) {
  const auto f = fixture(o.target, {o.fixture_n, o.fixture_m});
  if (o.out_path.empty()) {
    io.out << kernel_spec_to_json(f.spec).dump(2) << '\n';
  } else {
    save_kernel_spec(o.out_path, f.spec);
    io.err << "wrote " << o.out_path << '\n';
  }
  return kExitOk;
}

void add_kernel_options(CLI::App* app, Options& o) {
  app->add_option("--kernel", o.kernel_path, "kernel spec file (JSON)");
  app->add_option("--fixture", o.fixture_name, "built-in fixture name");
  app->add_option("--fixture-n", o.fixture_n, "fixture truncation size N");
  app->add_option("--fixture-m", o.fixture_m, "fixture grid size m");
  app->add_option("--subset", o.subset, "comma-separated point indices (default: all)");
  app->add_option("--mode", o.mode, "exact | float | auto")->check(CLI::IsMember({"exact", "float", "auto"}));
  app->add_option("--tolerance", o.tolerance, "comparison tolerance (float mode)");
  app->add_option("--seed", o.seed, "seed for heuristic restarts");
  app->add_option("--budget", o.budget, "enumeration budget (candidate multisets)");
  app->add_flag("--no-heuristic", o.no_heuristic, "fail with exit 3 instead of falling back to heuristics");
  app->add_option("--out", o.out_path, "output file");
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Io io{out, err};
  Options o;
  CLI::App app{"Potential-theoretic constants of finite kernels"};
  app.name("abspot");
  app.require_subcommand(1);

  auto* compute_cmd = app.add_subcommand("compute", "compute one quantity");
  compute_cmd->add_option("quantity", o.target, "dn | mn | w | uvq | rendezvous")->required();
  add_kernel_options(compute_cmd, o);
  compute_cmd->add_option("--n", o.n, "system size for dn / mn");

  auto* verify_cmd = app.add_subcommand("verify", "run an invariant suite");
  verify_cmd->add_option("suite", o.target, "chain | frostman | shift | equivalence")->required();
  add_kernel_options(verify_cmd, o);
  verify_cmd->add_option("--n-max", o.n_max, "largest n for traces");
  verify_cmd->add_option("--shift", o.shift, "constant added by the shift suite");

  auto* converge_cmd = app.add_subcommand("converge", "D_n and M_n tables as CSV");
  add_kernel_options(converge_cmd, o);
  converge_cmd->add_option("--n-max", o.n_max, "largest n");

  auto* fixtures_cmd = app.add_subcommand("fixtures", "built-in examples");
  fixtures_cmd->require_subcommand(1);
  auto* list_cmd = fixtures_cmd->add_subcommand("list", "names, descriptions and expected values");
  list_cmd->add_option("--fixture-n", o.fixture_n, "truncation size N");
  list_cmd->add_option("--fixture-m", o.fixture_m, "grid size m");
  auto* export_cmd = fixtures_cmd->add_subcommand("export", "write a fixture as a kernel spec file");
  export_cmd->add_option("name", o.target, "fixture name")->required();
  export_cmd->add_option("--fixture-n", o.fixture_n, "truncation size N");
  export_cmd->add_option("--fixture-m", o.fixture_m, "grid size m");
  export_cmd->add_option("--out", o.out_path, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (*compute_cmd) return run_kernel_command(Command::compute, o, io);
    if (*verify_cmd) return run_kernel_command(Command::verify, o, io);
    if (*converge_cmd) {
      if (o.n_max < 2) throw ValidationError("--n-max must be >= 2");
      return run_kernel_command(Command::converge, o, io);
    }
    if (*list_cmd) return fixtures_list(o, io);
    if (*export_cmd) return fixtures_export(o, io);
  } catch (const BudgetExceeded& e) {
    err << "budget exceeded: " << e.what() << '\n';
    return kExitBudget;
  } catch (const InvariantViolation& e) {
    err << "invariant violated: " << e.what() << '\n';
    return kExitInvariant;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::invalid_argument& e) {  // ValidationError, SpaceMismatch
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "input error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace abspot
