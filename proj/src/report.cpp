#include "abspot/report.hpp"

#include <cstdio>
#include <limits>
#include <sstream>

namespace abspot {

namespace {

nlohmann::json integer_json(const mpz_class& z) {
  if (z.fits_slong_p()) return static_cast<std::int64_t>(z.get_si());
  return z.get_str();
}

std::string subset_string(const IndexSet& s) {
  std::string out;
  for (auto i : s) out += (out.empty() ? "" : " ") + std::to_string(i);
  return out;
}

}  // namespace

nlohmann::json value_json(const Rational& x) {
  return {{"num", integer_json(x.get_num())}, {"den", integer_json(x.get_den())}, {"float", x.get_d()}};
}

nlohmann::json value_json(double x) { return x; }

template <class Scalar>
nlohmann::json measure_json(const DiscreteMeasure<Scalar>& mu, const FiniteSpace& space) {
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& w : mu.weights()) weights.push_back(value_json(w));
  nlohmann::json support = nlohmann::json::array();
  for (auto i : mu.support()) support.push_back(space.describe(i));
  return {{"weights", weights}, {"support", support}};
}

nlohmann::json points_json(const std::vector<std::size_t>& points, const FiniteSpace& space) {
  nlohmann::json labels = nlohmann::json::array();
  for (auto i : points) labels.push_back(space.describe(i));
  return {{"indices", points}, {"labels", labels}};
}

nlohmann::json QuantityReport::to_json() const {
  check_certification(quantity, certification);
  nlohmann::json j = extra;
  j["quantity"] = quantity;
  j["value"] = value;
  j["certification"] = certification;
  if (witness) j["witness"] = *witness;
  return j;
}

void check_certification(const std::string& quantity, const std::string& certification) {
  const bool minimization = quantity == "w" || quantity.rfind("D", 0) == 0;
  const bool maximization = quantity.rfind("M", 0) == 0;
  if (certification == "heuristic-upper-bound" && !minimization) {
    throw InvariantViolation("heuristic-upper-bound attached to " + quantity);
  }
  if (certification == "heuristic-lower-bound" && !maximization) {
    throw InvariantViolation("heuristic-lower-bound attached to " + quantity);
  }
}

template <class Scalar>
std::string certification_of(BoundStatus status) {
  if (status != BoundStatus::exact) return to_string(status);
  return ScalarTraits<Scalar>::exact ? "exact-rational" : "float-certified";
}

template <class Scalar>
std::string format_value(const ExtReal<Scalar>& x) {
  if (x.is_infinite()) return "inf";
  if constexpr (ScalarTraits<Scalar>::exact) {
    return format_rational(x.value());
  } else {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x.value());
    return buf;
  }
}

template <class Scalar>
std::string convergence_csv(const DiameterTrace<Scalar>& d, const ChebyshevTrace<Scalar>& m,
                            const ExtReal<Scalar>& w, const std::optional<ExtReal<Scalar>>& q) {
  std::ostringstream out;
  out << "# w=" << format_value(w) << '\n';
  out << "# q=" << (q ? format_value(*q) : std::string("not computed")) << '\n';
  out << "n,D_n,D_status,M_n,M_status\n";
  std::size_t n_max = 0;
  for (const auto& e : d.sequence) n_max = std::max(n_max, e.n);
  for (const auto& e : m.sequence) n_max = std::max(n_max, e.n);
  auto find = [](const auto& seq, std::size_t n) -> const TraceEntry<Scalar>* {
    for (const auto& e : seq) {
      if (e.n == n) return &e;
    }
    return nullptr;
  };
  for (std::size_t n = 1; n <= n_max; ++n) {
    const auto* de = find(d.sequence, n);
    const auto* me = find(m.sequence, n);
    if (!de && !me) continue;
    out << n << ',';
    if (de) out << format_value(de->value) << ',' << certification_of<Scalar>(de->status);
    else out << ',';
    out << ',';
    if (me) out << format_value(me->value) << ',' << certification_of<Scalar>(me->status);
    else out << ',';
    out << '\n';
  }
  return out.str();
}

template <class Scalar>
nlohmann::json equivalence_json(const EquivalenceReport<Scalar>& report, const FiniteSpace& space) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : report.rows) {
    rows.push_back({{"subset", r.subset}, {"q", value_json(r.q)}, {"w", value_json(r.w)}, {"equal", r.equal}});
  }
  nlohmann::json j = {{"mp_holds", report.mp_holds}, {"consistent", report.consistent}, {"rows", rows},
                      {"offending", report.offending}};
  if (report.mp_witness) {
    const auto& wit = *report.mp_witness;
    j["mp_witness"] = {{"measure", measure_json(wit.measure, space)},
                       {"exterior_point", wit.exterior_point},
                       {"exterior_label", space.describe(wit.exterior_point)},
                       {"gap", value_json(wit.gap)}};
  }
  return j;
}

template <class Scalar>
std::string equivalence_csv(const EquivalenceReport<Scalar>& report) {
  std::ostringstream out;
  out << "subset,q,w,equal\n";
  for (const auto& r : report.rows) {
    out << subset_string(r.subset) << ',' << format_value(r.q) << ',' << format_value(r.w) << ','
        << (r.equal ? "true" : "false") << '\n';
  }
  return out.str();
}

#define ABSPOT_INSTANTIATE(S)                                                                                    \
  template nlohmann::json measure_json(const DiscreteMeasure<S>&, const FiniteSpace&);                          \
  template std::string certification_of<S>(BoundStatus);                                                        \
  template std::string format_value(const ExtReal<S>&);                                                         \
  template std::string convergence_csv(const DiameterTrace<S>&, const ChebyshevTrace<S>&, const ExtReal<S>&,     \
                                       const std::optional<ExtReal<S>>&);                                       \
  template nlohmann::json equivalence_json(const EquivalenceReport<S>&, const FiniteSpace&);                    \
  template std::string equivalence_csv(const EquivalenceReport<S>&);

ABSPOT_INSTANTIATE(Rational)
ABSPOT_INSTANTIATE(double)

#undef ABSPOT_INSTANTIATE

}  // namespace abspot
