#include "abspot/kernel_io.hpp"

#include <fstream>

namespace abspot {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw ValidationError(std::string("missing key '") + key + "'");
  return j.at(key);
}

std::string require_string(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_string()) throw ValidationError(std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

double require_number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw ValidationError(std::string("'") + key + "' must be a number");
  return v.get<double>();
}

std::size_t require_count(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) {
    throw ValidationError(std::string("'") + key + "' must be a nonnegative integer");
  }
  return v.get<std::size_t>();
}

SelfEnergy parse_diagonal(const json& j) {
  if (!j.contains("diagonal")) return SelfEnergy::infinite;
  const std::string d = require_string(j, "diagonal");
  if (d == "inf") return SelfEnergy::infinite;
  if (d == "cell-average") return SelfEnergy::cell_average;
  throw ValidationError("unknown diagonal rule '" + d + "'");
}

MatrixEntry entry_from_json(const json& j) {
  if (j.is_string() && j.get<std::string>() == "inf") return {true, Rational(0)};
  return {false, rational_from_json(j)};
}

json entry_to_json(const MatrixEntry& e) {
  if (e.infinite) return "inf";
  return rational_to_json_entry(e.value);
}

SpaceSpec space_from_json(const json& j) {
  const std::string type = require_string(j, "type");
  if (type == "finite") {
    const json& labels = require(j, "labels");
    if (!labels.is_array()) throw ValidationError("'labels' must be an array");
    LabelsSpace s;
    for (const auto& l : labels) s.labels.push_back(l.is_string() ? l.get<std::string>() : l.dump());
    return s;
  }
  if (type == "grid") {
    const std::string domain = require_string(j, "domain");
    if (domain == "interval") return IntervalGridSpace{require_number(j, "a"), require_number(j, "b"), require_count(j, "m")};
    if (domain == "circle") {
      CircleGridSpace c{require_count(j, "m"), CircleMetric::chordal};
      if (j.contains("metric")) {
        const std::string metric = require_string(j, "metric");
        if (metric == "arc") {
          c.metric = CircleMetric::arc;
        } else if (metric != "chordal") {
          throw ValidationError("unknown circle metric '" + metric + "'");
        }
      }
      return c;
    }
    throw ValidationError("unknown grid domain '" + domain + "'");
  }
  throw ValidationError("unknown space type '" + type + "'");
}

KernelDescriptor kernel_from_json(const json& j) {
  const std::string type = require_string(j, "type");
  if (type == "matrix") {
    const json& rows = require(j, "rows");
    if (!rows.is_array()) throw ValidationError("'rows' must be an array of arrays");
    MatrixKernel m;
    for (const auto& row : rows) {
      if (!row.is_array()) throw ValidationError("'rows' must be an array of arrays");
      std::vector<MatrixEntry> r;
      for (const auto& e : row) r.push_back(entry_from_json(e));
      m.rows.push_back(std::move(r));
    }
    return {m};
  }
  if (type == "log") return {LogKernel{parse_diagonal(j)}};
  if (type == "riesz") return {RieszKernel{require_number(j, "s"), parse_diagonal(j)}};
  if (type == "shifted") {
    return {ShiftedKernel{rational_from_json(require(j, "c")),
                          std::make_shared<const KernelDescriptor>(kernel_from_json(require(j, "base")))}};
  }
  throw ValidationError("unknown kernel type '" + type + "'");
}

json space_to_json(const SpaceSpec& spec) {
  return std::visit(
      [](const auto& s) -> json {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LabelsSpace>) {
          return {{"type", "finite"}, {"labels", s.labels}};
        } else if constexpr (std::is_same_v<T, IntervalGridSpace>) {
          return {{"type", "grid"}, {"domain", "interval"}, {"a", s.a}, {"b", s.b}, {"m", s.m}};
        } else {
          json out = {{"type", "grid"}, {"domain", "circle"}, {"m", s.m}};
          if (s.metric == CircleMetric::arc) out["metric"] = "arc";
          return out;
        }
      },
      spec);
}

json kernel_to_json(const KernelDescriptor& d) {
  return std::visit(
      [](const auto& form) -> json {
        using T = std::decay_t<decltype(form)>;
        if constexpr (std::is_same_v<T, MatrixKernel>) {
          json rows = json::array();
          for (const auto& row : form.rows) {
            json r = json::array();
            for (const auto& e : row) r.push_back(entry_to_json(e));
            rows.push_back(std::move(r));
          }
          return {{"type", "matrix"}, {"rows", std::move(rows)}};
        } else if constexpr (std::is_same_v<T, LogKernel>) {
          json out = {{"type", "log"}};
          if (form.diagonal == SelfEnergy::cell_average) out["diagonal"] = "cell-average";
          return out;
        } else if constexpr (std::is_same_v<T, RieszKernel>) {
          json out = {{"type", "riesz"}, {"s", form.s}};
          if (form.diagonal == SelfEnergy::cell_average) out["diagonal"] = "cell-average";
          return out;
        } else {
          return {{"type", "shifted"}, {"c", rational_to_json_entry(form.c)}, {"base", kernel_to_json(*form.base)}};
        }
      },
      d.form);
}

}  // namespace

Rational rational_from_json(const json& j) {
  if (j.is_number_integer()) return Rational(mpz_class(j.dump(), 10));
  // dump() yields the shortest round-trip decimal, taken at face value.
  if (j.is_number_float()) return parse_rational(j.dump());
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") throw ValidationError("'inf' is not allowed here");
    return parse_rational(s);
  }
  if (j.is_object() && j.contains("num") && j.contains("den")) {
    const auto part = [](const json& v) {
      return v.is_string() ? mpz_class(v.get<std::string>(), 10) : mpz_class(v.dump(), 10);
    };
    const mpz_class den = part(j.at("den"));
    if (den == 0) throw ValidationError("zero denominator");
    Rational r(part(j.at("num")), den);
    r.canonicalize();
    return r;
  }
  throw ValidationError("expected a number, got " + j.dump());
}

json rational_to_json_entry(const Rational& x) {
  if (x.get_den() == 1 && x.get_num().fits_slong_p()) return x.get_num().get_si();
  if (x.get_den() == 1) return x.get_num().get_str();
  // Terminating decimals (den = 2^a 5^b) print exactly when short.
  mpz_class den = x.get_den();
  unsigned long twos = 0, fives = 0;
  while (mpz_divisible_ui_p(den.get_mpz_t(), 2)) {
    den /= 2;
    ++twos;
  }
  while (mpz_divisible_ui_p(den.get_mpz_t(), 5)) {
    den /= 5;
    ++fives;
  }
  const unsigned long digits = std::max(twos, fives);
  if (den == 1 && digits <= 30) {
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, digits);
    mpz_class scaled = x.get_num() * (scale / x.get_den());
    const bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::string s = scaled.get_str();
    if (s.size() <= digits) s.insert(0, digits - s.size() + 1, '0');
    s.insert(s.size() - digits, ".");
    return (negative ? "-" : "") + s;
  }
  return format_rational(x);
}

KernelSpec kernel_spec_from_json(const json& j) {
  return {space_from_json(require(j, "space")), kernel_from_json(require(j, "kernel"))};
}

json kernel_spec_to_json(const KernelSpec& spec) {
  return {{"space", space_to_json(spec.space)}, {"kernel", kernel_to_json(spec.kernel)}};
}

KernelSpec load_kernel_spec(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open kernel file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError("kernel file " + path.string() + ": " + e.what());
  }
  return kernel_spec_from_json(j);
}

void save_kernel_spec(const std::filesystem::path& path, const KernelSpec& spec) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << kernel_spec_to_json(spec).dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path.string());
}

}  // namespace abspot
