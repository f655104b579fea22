#pragma once

#include <filesystem>

#include <json.hpp>

#include "abspot/space_kernel.hpp"

namespace abspot {

// Kernel spec files:
//   {"space": {"type":"finite","labels":[...]}
//           | {"type":"grid","domain":"interval","a":A,"b":B,"m":M}
//           | {"type":"grid","domain":"circle","m":M[,"metric":"chordal"|"arc"]},
//    "kernel": {"type":"matrix","rows":[[...]]} | {"type":"log"} | {"type":"riesz","s":S}
//            | {"type":"shifted","c":C,"base":{...}}}
// Closed-form kernels accept "diagonal":"inf"|"cell-average". Matrix entries
// are numbers, "p/q" strings, {"num":..,"den":..} objects or "inf".

KernelSpec kernel_spec_from_json(const nlohmann::json& j);
nlohmann::json kernel_spec_to_json(const KernelSpec& spec);

KernelSpec load_kernel_spec(const std::filesystem::path& path);
void save_kernel_spec(const std::filesystem::path& path, const KernelSpec& spec);

/// Exact value of a JSON number/string/object entry; "inf" is rejected here.
Rational rational_from_json(const nlohmann::json& j);
/// Integer if integral, terminating decimal string if short, "p/q" otherwise.
nlohmann::json rational_to_json_entry(const Rational& x);

}  // namespace abspot
