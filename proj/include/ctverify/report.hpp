#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctverify/identity.hpp"
#include "ctverify/zhu.hpp"

namespace ctv {

inline constexpr int kSchemaVersion = 1;

using json = nlohmann::ordered_json;

/// Coefficients lowest degree first, each as "num/den" (or "num").
json poly_json(const RatPoly& p);
RatPoly poly_from_json(const json& j);

json case_json(const IdentityCase& c);
/// Deterministic: no timings, no host data.
json report_json(const IdentityReport& r);
/// Timings and memory peaks, kept apart so reports stay byte-stable.
json stats_json(const IdentityReport& r);
json pair_json(const PairReport& r);

json table_json(const zhu::Table& t);
json dims_json(const zhu::DimReport& d);

std::string summary_markdown(const std::vector<IdentityReport>& reports);

/// Full registry: every case at its smallest admissible (m, p).
json registry_json();

/// Writes to a sibling temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace ctv
