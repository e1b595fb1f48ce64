#pragma once

#include <string>

#include "json.hpp"

#include "imspe/optimize.hpp"

namespace imspe {

// 17 significant digits, locale independent; "singular" for non-finite values.
std::string fmt17(double v);

// Pretty-printed JSON (2-space indent) with every number written through fmt17.
// Non-finite numbers become the string "singular".
std::string dump_json(const nlohmann::ordered_json& j);

// "# imspe-kit scan v1", a column header, then one row per node.
std::string scan_csv(const ScanTable& t);

}  // namespace imspe
