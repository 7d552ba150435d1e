#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pss/problem.hpp"
#include "pss/zero.hpp"

namespace pss {

/// A problem shipped with the library, with its expected check verdicts
/// (the test suite reproduces all of them).
struct CatalogEntry {
  std::string name;
  std::string source;
  std::map<std::string, Verdict> expected;
  /// Closed-form solution family available for the immerse pipeline.
  bool has_soliton = false;
  std::string notes;
};

const std::vector<CatalogEntry>& builtin_catalog();

/// Name of the environment variable overriding the catalog directory.
inline constexpr const char* kCatalogDirEnv = "PSS_CATALOG_DIR";

/// Problem source by name: a file `<name>.pssp` in $PSS_CATALOG_DIR wins
/// over the embedded copy.
std::optional<std::string> catalog_source(std::string_view name);

/// Load a problem by catalog name or filesystem path.
ProblemDef load_problem(std::string_view name_or_path,
                        const std::map<std::string, Rational>& overrides = {});

}  // namespace pss
