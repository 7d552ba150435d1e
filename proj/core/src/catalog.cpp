#include "pss/catalog.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pss/errors.hpp"

namespace pss {

namespace {

struct EmbeddedSource {
  const char* name;
  const char* source;
};

const EmbeddedSource kEmbedded[] = {
#include "catalog_data.inc"
};

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

const std::vector<CatalogEntry>& builtin_catalog() {
  static const std::vector<CatalogEntry> entries = [] {
    std::map<std::string, std::string> sources;
    for (const auto& e : kEmbedded) sources[e.name] = e.source;

    std::vector<CatalogEntry> out;
    {
      CatalogEntry e;
      e.name = "sine-gordon-7";
      e.source = sources.at(e.name);
      e.has_soliton = true;
      e.notes = "sine-Gordon, spectral-parameter forms; no sff";
      e.expected = {{"structure.eq1", Verdict::Zero},
                    {"structure.eq2", Verdict::Zero},
                    {"structure.eq3", Verdict::Zero}};
      out.push_back(std::move(e));
    }
    {
      CatalogEntry e;
      e.name = "sine-gordon-8";
      e.source = sources.at(e.name);
      e.has_soliton = true;
      e.notes = "sine-Gordon, half-angle forms with tan/cot sff";
      e.expected = {{"structure.eq1", Verdict::Zero},
                    {"structure.eq2", Verdict::Zero},
                    {"structure.eq3", Verdict::Zero},
                    {"gauss", Verdict::Zero},
                    {"codazzi.eq1", Verdict::Zero},
                    {"codazzi.eq2", Verdict::Zero}};
      out.push_back(std::move(e));
    }
    {
      CatalogEntry e;
      e.name = "fourth-order-45";
      e.source = sources.at(e.name);
      e.notes = "fourth-order evolution equation, universal sff";
      e.expected = {{"structure.eq1", Verdict::Zero},
                    {"structure.eq2", Verdict::Zero},
                    {"structure.eq3", Verdict::Zero},
                    {"gauss", Verdict::Zero},
                    {"codazzi.eq1", Verdict::Zero},
                    {"codazzi.eq2", Verdict::Zero},
                    {"lemma.f11.z-free", Verdict::Zero},
                    {"lemma.f21-eta", Verdict::Zero},
                    {"lemma.f31.z-free", Verdict::Zero},
                    {"lemma.f12.zk-free", Verdict::Zero},
                    {"lemma.f22.zk-zk1-free", Verdict::Zero},
                    {"lemma.f32.zk-free", Verdict::Zero},
                    {"lemma.f11z0-f31z0-nonzero", Verdict::NonZero}};
      out.push_back(std::move(e));
    }
    return out;
  }();
  return entries;
}

std::optional<std::string> catalog_source(std::string_view name) {
  if (const char* dir = std::getenv(kCatalogDirEnv)) {
    std::filesystem::path p =
        std::filesystem::path(dir) / (std::string(name) + ".pssp");
    if (std::filesystem::exists(p)) return read_file(p);
  }
  for (const auto& e : kEmbedded)
    if (name == e.name) return std::string(e.source);
  return std::nullopt;
}

ProblemDef load_problem(std::string_view name_or_path,
                        const std::map<std::string, Rational>& overrides) {
  if (auto src = catalog_source(name_or_path))
    return parse_problem(*src, overrides);
  std::filesystem::path p{std::string(name_or_path)};
  if (std::filesystem::exists(p))
    return parse_problem(read_file(p), overrides);
  throw IoError("no catalog entry or file named '" + std::string(name_or_path) +
                "'");
}

}  // namespace pss
