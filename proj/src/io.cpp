#include "memdomain/io.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "memdomain/errors.hpp"

namespace memdomain::io {
namespace {

void require_keys(const Json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw DomainError(where + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) throw DomainError("unknown key '" + key + "' in " + where);
  }
  for (const auto& key : allowed) {
    if (!obj.contains(key)) throw DomainError("missing key '" + key + "' in " + where);
  }
}

}  // namespace

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DomainError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xF]);
  }
  return out;
}

Json registry_to_json(const memory::Registry& registry) {
  Json doc;
  doc["schema"] = kRegistrySchema;
  doc["clock"] = registry.clock;
  doc["next_id"] = registry.next_id;
  Json codes = Json::array();
  for (const auto& code : registry.codes) {
    Json c;
    c["id"] = code.id;
    c["status"] = memory::to_string(code.status);
    Json entries = Json::array();
    for (const auto& [k, e] : code.entries) {
      entries.push_back(Json{{"k", k}, {"n", e.n}, {"intensity", e.intensity}, {"t_rec", e.t_rec}});
    }
    c["entries"] = std::move(entries);
    codes.push_back(std::move(c));
  }
  doc["codes"] = std::move(codes);
  return doc;
}

memory::Registry registry_from_json(const Json& doc) {
  require_keys(doc, {"schema", "clock", "next_id", "codes"}, "registry");
  if (doc.at("schema").get<int>() != kRegistrySchema) {
    throw DomainError("unsupported registry schema " + doc.at("schema").dump());
  }
  memory::Registry reg;
  reg.clock = doc.at("clock").get<double>();
  reg.next_id = doc.at("next_id").get<std::uint64_t>();
  for (const auto& c : doc.at("codes")) {
    require_keys(c, {"id", "status", "entries"}, "code");
    memory::MemoryCode code;
    code.id = c.at("id").get<std::string>();
    code.status = memory::status_from_string(c.at("status").get<std::string>());
    for (const auto& e : c.at("entries")) {
      require_keys(e, {"k", "n", "intensity", "t_rec"}, "code entry");
      code.entries[e.at("k").get<double>()] =
          memory::CodeEntry{e.at("intensity").get<double>(), e.at("n").get<int>(), e.at("t_rec").get<double>()};
    }
    reg.codes.push_back(std::move(code));
  }
  return reg;
}

std::string dump_registry(const memory::Registry& registry) { return registry_to_json(registry).dump(2) + "\n"; }

memory::Registry parse_registry(std::string_view text) {
  try {
    return registry_from_json(Json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed registry: ") + e.what());
  }
}

memory::StimulusSpectrum parse_spectrum(std::string_view text) {
  try {
    const Json doc = Json::parse(text);
    require_keys(doc, {"components"}, "spectrum");
    memory::StimulusSpectrum spectrum;
    for (const auto& c : doc.at("components")) {
      require_keys(c, {"k", "n", "intensity"}, "spectrum component");
      spectrum.components.push_back({c.at("k").get<double>(), c.at("n").get<int>(), c.at("intensity").get<double>()});
    }
    spectrum.validate();
    return spectrum;
  } catch (const nlohmann::json::exception& e) {
    throw DomainError(std::string("malformed spectrum: ") + e.what());
  }
}

Json spectrum_to_json(const memory::StimulusSpectrum& spectrum) {
  Json comps = Json::array();
  for (const auto& c : spectrum.components) comps.push_back(Json{{"k", c.k}, {"n", c.n}, {"intensity", c.intensity}});
  return Json{{"components", comps}};
}

}  // namespace memdomain::io
