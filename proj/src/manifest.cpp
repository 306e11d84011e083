#include "wavemaps/manifest.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "wavemaps/grid.hpp"

#ifndef WAVEMAPS_VERSION
#define WAVEMAPS_VERSION "unknown"
#endif

namespace wm {

namespace {

void emit(const nlohmann::ordered_json& j, std::string& out, int depth) {
  const std::string pad(2 * depth + 2, ' '), close(2 * depth, ' ');
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad + nlohmann::json(it.key()).dump() + ": ";
        emit(it.value(), out, depth + 1);
      }
      out += "\n" + close + "}";
      return;
    }
    case nlohmann::json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      // arrays of scalars on one line
      bool flat = true;
      for (const auto& v : j) flat = flat && !v.is_structured();
      out += flat ? "[" : "[\n";
      for (size_t i = 0; i < j.size(); ++i) {
        if (i) out += flat ? ", " : ",\n";
        if (!flat) out += pad;
        emit(j[i], out, depth + 1);
      }
      out += flat ? "]" : "\n" + close + "]";
      return;
    }
    case nlohmann::json::value_t::number_float: {
      const double v = j.get<double>();
      if (!std::isfinite(v)) {
        out += "null";
        return;
      }
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump_json(const nlohmann::ordered_json& j) {
  std::string out;
  emit(j, out, 0);
  out += "\n";
  return out;
}

void write_json(const std::string& path, const nlohmann::ordered_json& j) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DomainError("write_json: cannot open " + path);
  f << dump_json(j);
}

const char* version_string() { return WAVEMAPS_VERSION; }

}  // namespace wm
