#pragma once

// JSON plumbing shared by loop serialization, config files and reports.
// Reports are dumped through dump_json17, which prints every float with 17
// significant digits: lossless for doubles and byte-deterministic.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "arnold/common.hpp"
#include "arnold/loop_space.hpp"
#include "json.hpp"

namespace arnold {

using ordered_json = nlohmann::ordered_json;

inline std::string format_double17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace detail {
inline void dump17(const ordered_json& j, std::string& out, int indent, int depth) {
  const std::string pad(static_cast<std::size_t>(indent) * depth, ' ');
  const std::string pad_in(static_cast<std::size_t>(indent) * (depth + 1), ' ');
  switch (j.type()) {
    case ordered_json::value_t::object: {
      if (j.empty()) { out += "{}"; return; }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad_in;
        out += ordered_json(it.key()).dump();
        out += ": ";
        dump17(it.value(), out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "}";
      return;
    }
    case ordered_json::value_t::array: {
      if (j.empty()) { out += "[]"; return; }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad_in;
        dump17(j[i], out, indent, depth + 1);
        if (i + 1 < j.size()) out += ",";
        out += "\n";
      }
      out += pad + "]";
      return;
    }
    case ordered_json::value_t::number_float:
      out += format_double17(j.get<double>());
      return;
    default:
      out += j.dump();
      return;
  }
}
}  // namespace detail

inline std::string dump_json17(const ordered_json& j, int indent = 2) {
  std::string out;
  detail::dump17(j, out, indent, 0);
  out += "\n";
  return out;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot open for writing: " + path);
  f << content;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw config_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

inline ordered_json parse_json_file(const std::string& path) {
  ordered_json j = ordered_json::parse(read_text_file(path), nullptr, false);
  if (j.is_discarded()) throw config_error("malformed JSON in " + path);
  return j;
}

// Loop wire format: {d, k_min, k_max, coeffs} with coeffs mode-major.
inline ordered_json loop_to_json(const FourierLoop& x) {
  ordered_json j;
  j["d"] = x.window.dim;
  j["k_min"] = x.window.k_min;
  j["k_max"] = x.window.k_max;
  j["coeffs"] = x.coeffs;
  return j;
}

inline FourierLoop loop_from_json(const ordered_json& j) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key != "d" && key != "k_min" && key != "k_max" && key != "coeffs")
      throw config_error("loop JSON: unknown field '" + key + "'");
  }
  if (!j.contains("d") || !j.contains("k_min") || !j.contains("k_max") || !j.contains("coeffs"))
    throw config_error("loop JSON: missing field");
  ModeWindow w = make_window(j["k_min"].get<int>(), j["k_max"].get<int>(), j["d"].get<int>());
  FourierLoop x(w);
  auto c = j["coeffs"].get<std::vector<double>>();
  if (static_cast<int>(c.size()) != w.size())
    throw dimension_error("loop JSON: coefficient count does not match window");
  for (double v : c)
    if (!std::isfinite(v)) throw config_error("loop JSON: non-finite coefficient");
  x.coeffs = std::move(c);
  return x;
}

}  // namespace arnold
