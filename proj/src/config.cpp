#include "config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <vector>

namespace sparkppr {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(trim(cur));
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& key) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw RunConfigError("config key '" + key + "': expected an integer, got '" + s + "'");
  return v;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw RunConfigError("config key '" + key + "': expected a number, got '" + s + "'");
  }
}

// "12..16", "12", or a comma list mixing both.
std::vector<std::uint32_t> parse_n_values(const std::string& s) {
  std::vector<std::uint32_t> out;
  for (const std::string& tok : split(s, ',')) {
    if (tok.empty()) throw RunConfigError("config key 'N': empty element");
    const auto dots = tok.find("..");
    if (dots == std::string::npos) {
      out.push_back(static_cast<std::uint32_t>(parse_u64(tok, "N")));
    } else {
      const auto lo = parse_u64(trim(tok.substr(0, dots)), "N");
      const auto hi = parse_u64(trim(tok.substr(dots + 2)), "N");
      if (hi < lo) throw RunConfigError("config key 'N': descending range");
      for (std::uint64_t n = lo; n <= hi; ++n)
        out.push_back(static_cast<std::uint32_t>(n));
    }
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw RunConfigError("config line " + std::to_string(line_no) +
                           ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw RunConfigError("config line " + std::to_string(line_no) +
                           ": empty key or value");
    if (kv.count(key))
      throw RunConfigError("config line " + std::to_string(line_no) +
                           ": duplicate key '" + key + "'");
    kv[key] = value;
  }

  RunConfig rc;
  ExperimentConfig& c = rc.experiment;
  auto take = [&](const char* key) -> std::optional<std::string> {
    const auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };
  auto require = [&](const char* key) -> std::string {
    auto v = take(key);
    if (!v) throw RunConfigError(std::string("config is missing key '") + key + "'");
    return *v;
  };

  try {
    c.field = FieldSpec(static_cast<std::uint32_t>(parse_u64(require("q"), "q")));
  } catch (const std::invalid_argument& e) {
    throw RunConfigError(std::string("config key 'q': ") + e.what());
  }
  c.k = static_cast<std::uint32_t>(parse_u64(require("K"), "K"));
  c.n_values = parse_n_values(require("N"));

  for (const std::string& tok : split(require("scheme"), ',')) {
    const auto s = parse_scheme(tok);
    if (!s)
      throw RunConfigError("config key 'scheme': unknown scheme '" + tok +
                           "' (expected RLC, MSLC or OSPRLC)");
    c.schemes.push_back(*s);
  }

  const std::string dec = require("decoder");
  if (dec == "plain") c.decoder = DecoderMode::Plain;
  else if (dec == "with_SD") c.decoder = DecoderMode::WithSD;
  else
    throw RunConfigError("config key 'decoder': expected plain or with_SD, got '" +
                         dec + "'");

  c.channel.drones = static_cast<std::uint32_t>(parse_u64(require("M"), "M"));
  c.channel.erasure.clear();
  for (const std::string& tok : split(require("eps"), ','))
    c.channel.erasure.push_back(parse_double(tok, "eps"));
  if (c.channel.erasure.size() == 1 && c.channel.drones > 1)
    c.channel.erasure.assign(c.channel.drones, c.channel.erasure.front());

  if (auto v = take("ps")) c.channel.symbol_error_prob = parse_double(*v, "ps");
  if (auto v = take("L"))
    c.channel.payload_len = static_cast<std::uint32_t>(parse_u64(*v, "L"));
  if (auto v = take("packing")) {
    if (*v == "byte") c.channel.packing = SymbolPacking::ByteRaw;
    else if (*v == "bits") c.channel.packing = SymbolPacking::PackedBits;
    else
      throw RunConfigError("config key 'packing': expected byte or bits, got '" +
                           *v + "'");
  }

  c.trials = parse_u64(require("trials"), "trials");
  if (auto v = take("seed")) {
    c.root_seed = parse_u64(*v, "seed");
    rc.has_seed = true;
  }
  if (auto v = take("catalog")) c.catalog_path = *v;
  if (auto v = take("out")) c.out_path = *v;
  if (auto v = take("dump")) c.dump_path = *v;
  if (auto v = take("w_max")) {
    if (*v == "auto") c.w_max = 0;
    else c.w_max = static_cast<std::uint32_t>(parse_u64(*v, "w_max"));
  }
  if (auto v = take("work_cap")) c.column_work_cap = parse_u64(*v, "work_cap");
  if (auto v = take("workers")) {
    c.workers = static_cast<std::uint32_t>(parse_u64(*v, "workers"));
    rc.has_workers = true;
  }

  if (!kv.empty())
    throw RunConfigError("config holds unknown key '" + kv.begin()->first + "'");

  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw RunConfigError(std::string("config invalid: ") + e.what());
  }
  return rc;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw RunConfigError("cannot open config '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace sparkppr
