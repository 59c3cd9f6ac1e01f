#include "ddc/params.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace ddc {

void SystemParams::validate() const {
  if (L < 2) throw ParamError("L must be >= 2, got " + std::to_string(L));
  for (const auto& [site, f] : site_overrides) {
    (void)f;
    if (site < 1 || site > L)
      throw ParamError("override site " + std::to_string(site) +
                       " outside [1, " + std::to_string(L) + "]");
  }
}

double SystemParams::h_s_at(int site) const {
  auto it = site_overrides.find(site);
  return it == site_overrides.end() ? h_s : it->second.h_s;
}

double SystemParams::h_d_at(int site) const {
  auto it = site_overrides.find(site);
  return it == site_overrides.end() ? h_d : it->second.h_d;
}

SystemParams SystemParams::without_overrides() const {
  SystemParams p = *this;
  p.site_overrides.clear();
  return p;
}

std::string SystemParams::to_json() const {
  nlohmann::json j;
  j["L"] = L;
  j["J_s"] = J_s;
  j["J_d"] = J_d;
  j["h_s"] = h_s;
  j["h_d"] = h_d;
  j["C"] = C;
  if (!site_overrides.empty()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [site, f] : site_overrides)
      arr.push_back({{"site", site}, {"h_s", f.h_s}, {"h_d", f.h_d}});
    j["overrides"] = arr;
  }
  return j.dump(2);
}

namespace {

double require_number(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw ParamError("missing key: " + key);
  if (!j[key].is_number()) throw ParamError("key is not a number: " + key);
  return j[key].get<double>();
}

}  // namespace

SystemParams SystemParams::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParamError(std::string("parameter file is not valid JSON: ") +
                     e.what());
  }
  SystemParams p;
  if (!j.contains("L")) throw ParamError("missing key: L");
  if (!j["L"].is_number_integer()) throw ParamError("key is not an integer: L");
  p.L = j["L"].get<int>();
  p.J_s = j.contains("J_s") ? require_number(j, "J_s") : 1.0;
  p.J_d = j.contains("J_d") ? require_number(j, "J_d") : 0.0;
  p.h_s = j.contains("h_s") ? require_number(j, "h_s") : 0.0;
  p.h_d = j.contains("h_d") ? require_number(j, "h_d") : 0.0;
  p.C = j.contains("C") ? require_number(j, "C") : 0.0;
  for (const auto& key : j.items()) {
    const std::string& k = key.key();
    if (k != "L" && k != "J_s" && k != "J_d" && k != "h_s" && k != "h_d" &&
        k != "C" && k != "overrides")
      throw ParamError("unknown key: " + k);
  }
  if (j.contains("overrides")) {
    if (!j["overrides"].is_array()) throw ParamError("key is not a list: overrides");
    for (const auto& o : j["overrides"]) {
      if (!o.contains("site") || !o["site"].is_number_integer())
        throw ParamError("override entry missing integer key: site");
      int site = o["site"].get<int>();
      FieldPair f;
      f.h_s = o.contains("h_s") ? require_number(o, "h_s") : p.h_s;
      f.h_d = o.contains("h_d") ? require_number(o, "h_d") : p.h_d;
      p.site_overrides[site] = f;
    }
  }
  p.validate();
  return p;
}

SystemParams SystemParams::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParamError("cannot open parameter file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace ddc
