#pragma once

// Loads profile CSVs and scenario documents into ScenarioConfig, and
// serializes configs back out.
//
// Profile CSV: UTF-8, LF, header "interval,value", exactly one row per
// interval, indices 1..horizon contiguous.
//
// Scenario document: line-oriented key/value text. `#` starts a comment,
// `[section]` opens a singleton section (grid, profiles, hvac, fridge,
// contract), `[[section]]` appends an entry to a list section (appliances,
// precedences, storages), and `key = value` assigns within the current
// section. Interval sets are comma-separated ranges ("1..24", "8,10..12").
// Profile paths resolve relative to the document. A pv_output profile
// entry enables PV; omitting it disables PV. Every field left unspecified
// falls back to a documented default and is reported in the provenance
// notes; an explicit value is never overridden.

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include "hems/domain.hpp"

namespace hems::ingest {

class IngestError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

/// Shortest decimal form that parses back to the same double.
inline std::string fmt_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

inline double parse_double(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  double v = 0.0;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size())
    throw IngestError(where + ": '" + t + "' is not a number");
  return v;
}

inline std::size_t parse_count(const std::string& text,
                               const std::string& where) {
  const std::string t = trim(text);
  unsigned long long v = 0;
  auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || end != t.data() + t.size())
    throw IngestError(where + ": '" + t + "' is not a whole number");
  return static_cast<std::size_t>(v);
}

inline bool parse_bool(const std::string& text, const std::string& where) {
  const std::string t = trim(text);
  if (t == "true") return true;
  if (t == "false") return false;
  throw IngestError(where + ": '" + t + "' is not true/false");
}

/// "1..24" / "8,10..12,15" -> set of interval indices.
inline std::set<std::size_t> parse_interval_set(const std::string& text,
                                                const std::string& where) {
  std::set<std::size_t> out;
  std::stringstream ss(text);
  std::string token;
  while (std::getline(ss, token, ',')) {
    token = trim(token);
    if (token.empty())
      throw IngestError(where + ": empty range element");
    const std::size_t dots = token.find("..");
    std::size_t first, last;
    if (dots == std::string::npos) {
      first = last = parse_count(token, where);
    } else {
      first = parse_count(token.substr(0, dots), where);
      last = parse_count(token.substr(dots + 2), where);
    }
    if (first > last)
      throw IngestError(where + ": descending range '" + token + "'");
    for (std::size_t t = first; t <= last; ++t) out.insert(t);
  }
  if (out.empty()) throw IngestError(where + ": empty interval set");
  return out;
}

/// Canonical compact form: maximal runs joined with commas.
inline std::string fmt_interval_set(const std::set<std::size_t>& s) {
  std::string out;
  for (auto it = s.begin(); it != s.end();) {
    std::size_t first = *it, last = first;
    ++it;
    while (it != s.end() && *it == last + 1) last = *it++;
    if (!out.empty()) out += ",";
    out += std::to_string(first);
    if (last == first + 1)
      out += "," + std::to_string(last);
    else if (last > first)
      out += ".." + std::to_string(last);
  }
  return out;
}

}  // namespace detail

/// Parses and range-checks one profile CSV against the grid. Errors carry
/// the path and, for row-level problems, the line number.
inline Profile load_profile(const std::filesystem::path& path,
                            ProfileKind kind, const TimeGrid& grid) {
  std::ifstream in(path);
  if (!in)
    throw IngestError("profile '" + path.string() + "': cannot open file");
  const std::string name = path.string();

  std::string line;
  std::size_t line_no = 0;
  // Leading comment lines document provenance of shipped data files.
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t != "interval,value")
      throw IngestError(name + ":" + std::to_string(line_no) +
                        ": expected header 'interval,value', got '" + t + "'");
    break;
  }
  if (line_no == 0 || detail::trim(line) != "interval,value")
    throw IngestError(name + ": missing header 'interval,value'");

  std::vector<double> values(grid.horizon_len, 0.0);
  std::vector<bool> seen(grid.horizon_len, false);
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    const std::string where = name + ":" + std::to_string(line_no);
    const std::size_t comma = t.find(',');
    if (comma == std::string::npos)
      throw IngestError(where + ": expected 'interval,value' row");
    const std::size_t idx = detail::parse_count(t.substr(0, comma), where);
    const double value = detail::parse_double(t.substr(comma + 1), where);
    if (idx < 1 || idx > grid.horizon_len)
      throw IngestError(where + ": interval " + std::to_string(idx) +
                        " outside 1.." + std::to_string(grid.horizon_len));
    if (seen[idx - 1])
      throw IngestError(where + ": duplicate interval " + std::to_string(idx));
    seen[idx - 1] = true;
    values[idx - 1] = value;
  }
  for (std::size_t t = 1; t <= grid.horizon_len; ++t)
    if (!seen[t - 1])
      throw IngestError(name + ": missing interval " + std::to_string(t));

  Profile p;
  p.kind = kind;
  p.values = std::move(values);
  for (std::size_t t = 1; t <= grid.horizon_len; ++t) {
    const double x = p.at(t);
    const std::string where =
        name + ": interval " + std::to_string(t) + " value " +
        detail::fmt_double(x);
    switch (kind) {
      case ProfileKind::ActivityLevel:
        if (!(x >= 0.0 && x <= 1.0))
          throw IngestError(where + ": activity level must lie in [0,1]");
        break;
      case ProfileKind::BuyPrice:
        if (!(x >= 0.0))
          throw IngestError(where + ": buy price must be >= 0");
        break;
      case ProfileKind::PvOutput:
        if (!(x >= 0.0))
          throw IngestError(where + ": PV output must be >= 0");
        break;
      case ProfileKind::OutsideTemperature:
        break;
    }
  }
  return p;
}

namespace detail {

/// Raw parse of the scenario document: sections, entries, and key/value
/// pairs, with duplicate and unknown-name detection. Field semantics are
/// applied by load_scenario afterwards.
struct RawEntry {
  std::size_t line = 0;
  std::vector<std::pair<std::string, std::string>> kv;

  const std::string* get(const std::string& key) const {
    for (const auto& [k, v] : kv)
      if (k == key) return &v;
    return nullptr;
  }
};

struct RawDocument {
  std::string path;
  std::optional<std::string> name;
  RawEntry grid, profiles, hvac, fridge, contract;
  bool has_grid = false, has_profiles = false, has_hvac = false,
       has_fridge = false, has_contract = false;
  std::vector<RawEntry> appliances, precedences, storages;
};

inline RawDocument parse_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw IngestError("scenario '" + path.string() + "': cannot open file");

  RawDocument doc;
  doc.path = path.string();
  RawEntry* current = nullptr;
  std::string section_name = "(top level)";
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const std::string where = doc.path + ":" + std::to_string(line_no);

    if (t.size() >= 4 && t.substr(0, 2) == "[[" &&
        t.substr(t.size() - 2) == "]]") {
      const std::string name = trim(t.substr(2, t.size() - 4));
      std::vector<RawEntry>* list = nullptr;
      if (name == "appliances") list = &doc.appliances;
      else if (name == "precedences") list = &doc.precedences;
      else if (name == "storages") list = &doc.storages;
      else
        throw IngestError(where + ": unknown list section [[" + name + "]]");
      list->push_back(RawEntry{line_no, {}});
      current = &list->back();
      section_name = name;
      continue;
    }
    if (t.front() == '[' && t.back() == ']') {
      const std::string name = trim(t.substr(1, t.size() - 2));
      RawEntry* entry = nullptr;
      bool* flag = nullptr;
      if (name == "grid") { entry = &doc.grid; flag = &doc.has_grid; }
      else if (name == "profiles") { entry = &doc.profiles; flag = &doc.has_profiles; }
      else if (name == "hvac") { entry = &doc.hvac; flag = &doc.has_hvac; }
      else if (name == "fridge") { entry = &doc.fridge; flag = &doc.has_fridge; }
      else if (name == "contract") { entry = &doc.contract; flag = &doc.has_contract; }
      else
        throw IngestError(where + ": unknown section [" + name + "]");
      if (*flag)
        throw IngestError(where + ": duplicate section [" + name + "]");
      *flag = true;
      entry->line = line_no;
      current = entry;
      section_name = name;
      continue;
    }

    const std::size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw IngestError(where + ": expected 'key = value'");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw IngestError(where + ": empty key");
    if (!current) {
      if (key != "name")
        throw IngestError(where + ": key '" + key +
                          "' outside any section (only 'name' is allowed"
                          " at top level)");
      if (doc.name) throw IngestError(where + ": duplicate 'name'");
      doc.name = value;
      continue;
    }
    if (current->get(key))
      throw IngestError(where + ": duplicate key '" + key + "' in " +
                        section_name);
    current->kv.emplace_back(key, value);
  }
  return doc;
}

/// Applies `kv` pairs of one entry through per-key setters; unknown keys
/// are an error so typos cannot silently fall back to defaults.
class FieldReader {
 public:
  FieldReader(const RawEntry& entry, std::string section,
              const std::string& path)
      : entry_(entry), section_(std::move(section)), path_(path) {}

  void finish(std::vector<std::string>* notes) {
    for (const auto& [k, v] : entry_.kv)
      if (!consumed_.count(k))
        throw IngestError(path_ + ": unknown key '" + k + "' in " + section_);
    if (notes)
      for (const auto& n : defaulted_)
        notes->push_back(section_ + "." + n);
  }

  void number(const std::string& key, double& field) {
    if (const std::string* v = take(key))
      field = parse_double(*v, where(key));
    else
      note_default(key, fmt_double(field));
  }
  void count(const std::string& key, std::size_t& field) {
    if (const std::string* v = take(key))
      field = parse_count(*v, where(key));
    else
      note_default(key, std::to_string(field));
  }
  void boolean(const std::string& key, bool& field) {
    if (const std::string* v = take(key))
      field = parse_bool(*v, where(key));
    else
      note_default(key, field ? "true" : "false");
  }
  void intervals(const std::string& key, std::set<std::size_t>& field) {
    if (const std::string* v = take(key))
      field = parse_interval_set(*v, where(key));
    else
      note_default(key, fmt_interval_set(field));
  }
  void optional_count(const std::string& key,
                      std::optional<std::size_t>& field) {
    if (const std::string* v = take(key))
      field = parse_count(*v, where(key));
  }
  void required_text(const std::string& key, std::string& field) {
    const std::string* v = take(key);
    if (!v)
      throw IngestError(path_ + ": " + section_ + " is missing required key '" +
                        key + "'");
    field = *v;
    if (field.empty()) throw IngestError(where(key) + ": empty value");
  }

 private:
  const std::string* take(const std::string& key) {
    consumed_.insert(key);
    return entry_.get(key);
  }
  std::string where(const std::string& key) const {
    return path_ + ": " + section_ + "." + key;
  }
  void note_default(const std::string& key, const std::string& shown) {
    defaulted_.push_back(key + " = " + shown + " (default)");
  }

  const RawEntry& entry_;
  std::string section_;
  const std::string& path_;
  std::set<std::string> consumed_;
  std::vector<std::string> defaulted_;
};

}  // namespace detail

/// Loads a scenario document plus its referenced profiles into a validated
/// ScenarioConfig. Fields absent from the document keep their documented
/// defaults; each applied default is appended to `provenance_notes` when
/// given. Validation violations are surfaced verbatim.
inline ScenarioConfig load_scenario(
    const std::filesystem::path& path,
    std::vector<std::string>* provenance_notes = nullptr) {
  const detail::RawDocument doc = detail::parse_document(path);
  if (!doc.has_profiles)
    throw IngestError(doc.path + ": missing required section [profiles]");
  if (!doc.has_contract)
    throw IngestError(doc.path + ": missing required section [contract]");

  ScenarioConfig c;
  if (doc.name) {
    c.name = *doc.name;
  } else {
    c.name = path.stem().string();
    if (provenance_notes)
      provenance_notes->push_back("name = " + c.name + " (from file name)");
  }

  {
    detail::FieldReader r(doc.grid, "[grid]", doc.path);
    r.count("horizon_len", c.grid.horizon_len);
    r.number("interval_hours", c.grid.interval_hours);
    r.finish(doc.has_grid ? provenance_notes : nullptr);
    if (!doc.has_grid && provenance_notes)
      provenance_notes->push_back("[grid] absent, 24 x 1h grid assumed");
  }
  {
    detail::FieldReader r(doc.hvac, "[hvac]", doc.path);
    r.number("ac_rated_kw", c.hvac.ac_rated_kw);
    r.number("ht_rated_kw", c.hvac.ht_rated_kw);
    r.number("v_ac", c.hvac.v_ac);
    r.number("v_ht", c.hvac.v_ht);
    r.number("u_ac", c.hvac.u_ac);
    r.number("u_ht", c.hvac.u_ht);
    r.number("i_ac", c.hvac.i_ac);
    r.number("i_ht", c.hvac.i_ht);
    r.number("theta_init", c.hvac.theta_init);
    r.number("comfort_min", c.hvac.comfort_min);
    r.number("comfort_max", c.hvac.comfort_max);
    r.finish(provenance_notes);
  }
  {
    detail::FieldReader r(doc.fridge, "[fridge]", doc.path);
    r.number("rated_kw", c.fridge.rated_kw);
    r.number("u_fr", c.fridge.u_fr);
    r.number("v_fr", c.fridge.v_fr);
    r.number("alpha_fr", c.fridge.alpha_fr);
    r.number("theta_init", c.fridge.theta_init);
    r.number("band_min", c.fridge.band_min);
    r.number("band_max", c.fridge.band_max);
    r.finish(provenance_notes);
  }
  {
    detail::FieldReader r(doc.contract, "[contract]", doc.path);
    r.number("sell_price", c.contract.sell_price);
    r.number("max_buy_kw", c.contract.max_buy_kw);
    r.number("max_sell_kw", c.contract.max_sell_kw);
    r.finish(provenance_notes);
  }

  for (std::size_t i = 0; i < doc.appliances.size(); ++i) {
    CyclingAppliance a;
    a.allowed_window.clear();
    for (std::size_t t = 1; t <= c.grid.horizon_len; ++t)
      a.allowed_window.insert(t);
    detail::FieldReader r(doc.appliances[i],
                          "[[appliances]] #" + std::to_string(i + 1),
                          doc.path);
    r.required_text("name", a.name);
    r.number("rated_kw", a.rated_kw);
    r.count("required_runtime", a.required_runtime);
    r.count("max_successive", a.max_successive);
    r.count("min_up", a.min_up);
    r.count("min_down", a.min_down);
    r.intervals("allowed_window", a.allowed_window);
    r.finish(provenance_notes);
    c.appliances.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < doc.precedences.size(); ++i) {
    PrecedencePair p;
    detail::FieldReader r(doc.precedences[i],
                          "[[precedences]] #" + std::to_string(i + 1),
                          doc.path);
    r.required_text("first", p.first);
    r.required_text("second", p.second);
    r.count("gap_omega", p.gap_omega);
    r.finish(provenance_notes);
    c.precedences.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < doc.storages.size(); ++i) {
    StorageDevice s;
    for (std::size_t t = 1; t <= c.grid.horizon_len; ++t)
      s.availability.insert(t);
    detail::FieldReader r(doc.storages[i],
                          "[[storages]] #" + std::to_string(i + 1), doc.path);
    r.required_text("name", s.name);
    r.number("capacity_kwh", s.capacity_kwh);
    r.number("soe_init", s.soe_init);
    r.number("soe_min", s.soe_min);
    r.number("soe_max", s.soe_max);
    r.number("charge_rate_kw", s.charge_rate_kw);
    r.number("discharge_rate_kw", s.discharge_rate_kw);
    r.number("eta_charge", s.eta_charge);
    r.number("eta_discharge", s.eta_discharge);
    r.number("degradation_cost", s.degradation_cost);
    r.intervals("availability", s.availability);
    r.optional_count("full_charge_deadline", s.full_charge_deadline);
    r.boolean("can_sell_to_grid", s.can_sell_to_grid);
    r.boolean("can_charge_from_grid", s.can_charge_from_grid);
    r.finish(provenance_notes);
    c.storages.push_back(std::move(s));
  }

  const std::filesystem::path base = path.parent_path();
  auto resolve = [&](const std::string& rel,
                     const std::string& key) -> std::filesystem::path {
    const std::filesystem::path p = base / rel;
    if (!std::filesystem::exists(p))
      throw IngestError(doc.path + ": profiles." + key + " = '" + rel +
                        "' does not resolve (looked at '" + p.string() + "')");
    return p;
  };
  auto profile_path = [&](const std::string& key,
                          bool required) -> std::optional<std::string> {
    if (const std::string* v = doc.profiles.get(key)) return *v;
    if (required)
      throw IngestError(doc.path +
                        ": [profiles] is missing required key '" + key + "'");
    return std::nullopt;
  };
  {
    detail::FieldReader r(doc.profiles, "[profiles]", doc.path);
    std::string dummy;
    r.required_text("outside_temperature", dummy);
    r.required_text("activity_level", dummy);
    r.required_text("buy_price", dummy);
    if (doc.profiles.get("pv_output")) r.required_text("pv_output", dummy);
    r.finish(nullptr);
  }
  c.outside_temperature =
      load_profile(resolve(*profile_path("outside_temperature", true),
                           "outside_temperature"),
                   ProfileKind::OutsideTemperature, c.grid);
  c.activity_level = load_profile(
      resolve(*profile_path("activity_level", true), "activity_level"),
      ProfileKind::ActivityLevel, c.grid);
  c.buy_price =
      load_profile(resolve(*profile_path("buy_price", true), "buy_price"),
                   ProfileKind::BuyPrice, c.grid);
  if (auto pv = profile_path("pv_output", false)) {
    c.pv_output = load_profile(resolve(*pv, "pv_output"),
                               ProfileKind::PvOutput, c.grid);
    c.pv_enabled = true;
  } else {
    c.pv_enabled = false;
    if (provenance_notes)
      provenance_notes->push_back(
          "profiles.pv_output absent, PV disabled");
  }

  auto violations = validate(c);
  if (!violations.empty()) {
    std::string msg = doc.path + ": invalid scenario:";
    for (const auto& v : violations) msg += "\n  - " + v;
    throw IngestError(msg);
  }
  return c;
}

/// Writes the config as a scenario document at `file` with every field
/// explicit, plus one profile CSV per series next to it
/// ("<stem>_<kind>.csv"). Loading the written document reproduces the
/// config exactly.
inline void save_scenario(const ScenarioConfig& c,
                          const std::filesystem::path& file) {
  namespace fs = std::filesystem;
  using detail::fmt_double;
  const std::string stem = file.stem().string();

  auto write_profile = [&](const Profile& p,
                           const std::string& kind) -> std::string {
    const std::string rel = stem + "_" + kind + ".csv";
    std::ofstream out(file.parent_path() / rel);
    if (!out)
      throw IngestError("cannot write profile '" + rel + "'");
    out << "interval,value\n";
    for (std::size_t t = 1; t <= p.size(); ++t)
      out << t << "," << fmt_double(p.at(t)) << "\n";
    return rel;
  };

  std::ofstream out(file);
  if (!out)
    throw IngestError("cannot write scenario '" + file.string() + "'");
  out << "name = " << c.name << "\n\n";
  out << "[grid]\n";
  out << "horizon_len = " << c.grid.horizon_len << "\n";
  out << "interval_hours = " << fmt_double(c.grid.interval_hours) << "\n\n";

  out << "[profiles]\n";
  out << "outside_temperature = "
      << write_profile(c.outside_temperature, "outside_temperature") << "\n";
  out << "activity_level = "
      << write_profile(c.activity_level, "activity_level") << "\n";
  out << "buy_price = " << write_profile(c.buy_price, "buy_price") << "\n";
  if (c.pv_enabled)
    out << "pv_output = " << write_profile(c.pv_output, "pv_output") << "\n";
  out << "\n";

  out << "[hvac]\n";
  out << "ac_rated_kw = " << fmt_double(c.hvac.ac_rated_kw) << "\n";
  out << "ht_rated_kw = " << fmt_double(c.hvac.ht_rated_kw) << "\n";
  out << "v_ac = " << fmt_double(c.hvac.v_ac) << "\n";
  out << "v_ht = " << fmt_double(c.hvac.v_ht) << "\n";
  out << "u_ac = " << fmt_double(c.hvac.u_ac) << "\n";
  out << "u_ht = " << fmt_double(c.hvac.u_ht) << "\n";
  out << "i_ac = " << fmt_double(c.hvac.i_ac) << "\n";
  out << "i_ht = " << fmt_double(c.hvac.i_ht) << "\n";
  out << "theta_init = " << fmt_double(c.hvac.theta_init) << "\n";
  out << "comfort_min = " << fmt_double(c.hvac.comfort_min) << "\n";
  out << "comfort_max = " << fmt_double(c.hvac.comfort_max) << "\n\n";

  out << "[fridge]\n";
  out << "rated_kw = " << fmt_double(c.fridge.rated_kw) << "\n";
  out << "u_fr = " << fmt_double(c.fridge.u_fr) << "\n";
  out << "v_fr = " << fmt_double(c.fridge.v_fr) << "\n";
  out << "alpha_fr = " << fmt_double(c.fridge.alpha_fr) << "\n";
  out << "theta_init = " << fmt_double(c.fridge.theta_init) << "\n";
  out << "band_min = " << fmt_double(c.fridge.band_min) << "\n";
  out << "band_max = " << fmt_double(c.fridge.band_max) << "\n\n";

  for (const auto& a : c.appliances) {
    out << "[[appliances]]\n";
    out << "name = " << a.name << "\n";
    out << "rated_kw = " << fmt_double(a.rated_kw) << "\n";
    out << "required_runtime = " << a.required_runtime << "\n";
    out << "max_successive = " << a.max_successive << "\n";
    out << "min_up = " << a.min_up << "\n";
    out << "min_down = " << a.min_down << "\n";
    out << "allowed_window = " << detail::fmt_interval_set(a.allowed_window)
        << "\n\n";
  }
  for (const auto& p : c.precedences) {
    out << "[[precedences]]\n";
    out << "first = " << p.first << "\n";
    out << "second = " << p.second << "\n";
    out << "gap_omega = " << p.gap_omega << "\n\n";
  }
  for (const auto& s : c.storages) {
    out << "[[storages]]\n";
    out << "name = " << s.name << "\n";
    out << "capacity_kwh = " << fmt_double(s.capacity_kwh) << "\n";
    out << "soe_init = " << fmt_double(s.soe_init) << "\n";
    out << "soe_min = " << fmt_double(s.soe_min) << "\n";
    out << "soe_max = " << fmt_double(s.soe_max) << "\n";
    out << "charge_rate_kw = " << fmt_double(s.charge_rate_kw) << "\n";
    out << "discharge_rate_kw = " << fmt_double(s.discharge_rate_kw) << "\n";
    out << "eta_charge = " << fmt_double(s.eta_charge) << "\n";
    out << "eta_discharge = " << fmt_double(s.eta_discharge) << "\n";
    out << "degradation_cost = " << fmt_double(s.degradation_cost) << "\n";
    out << "availability = " << detail::fmt_interval_set(s.availability)
        << "\n";
    if (s.full_charge_deadline)
      out << "full_charge_deadline = " << *s.full_charge_deadline << "\n";
    out << "can_sell_to_grid = " << (s.can_sell_to_grid ? "true" : "false")
        << "\n";
    out << "can_charge_from_grid = "
        << (s.can_charge_from_grid ? "true" : "false") << "\n\n";
  }

  out << "[contract]\n";
  out << "sell_price = " << fmt_double(c.contract.sell_price) << "\n";
  out << "max_buy_kw = " << fmt_double(c.contract.max_buy_kw) << "\n";
  out << "max_sell_kw = " << fmt_double(c.contract.max_sell_kw) << "\n";
  if (!out)
    throw IngestError("write failed for '" + file.string() + "'");
}

}  // namespace hems::ingest
