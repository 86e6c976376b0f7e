#include "catalog.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "qtorus/kp.hpp"
#include "qtorus/quantum_torus.hpp"
#include "qtorus/reductions.hpp"

namespace qtverify {

using qtorus::Report;
using qtorus::Status;

namespace {

Params with(int T, int O, int D, int P, std::vector<int> indices) { return Params{T, O, D, P, std::move(indices)}; }

const int& at(const Params& p, std::size_t i) { return p.indices.at(i); }

std::vector<CheckEntry> build_catalog() {
  using namespace qtorus;
  std::vector<CheckEntry> c;
  // KP
  c.push_back({"kp.canonical", "[L, M] = 1 for the dressed Orlov-Shulman operator", {}, with(3, 8, 2, 4, {}),
               [](const Params& p) { return check_canonical(KpContext::init(p.T, p.O, p.D)); }});
  c.push_back({"kp.lax", "dL/dt_n = [(L^n)_+, L]", {"n"}, with(3, 8, 2, 4, {2}),
               [](const Params& p) { return check_lax_form(KpContext::init(p.T, p.O, p.D), at(p, 0)); }});
  c.push_back({"kp.sato_equivalence", "d/dt_{0,n} is the Sato flow d/dt_n", {"n"}, with(3, 8, 2, 4, {2}),
               [](const Params& p) { return check_sato_equivalence(KpContext::init(p.T, p.O, p.D), at(p, 0)); }});
  c.push_back({"kp.additional_commute", "[d/dt_{m,n}, d/dt_j] S = 0", {"m", "n", "j"}, with(3, 9, 2, 4, {1, 1, 2}),
               [](const Params& p) {
                 KpContext ctx = KpContext::init(p.T, p.O, p.D);
                 return check_flow_commutation("", ctx.additional(at(p, 0), at(p, 1)), sato_flow(ctx, at(p, 2)),
                                               ctx.S());
               }});
  c.push_back({"kp.quantum_commute", "[d/dt*_{m,n}, d/dt_j] S = 0 for the quantum torus flows", {"m", "n", "j"},
               with(3, 13, 2, 4, {1, 1, 2}), [](const Params& p) {
                 KpContext ctx = KpContext::init(p.T, p.O, p.D);
                 return check_flow_commutation("", quantum_flow(ctx, at(p, 0), at(p, 1), p.P),
                                               sato_flow(ctx, at(p, 2)), ctx.S());
               }});
  c.push_back({"kp.w_structure", "[d/dt_{p,s}, d/dt_{a,b}] L = sum C d/dt_{alpha,beta} L", {"p", "s", "a", "b"},
               with(1, 8, 2, 4, {1, 1, 0, 2}), [](const Params& p) {
                 return check_w_structure(KpContext::init(p.T, p.O, p.D), at(p, 0), at(p, 1), at(p, 2), at(p, 3));
               }});
  c.push_back({"kp.qt_relation", "[d/dt*_{n,m}, d/dt*_{l,k}] = (q^{ml} - q^{nk}) d/dt*_{n+l,m+k}",
               {"n", "m", "l", "k"}, with(1, 8, 2, 4, {1, 0, 0, 1}), [](const Params& p) {
                 return check_qt_relation(KpContext::init(p.T, p.O, p.D), at(p, 0), at(p, 1), at(p, 2), at(p, 3),
                                          p.P);
               }});
  // Quantum torus algebra
  c.push_back({"qt.combina", "weighted Weyl commutator constants resum to the q-difference at z^alpha d^beta", {"alpha", "beta"},
               with(3, 8, 1, 4, {0, 0}),
               [](const Params& p) { return verify_combina(at(p, 0), at(p, 1), p.D); }});
  c.push_back({"qt.bracket", "[E(n,m), E(l,k)] = (q^{ml} - q^{nk}) E(n+l, m+k)", {"n", "m", "l", "k"},
               with(3, 8, 2, 4, {1, 2, -1, 1}), [](const Params& p) {
                 return bracket_formula_check(at(p, 0), at(p, 1), at(p, 2), at(p, 3), p.D);
               }});
  c.push_back({"qt.normalized", "[v^(k)_m, v^(l)_n] = (q^{(lm-kn)/2} - q^{-(lm-kn)/2}) v^(k+l)_{m+n}",
               {"m", "k", "n", "l"}, with(3, 8, 2, 4, {1, 0, 0, 1}), [](const Params& p) {
                 return normalized_bracket_check(at(p, 0), at(p, 1), at(p, 2), at(p, 3), p.D);
               }});
  // KdV
  c.push_back({"kdv.canonical", "[L2, M] = 1 with Gamma over odd times", {}, with(3, 8, 2, 4, {}),
               [](const Params& p) { return check_kdv_canonical(KdvContext::init(p.T, p.O, p.D)); }});
  c.push_back({"kdv.odd_commute", "odd KdV flows commute on S", {"i", "j"}, with(3, 8, 2, 4, {1, 3}),
               [](const Params& p) {
                 KdvContext ctx = KdvContext::init(p.T, p.O, p.D);
                 return check_flow_commutation("", kdv_sato_flow(ctx, at(p, 0)), kdv_sato_flow(ctx, at(p, 1)),
                                               ctx.S());
               }});
  c.push_back({"kdv.quantum_commute", "[d/dt*_{m,n}, d/dt_j] S = 0 on the KdV dressing data", {"m", "n", "j"},
               with(3, 10, 1, 2, {1, 1, 3}), [](const Params& p) {
                 KdvContext ctx = KdvContext::init(p.T, p.O, p.D, false);
                 return check_flow_commutation("", kdv_quantum_flow(ctx, at(p, 0), at(p, 1), p.P),
                                               kdv_sato_flow(ctx, at(p, 2)), ctx.S());
               }});
  c.push_back({"kdv.form_sato", "probe: d/dt_n keeps L2 = d^2 + u", {"n"}, with(3, 8, 2, 4, {3}),
               [](const Params& p) {
                 KdvContext ctx = KdvContext::init(p.T, p.O, p.D);
                 return check_form_preservation(ctx, kdv_sato_flow(ctx, at(p, 0)));
               }});
  c.push_back({"kdv.form_quantum", "probe: d/dt*_{m,n} keeps L2 = d^2 + u", {"m", "n"}, with(3, 10, 1, 2, {1, 1}),
               [](const Params& p) {
                 KdvContext ctx = KdvContext::init(p.T, p.O, p.D);
                 return check_form_preservation(ctx, kdv_quantum_flow(ctx, at(p, 0), at(p, 1), p.P));
               }});
  // BKP
  c.push_back({"bkp.canonical", "[L_B, M_B] = 1", {}, with(3, 8, 2, 4, {}),
               [](const Params& p) { return check_bkp_canonical(BkpContext::init(p.T, p.O, p.D)); }});
  c.push_back({"bkp.dressing", "Phi^* = d Phi^{-1} d^{-1} after eliminating the even jets", {}, with(3, 8, 2, 4, {}),
               [](const Params& p) { return check_dressing_condition(BkpContext::init(p.T, p.O, p.D)); }});
  c.push_back({"bkp.btype", "B_{mn}^* = -d B_{mn} d^{-1}", {"m", "n"}, with(3, 8, 2, 4, {1, 1}),
               [](const Params& p) {
                 BkpContext ctx = BkpContext::init(p.T, p.O, p.D);
                 return check_btype(build_Bmn(ctx, at(p, 0), at(p, 1)), ctx.substitution(),
                                    "B_{" + std::to_string(at(p, 0)) + "," + std::to_string(at(p, 1)) + "}");
               }});
  c.push_back({"bkp.btype_dmn", "D_{mn}^* = -d D_{mn} d^{-1}", {"m", "n"}, with(3, 8, 2, 4, {1, 1}),
               [](const Params& p) {
                 BkpContext ctx = BkpContext::init(p.T, p.O, p.D);
                 return check_btype(build_Dmn(ctx, at(p, 0), at(p, 1), p.P), ctx.substitution(),
                                    "D_{" + std::to_string(at(p, 0)) + "," + std::to_string(at(p, 1)) + "}");
               }});
  c.push_back({"bkp.mb_lemma", "M_B^* = d L_B^{-1} M_B L_B d^{-1}", {}, with(3, 8, 2, 4, {}),
               [](const Params& p) { return check_mb_lemma(BkpContext::init(p.T, p.O, p.D)); }});
  c.push_back({"bkp.additional_commute", "[d/dt_{m,n}, d/dt_j] Phi = 0 for the BKP flows", {"m", "n", "j"},
               with(3, 8, 2, 4, {1, 1, 3}), [](const Params& p) {
                 BkpContext ctx = BkpContext::init(p.T, p.O, p.D);
                 return check_flow_commutation("", bkp_additional_flow(ctx, at(p, 0), at(p, 1)),
                                               bkp_sato_flow(ctx, at(p, 2)), ctx.Phi());
               }});
  c.push_back({"bkp.quantum_commute", "[d/dt*_{m,n}, d/dt_j] Phi = 0 for the BKP flows", {"m", "n", "j"},
               with(3, 10, 1, 2, {1, 1, 3}), [](const Params& p) {
                 BkpContext ctx = BkpContext::init(p.T, p.O, p.D);
                 return check_flow_commutation("", bkp_quantum_flow(ctx, at(p, 0), at(p, 1), p.P),
                                               bkp_sato_flow(ctx, at(p, 2)), ctx.Phi());
               }});
  c.push_back({"bkp.btype_preservation", "d/dt_{m,n} keeps L_B of B type", {"m", "n"}, with(3, 8, 2, 4, {1, 1}),
               [](const Params& p) {
                 BkpContext ctx = BkpContext::init(p.T, p.O, p.D);
                 return check_btype_preservation(ctx, bkp_additional_flow(ctx, at(p, 0), at(p, 1)));
               }});
  c.push_back({"bkp.w_structure", "BKP flows against the KP W-infinity constants", {"p", "s", "a", "b"},
               with(1, 8, 2, 4, {0, 1, 1, 1}), [](const Params& p) {
                 return check_bkp_w_structure(BkpContext::init(p.T, p.O, p.D), at(p, 0), at(p, 1), at(p, 2),
                                              at(p, 3));
               }});
  c.push_back({"bkp.qt_relation", "BKP: [d/dt*_{n,m}, d/dt*_{l,k}] = (q^{ml} - q^{nk}) d/dt*_{n+l,m+k}",
               {"n", "m", "l", "k"}, with(1, 8, 2, 4, {1, 0, 0, 1}), [](const Params& p) {
                 return check_bkp_qt_relation(BkpContext::init(p.T, p.O, p.D), at(p, 0), at(p, 1), at(p, 2),
                                              at(p, 3), p.P);
               }});
  return c;
}

Report error_report(const std::string& name, const std::string& why) {
  Report r;
  r.check = name;
  r.params = nlohmann::ordered_json::object();
  r.status = Status::kError;
  r.details.push_back(why);
  return r;
}

nlohmann::ordered_json params_json(const CheckEntry& e, const Params& p) {
  nlohmann::ordered_json j = {{"T", p.T}, {"O", p.O}, {"D", p.D}, {"P", p.P}};
  for (std::size_t i = 0; i < e.index_names.size() && i < p.indices.size(); ++i) j[e.index_names[i]] = p.indices[i];
  return j;
}

int to_int(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  int x = 0;
  try {
    x = std::stoi(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::runtime_error("config key '" + key + "': not an integer: " + v);
  return x;
}

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string upper_status(Status s) {
  switch (s) {
    case Status::kPass: return "PASS";
    case Status::kFail: return "FAIL";
    case Status::kCertifiedRange: return "CERTIFIED";
    case Status::kRecorded: return "RECORDED";
    case Status::kError: return "ERROR";
  }
  return "?";
}

void sort_reports(std::vector<Report>& reports) {
  std::stable_sort(reports.begin(), reports.end(),
                   [](const Report& a, const Report& b) { return a.check < b.check; });
}

}  // namespace

void Overrides::merge(const Overrides& o) {
  if (o.T) T = o.T;
  if (o.O) O = o.O;
  if (o.D) D = o.D;
  if (o.P) P = o.P;
  if (o.indices) indices = o.indices;
  if (o.format) format = o.format;
}

const std::vector<CheckEntry>& catalog() {
  static const std::vector<CheckEntry> c = build_catalog();
  return c;
}

const CheckEntry* find_check(const std::string& name) {
  for (const auto& e : catalog()) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

Params resolve(const CheckEntry& e, const Overrides& o) {
  Params p = e.defaults;
  if (o.T) p.T = *o.T;
  if (o.O) p.O = *o.O;
  if (o.D) p.D = *o.D;
  if (o.P) p.P = *o.P;
  if (o.indices) p.indices = *o.indices;
  return p;
}

Report run_check(const std::string& name, const Overrides& o) {
  const CheckEntry* e = find_check(name);
  if (!e) return error_report(name, "unknown check '" + name + "'");
  Params p = resolve(*e, o);
  if (p.indices.size() != e->index_names.size()) {
    Report r = error_report(name, "expected " + std::to_string(e->index_names.size()) + " indices, got " +
                                      std::to_string(p.indices.size()));
    r.params = params_json(*e, p);
    return r;
  }
  auto t0 = std::chrono::steady_clock::now();
  Report r;
  try {
    r = e->run(p);
  } catch (const std::exception& ex) {
    r = error_report(name, ex.what());
  }
  r.check = name;
  r.params = params_json(*e, p);
  r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::optional<std::vector<SuiteItem>> suite(const std::string& name) {
  std::vector<SuiteItem> items;
  if (name == "smoke") {
    for (const char* c : {"kp.canonical", "kdv.canonical", "bkp.canonical", "qt.combina", "qt.bracket"}) {
      items.push_back({c, {}});
    }
    return items;
  }
  if (name == "all") {
    for (const auto& e : catalog()) items.push_back({e.name, {}});
    return items;
  }
  return std::nullopt;
}

std::vector<std::string> suite_names() { return {"all", "smoke"}; }

std::string render_json(std::vector<Report> reports) {
  sort_reports(reports);
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& r : reports) arr.push_back(r.to_json());
  return arr.dump(2) + "\n";
}

std::string render_text(std::vector<Report> reports) {
  sort_reports(reports);
  std::ostringstream out;
  std::size_t width = 5;
  for (const auto& r : reports) width = std::max(width, r.check.size());
  auto pad = [](std::string s, std::size_t w) { return s.size() < w ? s + std::string(w - s.size(), ' ') : s; };
  out << pad("STATUS", 10) << pad("CHECK", width + 2) << "PARAMS\n";
  for (const auto& r : reports) {
    std::string params;
    for (const auto& [k, v] : r.params.items()) {
      params += (params.empty() ? "" : " ") + k + "=" + (v.is_string() ? v.get<std::string>() : v.dump());
    }
    std::string row = pad(upper_status(r.status), 10) + pad(r.check, width + 2) + params;
    out << row.substr(0, row.find_last_not_of(' ') + 1) << "\n";
    if (r.certified_range) out << "          range: " << r.certified_range->dump() << "\n";
    for (const auto& d : r.details) out << "          " << d << "\n";
  }
  return out.str();
}

std::string render_catalog_text() {
  std::ostringstream out;
  for (const auto& e : catalog()) {
    out << e.name;
    if (!e.index_names.empty()) {
      out << " [";
      for (std::size_t i = 0; i < e.index_names.size(); ++i) out << (i ? "," : "") << e.index_names[i];
      out << "]";
    }
    out << "\n    " << e.anchor << "\n";
  }
  return out.str();
}

std::string render_catalog_json() {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& e : catalog()) {
    nlohmann::ordered_json defaults = {{"T", e.defaults.T}, {"O", e.defaults.O}, {"D", e.defaults.D},
                                       {"P", e.defaults.P}, {"indices", e.defaults.indices}};
    arr.push_back({{"name", e.name}, {"anchor", e.anchor}, {"indices", e.index_names}, {"defaults", defaults}});
  }
  return arr.dump(2) + "\n";
}

int exit_code(const std::vector<Report>& reports) {
  for (const auto& r : reports) {
    if (!r.ok()) return 1;
  }
  return 0;
}

std::vector<int> parse_indices(const std::string& s) {
  std::vector<int> out;
  std::string t = trim(s);
  if (t.empty()) return out;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_int("indices", trim(item)));
  return out;
}

Overrides parse_config(const std::string& text) {
  Overrides o;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key == "T") o.T = to_int(key, value);
    else if (key == "O") o.O = to_int(key, value);
    else if (key == "D") o.D = to_int(key, value);
    else if (key == "P") o.P = to_int(key, value);
    else if (key == "indices") o.indices = parse_indices(value);
    else if (key == "format") o.format = value;
    else throw std::runtime_error("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
  return o;
}

Overrides load_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace qtverify
