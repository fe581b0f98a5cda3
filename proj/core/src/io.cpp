#include "kamnf/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "kamnf/errors.hpp"

namespace kamnf::io {

using json = nlohmann::json;
using lattice::Mode;
using lattice::MultiIndex;

namespace {

json mode_json(const Mode& m) {
  json out = json::array();
  for (int i = 0; i < m.dim; ++i) out.push_back(m[i]);
  return out;
}

Mode mode_from(const json& j, int d) {
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ValidationError("mode " + j.dump() + " must be an integer array of length " + std::to_string(d));
  std::vector<int> coords;
  for (const auto& c : j) {
    if (!c.is_number_integer()) throw ValidationError("mode coordinate " + c.dump() + " is not an integer");
    coords.push_back(c.get<int>());
  }
  return Mode::from_span(coords);
}

json multi_json(const MultiIndex& m) {
  json out = json::array();
  for (const auto& [mode, e] : m.entries()) out.push_back(json::array({mode_json(mode), e}));
  return out;
}

MultiIndex multi_from(const json& j, int d) {
  if (!j.is_array()) throw ValidationError("multi-index " + j.dump() + " must be an array");
  MultiIndex out;
  for (const auto& entry : j) {
    if (!entry.is_array() || entry.size() != 2 || !entry[1].is_number_integer() || entry[1].get<int>() < 0)
      throw ValidationError("multi-index entry " + entry.dump() + " must be [mode, exponent >= 0]");
    out.add(mode_from(entry[0], d), entry[1].get<int>());
  }
  return out;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ValidationError(std::string("missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ValidationError(std::string("field '") + key + "' has the wrong type: " + j.at(key).dump());
  }
}

json parse(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
}

json hamiltonian_value(const ham::Hamiltonian& h) {
  const auto& p = h.params();
  json out;
  out["d"] = p.lattice.d;
  out["sigma"] = p.lattice.sigma;
  out["r"] = p.r;
  out["floor_const"] = p.lattice.floor_const;
  out["degree_cap"] = p.degree_cap;
  out["mode_radius"] = p.mode_radius;
  json terms = json::array();
  for (const auto& [key, c] : h) {
    json t;
    t["a"] = multi_json(key.a);
    t["k"] = multi_json(key.k);
    t["k_bar"] = multi_json(key.k_bar);
    json jm = json::array();
    for (const auto& m : key.j) jm.push_back(mode_json(m));
    t["j"] = jm;
    t["re"] = c.real();
    t["im"] = c.imag();
    terms.push_back(std::move(t));
  }
  out["terms"] = std::move(terms);
  return out;
}

json frequency_value(const dioph::FrequencyVector& omega) {
  json list = json::array();
  for (const auto& [n, v] : omega) list.push_back({{"n", mode_json(n)}, {"value", v}});
  const int d = omega.empty() ? 0 : omega.begin()->first.dim;
  return {{"d", d}, {"omega", list}};
}

json mode_map(const std::map<Mode, double>& values) {
  json list = json::array();
  for (const auto& [n, v] : values) list.push_back({{"n", mode_json(n)}, {"value", v}});
  return list;
}

json norms_value(const kam::ClassNorms& c) { return {{"r0", c.r0}, {"r1", c.r1}, {"r2", c.r2}}; }

}  // namespace

std::string hamiltonian_to_json(const ham::Hamiltonian& h) { return hamiltonian_value(h).dump(1) + "\n"; }

ham::Hamiltonian hamiltonian_from_json(std::string_view text) {
  const json j = parse(text);
  ham::HamParams p;
  p.lattice.d = field<int>(j, "d");
  p.lattice.sigma = field<double>(j, "sigma");
  p.lattice.floor_const = field<double>(j, "floor_const");
  p.r = field<double>(j, "r");
  p.degree_cap = field<int>(j, "degree_cap");
  p.mode_radius = field<int>(j, "mode_radius");
  p.validate();
  const auto terms = field<json>(j, "terms");
  if (!terms.is_array()) throw ValidationError("'terms' must be an array");
  std::vector<ham::TermEntry> entries;
  for (const auto& t : terms) {
    std::vector<Mode> jm;
    for (const auto& m : field<json>(t, "j")) jm.push_back(mode_from(m, p.lattice.d));
    auto key = ham::make_key(multi_from(field<json>(t, "a"), p.lattice.d), multi_from(field<json>(t, "k"), p.lattice.d),
                             multi_from(field<json>(t, "k_bar"), p.lattice.d), std::move(jm));
    entries.emplace_back(std::move(key), ham::Complex(field<double>(t, "re"), field<double>(t, "im")));
  }
  return ham::Hamiltonian::from_entries(p, std::move(entries));
}

std::string frequency_to_json(const dioph::FrequencyVector& omega) { return frequency_value(omega).dump(1) + "\n"; }

dioph::FrequencyVector frequency_from_json(std::string_view text) {
  const json j = parse(text);
  const int d = field<int>(j, "d");
  if (d < 1 || d > lattice::kMaxDim) throw ValidationError("frequency file: d out of range");
  dioph::FrequencyVector out;
  for (const auto& e : field<json>(j, "omega")) {
    const Mode n = mode_from(field<json>(e, "n"), d);
    if (!out.emplace(n, field<double>(e, "value")).second)
      throw ValidationError("frequency file: duplicate mode " + lattice::to_string(n));
  }
  return out;
}

std::string step_dump_json(const kam::StepReport& r, const kam::KamState& state) {
  json rep;
  rep["initial"] = r.initial;
  rep["s"] = r.s;
  rep["rho"] = r.rho;
  rep["rho_next"] = r.rho_next;
  rep["eps"] = r.eps;
  rep["eps_next"] = r.eps_next;
  rep["before"] = norms_value(r.before);
  rep["after"] = norms_value(r.after);
  rep["chain_plus"] = norms_value(r.chain_plus);
  rep["nf_chain_plus"] = r.nf_chain_plus;
  rep["min_divisor"] = r.min_divisor;
  rep["min_guard_ratio"] = r.min_guard_ratio;
  rep["homological_residual"] = r.homological_residual;
  rep["eliminated"] = r.eliminated;
  rep["deferred"] = r.deferred;
  rep["deferred_mass"] = r.deferred_mass;
  rep["pruned_mass"] = r.pruned_mass;
  rep["dropped_bound"] = r.dropped_bound;
  rep["tail_bound"] = r.tail_bound;
  rep["error_budget"] = r.error_budget;
  rep["shift_max"] = r.shift_max;
  rep["v_breve_increment"] = r.v_breve_increment;
  rep["hat_change"] = r.hat_change;
  rep["transform_proxy"] = r.transform_proxy;
  rep["freeze_iterations"] = r.freeze_iterations;
  rep["lie_smallness"] = r.lie_smallness;
  rep["terms_after"] = r.terms_after;
  rep["flags"] = {{"r0", r.flags.r0},
                  {"r1", r.flags.r1},
                  {"r2", r.flags.r2},
                  {"transform", r.flags.transform},
                  {"hat_change", r.flags.hat_change},
                  {"shift", r.flags.shift},
                  {"shift_decay", r.flags.shift_decay}};
  rep["hat_part"] = mode_map(r.hat_part);

  json st;
  st["s"] = state.s;
  st["v_breve"] = state.nf.v_breve;
  st["v_hat"] = mode_map(state.nf.v_hat);
  st["v_star"] = mode_map(state.v_star);
  st["omega"] = frequency_value(state.omega);
  st["error_budget"] = state.error_budget;
  st["r0"] = hamiltonian_value(state.r0);
  st["r1"] = hamiltonian_value(state.r1);
  st["r2"] = hamiltonian_value(state.r2);
  return json{{"report", rep}, {"state", st}}.dump(1) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write file '" + path.string() + "'");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
}

}  // namespace kamnf::io
