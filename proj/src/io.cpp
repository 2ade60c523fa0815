#include "costab/io.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace costab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string piece;
  while (std::getline(ss, piece, sep)) out.push_back(trim(piece));
  return out;
}

struct KvFile {
  std::vector<std::pair<std::string, std::string>> entries;
  std::string path;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  const std::string& need(const std::string& key) const {
    const std::string* v = find(key);
    if (!v) throw std::runtime_error(path + ": missing key '" + key + "'");
    return *v;
  }
};

KvFile read_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  KvFile out;
  out.path = path;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    auto colon = t.find(':');
    if (colon == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key: value");
    out.entries.push_back({trim(t.substr(0, colon)), trim(t.substr(colon + 1))});
  }
  return out;
}

void check_version(const KvFile& f, const std::string& key) {
  if (f.need(key) != "1")
    throw std::runtime_error(f.path + ": unsupported " + key + " " + f.need(key));
}

std::string phase_to_string(const Phase& p) {
  if (p.is_exact()) return p.rat().str();
  std::ostringstream os;
  os << "~" << std::setprecision(17) << p.value();
  return os.str();
}

Phase phase_from_string(const std::string& s) {
  if (!s.empty() && s[0] == '~') return Phase::approx(std::stod(s.substr(1)));
  return Phase::exact(parse_rational(s));
}

}  // namespace

void save_coslicing(const Snapshot& s, const CoSlicing& q, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "coslicing-version: 1\n";
  out << "algebra: " << s.algebra_name << "\n";
  for (const auto& [ph, ids] : q.base_slices()) {
    out << "slice: " << phase_to_string(ph) << " | ";
    for (std::size_t i = 0; i < ids.size(); ++i)
      out << (i ? ", " : "") << s.id_name(ids[i]);
    out << "\n";
  }
}

CoSlicing load_coslicing(const Snapshot& s, const std::string& path) {
  KvFile f = read_kv(path);
  check_version(f, "coslicing-version");
  CoSlicing q;
  for (const auto& [k, v] : f.entries) {
    if (k != "slice") continue;
    auto bar = v.find('|');
    if (bar == std::string::npos)
      throw std::runtime_error(path + ": slice line needs 'phase | ids'");
    Phase base = phase_from_string(trim(v.substr(0, bar)));
    bool bad = base.is_exact() ? (base.rat() <= 0 || base.rat() > 1)
                               : (base.value() <= -Phase::tau ||
                                  base.value() > 1.0 + Phase::tau);
    if (bad)
      throw std::runtime_error(path + ": base phase " + base.str() + " outside (0,1]");
    for (const auto& idtxt : split(v.substr(bar + 1), ',')) {
      if (idtxt.empty()) continue;
      IndecId id = s.parse_id(idtxt);
      if (q.orbit_phase.count(id.orbit))
        throw std::runtime_error(path + ": orbit of " + idtxt +
                                 " assigned to two slices (violates Hom-ordering axioms)");
      q.orbit_phase[id.orbit] = base.plus_int(-id.shift);
    }
  }
  return q;
}

void save_cotstructure(const Snapshot& s, const CoTStructure& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "cotstruct-version: 1\n";
  out << "algebra: " << s.algebra_name << "\n";
  auto list = [&](const std::set<IndecId>& ids) {
    std::string line;
    for (const auto& id : ids) {
      if (!line.empty()) line += ", ";
      line += s.id_name(id);
    }
    return line;
  };
  out << "aisle: " << list(p.aisle) << "\n";
  out << "coaisle: " << list(p.coaisle) << "\n";
}

CoTStructure load_cotstructure(const Snapshot& s, const std::string& path) {
  KvFile f = read_kv(path);
  check_version(f, "cotstruct-version");
  CoTStructure p;
  for (const auto& idtxt : split(f.need("aisle"), ','))
    if (!idtxt.empty()) p.aisle.insert(s.parse_id(idtxt));
  if (const std::string* co = f.find("coaisle")) {
    for (const auto& idtxt : split(*co, ','))
      if (!idtxt.empty()) p.coaisle.insert(s.parse_id(idtxt));
    std::set<IndecId> derived = perp_of(s, p.aisle);
    if (derived != p.coaisle)
      throw std::runtime_error(path +
                               ": coaisle does not match the right perp of the aisle");
  } else {
    p.coaisle = perp_of(s, p.aisle);
  }
  return p;
}

void save_charge(const Snapshot& s, const CentralCharge& z, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "charge-version: 1\n";
  out << std::setprecision(17);
  for (int i = 0; i < s.k0_rank(); ++i)
    out << "charge " << s.k0_basis[i] << ": " << z.on_basis[i].real() << " "
        << z.on_basis[i].imag() << "\n";
}

namespace {

CentralCharge charge_from_kv(const Snapshot& s, const KvFile& f) {
  CentralCharge z;
  z.on_basis.assign(s.k0_rank(), {0, 0});
  std::vector<bool> seen(s.k0_rank(), false);
  for (const auto& [k, v] : f.entries) {
    if (k.rfind("charge ", 0) != 0) continue;
    std::string label = trim(k.substr(7));
    int idx = -1;
    for (int i = 0; i < s.k0_rank(); ++i)
      if (s.k0_basis[i] == label) idx = i;
    if (idx < 0) throw std::runtime_error(f.path + ": unknown K0 basis label " + label);
    std::stringstream ss(v);
    double re, im;
    if (!(ss >> re >> im)) throw std::runtime_error(f.path + ": bad charge value " + v);
    z.on_basis[idx] = {re, im};
    seen[idx] = true;
  }
  for (int i = 0; i < s.k0_rank(); ++i)
    if (!seen[i]) throw std::runtime_error(f.path + ": missing charge for " + s.k0_basis[i]);
  return z;
}

}  // namespace

CentralCharge load_charge(const Snapshot& s, const std::string& path) {
  KvFile f = read_kv(path);
  check_version(f, "charge-version");
  return charge_from_kv(s, f);
}

void save_condition(const Snapshot& s, const CoStabilityCondition& c, const std::string& path,
                    const std::string& coslicing_relpath) {
  namespace fs = std::filesystem;
  fs::path base = fs::path(path).parent_path();
  save_coslicing(s, c.q, (base / coslicing_relpath).string());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "condition-version: 1\n";
  out << "coslicing: " << coslicing_relpath << "\n";
  out << std::setprecision(17);
  for (int i = 0; i < s.k0_rank(); ++i)
    out << "charge " << s.k0_basis[i] << ": " << c.z.on_basis[i].real() << " "
        << c.z.on_basis[i].imag() << "\n";
}

CoStabilityCondition load_condition(const Snapshot& s, const std::string& path) {
  namespace fs = std::filesystem;
  KvFile f = read_kv(path);
  check_version(f, "condition-version");
  CoStabilityCondition c;
  c.z = charge_from_kv(s, f);
  fs::path ref = fs::path(path).parent_path() / f.need("coslicing");
  c.q = load_coslicing(s, ref.string());
  return c;
}

// ---------------------------------------------------------------------------

Report::Report(std::string scenario) {
  lines_.push_back("report-version: 1");
  lines_.push_back("scenario: " + scenario);
}

void Report::field(const std::string& key, const std::string& value) {
  lines_.push_back(key + ": " + value);
}
void Report::field(const std::string& key, long value) {
  lines_.push_back(key + ": " + std::to_string(value));
}
void Report::field(const std::string& key, double value) {
  std::ostringstream os;
  os << std::setprecision(12) << value;
  lines_.push_back(key + ": " + os.str());
}
void Report::note(const std::string& text) { lines_.push_back("note: " + text); }

void Report::check(const std::string& name, bool pass, const std::string& detail) {
  std::string line = "check " + name + ": " + (pass ? "pass" : "fail");
  if (!detail.empty()) line += " | " + detail;
  lines_.push_back(line);
  if (!pass) ++failures_;
}

void Report::check(const std::string& name, const Verdict& v) {
  std::string state;
  switch (v.state) {
    case Verdict::State::Pass: state = "pass"; break;
    case Verdict::State::Fail: state = "fail"; ++failures_; break;
    case Verdict::State::Unverifiable: state = "unverifiable-in-window"; ++failures_; break;
  }
  std::string line = "check " + name + ": " + state;
  if (!v.detail.empty()) line += " | " + v.detail;
  lines_.push_back(line);
}

void Report::window(const Snapshot& s) {
  field("algebra", s.algebra_name);
  field("field", field_name(s.field));
  field("window", "[" + std::to_string(s.window_lo) + ", " + std::to_string(s.window_hi) + "]");
  field("width-bound", static_cast<long>(s.width_bound));
}

std::string Report::text() const {
  std::string out;
  for (const auto& l : lines_) out += l + "\n";
  return out;
}

void Report::write(std::ostream& os) const { os << text(); }

void Report::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write report: " + path);
  out << text();
}

}  // namespace costab
