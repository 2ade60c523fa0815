#include "costab/snapshot.hpp"

#include <algorithm>
#include <fstream>
#include <set>
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

}  // namespace

std::string Snapshot::id_name(IndecId id) const {
  return orbits[id.orbit].label + "@" + std::to_string(id.shift);
}

IndecId Snapshot::parse_id(const std::string& s0) const {
  std::string s = trim(s0);
  auto at = s.rfind('@');
  if (at == std::string::npos) throw std::invalid_argument("bad id (missing @): " + s0);
  std::string label = s.substr(0, at);
  int shift = std::stoi(s.substr(at + 1));
  for (int o = 0; o < static_cast<int>(orbits.size()); ++o)
    if (orbits[o].label == label) return {o, shift};
  throw std::invalid_argument("unknown orbit label: " + label);
}

std::string Snapshot::formal_name(const FormalObject& t) const {
  if (t.is_zero()) return "0";
  std::string out;
  for (const auto& [id, k] : t.mult()) {
    if (!out.empty()) out += " + ";
    if (k != 1) out += std::to_string(k) + "*";
    out += id_name(id);
  }
  return out;
}

FormalObject Snapshot::parse_formal(const std::string& s0) const {
  std::string s = trim(s0);
  FormalObject out;
  if (s == "0" || s.empty()) return out;
  for (const auto& term : split(s, '+')) {
    auto star = term.find('*');
    int mult = 1;
    std::string idpart = term;
    if (star != std::string::npos) {
      mult = std::stoi(trim(term.substr(0, star)));
      idpart = trim(term.substr(star + 1));
    }
    out.add(parse_id(idpart), mult);
  }
  return out;
}

std::vector<std::string> Snapshot::validate() const {
  std::vector<std::string> warnings;
  // Sigma-equivariance wherever both pairs are in-window
  for (const auto& [pair, dim] : hom) {
    IndecId sa = pair.first.suspended(), sb = pair.second.suspended();
    if (in_window(sa) && in_window(sb)) {
      auto it = hom.find({sa, sb});
      int other = it == hom.end() ? 0 : it->second;
      if (other != dim)
        throw std::runtime_error("hom table not Sigma-equivariant at " +
                                 id_name(pair.first) + " -> " + id_name(pair.second));
    }
  }
  // K0 additivity over the catalog
  for (const auto& tri : catalog) {
    auto ca = k0_class(tri.a), cb = k0_class(tri.b), cc = k0_class(tri.c);
    for (std::size_t i = 0; i < cb.size(); ++i)
      if (cb[i] != ca[i] + cc[i])
        throw std::runtime_error("catalog triangle violates K0 additivity: " +
                                 formal_name(tri.a) + " -> " + formal_name(tri.b) +
                                 " -> " + formal_name(tri.c));
  }
  // shift-closure of the catalog (rotations are generated lazily; the stored
  // generators should be closed under Sigma wherever the window allows)
  std::set<std::tuple<FormalObject, FormalObject, FormalObject>> triples;
  for (const auto& tri : catalog) triples.insert({tri.a, tri.b, tri.c});
  for (const auto& tri : catalog) {
    FormalObject sa = tri.a.suspended(), sb = tri.b.suspended(), sc = tri.c.suspended();
    if (in_window(sa) && in_window(sb) && in_window(sc) &&
        !triples.count({sa, sb, sc}))
      warnings.push_back("catalog not closed under suspension at triangle " +
                         formal_name(tri.a) + " -> " + formal_name(tri.b) + " -> " +
                         formal_name(tri.c));
  }
  return warnings;
}

void save_snapshot(const Snapshot& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write snapshot file: " + path);
  out << "snapshot-version: 1\n";
  out << "algebra: " << s.algebra_name << "\n";
  out << "field: " << field_name(s.field) << "\n";
  out << "window: " << s.window_lo << " " << s.window_hi << "\n";
  out << "width-bound: " << s.width_bound << "\n";
  out << "catalog-closed: " << (s.catalog_closed ? "yes" : "no") << "\n";
  out << "enumeration-complete: " << (s.enumeration_complete ? "yes" : "no") << "\n";
  out << "[orbits]\n";
  for (const auto& o : s.orbits) {
    out << o.label << " width=" << o.width << " k0=";
    for (std::size_t i = 0; i < o.k0.size(); ++i) out << (i ? "," : "") << o.k0[i];
    out << "\n";
  }
  out << "[ids]\n";
  for (const auto& id : s.all_ids()) out << s.id_name(id) << "\n";
  out << "[suspension]\n";
  for (const auto& id : s.all_ids())
    if (s.in_window(id.suspended()))
      out << s.id_name(id) << " -> " << s.id_name(id.suspended()) << "\n";
  out << "[hom]\n";
  for (const auto& [pair, dim] : s.hom)
    if (dim != 0)
      out << s.id_name(pair.first) << " ; " << s.id_name(pair.second) << " ; " << dim << "\n";
  out << "[triangles]\n";
  for (const auto& tri : s.catalog)
    out << s.formal_name(tri.a) << " | " << s.formal_name(tri.b) << " | "
        << s.formal_name(tri.c) << " | " << tri.witness << "\n";
  out << "[k0]\n";
  for (const auto& b : s.k0_basis) out << b << "\n";
}

Snapshot load_snapshot(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open snapshot file: " + path);
  Snapshot s;
  std::string line, section;
  int lineno = 0;
  std::vector<std::string> hom_lines, tri_lines, id_lines, susp_lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    // note: k0 basis labels look like "[P1]", so only exact section names
    // start a section
    if (t == "[orbits]" || t == "[ids]" || t == "[suspension]" || t == "[hom]" ||
        t == "[triangles]" || t == "[k0]") {
      section = t.substr(1, t.size() - 2);
      continue;
    }
    if (section.empty()) {
      auto colon = t.find(':');
      if (colon == std::string::npos)
        throw std::runtime_error(path + ":" + std::to_string(lineno) + ": expected key: value");
      std::string key = trim(t.substr(0, colon)), val = trim(t.substr(colon + 1));
      if (key == "snapshot-version") {
        if (val != "1")
          throw std::runtime_error("unsupported snapshot-version " + val +
                                   " (schema mismatch)");
      } else if (key == "algebra") s.algebra_name = val;
      else if (key == "field") s.field = field_from_name(val);
      else if (key == "window") {
        std::stringstream ss(val);
        ss >> s.window_lo >> s.window_hi;
      } else if (key == "width-bound") s.width_bound = std::stoi(val);
      else if (key == "catalog-closed") s.catalog_closed = (val == "yes");
      else if (key == "enumeration-complete") s.enumeration_complete = (val == "yes");
      else throw std::runtime_error("unknown snapshot key: " + key);
    } else if (section == "orbits") {
      OrbitInfo o;
      std::stringstream ss(t);
      std::string tok;
      ss >> o.label;
      while (ss >> tok) {
        if (tok.rfind("width=", 0) == 0) o.width = std::stoi(tok.substr(6));
        else if (tok.rfind("k0=", 0) == 0)
          for (const auto& part : split(tok.substr(3), ','))
            o.k0.push_back(std::stol(part));
        else throw std::runtime_error("bad orbit attribute: " + tok);
      }
      s.orbits.push_back(std::move(o));
    } else if (section == "ids") id_lines.push_back(t);
    else if (section == "suspension") susp_lines.push_back(t);
    else if (section == "hom") hom_lines.push_back(t);
    else if (section == "triangles") tri_lines.push_back(t);
    else if (section == "k0") s.k0_basis.push_back(t);
    else throw std::runtime_error("unknown section [" + section + "]");
  }
  // zeros are implicit in the file; fill the full in-window table
  for (const auto& a : s.all_ids())
    for (const auto& b : s.all_ids()) s.hom[{a, b}] = 0;
  for (const auto& h : hom_lines) {
    auto parts = split(h, ';');
    if (parts.size() != 3) throw std::runtime_error("corrupted hom line: " + h);
    s.hom[{s.parse_id(parts[0]), s.parse_id(parts[1])}] = std::stoi(parts[2]);
  }
  for (const auto& tl : tri_lines) {
    auto parts = split(tl, '|');
    if (parts.size() != 4) throw std::runtime_error("corrupted triangle line: " + tl);
    TriangleEntry e;
    e.a = s.parse_formal(parts[0]);
    e.b = s.parse_formal(parts[1]);
    e.c = s.parse_formal(parts[2]);
    e.witness = parts[3];
    s.catalog.push_back(std::move(e));
  }
  // ids / suspension sections are declarative; verify they round-trip
  std::set<std::string> declared(id_lines.begin(), id_lines.end());
  for (const auto& id : s.all_ids())
    if (!declared.count(s.id_name(id)))
      throw std::runtime_error("ids section missing " + s.id_name(id));
  auto warnings = s.validate();
  if (!warnings.empty()) s.catalog_closed = false;
  return s;
}

}  // namespace costab
