#include "costab/presentation.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace costab {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

[[noreturn]] void parse_fail(const std::string& path, int line, const std::string& msg) {
  throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
}

}  // namespace

Rat parse_rational(const std::string& s0) {
  std::string s = trim(s0);
  if (s.empty()) throw std::invalid_argument("empty rational literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    boost::multiprecision::cpp_int num(s.substr(0, slash));
    boost::multiprecision::cpp_int den(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator: " + s);
    return Rat(num, den);
  }
  auto dot = s.find('.');
  if (dot != std::string::npos) {
    std::string ip = s.substr(0, dot), fp = s.substr(dot + 1);
    bool neg = !ip.empty() && ip[0] == '-';
    if (neg) ip = ip.substr(1);
    if (ip.empty()) ip = "0";
    // digit-by-digit accumulation (a leading zero in a string literal would
    // make cpp_int parse octal)
    boost::multiprecision::cpp_int num = 0;
    for (char c : ip + fp) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw std::invalid_argument("bad decimal literal: " + s0);
      num = num * 10 + (c - '0');
    }
    boost::multiprecision::cpp_int den = 1;
    for (std::size_t i = 0; i < fp.size(); ++i) den *= 10;
    Rat r(num, den);
    return neg ? -r : r;
  }
  return Rat(boost::multiprecision::cpp_int(s));
}

std::string rational_to_string(const Rat& r) { return r.str(); }

int AlgebraPresentation::vertex_index(const std::string& v) const {
  auto it = std::find(vertex_names.begin(), vertex_names.end(), v);
  if (it == vertex_names.end()) throw std::invalid_argument("unknown vertex: " + v);
  return static_cast<int>(it - vertex_names.begin());
}

int AlgebraPresentation::arrow_index(const std::string& a) const {
  for (std::size_t i = 0; i < arrows.size(); ++i)
    if (arrows[i].label == a) return static_cast<int>(i);
  throw std::invalid_argument("unknown arrow: " + a);
}

void AlgebraPresentation::validate() const {
  if (vertex_names.empty()) throw std::invalid_argument("algebra has no vertices");
  for (const auto& a : arrows) {
    if (a.src < 0 || a.src >= static_cast<int>(vertex_names.size()) ||
        a.tgt < 0 || a.tgt >= static_cast<int>(vertex_names.size()))
      throw std::invalid_argument("arrow endpoint out of range: " + a.label);
  }
  for (const auto& rel : relations) {
    if (rel.empty()) throw std::invalid_argument("empty relation");
    int src = -1, tgt = -1;
    for (const auto& term : rel) {
      if (term.arrows.size() < 2)
        throw std::invalid_argument("relation term of length < 2 (not admissible)");
      int s = arrows[term.arrows.front()].src;
      int t = arrows[term.arrows.back()].tgt;
      for (std::size_t i = 0; i + 1 < term.arrows.size(); ++i)
        if (arrows[term.arrows[i]].tgt != arrows[term.arrows[i + 1]].src)
          throw std::invalid_argument("relation term is not a path");
      if (src == -1) { src = s; tgt = t; }
      else if (s != src || t != tgt)
        throw std::invalid_argument("relation terms have mismatched endpoints");
    }
  }
  if (path_length_bound < 2) throw std::invalid_argument("path length bound too small");
}

namespace {

// One relation term: "[coeff *] arrow [* arrow ...]" where coeff is rational.
RelationTerm parse_term(const AlgebraPresentation& p, std::string term, Rat sign) {
  RelationTerm out;
  out.coeff = sign;
  std::vector<std::string> parts;
  std::stringstream ss(term);
  std::string piece;
  while (std::getline(ss, piece, '*')) parts.push_back(trim(piece));
  std::size_t i = 0;
  if (!parts.empty() && !parts[0].empty() &&
      (std::isdigit(static_cast<unsigned char>(parts[0][0])) || parts[0][0] == '-')) {
    out.coeff *= parse_rational(parts[0]);
    i = 1;
  }
  for (; i < parts.size(); ++i) out.arrows.push_back(p.arrow_index(parts[i]));
  if (out.arrows.empty()) throw std::invalid_argument("relation term has no arrows: " + term);
  return out;
}

Relation parse_relation(const AlgebraPresentation& p, const std::string& line) {
  Relation rel;
  std::string cur;
  Rat sign = 1;
  auto flush = [&]() {
    std::string t = trim(cur);
    if (!t.empty()) rel.push_back(parse_term(p, t, sign));
    cur.clear();
  };
  for (char c : line) {
    if (c == '+') { flush(); sign = 1; }
    else if (c == '-' && trim(cur).empty() && rel.empty() && cur.find('*') == std::string::npos) {
      // leading minus of the first term
      cur += c;
    } else if (c == '-') { flush(); sign = -1; }
    else cur += c;
  }
  flush();
  return rel;
}

}  // namespace

AlgebraPresentation load_algebra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open algebra file: " + path);
  AlgebraPresentation p;
  std::string line, section;
  int lineno = 0;
  std::vector<std::string> relation_lines;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = t.substr(1, t.size() - 2);
      continue;
    }
    if (section.empty()) {
      auto colon = t.find(':');
      if (colon == std::string::npos) parse_fail(path, lineno, "expected key: value");
      std::string key = trim(t.substr(0, colon)), val = trim(t.substr(colon + 1));
      if (key == "algebra-version") {
        if (val != "1") parse_fail(path, lineno, "unsupported algebra-version " + val);
      } else if (key == "name") p.name = val;
      else if (key == "field") p.field = field_from_name(val);
      else if (key == "path-length-bound") p.path_length_bound = std::stoi(val);
      else parse_fail(path, lineno, "unknown key: " + key);
    } else if (section == "vertices") {
      p.vertex_names.push_back(t);
    } else if (section == "arrows") {
      // "label: src -> tgt"
      auto colon = t.find(':');
      auto arrow = t.find("->");
      if (colon == std::string::npos || arrow == std::string::npos)
        parse_fail(path, lineno, "expected 'label: src -> tgt'");
      ArrowDecl a;
      a.label = trim(t.substr(0, colon));
      std::string src = trim(t.substr(colon + 1, arrow - colon - 1));
      std::string tgt = trim(t.substr(arrow + 2));
      a.src = p.vertex_index(src);
      a.tgt = p.vertex_index(tgt);
      p.arrows.push_back(a);
    } else if (section == "relations") {
      relation_lines.push_back(t);
    } else {
      parse_fail(path, lineno, "unknown section [" + section + "]");
    }
  }
  for (const auto& rl : relation_lines) p.relations.push_back(parse_relation(p, rl));
  p.validate();
  return p;
}

void save_algebra(const AlgebraPresentation& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write algebra file: " + path);
  out << "algebra-version: 1\n";
  out << "name: " << p.name << "\n";
  out << "field: " << field_name(p.field) << "\n";
  out << "path-length-bound: " << p.path_length_bound << "\n";
  out << "[vertices]\n";
  for (const auto& v : p.vertex_names) out << v << "\n";
  out << "[arrows]\n";
  for (const auto& a : p.arrows)
    out << a.label << ": " << p.vertex_names[a.src] << " -> " << p.vertex_names[a.tgt] << "\n";
  out << "[relations]\n";
  for (const auto& rel : p.relations) {
    std::string line;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      if (i) line += " + ";
      line += rational_to_string(rel[i].coeff);
      for (int a : rel[i].arrows) line += "*" + p.arrows[a].label;
    }
    out << line << "\n";
  }
}

AlgebraPresentation make_ka2() {
  AlgebraPresentation p;
  p.name = "kA2";
  p.vertex_names = {"1", "2"};
  p.arrows = {{0, 1, "a"}};
  return p;
}

AlgebraPresentation make_dual_numbers() {
  AlgebraPresentation p;
  p.name = "dual_numbers";
  p.vertex_names = {"1"};
  p.arrows = {{0, 0, "X"}};
  Relation r;
  r.push_back({Rat(1), {0, 0}});  // X*X = 0
  p.relations = {r};
  return p;
}

}  // namespace costab
