#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace costab {

/// Name of an indecomposable object: a suspension orbit plus a shift.
/// Sigma acts by shift + 1.
struct IndecId {
  int orbit = 0;
  int shift = 0;
  friend bool operator<(const IndecId& a, const IndecId& b) {
    return a.orbit != b.orbit ? a.orbit < b.orbit : a.shift < b.shift;
  }
  friend bool operator==(const IndecId& a, const IndecId& b) {
    return a.orbit == b.orbit && a.shift == b.shift;
  }
  friend bool operator!=(const IndecId& a, const IndecId& b) { return !(a == b); }
  IndecId suspended(int k = 1) const { return {orbit, shift + k}; }
};

/// Krull-Schmidt normal form of an object: a finitely supported multiset of
/// indecomposable ids. The empty multiset is the zero object.
class FormalObject {
 public:
  FormalObject() = default;
  explicit FormalObject(IndecId id, int mult = 1) {
    if (mult > 0) m_[id] = mult;
  }

  bool is_zero() const { return m_.empty(); }
  int multiplicity(IndecId id) const {
    auto it = m_.find(id);
    return it == m_.end() ? 0 : it->second;
  }
  int total() const {
    int n = 0;
    for (const auto& [id, k] : m_) n += k;
    return n;
  }
  bool is_indecomposable() const { return total() == 1; }
  const std::map<IndecId, int>& mult() const { return m_; }

  void add(IndecId id, int k = 1) {
    if (k == 0) return;
    int& v = m_[id];
    v += k;
    if (v == 0) m_.erase(id);
    else if (v < 0) throw std::invalid_argument("negative multiplicity");
  }

  FormalObject plus(const FormalObject& o) const {
    FormalObject out = *this;
    for (const auto& [id, k] : o.m_) out.add(id, k);
    return out;
  }

  /// Removes o from this multiset; throws if not contained.
  FormalObject minus(const FormalObject& o) const {
    FormalObject out = *this;
    for (const auto& [id, k] : o.m_) {
      if (out.multiplicity(id) < k) throw std::invalid_argument("minus: not a submultiset");
      out.add(id, -k);
    }
    return out;
  }

  bool contains(const FormalObject& o) const {
    for (const auto& [id, k] : o.m_)
      if (multiplicity(id) < k) return false;
    return true;
  }

  FormalObject suspended(int k = 1) const {
    FormalObject out;
    for (const auto& [id, n] : m_) out.m_[id.suspended(k)] = n;
    return out;
  }

  std::vector<IndecId> expand() const {
    std::vector<IndecId> out;
    for (const auto& [id, k] : m_)
      for (int i = 0; i < k; ++i) out.push_back(id);
    return out;
  }

  friend bool operator==(const FormalObject& a, const FormalObject& b) {
    return a.m_ == b.m_;
  }
  friend bool operator!=(const FormalObject& a, const FormalObject& b) {
    return !(a == b);
  }
  friend bool operator<(const FormalObject& a, const FormalObject& b) {
    return a.m_ < b.m_;
  }

 private:
  std::map<IndecId, int> m_;
};

}  // namespace costab
