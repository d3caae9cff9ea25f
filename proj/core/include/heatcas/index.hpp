// Abstract tensor indices.
//
// An index is an integer label plus a variance flag.  A label occurring twice
// inside one term (once up, once down, or twice on positions that are
// contracted through an explicit metric) is a dummy; the heat invariants are
// scalars so fully canonicalized terms contain dummies only.
#pragma once

#include <compare>
#include <cstdint>
#include <vector>

namespace heatcas {

struct Index {
  int id = 0;
  bool up = false;

  auto operator<=>(const Index&) const = default;
};

inline Index up(int id) { return Index{id, true}; }
inline Index dn(int id) { return Index{id, false}; }

// Monotone source of fresh index labels for one expression build.
class IndexGen {
public:
  explicit IndexGen(int first = 0) : next_(first) {}
  int fresh() { return next_++; }
  int peek() const { return next_; }

private:
  int next_;
};

} // namespace heatcas
