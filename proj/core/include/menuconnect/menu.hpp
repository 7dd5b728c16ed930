#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace menuconnect {

// Slack absorbing floating-point drift on simplex / unit-supply sums,
// e.g. after repeated interpolation.
inline constexpr double kSumSlack = 1e-12;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Structural mismatch between menus that must share a shape.
struct CongruenceError : Error {
  using Error::Error;
};
struct PreconditionError : Error {
  using Error::Error;
};
// Bad or incompatible distribution / config specification.
struct SpecError : Error {
  using Error::Error;
};
// An internal consistency check failed (two routes disagreed, NaN, ...).
struct InvariantError : Error {
  using Error::Error;
};

// Per-item values of one buyer; entries in [0,1] with ||v||_1 <= 1.
struct Valuation {
  std::vector<double> values;

  int items() const { return static_cast<int>(values.size()); }
};

struct Profile {
  std::vector<Valuation> buyers;

  int size() const { return static_cast<int>(buyers.size()); }
};

struct RochetOption {
  std::vector<double> allocation;  // entries in [0,1]
  double price = 0.0;              // nonnegative
};

// Posted-price menu for a single buyer. options[0] is the fixed default
// (zero allocation, price 0) that guarantees individual rationality.
struct RochetMenu {
  std::vector<RochetOption> options;

  int option_count() const { return static_cast<int>(options.size()); }  // K+1
  int regular_count() const { return option_count() - 1; }               // K
  int items() const {
    return options.empty() ? 0 : static_cast<int>(options[0].allocation.size());
  }
};

struct AmaOption {
  std::vector<std::vector<double>> allocation;  // [buyer][item], per-item column sum <= 1
  double boost = 0.0;
};

// Multi-buyer menu with unit buyer weights. options[0] is the all-zero default.
struct AmaMenu {
  std::vector<AmaOption> options;
  int num_buyers = 0;
  int num_items = 0;

  int option_count() const { return static_cast<int>(options.size()); }
  int regular_count() const { return option_count() - 1; }
};

// A broken constraint, reported as data rather than thrown.
struct Violation {
  int option;  // -1 for menu-level problems
  std::string what;
};

std::vector<Violation> validate(const Valuation& v);
std::vector<Violation> validate(const Profile& p);
std::vector<Violation> validate(const RochetMenu& menu);
std::vector<Violation> validate(const AmaMenu& menu);

inline bool is_valid(const RochetMenu& m) { return validate(m).empty(); }
inline bool is_valid(const AmaMenu& m) { return validate(m).empty(); }

void check_congruent(const RochetMenu& a, const RochetMenu& b);
void check_congruent(const AmaMenu& a, const AmaMenu& b);

// Entrywise convex combination lambda*a + (1-lambda)*b over allocations and
// prices/boosts. lambda == 1 returns a exactly, lambda == 0 returns b exactly.
RochetMenu interpolate(const RochetMenu& a, const RochetMenu& b, double lambda);
AmaMenu interpolate(const AmaMenu& a, const AmaMenu& b, double lambda);

// Piecewise-linear curve in menu-parameter space. The P = breakpoints-1
// linear pieces occupy equal t-intervals of length 1/P.
template <class M>
struct MenuPath {
  std::vector<M> breakpoints;

  int pieces() const { return static_cast<int>(breakpoints.size()) - 1; }
};

using RochetPath = MenuPath<RochetMenu>;
using AmaPath = MenuPath<AmaMenu>;

template <class M>
M path_point(const MenuPath<M>& path, double t) {
  if (path.breakpoints.size() < 2) {
    throw PreconditionError("path_point: path needs at least two breakpoints");
  }
  if (!(t >= 0.0 && t <= 1.0)) {
    throw PreconditionError("path_point: t outside [0,1]");
  }
  const int pieces = path.pieces();
  const double scaled = t * pieces;
  const int piece = std::min(static_cast<int>(scaled), pieces - 1);
  const double local = scaled - piece;
  return interpolate(path.breakpoints[piece], path.breakpoints[piece + 1], 1.0 - local);
}

template <class M>
void check_path(const MenuPath<M>& path) {
  if (path.breakpoints.size() < 2) {
    throw PreconditionError("menu path needs at least two breakpoints");
  }
  for (std::size_t i = 1; i < path.breakpoints.size(); ++i) {
    check_congruent(path.breakpoints[0], path.breakpoints[i]);
  }
}

}  // namespace menuconnect
