#include "menuconnect/menu.hpp"

#include <cmath>

namespace menuconnect {

namespace {

bool in_unit_interval(double x) { return x >= 0.0 && x <= 1.0; }

void append(std::vector<Violation>& out, int option, std::string what) {
  out.push_back(Violation{option, std::move(what)});
}

}  // namespace

std::vector<Violation> validate(const Valuation& v) {
  std::vector<Violation> out;
  double sum = 0.0;
  for (std::size_t j = 0; j < v.values.size(); ++j) {
    if (!in_unit_interval(v.values[j])) {
      append(out, -1, "value " + std::to_string(j) + " outside [0,1]");
    }
    sum += v.values[j];
  }
  if (sum > 1.0 + kSumSlack) {
    append(out, -1, "value sum " + std::to_string(sum) + " exceeds the unit simplex");
  }
  return out;
}

std::vector<Violation> validate(const Profile& p) {
  std::vector<Violation> out;
  for (int i = 0; i < p.size(); ++i) {
    for (const Violation& v : validate(p.buyers[i])) {
      append(out, -1, "buyer " + std::to_string(i) + ": " + v.what);
    }
  }
  return out;
}

std::vector<Violation> validate(const RochetMenu& menu) {
  std::vector<Violation> out;
  if (menu.options.empty()) {
    append(out, -1, "menu has no options");
    return out;
  }
  const std::size_t items = menu.options[0].allocation.size();
  const RochetOption& def = menu.options[0];
  bool default_zero = def.price == 0.0;
  for (double a : def.allocation) default_zero = default_zero && a == 0.0;
  if (!default_zero) {
    append(out, 0, "default option must be (0, 0)");
  }
  for (int k = 0; k < menu.option_count(); ++k) {
    const RochetOption& opt = menu.options[k];
    if (opt.allocation.size() != items) {
      append(out, k, "allocation length differs from option 0");
      continue;
    }
    for (std::size_t j = 0; j < items; ++j) {
      if (!in_unit_interval(opt.allocation[j])) {
        append(out, k, "allocation entry " + std::to_string(j) + " outside [0,1]");
      }
    }
    if (opt.price < 0.0) {
      append(out, k, "negative price");
    }
  }
  return out;
}

std::vector<Violation> validate(const AmaMenu& menu) {
  std::vector<Violation> out;
  if (menu.options.empty()) {
    append(out, -1, "menu has no options");
    return out;
  }
  if (menu.num_buyers <= 0 || menu.num_items <= 0) {
    append(out, -1, "menu dimensions not set");
    return out;
  }
  const int m = menu.num_buyers;
  const int n = menu.num_items;
  const AmaOption& def = menu.options[0];
  bool default_zero = def.boost == 0.0;
  for (const auto& row : def.allocation) {
    for (double a : row) default_zero = default_zero && a == 0.0;
  }
  if (!default_zero) {
    append(out, 0, "default option must be (0, 0)");
  }
  for (int k = 0; k < menu.option_count(); ++k) {
    const AmaOption& opt = menu.options[k];
    if (static_cast<int>(opt.allocation.size()) != m) {
      append(out, k, "allocation row count differs from num_buyers");
      continue;
    }
    bool shape_ok = true;
    for (const auto& row : opt.allocation) {
      if (static_cast<int>(row.size()) != n) shape_ok = false;
    }
    if (!shape_ok) {
      append(out, k, "allocation column count differs from num_items");
      continue;
    }
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < n; ++j) {
        if (!in_unit_interval(opt.allocation[i][j])) {
          append(out, k,
                 "allocation entry (" + std::to_string(i) + "," + std::to_string(j) +
                     ") outside [0,1]");
        }
      }
    }
    for (int j = 0; j < n; ++j) {
      double column = 0.0;
      for (int i = 0; i < m; ++i) column += opt.allocation[i][j];
      if (column > 1.0 + kSumSlack) {
        append(out, k, "unit-supply violation at item " + std::to_string(j));
      }
    }
  }
  return out;
}

void check_congruent(const RochetMenu& a, const RochetMenu& b) {
  if (a.option_count() != b.option_count() || a.items() != b.items()) {
    throw CongruenceError("menus are not congruent: " + std::to_string(a.option_count()) +
                          "x" + std::to_string(a.items()) + " vs " +
                          std::to_string(b.option_count()) + "x" + std::to_string(b.items()));
  }
}

void check_congruent(const AmaMenu& a, const AmaMenu& b) {
  if (a.option_count() != b.option_count() || a.num_buyers != b.num_buyers ||
      a.num_items != b.num_items) {
    throw CongruenceError("menus are not congruent");
  }
}

namespace {

double combine(double a, double b, double lambda) { return lambda * a + (1.0 - lambda) * b; }

void check_lambda(double lambda) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw PreconditionError("interpolate: lambda outside [0,1]");
  }
}

}  // namespace

RochetMenu interpolate(const RochetMenu& a, const RochetMenu& b, double lambda) {
  check_congruent(a, b);
  check_lambda(lambda);
  if (lambda == 1.0) return a;
  if (lambda == 0.0) return b;
  RochetMenu out = a;
  for (int k = 0; k < a.option_count(); ++k) {
    RochetOption& opt = out.options[k];
    const RochetOption& bk = b.options[k];
    for (std::size_t j = 0; j < opt.allocation.size(); ++j) {
      opt.allocation[j] = combine(opt.allocation[j], bk.allocation[j], lambda);
    }
    opt.price = combine(opt.price, bk.price, lambda);
  }
  return out;
}

AmaMenu interpolate(const AmaMenu& a, const AmaMenu& b, double lambda) {
  check_congruent(a, b);
  check_lambda(lambda);
  if (lambda == 1.0) return a;
  if (lambda == 0.0) return b;
  AmaMenu out = a;
  for (int k = 0; k < a.option_count(); ++k) {
    AmaOption& opt = out.options[k];
    const AmaOption& bk = b.options[k];
    for (int i = 0; i < a.num_buyers; ++i) {
      for (int j = 0; j < a.num_items; ++j) {
        opt.allocation[i][j] = combine(opt.allocation[i][j], bk.allocation[i][j], lambda);
      }
    }
    opt.boost = combine(opt.boost, bk.boost, lambda);
  }
  return out;
}

}  // namespace menuconnect
