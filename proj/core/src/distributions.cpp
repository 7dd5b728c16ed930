#include "menuconnect/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "menuconnect/rochet.hpp"

namespace menuconnect {

DensitySpec DensitySpec::uniform_box(bool rescale) {
  DensitySpec spec;
  spec.kind = Kind::uniform_box;
  spec.rescale = rescale;
  return spec;
}

DensitySpec DensitySpec::simplex_rejection() {
  DensitySpec spec;
  spec.kind = Kind::simplex_rejection;
  return spec;
}

DensitySpec DensitySpec::piecewise(std::vector<DensityPiece> pieces,
                                   std::optional<double> bound) {
  DensitySpec spec;
  spec.kind = Kind::piecewise_1d;
  spec.pieces = std::move(pieces);
  spec.density_bound = bound;
  validate_spec(spec);
  return spec;
}

DensitySpec DensitySpec::product(std::vector<DensitySpec> per_buyer) {
  DensitySpec spec;
  spec.kind = Kind::product_of;
  spec.per_buyer = std::move(per_buyer);
  validate_spec(spec);
  return spec;
}

DensitySpec DensitySpec::gapped_uniform() {
  // Breakpoints rendered to binary once, here, so the CDF and the sampler
  // share them bit for bit.
  const double first_edge = 1.0 / 3.0 + 0.15;
  const double second_edge = 2.0 / 3.0 + 0.15;
  return piecewise({{first_edge, 1.5}, {second_edge, 0.0}, {1.0, 1.5}}, 1.5);
}

void validate_spec(const DensitySpec& spec) {
  switch (spec.kind) {
    case DensitySpec::Kind::uniform_box:
    case DensitySpec::Kind::simplex_rejection:
      return;
    case DensitySpec::Kind::piecewise_1d: {
      if (spec.pieces.empty()) throw SpecError("piecewise_1d: no pieces");
      double prev = 0.0;
      double mass = 0.0;
      double sup = 0.0;
      for (const DensityPiece& piece : spec.pieces) {
        if (!(piece.upto > prev && piece.upto <= 1.0 + kSumSlack)) {
          throw SpecError("piecewise_1d: piece edges must increase toward 1");
        }
        if (piece.density < 0.0) throw SpecError("piecewise_1d: negative density");
        mass += piece.density * (piece.upto - prev);
        sup = std::max(sup, piece.density);
        prev = piece.upto;
      }
      if (std::abs(prev - 1.0) > kSumSlack) {
        throw SpecError("piecewise_1d: pieces must cover (0, 1]");
      }
      if (std::abs(mass - 1.0) > 1e-9) {
        throw SpecError("piecewise_1d: density integrates to " + std::to_string(mass) +
                        ", not 1");
      }
      if (spec.density_bound && *spec.density_bound < sup - 1e-12) {
        throw SpecError("density_bound below the realized supremum");
      }
      return;
    }
    case DensitySpec::Kind::product_of: {
      if (spec.per_buyer.empty()) throw SpecError("product_of: no per-buyer specs");
      for (const DensitySpec& buyer : spec.per_buyer) {
        if (buyer.kind == DensitySpec::Kind::product_of) {
          throw SpecError("product_of: nested products are not supported");
        }
        validate_spec(buyer);
      }
      return;
    }
  }
  throw SpecError("unknown density kind");
}

double density_sup(const DensitySpec& spec, int items) {
  if (spec.density_bound) return *spec.density_bound;
  switch (spec.kind) {
    case DensitySpec::Kind::uniform_box:
      // Rescaled draws live on [0, 1/n]^n with constant joint density n^n.
      return spec.rescale ? std::pow(static_cast<double>(items), items) : 1.0;
    case DensitySpec::Kind::simplex_rejection: {
      double factorial = 1.0;
      for (int j = 2; j <= items; ++j) factorial *= j;
      return factorial;
    }
    case DensitySpec::Kind::piecewise_1d: {
      double sup = 0.0;
      for (const DensityPiece& piece : spec.pieces) sup = std::max(sup, piece.density);
      return sup;
    }
    case DensitySpec::Kind::product_of: {
      double product = 1.0;
      for (const DensitySpec& buyer : spec.per_buyer) product *= density_sup(buyer, items);
      return product;
    }
  }
  throw SpecError("unknown density kind");
}

double pdf_1d(const DensitySpec& spec, double t) {
  if (t < 0.0 || t > 1.0) return 0.0;
  switch (spec.kind) {
    case DensitySpec::Kind::uniform_box:
    case DensitySpec::Kind::simplex_rejection:
      return 1.0;  // single item
    case DensitySpec::Kind::piecewise_1d: {
      for (const DensityPiece& piece : spec.pieces) {
        if (t <= piece.upto) return piece.density;
      }
      return spec.pieces.back().density;
    }
    default:
      throw SpecError("pdf_1d: spec is not one-dimensional");
  }
}

double cdf_1d(const DensitySpec& spec, double t) {
  t = std::clamp(t, 0.0, 1.0);
  switch (spec.kind) {
    case DensitySpec::Kind::uniform_box:
    case DensitySpec::Kind::simplex_rejection:
      return t;
    case DensitySpec::Kind::piecewise_1d: {
      double prev = 0.0;
      double mass = 0.0;
      for (const DensityPiece& piece : spec.pieces) {
        if (t <= piece.upto) {
          return mass + piece.density * (t - prev);
        }
        mass += piece.density * (piece.upto - prev);
        prev = piece.upto;
      }
      return 1.0;
    }
    default:
      throw SpecError("cdf_1d: spec is not one-dimensional");
  }
}

namespace {

Valuation sample_single(const DensitySpec& spec, int items, CounterRng& rng) {
  Valuation v;
  v.values.resize(items);
  switch (spec.kind) {
    case DensitySpec::Kind::uniform_box: {
      if (items > 1 && !spec.rescale) {
        throw SpecError("uniform_box with more than one item violates the unit simplex; "
                        "use rescale or simplex_rejection");
      }
      const double scale = spec.rescale ? 1.0 / items : 1.0;
      for (double& x : v.values) x = rng.next_double() * scale;
      return v;
    }
    case DensitySpec::Kind::simplex_rejection: {
      if (items > 4) {
        throw SpecError("simplex_rejection acceptance degrades past 4 items; "
                        "use uniform_box with rescale");
      }
      while (true) {
        double sum = 0.0;
        for (double& x : v.values) {
          x = rng.next_double();
          sum += x;
        }
        if (sum <= 1.0) return v;
      }
    }
    case DensitySpec::Kind::piecewise_1d: {
      if (items != 1) throw SpecError("piecewise_1d is a single-item spec");
      const double u = rng.next_double();
      double prev = 0.0;
      double mass = 0.0;
      for (const DensityPiece& piece : spec.pieces) {
        const double piece_mass = piece.density * (piece.upto - prev);
        if (u <= mass + piece_mass && piece.density > 0.0) {
          v.values[0] = std::min(prev + (u - mass) / piece.density, piece.upto);
          return v;
        }
        mass += piece_mass;
        prev = piece.upto;
      }
      v.values[0] = 1.0;
      return v;
    }
    default:
      throw SpecError("sample: spec is not a per-buyer distribution");
  }
}

Profile sample_profile_impl(const DensitySpec& spec, int buyers, int items, CounterRng& rng) {
  Profile profile;
  profile.buyers.reserve(buyers);
  if (spec.kind == DensitySpec::Kind::product_of) {
    if (static_cast<int>(spec.per_buyer.size()) != buyers) {
      throw SpecError("product_of: spec has " + std::to_string(spec.per_buyer.size()) +
                      " buyers, profile needs " + std::to_string(buyers));
    }
    for (int i = 0; i < buyers; ++i) {
      profile.buyers.push_back(sample_single(spec.per_buyer[i], items, rng));
    }
  } else {
    for (int i = 0; i < buyers; ++i) {
      profile.buyers.push_back(sample_single(spec, items, rng));
    }
  }
  return profile;
}

}  // namespace

Valuation valuation_at(const DensitySpec& spec, std::uint64_t seed, std::uint64_t index,
                       int items) {
  CounterRng rng = CounterRng::substream(seed, index);
  return sample_single(spec, items, rng);
}

Profile profile_at(const DensitySpec& spec, std::uint64_t seed, std::uint64_t index, int buyers,
                   int items) {
  CounterRng rng = CounterRng::substream(seed, index);
  return sample_profile_impl(spec, buyers, items, rng);
}

SeededSampler::SeededSampler(DensitySpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
  validate_spec(spec_);
}

Valuation SeededSampler::sample_valuation(int items) {
  return valuation_at(spec_, seed_, position_++, items);
}

Profile SeededSampler::sample_profile(int buyers, int items) {
  return profile_at(spec_, seed_, position_++, buyers, items);
}

double analytic_revenue_1d(const RochetMenu& menu, const DensitySpec& spec) {
  if (menu.items() != 1) {
    throw PreconditionError("analytic_revenue_1d: menu must have a single item");
  }
  if (spec.kind != DensitySpec::Kind::uniform_box &&
      spec.kind != DensitySpec::Kind::simplex_rejection &&
      spec.kind != DensitySpec::Kind::piecewise_1d) {
    throw SpecError("analytic_revenue_1d: spec is not one-dimensional");
  }

  // Cut [0,1] wherever the utility maximizer or the density can change, then
  // integrate the (constant) winning price piece by piece. The CDF is
  // continuous, so endpoints carry no mass and tie-breaks at the cuts do not
  // affect the integral.
  std::vector<double> cuts = {0.0, 1.0};
  if (spec.kind == DensitySpec::Kind::piecewise_1d) {
    for (const DensityPiece& piece : spec.pieces) {
      if (piece.upto > 0.0 && piece.upto < 1.0) cuts.push_back(piece.upto);
    }
  }
  const int count = menu.option_count();
  for (int a = 0; a < count; ++a) {
    for (int b = a + 1; b < count; ++b) {
      const double slope_gap = menu.options[a].allocation[0] - menu.options[b].allocation[0];
      if (slope_gap == 0.0) continue;
      const double crossing = (menu.options[a].price - menu.options[b].price) / slope_gap;
      if (crossing > 0.0 && crossing < 1.0) cuts.push_back(crossing);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double revenue = 0.0;
  Valuation probe;
  probe.values.resize(1);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double lo = cuts[i];
    const double hi = cuts[i + 1];
    probe.values[0] = 0.5 * (lo + hi);
    const int k = active_option(menu, probe);
    revenue += menu.options[k].price * (cdf_1d(spec, hi) - cdf_1d(spec, lo));
  }
  return revenue;
}

LandscapeGrid landscape_grid(const DensitySpec& spec, std::vector<double> allocations,
                             std::vector<double> prices) {
  LandscapeGrid grid;
  grid.allocations = std::move(allocations);
  grid.prices = std::move(prices);
  grid.revenue.resize(grid.allocations.size() * grid.prices.size());
  RochetMenu menu;
  menu.options = {RochetOption{{0.0}, 0.0}, RochetOption{{0.0}, 0.0}};
  for (std::size_t i = 0; i < grid.allocations.size(); ++i) {
    for (std::size_t j = 0; j < grid.prices.size(); ++j) {
      menu.options[1].allocation[0] = grid.allocations[i];
      menu.options[1].price = grid.prices[j];
      grid.revenue[i * grid.prices.size() + j] = analytic_revenue_1d(menu, spec);
    }
  }
  return grid;
}

}  // namespace menuconnect
