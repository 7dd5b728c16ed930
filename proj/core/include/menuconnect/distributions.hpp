#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "menuconnect/menu.hpp"
#include "menuconnect/rng.hpp"

namespace menuconnect {

struct DensityPiece {
  double upto;     // right edge of the piece; pieces start at 0, last ends at 1
  double density;  // constant on the piece
};

// Valuation distribution F. Per-buyer draws are independent unless the spec
// is a product over buyers.
struct DensitySpec {
  enum class Kind { uniform_box, simplex_rejection, piecewise_1d, product_of };

  Kind kind = Kind::uniform_box;
  bool rescale = false;                 // uniform_box: divide each draw by n
  std::vector<DensityPiece> pieces;     // piecewise_1d only
  std::optional<double> density_bound;  // sup of the density where known
  std::vector<DensitySpec> per_buyer;   // product_of only

  static DensitySpec uniform_box(bool rescale = false);
  static DensitySpec simplex_rejection();
  static DensitySpec piecewise(std::vector<DensityPiece> pieces,
                               std::optional<double> bound = std::nullopt);
  static DensitySpec product(std::vector<DensitySpec> per_buyer);

  // 1-D density 1.5 / 0 / 1.5 with breakpoints 1/3+0.15 and 2/3+0.15: two
  // separated value clusters that give the posted-price revenue two distinct
  // local maxima.
  static DensitySpec gapped_uniform();
};

// Throws SpecError on malformed specs (piecewise not integrating to 1, a
// density above the declared bound, nested products, ...).
void validate_spec(const DensitySpec& spec);

// Largest joint density value, used by the smoothing-gap bounds. Uses the
// declared density_bound when present.
double density_sup(const DensitySpec& spec, int items);

double pdf_1d(const DensitySpec& spec, double t);

// Exact CDF of a 1-D spec; arguments outside [0,1] clamp.
double cdf_1d(const DensitySpec& spec, double t);

// Draw `index` of the stream is a pure function of (seed, index), so samplers
// can be evaluated out of order and in parallel.
Valuation valuation_at(const DensitySpec& spec, std::uint64_t seed, std::uint64_t index,
                       int items);
Profile profile_at(const DensitySpec& spec, std::uint64_t seed, std::uint64_t index, int buyers,
                   int items);

class SeededSampler {
 public:
  SeededSampler(DensitySpec spec, std::uint64_t seed);

  Valuation sample_valuation(int items);
  Profile sample_profile(int buyers, int items);

  const DensitySpec& spec() const { return spec_; }
  std::uint64_t seed() const { return seed_; }
  std::uint64_t position() const { return position_; }

 private:
  DensitySpec spec_;
  std::uint64_t seed_;
  std::uint64_t position_ = 0;
};

// Expected revenue of a single-item posted menu under a 1-D spec, by exact
// interval decomposition of the piecewise-linear utility maximizer.
double analytic_revenue_1d(const RochetMenu& menu, const DensitySpec& spec);

struct LandscapeGrid {
  std::vector<double> allocations;  // x grid
  std::vector<double> prices;       // p grid
  std::vector<double> revenue;      // row-major: revenue[i * prices.size() + j]

  double at(int i, int j) const { return revenue[i * prices.size() + j]; }
};

// Revenue of the one-option menu {(x_i, p_j)} for every grid cell.
LandscapeGrid landscape_grid(const DensitySpec& spec, std::vector<double> allocations,
                             std::vector<double> prices);

}  // namespace menuconnect
