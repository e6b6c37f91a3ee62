#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace taafs {

enum class BasisFamily {
  BSpline,
  Fourier,
  Grbf,
  Legendre,
  Hermite,
  Chebyshev1,
  Chebyshev2,
  Bessel,
  Jacobi,
};

const char* family_name(BasisFamily f);
std::optional<BasisFamily> parse_family(std::string_view name);

/// True for families whose size is set by a grid count (B-spline, GRBF);
/// the remaining families are sized by an order cap.
bool family_uses_grid(BasisFamily f);

/// Describes one basis: the family, its size parameters and the evaluation
/// domain. `degree` is the spline degree p for BSpline and the order cap K
/// everywhere else; `grid_count` is the interval count G for grid families.
struct BasisSpec {
  BasisFamily family = BasisFamily::BSpline;
  int degree = 3;
  int grid_count = 5;
  double domain_lo = -1.0;
  double domain_hi = 1.0;
  double jacobi_alpha = 0.0;
  double jacobi_beta = 0.0;

  /// Length of the basis vector produced by this spec.
  int count() const;

  /// Throws std::invalid_argument on malformed parameters.
  void validate() const;
};

/// Per-family default sized so that a unit carries about eight coefficients.
BasisSpec default_spec(BasisFamily f);

/// Clamped uniform knot vector over the spec domain: degree+1 repeated knots
/// at each end, grid_count-1 equally spaced interior knots. Length is
/// G + 2p + 1, non-decreasing. Only meaningful for the BSpline family.
std::vector<double> make_knot_vector(const BasisSpec& spec);

/// Evaluate every basis function at x into `out` (length spec.count()).
/// Out-of-domain x is clamped to [domain_lo, domain_hi] first. `knots` must
/// come from make_knot_vector for BSpline and may be empty otherwise.
void basis_values(const BasisSpec& spec, std::span<const double> knots,
                  double x, std::span<double> out);

/// First derivative of every basis function at x (clamped the same way;
/// at a clamped point the derivative is taken at the boundary).
void basis_derivatives(const BasisSpec& spec, std::span<const double> knots,
                       double x, std::span<double> out);

std::vector<double> basis_values(const BasisSpec& spec, double x);
std::vector<double> basis_derivatives(const BasisSpec& spec, double x);

}  // namespace taafs
