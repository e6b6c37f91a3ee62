#include "taafs/basis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace taafs {

namespace {

constexpr double kTwoPi = 6.28318530717958647692528676655900577;

double clamp_to_domain(const BasisSpec& s, double x) {
  return std::clamp(x, s.domain_lo, s.domain_hi);
}

// Small scratch buffer: stack storage for the usual sizes, heap beyond.
class Scratch {
 public:
  explicit Scratch(std::size_t n) {
    if (n > kStack) {
      heap_.assign(n, 0.0);
      data_ = heap_.data();
    } else {
      std::fill(stack_, stack_ + n, 0.0);
      data_ = stack_;
    }
  }
  double* data() { return data_; }
  double& operator[](std::size_t i) { return data_[i]; }

 private:
  static constexpr std::size_t kStack = 64;
  double stack_[kStack];
  std::vector<double> heap_;
  double* data_ = nullptr;
};

// Cox-de Boor triangle up to `degree`, writing all knots.size()-1-degree
// values of N_{i,degree}(u) into `out`. The right domain end is closed so
// the last basis function evaluates to 1 at u = domain_hi.
void cox_de_boor(std::span<const double> knots, int degree, double u,
                 double* out) {
  const int m = static_cast<int>(knots.size()) - 1;
  Scratch n(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) {
    n[i] = (knots[i] <= u && u < knots[i + 1]) ? 1.0 : 0.0;
  }
  if (u >= knots[m]) {
    for (int i = m - 1; i >= 0; --i) {
      if (knots[i] < knots[i + 1]) {
        n[i] = 1.0;
        break;
      }
    }
  }
  for (int k = 1; k <= degree; ++k) {
    // ascending i only reads n[i], n[i+1] from level k-1, so in-place is safe
    for (int i = 0; i + k < m; ++i) {
      double acc = 0.0;
      const double d1 = knots[i + k] - knots[i];
      if (d1 > 0.0) acc += (u - knots[i]) / d1 * n[i];
      const double d2 = knots[i + k + 1] - knots[i + 1];
      if (d2 > 0.0) acc += (knots[i + k + 1] - u) / d2 * n[i + 1];
      n[i] = acc;
    }
  }
  std::copy(n.data(), n.data() + (m - degree), out);
}

void bspline_values_impl(const BasisSpec& s, std::span<const double> knots,
                         double u, std::span<double> out) {
  cox_de_boor(knots, s.degree, u, out.data());
}

void bspline_derivatives_impl(const BasisSpec& s, std::span<const double> knots,
                              double u, std::span<double> out) {
  const int p = s.degree;
  const int count = s.count();
  if (p == 0) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  // N'_{i,p} = p/(u_{i+p}-u_i) N_{i,p-1} - p/(u_{i+p+1}-u_{i+1}) N_{i+1,p-1}
  Scratch lower(knots.size() - static_cast<std::size_t>(p));
  cox_de_boor(knots, p - 1, u, lower.data());
  for (int i = 0; i < count; ++i) {
    double acc = 0.0;
    const double d1 = knots[i + p] - knots[i];
    if (d1 > 0.0) acc += p / d1 * lower[i];
    const double d2 = knots[i + p + 1] - knots[i + 1];
    if (d2 > 0.0) acc -= p / d2 * lower[i + 1];
    out[i] = acc;
  }
}

void fourier_eval(const BasisSpec& s, double x, std::span<double> out,
                  bool derivative) {
  const double omega = kTwoPi / (s.domain_hi - s.domain_lo);
  out[0] = derivative ? 0.0 : 0.5;
  for (int k = 1; k <= s.degree; ++k) {
    const double w = k * omega;
    const double c = std::cos(w * x);
    const double sn = std::sin(w * x);
    if (derivative) {
      out[2 * k - 1] = -w * sn;
      out[2 * k] = w * c;
    } else {
      out[2 * k - 1] = c;
      out[2 * k] = sn;
    }
  }
}

void grbf_eval(const BasisSpec& s, double x, std::span<double> out,
               bool derivative) {
  const double h = (s.domain_hi - s.domain_lo) / s.grid_count;
  const double sigma2 = h * h;
  for (int i = 0; i <= s.grid_count; ++i) {
    const double d = x - (s.domain_lo + i * h);
    const double phi = std::exp(-d * d / (2.0 * sigma2));
    out[i] = derivative ? -d / sigma2 * phi : phi;
  }
}

// Three-term recurrence p_{n+1} = (a x + b) p_n + c p_{n-1} shared by the
// order-based polynomial families.
struct Recurrence {
  double a, b, c;
};

Recurrence recurrence_coef(const BasisSpec& s, int n) {
  switch (s.family) {
    case BasisFamily::Legendre:
      return {(2.0 * n + 1.0) / (n + 1.0), 0.0, -static_cast<double>(n) / (n + 1.0)};
    case BasisFamily::Hermite:  // probabilists' convention
      return {1.0, 0.0, -static_cast<double>(n)};
    case BasisFamily::Chebyshev1:
    case BasisFamily::Chebyshev2:
      return {2.0, 0.0, -1.0};
    case BasisFamily::Bessel:  // Krall-Frink polynomials
      return {2.0 * n + 1.0, 0.0, 1.0};
    case BasisFamily::Jacobi: {
      const double al = s.jacobi_alpha;
      const double be = s.jacobi_beta;
      const double sn = 2.0 * n + al + be;
      const double denom = 2.0 * (n + 1.0) * (n + al + be + 1.0);
      return {(sn + 1.0) * (sn + 2.0) / denom,
              (sn + 1.0) * (al * al - be * be) / (denom * sn),
              -2.0 * (n + al) * (n + be) * (sn + 2.0) / (denom * sn)};
    }
    default:
      throw std::logic_error("recurrence_coef: not an order-based family");
  }
}

// First-order polynomial p_1 and its slope.
void first_poly(const BasisSpec& s, double& p1_at_0, double& p1_slope) {
  switch (s.family) {
    case BasisFamily::Chebyshev2:
      p1_at_0 = 0.0;
      p1_slope = 2.0;
      break;
    case BasisFamily::Bessel:
      p1_at_0 = 1.0;
      p1_slope = 1.0;
      break;
    case BasisFamily::Jacobi:
      p1_at_0 = 0.5 * (s.jacobi_alpha - s.jacobi_beta);
      p1_slope = 0.5 * (s.jacobi_alpha + s.jacobi_beta + 2.0);
      break;
    default:  // Legendre, Hermite, Chebyshev1
      p1_at_0 = 0.0;
      p1_slope = 1.0;
      break;
  }
}

void poly_eval(const BasisSpec& s, double x, std::span<double> out,
               bool derivative) {
  const int count = s.count();
  Scratch val(static_cast<std::size_t>(count));
  Scratch der(derivative ? static_cast<std::size_t>(count) : 1);
  val[0] = 1.0;
  if (derivative) der[0] = 0.0;
  if (count > 1) {
    double p1_0, p1_s;
    first_poly(s, p1_0, p1_s);
    val[1] = p1_0 + p1_s * x;
    if (derivative) der[1] = p1_s;
  }
  for (int n = 1; n + 1 < count; ++n) {
    const Recurrence r = recurrence_coef(s, n);
    val[n + 1] = (r.a * x + r.b) * val[n] + r.c * val[n - 1];
    if (derivative) {
      der[n + 1] = r.a * val[n] + (r.a * x + r.b) * der[n] + r.c * der[n - 1];
    }
  }
  double* src = derivative ? der.data() : val.data();
  std::copy(src, src + count, out.begin());
}

}  // namespace

const char* family_name(BasisFamily f) {
  switch (f) {
    case BasisFamily::BSpline: return "bspline";
    case BasisFamily::Fourier: return "fourier";
    case BasisFamily::Grbf: return "grbf";
    case BasisFamily::Legendre: return "legendre";
    case BasisFamily::Hermite: return "hermite";
    case BasisFamily::Chebyshev1: return "chebyshev1";
    case BasisFamily::Chebyshev2: return "chebyshev2";
    case BasisFamily::Bessel: return "bessel";
    case BasisFamily::Jacobi: return "jacobi";
  }
  return "?";
}

std::optional<BasisFamily> parse_family(std::string_view name) {
  for (BasisFamily f :
       {BasisFamily::BSpline, BasisFamily::Fourier, BasisFamily::Grbf,
        BasisFamily::Legendre, BasisFamily::Hermite, BasisFamily::Chebyshev1,
        BasisFamily::Chebyshev2, BasisFamily::Bessel, BasisFamily::Jacobi}) {
    if (name == family_name(f)) return f;
  }
  return std::nullopt;
}

bool family_uses_grid(BasisFamily f) {
  return f == BasisFamily::BSpline || f == BasisFamily::Grbf;
}

int BasisSpec::count() const {
  switch (family) {
    case BasisFamily::BSpline: return grid_count + degree;
    case BasisFamily::Fourier: return 2 * degree + 1;
    case BasisFamily::Grbf: return grid_count + 1;
    default: return degree + 1;
  }
}

void BasisSpec::validate() const {
  if (!(domain_lo < domain_hi)) {
    throw std::invalid_argument("basis domain: domain_lo must be < domain_hi");
  }
  if (degree < 0) {
    throw std::invalid_argument("basis degree must be non-negative");
  }
  if (family_uses_grid(family) && grid_count < 1) {
    throw std::invalid_argument(std::string(family_name(family)) +
                                ": grid_count must be >= 1");
  }
  if (family == BasisFamily::Jacobi &&
      (jacobi_alpha <= -1.0 || jacobi_beta <= -1.0)) {
    throw std::invalid_argument("jacobi: alpha and beta must be > -1");
  }
}

BasisSpec default_spec(BasisFamily f) {
  BasisSpec s;
  s.family = f;
  switch (f) {
    case BasisFamily::BSpline:
      s.degree = 3;
      s.grid_count = 5;  // 8 basis functions
      break;
    case BasisFamily::Fourier:
      s.degree = 3;  // 7 terms, closest odd count to 8
      break;
    case BasisFamily::Grbf:
      s.grid_count = 7;  // 8 centers
      break;
    default:
      s.degree = 7;  // 8 polynomial orders
      break;
  }
  return s;
}

std::vector<double> make_knot_vector(const BasisSpec& spec) {
  if (spec.family != BasisFamily::BSpline) {
    throw std::invalid_argument("make_knot_vector requires the bspline family");
  }
  spec.validate();
  const int g = spec.grid_count;
  const int p = spec.degree;
  std::vector<double> knots;
  knots.reserve(static_cast<std::size_t>(g + 2 * p + 1));
  for (int i = 0; i < p; ++i) knots.push_back(spec.domain_lo);
  for (int i = 0; i <= g; ++i) {
    const double t = static_cast<double>(i) / g;
    knots.push_back(spec.domain_lo + t * (spec.domain_hi - spec.domain_lo));
  }
  for (int i = 0; i < p; ++i) knots.push_back(spec.domain_hi);
  return knots;
}

void basis_values(const BasisSpec& spec, std::span<const double> knots,
                  double x, std::span<double> out) {
  const double u = clamp_to_domain(spec, x);
  switch (spec.family) {
    case BasisFamily::BSpline: bspline_values_impl(spec, knots, u, out); break;
    case BasisFamily::Fourier: fourier_eval(spec, u, out, false); break;
    case BasisFamily::Grbf: grbf_eval(spec, u, out, false); break;
    default: poly_eval(spec, u, out, false); break;
  }
}

void basis_derivatives(const BasisSpec& spec, std::span<const double> knots,
                       double x, std::span<double> out) {
  const double u = clamp_to_domain(spec, x);
  switch (spec.family) {
    case BasisFamily::BSpline: bspline_derivatives_impl(spec, knots, u, out); break;
    case BasisFamily::Fourier: fourier_eval(spec, u, out, true); break;
    case BasisFamily::Grbf: grbf_eval(spec, u, out, true); break;
    default: poly_eval(spec, u, out, true); break;
  }
}

std::vector<double> basis_values(const BasisSpec& spec, double x) {
  spec.validate();
  std::vector<double> out(static_cast<std::size_t>(spec.count()));
  if (spec.family == BasisFamily::BSpline) {
    const std::vector<double> knots = make_knot_vector(spec);
    basis_values(spec, knots, x, out);
  } else {
    basis_values(spec, {}, x, out);
  }
  return out;
}

std::vector<double> basis_derivatives(const BasisSpec& spec, double x) {
  spec.validate();
  std::vector<double> out(static_cast<std::size_t>(spec.count()));
  if (spec.family == BasisFamily::BSpline) {
    const std::vector<double> knots = make_knot_vector(spec);
    basis_derivatives(spec, knots, x, out);
  } else {
    basis_derivatives(spec, {}, x, out);
  }
  return out;
}

}  // namespace taafs
